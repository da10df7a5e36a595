# %% [markdown]
# # The smallest possible problem
#
# Two points on the x-axis, one per class, a linear kernel and no upper
# band (C2 = 0). By symmetry the separating line is x1 = 0 and both points
# sit exactly on the margin, so alpha = (0.5, 0.5) and g(x) = x1.

# %%
import numpy as np

from bsvm import Dataset, KernelSpec, TrainConfig, kkt_report, primal_objective, train

data = Dataset(np.array([[1.0, 0.0], [-1.0, 0.0]]), np.array([1.0, -1.0]))
cfg = TrainConfig.csvm(10.0, kernel=KernelSpec.linear(), tol=1e-10)
model = train(data, cfg)

print("alpha  ", model.full_alpha)
print("theta  ", model.full_theta)
print("bias   ", model.bias)
print("weights", model.linear_weights())

# %% [markdown]
# Dual and primal agree, so the solution is optimal.

# %%
report = kkt_report(model, data)
print("dual   ", report.dual_objective)
print("primal ", primal_objective(model, data))
print("gap    ", report.duality_gap)

# %%
for x in ([0.5, 0.0], [-2.0, 3.0], [0.0, 7.0]):
    print(x, "->", model.decision_function(np.array(x)), model.predict(np.array([x]))[0])
