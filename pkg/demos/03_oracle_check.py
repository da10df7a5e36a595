# %% [markdown]
# # Checking SMO against the projected-gradient reference
#
# The reference solver works on (alpha, theta) directly with exact
# projections onto the feasible set. It is slow but has no shortcuts, so
# agreement with the SMO solver is a strong correctness check.

# %%
import time

import numpy as np

from bsvm import Dataset, KernelSpec, TrainConfig, b_matrix, gram_matrix
from bsvm.model import model_from_dual
from bsvm.qp_solver import DualProblem, solve_projected_gradient, solve_smo

rng = np.random.default_rng(3)
n = 25
y = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
X = 0.8 * rng.normal(size=(n, 2)) + np.outer(y, [0.6, 0.0])
data = Dataset(X, y)

K = gram_matrix(KernelSpec.rbf(1.0), X)
problem = DualProblem(b_matrix(K, y), y, rho1=1.0, rho2=1.5, C1=10.0, C2=100.0)

# %%
t0 = time.perf_counter()
smo = solve_smo(problem, tol=1e-6)
t1 = time.perf_counter()
ref = solve_projected_gradient(problem, tol=1e-8)
t2 = time.perf_counter()

print(f"SMO      objective={smo.objective:.10f} iterations={smo.iterations:6d} {1e3 * (t1 - t0):7.1f} ms")
print(f"reference objective={ref.objective:.10f} iterations={ref.iterations:6d} {1e3 * (t2 - t1):7.1f} ms")

# %% [markdown]
# The dual may have several optimal (alpha, theta) pairs, so compare what
# matters: the objective and the resulting decision function.

# %%
cfg = TrainConfig(tol=1e-6)
g_smo = model_from_dual(data, cfg, smo, K).decision_function(X)
g_ref = model_from_dual(data, cfg, ref, K).decision_function(X)
print("max |g_smo - g_ref| on training points:", np.max(np.abs(g_smo - g_ref)))
print("max |net coefficient difference|     :", np.max(np.abs(smo.net - ref.net)))
