"""Training, the kernel decision rule, bias/slack recovery and KKT diagnostics."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .data import Dataset
from .kernel import KernelKind, KernelSpec, b_matrix, cross_kernel, gram_matrix
from .qp_solver import (DEFAULT_MAX_ITER, DEFAULT_TOL, ConvergenceWarning, DualProblem,
                        DualSolution, TrainingError, dual_objective, solve_smo)

#: threshold on |alpha_i - theta_i| (and on alpha_i, theta_i) for support vectors
SV_EPS = 1e-8


@dataclass(frozen=True)
class TrainConfig:
    kernel: KernelSpec = field(default_factory=KernelSpec.rbf)
    rho1: float = 1.0
    rho2: float = 1.5
    C1: float = 10.0
    C2: float = 100.0
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER

    def __post_init__(self):
        if not (self.rho2 > self.rho1 > 0):
            raise ValueError(f"need rho2 > rho1 > 0, got rho1={self.rho1}, rho2={self.rho2}")
        if not self.C1 > 0 or not self.C2 >= 0:
            raise ValueError(f"need C1 > 0 and C2 >= 0, got C1={self.C1}, C2={self.C2}")
        if not self.tol > 0 or self.max_iter < 1:
            raise ValueError("need tol > 0 and max_iter >= 1")

    @classmethod
    def csvm(cls, C: float = 10.0, kernel: KernelSpec | None = None, **kw) -> "TrainConfig":
        """Classical C-SVM: no upper band penalty and a unit lower margin."""
        return cls(kernel=kernel or KernelSpec.rbf(), rho1=1.0, C1=C, C2=0.0, **kw)


@dataclass(frozen=True, eq=False)
class TrainedModel:
    """A fitted banded SVM.

    Only the support points are needed for prediction; ``full_alpha`` and
    ``full_theta`` are kept for diagnostics when the model comes from
    :func:`train` and are ``None`` for models loaded from disk.
    """

    kernel: KernelSpec
    support_x: np.ndarray
    support_y: np.ndarray
    support_alpha: np.ndarray
    support_theta: np.ndarray
    bias: float
    config: TrainConfig
    converged: bool = True
    dual: DualSolution | None = field(default=None, repr=False)
    meta: dict = field(default_factory=dict)

    @property
    def full_alpha(self):
        return None if self.dual is None else self.dual.alpha

    @property
    def full_theta(self):
        return None if self.dual is None else self.dual.theta

    @property
    def net_coef(self) -> np.ndarray:
        """``alpha_i - theta_i`` for each support point."""
        return self.support_alpha - self.support_theta

    @property
    def dim(self) -> int:
        return self.support_x.shape[1]

    @property
    def n_support(self) -> int:
        return self.support_y.size

    def decision_function(self, X):
        return decision_function(self, X)

    def predict(self, X):
        return predict(self, X)

    def linear_weights(self) -> np.ndarray:
        """Explicit weight vector; only defined for the linear kernel."""
        if self.kernel.kind is not KernelKind.LINEAR:
            raise ValueError("explicit weights exist only for the linear kernel")
        return (self.net_coef * self.support_y) @ self.support_x


def _points(model: TrainedModel, X):
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    X = X.reshape(1, -1) if single else X
    if X.ndim != 2 or X.shape[1] != model.dim:
        raise ValueError(f"expected points of dimension {model.dim}, got shape {np.shape(X)}")
    return X, single


def decision_function(model: TrainedModel, X):
    """``g(x) = sum_i (alpha_i - theta_i) y_i K(x_i, x) + b`` over the support points.

    Accepts one point (returns a float) or an ``(N, m)`` array.
    """
    X, single = _points(model, X)
    if model.n_support == 0:
        g = np.full(X.shape[0], model.bias)
    else:
        g = cross_kernel(model.kernel, X, model.support_x) @ (model.net_coef * model.support_y) + model.bias
    return float(g[0]) if single else g


def predict(model: TrainedModel, X):
    """Class labels; ``g(x) = 0`` is assigned to +1."""
    g = decision_function(model, X)
    labels = np.where(np.asarray(g) >= 0, 1, -1)
    return int(labels) if np.ndim(g) == 0 else labels


def _free_masks(alpha, theta, C1, C2, eps=SV_EPS):
    free_a = (alpha > eps) & (alpha < C1 - eps)
    free_t = (theta > eps) & (theta < C2 - eps)
    return free_a, free_t


def compute_bias(dual: DualSolution, y, K, cfg: TrainConfig) -> float:
    """Average of the bias estimates implied by every free support vector.

    A free alpha point sits exactly on ``y g = rho1`` and a free theta point
    on ``y g = rho2``. At a solution that is only optimal to within
    ``cfg.tol`` the average is clamped to the range of biases for which no
    point breaks its own KKT condition by more than ``tol / 2``. Without
    free points the bias is the midpoint of the interval allowed by the
    bound points.
    """
    y = np.asarray(y, dtype=float)
    f = K @ (dual.net * y)
    free_a, free_t = _free_masks(dual.alpha, dual.theta, cfg.C1, cfg.C2)
    candidates = np.concatenate([y[free_a] * cfg.rho1 - f[free_a],
                                 y[free_t] * cfg.rho2 - f[free_t]])
    lo, hi = bias_interval(dual, y, f, cfg)
    if candidates.size:
        b = float(candidates.mean())
        half = 0.5 * cfg.tol
        if lo - hi <= cfg.tol:
            return float(min(max(b, lo - half), hi + half))
        return float(0.5 * (lo + hi))
    if np.isfinite(lo) and np.isfinite(hi):
        if lo - hi > cfg.tol:
            warnings.warn(f"bound points disagree on the bias by {lo - hi:.3g}", RuntimeWarning, stacklevel=2)
        return float(0.5 * (lo + hi))
    if np.isfinite(lo) or np.isfinite(hi):
        return float(lo if np.isfinite(lo) else hi)
    warnings.warn("bias is unconstrained by the training points; using b = 0", RuntimeWarning, stacklevel=2)
    return 0.0


def bias_interval(dual: DualSolution, y, f, cfg: TrainConfig):
    """``(lo, hi)`` such that ``lo <= b <= hi`` satisfies every point's KKT conditions.

    ``f`` is the kernel expansion without bias at the training points. At an
    inexact solution ``lo`` may exceed ``hi`` by up to the KKT violation.
    """
    a, t = dual.alpha, dual.theta
    at_c1 = a >= cfg.C1 - SV_EPS
    free_a = (a > SV_EPS) & ~at_c1
    # signed decision v = y (f + b) must lie in [v_lo, v_hi]
    v_lo = np.where(at_c1, -np.inf, cfg.rho1)
    v_hi = np.where(at_c1 | free_a, cfg.rho1, np.inf)
    if cfg.C2 > 0:
        at_c2 = t >= cfg.C2 - SV_EPS
        free_t = (t > SV_EPS) & ~at_c2
        v_hi = np.where(at_c2, np.inf, np.minimum(v_hi, cfg.rho2))
        v_lo = np.where(at_c2 | free_t, cfg.rho2, v_lo)
    b_lo = np.where(y > 0, v_lo - f, -v_hi - f)
    b_hi = np.where(y > 0, v_hi - f, -v_lo - f)
    return float(b_lo.max()), float(b_hi.min())


def train(data: Dataset, cfg: TrainConfig | None = None) -> TrainedModel:
    """Fit a banded SVM (a C-SVM when ``cfg.C2 == 0``) to ``data``."""
    cfg = cfg or TrainConfig()
    if data.n_pos == 0 or data.n_neg == 0:
        raise TrainingError("training data must contain both labels")
    K = gram_matrix(cfg.kernel, data.X)
    problem = DualProblem(b_matrix(K, data.y), data.y, cfg.rho1, cfg.rho2, cfg.C1, cfg.C2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ConvergenceWarning)
        sol = solve_smo(problem, tol=cfg.tol, max_iter=cfg.max_iter)
    if not sol.converged:
        warnings.warn(f"training did not converge: KKT violation {sol.max_kkt_violation:.3g} "
                      f"after {sol.iterations} pair updates", ConvergenceWarning, stacklevel=2)
    return model_from_dual(data, cfg, sol, K)


def model_from_dual(data: Dataset, cfg: TrainConfig, sol: DualSolution, K=None) -> TrainedModel:
    """Assemble a model from any dual solution (used for oracle comparisons too)."""
    if K is None:
        K = gram_matrix(cfg.kernel, data.X)
    bias = compute_bias(sol, data.y, K, cfg)
    keep = np.abs(sol.net) > SV_EPS
    meta = {"n": data.n, "dual_objective": sol.objective, "iterations": sol.iterations,
            "max_kkt_violation": sol.max_kkt_violation}
    return TrainedModel(kernel=cfg.kernel, support_x=data.X[keep].copy(), support_y=data.y[keep].copy(),
                        support_alpha=sol.alpha[keep].copy(), support_theta=sol.theta[keep].copy(),
                        bias=bias, config=cfg, converged=sol.converged, dual=sol, meta=meta)


def recover_slacks(model: TrainedModel, data: Dataset):
    """Slack values ``xi = [rho1 - y g]_+`` and ``eta = [y g - rho2]_+``."""
    v = data.y * decision_function(model, data.X)
    return np.maximum(0.0, model.config.rho1 - v), np.maximum(0.0, v - model.config.rho2)


def weight_norm_sq(model: TrainedModel) -> float:
    """``||beta||^2`` through the kernel expansion."""
    c = model.net_coef * model.support_y
    if c.size == 0:
        return 0.0
    return float(c @ gram_matrix(model.kernel, model.support_x) @ c)


def primal_objective(model: TrainedModel, data: Dataset, cfg: TrainConfig | None = None) -> float:
    cfg = cfg or model.config
    xi, eta = recover_slacks(replace(model, config=cfg), data)
    return 0.5 * weight_norm_sq(model) + cfg.C1 * xi.sum() + cfg.C2 * eta.sum()


def dual_on(model: TrainedModel, data: Dataset):
    """Per-point ``(alpha, theta)`` of ``model`` aligned with the rows of ``data``.

    Uses the stored full solution when it matches ``data``; otherwise each
    support point is matched to an identical training row.
    """
    if model.dual is not None and model.dual.alpha.size == data.n:
        return model.dual.alpha, model.dual.theta
    alpha = np.zeros(data.n)
    theta = np.zeros(data.n)
    used = np.zeros(data.n, dtype=bool)
    for x, yl, a, t in zip(model.support_x, model.support_y, model.support_alpha, model.support_theta):
        hits = np.flatnonzero(~used & (data.y == yl) & np.all(data.X == x, axis=1))
        if hits.size == 0:
            raise ValueError("a support point of the model is missing from the data; "
                             "the KKT report needs the training set")
        k = hits[0]
        used[k] = True
        alpha[k], theta[k] = a, t
    return alpha, theta


@dataclass
class KktReport:
    """Residuals of the optimality conditions on a training set.

    Each ``*_residual`` array is per point; ``max_residuals`` collects the
    worst value of each line.
    """

    xi: np.ndarray
    eta: np.ndarray
    slack_sign_residual: np.ndarray        # max(0, -xi, -eta)
    margin_residual: np.ndarray            # max(0, rho1 - y g - xi)
    band_residual: np.ndarray              # max(0, y g - rho2 - eta)
    alpha_comp_residual: np.ndarray        # |alpha (xi - rho1 + y g)|
    theta_comp_residual: np.ndarray        # |theta (eta + rho2 - y g)|
    mu_comp_residual: np.ndarray           # |(C1 - alpha) xi|
    psi_comp_residual: np.ndarray          # |(C2 - theta) eta|
    equality_residual: float
    primal_objective: float
    dual_objective: float
    duality_gap: float
    n_alpha_sv: int
    n_theta_sv: int
    n_free_alpha: int
    n_free_theta: int
    n: int

    RESIDUALS = ("slack_sign_residual", "margin_residual", "band_residual", "alpha_comp_residual",
                 "theta_comp_residual", "mu_comp_residual", "psi_comp_residual")

    @property
    def max_residuals(self) -> dict:
        return {name: float(np.max(getattr(self, name), initial=0.0)) for name in self.RESIDUALS}

    @property
    def max_residual(self) -> float:
        return max(self.max_residuals.values())

    def summary(self) -> dict:
        out = {"n": self.n, "duality_gap": self.duality_gap, "primal_objective": self.primal_objective,
               "dual_objective": self.dual_objective, "equality_residual": self.equality_residual,
               "n_alpha_sv": self.n_alpha_sv, "n_theta_sv": self.n_theta_sv,
               "n_free_alpha": self.n_free_alpha, "n_free_theta": self.n_free_theta}
        out["max_residuals"] = self.max_residuals
        out["max_residual"] = self.max_residual
        return out


def kkt_report(model: TrainedModel, data: Dataset, cfg: TrainConfig | None = None) -> KktReport:
    cfg = cfg or model.config
    alpha, theta = dual_on(model, data)
    v = data.y * decision_function(model, data.X)
    xi = np.maximum(0.0, cfg.rho1 - v)
    eta = np.maximum(0.0, v - cfg.rho2)
    K = gram_matrix(model.kernel, data.X)
    problem = DualProblem(b_matrix(K, data.y), data.y, cfg.rho1, cfg.rho2, cfg.C1, cfg.C2)
    dual = dual_objective(problem, alpha, theta)
    primal = primal_objective(model, data, cfg)
    free_a, free_t = _free_masks(alpha, theta, cfg.C1, cfg.C2)
    return KktReport(
        xi=xi, eta=eta,
        slack_sign_residual=np.maximum(0.0, -np.minimum(xi, eta)) + 0.0,
        margin_residual=np.maximum(0.0, cfg.rho1 - v - xi),
        band_residual=np.maximum(0.0, v - cfg.rho2 - eta),
        alpha_comp_residual=np.abs(alpha * (xi - cfg.rho1 + v)),
        theta_comp_residual=np.abs(theta * (eta + cfg.rho2 - v)),
        mu_comp_residual=np.abs((cfg.C1 - alpha) * xi),
        psi_comp_residual=np.abs((cfg.C2 - theta) * eta),
        equality_residual=float(abs((alpha - theta) @ data.y)),
        primal_objective=primal, dual_objective=dual, duality_gap=primal - dual,
        n_alpha_sv=int((alpha > SV_EPS).sum()), n_theta_sv=int((theta > SV_EPS).sum()),
        n_free_alpha=int(free_a.sum()), n_free_theta=int(free_t.sum()), n=data.n,
    )
