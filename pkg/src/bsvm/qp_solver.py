"""Solvers for the banded SVM dual problem.

The dual is::

    max  rho1 * sum(alpha) - rho2 * sum(theta) - 0.5 (alpha - theta)' B (alpha - theta)
    s.t. 0 <= alpha <= C1,  0 <= theta <= C2,  (alpha - theta)' y = 0

``solve_smo`` is the production solver. ``solve_projected_gradient`` is a
slow but transparent solver kept as an independent reference.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .kernel import check_labels


class TrainingError(ValueError):
    """Raised when a dual problem cannot produce a usable decision rule."""


class ConvergenceWarning(UserWarning):
    pass


DEFAULT_TOL = 1e-3
DEFAULT_MAX_ITER = 10_000_000


@dataclass(frozen=True, eq=False)
class DualProblem:
    B: np.ndarray
    y: np.ndarray
    rho1: float = 1.0
    rho2: float = 1.5
    C1: float = 10.0
    C2: float = 100.0

    def __post_init__(self):
        y = check_labels(self.y)
        B = np.asarray(self.B, dtype=float)
        if B.shape != (y.size, y.size):
            raise ValueError(f"B has shape {B.shape}, expected {(y.size, y.size)}")
        if not (self.rho2 > self.rho1 > 0):
            raise ValueError(f"need rho2 > rho1 > 0, got rho1={self.rho1}, rho2={self.rho2}")
        if not self.C1 > 0:
            raise ValueError(f"need C1 > 0, got {self.C1}")
        if not self.C2 >= 0:
            raise ValueError(f"need C2 >= 0, got {self.C2}")
        B = B.copy()
        y = y.copy()
        B.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def K(self) -> np.ndarray:
        """Gram matrix recovered from ``B`` (``y_i y_j`` is its own inverse)."""
        return self.B * np.outer(self.y, self.y)

    def equality_tolerance(self) -> float:
        return 1e-10 * self.n * max(self.C1, self.C2)

    def multipliers(self, alpha, theta):
        """Multipliers of the slack positivity constraints, ``(C1 - alpha, C2 - theta)``."""
        return self.C1 - np.asarray(alpha), self.C2 - np.asarray(theta)


@dataclass
class DualSolution:
    alpha: np.ndarray
    theta: np.ndarray
    objective: float
    iterations: int
    max_kkt_violation: float
    converged: bool
    trace: list = field(default_factory=list, repr=False)

    @property
    def net(self) -> np.ndarray:
        """``alpha - theta``, the only combination the decision rule sees."""
        return self.alpha - self.theta


def dual_objective(p: DualProblem, alpha, theta) -> float:
    alpha, theta = _check_pair(p, alpha, theta)
    lam = alpha - theta
    return float(p.rho1 * alpha.sum() - p.rho2 * theta.sum() - 0.5 * lam @ p.B @ lam)


def dual_gradient(p: DualProblem, alpha, theta):
    alpha, theta = _check_pair(p, alpha, theta)
    Bl = p.B @ (alpha - theta)
    return p.rho1 - Bl, Bl - p.rho2


def _check_pair(p, alpha, theta):
    alpha = np.asarray(alpha, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if alpha.shape != (p.n,) or theta.shape != (p.n,):
        raise ValueError(f"alpha/theta must have shape ({p.n},), got {alpha.shape} and {theta.shape}")
    return alpha, theta


def _check_solvable(p: DualProblem, tol, max_iter):
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    if np.all(p.y == p.y[0]):
        raise TrainingError(
            "all training points carry the same label; the equality constraint "
            "forces a degenerate decision rule")


# ---------------------------------------------------------------------------
# SMO on the net variables
# ---------------------------------------------------------------------------
#
# Work with u_i = y_i (alpha_i - theta_i). Then (alpha-theta)'B(alpha-theta) = u'Ku,
# the equality constraint is sum(u) = 0 and the linear part is sum_i s(y_i u_i)
# with s(l) = rho1*l for l >= 0 and rho2*l for l < 0 (concave since rho2 > rho1).
# alpha = max(l, 0), theta = max(-l, 0) with l = y u.


def _slopes(u, y, rho1, rho2):
    """Right and left derivatives of ``s(y*u)`` with respect to ``u``."""
    pos = y > 0
    right = np.where(pos, np.where(u >= 0, rho1, rho2), np.where(u >= 0, -rho2, -rho1))
    left = np.where(pos, np.where(u > 0, rho1, rho2), np.where(u > 0, -rho2, -rho1))
    return right, left


def _s(u, yi, rho1, rho2):
    lam = yi * u
    return rho1 * lam if lam >= 0 else rho2 * lam


def _ds(u, t, yi, rho1, rho2):
    """``s(yi*(u + t)) - s(yi*u)`` without subtracting two large values."""
    l0, l1 = yi * u, yi * (u + t)
    if l0 >= 0 and l1 >= 0:
        return rho1 * (yi * t)
    if l0 <= 0 and l1 <= 0:
        return rho2 * (yi * t)
    return (rho1 * l1 - rho2 * l0) if l1 > 0 else (rho2 * l1 - rho1 * l0)


def _kkt_violation(u, f, y, lo, hi, rho1, rho2):
    right, left = _slopes(u, y, rho1, rho2)
    up = np.where(u < hi, right - f, -np.inf)
    dn = np.where(u > lo, left - f, np.inf)
    return max(float(up.max() - dn.min()), 0.0)


def _pair_step(ui, uj, yi, yj, fi, fj, eta, T, rho1, rho2):
    """Best ``t`` in ``[0, T]`` for the move ``u_i += t, u_j -= t``.

    The 1-D objective is concave and piecewise quadratic with kinks where
    ``u_i + t`` or ``u_j - t`` crosses zero; every piece is maximised in
    closed form and the best candidate wins.
    """
    knots = [0.0, T]
    if 0.0 < -ui < T:
        knots.append(-ui)
    if 0.0 < uj < T:
        knots.append(uj)
    knots.sort()

    dfij = fi - fj

    def gain(t):
        return (_ds(ui, t, yi, rho1, rho2) + _ds(uj, -t, yj, rho1, rho2)
                - t * dfij - 0.5 * eta * t * t)

    best_t, best_gain = 0.0, 0.0
    candidates = list(knots)
    for a, b in zip(knots[:-1], knots[1:]):
        if b <= a:
            continue
        mid = 0.5 * (a + b)
        # slope of the linear part on this piece
        lin = yi * (rho1 if yi * (ui + mid) >= 0 else rho2) - yj * (rho1 if yj * (uj - mid) >= 0 else rho2)
        if eta > 0:
            candidates.append(min(max((lin - dfij) / eta, a), b))
    for t in candidates:
        g = gain(t)
        if g > best_gain:
            best_t, best_gain = t, g
    return best_t, best_gain


def solve_smo(p: DualProblem, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
              trace: bool = False) -> DualSolution:
    """Maximal-violating-pair SMO for the dual.

    Parameters
    ----------
    p : DualProblem
    tol : float
        Stop once the largest first-order KKT violation is at most ``tol``.
    max_iter : int
        Maximum number of pair updates.
    trace : bool
        Record the objective after every pair update in ``DualSolution.trace``.
    """
    _check_solvable(p, tol, max_iter)
    n, y, rho1, rho2 = p.n, p.y, p.rho1, p.rho2
    K = p.K
    diagK = np.diag(K).copy()
    lo = np.where(y > 0, -p.C2, -p.C1)
    hi = np.where(y > 0, p.C1, p.C2)

    u = np.zeros(n)
    f = np.zeros(n)                       # K @ u
    right, left = _slopes(u, y, rho1, rho2)
    can_up = u < hi
    can_dn = u > lo

    obj = 0.0
    history = [obj] if trace else []
    it = 0
    viol = math.inf
    converged = False
    while True:
        gu = np.where(can_up, right - f, -np.inf)
        gd = np.where(can_dn, left - f, np.inf)
        i = int(gu.argmax())
        j = int(gd.argmin())
        viol = float(gu[i] - gd[j])
        if viol <= tol:
            f_exact = K @ u
            if _kkt_violation(u, f_exact, y, lo, hi, rho1, rho2) <= tol:
                converged = True
                break
            # drift in the running gradient; resynchronise and carry on
            f = f_exact
            continue
        if it >= max_iter:
            break
        T = min(hi[i] - u[i], u[j] - lo[j])
        eta = max(diagK[i] + diagK[j] - 2.0 * K[i, j], 0.0)
        t, gain = _pair_step(u[i], u[j], y[i], y[j], f[i], f[j], eta, T, rho1, rho2)
        it += 1
        if t <= 0.0:
            # no ascent available along the selected direction; numerical stall
            break
        ui_new = hi[i] if t == hi[i] - u[i] else u[i] + t
        uj_new = lo[j] if t == u[j] - lo[j] else u[j] - t
        f += t * (K[:, i] - K[:, j])
        u[i], u[j] = ui_new, uj_new
        for k in (i, j):
            r, l = _slopes(u[k:k + 1], y[k:k + 1], rho1, rho2)
            right[k], left[k] = r[0], l[0]
            can_up[k] = u[k] < hi[k]
            can_dn[k] = u[k] > lo[k]
        obj += gain
        if trace:
            history.append(obj)

    lam = y * u
    alpha = np.maximum(lam, 0.0)
    theta = np.maximum(-lam, 0.0)
    f = K @ u
    final_viol = _kkt_violation(u, f, y, lo, hi, rho1, rho2)
    converged = final_viol <= tol
    if not converged:
        warnings.warn(f"SMO stopped after {it} pair updates with KKT violation {final_viol:.3g} > tol={tol:g}",
                      ConvergenceWarning, stacklevel=2)
    return DualSolution(alpha=alpha, theta=theta, objective=dual_objective(p, alpha, theta),
                        iterations=it, max_kkt_violation=final_viol, converged=converged,
                        trace=history)


# ---------------------------------------------------------------------------
# Projected gradient reference solver
# ---------------------------------------------------------------------------


def project_feasible(w, a, lo, hi) -> np.ndarray:
    """Euclidean projection of ``w`` onto ``{z : lo <= z <= hi, a'z = 0}``.

    ``a`` has entries in {-1, +1}. The projection is ``clip(w - mu*a)`` for the
    multiplier ``mu`` that zeroes ``h(mu) = a'clip(w - mu*a)``. ``h`` is
    piecewise linear and nonincreasing with breakpoints where a coordinate
    hits a bound, so ``mu`` is located by evaluating ``h`` at every
    breakpoint and solving the linear piece that changes sign.
    """
    w = np.asarray(w, dtype=float)
    bps = np.unique(np.concatenate([(w - lo) * a, (w - hi) * a]))

    def h(mu):
        return np.clip(w[None, :] - np.asarray(mu)[:, None] * a[None, :], lo, hi) @ a

    hv = h(bps)
    if hv[0] < 0 or hv[-1] > 0:
        raise ValueError("feasible set is empty: the bounds cannot satisfy a'z = 0")
    k = int(np.searchsorted(-hv, 0.0))     # first breakpoint with h <= 0
    if hv[k] == 0.0:
        mu = bps[k]
    else:
        m0, m1, h0, h1 = bps[k - 1], bps[k], hv[k - 1], hv[k]
        # exact on the linear piece between two breakpoints
        mid = 0.5 * (m0 + m1)
        free = (w - mid * a > lo) & (w - mid * a < hi)
        z_mid = np.clip(w - mid * a, lo, hi)
        mu = (a[free] @ w[free] + a[~free] @ z_mid[~free]) / max(free.sum(), 1)
        mu = min(max(mu, m0), m1) if free.any() else m0 + h0 * (m1 - m0) / (h0 - h1)
    return np.clip(w - mu * a, lo, hi)


def solve_projected_gradient(p: DualProblem, tol: float = DEFAULT_TOL,
                             max_iter: int = 1_000_000, trace: bool = False) -> DualSolution:
    """Projected gradient ascent on ``(alpha, theta)`` with backtracking.

    Stops when the projected-gradient residual
    ``max|z - P(z + grad)|`` is at most ``tol``. Every accepted step
    satisfies a sufficient-ascent test, so the objective never decreases.
    """
    _check_solvable(p, tol, max_iter)
    n = p.n
    a = np.concatenate([p.y, -p.y])
    lo = np.zeros(2 * n)
    hi = np.concatenate([np.full(n, p.C1), np.full(n, p.C2)])

    def gradient(z):
        ga, gt = dual_gradient(p, z[:n], z[n:])
        return np.concatenate([ga, gt])

    lipschitz = 2.0 * max(np.linalg.eigvalsh(p.B).max(), 1e-12)
    step = 1.0 / lipschitz
    z = np.zeros(2 * n)
    obj = 0.0
    history = [obj] if trace else []
    residual = math.inf
    it = 0
    while it < max_iter:
        g = gradient(z)
        residual = float(np.abs(z - project_feasible(z + g, a, lo, hi)).max())
        if residual <= tol:
            break
        # shifting g along a leaves the projection unchanged; without the shift,
        # rounding in a'd swamps g'd near the optimum
        free = (z > lo) & (z < hi)
        if free.any():
            g = g - np.mean(a[free] * g[free]) * a
        while True:
            d = project_feasible(z + step * g, a, lo, hi) - z
            dl = d[:n] - d[n:]
            # exact increment of the quadratic objective, free of cancellation
            gain = g @ d - 0.5 * dl @ p.B @ dl
            if gain >= g @ d - (d @ d) / (2.0 * step) or step * lipschitz <= 1.0:
                break
            step *= 0.5
        if gain <= 0.0:
            break
        z = z + d
        obj += gain
        step *= 2.0
        it += 1
        if trace:
            history.append(obj)
    converged = residual <= tol
    if not converged:
        warnings.warn(f"projected gradient stopped after {it} steps with residual {residual:.3g}",
                      ConvergenceWarning, stacklevel=2)
    alpha, theta = z[:n].copy(), z[n:].copy()
    return DualSolution(alpha=alpha, theta=theta, objective=dual_objective(p, alpha, theta),
                        iterations=it, max_kkt_violation=residual, converged=converged,
                        trace=history)
