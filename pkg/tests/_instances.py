"""Shared problem instances for the test suite."""

import numpy as np

from bsvm import Dataset
from bsvm.kernel import KernelSpec, b_matrix, gram_matrix
from bsvm.qp_solver import DualProblem, project_feasible

TWO_POINT = Dataset(np.array([[1.0, 0.0], [-1.0, 0.0]]), np.array([1.0, -1.0]))


def random_dataset(seed, n_min=8, n_max=30, dim=2):
    """Two overlapping Gaussian classes with roughly balanced labels."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_min, n_max + 1))
    y = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    rng.shuffle(y)
    shift = np.zeros(dim)
    shift[0] = 0.6
    X = 0.8 * rng.normal(size=(n, dim)) + np.outer(y, shift)
    return Dataset(X, y)


def make_problem(data, kernel=KernelSpec.rbf(1.0), rho1=1.0, rho2=1.5, C1=10.0, C2=100.0):
    K = gram_matrix(kernel, data.X)
    return DualProblem(b_matrix(K, data.y), data.y, rho1, rho2, C1, C2)


def random_feasible(p, rng):
    """A random point of the dual feasible set (uniform box draw, then projected)."""
    a = np.concatenate([p.y, -p.y])
    hi = np.concatenate([np.full(p.n, p.C1), np.full(p.n, p.C2)])
    z = project_feasible(rng.uniform(0, 1, 2 * p.n) * hi, a, np.zeros(2 * p.n), hi)
    return z[:p.n], z[p.n:]
