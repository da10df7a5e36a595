"""Banded support vector machines.

The classical C-SVM is the special case ``C2 = 0, rho1 = 1``.
"""

__version__ = "0.1.0"

from .data import Dataset, ToyConfig, generate_toy, read_csv, write_csv
from .evaluation import accuracy, decision_grid, decision_spread, sensitivity_curve
from .kernel import KernelSpec, b_matrix, gram_matrix, kernel_eval
from .model import (KktReport, TrainConfig, TrainedModel, compute_bias, decision_function,
                    kkt_report, predict, primal_objective, recover_slacks, train)
from .persist import load_model, save_model
from .qp_solver import (DualProblem, DualSolution, TrainingError, dual_gradient, dual_objective,
                        solve_projected_gradient, solve_smo)

__all__ = [
    "Dataset", "ToyConfig", "generate_toy", "read_csv", "write_csv",
    "accuracy", "decision_grid", "decision_spread", "sensitivity_curve",
    "KernelSpec", "b_matrix", "gram_matrix", "kernel_eval",
    "KktReport", "TrainConfig", "TrainedModel", "compute_bias", "decision_function",
    "kkt_report", "predict", "primal_objective", "recover_slacks", "train",
    "load_model", "save_model",
    "DualProblem", "DualSolution", "TrainingError", "dual_gradient", "dual_objective",
    "solve_projected_gradient", "solve_smo",
]
