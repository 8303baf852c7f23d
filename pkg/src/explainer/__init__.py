"""Local explanations of detector predictions."""

from .explainer import Explanation, Perturbation, explain, kernel_weights, leave_one_out_deltas, perturb

__all__ = [
    "Explanation",
    "Perturbation",
    "explain",
    "kernel_weights",
    "leave_one_out_deltas",
    "perturb",
]
