"""Fourier analysis and partial information decomposition of small Boolean gates."""
from .fourier import FourierSpectrum, transform
from .gate import UNIFORM, InputMeasure, TruthTable, classify, enumerate_gates, make_gate
from .info import joint_from_gate
from .mapping import phi_bivariate, phi_trivariate_bounds, solve_trivariate_monotone
from .pid import pid_bivariate, pid_trivariate, psi_sums

__all__ = [
    "FourierSpectrum",
    "InputMeasure",
    "TruthTable",
    "UNIFORM",
    "classify",
    "enumerate_gates",
    "joint_from_gate",
    "make_gate",
    "phi_bivariate",
    "phi_trivariate_bounds",
    "pid_bivariate",
    "pid_trivariate",
    "psi_sums",
    "solve_trivariate_monotone",
    "transform",
]
