"""Entropies and mutual informations of a gate's output with its inputs.

All quantities are in bits and computed by exact enumeration of the joint
table.  The Fourier-side formulas for H(T | X_A) and I(T; X_A) are provided
alongside so the two routes can be compared.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fourier import FourierSpectrum, evaluate
from .gate import UNIFORM, InputMeasure, TruthTable, point_probabilities

# Fourier-side and direct routes must agree to this before a value is returned
CONSISTENCY_TOL = 1e-6


class InconsistencyError(RuntimeError):
    """The Fourier-side and direct computations disagree."""


def binary_entropy(q: float) -> float:
    """h2(q) in bits with 0 log 0 = 0."""
    if q <= 0.0 or q >= 1.0:
        return 0.0
    return -(q * math.log2(q) + (1.0 - q) * math.log2(1.0 - q))


def entropy(probs) -> float:
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


@dataclass(frozen=True)
class JointDistribution:
    """P(t, x) for a deterministic gate; ``table[0]`` is t=+1, ``table[1]`` t=-1."""

    n: int
    table: tuple[tuple[float, ...], tuple[float, ...]]
    gate: str
    measure: InputMeasure

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.table)

    @property
    def p_target(self) -> np.ndarray:
        return self.array.sum(axis=1)

    def marginal(self, group: int) -> np.ndarray:
        """P(t, a) as a (2, 2^n) array indexed by ``x & group`` (unused slots zero)."""
        arr = self.array
        out = np.zeros_like(arr)
        keys = np.arange(1 << self.n) & group
        np.add.at(out.T, keys, arr.T)
        return out


def joint_from_gate(tt: TruthTable, m: InputMeasure = UNIFORM) -> JointDistribution:
    px = point_probabilities(tt.n, m)
    f = np.asarray(tt.outputs)
    plus = np.where(f == 1, px, 0.0)
    minus = np.where(f == -1, px, 0.0)
    return JointDistribution(tt.n, (tuple(plus), tuple(minus)), str(tt), m)


def target_entropy(jd: JointDistribution) -> float:
    return entropy(jd.p_target)


def cond_entropy_direct(jd: JointDistribution, group: int) -> float:
    """H(T | X_A) for the inputs selected by bitmask ``group``."""
    pa = jd.marginal(group)
    total = 0.0
    for a in np.unique(np.arange(1 << jd.n) & group):
        mass = pa[0, a] + pa[1, a]
        if mass > 0:
            total += mass * binary_entropy(pa[0, a] / mass)
    return float(total)


def cond_entropy_fourier(sp: FourierSpectrum, group: int) -> float:
    """E[h2((1 + sum_{S subset A} f^(S) Phi_S(X_A)) / 2)]."""
    kept = tuple(c if (s & ~group) == 0 else 0.0 for s, c in enumerate(sp.coeffs))
    cond_mean = evaluate(FourierSpectrum(sp.n, sp.measure, kept))
    probs = point_probabilities(sp.n, sp.measure)
    q = np.clip((1.0 + cond_mean) / 2.0, 0.0, 1.0)
    return float(sum(w * binary_entropy(v) for w, v in zip(probs, q)))


def mi_direct(jd: JointDistribution, group: int) -> float:
    return target_entropy(jd) - cond_entropy_direct(jd, group)


def mi_fourier(sp: FourierSpectrum, group: int) -> float:
    return binary_entropy((1.0 + sp.coeffs[0]) / 2.0) - cond_entropy_fourier(sp, group)


def mutual_information(jd: JointDistribution, sp: Optional[FourierSpectrum], group: int) -> float:
    """I(T; X_A), cross-checked against the Fourier-side formula when ``sp`` is given."""
    direct = mi_direct(jd, group)
    if sp is not None:
        if sp.measure != jd.measure:
            raise ValueError("spectrum basis does not match the joint distribution's measure")
        other = mi_fourier(sp, group)
        if abs(direct - other) > CONSISTENCY_TOL:
            raise InconsistencyError(
                f"I(T;A={group:b}) direct {direct!r} vs Fourier {other!r} for {jd.gate}")
    return direct


def conditional_mi(jd: JointDistribution, i: int) -> float:
    """I(T; X_i | all other inputs)."""
    full = (1 << jd.n) - 1
    rest = full & ~(1 << i)
    return cond_entropy_direct(jd, rest) - cond_entropy_direct(jd, full)


def conditional_mi_pair(jd: JointDistribution, i: int, given: int) -> float:
    """I(T; X_i | X_given) for single inputs ``i`` and ``given``."""
    return cond_entropy_direct(jd, 1 << given) - cond_entropy_direct(jd, (1 << i) | (1 << given))


def co_information(jd: JointDistribution, tol: float = 1e-12) -> float:
    """I(T;X) - I(T;X|Y), checked against I(T;Y) - I(T;Y|X)."""
    if jd.n != 2:
        raise ValueError("co-information is defined here for two inputs only")
    a = mi_direct(jd, 0b01) - conditional_mi_pair(jd, 0, 1)
    b = mi_direct(jd, 0b10) - conditional_mi_pair(jd, 1, 0)
    if abs(a - b) > tol:
        raise InconsistencyError(f"co-information expressions disagree: {a!r} vs {b!r}")
    return a


@dataclass(frozen=True)
class InfoReport:
    target_entropy: float
    cond_entropy: dict[int, float]
    mutual_information: dict[int, float]
    conditional_mi: tuple[float, ...]
    co_information: Optional[float]

    def to_json(self) -> dict:
        return {
            "H_T": self.target_entropy,
            "H_T_given": {str(k): v for k, v in self.cond_entropy.items()},
            "I_T": {str(k): v for k, v in self.mutual_information.items()},
            "I_T_Xi_given_rest": list(self.conditional_mi),
            "co_information": self.co_information,
        }


def info_report(jd: JointDistribution, sp: Optional[FourierSpectrum] = None) -> InfoReport:
    groups = range(1 << jd.n)
    return InfoReport(
        target_entropy=target_entropy(jd),
        cond_entropy={a: cond_entropy_direct(jd, a) for a in groups},
        mutual_information={a: mutual_information(jd, sp, a) for a in groups},
        conditional_mi=tuple(conditional_mi(jd, i) for i in range(jd.n)),
        co_information=co_information(jd) if jd.n == 2 else None,
    )
