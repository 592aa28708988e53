"""Fourier spectra of Boolean gates under uniform and p-biased product measures.

Coefficients are indexed by subset bitmask ``S`` (bit ``j`` set means
``j in S``).  Under a p-biased measure the basis is the orthonormal product
``prod_{i in S} (x_i - mu) / sigma``; at ``p = 1/2`` it is the parity basis
and every routine below runs the exact same arithmetic as the uniform case.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .gate import UNIFORM, InputMeasure, TruthTable, point_probabilities, points


class SpectrumError(ValueError):
    pass


def popcount(s: int) -> int:
    return bin(s).count("1")


@dataclass(frozen=True)
class FourierSpectrum:
    n: int
    measure: InputMeasure
    coeffs: tuple[float, ...]

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs)

    def __getitem__(self, s: int) -> float:
        return self.coeffs[s]

    def squared(self) -> np.ndarray:
        return self.array ** 2

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "basis": self.measure.to_json(),
            "coeffs": {str(s): c for s, c in enumerate(self.coeffs)},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "FourierSpectrum":
        basis = obj["basis"]
        m = UNIFORM if basis == "uniform" else InputMeasure.pbiased(basis["p"])
        n = int(obj["n"])
        coeffs = [0.0] * (1 << n)
        for k, v in obj["coeffs"].items():
            coeffs[int(k)] = float(v)
        return cls(n, m, tuple(coeffs))


def _basis_values(m: InputMeasure) -> tuple[float, float]:
    """phi(+1), phi(-1) for the single-bit normalized character."""
    mu, sigma = m.mu, m.sigma
    return (1.0 - mu) / sigma, (-1.0 - mu) / sigma


def _butterfly(values: np.ndarray, n: int, a: tuple[float, float], b: tuple[float, float]) -> np.ndarray:
    """Apply the 2x2 map [[a0, a1], [b0, b1]] along every coordinate."""
    # C-order reshape puts bit j of the index on axis n-1-j
    t = values.reshape((2,) * n).astype(float, copy=True)
    for axis in range(n):
        lo = np.take(t, 0, axis=axis)
        hi = np.take(t, 1, axis=axis)
        t = np.stack([a[0] * lo + a[1] * hi, b[0] * lo + b[1] * hi], axis=axis)
    return t.reshape(-1)


def transform(tt: TruthTable, m: InputMeasure = UNIFORM) -> FourierSpectrum:
    """f^(S) = E_m[f(X) Phi_S(X)], computed in O(n 2^n)."""
    p = m.p
    up, dn = _basis_values(m)
    c = _butterfly(tt.array, tt.n, (p, 1.0 - p), (p * up, (1.0 - p) * dn))
    return FourierSpectrum(tt.n, m, tuple(float(v) for v in c))


def _butterfly_batch(values: np.ndarray, n: int, a, b) -> np.ndarray:
    """Row-wise :func:`_butterfly` for a (G, 2^n) array."""
    g = values.shape[0]
    t = values.reshape((g,) + (2,) * n)
    for axis in range(1, n + 1):
        lo = np.take(t, 0, axis=axis)
        hi = np.take(t, 1, axis=axis)
        t = np.stack([a[0] * lo + a[1] * hi, b[0] * lo + b[1] * hi], axis=axis)
    return t.reshape(g, -1)


def transform_batch(outputs: np.ndarray, m: InputMeasure = UNIFORM) -> np.ndarray:
    """Spectra of many gates at once; ``outputs`` has one +-1 truth table per row."""
    outputs = np.asarray(outputs, dtype=float)
    n = outputs.shape[1].bit_length() - 1
    p = m.p
    up, dn = _basis_values(m)
    return _butterfly_batch(outputs, n, (p, 1.0 - p), (p * up, (1.0 - p) * dn))


def transform_integer(outputs: np.ndarray) -> np.ndarray:
    """2^n * f^(S) under the uniform measure, in exact int64 arithmetic (row-wise)."""
    outputs = np.asarray(outputs, dtype=np.int64)
    n = outputs.shape[1].bit_length() - 1
    return _butterfly_batch(outputs, n, (1, 1), (1, -1))


def all_tables(n: int) -> np.ndarray:
    """Every arity-n truth table as rows, in :func:`gate.enumerate_gates` order."""
    size = 1 << n
    k = np.arange(1 << size, dtype=np.int64)[:, None]
    bits = (k >> (size - 1 - np.arange(size))[None, :]) & 1
    return (1 - 2 * bits).astype(np.int8)


def characters(n: int, m: InputMeasure = UNIFORM) -> np.ndarray:
    """Matrix C[x, S] = Phi_S(x)."""
    up, dn = _basis_values(m)
    phi = np.where(points(n) == 1, up, dn)
    masks = (np.arange(1 << n)[:, None] >> np.arange(n)[None, :]) & 1
    # C[x, S] = prod over i in S of phi[x, i]
    return np.prod(np.where(masks[None, :, :] == 1, phi[:, None, :], 1.0), axis=2)


def transform_direct(tt: TruthTable, m: InputMeasure = UNIFORM) -> np.ndarray:
    """Reference O(4^n) transform straight from the definition."""
    w = point_probabilities(tt.n, m) * tt.array
    return w @ characters(tt.n, m)


def transform_exact(tt: TruthTable) -> list[Fraction]:
    """Uniform spectrum in exact dyadic rationals."""
    size = 1 << tt.n
    out = []
    for s in range(size):
        acc = 0
        for x, fx in enumerate(tt.outputs):
            acc += fx if popcount(x & s) % 2 == 0 else -fx
        out.append(Fraction(acc, size))
    return out


def evaluate(sp: FourierSpectrum) -> np.ndarray:
    """Evaluate the multilinear expansion at every vertex (no snapping)."""
    up, dn = _basis_values(sp.measure)
    return _butterfly(sp.array, sp.n, (1.0, up), (1.0, dn))


def inverse_transform(sp: FourierSpectrum, tol: float = 1e-6) -> TruthTable:
    vals = evaluate(sp)
    snapped = np.where(vals >= 0, 1, -1)
    err = float(np.max(np.abs(vals - snapped)))
    if err > tol:
        raise SpectrumError(f"spectrum is not Boolean: max deviation from +-1 is {err:.3g}")
    return TruthTable(sp.n, tuple(int(v) for v in snapped))


def variance(sp: FourierSpectrum) -> float:
    sq = sp.squared()
    return float(sq[1:].sum())


def _inv_var(sp: FourierSpectrum) -> float:
    return 1.0 / sp.measure.sigma ** 2


def influence(sp: FourierSpectrum, i: int) -> float:
    """Probability that flipping input ``i`` flips the output."""
    if not 0 <= i < sp.n:
        raise IndexError(f"variable index {i} out of range for n={sp.n}")
    sq = sp.squared()
    bit = 1 << i
    total = sum(sq[s] for s in range(1 << sp.n) if s & bit)
    return float(total * _inv_var(sp))


def influences(sp: FourierSpectrum) -> list[float]:
    return [influence(sp, i) for i in range(sp.n)]


def influence_group(sp: FourierSpectrum, group: int) -> float:
    sq = sp.squared()
    total = sum(popcount(s & group) * sq[s] for s in range(1 << sp.n))
    return float(total * _inv_var(sp))


def total_influence(sp: FourierSpectrum) -> float:
    return influence_group(sp, (1 << sp.n) - 1)


def _require_uniform(sp: FourierSpectrum) -> None:
    if not sp.measure.is_uniform_equivalent:
        raise SpectrumError("noise stability is only defined for uniform spectra")


def stability(sp: FourierSpectrum, rho: float) -> float:
    if not -1.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [-1, 1], got {rho}")
    _require_uniform(sp)
    sq = sp.squared()
    # explicit degree-0 term keeps rho = 0 well defined
    return float(sum(sq[s] * (1.0 if s == 0 else rho ** popcount(s)) for s in range(1 << sp.n)))


def noise_sensitivity(sp: FourierSpectrum, delta: float) -> float:
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    return 0.5 - 0.5 * stability(sp, 1.0 - 2.0 * delta)


# Direct enumeration counterparts (used by the checks, never by the spectral path).

def flip_influence(tt: TruthTable, i: int, m: InputMeasure = UNIFORM) -> float:
    probs = point_probabilities(tt.n, m)
    bit = 1 << i
    return float(sum(probs[x] for x in range(1 << tt.n) if tt.outputs[x] != tt.outputs[x ^ bit]))


def flip_influence_exact(tt: TruthTable, i: int) -> Fraction:
    bit = 1 << i
    hits = sum(tt.outputs[x] != tt.outputs[x ^ bit] for x in range(1 << tt.n))
    return Fraction(hits, 1 << tt.n)


def influence_exact(tt: TruthTable, i: int) -> Fraction:
    coeffs = transform_exact(tt)
    return sum((c * c for s, c in enumerate(coeffs) if s >> i & 1), Fraction(0))


def total_influence_exact(tt: TruthTable) -> Fraction:
    coeffs = transform_exact(tt)
    return sum((popcount(s) * c * c for s, c in enumerate(coeffs)), Fraction(0))


def noise_kernel(n: int, delta: float) -> np.ndarray:
    """K[x, y] = P(Y = y | X = x) when each bit flips independently w.p. delta."""
    size = 1 << n
    flips = np.array([[popcount(x ^ y) for y in range(size)] for x in range(size)])
    return delta ** flips * (1.0 - delta) ** (n - flips)


def noise_sensitivity_direct(tt: TruthTable, delta: float) -> float:
    k = noise_kernel(tt.n, delta)
    f = tt.array
    differ = f[:, None] != f[None, :]
    return float((k * differ).sum() / (1 << tt.n))


def stability_direct(tt: TruthTable, rho: float) -> float:
    """E[f(X) f(Y)] for uniform X and rho-correlated Y."""
    k = noise_kernel(tt.n, (1.0 - rho) / 2.0)
    f = tt.array
    return float(f @ k @ f / (1 << tt.n))


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float
    holds: bool

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "pass": self.holds}


def classical_bounds(sp: FourierSpectrum, tt: TruthTable, slack: float = 1e-12) -> dict[str, BoundCheck]:
    """Poincare, the edge-isoperimetric bound and, for curated gates, Inf_i <= 1/sqrt(n).

    The edge-isoperimetric bound ``2 a log2(1/a) <= Inf[f]`` is a uniform-measure
    statement and is only reported for uniform spectra.
    """
    from .gate import classify

    out: dict[str, BoundCheck] = {}
    var, tot = variance(sp), total_influence(sp)
    out["poincare"] = BoundCheck("poincare", var, tot, var <= tot + slack)
    if sp.measure.is_uniform_equivalent:
        e = sp.coeffs[0]
        alpha = min((1 + e) / 2, (1 - e) / 2)
        lhs = 0.0 if alpha <= 0 else 2 * alpha * math.log2(1 / alpha)
        out["edge_isoperimetric"] = BoundCheck("edge_isoperimetric", lhs, tot, lhs <= tot + slack)
    cls = classify(tt)
    if cls.is_transitive_symmetric_known and (cls.is_monotone or cls.is_antitone):
        worst = max(influences(sp))
        bound = 1 / math.sqrt(sp.n)
        out["transitive_symmetric"] = BoundCheck("transitive_symmetric", worst, bound,
                                                 worst <= bound + slack)
    return out

