"""Maps from PID terms to (squared) Fourier coefficients of small gates.

Every map rests on the same chain: the PID identities give conditional
mutual informations ``I(T; X_i | rest)``; those equal ``h(p) Inf_i``; the
influences are linear in the squared spectrum.  Under a p-biased measure
``sigma^2 Inf_i = sum_{S contains i} f^(S)^2`` and, for unate gates,
``|f^({i})| = sigma Inf_i``.

Where a printed closed form disagrees with this chain, the chain is used to
produce values and the printed form is evaluated separately and reported
(``printed_*`` fields, ``printed_formula_discrepancy`` flags).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .gate import UNIFORM, GateClass, InputMeasure
from .pid import PIDBivariate, PIDTrivariate, PsiVector

EQ_TOL = 1e-9
FLAG_TOL = 1e-6

X, Y, XY = 0b01, 0b10, 0b11
# order of the squared-coefficient vector r used by the trivariate maps
TRI_ORDER = (0b111, 0b011, 0b101, 0b110, 0b001, 0b010, 0b100)
TRI_LABELS = ("xyz", "xy", "xz", "yz", "x", "y", "z")


class MappingError(ValueError):
    """A mapping produced values outside the admissible range."""


def _direction_sign(direction: str) -> int:
    if direction == "increasing":
        return 1
    if direction == "decreasing":
        return -1
    raise ValueError(f"direction must be 'increasing' or 'decreasing', got {direction!r}")


def _check_class(gate_class: Optional[GateClass], direction: Optional[str] = None,
                 signs: Optional[Sequence[int]] = None) -> None:
    if gate_class is None:
        return
    if direction == "increasing" and not gate_class.is_monotone:
        raise MappingError("gate is not monotone increasing")
    if direction == "decreasing" and not gate_class.is_antitone:
        raise MappingError("gate is not monotone decreasing")
    if signs is not None:
        if not gate_class.is_unate:
            raise MappingError("gate is not unate")


def _range_check(values: dict[int, float], tol: float = EQ_TOL) -> None:
    for s, v in values.items():
        if not -tol <= v <= 1 + tol:
            raise MappingError(f"squared coefficient for S={s:b} is {v!r}, outside [0, 1]")


def derived_scale(m: InputMeasure) -> float:
    """sigma^2 / h(p): converts I(T; X_i | rest) into sum_{S contains i} f^(S)^2."""
    return m.sigma ** 2 / m.hp


def printed_scale(m: InputMeasure) -> float:
    """sigma / h(p), the prefactor as printed for the squared p-biased maps."""
    return m.sigma / m.hp


@dataclass(frozen=True)
class SquaredSpectrum:
    n: int
    values: dict[int, float]
    ef2: float

    def vector(self) -> np.ndarray:
        v = np.zeros(1 << self.n)
        v[0] = self.ef2
        for s, val in self.values.items():
            v[s] = val
        return v

    def residual(self, actual_squared: np.ndarray) -> float:
        act = np.asarray(actual_squared)
        return float(max(abs(v - act[s]) for s, v in self.values.items()))

    def to_json(self) -> dict:
        return {"ef2": self.ef2, "values": {str(s): v for s, v in sorted(self.values.items())}}


def _bivariate_squared(pid: PIDBivariate, ef2: float, scale: float) -> dict[int, float]:
    k = scale * (2 * pid.CI + pid.UI_X + pid.UI_Y)
    return {
        XY: k + ef2 - 1,
        X: 1 - scale * (pid.CI + pid.UI_Y) - ef2,
        Y: 1 - scale * (pid.CI + pid.UI_X) - ef2,
    }


def phi_bivariate(pid: PIDBivariate, ef2: float) -> SquaredSpectrum:
    values = _bivariate_squared(pid, ef2, 1.0)
    _range_check(values)
    return SquaredSpectrum(2, values, ef2)


def phi_bivariate_stab(pid: PIDBivariate, stab_minus1: float, ef2: Optional[float] = None) -> SquaredSpectrum:
    """Variant parameterized by Stab_{-1}[f] instead of E[f]^2."""
    c = (1 - stab_minus1) / 4
    values = {
        XY: pid.CI + pid.UI_X / 2 + pid.UI_Y / 2 - c,
        X: pid.UI_X / 2 - pid.UI_Y / 2 + c,
        Y: -pid.UI_X / 2 + pid.UI_Y / 2 + c,
    }
    _range_check(values)
    if ef2 is None:
        ef2 = 1 - sum(values.values())
    return SquaredSpectrum(2, values, ef2)


def p_biased_bivariate(pid: PIDBivariate, ef2: float, m: InputMeasure) -> SquaredSpectrum:
    values = _bivariate_squared(pid, ef2, derived_scale(m))
    _range_check(values)
    return SquaredSpectrum(2, values, ef2)


def printed_p_biased_bivariate(pid: PIDBivariate, ef2: float, m: InputMeasure) -> SquaredSpectrum:
    """Same shape with the printed sigma/h(p) prefactor; not range-checked."""
    return SquaredSpectrum(2, _bivariate_squared(pid, ef2, printed_scale(m)), ef2)


@dataclass(frozen=True)
class SignedBivariate:
    """Signed first-order coefficients and the degree-2 magnitude they imply."""

    first_order: dict[int, float]
    pair_from_x: float
    pair_from_y: float
    consistency_lhs: float
    consistency_rhs: float
    printed_pair_from_x: float
    printed_pair_from_y: float

    @property
    def consistency_residual(self) -> float:
        return abs(self.consistency_lhs - self.consistency_rhs)

    @property
    def pair_squared(self) -> float:
        return self.pair_from_x

    @property
    def printed_formula_discrepancy(self) -> bool:
        return (abs(self.printed_pair_from_x - self.pair_from_x) > FLAG_TOL
                or abs(self.printed_pair_from_y - self.pair_from_y) > FLAG_TOL)

    def to_json(self) -> dict:
        return {
            "first_order": {str(s): v for s, v in self.first_order.items()},
            "pair_squared": [self.pair_from_x, self.pair_from_y],
            "consistency_residual": self.consistency_residual,
            "printed_pair_squared": [self.printed_pair_from_x, self.printed_pair_from_y],
            "printed_formula_discrepancy": self.printed_formula_discrepancy,
        }


def _signed_bivariate(pid: PIDBivariate, signs: Sequence[int], m: InputMeasure) -> SignedBivariate:
    sigma, h = m.sigma, m.hp
    sx, sy = pid.CI + pid.UI_X, pid.CI + pid.UI_Y
    fx = signs[0] * sigma / h * sx
    fy = signs[1] * sigma / h * sy
    # sigma^2 Inf_i = f^(i)^2 + f^(xy)^2 with |f^(i)| = sigma Inf_i
    pair_x = abs(fx) * (sigma - abs(fx))
    pair_y = abs(fy) * (sigma - abs(fy))
    return SignedBivariate(
        first_order={X: fx, Y: fy},
        pair_from_x=pair_x,
        pair_from_y=pair_y,
        consistency_lhs=sx * (h - sx),
        consistency_rhs=sy * (h - sy),
        printed_pair_from_x=fx * (1 - fx),
        printed_pair_from_y=fy * (1 - fy),
    )


def phi_bivariate_monotone(pid: PIDBivariate, direction: str,
                           gate_class: Optional[GateClass] = None) -> SignedBivariate:
    sign = _direction_sign(direction)
    _check_class(gate_class, direction)
    return _signed_bivariate(pid, (sign, sign), UNIFORM)


def phi_bivariate_unate(pid: PIDBivariate, a: Sequence[int],
                        gate_class: Optional[GateClass] = None) -> SignedBivariate:
    _check_class(gate_class, signs=a)
    return _signed_bivariate(pid, tuple(a), UNIFORM)


def p_biased_bivariate_monotone(pid: PIDBivariate, m: InputMeasure, direction: str,
                                gate_class: Optional[GateClass] = None) -> SignedBivariate:
    sign = _direction_sign(direction)
    _check_class(gate_class, direction)
    return _signed_bivariate(pid, (sign, sign), m)


def p_biased_bivariate_unate(pid: PIDBivariate, m: InputMeasure, a: Sequence[int],
                             gate_class: Optional[GateClass] = None) -> SignedBivariate:
    _check_class(gate_class, signs=a)
    return _signed_bivariate(pid, tuple(a), m)


# Trivariate bounds.  Rows give 8 * Phi_i as integer combinations of the d-vector
# (CI_xyz, CI_xy, CI_xz, CI_yz, CI_xy,xz, CI_xy,yz, CI_xz,yz, UI_x, UI_y, UI_z).
PHI_ROWS = np.array([
    [3, 2, 2, 2, 1, 1, 1, 1, 1, 1],
    [2, 4, 0, 0, 2, 2, -2, 2, 2, -2],
    [2, 0, 4, 0, 2, -2, 2, 2, -2, 2],
    [2, 0, 0, 4, -2, 2, 2, -2, 2, 2],
    [1, 2, 2, -2, 3, -1, -1, 3, -1, -1],
    [1, 2, -2, 2, -1, 3, -1, -1, 3, -1],
    [1, -2, 2, 2, -1, -1, 3, -1, -1, 3],
], dtype=float) / 8.0
LOWER_OFFSET = np.full(7, -2 / 8)
UPPER_OFFSET = np.array([5, 4, 4, 4, 5, 5, 5]) / 8
# Phi entries the printed p-biased list leaves out (filled from the uniform rows)
RECONSTRUCTED_PBIASED = (3, 4)

# Linear maps between the d-vector, the conditional MIs and the squared spectrum.
A_D = np.array([
    [1, 1, 1, 0, 1, 0, 0, 1, 0, 0],
    [1, 1, 0, 1, 0, 1, 0, 0, 1, 0],
    [1, 0, 1, 1, 0, 0, 1, 0, 0, 1],
], dtype=float)
A_R = np.array([
    [1, 1, 1, 0, 1, 0, 0],
    [1, 1, 0, 1, 0, 1, 0],
    [1, 0, 1, 1, 0, 0, 1],
], dtype=float)


@dataclass(frozen=True)
class CoefficientBounds:
    centers: tuple[float, ...]
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    scale: float
    scale_rule: str = "derived"
    reconstructed: tuple[int, ...] = ()

    def interval(self, s: int) -> tuple[float, float]:
        k = TRI_ORDER.index(s)
        return self.lower[k], self.upper[k]

    def slack(self, actual_squared: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(actual - lower, upper - actual) per entry of TRI_ORDER."""
        act = np.array([actual_squared[s] for s in TRI_ORDER])
        return act - np.array(self.lower), np.array(self.upper) - act

    def contains(self, actual_squared: np.ndarray, tol: float = EQ_TOL) -> bool:
        lo, hi = self.slack(actual_squared)
        return bool((lo >= -tol).all() and (hi >= -tol).all())

    def to_json(self) -> dict:
        return {
            "order": list(TRI_LABELS),
            "phi": list(self.centers),
            "lower": list(self.lower),
            "upper": list(self.upper),
            "scale": self.scale,
            "scale_rule": self.scale_rule,
            "reconstructed": [f"Phi_{k}" for k in self.reconstructed],
        }


def phi_values(d_vector: Sequence[float], scale: float = 1.0) -> np.ndarray:
    return scale * (PHI_ROWS @ np.asarray(d_vector, dtype=float))


def phi_trivariate_bounds(pid3: PIDTrivariate, m: InputMeasure = UNIFORM,
                          scale_rule: str = "derived") -> CoefficientBounds:
    """Intervals [Phi_i - 2/8, Phi_i + 5/8] (pairs: + 4/8) for each squared coefficient."""
    if m.is_uniform_equivalent:
        scale = 1.0
    elif scale_rule == "derived":
        scale = derived_scale(m)
    elif scale_rule == "printed":
        scale = printed_scale(m)
    else:
        raise ValueError(f"unknown scale rule {scale_rule!r}")
    centers = phi_values(pid3.d_vector, scale)
    recon = RECONSTRUCTED_PBIASED if (m.biased and scale_rule == "printed") else ()
    return CoefficientBounds(
        centers=tuple(float(v) for v in centers),
        lower=tuple(float(v) for v in centers + LOWER_OFFSET),
        upper=tuple(float(v) for v in centers + UPPER_OFFSET),
        scale=scale,
        scale_rule=scale_rule,
        reconstructed=recon,
    )


def projection_residual(actual_squared: np.ndarray) -> np.ndarray:
    """(I - A_r^+ A_r) r for the squared spectrum r in TRI_ORDER."""
    r = np.array([actual_squared[s] for s in TRI_ORDER])
    proj = np.eye(7) - np.linalg.pinv(A_R) @ A_R
    return proj @ r


def psi_from_d_vector(pid3: PIDTrivariate) -> PsiVector:
    return PsiVector(tuple(float(v) for v in A_D @ np.asarray(pid3.d_vector)))


@dataclass(frozen=True)
class TrivariateSpectrum:
    """Signed constant and first-order terms plus higher-order squared terms."""

    ef: float
    first_order: dict[int, float]
    squared: dict[int, float]
    system_residual: float

    def squared_vector(self) -> np.ndarray:
        v = np.zeros(8)
        v[0] = self.ef ** 2
        for s, c in self.first_order.items():
            v[s] = c * c
        for s, val in self.squared.items():
            v[s] = val
        return v

    def signed_residual(self, actual: Sequence[float]) -> float:
        """Max deviation over signed first-order and squared higher-order terms."""
        act = np.asarray(actual)
        errs = [abs(self.ef - act[0])]
        errs += [abs(c - act[s]) for s, c in self.first_order.items()]
        errs += [abs(v - act[s] ** 2) for s, v in self.squared.items()]
        return float(max(errs))

    def to_json(self) -> dict:
        return {
            "ef": self.ef,
            "first_order": {str(s): v for s, v in self.first_order.items()},
            "squared": {str(s): v for s, v in sorted(self.squared.items())},
            "system_residual": self.system_residual,
        }


def trivariate_system(mags: Sequence[float], ef2: float, sigma: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Linear system for u = (f^2(xyz), f^2(xy), f^2(xz), f^2(yz)).

    Rows: influence of x, y, z with the first-order part removed, then Parseval.
    """
    m0, m1, m2 = mags
    lhs = np.array([
        [1, 1, 1, 0],
        [1, 1, 0, 1],
        [1, 0, 1, 1],
        [1, 1, 1, 1],
    ], dtype=float)
    rhs = np.array([
        sigma * m0 - m0 ** 2,
        sigma * m1 - m1 ** 2,
        sigma * m2 - m2 ** 2,
        1 - ef2 - (m0 ** 2 + m1 ** 2 + m2 ** 2),
    ])
    return lhs, rhs


def _solve(psi: Sequence[float], ef: float, signs: Sequence[int], m: InputMeasure,
           tol: float) -> TrivariateSpectrum:
    if len(psi) != 3:
        raise ValueError("trivariate maps need three conditional informations")
    sigma, h = m.sigma, m.hp
    mags = [sigma / h * v for v in psi]
    ef2 = ef * ef
    lhs, rhs = trivariate_system(mags, ef2, sigma)
    sol, _, rank, _ = np.linalg.lstsq(lhs, rhs, rcond=None)
    if rank < 4:
        raise MappingError("trivariate system is singular")
    residual = float(np.max(np.abs(lhs @ sol - rhs)))
    if residual > tol or (sol < -tol).any() or (sol > 1 + tol).any():
        raise MappingError(f"inconsistent trivariate system: solution {sol}, residual {residual:.3g}")
    first = {1 << i: signs[i] * mags[i] for i in range(3)}
    squared = {s: float(v) for s, v in zip((0b111, 0b011, 0b101, 0b110), sol)}
    return TrivariateSpectrum(ef, first, squared, residual)


def closed_form_trivariate(psi: Sequence[float], ef: float) -> dict[int, float]:
    """Closed-form solution of the uniform system (independent of the solver)."""
    p0, p1, p2 = psi
    e2 = ef * ef
    return {
        0b111: p0 * (1 + p0) + p1 * (1 + p1) + p2 * (1 + p2) + 2 * e2 - 2,
        0b011: 1 - e2 - p0 ** 2 - p1 ** 2 - p2,
        0b101: 1 - e2 - p0 ** 2 - p2 ** 2 - p1,
        0b110: 1 - e2 - p1 ** 2 - p2 ** 2 - p0,
    }


def solve_trivariate_monotone(psi: Union[PsiVector, Sequence[float]], ef: float, direction: str,
                              m: InputMeasure = UNIFORM, gate_class: Optional[GateClass] = None,
                              tol: float = EQ_TOL) -> TrivariateSpectrum:
    sign = _direction_sign(direction)
    _check_class(gate_class, direction)
    return _solve(tuple(psi), ef, (sign,) * 3, m, tol)


def phi_trivariate_unate(psi: Union[PsiVector, Sequence[float]], a: Sequence[int], ef: float,
                         m: InputMeasure = UNIFORM, gate_class: Optional[GateClass] = None,
                         tol: float = EQ_TOL) -> TrivariateSpectrum:
    _check_class(gate_class, signs=a)
    return _solve(tuple(psi), ef, tuple(a), m, tol)


def printed_trivariate(psi: Sequence[float], ef: float, m: InputMeasure = UNIFORM) -> dict[int, float]:
    """The quadratic closed forms exactly as printed (uniform: sigma/H = 1)."""
    k = m.sigma / m.hp
    p0, p1, p2 = (k * v for v in psi)
    e2 = ef * ef
    return {
        0b111: 2 * (p0 * (p0 + k / 2) + p1 * (p1 + k / 2) + p2 * (p2 + k / 2) + e2 - 1),
        0b011: 1 - e2 - p0 ** 2 - p1 ** 2 - p2 * (k + p2),
        0b101: 1 - e2 - p0 ** 2 - p2 ** 2 - p1 * (k + p1),
        0b110: 1 - e2 - p1 ** 2 - p2 ** 2 - p0 * (k + p0),
    }


@dataclass
class MappingReport:
    theorem: str
    predicted: dict[str, float]
    reference: dict[str, float]
    actual: Optional[dict[str, float]] = None
    residuals: dict[str, float] = field(default_factory=dict)
    passed: bool = True
    flags: dict[str, bool] = field(default_factory=dict)
    gate: Optional[str] = None
    measure: Optional[str] = None

    def __post_init__(self):
        self.residuals = {k: float(v) for k, v in self.residuals.items()}

    @property
    def printed_formula_discrepancy(self) -> bool:
        return self.flags.get("printed_formula_discrepancy", False)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def to_json(self) -> dict:
        return {
            "gate": self.gate,
            "measure": self.measure,
            "theorem": self.theorem,
            "predicted": self.predicted,
            "reference": self.reference,
            "actual": self.actual,
            "residual": self.residuals,
            "pass": self.passed,
            "flags": self.flags,
        }


def _labelled(values: dict[int, float]) -> dict[str, float]:
    return {TRI_LABELS[TRI_ORDER.index(s)]: float(v) for s, v in sorted(values.items(), reverse=True)}


def check_printed_trivariate_formulas(psi: Union[PsiVector, Sequence[float]], ef: float,
                                      actual_squared: Optional[np.ndarray] = None,
                                      m: InputMeasure = UNIFORM,
                                      tol: float = FLAG_TOL) -> MappingReport:
    """Evaluate the printed quadratic forms against the linear-system solution.

    Never raises on a mismatch: the outcome is recorded in ``flags``.  The
    solver reference is computed without range checks so non-monotone inputs
    can still be reported.
    """
    psi = tuple(psi)
    printed = printed_trivariate(psi, ef, m)
    lhs, rhs = trivariate_system([m.sigma / m.hp * v for v in psi], ef * ef, m.sigma)
    sol = np.linalg.solve(lhs, rhs)
    reference = dict(zip((0b111, 0b011, 0b101, 0b110), (float(v) for v in sol)))
    residuals = {f"vs_solver_{TRI_LABELS[TRI_ORDER.index(s)]}": abs(printed[s] - reference[s])
                 for s in reference}
    actual = None
    if actual_squared is not None:
        actual = {TRI_LABELS[TRI_ORDER.index(s)]: float(actual_squared[s]) for s in reference}
        residuals.update({f"vs_actual_{TRI_LABELS[TRI_ORDER.index(s)]}": abs(printed[s] - actual_squared[s])
                          for s in reference})
    discrepancy = max(residuals.values()) > tol
    return MappingReport(
        theorem="trivariate-monotone-printed",
        predicted=_labelled(printed),
        reference=_labelled(reference),
        actual=actual,
        residuals=residuals,
        passed=True,
        flags={"printed_formula_discrepancy": discrepancy},
    )


def p_biased_trivariate(source: Union[PIDTrivariate, PsiVector, Sequence[float]], m: InputMeasure,
                        variant: str = "bounds", ef: Optional[float] = None,
                        direction: Optional[str] = None, a: Optional[Sequence[int]] = None,
                        gate_class: Optional[GateClass] = None, tol: float = EQ_TOL):
    """p-biased trivariate maps: ``bounds`` (from a PID) or ``monotone`` / ``unate`` (from psi)."""
    if variant == "bounds":
        if not isinstance(source, PIDTrivariate):
            raise TypeError("bounds variant needs a PIDTrivariate")
        return phi_trivariate_bounds(source, m)
    if ef is None:
        raise ValueError("E[f] is required for the monotone and unate variants")
    if variant == "monotone":
        return solve_trivariate_monotone(source, ef, direction or "increasing", m, gate_class, tol)
    if variant == "unate":
        if a is None:
            raise ValueError("unate variant needs unate parameters")
        return phi_trivariate_unate(source, a, ef, m, gate_class, tol)
    raise ValueError(f"unknown variant {variant!r}")


@dataclass(frozen=True)
class PIDFunctionals:
    influence: float
    alpha: float
    edge_bound: float
    mi_joint: float
    co_information: float
    poincare_chain: bool
    stability: Optional[float] = None
    noise_sensitivity: Optional[float] = None
    printed_stability: Optional[float] = None
    printed_noise_sensitivity: Optional[float] = None

    @property
    def printed_formula_discrepancy(self) -> bool:
        pairs = ((self.stability, self.printed_stability),
                 (self.noise_sensitivity, self.printed_noise_sensitivity))
        return any(a is not None and b is not None and abs(a - b) > FLAG_TOL for a, b in pairs)

    def to_json(self) -> dict:
        return {
            "influence": self.influence,
            "alpha": self.alpha,
            "edge_bound": self.edge_bound,
            "mi_minus_coi": self.mi_joint - self.co_information,
            "poincare_chain": self.poincare_chain,
            "stability": self.stability,
            "noise_sensitivity": self.noise_sensitivity,
            "printed_stability": self.printed_stability,
            "printed_noise_sensitivity": self.printed_noise_sensitivity,
            "printed_formula_discrepancy": self.printed_formula_discrepancy,
        }


def stability_from_pid(pid: PIDBivariate, ef2: float, rho: float) -> float:
    sq = _bivariate_squared(pid, ef2, 1.0)
    return ef2 + rho * (sq[X] + sq[Y]) + rho * rho * sq[XY]


def functionals_from_pid(pid: PIDBivariate, ef2: float, rho: Optional[float] = None,
                         delta: Optional[float] = None, slack: float = 1e-12) -> PIDFunctionals:
    """Total influence, the lower-bound chain, and Stab / NS written through PID terms."""
    k = 2 * pid.CI + pid.UI_X + pid.UI_Y
    ef_abs = math.sqrt(max(ef2, 0.0))
    alpha = (1 - ef_abs) / 2
    edge = 0.0 if alpha <= 0 else 2 * alpha * math.log2(1 / alpha)
    mi = pid.total
    coi = pid.SI - pid.CI
    chain = edge <= k + slack and k <= mi - coi + slack
    stab = ns = pstab = pns = None
    if rho is not None:
        if not -1 <= rho <= 1:
            raise ValueError(f"rho must lie in [-1, 1], got {rho}")
        stab = stability_from_pid(pid, ef2, rho)
        pstab = (rho ** 2 - rho) * k + (rho ** 2 - 2 * rho) * (ef2 - 1)
    if delta is not None:
        if not 0 <= delta <= 1:
            raise ValueError(f"delta must lie in [0, 1], got {delta}")
        ns = 0.5 - 0.5 * stability_from_pid(pid, ef2, 1 - 2 * delta)
        pns = 2 * delta ** 2 + (1 - 2 * delta) * (delta * k + (1 + 2 * delta) / 2 * ef2)
    return PIDFunctionals(k, alpha, edge, mi, coi, chain, stab, ns, pstab, pns)

