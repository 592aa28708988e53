"""Partial information decomposition with the Williams-Beer I_min measure.

Sources are bitmasks over the inputs; a lattice node is an antichain of
sources (no member contains another), stored as a sorted tuple of masks.
Cumulative redundancy is I_min at each node and the partial-information
atoms follow by Moebius inversion over the redundancy order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .info import JointDistribution, conditional_mi, mi_direct

MEASURE = "imin"
CLAMP_TOL = 1e-12
VAR_NAMES = "XYZW"

Node = tuple[int, ...]


class PIDError(RuntimeError):
    pass


def _subset(a: int, b: int) -> bool:
    return a & b == a


def is_antichain(sources: Iterable[int]) -> bool:
    src = list(sources)
    return all(not _subset(a, b) and not _subset(b, a) for a, b in combinations(src, 2))


def node_leq(alpha: Node, beta: Node) -> bool:
    """alpha <= beta iff every source in beta contains some source of alpha."""
    return all(any(_subset(a, b) for a in alpha) for b in beta)


@lru_cache(maxsize=None)
def lattice(n: int) -> tuple[Node, ...]:
    """Redundancy lattice nodes for ``n`` sources in a topological (bottom-up) order."""
    if n not in (2, 3):
        raise ValueError("redundancy lattices are supported for 2 or 3 sources")
    sources = range(1, 1 << n)
    nodes = []
    for k in range(1, n + 1):
        for combo in combinations(sources, k):
            if is_antichain(combo):
                nodes.append(tuple(sorted(combo)))
    below = {a: sum(node_leq(b, a) for b in nodes) for a in nodes}
    return tuple(sorted(nodes, key=lambda a: (below[a], node_key(a))))


@lru_cache(maxsize=None)
def strict_down_sets(n: int) -> dict[Node, tuple[Node, ...]]:
    nodes = lattice(n)
    return {a: tuple(b for b in nodes if b != a and node_leq(b, a)) for a in nodes}


def node_key(node: Node) -> str:
    """Canonical text form, e.g. ``[[0,1],[0,2]]``."""
    parts = ",".join("[" + ",".join(str(j) for j in range(8) if s >> j & 1) + "]" for s in node)
    return f"[{parts}]"


def node_label(node: Node) -> str:
    """Readable form, e.g. ``{XY}{XZ}``."""
    return "".join("{" + "".join(VAR_NAMES[j] for j in range(4) if s >> j & 1) + "}" for s in node)


def specific_information(jd: JointDistribution, t: int, group: int) -> float:
    """I(T = t; X_A) = sum_a P(a|t) [log2 P(t|a) - log2 P(t)], with t in {+1, -1}."""
    row = 0 if t == 1 else 1
    pa = jd.marginal(group)
    pt = pa[row].sum()
    if pt <= 0:
        raise PIDError(f"target value {t} has zero probability")
    total = 0.0
    for a in np.unique(np.arange(1 << jd.n) & group):
        joint = pa[row, a]
        if joint > 0:
            total += joint / pt * (math.log2(joint / (pa[0, a] + pa[1, a])) - math.log2(pt))
    return float(total)


def imin(jd: JointDistribution, collection: Sequence[int]) -> float:
    """Expected minimum specific information over a collection of sources."""
    if not collection:
        raise ValueError("I_min needs at least one source")
    total = 0.0
    for row, t in ((0, 1), (1, -1)):
        pt = jd.p_target[row]
        if pt > 0:
            total += pt * min(specific_information(jd, t, a) for a in collection)
    return float(total)


@dataclass(frozen=True)
class PIDBivariate:
    SI: float
    UI_X: float
    UI_Y: float
    CI: float
    measure: str = MEASURE

    @property
    def total(self) -> float:
        return self.SI + self.UI_X + self.UI_Y + self.CI

    def to_json(self) -> dict:
        return {"measure": self.measure, "SI": self.SI, "UI_X": self.UI_X,
                "UI_Y": self.UI_Y, "CI": self.CI}


def pid_bivariate(jd: JointDistribution) -> PIDBivariate:
    if jd.n != 2:
        raise ValueError("bivariate PID needs exactly two inputs")
    si = imin(jd, (0b01, 0b10))
    ix, iy, ixy = mi_direct(jd, 0b01), mi_direct(jd, 0b10), mi_direct(jd, 0b11)
    ui_x, ui_y = ix - si, iy - si
    ci = ixy - si - ui_x - ui_y
    terms = [_clamp(v, name) for v, name in ((si, "SI"), (ui_x, "UI_X"), (ui_y, "UI_Y"), (ci, "CI"))]
    return PIDBivariate(*terms)


def _clamp(v: float, where: str) -> float:
    if v < -CLAMP_TOL:
        raise PIDError(f"negative partial information {v!r} at {where}")
    return float(max(v, 0.0))


# d-vector order: the ten trivariate terms entering the conditional-MI identities
D_LABELS = (
    "CI(T;X:Y:Z)", "CI(T;X:Y)", "CI(T;X:Z)", "CI(T;Y:Z)",
    "CI(T;X:Y,X:Z)", "CI(T;X:Y,Y:Z)", "CI(T;X:Z,Y:Z)",
    "UI(T;X\\Y,Z)", "UI(T;Y\\X,Z)", "UI(T;Z\\X,Y)",
)
D_NODES: tuple[Node, ...] = (
    (0b111,), (0b011,), (0b101,), (0b110,),
    (0b011, 0b101), (0b011, 0b110), (0b101, 0b110),
    (0b001,), (0b010,), (0b100,),
)


@dataclass(frozen=True)
class PIDTrivariate:
    atoms: dict[Node, float]
    cumulative: dict[Node, float]
    measure: str = MEASURE

    @property
    def d_vector(self) -> tuple[float, ...]:
        return tuple(self.atoms[node] for node in D_NODES)

    def atom_vector(self) -> np.ndarray:
        return np.array([self.atoms[node] for node in lattice(3)])

    def above_complement(self, i: int) -> float:
        """Sum of atoms not below the node holding the other two inputs."""
        full = 0b111
        other = (full & ~(1 << i),)
        return sum(v for node, v in self.atoms.items() if not node_leq(node, other))

    def to_json(self) -> dict:
        return {
            "measure": self.measure,
            "atoms": {node_key(node): self.atoms[node] for node in lattice(3)},
            "labels": {node_key(node): node_label(node) for node in lattice(3)},
            "d_vector": dict(zip(D_LABELS, self.d_vector)),
        }


def mobius(n: int, cumulative: dict[Node, float]) -> dict[Node, float]:
    down = strict_down_sets(n)
    atoms: dict[Node, float] = {}
    for node in lattice(n):
        atoms[node] = float(cumulative[node] - sum(atoms[b] for b in down[node]))
    return atoms


def down_sum(n: int, atoms: dict[Node, float]) -> dict[Node, float]:
    down = strict_down_sets(n)
    return {node: atoms[node] + sum(atoms[b] for b in down[node]) for node in lattice(n)}


def pid_trivariate(jd: JointDistribution) -> PIDTrivariate:
    if jd.n != 3:
        raise ValueError("trivariate PID needs exactly three inputs")
    cumulative = {node: imin(jd, node) for node in lattice(3)}
    raw = mobius(3, cumulative)
    atoms = {node: _clamp(v, node_label(node)) for node, v in raw.items()}
    return PIDTrivariate(atoms, cumulative)


def pid_lattice(jd: JointDistribution) -> dict[Node, float]:
    """Atoms on the full lattice for two or three inputs (unclamped)."""
    n = jd.n
    return mobius(n, {node: imin(jd, node) for node in lattice(n)})


@dataclass(frozen=True)
class PsiVector:
    """I(T; X_i | rest) per input, in bits."""

    values: tuple[float, ...]

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i: int) -> float:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def scaled(self, factor: float) -> "PsiVector":
        return PsiVector(tuple(factor * v for v in self.values))


def psi_sums(jd: JointDistribution) -> PsiVector:
    return PsiVector(tuple(conditional_mi(jd, i) for i in range(jd.n)))


def pid_json(pid3: PIDTrivariate, psi: PsiVector) -> dict:
    out = pid3.to_json()
    out["psi"] = list(psi.values)
    return out
