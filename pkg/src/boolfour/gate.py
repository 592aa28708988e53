"""Boolean gates as truth tables over the hypercube {-1,+1}^n.

Encoding convention, used everywhere in the package: point index ``i``
encodes the input whose bit ``j`` gives ``x_j``, with bit value 0 meaning
``x_j = +1`` and bit value 1 meaning ``x_j = -1``.  Outputs follow the same
rule, so the text form ``2:0001`` is the gate that is ``-1`` only on the
point ``x = (-1, -1)`` (AND, reading -1 as "true").
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

MAX_ARITY = 16
MAX_EXHAUSTIVE_ARITY = 4


class GateError(ValueError):
    """Raised for malformed gate specifications."""


@dataclass(frozen=True)
class TruthTable:
    """A Boolean gate ``f: {-1,1}^n -> {-1,1}`` stored as its output vector."""

    n: int
    outputs: tuple[int, ...]
    name: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_ARITY:
            raise GateError(f"arity must be in [1, {MAX_ARITY}], got {self.n}")
        if len(self.outputs) != 1 << self.n:
            raise GateError(
                f"expected {1 << self.n} outputs for n={self.n}, got {len(self.outputs)}")
        if any(v not in (-1, 1) for v in self.outputs):
            raise GateError("outputs must be -1 or +1")

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.outputs, dtype=float)

    @property
    def bits(self) -> str:
        return "".join("0" if v == 1 else "1" for v in self.outputs)

    @property
    def index(self) -> int:
        """Position in :func:`enumerate_gates` order (bit-string read as binary)."""
        return int(self.bits, 2)

    def __str__(self) -> str:
        return f"{self.n}:{self.bits}"

    def __neg__(self) -> "TruthTable":
        return TruthTable(self.n, tuple(-v for v in self.outputs))

    def label(self) -> str:
        return self.name or str(self)


@dataclass(frozen=True)
class InputMeasure:
    """Product measure on the inputs; each bit equals +1 with probability ``p``."""

    p: float = 0.5
    biased: bool = False

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if not self.biased and self.p != 0.5:
            raise ValueError("uniform measure has p = 1/2; use InputMeasure.pbiased")

    @classmethod
    def uniform(cls) -> "InputMeasure":
        return cls()

    @classmethod
    def pbiased(cls, p: float) -> "InputMeasure":
        return cls(p=float(p), biased=True)

    @property
    def kind(self) -> str:
        return "pbiased" if self.biased else "uniform"

    @property
    def is_uniform_equivalent(self) -> bool:
        return self.p == 0.5

    @property
    def mu(self) -> float:
        return 2.0 * self.p - 1.0

    @property
    def sigma(self) -> float:
        return 2.0 * math.sqrt(self.p * (1.0 - self.p))

    @property
    def hp(self) -> float:
        """Entropy of one input bit, in bits."""
        p = self.p
        return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))

    def to_json(self):
        return {"p": self.p} if self.biased else "uniform"

    def __str__(self) -> str:
        return f"p={self.p:g}" if self.biased else "uniform"


UNIFORM = InputMeasure.uniform()


@dataclass(frozen=True)
class GateClass:
    is_monotone: bool
    is_antitone: bool
    is_unate: bool
    unate_parameters: Optional[tuple[int, ...]] = None
    is_transitive_symmetric_known: Optional[bool] = None

    @property
    def direction(self) -> Optional[str]:
        if self.is_monotone:
            return "increasing"
        if self.is_antitone:
            return "decreasing"
        return None

    def to_json(self) -> dict:
        return {
            "monotone": self.is_monotone,
            "antitone": self.is_antitone,
            "unate": self.is_unate,
            "unate_parameters": list(self.unate_parameters) if self.unate_parameters else None,
            "transitive_symmetric": self.is_transitive_symmetric_known,
        }


@lru_cache(maxsize=None)
def points(n: int) -> np.ndarray:
    """All 2^n inputs as a read-only (2^n, n) array of +-1 in index order."""
    idx = np.arange(1 << n)[:, None]
    bits = (idx >> np.arange(n)[None, :]) & 1
    pts = 1 - 2 * bits
    pts.setflags(write=False)
    return pts


def point_probabilities(n: int, m: InputMeasure) -> np.ndarray:
    pts = points(n)
    return np.prod(np.where(pts == 1, m.p, 1.0 - m.p), axis=1)


def from_function(n: int, fn, name: Optional[str] = None) -> TruthTable:
    """Tabulate ``fn(x)`` where ``x`` is a tuple of +-1 values."""
    outs = tuple(int(fn(tuple(int(v) for v in x))) for x in points(n))
    return TruthTable(n, outs, name)


def from_bits(bits: str, name: Optional[str] = None) -> TruthTable:
    if not bits or set(bits) - {"0", "1"}:
        raise GateError(f"bit-string must be non-empty over {{0,1}}: {bits!r}")
    length = len(bits)
    if length & (length - 1):
        raise GateError(f"bit-string length {length} is not a power of two")
    n = length.bit_length() - 1
    if n < 1:
        raise GateError("bit-string must have length >= 2")
    return TruthTable(n, tuple(1 if b == "0" else -1 for b in bits), name)


def _sign(v: int) -> int:
    return 1 if v > 0 else -1


def _and(x):  # -1 is "true"
    return -1 if all(v == -1 for v in x) else 1


def _or(x):
    return -1 if any(v == -1 for v in x) else 1


def _parity(x):
    return math.prod(x)


_NAMED = {
    "AND": (2, _and),
    "OR": (2, _or),
    "NAND": (2, lambda x: -_and(x)),
    "NOR": (2, lambda x: -_or(x)),
    "XOR": (2, _parity),
    "XNOR": (2, lambda x: -_parity(x)),
    "AND3": (3, _and),
    "OR3": (3, _or),
    "NAND3": (3, lambda x: -_and(x)),
    "NOR3": (3, lambda x: -_or(x)),
    "XOR3": (3, _parity),
    "MAJ3": (3, lambda x: _sign(sum(x))),
}

# curated; only consulted by the transitive-symmetric influence bound
_TRANSITIVE_SYMMETRIC = {
    "AND": True, "OR": True, "NAND": True, "NOR": True, "XOR": True, "XNOR": True,
    "AND3": True, "OR3": True, "NAND3": True, "NOR3": True, "XOR3": True, "MAJ3": True,
    "DICT": False,
}

_DICT_RE = re.compile(r"^DICT_(\d+)(?:_(\d+))?$")
_CONST_RE = re.compile(r"^CONST_([+-]?1)(?:_(\d+))?$")
_BITS_RE = re.compile(r"^(\d+):([01]+)$")


def make_gate(spec: str) -> TruthTable:
    """Build a gate from a name or a bit-string.

    Accepted forms: ``AND``, ``OR``, ``XOR``, ``NAND``, ``NOR``, ``XNOR`` and
    their 3-input versions ``AND3`` ... ``XOR3``, ``MAJ3``, ``DICT_i`` (the
    1-based dictator on 2 inputs, or ``DICT_i_n`` on ``n`` inputs),
    ``CONST_+1`` / ``CONST_-1`` (optionally ``CONST_1_n``), a raw bit-string
    such as ``0110``, or ``n:bits``.
    """
    s = spec.strip()
    key = s.upper()
    if key in _NAMED:
        n, fn = _NAMED[key]
        return from_function(n, fn, key)
    m = _DICT_RE.match(key)
    if m:
        i = int(m.group(1))
        n = int(m.group(2)) if m.group(2) else max(2, i)
        if not 1 <= i <= n:
            raise GateError(f"dictator index {i} out of range for n={n}")
        return from_function(n, lambda x: x[i - 1], s)
    m = _CONST_RE.match(key)
    if m:
        v = -1 if m.group(1).startswith("-") else 1
        n = int(m.group(2)) if m.group(2) else 2
        return TruthTable(n, (v,) * (1 << n), s)
    m = _BITS_RE.match(s)
    if m:
        n = int(m.group(1))
        tt = from_bits(m.group(2))
        if tt.n != n:
            raise GateError(f"{spec!r}: {len(m.group(2))} bits do not match arity {n}")
        return tt
    if set(s) <= {"0", "1"} and s:
        return from_bits(s)
    raise GateError(f"unknown gate {spec!r}")


def enumerate_gates(n: int) -> Iterator[TruthTable]:
    """All 2^(2^n) gates of arity n, ordered by their output bit-string."""
    if not 1 <= n <= MAX_EXHAUSTIVE_ARITY:
        raise GateError(f"exhaustive enumeration supports 1 <= n <= {MAX_EXHAUSTIVE_ARITY}")
    size = 1 << n
    for k in range(1 << size):
        # most significant bit of k is output index 0
        yield TruthTable(n, tuple(-1 if (k >> (size - 1 - i)) & 1 else 1 for i in range(size)))


def _coordinate_trend(tt: TruthTable, i: int) -> tuple[bool, bool]:
    """(nondecreasing, nonincreasing) along coordinate i, going -1 -> +1."""
    up = down = True
    mask = 1 << i
    for x in range(1 << tt.n):
        if x & mask:  # x_i = -1
            lo, hi = tt.outputs[x], tt.outputs[x ^ mask]
            if lo > hi:
                up = False
            elif lo < hi:
                down = False
    return up, down


def classify(tt: TruthTable) -> GateClass:
    trends = [_coordinate_trend(tt, i) for i in range(tt.n)]
    monotone = all(up for up, _ in trends)
    antitone = all(down for _, down in trends)
    unate = all(up or down for up, down in trends)
    params = tuple(1 if up else -1 for up, _ in trends) if unate else None
    ts = None
    if tt.name:
        stem = "DICT" if tt.name.upper().startswith("DICT") else tt.name.upper()
        ts = _TRANSITIVE_SYMMETRIC.get(stem)
    return GateClass(monotone, antitone, unate, params, ts)


def sensitivity_at(tt: TruthTable, x: int) -> int:
    if not 0 <= x < 1 << tt.n:
        raise IndexError(f"point index {x} out of range for n={tt.n}")
    fx = tt.outputs[x]
    return sum(fx != tt.outputs[x ^ (1 << i)] for i in range(tt.n))


def expectation(tt: TruthTable, m: InputMeasure = UNIFORM) -> float:
    return float(point_probabilities(tt.n, m) @ tt.array)


def bias_alpha(tt: TruthTable, m: InputMeasure = UNIFORM) -> float:
    """min(P[f=1], P[f=-1])."""
    e = expectation(tt, m)
    return min((1 + e) / 2, (1 - e) / 2)


def parse_p_list(text: str) -> list[float]:
    """Parse ``0.25,0.5`` or ``lo:hi:step`` (inclusive) into a list of p."""
    text = text.strip()
    if not text:
        return []
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"p-grid must be lo:hi:step, got {text!r}")
        lo, hi, step = map(float, parts)
        if step <= 0 or hi < lo:
            raise ValueError(f"invalid p-grid {text!r}")
        count = int(round((hi - lo) / step)) + 1
        grid = [round(lo + k * step, 12) for k in range(count)]
    else:
        grid = [float(v) for v in text.split(",") if v.strip()]
    for p in grid:
        if not 0.0 < p < 1.0:
            raise ValueError(f"p must lie in (0, 1), got {p}")
    return grid


def measures_for(grid: Sequence[float], include_uniform: bool = True) -> list[InputMeasure]:
    out = [UNIFORM] if include_uniform else []
    out.extend(InputMeasure.pbiased(p) for p in grid)
    return out
