"""Truth-table Boolean classifiers, points, instances and feature subsets.

Conventions shared by every module:

* A point ``(v1, ..., vm)`` lives at table index ``sum(v_i * 2**(m - i))``,
  so ``x1`` is the most significant bit and the all-zeros point is index 0.
  A truth-table string lists the class of point 0 first.
* A feature set is a plain ``int`` with bit ``i - 1`` set for feature ``i``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MAX_ARITY = 14
SCAN_MAX_ARITY = 4
ARITY_ENV_VAR = "AUDIT_MAX_ARITY"

Point = tuple[int, ...]
FeatureSet = int


class AuditError(Exception):
    """Base class for input errors raised by the package."""


class FormatError(AuditError, ValueError):
    pass


class ArityError(AuditError, ValueError):
    pass


class ConstantFunctionError(AuditError, ValueError):
    """Explanations are undefined for a constant classifier."""


def max_arity() -> int:
    """Per-instance arity cap, overridable through ``AUDIT_MAX_ARITY``."""
    raw = os.environ.get(ARITY_ENV_VAR)
    if raw is None:
        return DEFAULT_MAX_ARITY
    try:
        cap = int(raw)
    except ValueError:
        raise ArityError(f"{ARITY_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ArityError(f"{ARITY_ENV_VAR} must be positive, got {cap}")
    return cap


@dataclass(frozen=True)
class BooleanFunction:
    """A total map {0,1}^m -> {0,1}.

    ``bits`` holds the table bit-parallel: bit ``idx`` of the integer is the
    class of the point at table index ``idx``.
    """

    m: int
    bits: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ArityError(f"arity must be >= 1, got {self.m}")
        if self.bits < 0 or self.bits >> self.size:
            raise FormatError("table has bits beyond 2**m entries")

    @property
    def size(self) -> int:
        return 1 << self.m

    @property
    def constant(self) -> bool:
        return self.bits == 0 or self.bits == (1 << self.size) - 1

    @property
    def ones(self) -> int:
        return self.bits.bit_count()

    @property
    def index(self) -> int:
        """Position of this function in the scan order, i.e. ``int(text, 2)``."""
        return int(render_tt(self), 2)

    @classmethod
    def from_index(cls, m: int, index: int) -> "BooleanFunction":
        n = 1 << m
        if not 0 <= index < 1 << n:
            raise ArityError(f"function index {index} out of range for m={m}")
        return parse_tt(format(index, f"0{n}b"))

    @classmethod
    def from_callable(cls, m: int, fn) -> "BooleanFunction":
        bits = 0
        for idx in range(1 << m):
            if fn(*index_to_point(idx, m)):
                bits |= 1 << idx
        return cls(m, bits)

    def array(self) -> np.ndarray:
        """Table as an int64 array indexed by point index."""
        return table_array(self.m, self.bits)

    def __call__(self, point: Sequence[int]) -> int:
        return evaluate(self, point)

    def __str__(self) -> str:
        return render_tt(self)


@lru_cache(maxsize=256)
def _table_array(m: int, bits: int) -> np.ndarray:
    n = 1 << m
    raw = bits.to_bytes((n + 7) // 8, "little")
    arr = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n]
    out = arr.astype(np.int64)
    out.flags.writeable = False
    return out


def table_array(m: int, bits: int) -> np.ndarray:
    return _table_array(m, bits)


def parse_tt(text: str) -> BooleanFunction:
    """Parse a truth-table string such as ``"01010011"``.

    Constant tables are accepted; check ``.constant`` before explaining.
    """
    text = text.strip()
    n = len(text)
    if n < 2 or n & (n - 1):
        raise FormatError(f"truth table length must be a power of two >= 2, got {n}")
    if set(text) - {"0", "1"}:
        raise FormatError("truth table may only contain '0' and '1'")
    # int(text[::-1], 2) puts digit 0 at bit 0
    return BooleanFunction(n.bit_length() - 1, int(text[::-1], 2))


def render_tt(f: BooleanFunction) -> str:
    return format(f.bits, f"0{f.size}b")[::-1]


def parse_point(text: str, m: int | None = None) -> Point:
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise FormatError(f"instance must be a non-empty bitstring, got {text!r}")
    if m is not None and len(text) != m:
        raise ArityError(f"instance has {len(text)} features, function has {m}")
    return tuple(int(ch) for ch in text)


def render_point(p: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in p)


def point_to_index(p: Sequence[int]) -> int:
    idx = 0
    for b in p:
        if b not in (0, 1):
            raise FormatError(f"point coordinates must be 0/1, got {b!r}")
        idx = (idx << 1) | b
    return idx


def index_to_point(idx: int, m: int) -> Point:
    return tuple((idx >> (m - 1 - i)) & 1 for i in range(m))


def evaluate(f: BooleanFunction, p: Sequence[int]) -> int:
    if len(p) != f.m:
        raise ArityError(f"point has {len(p)} coordinates, function has arity {f.m}")
    return (f.bits >> point_to_index(p)) & 1


# --- feature sets ---------------------------------------------------------


def feature_set(features: Iterable[int]) -> FeatureSet:
    mask = 0
    for i in features:
        if i < 1:
            raise ValueError(f"features are numbered from 1, got {i}")
        mask |= 1 << (i - 1)
    return mask


def features_of(mask: FeatureSet) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def full_set(m: int) -> FeatureSet:
    return (1 << m) - 1


@lru_cache(maxsize=None)
def point_masks(m: int) -> np.ndarray:
    """``point_masks(m)[S]`` is the point-index bitmask of the features in S."""
    fs = np.arange(1 << m, dtype=np.int64)
    out = np.zeros_like(fs)
    for i in range(1, m + 1):
        out |= ((fs >> (i - 1)) & 1) << (m - i)
    out.flags.writeable = False
    return out


@lru_cache(maxsize=None)
def popcounts(m: int) -> np.ndarray:
    out = np.array([bin(s).count("1") for s in range(1 << m)], dtype=np.int64)
    out.flags.writeable = False
    return out


def check_arity(m: int, cap: int | None = None) -> None:
    cap = max_arity() if cap is None else cap
    if m > cap:
        raise ArityError(f"arity {m} exceeds the configured cap of {cap}")


# --- explanation problems -------------------------------------------------


@dataclass(frozen=True)
class ExplanationProblem:
    """A classifier together with an instance ``(v, c)`` where ``c = f(v)``."""

    function: BooleanFunction
    v: Point
    c: int = field(init=False)

    def __post_init__(self) -> None:
        f = self.function
        if f.constant:
            raise ConstantFunctionError(
                f"function {render_tt(f)} is constant; explanations are undefined"
            )
        object.__setattr__(self, "v", tuple(int(b) for b in self.v))
        object.__setattr__(self, "c", evaluate(f, self.v))

    @property
    def m(self) -> int:
        return self.function.m

    @property
    def v_index(self) -> int:
        return point_to_index(self.v)


def make_problem(f: BooleanFunction, v: Sequence[int]) -> ExplanationProblem:
    check_arity(f.m)
    return ExplanationProblem(f, tuple(v))
