"""Exact Shapley values of truth-table classifiers under uniform inputs.

Everything is driven by one quantity: for a point ``v`` and a feature set
``S``, the number of ones of the classifier among the points that agree with
``v`` on ``S``.  All ``2**m`` of these counts are produced at once by a
subset-sum transform, and the Shapley values are integer combinations of them
over the common denominator ``m! * 2**m``.

The kernels take a leading batch axis so the exhaustive scan can push many
functions through the same code as a single instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .core import (
    ExplanationProblem,
    FeatureSet,
    check_arity,
    full_set,
    point_masks,
    popcounts,
)


def slice_counts(tables: np.ndarray, v_index: int, m: int) -> np.ndarray:
    """Ones of each table over the points agreeing with ``v`` on each feature set.

    ``tables`` has shape ``(B, 2**m)`` (indexed by point); the result has the
    same shape, indexed by feature set.
    """
    n = 1 << m
    # re-centre on v so "agrees with v on S" becomes "disjoint from S"
    h = np.ascontiguousarray(tables[:, np.arange(n) ^ v_index], dtype=np.int64)
    b = h.shape[0]
    for bit in range(m):
        view = h.reshape(b, -1, 2, 1 << bit)
        view[:, :, 1, :] += view[:, :, 0, :]
    return h[:, (n - 1) ^ point_masks(m)]


@lru_cache(maxsize=None)
def _weights(m: int) -> tuple[np.ndarray, ...]:
    """Per-feature (lo, hi, coef) index/weight arrays for the Shapley sums.

    For feature i, ``lo`` enumerates S without i, ``hi = lo | i`` and
    ``coef[S] = |S|! (m-|S|-1)! 2^|S|``.
    """
    pc = popcounts(m)
    out = []
    for i in range(m):
        bit = 1 << i
        lo = np.array([s for s in range(1 << m) if not s & bit], dtype=np.int64)
        coef = [math.factorial(int(k)) * math.factorial(m - int(k) - 1) << int(k) for k in pc[lo]]
        out.append((lo, lo | bit, np.array(coef, dtype=_int_dtype(m))))
    return tuple(out)


def _int_dtype(m: int):
    # |numerator| <= 2 * m! * 2^m; fall back to Python ints past int64
    return np.int64 if 2 * math.factorial(m) << m < 1 << 62 else object


def denominator(m: int) -> int:
    return math.factorial(m) << m


def shapley_numerators(counts: np.ndarray, m: int) -> np.ndarray:
    """Shapley numerators over ``denominator(m)``, shape ``(B, m)``."""
    dtype = _int_dtype(m)
    counts = counts.astype(dtype)
    out = np.empty((counts.shape[0], m), dtype=dtype)
    for i, (lo, hi, coef) in enumerate(_weights(m)):
        out[:, i] = (2 * counts[:, hi] - counts[:, lo]) @ coef
    return out


@lru_cache(maxsize=None)
def _float_weights(m: int) -> tuple[tuple[np.ndarray, np.ndarray, tuple[float, ...]], ...]:
    pc = popcounts(m)
    out = []
    for lo, hi, _ in _weights(m):
        w = tuple(math.factorial(int(k)) * math.factorial(m - int(k) - 1) / math.factorial(m) for k in pc[lo])
        out.append((lo, hi, w))
    return tuple(out)


def shapley_float64(counts: np.ndarray, m: int) -> np.ndarray:
    """Shapley values in plain double precision, summed term by term.

    This reproduces what a straightforward floating-point implementation of
    the definition computes, rounding noise included: exact zeros can come
    out as tiny non-zeros and exact ties can break.  Only meant for
    comparing against statistics produced that way; use the exact path for
    anything else.
    """
    size = (1 << (m - popcounts(m))).astype(np.float64)
    phi = counts.astype(np.float64) / size
    out = np.zeros((counts.shape[0], m), dtype=np.float64)
    for i, (lo, hi, w) in enumerate(_float_weights(m)):
        acc = np.zeros(counts.shape[0], dtype=np.float64)
        for s0, s1, wk in zip(lo, hi, w):
            acc = acc + wk * (phi[:, s1] - phi[:, s0])
        out[:, i] = acc
    return out


# --- per-instance API -----------------------------------------------------


@lru_cache(maxsize=1024)
def problem_counts(e: ExplanationProblem) -> np.ndarray:
    """Slice counts for one problem, indexed by feature set (read-only)."""
    check_arity(e.m)
    out = slice_counts(e.function.array()[None, :], e.v_index, e.m)[0]
    out.flags.writeable = False
    return out


def phi(S: FeatureSet, e: ExplanationProblem) -> Fraction:
    """Average of the classifier over the points agreeing with ``v`` on ``S``."""
    if S < 0 or S & ~full_set(e.m):
        raise ValueError(f"feature set {S:#b} has features outside 1..{e.m}")
    free = e.m - S.bit_count()
    return Fraction(int(problem_counts(e)[S]), 1 << free)


@dataclass(frozen=True)
class ShapleyVector:
    values: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def floats(self) -> list[float]:
        return [float(x) for x in self.values]

    def to_json(self) -> list[dict]:
        return [
            {
                "feature": i,
                "numerator": x.numerator,
                "denominator": x.denominator,
                "float": float(x),
            }
            for i, x in enumerate(self.values, 1)
        ]


@lru_cache(maxsize=1024)
def shapley_all(e: ExplanationProblem) -> ShapleyVector:
    nums = shapley_numerators(problem_counts(e)[None, :], e.m)[0]
    d = denominator(e.m)
    return ShapleyVector(tuple(Fraction(int(x), d) for x in nums))


def shapley_value(i: int, e: ExplanationProblem) -> Fraction:
    if not 1 <= i <= e.m:
        raise ValueError(f"feature {i} out of range 1..{e.m}")
    return shapley_all(e)[i - 1]
