"""Sufficiency function, abductive/contrastive explanations and relevancy.

The sufficiency table ``sigma`` is indexed by feature set: ``sigma[S]`` is
true iff fixing the features in ``S`` to their values in ``v`` forces the
prediction ``c``.  It is monotone, so weak AXp's are its true points, AXp's
its minimal true points, and a feature is relevant iff it is an essential
variable of ``sigma``.

The explainability function xi (agreement of every point in the slice with
``c``) is the same predicate as ``sigma``; use :func:`waxp` for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import ExplanationProblem, FeatureSet, features_of, full_set, popcounts
from .shapley import problem_counts


def sigma_from_counts(counts: np.ndarray, c: np.ndarray | int, m: int) -> np.ndarray:
    """Batch sufficiency tables from slice counts (see ``shapley.slice_counts``).

    ``c`` is the predicted class, scalar or one per row.
    """
    size = 1 << (m - popcounts(m))
    c = np.asarray(c).reshape(-1, 1)
    return np.where(c == 1, counts == size, counts == 0)


def relevancy_from_sigma(sigma: np.ndarray, m: int) -> np.ndarray:
    """Essential-variable test on batch sigma tables, shape ``(B, m)`` of bools."""
    b = sigma.shape[0]
    out = np.empty((b, m), dtype=bool)
    for i in range(m):
        view = sigma.reshape(b, -1, 2, 1 << i)
        out[:, i] = (view[:, :, 0, :] != view[:, :, 1, :]).any(axis=(1, 2))
    return out


@dataclass(frozen=True)
class SigmaTable:
    m: int
    table: np.ndarray  # bool, indexed by feature set

    def __getitem__(self, s: FeatureSet) -> bool:
        return bool(self.table[s])

    def true_sets(self) -> list[FeatureSet]:
        return [int(s) for s in np.flatnonzero(self.table)]


@lru_cache(maxsize=1024)
def sigma_build(e: ExplanationProblem) -> SigmaTable:
    table = sigma_from_counts(problem_counts(e)[None, :], e.c, e.m)[0]
    table.flags.writeable = False
    return SigmaTable(e.m, table)


def _check_mask(s: FeatureSet, m: int) -> None:
    if s < 0 or s & ~full_set(m):
        raise ValueError(f"feature set {s:#b} has features outside 1..{m}")


def waxp(S: FeatureSet, e: ExplanationProblem) -> bool:
    _check_mask(S, e.m)
    return sigma_build(e)[S]


def wcxp(Y: FeatureSet, e: ExplanationProblem) -> bool:
    _check_mask(Y, e.m)
    return not sigma_build(e)[full_set(e.m) ^ Y]


def _minimal_true(pred: np.ndarray, m: int) -> list[FeatureSet]:
    # pred is monotone, so a true set is minimal iff dropping any one member falsifies it
    found = []
    for s in np.flatnonzero(pred):
        s = int(s)
        if all(not pred[s ^ (1 << i)] for i in range(m) if s >> i & 1):
            found.append(s)
    found.sort(key=lambda s: (s.bit_count(), s))
    return found


def enumerate_axps(e: ExplanationProblem) -> list[FeatureSet]:
    """All AXp's, by ascending size and then ascending bitmask."""
    return _minimal_true(sigma_build(e).table, e.m)


def enumerate_cxps(e: ExplanationProblem) -> list[FeatureSet]:
    """All CXp's, ordered like :func:`enumerate_axps`."""
    sig = sigma_build(e).table
    # wcxp(Y) = not sigma(F \ Y); complementing the index reflects the table
    return _minimal_true(~sig[::-1], e.m)


@lru_cache(maxsize=1024)
def relevancy_all(e: ExplanationProblem) -> FeatureSet:
    rel = relevancy_from_sigma(sigma_build(e).table[None, :], e.m)[0]
    return sum(1 << i for i in range(e.m) if rel[i])


def relevant(i: int, e: ExplanationProblem) -> bool:
    if not 1 <= i <= e.m:
        raise ValueError(f"feature {i} out of range 1..{e.m}")
    return bool(relevancy_all(e) >> (i - 1) & 1)


@dataclass(frozen=True)
class ExplanationSet:
    axps: tuple[FeatureSet, ...]
    cxps: tuple[FeatureSet, ...]
    relevant: FeatureSet

    def to_json(self) -> dict:
        return {
            "axps": [features_of(x) for x in self.axps],
            "cxps": [features_of(y) for y in self.cxps],
            "relevant": features_of(self.relevant),
        }


def explain(e: ExplanationProblem) -> ExplanationSet:
    return ExplanationSet(
        tuple(enumerate_axps(e)), tuple(enumerate_cxps(e)), relevancy_all(e)
    )
