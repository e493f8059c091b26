"""Checks of Shapley values against feature relevancy.

Issues, for one instance:

* I1: an irrelevant feature has a non-zero Shapley value.
* I2: an irrelevant feature has a strictly larger |Sv| than a relevant one.
* I3: a relevant feature has a Shapley value of zero.
* I4: I1 and I3 hold at the same time.

Per-instance functions work on exact fractions.  The ``*_flags`` functions
are batch versions over ``(B, m)`` score arrays used by the exhaustive scan;
they accept exact integer numerators (shared denominator) or floats.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import ExplanationProblem
from .shapley import shapley_all
from .xplain import relevancy_all


@dataclass(frozen=True)
class IssueReport:
    i1: bool
    i2: bool
    i3: bool
    i4: bool
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "I1": self.i1,
            "I2": self.i2,
            "I3": self.i3,
            "I4": self.i4,
            "witnesses": self.witnesses,
        }


@dataclass(frozen=True)
class RankingDiagnostics:
    K: int
    out_of_order: bool
    exists_R_in_botK: bool
    maj_R_in_botK: bool
    exists_I_in_topK: bool
    maj_I_in_topK: bool

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "out_of_order": self.out_of_order,
            "exists_R_in_botK": self.exists_R_in_botK,
            "maj_R_in_botK": self.maj_R_in_botK,
            "exists_I_in_topK": self.exists_I_in_topK,
            "maj_I_in_topK": self.maj_I_in_topK,
        }


def _relevant_flags(e: ExplanationProblem) -> list[bool]:
    rel = relevancy_all(e)
    return [bool(rel >> i & 1) for i in range(e.m)]


def issues_of(scores: Sequence, relevant: Sequence[bool]) -> IssueReport:
    """Issue flags for one instance given its scores and relevancy flags."""
    feats = range(len(scores))
    irr = [i for i in feats if not relevant[i]]
    rel = [i for i in feats if relevant[i]]
    w: dict = {}

    i1_at = next((i for i in irr if scores[i] != 0), None)
    if i1_at is not None:
        w["I1"] = i1_at + 1
    i3_at = next((i for i in rel if scores[i] == 0), None)
    if i3_at is not None:
        w["I3"] = i3_at + 1
    i2 = False
    if irr and rel:
        top_irr = max(irr, key=lambda i: (abs(scores[i]), -i))
        low_rel = min(rel, key=lambda i: (abs(scores[i]), i))
        i2 = abs(scores[top_irr]) > abs(scores[low_rel])
        if i2:
            w["I2"] = [top_irr + 1, low_rel + 1]
    i4 = i1_at is not None and i3_at is not None
    if i4:
        w["I4"] = [i1_at + 1, i3_at + 1]
    return IssueReport(i1_at is not None, i2, i3_at is not None, i4, w)


def detect_issues(e: ExplanationProblem) -> IssueReport:
    return issues_of(shapley_all(e).values, _relevant_flags(e))


def rank_features(scores: Sequence, absolute: bool = True) -> list[int]:
    """Features (1-based) from most to least important; ties keep index order."""
    key = abs if absolute else (lambda x: x)
    return sorted(range(1, len(scores) + 1), key=lambda i: -key(scores[i - 1]))


def diagnose(
    scores: Sequence, relevant: Sequence[bool], K: int, absolute: bool = True
) -> RankingDiagnostics:
    m = len(scores)
    if not 1 <= K <= m:
        raise ValueError(f"K must be in 1..{m}, got {K}")
    key = [abs(s) if absolute else s for s in scores]
    order = [i - 1 for i in rank_features(scores, absolute)]
    irr = [i for i in range(m) if not relevant[i]]
    rel = [i for i in range(m) if relevant[i]]

    out_of_order = bool(irr and rel) and max(key[i] for i in irr) > min(key[i] for i in rel)

    bot = order[m - K:]
    bot_rel = [i for i in bot if relevant[i]]
    r_cross = bool(bot_rel and irr) and max(key[i] for i in irr) > min(key[i] for i in bot_rel)
    top = order[:K]
    top_irr = [i for i in top if not relevant[i]]
    i_cross = bool(top_irr and rel) and max(key[i] for i in top_irr) > min(key[i] for i in rel)

    return RankingDiagnostics(
        K,
        out_of_order,
        r_cross,
        r_cross and 2 * len(bot_rel) > K,
        i_cross,
        i_cross and 2 * len(top_irr) > K,
    )


def ranking_diagnostics(e: ExplanationProblem, K: int, absolute: bool = True) -> RankingDiagnostics:
    return diagnose(shapley_all(e).values, _relevant_flags(e), K, absolute)


def dominates(scores: Sequence, relevant: Sequence[bool]) -> bool:
    irr = [abs(s) for s, r in zip(scores, relevant) if not r]
    rel = [abs(s) for s, r in zip(scores, relevant) if r]
    return bool(irr and rel) and min(irr) > max(rel)


def all_irrelevant_dominate(e: ExplanationProblem) -> bool:
    """Every irrelevant feature has a larger |Sv| than every relevant one."""
    return dominates(shapley_all(e).values, _relevant_flags(e))


def wrong_pairs(candidate: Sequence[float], reference: Sequence[Fraction]) -> tuple[int, int]:
    """Count feature pairs whose strict |reference| order the candidate misses.

    Returns ``(wrong, total)`` where ``total`` counts the reference pairs
    with distinct magnitudes; tied reference pairs are not judged.
    """
    if len(candidate) != len(reference):
        raise ValueError(
            f"candidate has {len(candidate)} scores, reference has {len(reference)}"
        )
    cand = [abs(x) for x in candidate]
    ref = [abs(x) for x in reference]
    wrong = total = 0
    m = len(ref)
    for i in range(m):
        for j in range(i + 1, m):
            if ref[i] == ref[j]:
                continue
            hi, lo = (i, j) if ref[i] > ref[j] else (j, i)
            total += 1
            if not cand[hi] > cand[lo]:
                wrong += 1
    return wrong, total


# --- batch versions -------------------------------------------------------


def _masked_max(a: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return np.where(mask, a, -np.inf).max(axis=1)


def _masked_min(a: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return np.where(mask, a, np.inf).min(axis=1)


def issue_flags(scores: np.ndarray, relevant: np.ndarray) -> dict[str, np.ndarray]:
    """Per-row I1..I4 and the dominate flag; ``scores`` is ``(B, m)``."""
    irr = ~relevant
    # int numerators convert exactly: below 2**53 for m <= 14
    a = np.abs(scores).astype(np.float64)
    i1 = (irr & (scores != 0)).any(axis=1)
    i3 = (relevant & (scores == 0)).any(axis=1)
    i2 = _masked_max(a, irr) > _masked_min(a, relevant)
    dom = irr.any(axis=1) & relevant.any(axis=1) & (_masked_min(a, irr) > _masked_max(a, relevant))
    return {"I1": i1, "I2": i2, "I3": i3, "I4": i1 & i3, "dominate": dom}


def diagnostic_flags(scores: np.ndarray, relevant: np.ndarray, K: int) -> dict[str, np.ndarray]:
    """Batch form of :func:`diagnose` with absolute-value ranking.

    Rows without a relevant (or irrelevant) feature come out all-false: the
    masked extrema are +/-inf there and the strict comparisons fail.
    """
    m = scores.shape[1]
    if not 1 <= K <= m:
        raise ValueError(f"K must be in 1..{m}, got {K}")
    a = np.abs(scores).astype(np.float64)
    irr = ~relevant
    order = np.argsort(-a, axis=1, kind="stable")
    rows = np.arange(a.shape[0])[:, None]
    top = np.zeros_like(relevant)
    top[rows, order[:, :K]] = True
    bot = np.zeros_like(relevant)
    bot[rows, order[:, m - K:]] = True

    max_irr = _masked_max(a, irr)
    min_rel = _masked_min(a, relevant)
    out_of_order = max_irr > min_rel
    bot_rel = bot & relevant
    r_cross = max_irr > _masked_min(a, bot_rel)
    top_irr = top & irr
    i_cross = _masked_max(a, top_irr) > min_rel
    return {
        "out_of_order": out_of_order,
        "exists_R_in_botK": r_cross,
        "maj_R_in_botK": r_cross & (2 * bot_rel.sum(axis=1) > K),
        "exists_I_in_topK": i_cross,
        "maj_I_in_topK": i_cross & (2 * top_irr.sum(axis=1) > K),
    }
