"""Feature importance from the enumeration of all AXp's.

Each AXp spreads weight over its members, with smaller explanations
weighing more.  Irrelevant features belong to no AXp and so score zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .core import ExplanationProblem
from .xplain import enumerate_axps, relevancy_all

Weight = Callable[[int], Fraction]


def inverse_size(k: int) -> Fraction:
    """Default weight: each AXp hands out a total mass of 1."""
    return Fraction(1, k)


def inverse_power_of_two(k: int) -> Fraction:
    return Fraction(1, 1 << k)


@dataclass(frozen=True)
class ImportanceVector:
    scores: tuple[Fraction, ...]
    relevant: tuple[bool, ...]

    def to_json(self) -> list[dict]:
        return [
            {
                "feature": i,
                "numerator": s.numerator,
                "denominator": s.denominator,
                "float": float(s),
                "relevant": r,
            }
            for i, (s, r) in enumerate(zip(self.scores, self.relevant), 1)
        ]


def axp_importance(e: ExplanationProblem, weight: Weight = inverse_size) -> ImportanceVector:
    scores = [Fraction(0)] * e.m
    for x in enumerate_axps(e):
        w = weight(x.bit_count())
        for i in range(e.m):
            if x >> i & 1:
                scores[i] += w
    rel = relevancy_all(e)
    return ImportanceVector(tuple(scores), tuple(bool(rel >> i & 1) for i in range(e.m)))
