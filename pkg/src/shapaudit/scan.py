"""Exhaustive scan over every Boolean function of m variables.

Functions are numbered by their truth-table string read as a binary number
(``"0110..."`` -> ``int("0110...", 2)``).  Each worker scans a contiguous
index range into its own :class:`ScanSummary`; summaries are plain counters
and merge by addition, so the result does not depend on worker count or
shard order.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .audit import diagnostic_flags, issue_flags
from .core import SCAN_MAX_ARITY, ArityError
from .shapley import shapley_float64, shapley_numerators, slice_counts
from .xplain import relevancy_from_sigma, sigma_from_counts

ISSUES = ("I1", "I2", "I3", "I4")
DIAGNOSTICS = (
    "out_of_order",
    "exists_R_in_botK",
    "maj_R_in_botK",
    "exists_I_in_topK",
    "maj_I_in_topK",
)
ARITHMETIC = ("exact", "float64")
CHUNK = 4096


@dataclass(frozen=True)
class ScanConfig:
    """Scan options.

    ``arithmetic="float64"`` evaluates Shapley values in double precision
    and zero-tests them as-is, which is how a naive floating-point
    implementation behaves.  The default keeps everything exact.
    """

    exclude_constants: bool = True
    K: int | None = None  # None: min(2, m)
    workers: int = 1
    arithmetic: str = "exact"


@dataclass
class ScanSummary:
    m: int
    K: int
    exclude_constants: bool
    arithmetic: str
    functions_total: int = 0
    functions_scanned: int = 0
    with_I1: int = 0
    with_I2: int = 0
    with_I3: int = 0
    with_I4: int = 0
    with_dominate: int = 0
    instances_total: int = 0
    instances_I1: int = 0
    instances_I2: int = 0
    instances_I3: int = 0
    instances_I4: int = 0
    instances_dominate: int = 0
    instances_out_of_order: int = 0
    instances_exists_R_in_botK: int = 0
    instances_maj_R_in_botK: int = 0
    instances_exists_I_in_topK: int = 0
    instances_maj_I_in_topK: int = 0

    _KEYS = ("m", "K", "exclude_constants", "arithmetic")

    @classmethod
    def empty(cls, m: int, cfg: ScanConfig) -> "ScanSummary":
        cfg = _resolve(m, cfg)
        return cls(m, cfg.K, cfg.exclude_constants, cfg.arithmetic)

    def counters(self) -> dict[str, int]:
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name not in self._KEYS}

    def merge(self, other: "ScanSummary") -> "ScanSummary":
        return merge(self, other)

    def percent(self, name: str) -> float:
        """``with_<name>`` as a percentage of scanned functions, 2 decimals."""
        if not self.functions_scanned:
            return 0.0
        return round(100 * getattr(self, f"with_{name}") / self.functions_scanned, 2)

    def instance_percent(self, name: str) -> float:
        if not self.instances_total:
            return 0.0
        return round(100 * getattr(self, f"instances_{name}") / self.instances_total, 2)

    def to_json(self) -> dict:
        out = asdict(self)
        out["percent_functions"] = {k: self.percent(k) for k in ISSUES}
        out["percent_instances"] = {
            k: self.instance_percent(k) for k in ISSUES + ("dominate",) + DIAGNOSTICS
        }
        return out

    def to_csv(self) -> str:
        row = {
            "m": self.m,
            **{f"pct_{k}": f"{self.percent(k):.2f}" for k in ISSUES},
            **self.counters(),
            "K": self.K,
            "arithmetic": self.arithmetic,
            "exclude_constants": int(self.exclude_constants),
        }
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
        writer.writeheader()
        writer.writerow(row)
        return buf.getvalue()

    @classmethod
    def from_json(cls, data: dict) -> "ScanSummary":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})


def merge(a: ScanSummary, b: ScanSummary) -> ScanSummary:
    for key in ScanSummary._KEYS:
        if getattr(a, key) != getattr(b, key):
            raise ValueError(f"cannot merge summaries with different {key}")
    ca, cb = a.counters(), b.counters()
    return replace(a, **{k: ca[k] + cb[k] for k in ca})


def function_tables(m: int, lo: int, hi: int) -> np.ndarray:
    """Truth tables of functions ``lo..hi-1`` as a ``(hi-lo, 2**m)`` array."""
    n = 1 << m
    idx = np.arange(lo, hi, dtype=np.int64)
    return (idx[:, None] >> (n - 1 - np.arange(n))) & 1


def _resolve(m: int, cfg: ScanConfig) -> ScanConfig:
    if cfg.K is None:
        cfg = replace(cfg, K=min(2, m))
    _check(m, cfg)
    return cfg


def _check(m: int, cfg: ScanConfig) -> None:
    if not 1 <= m <= SCAN_MAX_ARITY:
        raise ArityError(f"exhaustive scans support 1 <= m <= {SCAN_MAX_ARITY}, got {m}")
    if not 1 <= cfg.K <= m:
        raise ValueError(f"K must be in 1..{m}, got {cfg.K}")
    if cfg.arithmetic not in ARITHMETIC:
        raise ValueError(f"arithmetic must be one of {ARITHMETIC}, got {cfg.arithmetic!r}")


def scan_range(m: int, lo: int, hi: int, cfg: ScanConfig = ScanConfig()) -> ScanSummary:
    """Scan the functions with indices in ``[lo, hi)``."""
    cfg = _resolve(m, cfg)
    n = 1 << m
    if not 0 <= lo <= hi <= 1 << n:
        raise ValueError(f"index range [{lo}, {hi}) outside 0..2**{n}")
    out = ScanSummary.empty(m, cfg)
    tables = function_tables(m, lo, hi)
    ones = tables.sum(axis=1)
    keep = np.ones(len(tables), dtype=bool)
    if cfg.exclude_constants:
        keep = (ones > 0) & (ones < n)
    out.functions_total = hi - lo
    out.functions_scanned = int(keep.sum())
    out.instances_total = out.functions_scanned * n
    tables = tables[keep]
    if not len(tables):
        return out

    seen = {k: np.zeros(len(tables), dtype=bool) for k in ISSUES + ("dominate",)}
    for v in range(n):
        counts = slice_counts(tables, v, m)
        if cfg.arithmetic == "exact":
            scores = shapley_numerators(counts, m)
        else:
            scores = shapley_float64(counts, m)
        rel = relevancy_from_sigma(sigma_from_counts(counts, tables[:, v], m), m)
        flags = issue_flags(scores, rel)
        for k, x in flags.items():
            seen[k] |= x
            setattr(out, f"instances_{k}", getattr(out, f"instances_{k}") + int(x.sum()))
        for k, x in diagnostic_flags(scores, rel, cfg.K).items():
            setattr(out, f"instances_{k}", getattr(out, f"instances_{k}") + int(x.sum()))
    for k, x in seen.items():
        setattr(out, f"with_{k}", int(x.sum()))
    return out


def _shards(m: int, chunk: int) -> list[tuple[int, int]]:
    total = 1 << (1 << m)
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def _scan_shard(args: tuple[int, int, int, ScanConfig]) -> ScanSummary:
    m, lo, hi, cfg = args
    return scan_range(m, lo, hi, cfg)


def scan_functions(m: int, cfg: ScanConfig = ScanConfig(), chunk: int = CHUNK) -> ScanSummary:
    """Scan every Boolean function of ``m`` variables and all its instances."""
    cfg = _resolve(m, cfg)
    jobs = [(m, lo, hi, cfg) for lo, hi in _shards(m, chunk)]
    total = ScanSummary.empty(m, cfg)
    if cfg.workers <= 1 or len(jobs) == 1:
        parts = map(_scan_shard, jobs)
        for part in parts:
            total = merge(total, part)
        return total
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        for part in pool.map(_scan_shard, jobs):
            total = merge(total, part)
    return total


def dumps(summary: ScanSummary) -> str:
    return json.dumps(summary.to_json(), indent=2)
