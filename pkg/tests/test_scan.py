import itertools
import json
import random

import pytest

from shapaudit.audit import all_irrelevant_dominate, detect_issues, ranking_diagnostics
from shapaudit.core import ArityError, BooleanFunction, make_problem
from shapaudit.scan import (
    ISSUES,
    ScanConfig,
    ScanSummary,
    merge,
    scan_functions,
    scan_range,
)


def test_m1_has_no_issues():
    s = scan_functions(1)
    assert s.functions_total == 4
    assert s.functions_scanned == 2
    assert s.instances_total == 4
    assert all(getattr(s, f"with_{k}") == 0 for k in ISSUES)
    assert all(v == 0 for k, v in s.counters().items() if k.startswith("instances_") and k != "instances_total")


def test_rejects_large_m():
    with pytest.raises(ArityError):
        scan_functions(5)
    with pytest.raises(ArityError):
        scan_functions(0)


def test_rejects_bad_config():
    with pytest.raises(ValueError):
        scan_functions(2, ScanConfig(K=3))
    with pytest.raises(ValueError):
        scan_functions(2, ScanConfig(arithmetic="decimal"))


def test_merge_identity_and_commutativity():
    cfg = ScanConfig()
    a = scan_range(3, 0, 100, cfg)
    b = scan_range(3, 100, 256, cfg)
    empty = ScanSummary.empty(3, cfg)
    assert merge(a, empty) == a
    assert merge(a, b) == merge(b, a)


def test_split_equals_single_pass():
    whole = scan_functions(3)
    assert merge(scan_range(3, 0, 77), scan_range(3, 77, 256)) == whole
    assert scan_functions(3, chunk=16) == whole


def test_merge_rejects_mismatch():
    with pytest.raises(ValueError):
        merge(scan_range(3, 0, 10), scan_range(3, 0, 10, ScanConfig(K=1)))


@pytest.mark.parametrize("workers", [2, 8])
def test_workers_do_not_change_result(workers):
    assert scan_functions(3, ScanConfig(workers=workers), chunk=32) == scan_functions(3)


def reference_summary(m, K):
    """Scan built from the per-instance API, one problem at a time."""
    out = ScanSummary.empty(m, ScanConfig(K=K))
    n = 1 << m
    for index in range(1 << n):
        f = BooleanFunction.from_index(m, index)
        out.functions_total += 1
        if f.constant:
            continue
        out.functions_scanned += 1
        seen = dict.fromkeys(ISSUES + ("dominate",), False)
        for v in itertools.product((0, 1), repeat=m):
            e = make_problem(f, v)
            r = detect_issues(e)
            flags = {"I1": r.i1, "I2": r.i2, "I3": r.i3, "I4": r.i4, "dominate": all_irrelevant_dominate(e)}
            out.instances_total += 1
            for k, x in flags.items():
                seen[k] |= x
                setattr(out, f"instances_{k}", getattr(out, f"instances_{k}") + x)
            d = ranking_diagnostics(e, K).to_json()
            for k in ("out_of_order", "exists_R_in_botK", "maj_R_in_botK", "exists_I_in_topK", "maj_I_in_topK"):
                setattr(out, f"instances_{k}", getattr(out, f"instances_{k}") + d[k])
        for k, x in seen.items():
            setattr(out, f"with_{k}", getattr(out, f"with_{k}") + x)
    return out


@pytest.mark.parametrize("m, K", [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)])
def test_matches_per_instance_api(m, K):
    assert scan_functions(m, ScanConfig(K=K)) == reference_summary(m, K)


def test_m3_bounds():
    s = scan_functions(3)
    assert s.functions_scanned == 2 ** 8 - 2
    assert s.with_I4 <= min(s.with_I1, s.with_I3)
    for k, v in s.counters().items():
        if k.startswith("with_"):
            assert v <= s.functions_scanned
        elif k.startswith("instances_"):
            assert v <= s.instances_total


def test_include_constants():
    s = scan_functions(2, ScanConfig(exclude_constants=False))
    assert s.functions_scanned == 16
    assert s.instances_total == 64
    assert s.with_I1 == scan_functions(2).with_I1


def _issue_flags(f):
    flags = [False] * 4
    for v in itertools.product((0, 1), repeat=f.m):
        r = detect_issues(make_problem(f, v))
        flags = [a or b for a, b in zip(flags, (r.i1, r.i2, r.i3, r.i4))]
    return flags


def test_permutation_orbits_share_flags():
    rng = random.Random(3)
    for index in rng.sample(range(1, 255), 25):
        f = BooleanFunction.from_index(3, index)
        base = _issue_flags(f)
        for perm in itertools.permutations(range(3)):
            g = BooleanFunction.from_callable(3, lambda *y, p=perm: f([y[p.index(i)] for i in range(3)]))
            assert _issue_flags(g) == base


def test_json_and_csv_round_trip():
    s = scan_functions(2)
    data = json.loads(json.dumps(s.to_json()))
    assert ScanSummary.from_json(data) == s
    lines = s.to_csv().splitlines()
    assert len(lines) == 2
    header, row = lines[0].split(","), lines[1].split(",")
    rec = dict(zip(header, row))
    assert int(rec["with_I1"]) == s.with_I1
    assert rec["pct_I1"] == f"{s.percent('I1'):.2f}"


def test_float64_mode_agrees_on_small_m():
    # no rounding trouble at m <= 3: the float path reproduces exact counts
    for m in (1, 2, 3):
        a = scan_functions(m)
        b = scan_functions(m, ScanConfig(arithmetic="float64"))
        assert a.counters() == b.counters()


@pytest.mark.slow
def test_m4_exact_counts():
    # frozen from an independent numpy prototype of the definitions
    s = scan_functions(4, ScanConfig(workers=4))
    assert s.functions_scanned == 65534
    assert s.instances_total == 65534 * 16
    assert (s.with_I1, s.with_I2, s.with_I3, s.with_I4) == (65320, 38208, 8856, 3712)
    assert s.instances_dominate == 1664
