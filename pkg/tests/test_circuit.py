import itertools
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shapaudit.circuit import (
    Circuit,
    CircuitError,
    Node,
    check_decomposable,
    check_deterministic,
    evaluate_circuit,
    load_circuit,
    materialize,
    parse_circuit,
    render_circuit,
)
from shapaudit.core import ArityError, render_tt

CIRCUITS = Path(__file__).resolve().parent.parent / "circuits"


@pytest.fixture(params=["kappa1", "kappa2"])
def case_study(request):
    return request.param, load_circuit(CIRCUITS / f"{request.param}.cir")


def test_case_studies_materialize(case_study):
    name, c = case_study
    assert c.m == 4
    expected = {"kappa1": "0000000000011000", "kappa2": "0000000000011011"}[name]
    assert render_tt(materialize(c)) == expected


def test_case_studies_are_ddnnf(case_study):
    _, c = case_study
    assert check_decomposable(c)
    assert check_deterministic(c)


def test_single_literal():
    c = parse_circuit("n1 VAR 1\nROOT n1")
    assert c.m == 1
    assert render_tt(materialize(c)) == "01"
    assert check_decomposable(c) and check_deterministic(c)


def test_constant_with_declared_arity():
    f = materialize(parse_circuit("VARS 1\nn1 TRUE\nROOT n1"))
    assert render_tt(f) == "11"
    assert f.constant


def test_arity_override():
    c = parse_circuit("n1 NVAR 2\nROOT n1", arity=3)
    assert render_tt(materialize(c)) == "11001100"


@pytest.mark.parametrize(
    "text",
    [
        "ROOT n9",
        "n1 VAR 1",
        "n2 AND n1\nn1 VAR 1\nROOT n2",
        "n1 XOR 1\nROOT n1",
        "n1 VAR 0\nROOT n1",
        "x1 VAR 1\nROOT x1",
        "n1 VAR 1\nn1 VAR 2\nROOT n1",
        "n1 TRUE\nROOT n1",
        "n1 VAR 1\nROOT n1\nn2 VAR 2",
        "VARS 1\nn1 VAR 2\nROOT n1",
        "n1 AND\nROOT n1",
    ],
)
def test_parse_errors(text):
    with pytest.raises(CircuitError):
        parse_circuit(text)


def test_decomposability():
    assert not check_decomposable(parse_circuit("n1 VAR 1\nn2 NVAR 1\nn3 AND n1 n2\nROOT n3"))


def test_determinism():
    assert not check_deterministic(parse_circuit("n1 VAR 1\nn2 VAR 2\nn3 OR n1 n2\nROOT n3"))
    ok = "n1 VAR 1\nn2 NVAR 1\nn3 VAR 2\nn4 AND n2 n3\nn5 OR n1 n4\nROOT n5"
    assert check_deterministic(parse_circuit(ok))


def test_arity_cap(monkeypatch):
    monkeypatch.setenv("AUDIT_MAX_ARITY", "3")
    with pytest.raises(ArityError):
        materialize(parse_circuit("n1 VAR 4\nROOT n1"))


def test_render_round_trip(case_study):
    _, c = case_study
    again = parse_circuit(render_circuit(c))
    assert materialize(again) == materialize(c)


# random circuits for the cross-checks


@st.composite
def circuits(draw, max_m=5, max_nodes=14):
    m = draw(st.integers(1, max_m))
    nodes = []
    for k in range(draw(st.integers(1, max_nodes))):
        if k < 2 or draw(st.booleans()):
            kind = draw(st.sampled_from(["VAR", "NVAR", "VAR", "NVAR", "TRUE", "FALSE"]))
            var = draw(st.integers(1, m)) if kind in ("VAR", "NVAR") else 0
            nodes.append(Node(kind, var=var))
        else:
            kind = draw(st.sampled_from(["AND", "OR"]))
            kids = draw(st.lists(st.integers(0, k - 1), min_size=1, max_size=3))
            nodes.append(Node(kind, children=tuple(kids)))
    return Circuit(tuple(nodes), len(nodes) - 1, m)


@settings(max_examples=200, deadline=None)
@given(circuits())
def test_materialize_matches_pointwise(c):
    f = materialize(c)
    for idx, p in enumerate(itertools.product((0, 1), repeat=c.m)):
        assert f.bits >> idx & 1 == evaluate_circuit(c, p)


def _reorder(c: Circuit) -> Circuit:
    nodes = tuple(
        Node(n.kind, n.var, tuple(reversed(n.children))) for n in c.nodes
    )
    return Circuit(nodes, c.root, c.m)


@settings(max_examples=200, deadline=None)
@given(circuits())
def test_checks_invariant_under_child_reordering(c):
    r = _reorder(c)
    assert check_decomposable(r) == check_decomposable(c)
    assert check_deterministic(r) == check_deterministic(c)
    assert materialize(r) == materialize(c)
