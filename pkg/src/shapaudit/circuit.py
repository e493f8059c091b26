"""Negation normal form circuits: parsing, d-DNNF checks, materialization.

File format, one node per line, children defined before their parents::

    # comments and blank lines are ignored
    VARS 4              (optional; arity defaults to the largest variable)
    n1 VAR 1
    n2 NVAR 2
    n3 TRUE
    n4 FALSE
    n5 AND n1 n2
    n6 OR n5 n3
    ROOT n6
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .core import ArityError, BooleanFunction, FormatError, check_arity

KINDS = ("VAR", "NVAR", "TRUE", "FALSE", "AND", "OR")
_NODE_ID = re.compile(r"n\d+$")


class CircuitError(FormatError):
    pass


@dataclass(frozen=True)
class Node:
    kind: str
    var: int = 0
    children: tuple[int, ...] = ()


@dataclass(frozen=True)
class Circuit:
    """Nodes in topological order; ``children`` index into ``nodes``."""

    nodes: tuple[Node, ...]
    root: int
    m: int
    names: tuple[str, ...] = ()


def parse_circuit(text: str, arity: int | None = None) -> Circuit:
    nodes: list[Node] = []
    names: list[str] = []
    index: dict[str, int] = {}
    declared = None
    root = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        where = f"line {lineno}"
        if root is not None:
            raise CircuitError(f"{where}: content after ROOT")
        if tok[0] == "ROOT":
            if len(tok) != 2:
                raise CircuitError(f"{where}: ROOT takes exactly one node id")
            if tok[1] not in index:
                raise CircuitError(f"{where}: ROOT refers to undefined node {tok[1]}")
            root = index[tok[1]]
            continue
        if tok[0] == "VARS":
            if len(tok) != 2 or not tok[1].isdigit() or int(tok[1]) < 1:
                raise CircuitError(f"{where}: VARS takes one positive integer")
            declared = int(tok[1])
            continue
        name = tok[0]
        if not _NODE_ID.match(name):
            raise CircuitError(f"{where}: bad node id {name!r}")
        if name in index:
            raise CircuitError(f"{where}: node {name} defined twice")
        if len(tok) < 2 or tok[1] not in KINDS:
            raise CircuitError(f"{where}: expected one of {', '.join(KINDS)}")
        kind, args = tok[1], tok[2:]
        if kind in ("VAR", "NVAR"):
            if len(args) != 1 or not args[0].isdigit() or int(args[0]) < 1:
                raise CircuitError(f"{where}: {kind} takes one variable number >= 1")
            node = Node(kind, var=int(args[0]))
        elif kind in ("TRUE", "FALSE"):
            if args:
                raise CircuitError(f"{where}: {kind} takes no arguments")
            node = Node(kind)
        else:
            if not args:
                raise CircuitError(f"{where}: {kind} needs at least one child")
            kids = []
            for a in args:
                if a not in index:
                    raise CircuitError(
                        f"{where}: child {a} is undefined or defined later"
                    )
                kids.append(index[a])
            node = Node(kind, children=tuple(kids))
        index[name] = len(nodes)
        nodes.append(node)
        names.append(name)
    if root is None:
        raise CircuitError("missing ROOT line")

    used = max((n.var for n in nodes), default=0)
    m = arity if arity is not None else declared if declared is not None else used
    if m < 1:
        raise CircuitError("circuit references no variable; declare the arity with VARS")
    if used > m:
        raise CircuitError(f"variable x{used} exceeds the declared arity {m}")
    return Circuit(tuple(nodes), root, m, tuple(names))


def render_circuit(c: Circuit) -> str:
    names = c.names or tuple(f"n{i + 1}" for i in range(len(c.nodes)))
    lines = [f"VARS {c.m}"]
    for name, node in zip(names, c.nodes):
        if node.kind in ("VAR", "NVAR"):
            lines.append(f"{name} {node.kind} {node.var}")
        elif node.kind in ("TRUE", "FALSE"):
            lines.append(f"{name} {node.kind}")
        else:
            lines.append(f"{name} {node.kind} " + " ".join(names[k] for k in node.children))
    lines.append(f"ROOT {names[c.root]}")
    return "\n".join(lines) + "\n"


def _supports(c: Circuit) -> list[int]:
    sup = []
    for node in c.nodes:
        if node.kind in ("VAR", "NVAR"):
            sup.append(1 << (node.var - 1))
        else:
            s = 0
            for k in node.children:
                s |= sup[k]
            sup.append(s)
    return sup


def check_decomposable(c: Circuit) -> bool:
    """Every AND node has children over pairwise-disjoint variables."""
    sup = _supports(c)
    for node in c.nodes:
        if node.kind != "AND":
            continue
        seen = 0
        for k in node.children:
            if seen & sup[k]:
                return False
            seen |= sup[k]
    return True


def _var_table(m: int, var: int) -> int:
    bits = 0
    shift = m - var
    for idx in range(1 << m):
        if idx >> shift & 1:
            bits |= 1 << idx
    return bits


def node_tables(c: Circuit) -> list[int]:
    """Bit-parallel truth table of every node (bit ``idx`` = value at point idx)."""
    check_arity(c.m)
    full = (1 << (1 << c.m)) - 1
    var_cache: dict[int, int] = {}
    out: list[int] = []
    for node in c.nodes:
        if node.kind in ("VAR", "NVAR"):
            if node.var not in var_cache:
                var_cache[node.var] = _var_table(c.m, node.var)
            t = var_cache[node.var]
            out.append(t if node.kind == "VAR" else full ^ t)
        elif node.kind == "TRUE":
            out.append(full)
        elif node.kind == "FALSE":
            out.append(0)
        elif node.kind == "AND":
            t = full
            for k in node.children:
                t &= out[k]
            out.append(t)
        else:
            t = 0
            for k in node.children:
                t |= out[k]
            out.append(t)
    return out


def check_deterministic(c: Circuit) -> bool:
    """No point satisfies two children of the same OR node."""
    tables = node_tables(c)
    for node in c.nodes:
        if node.kind != "OR":
            continue
        seen = 0
        for k in node.children:
            if seen & tables[k]:
                return False
            seen |= tables[k]
    return True


def materialize(c: Circuit) -> BooleanFunction:
    return BooleanFunction(c.m, node_tables(c)[c.root])


def evaluate_circuit(c: Circuit, point: Sequence[int]) -> int:
    """Recursive evaluation at one point, independent of :func:`materialize`."""
    if len(point) != c.m:
        raise ArityError(f"point has {len(point)} coordinates, circuit has arity {c.m}")
    memo: dict[int, int] = {}

    def ev(k: int) -> int:
        if k in memo:
            return memo[k]
        node = c.nodes[k]
        if node.kind == "VAR":
            r = point[node.var - 1]
        elif node.kind == "NVAR":
            r = 1 - point[node.var - 1]
        elif node.kind == "TRUE":
            r = 1
        elif node.kind == "FALSE":
            r = 0
        elif node.kind == "AND":
            r = int(all(ev(ch) for ch in node.children))
        else:
            r = int(any(ev(ch) for ch in node.children))
        memo[k] = r
        return r

    return ev(c.root)


def is_ddnnf(c: Circuit) -> bool:
    return check_decomposable(c) and check_deterministic(c)


def load_circuit(path: str, arity: int | None = None) -> Circuit:
    with open(path) as fh:
        return parse_circuit(fh.read(), arity)

