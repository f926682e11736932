"""Regular-graph MBR codes with uncoded exact repair.

Coded units live on the edges of a d-regular graph on n vertices; node i
stores the d units on its incident edges.  Node ids and edge indices are
1-based.  Edge i carries coded unit c_i; the built-in graphs list their
edges in lexicographic order, while a custom graph may order them freely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

import numpy as np

from .analysis import mds_rows_check
from .errors import (
    BadIndex,
    BadParams,
    DegreeTooLarge,
    FieldMismatch,
    FieldTooSmall,
    LengthMismatch,
    MdsViolation,
    OddProduct,
    Underdetermined,
    WrongHelpers,
    WrongUnit,
)
from .field import FieldElement, FieldSpec
from .matrix import MatrixFq, cauchy_matrix, solve_linear, vandermonde_matrix

CAUCHY = "cauchy"
VANDERMONDE = "vandermonde"


def mbr_file_size(k: int, d: int) -> int:
    return k * d - comb(k, 2)


@dataclass(frozen=True)
class RegularGraph:
    n: int
    d: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(set(self.edges)) != len(self.edges):
            raise BadParams("duplicate edges")
        deg = [0] * (self.n + 1)
        for a, b in self.edges:
            if not 1 <= a < b <= self.n:
                raise BadParams(f"bad edge {(a, b)}")
            deg[a] += 1
            deg[b] += 1
        if any(x != self.d for x in deg[1:]):
            raise BadParams(f"graph is not {self.d}-regular")

    def incident(self, v: int) -> list[int]:
        """1-based indices of the edges touching vertex v."""
        return [i + 1 for i, e in enumerate(self.edges) if v in e]

    def neighbors(self, v: int) -> list[int]:
        return sorted(b if a == v else a for a, b in self.edges if v in (a, b))

    def edge_between(self, u: int, v: int) -> int | None:
        key = (min(u, v), max(u, v))
        try:
            return self.edges.index(key) + 1
        except ValueError:
            return None


def parse_edges(text: str) -> tuple[tuple[int, int], ...]:
    """Parse ``"1-2,1-3,..."`` into sorted vertex pairs, keeping the given order."""
    out = []
    for tok in text.replace(" ", "").split(","):
        try:
            a, b = (int(x) for x in tok.split("-"))
        except ValueError:
            raise BadParams(f"bad edge token {tok!r}") from None
        out.append((min(a, b), max(a, b)))
    return tuple(out)


def graph_from_edges(edges, n: int | None = None) -> RegularGraph:
    edges = tuple((min(a, b), max(a, b)) for a, b in edges)
    if not edges:
        raise BadParams("no edges")
    n = max(b for _, b in edges) if n is None else n
    d = 2 * len(edges) // n
    return RegularGraph(n, d, edges)


def complete_graph(n: int) -> RegularGraph:
    if n < 2:
        raise BadParams("complete graph needs n >= 2")
    edges = tuple((a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1))
    return RegularGraph(n, n - 1, edges)


def circulant_regular_graph(n: int, d: int) -> RegularGraph:
    """Vertex i joined to i +- 1, ..., i +- floor(d/2), plus the antipode when d is odd."""
    if (n * d) % 2:
        raise OddProduct(f"n*d = {n * d} is odd")
    if d > n - 1:
        raise DegreeTooLarge(f"degree {d} > n - 1 = {n - 1}")
    if d < 1:
        raise BadParams("degree must be positive")
    offsets = set(range(1, d // 2 + 1))
    if d % 2:
        offsets.add(n // 2)
    edges = set()
    for v in range(n):
        for o in offsets:
            a, b = v + 1, (v + o) % n + 1
            edges.add((min(a, b), max(a, b)))
    return RegularGraph(n, d, tuple(sorted(edges)))


@dataclass(frozen=True)
class NodeContent:
    node: int
    edges: tuple[int, ...]
    values: tuple[int, ...]

    @property
    def units(self) -> list[tuple[int, int]]:
        return list(zip(self.edges, self.values))


@dataclass(frozen=True)
class GraphCode:
    n: int
    k: int
    d: int
    field: FieldSpec
    graph: RegularGraph
    g: MatrixFq
    kind: str
    placement: dict[int, tuple[int, ...]] = field(compare=False)

    family = "graph"

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def M(self) -> int:
        return self.g.cols

    @property
    def alpha(self) -> int:
        return self.d

    def neighbors(self, node: int) -> list[int]:
        return self.graph.neighbors(node)


def gc_build(
    n: int,
    k: int,
    d: int,
    q: int | FieldSpec,
    kind: str = CAUCHY,
    graph: RegularGraph | None = None,
    points: Sequence[int] | None = None,
    ys: Sequence[int] | None = None,
    check_budget: int = 10**6,
) -> GraphCode:
    """Build a regular-graph code for D(n, k, d).

    ``points`` are the Vandermonde evaluation points (default 1..nd/2) or the
    Cauchy x-points (with ``ys`` the y-points; defaults as in cauchy_matrix).
    """
    F = q if isinstance(q, FieldSpec) else FieldSpec(q)
    if not 1 <= k <= d <= n - 1:
        raise BadParams(f"need 1 <= k <= d <= n-1, got n={n} k={k} d={d}")
    if (n * d) % 2:
        raise OddProduct(f"n*d = {n * d} is odd")
    if graph is None:
        graph = complete_graph(n) if d == n - 1 else circulant_regular_graph(n, d)
    elif graph.n != n or graph.d != d:
        raise BadParams("graph does not match (n, d)")
    rows = n * d // 2
    M = mbr_file_size(k, d)
    if kind == CAUCHY:
        g = cauchy_matrix(F, rows, M, points, ys)
    elif kind == VANDERMONDE:
        pts = list(range(1, rows + 1)) if points is None else list(points)
        if points is None and rows >= F.q:
            raise FieldTooSmall(f"default Vandermonde points 1..{rows} need q > {rows}", needed=rows + 1)
        if len(pts) != rows:
            raise BadParams(f"need {rows} evaluation points, got {len(pts)}")
        g = vandermonde_matrix(F, pts, M)
    else:
        raise BadParams(f"unknown matrix kind {kind!r}")
    if (kind == CAUCHY or points is not None) and not mds_rows_check(g, M, budget=check_budget):
        raise MdsViolation("some M rows of the encoding matrix are dependent")
    placement = {v: tuple(graph.incident(v)) for v in range(1, n + 1)}
    return GraphCode(n, k, d, F, graph, g, kind, placement)


def as_vector(field_: FieldSpec, values, length: int | None = None) -> np.ndarray:
    out = []
    for v in values:
        if isinstance(v, FieldElement):
            if v.field != field_:
                raise FieldMismatch(f"element of F_{v.field.q} used with F_{field_.q}")
            v = v.value
        out.append(int(v) % field_.q)
    if length is not None and len(out) != length:
        raise LengthMismatch(f"expected {length} symbols, got {len(out)}", expected=length, got=len(out))
    return np.array(out, dtype=np.int64)


def _check_node(code, node: int) -> None:
    if not isinstance(node, (int, np.integer)) or not 1 <= node <= code.n:
        raise BadIndex(f"node {node!r} outside [1, {code.n}]")


def gc_encode(code: GraphCode, file) -> list[NodeContent]:
    f = as_vector(code.field, file, code.M)
    c = code.g.array @ f % code.q
    return [
        NodeContent(v, code.placement[v], tuple(int(c[e - 1]) for e in code.placement[v]))
        for v in range(1, code.n + 1)
    ]


def gc_reconstruct(code: GraphCode, contents: Sequence[NodeContent]) -> list[int]:
    ids = [c.node for c in contents]
    for v in ids:
        _check_node(code, v)
    if len(set(ids)) != len(ids):
        raise BadIndex(f"duplicate node ids {ids}")
    if len(ids) < code.k:
        raise BadIndex(f"need {code.k} nodes, got {len(ids)}")
    units: dict[int, int] = {}
    for c in contents:
        if tuple(c.edges) != code.placement[c.node]:
            raise WrongUnit(f"node {c.node} content does not match its placement")
        for e, val in zip(c.edges, c.values):
            units[e] = int(val) % code.q
    edges = sorted(units)
    if len(edges) < code.M:
        raise Underdetermined(f"{len(edges)} distinct units < file size {code.M}")
    a = code.g.submatrix([e - 1 for e in edges])
    rhs = MatrixFq(code.field, [[units[e]] for e in edges])
    return solve_linear(a, rhs).col(0)


def gc_repair(code: GraphCode, failed: int, helper_units: Mapping[int, tuple[int, int]]) -> NodeContent:
    """Rebuild the failed node from one unit per neighbor.

    ``helper_units`` maps helper id to the (edge index, value) it sends.
    """
    _check_node(code, failed)
    nbrs = code.neighbors(failed)
    if sorted(helper_units) != nbrs:
        raise WrongHelpers(f"helpers {sorted(helper_units)} != neighbors {nbrs} of node {failed}")
    got = {}
    for h, (e, val) in helper_units.items():
        if e != code.graph.edge_between(h, failed):
            raise WrongUnit(f"helper {h} sent edge {e}, not the edge it shares with node {failed}")
        got[e] = int(val) % code.q
    edges = code.placement[failed]
    return NodeContent(failed, edges, tuple(got[e] for e in edges))


def gc_helper_unit(code: GraphCode, helper: NodeContent, failed: int) -> tuple[int, int]:
    """The unit a helper forwards: the one on the edge it shares with the failed node."""
    e = code.graph.edge_between(helper.node, failed)
    if e is None:
        raise WrongHelpers(f"node {helper.node} is not adjacent to {failed}")
    return e, dict(helper.units)[e]


def gc_eavesdrop(code: GraphCode, nodes) -> tuple[MatrixFq, list[int]]:
    nodes = list(nodes)
    if not nodes:
        raise BadIndex("eavesdrop set is empty")
    for v in nodes:
        _check_node(code, v)
    edges = sorted({e for v in nodes for e in code.placement[v]})
    return code.g.submatrix([e - 1 for e in edges]), edges
