"""Product-matrix MBR codes.

The file is packed into a symmetric d x d message matrix ``[[S, T], [T^t, 0]]``
and node i stores row i of ``Psi @ M``.  Data units are labelled by the pairs
(i, j), 1 <= i <= k, i <= j <= d, in lexicographic order; that order is the
coordinate order of the file vector.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

import numpy as np

from .analysis import batched_rank
from .errors import (
    BadIndex,
    BadParams,
    FieldTooSmall,
    LengthMismatch,
    PropertyViolation,
    WrongHelperCount,
)
from .field import FieldSpec
from .graph_code import CAUCHY, VANDERMONDE, as_vector
from .matrix import MatrixFq, cauchy_matrix, mat_inverse, matmul_mod, vandermonde_matrix

DEFAULT_PROPERTY_BUDGET = 10**5


@dataclass(frozen=True)
class IndexSet:
    k: int
    d: int
    elements: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.elements)

    def position(self, i: int, j: int) -> int:
        """0-based coordinate of f_(i,j) (or f_(j,i)) in the file vector."""
        a, b = min(i, j), max(i, j)
        return self.elements.index((a, b))


def index_set(k: int, d: int) -> IndexSet:
    if not 1 <= k <= d:
        raise BadParams(f"need 1 <= k <= d, got k={k} d={d}")
    elems = tuple((i, j) for i in range(1, k + 1) for j in range(i, d + 1))
    return IndexSet(k, d, elems)


def pack_message(index: IndexSet, file) -> np.ndarray:
    """d x d symmetric message matrix (entries as ints)."""
    f = np.asarray(file, dtype=np.int64)
    if f.shape != (len(index),):
        raise LengthMismatch(f"expected {len(index)} symbols, got {f.size}")
    m = np.zeros((index.d, index.d), dtype=np.int64)
    for p, (i, j) in enumerate(index.elements):
        m[i - 1, j - 1] = f[p]
        m[j - 1, i - 1] = f[p]
    return m


def unpack_message(index: IndexSet, m: np.ndarray) -> list[int]:
    return [int(m[i - 1, j - 1]) for i, j in index.elements]


@dataclass(frozen=True)
class PmCode:
    n: int
    k: int
    d: int
    field: FieldSpec
    psi: MatrixFq
    kind: str
    index: IndexSet
    verified: str = "exhaustive"

    family = "pm"

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def M(self) -> int:
        return len(self.index)

    @property
    def alpha(self) -> int:
        return self.d

    def message(self, file) -> MatrixFq:
        return MatrixFq._wrap(self.field, pack_message(self.index, as_vector(self.field, file, self.M)))


def _all_subsets_independent(a: np.ndarray, m: int, q: int, budget: int, rng) -> tuple[bool, str]:
    n = a.shape[0]
    total = comb(n, m)
    if total <= budget:
        subsets = np.array(list(combinations(range(n), m)))
        status = "exhaustive"
    else:
        subsets = np.array([np.sort(rng.choice(n, m, replace=False)) for _ in range(budget)])
        status = "sampled"
    for s in range(0, len(subsets), 4096):
        if np.any(batched_rank(a[subsets[s : s + 4096]], q) < m):
            return False, status
    return True, status


def pm_build(
    n: int,
    k: int,
    d: int,
    q: int | FieldSpec,
    kind: str = CAUCHY,
    points: Sequence[int] | None = None,
    ys: Sequence[int] | None = None,
    budget: int = DEFAULT_PROPERTY_BUDGET,
    seed: int = 0,
) -> PmCode:
    F = q if isinstance(q, FieldSpec) else FieldSpec(q)
    if not 1 <= k <= d <= n - 1:
        raise BadParams(f"need 1 <= k <= d <= n-1, got n={n} k={k} d={d}")
    if kind == CAUCHY:
        psi = cauchy_matrix(F, n, d, points, ys)
    elif kind == VANDERMONDE:
        if points is None:
            if n >= F.q:
                raise FieldTooSmall(f"default Vandermonde points 1..{n} need q > {n}", needed=n + 1)
            points = range(1, n + 1)
        psi = vandermonde_matrix(F, list(points), d)
        if psi.rows != n:
            raise BadParams(f"need {n} points, got {psi.rows}")
    else:
        raise BadParams(f"unknown matrix kind {kind!r}")
    rng = np.random.default_rng(seed)
    ok1, s1 = _all_subsets_independent(psi.array, d, F.q, budget, rng)
    if not ok1:
        raise PropertyViolation("some d rows of Psi are dependent")
    ok2, s2 = _all_subsets_independent(psi.array[:, :k], k, F.q, budget, rng)
    if not ok2:
        raise PropertyViolation("some k rows of Phi are dependent")
    status = "exhaustive" if s1 == s2 == "exhaustive" else "sampled"
    return PmCode(n, k, d, F, psi, kind, index_set(k, d), status)


def _check_node(code: PmCode, node) -> None:
    if not isinstance(node, (int, np.integer)) or not 1 <= node <= code.n:
        raise BadIndex(f"node {node!r} outside [1, {code.n}]")


def pm_encode(code: PmCode, file) -> list[list[int]]:
    """Row i of Psi @ M for every node, in node order."""
    m = code.message(file)
    return matmul_mod(code.psi.array, m.array, code.q).tolist()


def _validated_ids(code: PmCode, ids, count: int) -> list[int]:
    ids = list(ids)
    for v in ids:
        _check_node(code, v)
    if len(set(ids)) != len(ids):
        raise BadIndex(f"duplicate node ids {ids}")
    if len(ids) != count:
        raise BadIndex(f"need exactly {count} nodes, got {len(ids)}")
    return ids


def pm_reconstruct(code: PmCode, contents: Mapping[int, Sequence[int]]) -> list[int]:
    """Recover the file from k node vectors keyed by node id.

    With Psi_DC = [Phi_DC | Delta_DC], the collected rows are
    [Phi_DC S + Delta_DC T^t | Phi_DC T]; T comes from the right block, then S.
    """
    ids = _validated_ids(code, contents.keys(), code.k)
    q, k = code.q, code.k
    rows = [i - 1 for i in ids]
    y = np.array([as_vector(code.field, contents[i], code.d) for i in ids], dtype=np.int64)
    phi_inv = mat_inverse(code.psi.submatrix(rows, range(k))).array
    delta = code.psi.array[rows, k:]
    t = matmul_mod(phi_inv, y[:, k:], q)
    left = (y[:, :k] - matmul_mod(delta, t.T, q)) % q
    s = matmul_mod(phi_inv, left, q)
    m = np.zeros((code.d, code.d), dtype=np.int64)
    m[:k, :k] = s
    m[:k, k:] = t
    m[k:, :k] = t.T
    return unpack_message(code.index, m)


def pm_repair_helper(code: PmCode, helper: int, failed: int, helper_content: Sequence[int]) -> int:
    """Scalar a helper sends: its stored row times psi_failed^t."""
    _check_node(code, helper)
    _check_node(code, failed)
    if helper == failed:
        raise BadIndex("a node cannot help repair itself")
    c = as_vector(code.field, helper_content, code.d)
    return int(c @ code.psi.array[failed - 1] % code.q)


def pm_repair(code: PmCode, failed: int, helper_scalars: Mapping[int, int]) -> list[int]:
    """Solve Psi_H x = sigma for x = M psi_f^t; by symmetry x^t is the lost row."""
    _check_node(code, failed)
    ids = list(helper_scalars)
    for v in ids:
        _check_node(code, v)
    if len(set(ids)) != code.d or len(ids) != code.d or failed in ids:
        raise WrongHelperCount(f"need {code.d} distinct helpers other than {failed}, got {ids}")
    inv = mat_inverse(code.psi.submatrix([i - 1 for i in ids])).array
    sigma = as_vector(code.field, [helper_scalars[i] for i in ids])
    return (matmul_mod(inv, sigma[:, None], code.q)[:, 0]).tolist()


def pm_eavesdrop_blockmatrix(code: PmCode, nodes) -> MatrixFq:
    """The (d*l) x M matrix Ebar with Ebar f^t equal to the stacked columns of E M(f).

    Row block j (j = 1..d) holds, in column xi = (i, j) or (j, i), the column
    E[i] of the eavesdropped rows E of Psi.  Within a block rows follow the
    order of ``nodes``.
    """
    nodes = list(nodes)
    if not nodes:
        raise BadIndex("eavesdrop set is empty")
    for v in nodes:
        _check_node(code, v)
    e = code.psi.array[[v - 1 for v in nodes]]
    ell = len(nodes)
    out = np.zeros((code.d * ell, code.M), dtype=np.int64)
    for p, (i, j) in enumerate(code.index.elements):
        out[(j - 1) * ell : j * ell, p] = e[:, i - 1]
        if i != j:
            out[(i - 1) * ell : i * ell, p] = e[:, j - 1]
    return MatrixFq._wrap(code.field, out)


def stack_observation(code: PmCode, contents: Mapping[int, Sequence[int]], nodes) -> list[int]:
    """Hbar: the eavesdropped rows H = E M stacked column by column (j = 1..d)."""
    h = np.array([as_vector(code.field, contents[v], code.d) for v in nodes], dtype=np.int64)
    return h.T.reshape(-1).tolist()
