"""Brute-force oracles for linear codes over F_q.

The generator of a :class:`CodeView` is any set of rows spanning the code;
rows need not be independent.  Coordinates exposed by this module (supports,
the index set ``u`` of :func:`determinability_check`) are 1-based, matching
the way data units f_1, f_2, ... are numbered.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Iterator

import numpy as np

from .errors import BadIndex, BudgetExceeded, TooLarge, ZeroCode
from .matrix import MatrixFq, rank_mod, row_reduce

DEFAULT_BUDGET = 10**7
DEFAULT_SUBSET_BUDGET = 10**6
_CHUNK = 1 << 16


def default_budget() -> int:
    env = os.environ.get("DSS_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class CodeView:
    generator: MatrixFq

    @property
    def length(self) -> int:
        return self.generator.cols

    @property
    def field(self):
        return self.generator.field

    def dimension(self) -> int:
        return self.generator.rank()


@dataclass(frozen=True)
class Witness:
    coefficients: tuple[int, ...]
    codeword: tuple[int, ...]
    support: tuple[int, ...]

    @property
    def weight(self) -> int:
        return len(self.support)


def _as_view(code) -> CodeView:
    return code if isinstance(code, CodeView) else CodeView(code)


def modpow_array(x: np.ndarray, e: int, q: int) -> np.ndarray:
    result = np.ones_like(x)
    base = x % q
    while e:
        if e & 1:
            result = result * base % q
        base = base * base % q
        e >>= 1
    return result


def batched_rank(stack: np.ndarray, q: int) -> np.ndarray:
    """Rank mod q of every matrix in a (B, R, C) stack."""
    a = np.array(stack, dtype=np.int64) % q
    nb, nr, nc = a.shape
    rank = np.zeros(nb, dtype=np.int64)
    rows = np.arange(nr)
    for c in range(nc):
        mask = (rows[None, :] >= rank[:, None]) & (a[:, :, c] != 0)
        has = mask.any(axis=1)
        if not has.any():
            continue
        b = np.nonzero(has)[0]
        p = mask[b].argmax(axis=1)
        r = rank[b]
        tmp = a[b, r].copy()
        a[b, r] = a[b, p]
        a[b, p] = tmp
        piv = a[b, r]
        piv = piv * modpow_array(piv[:, c], q - 2, q)[:, None] % q
        a[b, r] = piv
        factors = a[b, :, c].copy()
        factors[np.arange(b.size), r] = 0
        a[b] = (a[b] - factors[:, :, None] * piv[:, None, :]) % q
        rank[b] += 1
    return rank


def independent_rows(g: MatrixFq) -> list[int]:
    """Indices of a maximal independent set of rows, chosen greedily in order."""
    if g.rows == 0 or g.cols == 0:
        return []
    _, piv = row_reduce(g.array.T, g.field.q)
    return piv


def projective_count(q: int, r: int) -> int:
    return (q**r - 1) // (q - 1)


def _tails(q: int, t: int, start: int, stop: int) -> np.ndarray:
    """Base-q digits (most significant first) of the integers in [start, stop)."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, t), dtype=np.int64)
    for pos in range(t - 1, -1, -1):
        idx, out[:, pos] = np.divmod(idx, q)
    return out


def iter_projective(basis: np.ndarray, q: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (coefficients, codewords) chunks over all projective points.

    Order: leading coefficient position ascending, then the tail in
    lexicographic order.  Every nonzero codeword of the span appears
    exactly once up to scaling.
    """
    r = basis.shape[0]
    for lead in range(r):
        t = r - lead - 1
        head = basis[lead]
        tail_rows = basis[lead + 1 :]
        total = q**t
        for s in range(0, total, _CHUNK):
            e = min(total, s + _CHUNK)
            tails = _tails(q, t, s, e)
            words = (head[None, :] + (tails @ tail_rows if t else 0)) % q
            coeffs = np.zeros((e - s, r), dtype=np.int64)
            coeffs[:, lead] = 1
            coeffs[:, lead + 1 :] = tails
            yield coeffs, words


def _normalize_witness(coeffs: np.ndarray, word: np.ndarray, rows: list[int], nrows: int, q: int) -> Witness:
    nz = np.nonzero(word)[0]
    scale = pow(int(word[nz[0]]), q - 2, q)
    full = [0] * nrows
    for i, c in zip(rows, coeffs.tolist()):
        full[i] = c * scale % q
    w = (word * scale % q).tolist()
    return Witness(tuple(full), tuple(w), tuple(int(i) + 1 for i in nz))


def _search_enumerate(g: MatrixFq, rows: list[int], budget: int) -> tuple[int, Witness]:
    q = g.field.q
    basis = g.array[rows]
    count = projective_count(q, len(rows))
    if count > budget:
        raise BudgetExceeded(f"{count} projective codewords exceed budget {budget}", needed=count, budget=budget)
    best = g.cols + 1
    best_pair = None
    for coeffs, words in iter_projective(basis, q):
        wts = np.count_nonzero(words, axis=1)
        i = int(wts.argmin())
        if wts[i] < best:
            best = int(wts[i])
            best_pair = (coeffs[i].copy(), words[i].copy())
            if best == 1:
                break
    return best, _normalize_witness(*best_pair, rows, g.rows, q)


def _left_null_vector(a: np.ndarray, q: int) -> np.ndarray:
    """A nonzero x with x @ a == 0 (mod q); a must have fewer independent columns than rows."""
    r = a.shape[0]
    red, piv = row_reduce(a.T, q)
    free = [c for c in range(r) if c not in piv]
    x = np.zeros(r, dtype=np.int64)
    f = free[0]
    x[f] = 1
    for row, p in enumerate(piv):
        x[p] = (-red[row, f]) % q
    return x


def _search_support(g: MatrixFq, rows: list[int], budget: int) -> tuple[int, Witness]:
    """Smallest w such that deleting some w coordinates drops the rank.

    A nonzero codeword supported inside W exists iff the columns outside W
    have rank below the code dimension.
    """
    q = g.field.q
    basis = g.array[rows]
    r, n = basis.shape
    spent = 0
    for w in range(1, n - r + 2):
        subsets = list(combinations(range(n), w)) if comb(n, w) <= budget - spent else None
        if subsets is None:
            raise BudgetExceeded(
                f"support search needs more than {budget} rank computations", budget=budget
            )
        spent += len(subsets)
        for s in range(0, len(subsets), 4096):
            chunk = subsets[s : s + 4096]
            keep = [[c for c in range(n) if c not in W] for W in chunk]
            ranks = batched_rank(basis[:, keep].transpose(1, 0, 2), q)
            hit = np.nonzero(ranks < r)[0]
            if hit.size:
                outside = keep[int(hit[0])]
                alpha = _left_null_vector(basis[:, outside], q)
                word = alpha @ basis % q
                return int(np.count_nonzero(word)), _normalize_witness(alpha, word, rows, g.rows, q)
    raise AssertionError("unreachable: Singleton bound guarantees a hit")


def _search(code, budget: int | None, method: str) -> tuple[int, Witness, str]:
    g = _as_view(code).generator
    rows = independent_rows(g)
    if not rows:
        raise ZeroCode("the row space is {0}")
    budget = default_budget() if budget is None else budget
    q = g.field.q
    if method == "enumerate" or (method == "auto" and projective_count(q, len(rows)) <= budget):
        d, wit = _search_enumerate(g, rows, budget)
        return d, wit, "enumerate"
    if method in ("support", "auto"):
        d, wit = _search_support(g, rows, budget)
        return d, wit, "support"
    raise ValueError(f"unknown method {method!r}")


def min_distance(code, budget: int | None = None, method: str = "enumerate") -> int:
    """Minimum Hamming weight of a nonzero codeword.

    ``method="enumerate"`` walks every projective codeword (the oracle);
    ``"support"`` searches coordinate sets by rank instead and scales to
    longer codes of small distance; ``"auto"`` enumerates when within budget.
    """
    return _search(code, budget, method)[0]


def min_weight_witness(code, budget: int | None = None, method: str = "enumerate") -> Witness:
    """A minimum-weight codeword with its coefficient vector over the generator rows.

    The codeword is scaled so its first nonzero entry is 1; for a weight-1
    witness the combination therefore reveals a data unit verbatim.
    """
    return _search(code, budget, method)[1]


def min_distance_with_witness(code, budget: int | None = None, method: str = "auto") -> tuple[int, Witness, str]:
    return _search(code, budget, method)


def determinability_check(code, u: Iterable[int]) -> bool:
    """True iff every codeword vanishing outside ``u`` also vanishes on ``u``."""
    g = _as_view(code).generator
    u = set(u)
    if any(not 1 <= i <= g.cols for i in u):
        raise BadIndex(f"coordinates {sorted(u)} outside [1, {g.cols}]")
    keep = [c for c in range(g.cols) if c + 1 not in u]
    q = g.field.q
    return rank_mod(g.array[:, keep], q) == rank_mod(g.array, q)


def all_determinable(code, size: int) -> bool:
    """determinability_check for every coordinate set of the given size, batched."""
    g = _as_view(code).generator
    q = g.field.q
    basis = g.array[independent_rows(g)]
    r, n = basis.shape
    subsets = list(combinations(range(n), size))
    for s in range(0, len(subsets), 4096):
        keep = [[c for c in range(n) if c not in W] for W in subsets[s : s + 4096]]
        if not keep[0]:
            return r == 0
        if np.any(batched_rank(basis[:, keep].transpose(1, 0, 2), q) < r):
            return False
    return True


def mds_rows_check(g: MatrixFq, m: int, budget: int = DEFAULT_SUBSET_BUDGET) -> bool:
    """True iff every m-subset of rows of g is linearly independent."""
    if m > g.rows:
        raise TooLarge(f"cannot pick {m} rows from {g.rows}")
    if m > g.cols:
        return False
    count = comb(g.rows, m)
    if count > budget:
        raise TooLarge(f"{count} row subsets exceed budget {budget}", needed=count, budget=budget)
    subsets = list(combinations(range(g.rows), m))
    for s in range(0, len(subsets), 4096):
        chunk = np.array(subsets[s : s + 4096])
        if np.any(batched_rank(g.array[chunk], g.field.q) < m):
            return False
    return True
