"""Block-security analysis of eavesdropped MBR codes.

An eavesdropper holding the stored contents of some nodes learns ``E f^t``
for a matrix ``E`` determined by those nodes (rows of G for regular-graph
codes, the block matrix Ebar for product-matrix codes).  The code is
b-block secure against that observation exactly when the row space of E
has minimum distance b + 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .analysis import (
    Witness,
    _tails,
    default_budget,
    independent_rows,
    min_distance_with_witness,
)
from .errors import BadIndex, BadParams, BudgetExceeded
from .graph_code import GraphCode, as_vector, gc_eavesdrop, gc_encode, mbr_file_size
from .matrix import MatrixFq, rank_mod
from .pm_code import PmCode, pm_eavesdrop_blockmatrix, pm_encode

DEFAULT_SUBSET_BUDGET = 10**5


@dataclass
class SecurityReport:
    nodes: tuple[int, ...]
    observed_rows: int
    rank: int
    file_size: int
    min_distance: int | None
    block_level: int
    witness: Witness | None = None
    full_reconstruction: bool = False
    perfectly_secure: bool | None = None
    method: str = ""


def observation_matrix(code, nodes) -> MatrixFq:
    """What an eavesdropper on ``nodes`` learns, as a matrix acting on the file."""
    if isinstance(code, SecureWrap):
        code = code.base
    if isinstance(code, GraphCode):
        return gc_eavesdrop(code, nodes)[0]
    if isinstance(code, PmCode):
        return pm_eavesdrop_blockmatrix(code, nodes)
    raise TypeError(f"not a code: {type(code).__name__}")


def block_security_level(
    observed: MatrixFq,
    nodes: Sequence[int] = (),
    budget: int | None = None,
    method: str = "auto",
) -> SecurityReport:
    m_size = observed.cols
    r = rank_mod(observed.array, observed.field.q) if observed.rows else 0
    if r == 0:
        return SecurityReport(tuple(nodes), observed.rows, 0, m_size, None, m_size, method="empty")
    dist, wit, used = min_distance_with_witness(observed, budget, method)
    full = r == m_size
    return SecurityReport(
        tuple(nodes), observed.rows, r, m_size, dist, dist - 1, wit, full_reconstruction=full, method=used
    )


def theorem1_level(k: int, d: int, ell: int) -> int:
    """Block level of a Cauchy regular-graph code against ell eavesdropped nodes."""
    if not (0 <= ell < k <= d):
        raise BadParams(f"need 0 <= ell < k <= d, got k={k} d={d} ell={ell}")
    return mbr_file_size(k, d) - mbr_file_size(ell, d)


def theorem2_level(k: int, ell: int) -> int:
    """Block level of a Cauchy product-matrix code against ell eavesdropped nodes."""
    if not 0 <= ell < k:
        raise BadParams(f"need 0 <= ell < k, got k={k} ell={ell}")
    return k - ell


def _check_bound_params(k, d, alpha, beta):
    if min(k, d, alpha, beta) < 1 or k > d:
        raise BadParams(f"need positive parameters with k <= d, got k={k} d={d} alpha={alpha} beta={beta}")


def dimakis_bound(k: int, d: int, alpha: int, beta: int) -> int:
    _check_bound_params(k, d, alpha, beta)
    return sum(min((d - i + 1) * beta, alpha) for i in range(1, k + 1))


def pawar_bound(k: int, d: int, alpha: int, beta: int, ell: int) -> int:
    _check_bound_params(k, d, alpha, beta)
    if not 0 <= ell < k:
        raise BadParams(f"need 0 <= ell < k, got ell={ell}")
    return sum(min((d - i + 1) * beta, alpha) for i in range(ell + 1, k + 1))


def reduced_mbr_bound(k: int, d: int, ell: int) -> int:
    """(k - l)(d - (k + l - 1)/2), kept in integers."""
    return (k - ell) * (2 * d - k - ell + 1) // 2


@dataclass(frozen=True)
class BoundsReport:
    n: int
    k: int
    d: int
    alpha: int
    beta: int
    ell: int
    dimakis: int
    pawar: int
    reduced: int


def bounds_report(n: int, k: int, d: int, alpha: int, beta: int, ell: int) -> BoundsReport:
    if d > n - 1:
        raise BadParams(f"d={d} exceeds n-1={n - 1}")
    dim = dimakis_bound(k, d, alpha, beta)
    paw = pawar_bound(k, d, alpha, beta, ell)
    red = reduced_mbr_bound(k, d, ell)
    if alpha == d and beta == 1:
        assert paw == red, (paw, red)
    return BoundsReport(n, k, d, alpha, beta, ell, dim, paw, red)


@dataclass(frozen=True)
class SecureWrap:
    """A base code whose first R file coordinates carry uniform random units."""

    base: GraphCode | PmCode
    lam: int
    R: int

    @property
    def secret_size(self) -> int:
        return self.base.M - self.R

    @property
    def family(self) -> str:
        return self.base.family

    def compose(self, secret, randomness) -> list[int]:
        s = as_vector(self.base.field, secret, self.secret_size)
        r = as_vector(self.base.field, randomness, self.R)
        return r.tolist() + s.tolist()

    def randomness(self, seed: int) -> list[int]:
        rng = np.random.default_rng(seed)
        return rng.integers(0, self.base.q, self.R).tolist()

    def encode(self, secret, seed: int = 0, randomness=None):
        if randomness is None:
            randomness = self.randomness(seed)
        f = self.compose(secret, randomness)
        return encode(self.base, f)

    def extract_secret(self, file: Sequence[int]) -> list[int]:
        return list(file[self.R :])


def encode(code, file):
    if isinstance(code, GraphCode):
        return gc_encode(code, file)
    return pm_encode(code, file)


def secure_wrap(code, lam: int) -> SecureWrap:
    if not 0 <= lam < code.k:
        raise BadParams(f"need 0 <= lambda < k = {code.k}, got {lam}")
    r = sum(min(code.d - i + 1, code.alpha) for i in range(1, lam + 1))
    return SecureWrap(code, lam, r)


def perfect_secrecy_check(wrap: SecureWrap, nodes) -> bool:
    """True iff the random columns alone account for the whole observed rank."""
    obs = observation_matrix(wrap.base, nodes)
    q = wrap.base.q
    return rank_mod(obs.array[:, : wrap.R], q) == rank_mod(obs.array, q)


@dataclass(frozen=True)
class MiResult:
    zero: bool
    bits: float
    files: int
    observations: int
    targets: int


def _enumerate_files(q: int, m: int, budget: int):
    total = q**m
    if total > budget:
        raise BudgetExceeded(f"{total} files exceed budget {budget}", needed=total, budget=budget)
    step = 1 << 18
    for s in range(0, total, step):
        yield _tails(q, m, s, min(total, s + step))


def _radix(vals: np.ndarray, q: int) -> np.ndarray:
    out = np.zeros(vals.shape[0], dtype=np.int64)
    for c in range(vals.shape[1]):
        out = out * q + vals[:, c]
    return out


def _observation_basis(code, nodes) -> tuple[MatrixFq, int]:
    obs = observation_matrix(code, nodes)
    rows = independent_rows(obs)
    return obs.submatrix(rows), len(rows)


def exhaustive_mi_check(code, nodes, target: Sequence[int], budget: int | None = None) -> MiResult:
    """Exact test of I(f_B ; observation) = 0 by enumerating every file.

    ``target`` lists 1-based data-unit indices; for a SecureWrap they index
    the secret units.  Counts are exact integers; ``bits`` is informative.
    """
    budget = default_budget() if budget is None else budget
    base = code.base if isinstance(code, SecureWrap) else code
    offset = code.R if isinstance(code, SecureWrap) else 0
    limit = code.secret_size if isinstance(code, SecureWrap) else base.M
    target = sorted(set(target))
    if any(not 1 <= b <= limit for b in target):
        raise BadIndex(f"target {target} outside [1, {limit}]")
    cols = [offset + b - 1 for b in target]
    q, m = base.q, base.M
    basis, r = _observation_basis(base, nodes) if nodes else (None, 0)
    nb = q ** len(cols)
    cells = q**r * nb
    if cells > budget:
        raise BudgetExceeded(f"{cells} joint cells exceed budget {budget}")
    counts = np.zeros(cells, dtype=np.int64)
    total = 0
    for files in _enumerate_files(q, m, budget):
        o = _radix(files @ basis.array.T % q, q) if r else np.zeros(len(files), dtype=np.int64)
        b = _radix(files[:, cols], q) if cols else np.zeros(len(files), dtype=np.int64)
        counts += np.bincount(o * nb + b, minlength=cells)
        total += len(files)
    joint = counts.reshape(q**r, nb)
    po = joint.sum(axis=1)
    pb = joint.sum(axis=0)
    zero = bool(np.all(joint * total == po[:, None] * pb[None, :]))
    nz = joint > 0
    bits = float(
        np.sum(joint[nz] / total * np.log2((joint * total)[nz] / (po[:, None] * pb[None, :])[nz]))
    )
    return MiResult(zero, 0.0 if zero else bits, total, int(np.count_nonzero(po)), nb)


def solution_counts(code, nodes, v: Sequence[int], budget: int | None = None) -> np.ndarray:
    """Table of #{f : E f^t = u, v f^t = s} indexed by (observation u, value s).

    Rows are observations that occur; the counts within a row are equal for
    every s exactly when v f^t is hidden from the eavesdropper.
    """
    budget = default_budget() if budget is None else budget
    base = code.base if isinstance(code, SecureWrap) else code
    q, m = base.q, base.M
    vec = as_vector(base.field, v, m)
    basis, r = _observation_basis(base, nodes)
    if q ** (r + 1) > budget:
        raise BudgetExceeded("solution-count table too large")
    counts = np.zeros(q ** (r + 1), dtype=np.int64)
    for files in _enumerate_files(q, m, budget):
        o = _radix(files @ basis.array.T % q, q)
        s = files @ vec % q
        counts += np.bincount(o * q + s, minlength=counts.size)
    table = counts.reshape(q**r, q)
    return table[table.sum(axis=1) > 0]


def uniform_solution_counts(code, nodes, vectors, budget: int | None = None) -> bool:
    """solution_counts uniformity for many combination vectors in one pass over the files."""
    budget = default_budget() if budget is None else budget
    base = code.base if isinstance(code, SecureWrap) else code
    q, m = base.q, base.M
    vecs = np.array([as_vector(base.field, v, m) for v in vectors], dtype=np.int64)
    basis, r = _observation_basis(base, nodes)
    tables = np.zeros((len(vecs), q**r * q), dtype=np.int64)
    for files in _enumerate_files(q, m, budget):
        o = _radix(files @ basis.array.T % q, q)
        s = files @ vecs.T % q
        for i in range(len(vecs)):
            tables[i] += np.bincount(o * q + s[:, i], minlength=tables.shape[1])
    t = tables.reshape(len(vecs), q**r, q)
    return bool(np.all(t == t[:, :, :1]))


@dataclass
class AuditResult:
    ell: int
    worst: SecurityReport
    reports: list[SecurityReport] = field(default_factory=list)
    checked: int = 0
    total: int = 0
    mode: str = "exhaustive"
    skipped: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def coverage(self) -> float:
        return self.checked / self.total if self.total else 1.0


def _empty_report(code) -> SecurityReport:
    return SecurityReport((), 0, 0, code.M, None, code.M, method="empty")


def audit(
    code,
    ell: int,
    mode: str = "exhaustive",
    budget: int | None = None,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
    samples: int = 32,
    seed: int = 0,
    method: str = "auto",
    skip_over_budget: bool = False,
) -> AuditResult:
    """Worst block level over eavesdrop sets of size ell.

    Ties go to the lexicographically smallest node set.  A SecureWrap is
    audited on its base code, i.e. with random units counted as data units.
    """
    wrap = code if isinstance(code, SecureWrap) else None
    base = wrap.base if wrap else code
    n = base.n
    if not 0 <= ell <= n:
        raise BadParams(f"ell={ell} outside [0, {n}]")
    if ell == 0:
        rep = _empty_report(base)
        return AuditResult(0, rep, [rep], 1, 1, mode)
    total = comb(n, ell)
    if mode == "exhaustive":
        if total > subset_budget:
            raise BudgetExceeded(f"{total} subsets exceed budget {subset_budget}", needed=total)
        subsets = list(combinations(range(1, n + 1), ell))
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        picks = {tuple(sorted(rng.choice(np.arange(1, n + 1), ell, replace=False).tolist())) for _ in range(samples)}
        subsets = sorted(picks)
    else:
        raise BadParams(f"unknown audit mode {mode!r}")
    reports = []
    skipped = []
    worst = None
    for s in subsets:
        try:
            rep = block_security_level(observation_matrix(base, s), s, budget, method)
        except BudgetExceeded:
            if not skip_over_budget:
                raise
            skipped.append(s)
            continue
        if wrap is not None:
            rep.perfectly_secure = perfect_secrecy_check(wrap, s)
        reports.append(rep)
        if worst is None or rep.block_level < worst.block_level:
            worst = rep
    if worst is None:
        raise BudgetExceeded(f"every {ell}-subset exceeded the enumeration budget")
    return AuditResult(ell, worst, reports, len(reports), total, mode, skipped)


def formula_level(code, ell: int) -> int:
    """Closed-form level for Cauchy encodings; 0 once ell >= k."""
    wrap = code if isinstance(code, SecureWrap) else None
    base = wrap.base if wrap else code
    if ell >= base.k:
        return 0
    if wrap is not None and ell <= wrap.lam:
        return wrap.secret_size
    if base.family == "graph":
        return theorem1_level(base.k, base.d, ell)
    return theorem2_level(base.k, ell)


@dataclass
class ProfileRow:
    ell: int
    formula_b: int
    audited_b: int | None
    status: str = "audited"


def degradation_profile(
    code,
    ell_max: int,
    budget: int | None = None,
    subset_budget: int = DEFAULT_SUBSET_BUDGET,
) -> list[ProfileRow]:
    """Formula and audited block level for ell = 0..ell_max.

    For a SecureWrap, sets within the threshold report the secret size when
    the rank criterion confirms perfect secrecy.
    """
    wrap = code if isinstance(code, SecureWrap) else None
    base = wrap.base if wrap else code
    if not 0 <= ell_max <= base.n:
        raise BadParams(f"ell_max={ell_max} outside [0, {base.n}]")
    rows = []
    for ell in range(ell_max + 1):
        formula = formula_level(code, ell)
        if ell >= base.k:
            rows.append(ProfileRow(ell, formula, 0, "revealed"))
            continue
        if wrap is not None and 0 < ell <= wrap.lam:
            ok = all(perfect_secrecy_check(wrap, s) for s in combinations(range(1, base.n + 1), ell))
            if ok:
                rows.append(ProfileRow(ell, formula, wrap.secret_size, "perfect"))
                continue
        try:
            res = audit(base, ell, budget=budget, subset_budget=subset_budget)
        except BudgetExceeded:
            rows.append(ProfileRow(ell, formula, None, "skipped"))
            continue
        b = res.worst.block_level
        if wrap is not None and ell == 0:
            b = wrap.secret_size
        rows.append(ProfileRow(ell, formula, b))
    return rows
