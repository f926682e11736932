"""Dense matrices over a prime field, Gaussian elimination and structured constructors.

Entries are kept as a read-only ``int64`` numpy array reduced into ``[0, q)``.
Since ``q < 2**20`` a single product fits comfortably in 64 bits, and every
reduction happens right after each multiply-accumulate step.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadPoints,
    DimensionMismatch,
    FieldMismatch,
    FieldTooSmall,
    Inconsistent,
    RepeatedPoint,
    Singular,
    Underdetermined,
)
from .field import FieldElement, FieldSpec


class MatrixFq:
    __slots__ = ("field", "_a")

    def __init__(self, field: FieldSpec, data):
        arr = np.array(data, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got shape {arr.shape}")
        arr %= field.q
        arr.setflags(write=False)
        self.field = field
        self._a = arr

    @classmethod
    def _wrap(cls, field: FieldSpec, arr: np.ndarray) -> MatrixFq:
        # trusted fast path: arr already reduced
        m = cls.__new__(cls)
        arr = np.ascontiguousarray(arr, dtype=np.int64)
        arr.setflags(write=False)
        m.field = field
        m._a = arr
        return m

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> MatrixFq:
        return cls._wrap(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> MatrixFq:
        return cls._wrap(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the entries."""
        return self._a

    @property
    def entries(self) -> list[FieldElement]:
        return [FieldElement(int(v), self.field) for v in self._a.ravel()]

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def __getitem__(self, key):
        i, j = key
        return FieldElement(int(self._a[i, j]), self.field)

    def row(self, i: int) -> list[int]:
        return self._a[i].tolist()

    def col(self, j: int) -> list[int]:
        return self._a[:, j].tolist()

    def submatrix(self, rows: Iterable[int] | None = None, cols: Iterable[int] | None = None) -> MatrixFq:
        a = self._a
        if rows is not None:
            a = a[list(rows), :]
        if cols is not None:
            a = a[:, list(cols)]
        return MatrixFq._wrap(self.field, a.reshape(a.shape))

    @property
    def T(self) -> MatrixFq:
        return MatrixFq._wrap(self.field, self._a.T)

    def vstack(self, other: MatrixFq) -> MatrixFq:
        _same_field(self, other)
        if self.rows and other.rows and self.cols != other.cols:
            raise DimensionMismatch("column counts differ")
        if not self.rows:
            return other
        if not other.rows:
            return self
        return MatrixFq._wrap(self.field, np.vstack([self._a, other._a]))

    def __eq__(self, other):
        if not isinstance(other, MatrixFq):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash((self.field.q, self.shape, self._a.tobytes()))

    def __matmul__(self, other: MatrixFq) -> MatrixFq:
        return mat_mul(self, other)

    def __repr__(self):
        return f"MatrixFq(q={self.field.q}, {self.tolist()})"

    def rank(self) -> int:
        return mat_rank(self)

    def inverse(self) -> MatrixFq:
        return mat_inverse(self)


def _same_field(a: MatrixFq, b: MatrixFq) -> None:
    if a.field != b.field:
        raise FieldMismatch(f"F_{a.field.q} vs F_{b.field.q}")


def matmul_mod(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Product of reduced int64 arrays, reduced mod q without overflow."""
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    # each term < 2^40; chunk the inner dimension so partial sums stay < 2^63
    step = max(1, (1 << 62) // ((q - 1) ** 2 + 1))
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, a.shape[1], step):
        out = (out + a[:, s : s + step] @ b[s : s + step, :]) % q
    return out


def mat_mul(a: MatrixFq, b: MatrixFq) -> MatrixFq:
    _same_field(a, b)
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return MatrixFq._wrap(a.field, matmul_mod(a._a, b._a, a.field.q))


def row_reduce(arr: np.ndarray, q: int, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod q.

    Pivots are only searched in the first ``ncols`` columns (all by default),
    which lets callers reduce an augmented matrix ``[A | B]``.
    """
    m = np.array(arr, dtype=np.int64) % q
    rows, cols = m.shape
    ncols = cols if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = (m[r] * pow(int(m[r, c]), q - 2, q)) % q
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(col[nzr], m[r])) % q
        pivots.append(c)
        r += 1
    return m, pivots


def rank_mod(arr: np.ndarray, q: int) -> int:
    if arr.size == 0:
        return 0
    return len(row_reduce(arr, q)[1])


def mat_rank(a: MatrixFq) -> int:
    return rank_mod(a._a, a.field.q)


def mat_inverse(a: MatrixFq) -> MatrixFq:
    if a.rows != a.cols:
        raise DimensionMismatch(f"cannot invert non-square {a.shape}")
    n = a.rows
    q = a.field.q
    aug = np.hstack([a._a, np.eye(n, dtype=np.int64)])
    red, piv = row_reduce(aug, q, ncols=n)
    if len(piv) < n:
        raise Singular(f"rank {len(piv)} < {n}")
    return MatrixFq._wrap(a.field, red[:, n:])


def solve_linear(a: MatrixFq, rhs: MatrixFq) -> MatrixFq:
    """Unique x with a @ x == rhs; ``a`` must have full column rank."""
    _same_field(a, rhs)
    if a.rows != rhs.rows:
        raise DimensionMismatch(f"lhs has {a.rows} rows, rhs has {rhs.rows}")
    q = a.field.q
    n = a.cols
    aug = np.hstack([a._a, rhs._a])
    red, piv = row_reduce(aug, q, ncols=n)
    r = len(piv)
    if np.any(red[r:, n:]):
        raise Inconsistent("system has no solution")
    if r < n:
        raise Underdetermined(f"rank {r} < {n} unknowns")
    return MatrixFq._wrap(a.field, red[:n, n:])


def _distinct(points: Sequence[int], q: int, exc) -> list[int]:
    pts = [int(p) % q for p in points]
    if len(set(pts)) != len(pts):
        raise exc(f"points are not pairwise distinct mod {q}: {list(points)}")
    return pts


def cauchy_matrix(
    field: FieldSpec,
    m: int,
    n: int,
    xs: Sequence[int] | None = None,
    ys: Sequence[int] | None = None,
) -> MatrixFq:
    """m x n matrix with entries 1 / (x_i + y_j).

    Default points are x_i = i and y_j = q - m - j, which never collide as
    long as m + n <= q.
    """
    q = field.q
    if xs is None or ys is None:
        if m + n > q:
            raise FieldTooSmall(f"default Cauchy points need q >= m + n = {m + n}, got {q}", needed=m + n)
    xs = list(range(m)) if xs is None else _distinct(xs, q, BadPoints)
    ys = [(q - m - j) % q for j in range(n)] if ys is None else _distinct(ys, q, BadPoints)
    if len(xs) != m or len(ys) != n:
        raise BadPoints(f"expected {m} x-points and {n} y-points")
    out = np.empty((m, n), dtype=np.int64)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            s = (x + y) % q
            if s == 0:
                raise BadPoints(f"x_{i} + y_{j} = 0 mod {q}")
            out[i, j] = pow(s, q - 2, q)
    return MatrixFq._wrap(field, out)


def vandermonde_matrix(field: FieldSpec, points: Sequence[int], cols: int) -> MatrixFq:
    q = field.q
    pts = _distinct(points, q, RepeatedPoint)
    out = np.empty((len(pts), cols), dtype=np.int64)
    for i, x in enumerate(pts):
        v = 1
        for j in range(cols):
            out[i, j] = v
            v = v * x % q
    return MatrixFq._wrap(field, out)
