"""Exact integer matrix algorithms and a few tolerance-aware complex helpers.

Integer matrices are small (at most 8x8 here) so everything is plain Python
``int`` arithmetic; there is no overflow to worry about.  Complex data is
carried in numpy arrays.
"""
from __future__ import annotations

import operator
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import RankDeficient, ResidualTooLarge

DEFAULT_TOL = 1e-9


class IntMatrix:
    """Immutable integer matrix with an explicit shape.

    The shape is stored separately so that matrices with zero columns (an
    empty lattice basis in a rank-4 ambient lattice, say) keep their row count.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]], rows: int | None = None,
                 cols: int | None = None):
        entries = tuple(tuple(operator.index(x) for x in row) for row in data)
        if rows is None:
            rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError("ragged or mis-shaped integer matrix")
        self.rows = rows
        self.cols = cols
        self._data = entries

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        columns = [list(c) for c in columns]
        return cls([[c[i] for c in columns] for i in range(rows)], rows, len(columns))

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    # -- access -------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def to_numpy(self, dtype=float) -> np.ndarray:
        return np.array(self._data, dtype=dtype).reshape(self.rows, self.cols)

    def select_columns(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix([[r[j] for j in idx] for r in self._data], self.rows, len(idx))

    def select_rows(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix([self._data[i] for i in idx], len(idx), self.cols)

    # -- algebra ------------------------------------------------------------
    @property
    def T(self) -> "IntMatrix":
        return IntMatrix([self.col(j) for j in range(self.cols)], self.cols, self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._data],
            self.rows, other.cols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)],
                         self.rows, self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix([[k * a for a in r] for r in self._data], self.rows, self.cols)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("row mismatch")
        return IntMatrix([r + s for r, s in zip(self._data, other._data)],
                         self.rows, self.cols + other.cols)

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return IntMatrix(self._data + other._data, self.rows + other.rows, self.cols)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._data for a in r)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        m = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if m[i][k]), None)
                if swap is None:
                    return 0
                m[k], m[swap] = m[swap], m[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1] if n else 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.shape, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"


def as_intmatrix(a) -> IntMatrix:
    if isinstance(a, IntMatrix):
        return a
    if isinstance(a, np.ndarray):
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return IntMatrix([[int(x) for x in row] for row in a], a.shape[0], a.shape[1])
    return IntMatrix(a)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def _smith(A: IntMatrix):
    """Return (P, Pinv, S, Q, Qinv) with S = P A Q and P, Q unimodular."""
    m, n = A.rows, A.cols
    S = A.tolist()
    P = IntMatrix.identity(m).tolist()
    Pinv = IntMatrix.identity(m).tolist()
    Q = IntMatrix.identity(n).tolist()
    Qinv = IntMatrix.identity(n).tolist()

    def row_add(i, j, k):  # row_i += k * row_j
        for M in (S, P):
            M[i] = [a + k * b for a, b in zip(M[i], M[j])]
        for r in Pinv:
            r[j] -= k * r[i]

    def row_swap(i, j):
        if i == j:
            return
        for M in (S, P):
            M[i], M[j] = M[j], M[i]
        for r in Pinv:
            r[i], r[j] = r[j], r[i]

    def row_neg(i):
        for M in (S, P):
            M[i] = [-a for a in M[i]]
        for r in Pinv:
            r[i] = -r[i]

    def col_add(i, j, k):  # col_i += k * col_j
        for M in (S, Q):
            for r in M:
                r[i] += k * r[j]
        Qinv[j] = [a - k * b for a, b in zip(Qinv[j], Qinv[i])]

    def col_swap(i, j):
        if i == j:
            return
        for M in (S, Q):
            for r in M:
                r[i], r[j] = r[j], r[i]
        Qinv[i], Qinv[j] = Qinv[j], Qinv[i]

    for t in range(min(m, n)):
        nonzero = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not nonzero:
            break
        _, i0, j0 = min(nonzero)
        row_swap(t, i0)
        col_swap(t, j0)
        while True:
            restart = False
            for i in range(t + 1, m):
                q = S[i][t] // S[t][t]
                if q:
                    row_add(i, t, -q)
                if S[i][t]:
                    row_swap(t, i)
                    restart = True
                    break
            if restart:
                continue
            for j in range(t + 1, n):
                q = S[t][j] // S[t][t]
                if q:
                    col_add(j, t, -q)
                if S[t][j]:
                    col_swap(t, j)
                    restart = True
                    break
            if restart:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n)
                        if S[i][j] % S[t][t]), None)
            if bad is None:
                break
            row_add(t, bad, 1)
        if S[t][t] < 0:
            row_neg(t)

    return (IntMatrix(P, m, m), IntMatrix(Pinv, m, m), IntMatrix(S, m, n),
            IntMatrix(Q, n, n), IntMatrix(Qinv, n, n))


def smith_normal_form(A) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, S, V)`` with ``A = U @ S @ V``.

    ``U`` and ``V`` are unimodular, ``S`` is diagonal with nonnegative
    invariant factors ``d_1 | d_2 | ...`` and zeros last.

    >>> U, S, V = smith_normal_form(IntMatrix([[2, 4], [6, 8]]))
    >>> S.tolist()
    [[2, 0], [0, 4]]
    """
    A = as_intmatrix(A)
    _, Pinv, S, _, Qinv = _smith(A)
    return Pinv, S, Qinv


def invariant_factors(A) -> list[int]:
    """Nonzero diagonal of the Smith form."""
    _, S, _ = smith_normal_form(A)
    return [S[i, i] for i in range(min(S.rows, S.cols)) if S[i, i]]


def rank(A) -> int:
    return len(invariant_factors(A))


def is_primitive(B) -> bool:
    """True if the columns of ``B`` are independent and span a saturated sublattice."""
    B = as_intmatrix(B)
    f = invariant_factors(B)
    return len(f) == B.cols and all(d == 1 for d in f)


# ---------------------------------------------------------------------------
# Hermite form, kernels, images
# ---------------------------------------------------------------------------

def hermite_rows(A) -> IntMatrix:
    """Row-style Hermite normal form; zero rows are dropped.

    Pivots are positive and move strictly right; entries above a pivot are
    reduced into ``[0, pivot)``.
    """
    A = as_intmatrix(A)
    H = A.tolist()
    m, n = A.rows, A.cols
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [(abs(H[i][c]), i) for i in range(r, m) if H[i][c]]
            if not nz:
                break
            _, i0 = min(nz)
            H[r], H[i0] = H[i0], H[r]
            done = True
            for i in range(r + 1, m):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                if H[i][c]:
                    done = False
            if done:
                break
        if r < m and H[r][c]:
            if H[r][c] < 0:
                H[r] = [-a for a in H[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
            r += 1
    return IntMatrix(H[:r], r, n)


def canonical_basis(B) -> IntMatrix:
    """Canonical column basis of the lattice spanned by the columns of ``B``."""
    B = as_intmatrix(B)
    return hermite_rows(B.T).T if B.cols else B


def kernel_basis(A) -> IntMatrix:
    """Columns form a basis of ``{v in Z^n : A v = 0}``, in Hermite-canonical order."""
    A = as_intmatrix(A)
    _, _, S, Q, _ = _smith(A)
    r = sum(1 for i in range(min(S.rows, S.cols)) if S[i, i])
    K = Q.select_columns(range(r, A.cols))
    if K.cols == 0:
        return IntMatrix.zeros(A.cols, 0)
    return canonical_basis(K)


def image_saturation(A) -> IntMatrix:
    """Basis of the primitive closure of the column span of ``A``.

    Computed from the Smith form of the transpose: if ``A^T = U S V`` then the
    first ``rank`` rows of ``V`` span the saturation.
    """
    A = as_intmatrix(A)
    _, S, V = smith_normal_form(A.T)
    r = sum(1 for i in range(min(S.rows, S.cols)) if S[i, i])
    if r == 0:
        return IntMatrix.zeros(A.rows, 0)
    return canonical_basis(V.select_rows(range(r)).T)


# ---------------------------------------------------------------------------
# Exact solves over Z
# ---------------------------------------------------------------------------

def _rational_solve(B: IntMatrix, Y: IntMatrix) -> list[list[Fraction]] | None:
    """Solve ``B X = Y`` exactly for full-column-rank ``B``; None if inconsistent."""
    m, k = B.rows, B.cols
    aug = [[Fraction(x) for x in B.row(i)] + [Fraction(y) for y in Y.row(i)] for i in range(m)]
    width = k + Y.cols
    piv_row = 0
    for c in range(k):
        p = next((i for i in range(piv_row, m) if aug[i][c] != 0), None)
        if p is None:
            raise RankDeficient("lattice basis does not have full column rank")
        aug[piv_row], aug[p] = aug[p], aug[piv_row]
        pv = aug[piv_row][c]
        aug[piv_row] = [x / pv for x in aug[piv_row]]
        for i in range(m):
            if i != piv_row and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[piv_row])]
        piv_row += 1
    if any(aug[i][j] != 0 for i in range(k, m) for j in range(k, width)):
        return None
    return [row[k:] for row in aug[:k]]


def lattice_coordinates(B, Y) -> IntMatrix:
    """Integer ``X`` with ``B @ X == Y``; raises ValueError if no such ``X`` exists."""
    B, Y = as_intmatrix(B), as_intmatrix(Y)
    X = _rational_solve(B, Y)
    if X is None or any(x.denominator != 1 for row in X for x in row):
        raise ValueError("vectors do not lie in the integral span of the basis")
    return IntMatrix([[int(x) for x in row] for row in X], B.cols, Y.cols)


def in_integer_span(B, Y) -> bool:
    try:
        lattice_coordinates(B, Y)
    except ValueError:
        return False
    return True


def unimodular_inverse(U) -> IntMatrix:
    U = as_intmatrix(U)
    if U.rows != U.cols or abs(U.det()) != 1:
        raise ValueError("matrix is not unimodular")
    return lattice_coordinates(U, IntMatrix.identity(U.rows))


def complete_to_unimodular(C) -> IntMatrix:
    """Columns ``K`` with ``[C | K]`` unimodular, for primitive ``C``.

    When the Hermite form of ``C^T`` has unit pivots the completion uses unit
    vectors at the non-pivot positions, which keeps bases like ``{e2, e4}``
    recognisable.  Otherwise the Smith transform supplies the completion.
    """
    C = as_intmatrix(C)
    n, k = C.rows, C.cols
    if not is_primitive(C):
        raise ValueError("columns are not primitive")
    H = hermite_rows(C.T)
    pivots = [next(j for j in range(n) if H[i, j]) for i in range(H.rows)]
    if all(H[i, p] == 1 for i, p in enumerate(pivots)):
        free = [j for j in range(n) if j not in pivots]
        K = IntMatrix.from_columns([[int(i == j) for i in range(n)] for j in free], n)
    else:
        U, _, _ = smith_normal_form(C)
        K = U.select_columns(range(k, n))
    assert abs(C.hstack(K).det()) == 1
    return K


def quotient_complement(W0, W1) -> IntMatrix:
    """Ambient columns completing ``W0`` to a basis of the lattice ``W1``.

    Their images give a basis of ``W1 / W0``.
    """
    W0, W1 = as_intmatrix(W0), as_intmatrix(W1)
    C = lattice_coordinates(W1, W0)
    return W1 @ complete_to_unimodular(C)


# ---------------------------------------------------------------------------
# Complex helpers
# ---------------------------------------------------------------------------

def as_cxmatrix(a) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if not np.all(np.isfinite(arr)):
        raise ValueError("complex matrix has non-finite entries")
    return arr


def numerical_rank(A, tol: float = DEFAULT_TOL) -> int:
    A = as_cxmatrix(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def solve_complex(A, b, tol: float = DEFAULT_TOL, *, consistent: bool = False):
    """Least-squares solve of ``A x = b``; returns ``(x, residual_norm)``.

    Raises :class:`RankDeficient` when ``A`` has numerical rank below its
    column count.  With ``consistent=True`` a residual above ``tol`` (scaled by
    ``max(1, |b|)``) raises :class:`ResidualTooLarge`.
    """
    A = as_cxmatrix(A)
    b = as_cxmatrix(b)
    if A.shape[0] < A.shape[1]:
        raise RankDeficient("underdetermined system")
    if numerical_rank(A, tol) < A.shape[1]:
        raise RankDeficient(f"numerical rank below {A.shape[1]} at tol={tol}")
    x, *_ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.linalg.norm(A @ x - b))
    if consistent and residual > tol * max(1.0, float(np.linalg.norm(b))):
        raise ResidualTooLarge(f"residual {residual:.3e} exceeds {tol:.1e}")
    return x, residual


def row_space_basis(F) -> np.ndarray:
    """Orthonormal basis (as columns) of the row space of ``F``."""
    F = as_cxmatrix(F)
    q, _ = np.linalg.qr(F.T)
    return q


def subspace_distance(F, G) -> float:
    """Sine of the largest principal angle between the row spaces of F and G.

    Computed from the projection residual rather than from ``sqrt(1 - cos^2)``
    so that small angles keep full precision.
    """
    qf, qg = row_space_basis(F), row_space_basis(G)
    if qf.shape[1] != qg.shape[1]:
        return 1.0
    r1 = qg - qf @ (qf.conj().T @ qg)
    r2 = qf - qg @ (qg.conj().T @ qf)
    return float(max(np.linalg.norm(r1, 2), np.linalg.norm(r2, 2)))


def left_null_space(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rows ``a`` with ``a @ M == 0`` (numerically)."""
    M = as_cxmatrix(M)
    g = M.shape[0]
    if M.shape[1] == 0:
        return np.eye(g, dtype=complex)
    _, s, vh = np.linalg.svd(M.T)
    r = int(np.sum(s > tol * max(1.0, s[0] if s.size else 0.0)))
    return vh[r:].conj()
