"""Dense exact linear algebra over GF(q) on numpy arrays of element codes.

Matrices are 2-d ``int64`` arrays whose entries are field codes (see
:mod:`gl2modp.field`).  Prime fields use plain modular arithmetic; extension
fields go through the precomputed tables, except for matrix products, which
are computed digit-wise with integer BLAS and reduced afterwards.
"""

from __future__ import annotations

import numpy as np

from .field import GF


def asarray(M) -> np.ndarray:
    return np.asarray(M, dtype=np.int64)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def _xpow_digits(F: GF) -> np.ndarray:
    """Digit vectors of x^k for k < 2n-1, used to fold product digits."""
    cache = getattr(F, "_xpow_cache", None)
    if cache is None:
        n, p = F.n, F.p
        cache = np.zeros((2 * n - 1, n), dtype=np.int64)
        for k in range(2 * n - 1):
            cache[k] = F.digits[F.pow(p, k) if n > 1 else 1]
        F._xpow_cache = cache
    return cache


def matmul(F: GF, A, B) -> np.ndarray:
    A = asarray(A)
    B = asarray(B)
    if F.n == 1:
        # entries < p, so partial sums stay far below 2^63 at desk scale
        return (A @ B) % F.p
    n, p = F.n, F.p
    Ad = F.digits[A]
    Bd = F.digits[B]
    shape = A.shape[:-1] + B.shape[1:]
    acc = np.zeros(shape + (2 * n - 1,), dtype=np.int64)
    for i in range(n):
        Ai = Ad[..., i]
        for j in range(n):
            acc[..., i + j] += Ai @ Bd[..., j]
    acc %= p
    folded = (acc @ _xpow_digits(F)) % p
    return folded @ F.weights


def scale(F: GF, c: int, A) -> np.ndarray:
    A = asarray(A)
    if F.n == 1:
        return (c * A) % F.p
    return F.mul_table[c][A]


def add(F: GF, A, B) -> np.ndarray:
    return F.vadd(asarray(A), asarray(B))


def sub(F: GF, A, B) -> np.ndarray:
    return F.vsub(asarray(A), asarray(B))


def neg(F: GF, A) -> np.ndarray:
    return F.vneg(asarray(A))


def kron(F: GF, A, B) -> np.ndarray:
    A = asarray(A)
    B = asarray(B)
    if F.n == 1:
        return np.kron(A, B) % F.p
    prod = F.mul_table[A[:, None, :, None], B[None, :, None, :]]
    return prod.reshape(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])


def rref(F: GF, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    R = asarray(M).copy()
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    prime = F.n == 1
    p = F.p
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        inv = F.inv(int(R[r, c]))
        if prime:
            R[r] = (R[r] * inv) % p
        else:
            R[r] = F.mul_table[inv][R[r]]
        others = np.flatnonzero(R[:, c])
        others = others[others != r]
        if others.size:
            f = R[others, c]
            if prime:
                R[others] = (R[others] - f[:, None] * R[r][None, :]) % p
            else:
                R[others] = F.add_table[R[others], F.neg_table[F.mul_table[f[:, None], R[r][None, :]]]]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(F: GF, M) -> int:
    M = asarray(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def nullspace(F: GF, M) -> np.ndarray:
    """Right kernel: rows ``v`` (shape ``(k, cols)``) with ``M @ v == 0``."""
    M = asarray(M)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return identity(cols)
    R, piv = rref(F, M)
    free = [c for c in range(cols) if c not in set(piv)]
    out = zeros(len(free), cols)
    for i, c in enumerate(free):
        out[i, c] = 1
        for r, pc in enumerate(piv):
            out[i, pc] = F.neg(int(R[r, c]))
    return out


def left_nullspace(F: GF, M) -> np.ndarray:
    return nullspace(F, asarray(M).T)


def row_basis(F: GF, M) -> np.ndarray:
    """Reduced basis of the row space."""
    M = asarray(M)
    if M.shape[0] == 0:
        return M.reshape(0, M.shape[1] if M.ndim == 2 else 0)
    R, piv = rref(F, M)
    return R[: len(piv)]


def solve(F: GF, A, b) -> np.ndarray | None:
    """One solution of ``A x = b``, or ``None`` when inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    A = asarray(A)
    b = asarray(b)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    aug = np.concatenate([A, b], axis=1)
    R, piv = rref(F, aug)
    n = A.shape[1]
    if any(c >= n for c in piv):
        return None
    x = zeros(n, b.shape[1])
    for r, c in enumerate(piv):
        x[c] = R[r, n:]
    return x[:, 0] if vec else x


def inverse(F: GF, A) -> np.ndarray:
    A = asarray(A)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = rref(F, np.concatenate([A, identity(n)], axis=1))
    if piv[:n] != list(range(n)):
        raise ArithmeticError("singular matrix")
    return R[:, n:]


def det(F: GF, A) -> int:
    R = asarray(A).copy()
    n = R.shape[0]
    d = 1
    for c in range(n):
        nz = np.flatnonzero(R[c:, c])
        if nz.size == 0:
            return 0
        k = c + int(nz[0])
        if k != c:
            R[[c, k]] = R[[k, c]]
            d = F.neg(d)
        piv = int(R[c, c])
        d = F.mul(d, piv)
        inv = F.inv(piv)
        below = np.arange(c + 1, n)
        f = F.vmul(R[below, c], inv)
        R[below] = F.vsub(R[below], F.vmul(f[:, None], R[c][None, :]))
    return d


def intersect_rows(F: GF, U, W) -> np.ndarray:
    """Basis (rows) of rowspace(U) ∩ rowspace(W)."""
    U = row_basis(F, U)
    W = row_basis(F, W)
    if U.shape[0] == 0 or W.shape[0] == 0:
        return zeros(0, U.shape[1])
    # x U = y W  <=>  [x, -y] [U; W] = 0
    K = left_nullspace(F, np.concatenate([U, W], axis=0))
    if K.shape[0] == 0:
        return zeros(0, U.shape[1])
    return row_basis(F, matmul(F, K[:, : U.shape[0]], U))


class EchelonSpan:
    """Incrementally maintained reduced echelon basis of a row space."""

    def __init__(self, F: GF, dim: int):
        self.F = F
        self.dim = dim
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    def reduce(self, v) -> np.ndarray:
        F = self.F
        v = asarray(v).copy()
        for row, c in zip(self.rows, self.pivots):
            a = int(v[c])
            if a:
                v = F.vsub(v, scale(F, a, row))
        return v

    def add(self, v) -> bool:
        """Add ``v``; return True iff it enlarged the span."""
        F = self.F
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = scale(F, F.inv(int(v[c])), v)
        for i, row in enumerate(self.rows):
            a = int(row[c])
            if a:
                self.rows[i] = F.vsub(row, scale(F, a, v))
        self.rows.append(v)
        self.pivots.append(c)
        return True

    def contains(self, v) -> bool:
        return not np.any(self.reduce(v))

    def __len__(self) -> int:
        return len(self.rows)

    def matrix(self) -> np.ndarray:
        if not self.rows:
            return zeros(0, self.dim)
        return np.stack(self.rows)
