"""Dense linear algebra over a prime field, compiled with numba.

Two moduli are supported: the Mersenne prime ``2^61 - 1`` (products are
split into 31/30-bit limbs and folded with ``2^61 = 1``) and any prime below
``2^31`` (products fit in 63 bits).  Matrices are row-major ``uint64``.
"""
from __future__ import annotations

import numpy as np
from numba import njit

MERSENNE61 = (1 << 61) - 1
SMALL_PRIME_LIMIT = 1 << 31

_M61 = np.uint64(MERSENNE61)
_MASK31 = np.uint64((1 << 31) - 1)
_MASK30 = np.uint64((1 << 30) - 1)
_S30 = np.uint64(30)
_S31 = np.uint64(31)
_S61 = np.uint64(61)
_ONE = np.uint64(1)
_ZERO = np.uint64(0)


def check_prime(p: int) -> None:
    if p != MERSENNE61 and not (2 < p < SMALL_PRIME_LIMIT and _is_prime(p)):
        raise ValueError(f"unsupported modulus {p}: use 2^61-1 or a prime below 2^31")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    f = 2
    while f * f <= p:
        if p % f == 0:
            return False
        f += 1
    return True


@njit(cache=True, inline="always")
def _fold61(x):
    x = (x & _M61) + (x >> _S61)
    if x >= _M61:
        x -= _M61
    return x


@njit(cache=True, inline="always")
def mulmod(a, b, p):
    if p != _M61:
        return (a * b) % p
    a0 = a & _MASK31
    a1 = a >> _S31
    b0 = b & _MASK31
    b1 = b >> _S31
    mid = a1 * b0 + a0 * b1
    # a*b = a1 b1 2^62 + mid 2^31 + a0 b0, and 2^61 = 1
    x = (a1 * b1 << _ONE) + (mid >> _S30) + ((mid & _MASK30) << _S31) + a0 * b0
    x = (x & _M61) + (x >> _S61)
    if x >= _M61:
        x -= _M61
    return x


@njit(cache=True, inline="always")
def addmod(a, b, p):
    x = a + b
    if x >= p:
        x -= p
    return x


@njit(cache=True, inline="always")
def submod(a, b, p):
    if a >= b:
        return a - b
    return a + (p - b)


@njit(cache=True)
def powmod(a, e, p):
    result = _ONE
    base = a % p
    while e > 0:
        if e & 1:
            result = mulmod(result, base, p)
        base = mulmod(base, base, p)
        e >>= 1
    return result


@njit(cache=True)
def invmod(a, p):
    return powmod(a, p - np.uint64(2), p)


@njit(cache=True)
def _eliminate(A, p, full):
    """In-place row reduction; returns (rank, pivot columns).

    With ``full`` the result is the reduced row echelon form.
    """
    rows, cols = A.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = -1
        for i in range(rank, rows):
            if A[i, c] != _ZERO:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(c, cols):
                tmp = A[rank, j]
                A[rank, j] = A[piv, j]
                A[piv, j] = tmp
        inv = invmod(A[rank, c], p)
        for j in range(c, cols):
            A[rank, j] = mulmod(A[rank, j], inv, p)
        start = 0 if full else rank + 1
        for i in range(start, rows):
            if i == rank:
                continue
            f = A[i, c]
            if f == _ZERO:
                continue
            for j in range(c, cols):
                a = A[rank, j]
                if a != _ZERO:
                    A[i, j] = submod(A[i, j], mulmod(f, a, p), p)
        pivots[rank] = c
        rank += 1
    return rank, pivots[:rank]


def as_field_matrix(entries, p: int) -> np.ndarray:
    arr = np.array(entries, dtype=object)
    if arr.ndim != 2:
        arr = arr.reshape(len(entries), -1)
    return np.array([[int(x) % p for x in row] for row in arr], dtype=np.uint64).reshape(arr.shape)


def rank_mod_p(A: np.ndarray, p: int = MERSENNE61) -> int:
    """Exact rank of ``A`` over ``F_p``; ``A`` is copied, entries must already lie in ``[0, p)``."""
    if A.size == 0:
        return 0
    work = np.ascontiguousarray(A, dtype=np.uint64).copy()
    rank, _ = _eliminate(work, np.uint64(p), False)
    return int(rank)


def rref_mod_p(A: np.ndarray, p: int = MERSENNE61) -> tuple[np.ndarray, list[int]]:
    work = np.ascontiguousarray(A, dtype=np.uint64).copy()
    if work.size == 0:
        return work, []
    rank, pivots = _eliminate(work, np.uint64(p), True)
    return work[:rank], [int(c) for c in pivots]


def nullspace_mod_p(A: np.ndarray, p: int = MERSENNE61, cols: int | None = None) -> np.ndarray:
    """Basis of ``{x : A x = 0}`` as rows of a ``uint64`` array."""
    ncols = A.shape[1] if A.ndim == 2 and A.shape[0] else (cols if cols is not None else A.shape[-1])
    if A.shape[0] == 0:
        return np.eye(ncols, dtype=np.uint64)
    R, pivots = rref_mod_p(A, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = np.zeros((len(free), ncols), dtype=np.uint64)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for i, c in enumerate(pivots):
            v = int(R[i, f])
            basis[row, c] = (p - v) % p
    return basis


@njit(cache=True)
def _matmul(A, B, p):
    n, k = A.shape
    m = B.shape[1]
    out = np.zeros((n, m), dtype=np.uint64)
    for i in range(n):
        for t in range(k):
            a = A[i, t]
            if a == _ZERO:
                continue
            for j in range(m):
                b = B[t, j]
                if b != _ZERO:
                    out[i, j] = addmod(out[i, j], mulmod(a, b, p), p)
    return out


def matmul_mod_p(A: np.ndarray, B: np.ndarray, p: int = MERSENNE61) -> np.ndarray:
    A = np.ascontiguousarray(A, dtype=np.uint64)
    B = np.ascontiguousarray(B, dtype=np.uint64)
    if A.shape[0] == 0 or B.shape[1] == 0 or A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.uint64)
    return _matmul(A, B, np.uint64(p))


def det_mod_p(A: np.ndarray, p: int = MERSENNE61) -> int:
    """Determinant of a small square matrix, by plain Python arithmetic."""
    M = [[int(x) % p for x in row] for row in np.asarray(A, dtype=object)]
    size = len(M)
    det = 1
    for c in range(size):
        piv = next((i for i in range(c, size) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = -det
        det = det * M[c][c] % p
        inv = pow(M[c][c], -1, p)
        for i in range(c + 1, size):
            f = M[i][c] * inv % p
            if f:
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[c])]
    return det % p
