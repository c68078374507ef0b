"""Exact dense linear algebra over a prime field GF(p).

Matrices are numpy int64 arrays with every entry reduced to [0, p).
Subspaces are kept in reduced row-echelon form, so two subspaces are equal
exactly when their basis arrays are identical.  Everything here is
deterministic; nothing is probabilistic or floating point.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotPrime

__all__ = [
    "FieldCtx",
    "field_ctx",
    "GfpMatrix",
    "Subspace",
    "rref",
    "rref_array",
    "kernel",
    "kernel_array",
    "solve_array",
    "charpoly_coeffs",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class FieldCtx:
    """Arithmetic context for the prime field GF(p)."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        p = int(p)
        if not _is_prime(p):
            raise NotPrime(f"{p} is not a prime number")
        self.p = p

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(p)")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and other.p == self.p

    def __hash__(self):
        return hash(("FieldCtx", self.p))

    def __repr__(self):
        return f"FieldCtx({self.p})"


def field_ctx(p: int) -> FieldCtx:
    """Build a GF(p) context; raises NotPrime on composite p."""
    return FieldCtx(p)


class GfpMatrix:
    """Dense matrix over GF(p).  Entries always reduced to [0, p)."""

    __slots__ = ("field", "a")

    def __init__(self, field: FieldCtx, entries):
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2:
            raise DimensionMismatch("matrix entries must be two-dimensional")
        self.field = field
        self.a = a % field.p

    @classmethod
    def zeros(cls, field: FieldCtx, rows: int, cols: int) -> "GfpMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: FieldCtx, n: int) -> "GfpMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def ones(cls, field: FieldCtx, rows: int, cols: int) -> "GfpMatrix":
        return cls(field, np.ones((rows, cols), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def entries(self) -> list:
        return self.a.reshape(-1).tolist()

    def _coerce(self, other) -> "GfpMatrix":
        if not isinstance(other, GfpMatrix):
            raise TypeError("expected a GfpMatrix")
        if other.field != self.field:
            raise DimensionMismatch("matrices over different fields")
        return other

    def __matmul__(self, other) -> "GfpMatrix":
        other = self._coerce(other)
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        return GfpMatrix(self.field, (self.a @ other.a) % self.field.p)

    def __add__(self, other) -> "GfpMatrix":
        other = self._coerce(other)
        if self.a.shape != other.a.shape:
            raise DimensionMismatch("shape mismatch in addition")
        return GfpMatrix(self.field, (self.a + other.a) % self.field.p)

    def __sub__(self, other) -> "GfpMatrix":
        other = self._coerce(other)
        if self.a.shape != other.a.shape:
            raise DimensionMismatch("shape mismatch in subtraction")
        return GfpMatrix(self.field, (self.a - other.a) % self.field.p)

    def scale(self, c: int) -> "GfpMatrix":
        return GfpMatrix(self.field, (self.a * (int(c) % self.field.p)) % self.field.p)

    @property
    def T(self) -> "GfpMatrix":
        return GfpMatrix(self.field, self.a.T)

    def apply(self, vec) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64) % self.field.p
        return (self.a @ v) % self.field.p

    def is_zero(self) -> bool:
        return not self.a.any()

    def vec(self) -> np.ndarray:
        """Row-major flattening, used to embed matrices in GF(p)^(r*c)."""
        return self.a.reshape(-1).copy()

    def __eq__(self, other):
        return (
            isinstance(other, GfpMatrix)
            and other.field == self.field
            and self.a.shape == other.a.shape
            and np.array_equal(self.a, other.a)
        )

    def __hash__(self):
        return hash((self.field.p, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"GfpMatrix(p={self.field.p}, {self.rows}x{self.cols})"


def rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, int, list[int]]:
    """Reduced row-echelon form of an integer matrix mod p.

    Returns (R, rank, pivot_columns).  The input is not modified.
    """
    a = np.asarray(a, dtype=np.int64) % p
    if a.ndim != 2:
        raise DimensionMismatch("rref expects a two-dimensional array")
    m, n = a.shape
    a = a.copy()
    r = 0
    pivots: list[int] = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, r, pivots


def rref(m: GfpMatrix, f: FieldCtx | None = None) -> tuple[GfpMatrix, int, list[int]]:
    """RREF of a GfpMatrix; idempotent, rank = number of pivots."""
    field = f if f is not None else m.field
    reduced, rank, pivots = rref_array(m.a, field.p)
    return GfpMatrix(field, reduced), rank, pivots


def kernel_array(a: np.ndarray, p: int) -> np.ndarray:
    """Echelonized basis (rows) of the right null space {v : a v = 0} mod p."""
    a = np.asarray(a, dtype=np.int64) % p
    m, n = a.shape
    reduced, rank, pivots = rref_array(a, p)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    if not free:
        return np.zeros((0, n), dtype=np.int64)
    vecs = np.zeros((len(free), n), dtype=np.int64)
    for row, fc in enumerate(free):
        vecs[row, fc] = 1
        for i, pc in enumerate(pivots):
            vecs[row, pc] = (-reduced[i, fc]) % p
    out, _, _ = rref_array(vecs, p)
    return out[: len(free)]


def kernel(m: GfpMatrix, f: FieldCtx | None = None) -> "Subspace":
    """Null space of m as a canonical subspace of GF(p)^cols."""
    field = f if f is not None else m.field
    basis = kernel_array(m.a, field.p)
    return Subspace.span(field, basis, ambient_dim=m.cols)


def solve_array(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution x of a x = b mod p, or None when inconsistent."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise DimensionMismatch("solve_array shape mismatch")
    aug = np.concatenate([a, b[:, None]], axis=1)
    reduced, rank, pivots = rref_array(aug, p)
    n = a.shape[1]
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = reduced[i, n]
    return x


class Subspace:
    """Subspace of GF(p)^ambient held in reduced row-echelon form.

    Construct through span()/zero(); the canonical basis makes equality,
    membership, and coordinate extraction plain array operations.
    """

    __slots__ = ("field", "ambient_dim", "basis", "pivots")

    def __init__(self, field: FieldCtx, ambient_dim: int, basis: np.ndarray, pivots: tuple[int, ...]):
        self.field = field
        self.ambient_dim = int(ambient_dim)
        self.basis = basis
        self.pivots = pivots

    @classmethod
    def span(cls, field: FieldCtx, vectors, ambient_dim: int | None = None) -> "Subspace":
        arr = np.asarray(vectors, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.size == 0:
            if ambient_dim is None:
                ambient_dim = arr.shape[1] if arr.ndim == 2 else 0
            return cls.zero(field, ambient_dim)
        if ambient_dim is not None and arr.shape[1] != ambient_dim:
            raise DimensionMismatch("vector length does not match ambient dimension")
        reduced, rank, pivots = rref_array(arr, field.p)
        basis = reduced[:rank].copy()
        basis.setflags(write=False)
        return cls(field, arr.shape[1], basis, tuple(pivots))

    @classmethod
    def zero(cls, field: FieldCtx, ambient_dim: int) -> "Subspace":
        basis = np.zeros((0, ambient_dim), dtype=np.int64)
        basis.setflags(write=False)
        return cls(field, ambient_dim, basis, ())

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def _check(self, other: "Subspace") -> None:
        if not isinstance(other, Subspace):
            raise TypeError("expected a Subspace")
        if other.field != self.field or other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("subspaces live in different ambient spaces")

    def coords(self, vectors) -> np.ndarray | None:
        """Coordinates of row vectors in the echelon basis, or None if any
        vector falls outside the subspace."""
        v = np.asarray(vectors, dtype=np.int64) % self.field.p
        single = v.ndim == 1
        if single:
            v = v[None, :]
        if v.shape[1] != self.ambient_dim:
            raise DimensionMismatch("vector length does not match ambient dimension")
        c = v[:, list(self.pivots)] if self.pivots else np.zeros((v.shape[0], 0), dtype=np.int64)
        residual = (v - c @ self.basis) % self.field.p
        if residual.any():
            return None
        return c[0] if single else c

    def member(self, v) -> bool:
        return self.coords(v) is not None

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        if other.dim == 0:
            return True
        return self.coords(other.basis) is not None

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        stacked = np.concatenate([self.basis, other.basis], axis=0)
        return Subspace.span(self.field, stacked, ambient_dim=self.ambient_dim)

    def __add__(self, other: "Subspace") -> "Subspace":
        return self.sum(other)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        # kernel of the stacked-basis map (a, b) -> a.basis_self - b.basis_other
        stacked = np.concatenate([self.basis.T, other.basis.T], axis=1)
        ker = kernel_array(stacked, self.field.p)
        if ker.shape[0] == 0:
            return Subspace.zero(self.field, self.ambient_dim)
        vecs = (ker[:, : self.dim] @ self.basis) % self.field.p
        return Subspace.span(self.field, vecs, ambient_dim=self.ambient_dim)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and other.field == self.field
            and other.ambient_dim == self.ambient_dim
            and self.basis.shape == other.basis.shape
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.field.p, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(p={self.field.p}, dim={self.dim}, ambient={self.ambient_dim})"


def charpoly_coeffs(mats: np.ndarray, p: int, upto: int | None = None) -> np.ndarray:
    """Leading coefficients of det(tI - M) for a batch of matrices mod p.

    Returns v of shape (batch, t+1) with det(tI - M) = sum_m v[:, m] t^(n-m)
    truncated to the first t+1 coefficients, t = upto (default n).  Uses the
    division-free Berkowitz recurrence, valid in any characteristic; all the
    Toeplitz factors are lower triangular, so truncation is exact.
    """
    mats = np.asarray(mats, dtype=np.int64) % p
    if mats.ndim == 2:
        mats = mats[None]
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise DimensionMismatch("charpoly_coeffs expects square matrices")
    b, n, _ = mats.shape
    t = n if upto is None else max(0, min(int(upto), n))
    v = np.zeros((b, t + 1), dtype=np.int64)
    v[:, 0] = 1
    for i in range(1, n + 1):
        kmax = min(i, t)
        s = np.zeros((b, kmax + 1), dtype=np.int64)
        s[:, 0] = 1
        if kmax >= 1:
            s[:, 1] = (-mats[:, i - 1, i - 1]) % p
        if kmax >= 2:
            blk = mats[:, : i - 1, : i - 1]
            r = mats[:, i - 1, : i - 1]
            w = mats[:, : i - 1, i - 1]
            for j in range(2, kmax + 1):
                s[:, j] = (-np.einsum("bk,bk->b", r, w)) % p
                if j < kmax:
                    w = np.einsum("bkl,bl->bk", blk, w) % p
        old_len = min(i - 1, t)
        vnew = np.zeros((b, t + 1), dtype=np.int64)
        for m in range(kmax + 1):
            acc = np.zeros(b, dtype=np.int64)
            for j in range(0, m + 1):
                if j <= kmax and (m - j) <= old_len:
                    acc = acc + s[:, j] * v[:, m - j]
            vnew[:, m] = acc % p
        v = vnew
    return v
