"""Dense linear algebra over F_p on int64 numpy arrays.

Subspaces are stored as row spaces: a :class:`Subspace` holds its basis in
reduced row echelon form, so two bases of the same space compare equal
byte for byte. A column span such as <E> is represented by the row space
of E.T.
"""

from __future__ import annotations

import numpy as np

from .gf import ConfigurationError, get_prime, inv_int


class DimensionMismatch(ValueError):
    pass


class InsufficientDimension(ValueError):
    """Asked for more independent vectors than the complement can supply."""


def as_matrix(a, p: int | None = None, cols: int | None = None) -> np.ndarray:
    p = get_prime() if p is None else p
    m = np.asarray(a, dtype=np.int64)
    if m.ndim == 1:
        m = m.reshape(1, -1) if m.size or cols is None else m.reshape(0, cols)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d array, got shape {m.shape}")
    return m % p


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def random_matrix(rng: np.random.Generator, rows: int, cols: int, p: int | None = None) -> np.ndarray:
    p = get_prime() if p is None else p
    return rng.integers(0, p, size=(rows, cols), dtype=np.int64)


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int | None = None) -> np.ndarray:
    """Exact (a @ b) mod p.

    `a` is split into 16-bit limbs so every partial dot product stays inside
    int64 for inner dimensions up to 2**16.
    """
    p = get_prime() if p is None else p
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.shape[1] > 2**16:
        raise DimensionMismatch("inner dimension too large for exact int64 product")
    lo = a & 0xFFFF
    hi = a >> 16
    out = (hi @ b) % p
    out = (out * 65536 + (lo @ b)) % p
    return out


def _eliminate(a: np.ndarray, p: int, reduced: bool, ncols: int | None = None):
    """In-place Gaussian elimination on a copy; returns (echelon rows, pivots).

    Pivots are searched only in the first `ncols` columns; row operations
    still span the full width.
    """
    A = np.array(a, dtype=np.int64) % p
    m, n = A.shape
    ncols = n if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r, c:] = (A[r, c:] * inv_int(int(A[r, c]), p)) % p
        if reduced:
            col = A[:, c].copy()
            col[r] = 0
        else:
            col = np.zeros(m, dtype=np.int64)
            col[r + 1:] = A[r + 1:, c]
        rows = np.flatnonzero(col)
        if rows.size:
            upd = (col[rows, None] * A[r, c:]) % p
            A[rows, c:] = (A[rows, c:] - upd) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rref(a, p: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with zero rows dropped, plus pivot columns."""
    p = get_prime() if p is None else p
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return np.zeros((0, a.shape[1] if a.ndim == 2 else 0), dtype=np.int64), []
    return _eliminate(a, p, reduced=True)


def rank(a, p: int | None = None) -> int:
    p = get_prime() if p is None else p
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return 0
    # eliminate along the short side
    if a.shape[0] > a.shape[1]:
        a = a.T
    return len(_eliminate(a, p, reduced=False)[1])


def reduce_rows(rows: np.ndarray, echelon: np.ndarray, pivots: list[int], p: int | None = None) -> np.ndarray:
    """Residues of `rows` modulo the row space of an RREF matrix."""
    p = get_prime() if p is None else p
    rows = np.asarray(rows, dtype=np.int64) % p
    if not pivots or rows.shape[0] == 0:
        return rows
    coef = rows[:, pivots]
    return (rows - matmul_mod(coef, echelon, p)) % p


def in_rowspan(target, generators, p: int | None = None) -> bool:
    """True iff every row of `target` lies in the row space of `generators`."""
    p = get_prime() if p is None else p
    target = np.asarray(target, dtype=np.int64)
    generators = np.asarray(generators, dtype=np.int64)
    if target.size == 0:
        return True
    if generators.ndim == 2 and target.shape[1] != generators.shape[1]:
        raise DimensionMismatch("target and generators differ in column count")
    if generators.size == 0:
        return not np.any(target % p)
    R, piv = rref(generators, p)
    return not np.any(reduce_rows(target, R, piv, p))


class Subspace:
    """A subspace of F_p^d given by an RREF row basis."""

    __slots__ = ("ambient_dim", "basis", "p")

    def __init__(self, ambient_dim: int, basis: np.ndarray, p: int):
        self.ambient_dim = ambient_dim
        self.basis = basis
        self.p = p

    @classmethod
    def from_rows(cls, rows, ambient_dim: int | None = None, p: int | None = None) -> Subspace:
        p = get_prime() if p is None else p
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1) if rows.size else rows.reshape(0, ambient_dim or 0)
        d = rows.shape[1] if ambient_dim is None else ambient_dim
        if rows.shape[1] != d:
            raise DimensionMismatch(f"rows have {rows.shape[1]} columns, ambient dimension is {d}")
        basis, _ = rref(rows, p) if rows.shape[0] else (np.zeros((0, d), dtype=np.int64), [])
        return cls(d, basis, p)

    @classmethod
    def from_columns(cls, mat, p: int | None = None) -> Subspace:
        """Column span of a d x m matrix."""
        mat = np.asarray(mat, dtype=np.int64)
        return cls.from_rows(mat.T, ambient_dim=mat.shape[0], p=p)

    @classmethod
    def zero(cls, d: int, p: int | None = None) -> Subspace:
        p = get_prime() if p is None else p
        return cls(d, np.zeros((0, d), dtype=np.int64), p)

    @classmethod
    def full(cls, d: int, p: int | None = None) -> Subspace:
        p = get_prime() if p is None else p
        return cls(d, identity(d), p)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, rows) -> bool:
        return in_rowspan(rows, self.basis, self.p)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _compatible(u: Subspace, v: Subspace) -> None:
    if u.ambient_dim != v.ambient_dim:
        raise DimensionMismatch(f"ambient dimensions {u.ambient_dim} and {v.ambient_dim} differ")
    if u.p != v.p:
        raise ConfigurationError(f"modulus mismatch: {u.p} vs {v.p}")


def sum_space(u: Subspace, v: Subspace) -> Subspace:
    _compatible(u, v)
    return Subspace.from_rows(np.vstack([u.basis, v.basis]), u.ambient_dim, u.p)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """U ∩ V by Zassenhaus: echelonize [[U, U], [V, 0]] and read off the rows
    whose left half vanished."""
    _compatible(u, v)
    d = u.ambient_dim
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(d, u.p)
    top = np.hstack([u.basis, u.basis])
    bottom = np.hstack([v.basis, np.zeros_like(v.basis)])
    ech, piv = _eliminate(np.vstack([top, bottom]), u.p, reduced=False, ncols=2 * d)
    left_rank = sum(1 for c in piv if c < d)
    return Subspace.from_rows(ech[left_rank:, d:], d, u.p)


def intersect_all(spaces) -> Subspace:
    spaces = list(spaces)
    acc = spaces[0]
    for s in spaces[1:]:
        if acc.dim == 0:
            break
        acc = intersect(acc, s)
    return acc


def complement_basis(whole: Subspace, part: Subspace, want: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """`want` rows inside `whole` that are jointly independent of `part`.

    With `rng` the rows are random combinations of `whole`'s basis, which
    keeps them in general position; without it the choice is the first
    qualifying rows of the canonical basis.
    """
    _compatible(whole, part)
    p, d = whole.p, whole.ambient_dim
    if want < 0:
        raise ValueError("want must be non-negative")
    if want == 0:
        return np.zeros((0, d), dtype=np.int64)
    P, ppiv = rref(part.basis, p) if part.dim else (part.basis, [])
    resid = reduce_rows(whole.basis, P, ppiv, p)
    # indices of a maximal set of rows whose residues are independent
    _, free = rref(resid.T, p)
    if want > len(free):
        raise InsufficientDimension(
            f"want {want} vectors but only {len(free)} are independent of the given part"
        )
    if rng is not None:
        for _ in range(8):
            g = random_matrix(rng, want, whole.dim, p)
            cand = matmul_mod(g, whole.basis, p)
            if rank(reduce_rows(cand, P, ppiv, p), p) == want:
                return cand
    return whole.basis[free[:want]].copy()
