"""Exact dense linear algebra over a prime field F_p.

Everything else in the engine reduces to the four primitives here:
reduced row echelon form, deterministic linear solving, kernel bases and
quotient-space splittings.  All arithmetic is integer arithmetic mod p on
int64 arrays; there is no floating point anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Optional, Sequence

import numpy as np

SUPPORTED_PRIMES = (2, 3, 5, 7)


def _check_modulus(p: int) -> None:
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"unsupported characteristic {p}; supported: {SUPPORTED_PRIMES}")


@dataclass(frozen=True)
class FpScalar:
    """A residue in [0, p) for a small prime p."""

    value: int
    modulus: int

    def __post_init__(self):
        _check_modulus(self.modulus)
        object.__setattr__(self, "value", int(self.value) % self.modulus)

    def _lift(self, other) -> "FpScalar":
        if isinstance(other, FpScalar):
            if other.modulus != self.modulus:
                raise ValueError("mixed moduli")
            return other
        return FpScalar(int(other), self.modulus)

    def __add__(self, other):
        o = self._lift(other)
        return FpScalar(self.value + o.value, self.modulus)

    def __sub__(self, other):
        o = self._lift(other)
        return FpScalar(self.value - o.value, self.modulus)

    def __mul__(self, other):
        o = self._lift(other)
        return FpScalar(self.value * o.value, self.modulus)

    def __neg__(self):
        return FpScalar(-self.value, self.modulus)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FpScalar(pow(self.value, self.modulus - 2, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()


class FpMatrix:
    """Immutable dense matrix over F_p, stored as an int64 array mod p."""

    __slots__ = ("p", "a", "_key")

    def __init__(self, p: int, data):
        _check_modulus(p)
        arr = np.array(data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        arr %= p
        arr.flags.writeable = False
        self.p = p
        self.a = arr
        self._key = None

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self.a.tobytes()
        return self._key

    def __eq__(self, other):
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and np.array_equal(self.a, other.a)
        )

    def __hash__(self):
        return hash((self.p, self.a.shape, self.key))

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.a.tolist()})"

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        return FpMatrix(self.p, self.a + other.a)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        return FpMatrix(self.p, self.a - other.a)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.p, -self.a)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.a.shape} @ {other.a.shape}")
        return FpMatrix(self.p, self.a @ other.a)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix(self.p, self.a * (int(c) % self.p))

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.a.T)

    def is_zero(self) -> bool:
        return not self.a.any()

    def rank(self) -> int:
        return rref(self)[2]


def hstack(mats: Sequence[FpMatrix]) -> FpMatrix:
    p = mats[0].p
    return FpMatrix(p, np.hstack([m.a for m in mats]))


def vstack(mats: Sequence[FpMatrix]) -> FpMatrix:
    p = mats[0].p
    return FpMatrix(p, np.vstack([m.a for m in mats]))


def block_diag(mats: Sequence[FpMatrix], p: int) -> FpMatrix:
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for m in mats:
        out[r : r + m.rows, c : c + m.cols] = m.a
        r += m.rows
        c += m.cols
    return FpMatrix(p, out)


def _rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, tuple[int, ...]]:
    m = a % p
    m = m.copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = -1
        for i in range(r, rows):
            if m[i, c] % p:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        nz = np.nonzero(m[:, c])[0]
        for i in nz:
            if i != r:
                m[i] = (m[i] - m[i, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m, tuple(pivots)


def rref(m: FpMatrix) -> tuple[FpMatrix, tuple[int, ...], int]:
    """Unique reduced row echelon form, pivot columns (ascending), rank."""
    red, pivots = _rref_array(m.a, m.p)
    return FpMatrix(m.p, red), pivots, len(pivots)


def solve_right(a: FpMatrix, b: FpMatrix) -> Optional[FpMatrix]:
    """Some X with a @ X = b, or None if inconsistent.

    Deterministic: free variables are set to 0, so the result is the unique
    solution with support on the pivot columns of a.
    """
    if a.rows != b.rows:
        raise ValueError(f"row mismatch: {a.rows} vs {b.rows}")
    p = a.p
    aug = np.hstack([a.a, b.a])
    red, pivots = _rref_array(aug, p)
    pivots_a = [c for c in pivots if c < a.cols]
    if len(pivots_a) != len(pivots):
        return None  # a pivot landed in the b block: inconsistent
    x = np.zeros((a.cols, b.cols), dtype=np.int64)
    for r, c in enumerate(pivots_a):
        x[c] = red[r, a.cols :]
    return FpMatrix(p, x)


def kernel_basis(a: FpMatrix) -> FpMatrix:
    """Matrix whose columns are the canonical basis of {x : a @ x = 0}."""
    p = a.p
    red, pivots = _rref_array(a.a, p)
    n = a.cols
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        out[fc, j] = 1
        for r, pc in enumerate(pivots):
            out[pc, j] = (-red[r, fc]) % p
    return FpMatrix(p, out)


def column_space_basis(a: FpMatrix) -> FpMatrix:
    """Columns of a restricted to a basis of the column space (pivot columns)."""
    _, pivots = _rref_array(a.a, a.p)
    return FpMatrix(a.p, a.a[:, list(pivots)])


def quotient_space(p: int, ambient_dim: int, sub_basis: FpMatrix) -> tuple[FpMatrix, FpMatrix]:
    """Projection and section for k^ambient_dim / colspan(sub_basis).

    proj is surjective with kernel exactly the column span; lift satisfies
    proj @ lift = identity on the quotient.
    """
    if sub_basis.rows != ambient_dim:
        raise ValueError("sub_basis rows must equal ambient dimension")
    base = column_space_basis(sub_basis)
    chosen = []
    rank = base.rank()
    cur = base
    for i in range(ambient_dim):
        e = np.zeros((ambient_dim, 1), dtype=np.int64)
        e[i, 0] = 1
        cand = FpMatrix(p, np.hstack([cur.a, e]))
        r = cand.rank()
        if r > rank:
            chosen.append(i)
            cur = cand
            rank = r
    q = len(chosen)
    lift = np.zeros((ambient_dim, q), dtype=np.int64)
    for j, i in enumerate(chosen):
        lift[i, j] = 1
    full = cur  # [base | lift], invertible square matrix of size ambient_dim
    assert full.rows == full.cols == ambient_dim or ambient_dim == 0
    inv = solve_right(full, FpMatrix.identity(p, ambient_dim))
    assert inv is not None
    proj = FpMatrix(p, inv.a[base.cols :, :])
    # sanity: kills the subspace, splits the quotient
    assert (proj @ sub_basis).is_zero()
    assert proj @ FpMatrix(p, lift) == FpMatrix.identity(p, q)
    return proj, FpMatrix(p, lift)


def invert(a: FpMatrix) -> Optional[FpMatrix]:
    if a.rows != a.cols:
        return None
    x = solve_right(a, FpMatrix.identity(a.p, a.rows))
    if x is None or (a @ x) != FpMatrix.identity(a.p, a.rows):
        return None
    return x


def all_vectors(p: int, n: int) -> Iterator[np.ndarray]:
    for tup in product(range(p), repeat=n):
        yield np.array(tup, dtype=np.int64)


def all_matrices(p: int, rows: int, cols: int) -> Iterator[FpMatrix]:
    for tup in product(range(p), repeat=rows * cols):
        yield FpMatrix(p, np.array(tup, dtype=np.int64).reshape(rows, cols))


def count_subspaces(p: int, n: int) -> int:
    total = 0
    for k in range(n + 1):
        num = 1
        for i in range(k):
            num *= (p**n - p**i)
        den = 1
        for i in range(k):
            den *= (p**k - p**i)
        total += num // den if k else 1
    return total


def all_subspaces(p: int, n: int) -> list[FpMatrix]:
    """Inclusion matrices (n x k, columns a canonical basis) of every subspace.

    Enumerated via reduced-echelon normal forms, so each subspace appears
    exactly once and the order is deterministic.
    """
    out = []
    for k in range(n + 1):
        for pivots in combinations(range(n), k):
            free_positions = []
            for r in range(k):
                for c in range(pivots[r] + 1, n):
                    if c not in pivots:
                        free_positions.append((r, c))
            for vals in product(range(p), repeat=len(free_positions)):
                m = np.zeros((k, n), dtype=np.int64)
                for r in range(k):
                    m[r, pivots[r]] = 1
                for (r, c), v in zip(free_positions, vals):
                    m[r, c] = v
                out.append(FpMatrix(p, m.T))
    return out


class IncrementalSpan:
    """Streaming row-reduced span tracker over F_p.

    add(vec) reduces vec against the current basis and reports whether it
    enlarged the span; O(rank * width) per vector.
    """

    def __init__(self, p: int, width: int):
        self.p = p
        self.width = width
        self.rows: list[np.ndarray] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        v = vec.astype(np.int64) % self.p
        for row, piv in zip(self.rows, self.pivots):
            c = v[piv]
            if c:
                v = (v - c * row) % self.p
        return v

    def add(self, vec: np.ndarray) -> bool:
        v = self.reduce(vec)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        inv = pow(int(v[piv]), self.p - 2, self.p)
        v = (v * inv) % self.p
        for i, row in enumerate(self.rows):
            c = row[piv]
            if c:
                self.rows[i] = (row - c * v) % self.p
        self.rows.append(v)
        self.pivots.append(piv)
        return True

    def contains(self, vec: np.ndarray) -> bool:
        return not self.reduce(vec).any()


def linear_combinations(p: int, basis: list, cap: int) -> tuple[list, bool]:
    """All F_p-combinations of basis elements when p^len(basis) <= cap.

    Returns (coefficient vectors, exhaustive flag); above the cap, only the
    zero vector and the unit vectors are returned and the flag is False.
    """
    n = len(basis)
    if p**n <= cap:
        return [np.array(t, dtype=np.int64) for t in product(range(p), repeat=n)], True
    vecs = [np.zeros(n, dtype=np.int64)]
    for i in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[i] = 1
        vecs.append(e)
    return vecs, False
