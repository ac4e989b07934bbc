"""Exact matrices over the truncated ring Z/p^N and Smith normal form.

All arithmetic is integer arithmetic; nothing here ever touches a float.
Matrices are immutable (tuple-of-tuples) and safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class ExactLinalgError(Exception):
    pass


class ShapeError(ExactLinalgError):
    pass


class InconsistentSystemError(ExactLinalgError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class BaseRing:
    """The ring Z/p^N for a prime p and truncation exponent N >= 1."""

    p: int
    N: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.N < 1:
            raise ValueError(f"N = {self.N} must be >= 1")

    @property
    def modulus(self) -> int:
        return self.p ** self.N

    def reduce(self, x: int) -> int:
        return x % self.modulus

    def valuation(self, x: int) -> int:
        """p-adic valuation of the residue class; the zero class has valuation N."""
        x = self.reduce(x)
        if x == 0:
            return self.N
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def is_unit(self, x: int) -> bool:
        return self.reduce(x) % self.p != 0

    def inv(self, x: int) -> int:
        if not self.is_unit(x):
            raise ExactLinalgError(f"{x} is not a unit mod {self.p}^{self.N}")
        return pow(x, -1, self.modulus)


def _centered(x: int, m: int) -> int:
    """Lift of a residue to the interval (-m/2, m/2]."""
    x %= m
    return x - m if x > m // 2 else x


class PAdicMatrix:
    """Dense exact matrix over Z/p^N."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: BaseRing, entries: Sequence[Sequence[int]],
                 rows: int | None = None, cols: int | None = None):
        if rows is None:
            rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if rows else 0
        m = ring.modulus
        data = []
        for r in entries:
            if len(r) != cols:
                raise ShapeError("ragged rows")
            data.append(tuple(x % m for x in r))
        if len(data) != rows:
            raise ShapeError("row count mismatch")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", tuple(data))

    def __setattr__(self, *a):
        raise AttributeError("PAdicMatrix is immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def identity(ring: BaseRing, n: int) -> "PAdicMatrix":
        return PAdicMatrix(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @staticmethod
    def zeros(ring: BaseRing, rows: int, cols: int) -> "PAdicMatrix":
        return PAdicMatrix(ring, [[0] * cols for _ in range(rows)], rows, cols)

    @staticmethod
    def from_flat(ring: BaseRing, rows: int, cols: int, flat: Sequence[int]) -> "PAdicMatrix":
        if len(flat) != rows * cols:
            raise ShapeError("flat entry count mismatch")
        return PAdicMatrix(ring, [flat[i * cols:(i + 1) * cols] for i in range(rows)], rows, cols)

    # -- basics ------------------------------------------------------------

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __eq__(self, other):
        return (isinstance(other, PAdicMatrix) and self.ring == other.ring
                and self.shape == other.shape and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring, self.entries))

    def __repr__(self):
        return f"PAdicMatrix({self.rows}x{self.cols} mod {self.ring.p}^{self.ring.N})"

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self):
        return [list(r) for r in self.entries]

    def lift_centered(self):
        """Integer lift with entries in (-p^N/2, p^N/2]."""
        m = self.ring.modulus
        return [[_centered(x, m) for x in row] for row in self.entries]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "PAdicMatrix") -> "PAdicMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"add {self.shape} vs {other.shape}")
        return PAdicMatrix(self.ring, [[a + b for a, b in zip(r, s)]
                                       for r, s in zip(self.entries, other.entries)],
                           self.rows, self.cols)

    def __sub__(self, other: "PAdicMatrix") -> "PAdicMatrix":
        return self + (-other)

    def __neg__(self) -> "PAdicMatrix":
        return PAdicMatrix(self.ring, [[-a for a in r] for r in self.entries],
                           self.rows, self.cols)

    def scale(self, c: int) -> "PAdicMatrix":
        return PAdicMatrix(self.ring, [[c * a for a in r] for r in self.entries],
                           self.rows, self.cols)

    def __matmul__(self, other: "PAdicMatrix") -> "PAdicMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"matmul {self.shape} vs {other.shape}")
        m = self.ring.modulus
        ot = list(zip(*other.entries)) if other.entries else [()] * other.cols
        out = []
        for r in self.entries:
            out.append([sum(a * b for a, b in zip(r, c)) % m for c in ot])
        if self.rows and not other.cols:
            out = [[] for _ in range(self.rows)]
        return PAdicMatrix(self.ring, out, self.rows, other.cols)

    def transpose(self) -> "PAdicMatrix":
        return PAdicMatrix(self.ring, [list(c) for c in zip(*self.entries)] if self.rows and self.cols
                           else [[] for _ in range(self.cols)] if self.cols else [],
                           self.cols, self.rows)

    def kron(self, other: "PAdicMatrix") -> "PAdicMatrix":
        """Kronecker product; basis index (i, k) -> i * other.rows + k."""
        out = []
        for i in range(self.rows):
            for k in range(other.rows):
                row = []
                for j in range(self.cols):
                    a = self.entries[i][j]
                    row.extend(a * b for b in other.entries[k])
                out.append(row)
        return PAdicMatrix(self.ring, out, self.rows * other.rows, self.cols * other.cols)

    def hstack(self, other: "PAdicMatrix") -> "PAdicMatrix":
        if self.rows != other.rows:
            raise ShapeError("hstack row mismatch")
        return PAdicMatrix(self.ring, [list(a) + list(b) for a, b in zip(self.entries, other.entries)],
                           self.rows, self.cols + other.cols)

    def vstack(self, other: "PAdicMatrix") -> "PAdicMatrix":
        if self.cols != other.cols:
            raise ShapeError("vstack col mismatch")
        return PAdicMatrix(self.ring, [list(r) for r in self.entries] + [list(r) for r in other.entries],
                           self.rows + other.rows, self.cols)

    def column(self, j: int) -> "PAdicMatrix":
        return PAdicMatrix(self.ring, [[r[j]] for r in self.entries], self.rows, 1)

    def select_rows(self, idx: Iterable[int]) -> "PAdicMatrix":
        idx = list(idx)
        return PAdicMatrix(self.ring, [list(self.entries[i]) for i in idx], len(idx), self.cols)

    def select_cols(self, idx: Iterable[int]) -> "PAdicMatrix":
        idx = list(idx)
        return PAdicMatrix(self.ring, [[r[j] for j in idx] for r in self.entries], self.rows, len(idx))


def block_diag(ring: BaseRing, blocks: Sequence[PAdicMatrix]) -> PAdicMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                out[r0 + i][c0 + j] = b.entries[i][j]
        r0 += b.rows
        c0 += b.cols
    return PAdicMatrix(ring, out, rows, cols)


# ---------------------------------------------------------------------------
# Integer Smith normal form (the workhorse; Z/p^N results are read off it).
# ---------------------------------------------------------------------------

def _find_pivot(A, m, n, t):
    best = None
    for i in range(t, m):
        row = A[i]
        for j in range(t, n):
            a = row[j]
            if a:
                a = abs(a)
                if best is None or a < best[0]:
                    best = (a, i, j)
                    if a == 1:
                        return i, j
    return None if best is None else (best[1], best[2])


def integer_smith(mat: Sequence[Sequence[int]], m: int, n: int,
                  transforms: bool = True):
    """Smith normal form over Z.

    Returns (diag, U, V, Vinv) with U*mat*V diagonal = diag (length min(m, n),
    nonnegative, divisibility chain).  U, V unimodular; Vinv = V^{-1}.
    With transforms=False the three transform slots are None (much faster).
    """
    A = [list(r) for r in mat]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if transforms else None
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if transforms else None
    Vi = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if transforms else None

    def row_op(i, k, q):  # row i -= q * row k
        Ai, Ak = A[i], A[k]
        for j in range(n):
            Ai[j] -= q * Ak[j]
        if transforms:
            Ui, Uk = U[i], U[k]
            for j in range(m):
                Ui[j] -= q * Uk[j]

    def col_op(j, l, q):  # col j -= q * col l
        for r in A:
            r[j] -= q * r[l]
        if transforms:
            for r in V:
                r[j] -= q * r[l]
            Vl, Vj = Vi[l], Vi[j]
            for c in range(n):
                Vl[c] += q * Vj[c]

    def row_swap(i, k):
        A[i], A[k] = A[k], A[i]
        if transforms:
            U[i], U[k] = U[k], U[i]

    def col_swap(j, l):
        for r in A:
            r[j], r[l] = r[l], r[j]
        if transforms:
            for r in V:
                r[j], r[l] = r[l], r[j]
            Vi[j], Vi[l] = Vi[l], Vi[j]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        if transforms:
            U[i] = [-x for x in U[i]]

    t = 0
    limit = min(m, n)
    while t < limit:
        piv = _find_pivot(A, m, n, t)
        if piv is None:
            break
        i, j = piv
        if i != t:
            row_swap(t, i)
        if j != t:
            col_swap(t, j)
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_op(i, t, q)
                    if A[i][t]:
                        row_swap(t, i)
                        dirty = True
            if dirty:
                continue
            # clear row t
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_op(j, t, q)
                    if A[t][j]:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            # pivot must divide the remaining block
            d = A[t][t]
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % d:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)  # row t += row bad, then restart clearing
        if A[t][t] < 0:
            row_neg(t)
        t += 1

    diag = [A[i][i] if i < t else 0 for i in range(limit)]
    return diag, U, V, Vi


def integer_invariant_factors(mat: Sequence[Sequence[int]], m: int, n: int):
    diag, _, _, _ = integer_smith(mat, m, n, transforms=False)
    return diag


# ---------------------------------------------------------------------------
# Smith normal form over Z/p^N
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithDecomposition:
    """left @ matrix @ right == diag(invariants) over Z/p^N.

    Each invariant is a canonical p-power residue: 1, p, ..., p^{N-1}, or 0
    (the class of p^N).  Invariants are sorted by increasing valuation.
    """

    invariants: tuple
    left: PAdicMatrix
    right: PAdicMatrix

    def diagonal_matrix(self, rows: int, cols: int) -> PAdicMatrix:
        ring = self.left.ring
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(self.invariants):
            out[i][i] = d
        return PAdicMatrix(ring, out, rows, cols)


def smith_normal_form(A: PAdicMatrix) -> SmithDecomposition:
    """Smith form over Z/p^N via an integer-matrix Smith form of a lift."""
    ring = A.ring
    p, N, mod = ring.p, ring.N, ring.modulus
    diag, U, V, _ = integer_smith(A.lift_centered(), A.rows, A.cols)
    invariants = []
    Um = [list(r) for r in U]
    for i, d in enumerate(diag):
        if d == 0:
            invariants.append(0)
            continue
        a = 0
        dd = d
        while dd % p == 0:
            dd //= p
            a += 1
        if a >= N:
            invariants.append(0)
            continue
        # scale row i of U so the diagonal entry becomes exactly p^a
        u_inv = pow(dd, -1, mod)
        Um[i] = [x * u_inv for x in Um[i]]
        invariants.append(p ** a)
    left = PAdicMatrix(ring, Um, A.rows, A.rows)
    right = PAdicMatrix(ring, V, A.cols, A.cols)
    # canonical order: nonzero p-powers by valuation, zeros last (guaranteed
    # by the integer divisibility chain, but cheap to assert)
    vals = [ring.valuation(d) for d in invariants]
    assert vals == sorted(vals), "invariant factors out of order"
    return SmithDecomposition(tuple(invariants), left, right)


def kernel_basis(A: PAdicMatrix) -> PAdicMatrix:
    """Minimal generating set of {x : A x = 0} as a Z/p^N-module.

    One generator per non-unit invariant factor: p^{N-a} * (right col i) for
    invariant p^a, and right col i for invariant 0 / free trailing columns.
    """
    ring = A.ring
    if A.cols == 0:
        return PAdicMatrix.zeros(ring, 0, 0)
    if A.rows == 0:
        return PAdicMatrix.identity(ring, A.cols)
    snf = smith_normal_form(A)
    gens = []
    for i in range(A.cols):
        inv = snf.invariants[i] if i < len(snf.invariants) else 0
        a = ring.valuation(inv)
        if a == 0:
            continue  # unit invariant: coordinate forced to zero
        scalar = ring.p ** (ring.N - a)
        gens.append(snf.right.column(i).scale(scalar))
    if not gens:
        return PAdicMatrix.zeros(ring, A.cols, 0)
    out = gens[0]
    for g in gens[1:]:
        out = out.hstack(g)
    return out


def inverse_mod(A: PAdicMatrix) -> PAdicMatrix:
    """Inverse of a matrix invertible over Z/p^N (unit-pivot elimination)."""
    ring = A.ring
    n = A.rows
    if A.cols != n:
        raise ShapeError("inverse of non-square matrix")
    mod = ring.modulus
    M = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(A.entries)]
    for c in range(n):
        piv = next((r for r in range(c, n) if ring.is_unit(M[r][c])), None)
        if piv is None:
            raise ExactLinalgError("matrix is not invertible mod p^N")
        M[c], M[piv] = M[piv], M[c]
        inv = pow(M[c][c], -1, mod)
        M[c] = [x * inv % mod for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [(x - f * y) % mod for x, y in zip(M[r], M[c])]
    return PAdicMatrix(ring, [row[n:] for row in M], n, n)


def solve(A: PAdicMatrix, B: PAdicMatrix) -> PAdicMatrix:
    """A canonical solution X of A @ X = B, or InconsistentSystemError."""
    ring = A.ring
    if A.rows != B.rows:
        raise ShapeError(f"solve {A.shape} vs {B.shape}")
    if A.cols == 0:
        if not B.is_zero():
            raise InconsistentSystemError("zero-column system with nonzero rhs")
        return PAdicMatrix.zeros(ring, 0, B.cols)
    snf = smith_normal_form(A)
    C = snf.left @ B
    Y = [[0] * B.cols for _ in range(A.cols)]
    for i in range(A.rows):
        inv = snf.invariants[i] if i < len(snf.invariants) else None
        a = ring.N if inv is None or inv == 0 else ring.valuation(inv)
        for j in range(B.cols):
            c = C.entries[i][j]
            if ring.valuation(c) < a:
                raise InconsistentSystemError(
                    f"no solution: row {i}, col {j} (valuation {ring.valuation(c)} < {a})")
            if i < A.cols and a < ring.N:
                Y[i][j] = c // (ring.p ** a)
    return snf.right @ PAdicMatrix(ring, Y, A.cols, B.cols)
