"""Bounded complexes of finite free Z/p^N-modules and their exact homology."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .padic import (BaseRing, PAdicMatrix, ExactLinalgError, ShapeError,
                    integer_smith, integer_invariant_factors)

HOMOLOGICAL = "homological"
COHOMOLOGICAL = "cohomological"


class ComplexError(ExactLinalgError):
    pass


@dataclass(frozen=True)
class ChainComplex:
    """A bounded complex of free modules over Z/p^N.

    ``ranks[i]`` is the rank in degree ``min_degree + i``.  ``differentials[j]``
    is the map between degrees min_degree+j and min_degree+j+1: for the
    homological orientation it goes downward, C_{j+1} -> C_j, with shape
    (ranks[j], ranks[j+1]); for the cohomological orientation it goes upward
    with the transposed shape.  Zero-rank degrees are represented explicitly.
    """

    ring: BaseRing
    orientation: str
    min_degree: int
    ranks: tuple
    differentials: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        if self.orientation not in (HOMOLOGICAL, COHOMOLOGICAL):
            raise ValueError(f"bad orientation {self.orientation!r}")
        if len(self.differentials) != max(len(self.ranks) - 1, 0):
            raise ShapeError("differential count does not match degree range")
        for j, d in enumerate(self.differentials):
            want = ((self.ranks[j], self.ranks[j + 1])
                    if self.orientation == HOMOLOGICAL
                    else (self.ranks[j + 1], self.ranks[j]))
            if d.shape != want:
                raise ShapeError(
                    f"differential between degrees {self.min_degree + j} and "
                    f"{self.min_degree + j + 1} has shape {d.shape}, expected {want}")

    @property
    def degrees(self):
        return range(self.min_degree, self.min_degree + len(self.ranks))

    def rank(self, degree: int) -> int:
        return self.ranks[degree - self.min_degree]

    def boundary_maps(self, degree: int):
        """(d_out, d_in) for the given degree; None where the complex ends."""
        i = degree - self.min_degree
        if not (0 <= i < len(self.ranks)):
            raise IndexError(f"degree {degree} outside complex")
        if self.orientation == HOMOLOGICAL:
            d_out = self.differentials[i - 1] if i > 0 else None
            d_in = self.differentials[i] if i < len(self.differentials) else None
        else:
            d_out = self.differentials[i] if i < len(self.differentials) else None
            d_in = self.differentials[i - 1] if i > 0 else None
        return d_out, d_in

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * self.rank(d) for d in self.degrees)


def make_complex(ring: BaseRing, orientation: str, min_degree: int,
                 ranks: Sequence[int], differentials: Sequence[PAdicMatrix],
                 labels=None) -> ChainComplex:
    return ChainComplex(ring, orientation, min_degree, tuple(ranks),
                        tuple(differentials), tuple(labels) if labels else None)


def verify_complex(C: ChainComplex):
    """(True, None) if every consecutive composite vanishes, else (False, degree).

    The reported degree is the lower degree of the failing pair.
    """
    for j in range(len(C.differentials) - 1):
        if C.orientation == HOMOLOGICAL:
            comp = C.differentials[j] @ C.differentials[j + 1]
            deg = C.min_degree + j
        else:
            comp = C.differentials[j + 1] @ C.differentials[j]
            deg = C.min_degree + j
        if not comp.is_zero():
            return False, deg
    return True, None


@dataclass(frozen=True)
class HomologyProfile:
    """Per degree: rank of the free part and a multiset of torsion exponents.

    Torsion is recorded as a sorted tuple of exponents a with 0 < a < N,
    one per elementary divisor p^a.
    """

    ring: BaseRing
    min_degree: int
    free_ranks: tuple
    torsion: tuple  # tuple of tuples of exponents

    @property
    def degrees(self):
        return range(self.min_degree, self.min_degree + len(self.free_ranks))

    def free_rank(self, degree: int) -> int:
        i = degree - self.min_degree
        return self.free_ranks[i] if 0 <= i < len(self.free_ranks) else 0

    def torsion_at(self, degree: int):
        i = degree - self.min_degree
        return self.torsion[i] if 0 <= i < len(self.torsion) else ()

    def is_zero(self) -> bool:
        return all(f == 0 for f in self.free_ranks) and all(not t for t in self.torsion)

    def nonzero_degrees(self):
        return [d for d in self.degrees
                if self.free_rank(d) or self.torsion_at(d)]

    def summary(self) -> dict:
        return {str(d): {"free_rank": self.free_rank(d),
                         "torsion_exponents": list(self.torsion_at(d))}
                for d in self.degrees}


def _classify(val_N, exponent_counts, f, p):
    """Bucket one elementary divisor class p^v: free if v >= N, torsion if 0<v<N."""
    v = 0
    x = abs(f)
    while x and x % p == 0:
        x //= p
        v += 1
    if f == 0 or v >= val_N:
        return "free"
    if v == 0:
        return None
    return v


def _integer_lift_is_complex(C: ChainComplex):
    lifts = [d.lift_centered() for d in C.differentials]
    for j in range(len(lifts) - 1):
        if C.orientation == HOMOLOGICAL:
            A, B = lifts[j], lifts[j + 1]
        else:
            A, B = lifts[j + 1], lifts[j]
        # A @ B over the integers
        for row in A:
            for cj in range(len(B[0]) if B else 0):
                if sum(a * B[k][cj] for k, a in enumerate(row)):
                    return None
    return lifts


def _homology_universal_coefficients(C: ChainComplex, lifts) -> HomologyProfile:
    """Fast path: the centered lift is a complex over Z, so homology mod p^N
    follows from integer invariant factors by universal coefficients."""
    ring = C.ring
    p, N = ring.p, ring.N
    n = len(C.ranks)
    # invariant factors of the differential between degree pair (j, j+1)
    factors = []
    for j, L in enumerate(lifts):
        rows = len(L)
        cols = len(L[0]) if rows else (C.ranks[j + 1] if C.orientation == HOMOLOGICAL
                                       else C.ranks[j])
        factors.append([f for f in integer_invariant_factors(L, rows, cols) if f != 0])
    free = []
    tors = []
    for i in range(n):
        deg_rank = C.ranks[i]
        d_out, d_in = C.boundary_maps(C.min_degree + i)
        if C.orientation == HOMOLOGICAL:
            out_f = factors[i - 1] if i > 0 else []
            in_f = factors[i] if i < len(factors) else []
        else:
            out_f = factors[i] if i < len(factors) else []
            in_f = factors[i - 1] if i > 0 else []
        f_rank = deg_rank - len(out_f) - len(in_f)
        t = []
        # H_i(Z) tensor Z/p^N: torsion of H_i(Z) comes from the incoming map
        for f in in_f:
            c = _classify(N, None, f, p)
            if c == "free":
                f_rank += 1
            elif c:
                t.append(c)
        # Tor(H_{i-1}(Z), Z/p^N): torsion of the adjacent degree, i.e. the
        # invariant factors of the outgoing map
        for f in out_f:
            c = _classify(N, None, f, p)
            if c == "free":
                f_rank += 1
            elif c:
                t.append(c)
        free.append(f_rank)
        tors.append(tuple(sorted(t)))
    return HomologyProfile(ring, C.min_degree, tuple(free), tuple(tors))


def _homology_generic_degree(ring: BaseRing, rank: int,
                             d_out: Optional[PAdicMatrix],
                             d_in: Optional[PAdicMatrix]):
    """ker(d_out)/im(d_in) over Z/p^N in one degree, fully general.

    Works by presenting the kernel lattice L = {x in Z^n : A x = 0 mod p^N}
    in coordinates given by the integer Smith form of A, then reading the
    quotient by im(B) + p^N Z^n off a second Smith form.
    """
    p, N = ring.p, ring.N
    mod = ring.modulus
    n = rank
    if n == 0:
        return 0, ()
    if d_out is None or d_out.rows == 0:
        A = [[0] * n]
        m = 1
    else:
        A = d_out.lift_centered()
        m = d_out.rows
    diag, _, V, Vinv = integer_smith(A, m, n)
    # lattice L has basis V * diag(e), e_i = p^N / gcd(d_i, p^N)
    e = []
    for i in range(n):
        d = diag[i] if i < len(diag) else 0
        g = 1
        dd = abs(d)
        while dd and dd % p == 0 and g < mod:
            dd //= p
            g *= p
        if d == 0:
            g = mod
        e.append(mod // min(g, mod) if d != 0 else 1)
    # relation columns: image of d_in plus p^N * I, in y = Vinv x coordinates
    cols = []
    if d_in is not None and d_in.cols:
        B = d_in.lift_centered()
        for j in range(d_in.cols):
            cols.append([B[i][j] for i in range(n)])
    for i in range(n):
        cols.append([mod if k == i else 0 for k in range(n)])
    M = []
    for i in range(n):
        Vr = Vinv[i]
        row = []
        for c in cols:
            y = sum(Vr[k] * c[k] for k in range(n))
            if y % e[i]:
                raise ComplexError("relation escapes the kernel lattice "
                                   "(d_out @ d_in != 0 mod p^N)")
            row.append(y // e[i])
        M.append(row)
    fs = integer_invariant_factors(M, n, len(cols))
    f_rank = 0
    t = []
    for i in range(n):
        f = fs[i] if i < len(fs) else 0
        c = _classify(N, None, f, p)
        if c == "free":
            f_rank += 1
        elif c:
            t.append(c)
    return f_rank, tuple(sorted(t))


def homology(C: ChainComplex) -> HomologyProfile:
    """Exact homology (or cohomology) profile of a bounded complex."""
    ok, deg = verify_complex(C)
    if not ok:
        raise ComplexError(f"not a complex: d o d != 0 at degree {deg}")
    if not C.ranks:
        return HomologyProfile(C.ring, C.min_degree, (), ())
    lifts = _integer_lift_is_complex(C)
    if lifts is not None:
        return _homology_universal_coefficients(C, lifts)
    free = []
    tors = []
    for d in C.degrees:
        d_out, d_in = C.boundary_maps(d)
        f, t = _homology_generic_degree(C.ring, C.rank(d), d_out, d_in)
        free.append(f)
        tors.append(t)
    return HomologyProfile(C.ring, C.min_degree, tuple(free), tuple(tors))


def dualize_complex(C: ChainComplex) -> ChainComplex:
    """Degreewise dual: transposed differentials, flipped orientation.

    All modules are free, so dualization is literally transposition; ranks and
    degree labels are preserved and the double dual is the original complex.
    """
    flipped = COHOMOLOGICAL if C.orientation == HOMOLOGICAL else HOMOLOGICAL
    return ChainComplex(C.ring, flipped, C.min_degree, C.ranks,
                        tuple(d.transpose() for d in C.differentials), C.labels)
