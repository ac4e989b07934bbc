"""The pointed simplicial set of weak chains in the partition lattice of
{1,...,n} from the one-block partition to the discrete one, its normalized
(reduced) chain complex, and exact homology over Z/p^N."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .padic import BaseRing, PAdicMatrix
from .complexes import (HOMOLOGICAL, ChainComplex, HomologyProfile,
                        homology, make_complex)

BASEPOINT = "*"

#: Hard size guardrail: the number of simplices grows faster than the Bell
#: numbers, so anything past n = 8 is rejected unless forced.
MAX_N = 8


class PartitionSizeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Set partitions
# ---------------------------------------------------------------------------

def canonical(blocks):
    """Canonical form: blocks as sorted tuples, ordered by least element."""
    return tuple(sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0]))


@lru_cache(maxsize=None)
def _partitions_of_range(m: int):
    """All set partitions of range(m), canonical, via restricted growth."""
    if m == 0:
        return ((),)
    out = []

    def grow(i, labels, kmax):
        if i == m:
            blocks = [[] for _ in range(kmax + 1)]
            for x, lab in enumerate(labels):
                blocks[lab].append(x)
            out.append(canonical(blocks))
            return
        for lab in range(kmax + 2):
            grow(i + 1, labels + [lab], max(kmax, lab))

    grow(1, [0], 0)
    return tuple(out)


def set_partitions(elements):
    """All partitions of a finite iterable, canonical form."""
    elements = sorted(elements)
    m = len(elements)
    result = []
    for part in _partitions_of_range(m):
        result.append(canonical(tuple(elements[i] for i in b) for b in part))
    return result


def one_block(n: int):
    return canonical([range(1, n + 1)])


def discrete(n: int):
    return canonical([i] for i in range(1, n + 1))


@dataclass(frozen=True)
class PartitionLattice:
    """All partitions of {1,...,n}, ordered by refinement (finer = larger,
    so the one-block partition is the bottom and the discrete one the top)."""
    n: int
    partitions: tuple

    def __len__(self):
        return len(self.partitions)

    @property
    def bottom(self):
        return one_block(self.n)

    @property
    def top(self):
        return discrete(self.n)

    def less_equal(self, lam, mu) -> bool:
        """True when mu refines lam (lam <= mu in the chain order used here)."""
        return refines(mu, lam)

    def covers(self):
        """All comparable pairs (lam, mu) with lam < mu (mu strictly finer)."""
        return tuple((lam, mu) for lam in self.partitions
                     for mu in strict_refinements(lam))


def partition_lattice(n: int, force: bool = False) -> PartitionLattice:
    """The full refinement lattice of set partitions of {1,...,n}."""
    _check_n(n, force)
    return PartitionLattice(n, tuple(set_partitions(range(1, n + 1))))


def refines(mu, lam) -> bool:
    """True when every block of mu lies inside a block of lam."""
    where = {}
    for j, b in enumerate(lam):
        for x in b:
            where[x] = j
    return all(len({where[x] for x in b}) == 1 for b in mu)


def strict_refinements(lam):
    """All partitions strictly finer than lam, canonical form."""
    choices = [set_partitions(b) for b in lam]
    out = []
    for combo in itertools.product(*choices):
        if all(len(part) == 1 for part in combo):
            continue  # nothing split: lam itself
        out.append(canonical(itertools.chain.from_iterable(combo)))
    return out


# ---------------------------------------------------------------------------
# The pointed simplicial set
# ---------------------------------------------------------------------------

def face(chain, i: int):
    """d_i deletes lambda_i.  Deleting an end element breaks the boundary
    conditions (the chain must run from the one-block partition to the
    discrete one), so the result collapses to the basepoint — unless the end
    element is repeated, in which case the conditions survive.  On strict
    chains this is the usual rule "the two end faces hit the basepoint"."""
    if chain == BASEPOINT:
        return BASEPOINT
    s = len(chain) - 1
    if s == 0:
        raise IndexError("no faces in degree 0")
    if not 0 <= i <= s:
        raise IndexError(f"face index {i} outside 0..{s}")
    if i == 0:
        return chain[1:] if chain[0] == chain[1] else BASEPOINT
    if i == s:
        return chain[:-1] if chain[s - 1] == chain[s] else BASEPOINT
    return chain[:i] + chain[i + 1:]


def degeneracy(chain, i: int):
    """s_i repeats lambda_i."""
    if chain == BASEPOINT:
        return BASEPOINT
    s = len(chain) - 1
    if not 0 <= i <= s:
        raise IndexError(f"degeneracy index {i} outside 0..{s}")
    return chain[:i + 1] + chain[i:]


def is_degenerate(chain) -> bool:
    if chain == BASEPOINT:
        return True
    return any(chain[i] == chain[i + 1] for i in range(len(chain) - 1))


def verify_simplicial_identities(simplices):
    """Check every simplicial identity on each given simplex.

    Returns (True, None) or (False, witness string).
    """
    for x in simplices:
        if x == BASEPOINT:
            continue
        s = len(x) - 1
        for i in range(s + 1):
            for j in range(i + 1, s + 1):
                if face(face(x, j), i) != face(face(x, i), j - 1):
                    return False, f"d_{i} d_{j} on {x}"
        for i in range(s + 1):
            for j in range(i, s + 1):
                if degeneracy(degeneracy(x, j), i) != \
                        degeneracy(degeneracy(x, i), j + 1):
                    return False, f"s_{i} s_{j} on {x}"
        for j in range(s + 1):
            y = degeneracy(x, j)
            for i in range(s + 2):
                if i < j:
                    want = degeneracy(face(x, i), j - 1)
                elif i in (j, j + 1):
                    want = x
                else:
                    want = degeneracy(face(x, i - 1), j)
                if face(y, i) != want:
                    return False, f"d_{i} s_{j} on {x}"
    return True, None


def _check_n(n: int, force: bool):
    if n < 1:
        raise PartitionSizeError("n must be >= 1")
    if n > MAX_N and not force:
        raise PartitionSizeError(
            f"n = {n} exceeds the guardrail {MAX_N}; pass force=True to "
            "attempt it anyway (simplex counts grow super-exponentially)")


def nondegenerate_simplices(n: int, force: bool = False):
    """Strict chains one-block = lambda_0 < ... < lambda_s = discrete,
    grouped by degree s (the basepoint is omitted)."""
    _check_n(n, force)
    top = one_block(n)
    bottom = discrete(n)
    by_degree = {}

    def extend(chain):
        if chain[-1] == bottom:
            by_degree.setdefault(len(chain) - 1, []).append(tuple(chain))
            return
        for mu in strict_refinements(chain[-1]):
            chain.append(mu)
            extend(chain)
            chain.pop()

    extend([top])
    return by_degree


@dataclass(frozen=True)
class PointedSimplicialSet:
    """The weak chains (repetitions allowed) from the one-block partition to
    the discrete one, degree by degree up to s_max, with the basepoint
    adjoined in every degree.  Faces and degeneracies are the module-level
    `face` and `degeneracy`."""
    n: int
    s_max: int
    simplices: tuple   # per degree s = 0..s_max, tuple of chains, basepoint last

    def degree(self, s: int):
        return self.simplices[s]

    def nondegenerate_counts(self):
        """Per degree, the number of nondegenerate non-basepoint simplices."""
        return tuple(sum(1 for c in sx if not is_degenerate(c))
                     for sx in self.simplices)

    def face(self, chain, i):
        return face(chain, i)

    def degeneracy(self, chain, i):
        return degeneracy(chain, i)

    def verify(self):
        """Check the simplicial identities on every stored simplex."""
        return verify_simplicial_identities(
            itertools.chain.from_iterable(self.simplices))


def poset_simplices(n: int, s_max: int, force: bool = False) -> PointedSimplicialSet:
    """All weak chains up to degree s_max, plus basepoints.  Each degree-s
    simplex is a degree-r nondegenerate chain with entries repeated to total
    length s + 1, so the degenerate simplices are enumerated by the ways of
    distributing the repetitions."""
    if s_max < 0:
        raise PartitionSizeError("s_max must be >= 0")
    by_degree = nondegenerate_simplices(n, force)
    per_degree = []
    for s in range(s_max + 1):
        chains = []
        for r in sorted(d for d in by_degree if d <= s):
            for base in by_degree[r]:
                # multiplicities >= 1 for the r + 1 entries, summing to s + 1
                for cut in itertools.combinations(range(1, s + 1), r):
                    bounds = (0,) + cut + (s + 1,)
                    mult = [bounds[i + 1] - bounds[i] for i in range(r + 1)]
                    chains.append(tuple(itertools.chain.from_iterable(
                        (lam,) * m for lam, m in zip(base, mult))))
        chains.sort()
        chains.append(BASEPOINT)
        per_degree.append(tuple(chains))
    return PointedSimplicialSet(n, s_max, tuple(per_degree))


# ---------------------------------------------------------------------------
# Normalized chains and homology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartitionComplexData:
    n: int
    complex: ChainComplex
    simplices: tuple   # per degree (from 0), tuple of chains


def partition_complex(n: int, ring: BaseRing,
                      force: bool = False) -> PartitionComplexData:
    """Normalized reduced chain complex: basis the nondegenerate non-basepoint
    simplices, boundary the alternating sum of the interior faces (the two end
    faces land on the collapsed basepoint)."""
    by_degree = nondegenerate_simplices(n, force)
    top_degree = max(by_degree) if by_degree else 0
    simplices = tuple(tuple(by_degree.get(s, ())) for s in range(top_degree + 1))
    ranks = [len(sx) for sx in simplices]
    index = [{c: i for i, c in enumerate(sx)} for sx in simplices]
    mod = ring.modulus
    diffs = []
    for s in range(1, top_degree + 1):
        dst = [[0] * ranks[s] for _ in range(ranks[s - 1])]
        for col, chain in enumerate(simplices[s]):
            for i in range(1, s):
                target = face(chain, i)
                row = index[s - 1][target]
                dst[row][col] = (dst[row][col] + (-1) ** i) % mod
        diffs.append(PAdicMatrix(ring, dst, ranks[s - 1], ranks[s]))
    cx = make_complex(ring, HOMOLOGICAL, 0, ranks, diffs)
    return PartitionComplexData(n, cx, simplices)


def partition_chain_complex(n: int, ring: BaseRing,
                            force: bool = False) -> ChainComplex:
    """The normalized reduced chain complex alone, without the simplex data."""
    return partition_complex(n, ring, force).complex


def partition_homology(n: int, ring: BaseRing,
                       force: bool = False) -> HomologyProfile:
    """Reduced homology of the pointed partition complex over Z/p^N."""
    return homology(partition_chain_complex(n, ring, force))
