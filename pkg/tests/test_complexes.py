"""Chain complexes and exact homology, checked against brute-force
enumeration of kernels and images over Z/4."""
import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from koszulab.padic import BaseRing, PAdicMatrix, ShapeError
from koszulab.complexes import (COHOMOLOGICAL, HOMOLOGICAL, ComplexError,
                                dualize_complex, homology, make_complex,
                                verify_complex)

RING22 = BaseRing(2, 2)


def random_three_term_complex(rng, ring, max_rank=4):
    """Random homological complex 0 <- C0 <- C1 <- C2 over Z/p^N (valid by
    construction, usually not liftable to an integer complex)."""
    n0 = rng.randrange(0, max_rank + 1)
    n1 = rng.randrange(1, max_rank + 1)
    n2 = rng.randrange(0, max_rank + 1)
    d1 = PAdicMatrix(ring, [[rng.randrange(ring.modulus) for _ in range(n2)]
                            for _ in range(n1)], n1, n2)
    # rows annihilating every column of d1, by enumeration
    good = [r for r in itertools.product(range(ring.modulus), repeat=n1)
            if all(sum(r[i] * d1.entries[i][j] for i in range(n1))
                   % ring.modulus == 0 for j in range(n2))]
    d0 = PAdicMatrix(ring, [list(rng.choice(good)) for _ in range(n0)], n0, n1)
    return make_complex(ring, HOMOLOGICAL, 0, [n0, n1, n2], [d0, d1])


def enumerate_group(ring, mats_cols):
    """All Z/p^N-combinations of the given column vectors, as a set."""
    if not mats_cols:
        return {()}
    n = len(mats_cols[0])
    out = set()
    for coeffs in itertools.product(range(ring.modulus), repeat=len(mats_cols)):
        out.add(tuple(sum(c * col[i] for c, col in zip(coeffs, mats_cols))
                      % ring.modulus for i in range(n)))
    return out


def brute_homology_degree(ring, rank, d_out, d_in):
    """(group order, order of the p-torsion subgroup) of ker/im by enumeration."""
    kernel = []
    for vec in itertools.product(range(ring.modulus), repeat=rank):
        if d_out is None or all(
                sum(d_out.entries[i][j] * vec[j] for j in range(rank))
                % ring.modulus == 0 for i in range(d_out.rows)):
            kernel.append(vec)
    cols = []
    if d_in is not None:
        for j in range(d_in.cols):
            cols.append([d_in.entries[i][j] for i in range(rank)])
    image = enumerate_group(ring, cols) if cols else {(0,) * rank}
    if rank == 0:
        return 1, 1
    order = len(kernel) // len(image)
    ptors = sum(1 for x in kernel
                if tuple(ring.p * v % ring.modulus for v in x) in image)
    return order, ptors // len(image)


def profile_order(prof, ring, degree):
    order = ring.modulus ** prof.free_rank(degree)
    ptors = ring.p ** prof.free_rank(degree)
    for t in prof.torsion_at(degree):
        order *= ring.p ** t
        ptors *= ring.p
    return order, ptors


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_homology_matches_brute_force_enumeration(seed):
    rng = random.Random(seed)
    C = random_three_term_complex(rng, RING22)
    prof = homology(C)
    for d in C.degrees:
        d_out, d_in = C.boundary_maps(d)
        want = brute_homology_degree(RING22, C.rank(d), d_out, d_in)
        assert profile_order(prof, RING22, d) == want, f"degree {d}"


def test_known_homology_mod_4():
    # 0 <- Z/4 <-x2- Z/4 <-x2- Z/4: in the middle degree kernel and image
    # both equal 2Z/4Z, so only the ends carry a Z/2
    two = PAdicMatrix(RING22, [[2]], 1, 1)
    C = make_complex(RING22, HOMOLOGICAL, 0, [1, 1, 1], [two, two])
    prof = homology(C)
    assert prof.free_ranks == (0, 0, 0)
    assert prof.torsion == ((1,), (), (1,))


def test_identity_complex_is_acyclic():
    eye = PAdicMatrix.identity(RING22, 3)
    C = make_complex(RING22, HOMOLOGICAL, 0, [3, 3], [eye])
    assert homology(C).is_zero()


def test_zero_differential_gives_free_ranks():
    z = PAdicMatrix.zeros(RING22, 2, 3)
    C = make_complex(RING22, HOMOLOGICAL, 0, [2, 3], [z])
    prof = homology(C)
    assert prof.free_ranks == (2, 3)
    assert all(not t for t in prof.torsion)


def test_verify_complex_reports_failing_degree():
    eye = PAdicMatrix.identity(RING22, 1)
    C = make_complex(RING22, HOMOLOGICAL, 0, [1, 1, 1], [eye, eye])
    ok, deg = verify_complex(C)
    assert not ok and deg == 0
    with pytest.raises(ComplexError):
        homology(C)


def test_shape_mismatch_names_degree_pair():
    z = PAdicMatrix.zeros(RING22, 2, 2)
    with pytest.raises(ShapeError) as exc:
        make_complex(RING22, HOMOLOGICAL, 5, [2, 3], [z])
    assert "5" in str(exc.value) and "6" in str(exc.value)


def test_orientation_validation():
    with pytest.raises(ValueError):
        make_complex(RING22, "sideways", 0, [1], [])


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=30, deadline=None)
def test_double_dual_is_identity_and_dual_profile_matches(seed):
    rng = random.Random(seed)
    C = random_three_term_complex(rng, RING22, max_rank=3)
    D = dualize_complex(C)
    assert D.orientation == COHOMOLOGICAL
    assert dualize_complex(D) == C
    # dualization over Z/p^N is exact, so the profiles agree degreewise
    pc, pd = homology(C), homology(D)
    assert pc.free_ranks == pd.free_ranks
    assert pc.torsion == pd.torsion


def test_euler_characteristic_matches_alternating_free_ranks():
    rng = random.Random(5)
    for _ in range(10):
        C = random_three_term_complex(rng, RING22, max_rank=3)
        prof = homology(C)
        chi_complex = C.euler_characteristic()
        # over Z/p^N torsion contributes valuation, so compare p-lengths
        length = 0
        for d in C.degrees:
            s = (-1) ** d
            length += s * (RING22.N * prof.free_rank(d)
                           + sum(prof.torsion_at(d)))
        assert length == RING22.N * chi_complex


def test_empty_complex():
    C = make_complex(RING22, HOMOLOGICAL, 3, [], [])
    assert homology(C).is_zero()
