"""Exact linear algebra over Z/p^N: Smith forms, kernels, solving."""
import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from koszulab.padic import (BaseRing, PAdicMatrix, InconsistentSystemError,
                            ShapeError, integer_smith,
                            integer_invariant_factors, inverse_mod,
                            kernel_basis, smith_normal_form, solve)


def rings():
    return [BaseRing(2, 1), BaseRing(2, 2), BaseRing(2, 3),
            BaseRing(3, 2), BaseRing(5, 3)]


def random_matrix(rng, ring, rows, cols):
    return PAdicMatrix(ring, [[rng.randrange(ring.modulus) for _ in range(cols)]
                              for _ in range(rows)], rows, cols)


# ---------------------------------------------------------------------------
# Ring basics
# ---------------------------------------------------------------------------

def test_base_ring_rejects_bad_parameters():
    with pytest.raises(ValueError):
        BaseRing(4, 2)
    with pytest.raises(ValueError):
        BaseRing(3, 0)


def test_valuation_and_units():
    r = BaseRing(3, 3)
    assert r.valuation(0) == 3
    assert r.valuation(9) == 2
    assert r.valuation(6) == 1
    assert r.is_unit(2) and not r.is_unit(3)
    assert r.inv(2) * 2 % 27 == 1


def test_matrix_is_immutable_and_reduced():
    r = BaseRing(2, 2)
    m = PAdicMatrix(r, [[5, -1]], 1, 2)
    assert m.entries == ((1, 3),)
    with pytest.raises(AttributeError):
        m.rows = 7


def test_shape_errors():
    r = BaseRing(2, 2)
    with pytest.raises(ShapeError):
        PAdicMatrix(r, [[1, 2], [3]], 2, 2)
    a = PAdicMatrix(r, [[1, 2]], 1, 2)
    with pytest.raises(ShapeError):
        a @ a


def test_kron_matches_blockwise_definition():
    r = BaseRing(3, 2)
    a = PAdicMatrix(r, [[1, 2], [0, 3]], 2, 2)
    b = PAdicMatrix(r, [[4, 0], [1, 1]], 2, 2)
    k = a.kron(b)
    for i in range(2):
        for j in range(2):
            for s in range(2):
                for t in range(2):
                    assert k.entries[2 * i + s][2 * j + t] == \
                        a.entries[i][j] * b.entries[s][t] % 9


# ---------------------------------------------------------------------------
# Integer Smith form
# ---------------------------------------------------------------------------

def det_unimodular(mat):
    """|det| == 1 via fraction-free Gaussian elimination (small sizes)."""
    import fractions
    n = len(mat)
    m = [[fractions.Fraction(x) for x in row] for row in mat]
    det = fractions.Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return False
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= f * m[c][k]
    return abs(det) == 1


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_integer_smith_certificate(seed):
    rng = random.Random(seed)
    rows, cols = rng.randrange(1, 5), rng.randrange(1, 5)
    A = [[rng.randrange(-9, 10) for _ in range(cols)] for _ in range(rows)]
    diag, U, V, Vinv = integer_smith([row[:] for row in A], rows, cols)
    # U A V is the diagonal matrix of invariant factors
    UA = [[sum(U[i][k] * A[k][j] for k in range(rows)) for j in range(cols)]
          for i in range(rows)]
    UAV = [[sum(UA[i][k] * V[k][j] for k in range(cols)) for j in range(cols)]
           for i in range(rows)]
    for i in range(rows):
        for j in range(cols):
            want = diag[i] if i == j and i < len(diag) else 0
            assert UAV[i][j] == want
    # divisibility chain, nonnegative
    nz = [d for d in diag if d]
    for a, b in zip(nz, nz[1:]):
        assert b % a == 0
    assert all(d >= 0 for d in diag)
    # transforms are unimodular and mutually inverse on the column side
    assert det_unimodular(U)
    assert det_unimodular(V)
    VVinv = [[sum(V[i][k] * Vinv[k][j] for k in range(cols))
              for j in range(cols)] for i in range(cols)]
    assert VVinv == [[1 if i == j else 0 for j in range(cols)]
                     for i in range(cols)]


def test_integer_invariant_factors_known():
    assert integer_invariant_factors([[2, 0], [0, 3]], 2, 2) == [1, 6]
    assert integer_invariant_factors([[4, 0], [0, 6]], 2, 2) == [2, 12]
    assert integer_invariant_factors([[0, 0], [0, 0]], 2, 2) == [0, 0]


# ---------------------------------------------------------------------------
# Smith form over Z/p^N
# ---------------------------------------------------------------------------

@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=80, deadline=None)
def test_smith_normal_form_certificate(seed):
    rng = random.Random(seed)
    ring = rng.choice(rings())
    rows, cols = rng.randrange(1, 5), rng.randrange(1, 5)
    A = random_matrix(rng, ring, rows, cols)
    snf = smith_normal_form(A)
    D = snf.diagonal_matrix(rows, cols)
    assert snf.left @ A @ snf.right == D
    # transforms invertible mod p^N
    inverse_mod(snf.left)
    inverse_mod(snf.right)
    # diagonal entries are canonical p-powers with increasing valuation
    vals = []
    for i in range(min(rows, cols)):
        d = D.entries[i][i]
        v = ring.valuation(d)
        assert d == (0 if v >= ring.N else pow(ring.p, v, ring.modulus))
        vals.append(v)
    assert vals == sorted(vals)


def brute_kernel(ring, A):
    n = A.cols
    out = set()
    for vec in itertools.product(range(ring.modulus), repeat=n):
        col = PAdicMatrix(ring, [[x] for x in vec], n, 1)
        if (A @ col).is_zero():
            out.add(vec)
    return out


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=25, deadline=None)
def test_kernel_basis_spans_exact_kernel(seed):
    rng = random.Random(seed)
    ring = BaseRing(2, 2)
    rows, cols = rng.randrange(1, 4), rng.randrange(1, 4)
    A = random_matrix(rng, ring, rows, cols)
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    spanned = set()
    for coeffs in itertools.product(range(ring.modulus), repeat=K.cols):
        vec = tuple(sum(K.entries[i][j] * coeffs[j] for j in range(K.cols))
                    % ring.modulus for i in range(cols))
        spanned.add(vec)
    assert spanned == brute_kernel(ring, A)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=60, deadline=None)
def test_solve_finds_solutions_of_consistent_systems(seed):
    rng = random.Random(seed)
    ring = rng.choice(rings())
    rows, cols, k = rng.randrange(1, 5), rng.randrange(1, 5), rng.randrange(1, 3)
    A = random_matrix(rng, ring, rows, cols)
    X = random_matrix(rng, ring, cols, k)
    B = A @ X
    Y = solve(A, B)
    assert A @ Y == B


def test_solve_reports_inconsistency():
    ring = BaseRing(2, 2)
    A = PAdicMatrix(ring, [[2]], 1, 1)
    with pytest.raises(InconsistentSystemError):
        solve(A, PAdicMatrix(ring, [[1]], 1, 1))


def test_solve_zero_column_matrix():
    ring = BaseRing(3, 2)
    A = PAdicMatrix(ring, [[], []], 2, 0)
    B = PAdicMatrix.zeros(ring, 2, 1)
    assert solve(A, B).shape == (0, 1)
    with pytest.raises(InconsistentSystemError):
        solve(A, PAdicMatrix(ring, [[1], [0]], 2, 1))


def test_inverse_mod_roundtrip():
    ring = BaseRing(5, 2)
    rng = random.Random(7)
    for _ in range(20):
        n = rng.randrange(1, 4)
        while True:
            A = random_matrix(rng, ring, n, n)
            try:
                Ainv = inverse_mod(A)
                break
            except Exception:
                continue
        assert A @ Ainv == PAdicMatrix.identity(ring, n)
        assert Ainv @ A == PAdicMatrix.identity(ring, n)
