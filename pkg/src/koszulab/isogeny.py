"""The modular isogeny complex built from subgroup-algebra packages, the
degreewise dualization against the bar complex, and the shift-square check
relating the flag refinement maps to the Koszul differential."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .padic import (PAdicMatrix, InconsistentSystemError,
                    inverse_mod, solve)
from .complexes import (ChainComplex, COHOMOLOGICAL,
                        dualize_complex, homology, make_complex, verify_complex)
from .algebra import (Bimodule, CoefficientAlgebra, Dataset,
                      GradedAugmentedAlgebra, IteratedTensor, LeftModule,
                      ValidationReport, iterated_tensor, _e)
from .bar import bar_complex, koszul_complex


class MICError(Exception):
    pass


@dataclass(frozen=True)
class SubgroupAlgebra:
    """One ring of functions on order-p^k subgroup flags: its own ring
    structure plus the two coefficient-module structures (structural on the
    left, deformation-twisted on the right)."""

    order_exponent: int
    algebra: CoefficientAlgebra       # ring structure over the base ring
    bimodule: Bimodule                # (E0, E0)-module structure

    @property
    def rank(self) -> int:
        return self.algebra.rank


@dataclass
class SubgroupAlgebraPackage:
    coeff: CoefficientAlgebra
    orders: dict                      # k >= 1 -> SubgroupAlgebra
    t_maps: dict                      # k -> matrix coeff -> S_{p^k}
    u1: dict                          # (k1, k2) -> matrix S_{p^{k1+k2}} -> ambient tensor
    shift: dict                       # k >= 1 -> matrix on flag quotient coordinates
    pairing: dict                     # k -> matrix (algebra weight-k rank x S rank)

    @property
    def max_order(self) -> int:
        return max(self.orders) if self.orders else 0

    def rank(self, k: int) -> int:
        return self.orders[k].rank


def flag_tensor(pkg: SubgroupAlgebraPackage, composition) -> IteratedTensor:
    """The flag module S_{p^{k_1}} (x)_{E0} ... (x)_{E0} S_{p^{k_s}}."""
    ring = pkg.coeff.ring
    if not composition:
        c = pkg.coeff.rank
        eye = PAdicMatrix.identity(ring, c)
        return IteratedTensor(pkg.coeff.as_bimodule(), eye, eye, (c,))
    for k in composition:
        if k not in pkg.orders:
            raise MICError(f"package has no subgroup algebra of order p^{k}")
    return iterated_tensor([pkg.orders[k].bimodule for k in composition])


@dataclass(frozen=True)
class FlagAlgebra:
    composition: tuple
    tensor: IteratedTensor
    mult_ambient: PAdicMatrix   # componentwise product on the full ambient tensor
    unit_ambient: tuple

    @property
    def rank(self) -> int:
        return self.tensor.bimodule.rank


def flag_algebra(pkg: SubgroupAlgebraPackage, composition) -> FlagAlgebra:
    """Tensor algebra with componentwise structure constants."""
    composition = tuple(composition)
    if any(k <= 0 for k in composition):
        raise MICError(f"composition parts must be positive: {composition}")
    t = flag_tensor(pkg, composition)
    ring = pkg.coeff.ring
    mod = ring.modulus
    if not composition:
        alg = pkg.coeff
        ranks = [alg.rank]
        consts = [alg.mult_constants]
        units = [alg.unit]
    else:
        algs = [pkg.orders[k].algebra for k in composition]
        ranks = [a.rank for a in algs]
        consts = [a.mult_constants for a in algs]
        units = [a.unit for a in algs]
    P = 1
    for r in ranks:
        P *= r
    entries = [[0] * (P * P) for _ in range(P)]
    for a_tuple in itertools.product(*[range(r) for r in ranks]):
        ai = 0
        for r, a in zip(ranks, a_tuple):
            ai = ai * r + a
        for c_tuple in itertools.product(*[range(r) for r in ranks]):
            ci = 0
            for r, c in zip(ranks, c_tuple):
                ci = ci * r + c
            for b_tuple in itertools.product(*[range(r) for r in ranks]):
                v = 1
                for s_idx, (a, c, b) in enumerate(zip(a_tuple, c_tuple, b_tuple)):
                    v = v * consts[s_idx][a][c][b] % mod
                    if not v:
                        break
                if v:
                    bi = 0
                    for r, b in zip(ranks, b_tuple):
                        bi = bi * r + b
                    entries[bi][ai * P + ci] = (entries[bi][ai * P + ci] + v) % mod
    unit = [0] * P
    for b_tuple in itertools.product(*[range(r) for r in ranks]):
        v = 1
        for s_idx, b in enumerate(b_tuple):
            v = v * units[s_idx][b] % mod
        bi = 0
        for r, b in zip(ranks, b_tuple):
            bi = bi * r + b
        unit[bi] = v
    return FlagAlgebra(composition, t,
                       PAdicMatrix(ring, entries, P, P * P), tuple(unit))


# ---------------------------------------------------------------------------
# The complex
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MICBlock:
    composition: tuple
    start: int
    tensor: IteratedTensor


@dataclass(frozen=True)
class ModularIsogenyComplex:
    k: int
    complex: ChainComplex
    blocks: tuple   # per degree, tuple of MICBlock


def _compositions(total, parts):
    from .bar import compositions
    return compositions(total, parts)


def build_mic(pkg: SubgroupAlgebraPackage, k: int) -> ModularIsogenyComplex:
    """Cochain complex with degree-s term the sum over compositions of k into
    s positive parts of the flag module, and differential the alternating sum
    of the refinement maps applied in each slot."""
    ring = pkg.coeff.ring
    mod = ring.modulus
    if k < 0:
        raise MICError("negative order exponent")
    if k == 0:
        c = pkg.coeff.rank
        eye = PAdicMatrix.identity(ring, c)
        t = IteratedTensor(pkg.coeff.as_bimodule(), eye, eye, (c,))
        cx = make_complex(ring, COHOMOLOGICAL, 0, [c], [])
        return ModularIsogenyComplex(0, cx, ((MICBlock((), 0, t),),))
    if k > pkg.max_order:
        raise MICError(f"package covers orders up to p^{pkg.max_order}, need p^{k}")
    all_blocks = []
    ranks = []
    for s in range(1, k + 1):
        blocks = []
        start = 0
        for comp in _compositions(k, s):
            t = flag_tensor(pkg, comp)
            blocks.append(MICBlock(comp, start, t))
            start += t.bimodule.rank
        all_blocks.append(tuple(blocks))
        ranks.append(start)
    diffs = []
    for s in range(1, k):
        src_blocks = all_blocks[s - 1]
        tgt_blocks = {b.composition: b for b in all_blocks[s]}
        dst = [[0] * ranks[s - 1] for _ in range(ranks[s])]
        for b in src_blocks:
            comp = b.composition
            for i in range(1, s + 1):
                ki = comp[i - 1]
                for k1 in range(1, ki):
                    k2 = ki - k1
                    if (k1, k2) not in pkg.u1:
                        raise MICError(f"package missing u1 for ({k1},{k2})")
                    tgt_comp = comp[:i - 1] + (k1, k2) + comp[i:]
                    tb = tgt_blocks[tgt_comp]
                    pre = 1
                    for kk in comp[:i - 1]:
                        pre *= pkg.rank(kk)
                    post = 1
                    for kk in comp[i:]:
                        post *= pkg.rank(kk)
                    amb = (PAdicMatrix.identity(ring, pre)
                           .kron(pkg.u1[(k1, k2)])
                           .kron(PAdicMatrix.identity(ring, post)))
                    m = tb.tensor.proj_full @ amb @ b.tensor.sect_full
                    for r, row in enumerate(m.entries):
                        drow = dst[tb.start + r]
                        for c0, x in enumerate(row):
                            if x:
                                drow[b.start + c0] = (drow[b.start + c0]
                                                      + (-1) ** i * x) % mod
        diffs.append(PAdicMatrix(ring, dst, ranks[s], ranks[s - 1]))
    cx = make_complex(ring, COHOMOLOGICAL, 1, ranks, diffs)
    ok, deg = verify_complex(cx)
    if not ok:
        comps = [b.composition for b in all_blocks[deg - 1]]
        raise MICError(f"refinement maps fail d o d = 0 between degrees "
                       f"{deg} and {deg + 2}; source compositions {comps} "
                       "(coassociativity violation in the package)")
    return ModularIsogenyComplex(k, cx, tuple(all_blocks))


def mic_cohomology(pkg: SubgroupAlgebraPackage, k: int,
                   algebra: Optional[GradedAugmentedAlgebra] = None):
    """Cohomology profile of the order-p^k complex; when the matching graded
    algebra is supplied, also reports whether the profile is concentrated in
    degree k with the Koszul submodule rank."""
    prof = homology(build_mic(pkg, k).complex)
    comparison = None
    if algebra is not None:
        from .bar import koszul_module
        ck = koszul_module(algebra, k).rank
        concentrated = all((prof.free_rank(s) == 0 and not prof.torsion_at(s))
                           for s in prof.degrees if s != k) and not prof.torsion_at(k)
        comparison = {"koszul_rank": ck,
                      "matches": concentrated and prof.free_rank(k) == ck}
    return prof, comparison


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_package(pkg: SubgroupAlgebraPackage) -> ValidationReport:
    rep = ValidationReport()
    ring = pkg.coeff.ring
    for k, S in sorted(pkg.orders.items()):
        a = S.algebra
        for i in range(a.rank):
            for j in range(a.rank):
                if a.multiply(_e(a.rank, i), _e(a.rank, j)) != \
                        a.multiply(_e(a.rank, j), _e(a.rank, i)):
                    rep.fail("subgroup algebra commutativity",
                             f"order p^{k}, pair ({i},{j})")
        for j in range(a.rank):
            if a.multiply(a.unit, _e(a.rank, j)) != _e(a.rank, j):
                rep.fail("subgroup algebra unitality", f"order p^{k}, basis {j}")
        t = pkg.t_maps.get(k)
        if t is None:
            rep.fail("missing t map", f"order p^{k}")
            continue
        # t is a ring map: unit to unit, products to products
        unit_img = t @ PAdicMatrix(ring, [[x] for x in pkg.coeff.unit],
                                   pkg.coeff.rank, 1)
        if tuple(r[0] for r in unit_img.entries) != a.unit:
            rep.fail("t unitality", f"order p^{k}")
        for i in range(pkg.coeff.rank):
            for j in range(pkg.coeff.rank):
                prod = pkg.coeff.multiply(_e(pkg.coeff.rank, i), _e(pkg.coeff.rank, j))
                lhs = _apply(t, prod)
                rhs = a.multiply(_apply_col(t, i), _apply_col(t, j))
                if lhs != rhs:
                    rep.fail("t multiplicativity", f"order p^{k}, pair ({i},{j})")
    # coassociativity of the refinement maps
    for total in range(3, pkg.max_order + 1):
        for a_ in range(1, total - 1):
            for b_ in range(1, total - a_):
                c_ = total - a_ - b_
                if c_ < 1:
                    continue
                if not all(key in pkg.u1 for key in
                           [(a_, b_ + c_), (b_, c_), (a_ + b_, c_), (a_, b_)]):
                    continue
                ra, rb, rc = pkg.rank(a_), pkg.rank(b_), pkg.rank(c_)
                triple = flag_tensor(pkg, (a_, b_, c_))
                route1 = (PAdicMatrix.identity(pkg.coeff.ring, ra)
                          .kron(pkg.u1[(b_, c_)]) @ pkg.u1[(a_, b_ + c_)])
                route2 = (pkg.u1[(a_, b_)]
                          .kron(PAdicMatrix.identity(pkg.coeff.ring, rc))
                          @ pkg.u1[(a_ + b_, c_)])
                if triple.proj_full @ route1 != triple.proj_full @ route2:
                    rep.fail("u1 coassociativity",
                             f"decomposition ({a_},{b_},{c_})")
    return rep


def _apply(mat: PAdicMatrix, vec):
    col = PAdicMatrix(mat.ring, [[x] for x in vec], len(vec), 1)
    return tuple(r[0] for r in (mat @ col).entries)


def _apply_col(mat: PAdicMatrix, j):
    return tuple(r[j] for r in mat.entries)


# ---------------------------------------------------------------------------
# Duality with the bar complex
# ---------------------------------------------------------------------------

@dataclass
class MICDualityResult:
    k: int
    maps: list                 # per degree s = 1..k, the matrix on dual coordinates
    commutes: bool
    witness: Optional[str]


def dualize_bar_to_mic(A: GradedAugmentedAlgebra, pkg: SubgroupAlgebraPackage,
                       k: int) -> MICDualityResult:
    """Construct the degreewise isomorphisms from the dual weight-k bar
    complex to the order-p^k complex through the pairing matrices, and assert
    they intertwine the two differentials exactly."""
    ring = A.coeff.ring
    for kk in range(1, k + 1):
        P = pkg.pairing.get(kk)
        if P is None:
            raise MICError(f"package missing pairing for weight {kk}")
        if P.shape != (A.rank(kk), pkg.rank(kk)):
            raise MICError(f"pairing shape mismatch at weight {kk}: "
                           f"{P.shape} vs {(A.rank(kk), pkg.rank(kk))}")
        inverse_mod(P)  # must be unimodular for the components to be dual
    if k == 0:
        return MICDualityResult(0, [PAdicMatrix.identity(ring, A.coeff.rank)],
                                True, None)
    bc = bar_complex(A, k)
    mic = build_mic(pkg, k)
    dual = dualize_complex(bc.complex)
    maps = []
    for s in range(1, k + 1):
        bar_blocks = bc.degree_blocks(s)
        mic_blocks = mic.blocks[s - 1]
        assert [b.composition for b in bar_blocks] == \
            [b.composition for b in mic_blocks]
        total_bar = dual.ranks[s]
        total_mic = mic.complex.ranks[s - 1]
        dst = [[0] * total_bar for _ in range(total_mic)]
        for bb, mb in zip(bar_blocks, mic_blocks):
            PK = pkg.pairing[bb.composition[0]]
            for kk in bb.composition[1:]:
                PK = PK.kron(pkg.pairing[kk])
            X = PK @ mb.tensor.sect_full
            Y = bb.tensor.proj_full.transpose()
            try:
                block = solve(X, Y)
            except InconsistentSystemError as exc:
                raise MICError(f"pairing does not descend at degree {s}, "
                               f"composition {bb.composition}: {exc}")
            for r, row in enumerate(block.entries):
                for c0, x in enumerate(row):
                    if x:
                        dst[mb.start + r][bb.start + c0] = x
        maps.append(PAdicMatrix(ring, dst, total_mic, total_bar))
    for s in range(1, k):
        lhs = maps[s] @ dual.differentials[s]      # dual d: degree s -> s+1
        rhs = mic.complex.differentials[s - 1] @ maps[s - 1]
        if lhs != rhs:
            diff = lhs - rhs
            witness = next((f"degree {s}->{s + 1}, entry ({i},{j})")
                           for i, row in enumerate(diff.entries)
                           for j, x in enumerate(row) if x)
            return MICDualityResult(k, maps, False, witness)
    return MICDualityResult(k, maps, True, None)


# ---------------------------------------------------------------------------
# The shift-square check (flag refinement vs dual Koszul differential)
# ---------------------------------------------------------------------------

@dataclass
class ShiftSquareResult:
    square: int
    commutes: bool
    route_top: PAdicMatrix
    route_bottom: PAdicMatrix
    witness: Optional[str]


def verify_theorem_10_2(A: GradedAugmentedAlgebra, pkg: SubgroupAlgebraPackage,
                        M: LeftModule, k: int) -> ShiftSquareResult:
    """Square number k (k >= 1): the shift map from the (k-1)-fold flag module
    to the k-fold one, followed by the quotient onto the dual of the Koszul
    term, must agree with the quotient followed by the transposed Koszul
    differential.

    The quotient maps are computed, not supplied: the inclusion of the Koszul
    term into the ambient weight-1 tensor power is dualized through the
    pairings, with the sign (-1)^{j(j+1)/2} in homological degree j coming
    from dualizing a chain complex.
    """
    if k < 1:
        raise MICError("square index must be >= 1")
    ring = A.coeff.ring
    mod = ring.modulus
    j = k - 1
    if j + 1 > A.max_weight:
        raise MICError(f"square {k} needs weight {j + 1} <= max_weight")
    kc = koszul_complex(A, M)
    if M.rank != 1:
        raise MICError("the shift square needs a module free of rank 1 "
                       "over the coefficient algebra")
    unitcol = PAdicMatrix(ring, [[x] for x in A.coeff.unit], A.coeff.rank, 1)
    d1 = A.rank(1)

    def quotient_map(jj):
        flag = flag_tensor(pkg, (1,) * jj)
        sign = (-1) ** (jj * (jj + 1) // 2) % mod
        if jj == 0:
            PKm = unitcol
        else:
            PK = pkg.pairing[1]
            for _ in range(jj - 1):
                PK = PK.kron(pkg.pairing[1])
            PKm = PK.kron(unitcol)
        q = kc.ambient_inclusions[jj].transpose() @ PKm @ flag.sect_full
        return q.scale(sign), flag

    q_j, flag_j = quotient_map(j)
    q_j1, flag_j1 = quotient_map(j + 1)
    if j == 0:
        shift = pkg.t_maps.get(1)
        if shift is None:
            raise MICError("package missing the t map for order p")
    else:
        shift = pkg.shift.get(j)
        if shift is None:
            raise MICError(f"package missing the shift map at {j} flag slots")
    if shift.shape != (flag_j1.bimodule.rank, flag_j.bimodule.rank):
        raise MICError(f"shift map at {j} slots has shape {shift.shape}, "
                       f"expected {(flag_j1.bimodule.rank, flag_j.bimodule.rank)}")
    top = q_j1 @ shift
    bottom = kc.complex.differentials[j].transpose() @ q_j
    if top == bottom:
        return ShiftSquareResult(k, True, top, bottom, None)
    diff = top - bottom
    witness = next(f"basis vector {c0} of the {j}-fold flag module: "
                   f"images differ in coordinate {r}"
                   for r, row in enumerate(diff.entries)
                   for c0, x in enumerate(row) if x)
    return ShiftSquareResult(k, False, top, bottom, witness)


# ---------------------------------------------------------------------------
# Built-in package and serialization
# ---------------------------------------------------------------------------

def builtin_height1_package(ds: Dataset) -> SubgroupAlgebraPackage:
    """At height 1 every subgroup algebra is the base ring and every structure
    map is the identity scalar."""
    coeff = ds.algebra.coeff
    ring = coeff.ring
    one = PAdicMatrix(ring, [[1]], 1, 1)
    kmax = ds.algebra.max_weight
    scalar_alg = CoefficientAlgebra(ring, 1, (((1,),),), (1,), ())
    orders = {k: SubgroupAlgebra(k, scalar_alg,
                                 Bimodule(ring, coeff, 1, (one,), (one,)))
              for k in range(1, kmax + 1)}
    return SubgroupAlgebraPackage(
        coeff=coeff,
        orders=orders,
        t_maps={k: one for k in range(1, kmax + 1)},
        u1={(k1, k2): one for k1 in range(1, kmax)
            for k2 in range(1, kmax + 1 - k1)},
        shift={k: one for k in range(1, kmax + 1)},
        pairing={k: one for k in range(1, kmax + 1)},
    )


def package_to_json(pkg: SubgroupAlgebraPackage) -> dict:
    def mat(m):
        return [list(r) for r in m.entries]

    return {
        "orders": [
            {"k": k,
             "algebra": {
                 "rank": S.rank,
                 "mult_constants": [[[x for x in row] for row in plane]
                                    for plane in S.algebra.mult_constants],
                 "unit": list(S.algebra.unit),
                 "left_action": [mat(m) for m in S.bimodule.left],
                 "right_action": [mat(m) for m in S.bimodule.right],
             },
             "t": mat(pkg.t_maps[k])}
            for k, S in sorted(pkg.orders.items())
        ],
        "u1": [{"k1": k1, "k2": k2, "matrix": mat(m)}
               for (k1, k2), m in sorted(pkg.u1.items())],
        "shift": [{"k": k, "matrix": mat(m)} for k, m in sorted(pkg.shift.items())],
        "pairing": [{"k": k, "matrix": mat(m)} for k, m in sorted(pkg.pairing.items())],
    }


def package_from_json(ds: Dataset, doc: dict) -> SubgroupAlgebraPackage:
    coeff = ds.algebra.coeff
    ring = coeff.ring

    def mat(data, rows, cols, where):
        from .algebra import _matrix_from_json
        return _matrix_from_json(ring, data, rows, cols, where)

    orders = {}
    t_maps = {}
    for ent in doc.get("orders", []):
        k = ent["k"]
        a = ent["algebra"]
        r = a["rank"]
        alg = CoefficientAlgebra(
            ring, r,
            tuple(tuple(tuple(x % ring.modulus for x in row) for row in pl)
                  for pl in a["mult_constants"]),
            tuple(x % ring.modulus for x in a["unit"]), ())
        bm = Bimodule(
            ring, coeff, r,
            tuple(mat(m, r, r, f"subgroup_package.orders[k={k}].left_action")
                  for m in a["left_action"]),
            tuple(mat(m, r, r, f"subgroup_package.orders[k={k}].right_action")
                  for m in a["right_action"]))
        orders[k] = SubgroupAlgebra(k, alg, bm)
        t_maps[k] = mat(ent["t"], r, coeff.rank, f"subgroup_package.orders[k={k}].t")
    u1 = {}
    for ent in doc.get("u1", []):
        k1, k2 = ent["k1"], ent["k2"]
        u1[(k1, k2)] = mat(ent["matrix"], orders[k1].rank * orders[k2].rank,
                           orders[k1 + k2].rank,
                           f"subgroup_package.u1[k1={k1},k2={k2}]")
    pkg = SubgroupAlgebraPackage(coeff, orders, t_maps, u1, {}, {})
    shift = {}
    for ent in doc.get("shift", []):
        k = ent["k"]
        fr = flag_tensor(pkg, (1,) * k).bimodule.rank
        fr1 = flag_tensor(pkg, (1,) * (k + 1)).bimodule.rank
        shift[k] = mat(ent["matrix"], fr1, fr, f"subgroup_package.shift[k={k}]")
    pairing = {}
    for ent in doc.get("pairing", []):
        k = ent["k"]
        pairing[k] = mat(ent["matrix"], ds.algebra.rank(k), orders[k].rank,
                         f"subgroup_package.pairing[k={k}]")
    pkg.shift = shift
    pkg.pairing = pairing
    return pkg
