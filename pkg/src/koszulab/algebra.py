"""Coefficient algebras, bimodules, the weight-graded augmented algebra, and
the dataset file format (schema "koszulab-1").

Everything is presented by structure constants over the base ring Z/p^N and
stored in base-ring coordinates.  Tensor products over the coefficient algebra
are computed as explicit quotients with retained projection/section data so
that complex differentials can be written as honest matrices.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .padic import (BaseRing, PAdicMatrix,
                    inverse_mod, smith_normal_form)


class DatasetError(Exception):
    pass


class NonFreeQuotientError(DatasetError):
    """A tensor product over the coefficient algebra failed to be free."""


# ---------------------------------------------------------------------------
# Coefficient algebras and bimodules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientAlgebra:
    """Commutative unital algebra over Z/p^N given by structure constants.

    ``mult_constants[i][j][k]`` is the e_k-coordinate of e_i * e_j.
    """

    ring: BaseRing
    rank: int
    mult_constants: tuple  # rank x rank x rank
    unit: tuple
    maximal_ideal: tuple = ()

    def multiply(self, x, y):
        m = self.ring.modulus
        out = [0] * self.rank
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                cij = self.mult_constants[i][j]
                for k in range(self.rank):
                    out[k] = (out[k] + xi * yj * cij[k]) % m
        return tuple(out)

    def regular_left(self, i: int) -> PAdicMatrix:
        """Matrix of multiplication by basis element e_i."""
        return PAdicMatrix(self.ring,
                           [[self.mult_constants[i][j][k] for j in range(self.rank)]
                            for k in range(self.rank)], self.rank, self.rank)

    def element_action(self, x) -> PAdicMatrix:
        ring = self.ring
        out = PAdicMatrix.zeros(ring, self.rank, self.rank)
        for i, xi in enumerate(x):
            if xi:
                out = out + self.regular_left(i).scale(xi)
        return out

    def as_bimodule(self) -> "Bimodule":
        acts = tuple(self.regular_left(i) for i in range(self.rank))
        return Bimodule(self.ring, self, self.rank, acts, acts)


@dataclass(frozen=True)
class Bimodule:
    """Finite free Z/p^N-module with commuting left/right coefficient actions."""

    ring: BaseRing
    coeff: CoefficientAlgebra
    rank: int
    left: tuple   # one rank x rank matrix per coefficient basis element
    right: tuple

    def left_of(self, x) -> PAdicMatrix:
        out = PAdicMatrix.zeros(self.ring, self.rank, self.rank)
        for i, xi in enumerate(x):
            if xi:
                out = out + self.left[i].scale(xi)
        return out

    def right_of(self, x) -> PAdicMatrix:
        out = PAdicMatrix.zeros(self.ring, self.rank, self.rank)
        for i, xi in enumerate(x):
            if xi:
                out = out + self.right[i].scale(xi)
        return out


@dataclass(frozen=True)
class TensorData:
    """M (x)_{E0} N presented on a free basis.

    ``proj``/``sect`` relate the ambient Z/p^N tensor product (kron index
    order: left factor major) to the chosen free basis: proj @ sect = I, and
    sect @ proj is the projection of the ambient module onto a complement of
    the balancing relations.
    """

    bimodule: Bimodule
    proj: PAdicMatrix
    sect: PAdicMatrix


def tensor_over_coeff(M: Bimodule, N: Bimodule) -> TensorData:
    """Quotient of the ambient tensor product by (m.a) (x) n - m (x) (a.n).

    Raises NonFreeQuotientError when the Smith form of the relation matrix
    shows torsion; valid datasets always produce free quotients.
    """
    ring = M.ring
    coeff = M.coeff
    if coeff is not N.coeff and coeff != N.coeff:
        raise DatasetError("tensor factors over different coefficient algebras")
    mn = M.rank * N.rank
    if coeff.rank == 1:
        # e_0 is a unit multiple of 1 and acts by the same scalar on both
        # sides; the balancing relations vanish identically.
        ident = PAdicMatrix.identity(ring, mn)
        bm = _tensor_bimodule(M, N, ident, ident)
        return TensorData(bm, ident, ident)
    rel_cols = []
    eyeN = PAdicMatrix.identity(ring, N.rank)
    eyeM = PAdicMatrix.identity(ring, M.rank)
    for a in range(coeff.rank):
        R = M.right[a].kron(eyeN) - eyeM.kron(N.left[a])
        for j in range(mn):
            rel_cols.append([R.entries[i][j] for i in range(mn)])
    relmat = PAdicMatrix(ring, [[col[i] for col in rel_cols] for i in range(mn)],
                         mn, len(rel_cols))
    snf = smith_normal_form(relmat)
    free_rows = []
    for i in range(mn):
        inv = snf.invariants[i] if i < len(snf.invariants) else 0
        v = ring.valuation(inv)
        if v == 0:
            continue
        if v < ring.N:
            raise NonFreeQuotientError(
                f"tensor quotient has torsion p^{v} (invalid dataset)")
        free_rows.append(i)
    left_inv = inverse_mod(snf.left)
    proj = snf.left.select_rows(free_rows)
    sect = left_inv.select_cols(free_rows)
    bm = _tensor_bimodule(M, N, proj, sect)
    return TensorData(bm, proj, sect)


def _tensor_bimodule(M: Bimodule, N: Bimodule, proj, sect) -> Bimodule:
    ring = M.ring
    eyeN = PAdicMatrix.identity(ring, N.rank)
    eyeM = PAdicMatrix.identity(ring, M.rank)
    left = tuple(proj @ M.left[a].kron(eyeN) @ sect for a in range(M.coeff.rank))
    right = tuple(proj @ eyeM.kron(N.right[a]) @ sect for a in range(M.coeff.rank))
    return Bimodule(ring, M.coeff, proj.rows, left, right)


@dataclass(frozen=True)
class IteratedTensor:
    """An s-fold tensor over E0 with cumulative maps from the full ambient
    Z/p^N tensor product (product of the factor ranks, left-major order)."""

    bimodule: Bimodule
    proj_full: PAdicMatrix
    sect_full: PAdicMatrix
    factor_ranks: tuple


def iterated_tensor(factors) -> IteratedTensor:
    if not factors:
        raise ValueError("iterated_tensor needs at least one factor")
    ring = factors[0].ring
    T = factors[0]
    P = PAdicMatrix.identity(ring, T.rank)
    S = PAdicMatrix.identity(ring, T.rank)
    ranks = [factors[0].rank]
    for B in factors[1:]:
        step = tensor_over_coeff(T, B)
        eyeB = PAdicMatrix.identity(ring, B.rank)
        P = step.proj @ P.kron(eyeB)
        S = S.kron(eyeB) @ step.sect
        T = step.bimodule
        ranks.append(B.rank)
    return IteratedTensor(T, P, S, tuple(ranks))


# ---------------------------------------------------------------------------
# The weight-graded augmented algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedAugmentedAlgebra:
    """Weight components with two-sided coefficient actions and structure maps.

    ``components[k]`` (k >= 1) is the weight-k bimodule; weight 0 is the
    coefficient algebra itself.  ``mult[(k, l)]`` (k, l >= 1) is the matrix of
    the structure map on the ambient tensor basis, with shape
    (rank(k+l), rank(k) * rank(l)).  The augmentation kills every positive
    weight and is the identity on weight 0.
    """

    coeff: CoefficientAlgebra
    q_label: int
    max_weight: int
    components: dict
    mult: dict

    def rank(self, k: int) -> int:
        if k == 0:
            return self.coeff.rank
        return self.components[k].rank

    def component(self, k: int) -> Bimodule:
        if k == 0:
            return self.coeff.as_bimodule()
        return self.components[k]

    def mult_matrix(self, k: int, l: int) -> PAdicMatrix:
        """Structure map Delta[k] (x) Delta[l] -> Delta[k+l] on ambient bases.

        Weight-0 factors multiply through the bimodule actions.
        """
        ring = self.coeff.ring
        if k == 0 and l == 0:
            c = self.coeff
            cols = []
            for i in range(c.rank):
                m = c.regular_left(i)
                for j in range(c.rank):
                    cols.append([m.entries[t][j] for t in range(c.rank)])
            return PAdicMatrix(ring, [[col[t] for col in cols] for t in range(c.rank)],
                               c.rank, c.rank * c.rank)
        if k == 0:
            B = self.component(l)
            cols = []
            for a in range(self.coeff.rank):
                for j in range(B.rank):
                    cols.append([B.left[a].entries[t][j] for t in range(B.rank)])
            return PAdicMatrix(ring, [[col[t] for col in cols] for t in range(B.rank)],
                               B.rank, self.coeff.rank * B.rank)
        if l == 0:
            B = self.component(k)
            cols = []
            for j in range(B.rank):
                for a in range(self.coeff.rank):
                    cols.append([B.right[a].entries[t][j] for t in range(B.rank)])
            return PAdicMatrix(ring, [[col[t] for col in cols] for t in range(B.rank)],
                               B.rank, B.rank * self.coeff.rank)
        return self.mult[(k, l)]


@dataclass(frozen=True)
class LeftModule:
    """Left module over the graded algebra, free over the coefficient algebra.

    ``rank`` counts generators over E0; base coordinates are pairs
    (generator, coefficient basis element), generator-major.  ``action[k]``
    (k >= 1) is the matrix of Delta[k] (x) M -> M on the ambient tensor basis,
    with shape (base_rank, rank(Delta[k]) * base_rank).  A missing weight acts
    by zero (the trivial-module convention).
    """

    name: str
    coeff: CoefficientAlgebra
    rank: int
    action: dict

    @property
    def base_rank(self) -> int:
        return self.rank * self.coeff.rank

    def coeff_action(self, a: int) -> PAdicMatrix:
        eye = PAdicMatrix.identity(self.coeff.ring, self.rank)
        return eye.kron(self.coeff.regular_left(a))

    def weight_action(self, k: int, algebra_rank_k: int) -> PAdicMatrix:
        if k in self.action:
            return self.action[k]
        return PAdicMatrix.zeros(self.coeff.ring, self.base_rank,
                                 algebra_rank_k * self.base_rank)

    def as_bimodule(self) -> Bimodule:
        """M as an (E0, E0)-bimodule with both actions the coefficient action
        (the coefficient algebra is commutative)."""
        acts = tuple(self.coeff_action(a) for a in range(self.coeff.rank))
        return Bimodule(self.coeff.ring, self.coeff, self.base_rank, acts, acts)


def trivial_module(coeff: CoefficientAlgebra, name: str = "triv") -> LeftModule:
    return LeftModule(name, coeff, 1, {})


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, check: str, witness: str):
        self.failures.append((check, witness))

    def __str__(self):
        if self.passed:
            return "all checks passed"
        return "\n".join(f"FAIL {c}: {w}" for c, w in self.failures)


def validate_algebra(A: GradedAugmentedAlgebra) -> ValidationReport:
    """Check associativity, unitality, bimodule compatibility and the
    augmentation axioms; every failure names a witnessing basis tuple."""
    rep = ValidationReport()
    c = A.coeff
    ring = c.ring
    # coefficient algebra: commutative, associative, unital
    for i in range(c.rank):
        for j in range(c.rank):
            if c.multiply(_e(c.rank, i), _e(c.rank, j)) != c.multiply(_e(c.rank, j), _e(c.rank, i)):
                rep.fail("coeff commutativity", f"basis pair ({i},{j})")
            for k in range(c.rank):
                lhs = c.multiply(c.multiply(_e(c.rank, i), _e(c.rank, j)), _e(c.rank, k))
                rhs = c.multiply(_e(c.rank, i), c.multiply(_e(c.rank, j), _e(c.rank, k)))
                if lhs != rhs:
                    rep.fail("coeff associativity", f"basis triple ({i},{j},{k})")
    for j in range(c.rank):
        if c.multiply(c.unit, _e(c.rank, j)) != _e(c.rank, j):
            rep.fail("coeff unitality", f"basis element {j}")
    # components: unital, associative, commuting bimodule actions
    for k in range(1, A.max_weight + 1):
        B = A.component(k)
        eye = PAdicMatrix.identity(ring, B.rank)
        if B.left_of(c.unit) != eye:
            rep.fail("left unitality", f"weight {k}")
        if B.right_of(c.unit) != eye:
            rep.fail("right unitality", f"weight {k}")
        for i in range(c.rank):
            for j in range(c.rank):
                prod = c.multiply(_e(c.rank, i), _e(c.rank, j))
                if B.left[i] @ B.left[j] != B.left_of(prod):
                    rep.fail("left associativity", f"weight {k}, pair ({i},{j})")
                if B.right[j] @ B.right[i] != B.right_of(prod):
                    rep.fail("right associativity", f"weight {k}, pair ({i},{j})")
                if B.left[i] @ B.right[j] != B.right[j] @ B.left[i]:
                    rep.fail("left/right commutation", f"weight {k}, pair ({i},{j})")
    # structure maps: coefficient bilinearity, balance, associativity
    for (k, l), m in sorted(A.mult.items()):
        Bk, Bl, Bkl = A.component(k), A.component(l), A.component(k + l)
        eye_k = PAdicMatrix.identity(ring, Bk.rank)
        eye_l = PAdicMatrix.identity(ring, Bl.rank)
        for a in range(c.rank):
            if (m @ (Bk.right[a].kron(eye_l) - eye_k.kron(Bl.left[a]))).is_zero() is False:
                rep.fail("mult balance", f"weights ({k},{l}), coeff basis {a}")
            if Bkl.left[a] @ m != m @ Bk.left[a].kron(eye_l):
                rep.fail("mult left linearity", f"weights ({k},{l}), coeff basis {a}")
            if Bkl.right[a] @ m != m @ eye_k.kron(Bl.right[a]):
                rep.fail("mult right linearity", f"weights ({k},{l}), coeff basis {a}")
    for k in range(1, A.max_weight + 1):
        for l in range(1, A.max_weight + 1):
            for mm in range(1, A.max_weight + 1):
                if k + l + mm > A.max_weight:
                    continue
                ek = PAdicMatrix.identity(ring, A.rank(k))
                em = PAdicMatrix.identity(ring, A.rank(mm))
                lhs = A.mult[(k + l, mm)] @ A.mult[(k, l)].kron(em)
                rhs = A.mult[(k, l + mm)] @ ek.kron(A.mult[(l, mm)])
                if lhs != rhs:
                    rep.fail("mult associativity", f"weight triple ({k},{l},{mm})")
    return rep


def validate_module(A: GradedAugmentedAlgebra, M: LeftModule) -> ValidationReport:
    rep = ValidationReport()
    ring = A.coeff.ring
    mb = M.base_rank
    eye_m = PAdicMatrix.identity(ring, mb)
    for k in range(1, A.max_weight + 1):
        act_k = M.weight_action(k, A.rank(k))
        Bk = A.component(k)
        eye_k = PAdicMatrix.identity(ring, Bk.rank)
        for a in range(A.coeff.rank):
            if not (act_k @ (Bk.right[a].kron(eye_m) - eye_k.kron(M.coeff_action(a)))).is_zero():
                rep.fail("module action balance", f"weight {k}, coeff basis {a}")
            if M.coeff_action(a) @ act_k != act_k @ Bk.left[a].kron(eye_m):
                rep.fail("module action linearity", f"weight {k}, coeff basis {a}")
        for l in range(1, A.max_weight + 1 - k):
            act_l = M.weight_action(l, A.rank(l))
            act_kl = M.weight_action(k + l, A.rank(k + l))
            lhs = act_kl @ A.mult[(k, l)].kron(eye_m)
            rhs = act_k @ eye_k.kron(act_l)
            if lhs != rhs:
                rep.fail("module associativity",
                         f"module {M.name!r}, weight pair ({k},{l})")
    return rep


def _e(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


# ---------------------------------------------------------------------------
# Datasets
# ---------------------------------------------------------------------------

@dataclass
class Dataset:
    p: int
    N: int
    height_label: str
    q_label: int
    provenance: str
    algebra: GradedAugmentedAlgebra
    modules: dict
    subgroup_package: Optional[object] = None

    @property
    def ring(self) -> BaseRing:
        return self.algebra.coeff.ring

    def module(self, name: str) -> LeftModule:
        try:
            return self.modules[name]
        except KeyError:
            raise DatasetError(f"no module named {name!r}; have {sorted(self.modules)}")

    def validate(self) -> ValidationReport:
        rep = validate_algebra(self.algebra)
        for M in self.modules.values():
            sub = validate_module(self.algebra, M)
            rep.failures.extend(sub.failures)
        if self.subgroup_package is not None:
            from .isogeny import validate_package
            rep.failures.extend(validate_package(self.subgroup_package).failures)
        return rep


def builtin_height1(p: int, N: int, kmax: int) -> Dataset:
    """The fully forced height-1 dataset.

    Every weight component has rank 1 with unit structure constants; the
    sphere module has each positive weight acting by the scalar 1 and the
    trivial module has zero positive-weight action.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    ring = BaseRing(p, N)
    coeff = CoefficientAlgebra(ring, 1, (((1,),),), (1,), ((p % ring.modulus,),))
    one = PAdicMatrix(ring, [[1]], 1, 1)
    comps = {k: Bimodule(ring, coeff, 1, (one,), (one,)) for k in range(1, kmax + 1)}
    mult = {(k, l): one for k in range(1, kmax) for l in range(1, kmax + 1 - k)}
    algebra = GradedAugmentedAlgebra(coeff, 1, kmax, comps, mult)
    sphere = LeftModule("sphere", coeff, 1, {k: one for k in range(1, kmax + 1)})
    modules = {"triv": trivial_module(coeff), "sphere": sphere}
    ds = Dataset(p, N, "1", 1, "built-in height-1 dataset (rank-1 components, "
                 "unit structure constants, generator basis)", algebra, modules)
    from .isogeny import builtin_height1_package
    ds.subgroup_package = builtin_height1_package(ds)
    return ds


# ---------------------------------------------------------------------------
# Serialization (file format "koszulab-1")
# ---------------------------------------------------------------------------

FORMAT = "koszulab-1"


def _matrix_to_json(m: PAdicMatrix):
    return [list(r) for r in m.entries]


def _matrix_from_json(ring, data, rows, cols, where):
    if not isinstance(data, list) or len(data) != rows or \
            any(not isinstance(r, list) or len(r) != cols for r in data):
        raise DatasetError(f"{where}: expected a {rows}x{cols} matrix")
    return PAdicMatrix(ring, data, rows, cols)


def dataset_to_json(ds: Dataset) -> dict:
    A = ds.algebra
    c = A.coeff
    out = {
        "format": FORMAT,
        "p": ds.p,
        "N": ds.N,
        "height_label": ds.height_label,
        "q_label": ds.q_label,
        "provenance": ds.provenance,
        "coefficient_algebra": {
            "rank": c.rank,
            "mult_constants": [[[x for x in row] for row in plane]
                               for plane in c.mult_constants],
            "unit": list(c.unit),
            "maximal_ideal": [list(g) for g in c.maximal_ideal],
        },
        "algebra": {
            "max_weight": A.max_weight,
            "components": [
                {"k": k, "rank": A.rank(k),
                 "left_action": [_matrix_to_json(m) for m in A.components[k].left],
                 "right_action": [_matrix_to_json(m) for m in A.components[k].right]}
                for k in sorted(A.components)
            ],
            "mult": [{"k": k, "l": l, "matrix": _matrix_to_json(m)}
                     for (k, l), m in sorted(A.mult.items())],
        },
        "modules": [
            {"name": M.name, "rank": M.rank,
             "action": [{"k": k, "matrix": _matrix_to_json(m)}
                        for k, m in sorted(M.action.items())]}
            for M in ds.modules.values()
        ],
    }
    if ds.subgroup_package is not None:
        from .isogeny import package_to_json
        out["subgroup_package"] = package_to_json(ds.subgroup_package)
    return out


def dataset_from_json(doc: dict, validate: bool = True) -> Dataset:
    def need(d, key, where):
        if key not in d:
            raise DatasetError(f"{where}: missing field {key!r}")
        return d[key]

    if need(doc, "format", "top level") != FORMAT:
        raise DatasetError(f"top level: unsupported format {doc.get('format')!r}")
    p = need(doc, "p", "top level")
    N = need(doc, "N", "top level")
    ring = BaseRing(p, N)
    ca = need(doc, "coefficient_algebra", "top level")
    crank = need(ca, "rank", "coefficient_algebra")
    mc = need(ca, "mult_constants", "coefficient_algebra")
    if len(mc) != crank or any(len(pl) != crank for pl in mc) or \
            any(len(row) != crank for pl in mc for row in pl):
        raise DatasetError("coefficient_algebra.mult_constants: expected "
                           f"rank^3 = {crank}^3 entries")
    coeff = CoefficientAlgebra(
        ring, crank,
        tuple(tuple(tuple(x % ring.modulus for x in row) for row in pl) for pl in mc),
        tuple(x % ring.modulus for x in need(ca, "unit", "coefficient_algebra")),
        tuple(tuple(x % ring.modulus for x in g)
              for g in ca.get("maximal_ideal", [])))
    if len(coeff.unit) != crank:
        raise DatasetError("coefficient_algebra.unit: wrong length")
    alg = need(doc, "algebra", "top level")
    max_weight = need(alg, "max_weight", "algebra")
    comps = {}
    for ent in need(alg, "components", "algebra"):
        k = need(ent, "k", "algebra.components[]")
        r = need(ent, "rank", f"algebra.components[k={k}]")
        la = need(ent, "left_action", f"algebra.components[k={k}]")
        ra = need(ent, "right_action", f"algebra.components[k={k}]")
        if len(la) != crank or len(ra) != crank:
            raise DatasetError(f"algebra.components[k={k}]: need one action "
                               "matrix per coefficient basis element")
        comps[k] = Bimodule(
            ring, coeff, r,
            tuple(_matrix_from_json(ring, m, r, r,
                                    f"algebra.components[k={k}].left_action") for m in la),
            tuple(_matrix_from_json(ring, m, r, r,
                                    f"algebra.components[k={k}].right_action") for m in ra))
    if set(comps) != set(range(1, max_weight + 1)):
        raise DatasetError("algebra.components: weights must be exactly 1..max_weight")
    mult = {}
    for ent in need(alg, "mult", "algebra"):
        k, l = need(ent, "k", "algebra.mult[]"), need(ent, "l", "algebra.mult[]")
        if k + l > max_weight:
            raise DatasetError(f"algebra.mult[k={k},l={l}]: weight {k+l} exceeds max_weight")
        mult[(k, l)] = _matrix_from_json(
            ring, need(ent, "matrix", f"algebra.mult[k={k},l={l}]"),
            comps[k + l].rank, comps[k].rank * comps[l].rank,
            f"algebra.mult[k={k},l={l}].matrix")
    want = {(k, l) for k in range(1, max_weight) for l in range(1, max_weight + 1 - k)}
    if set(mult) != want:
        raise DatasetError("algebra.mult: need exactly the pairs (k,l) with k+l <= max_weight")
    algebra = GradedAugmentedAlgebra(coeff, doc.get("q_label", 1), max_weight, comps, mult)
    modules = {}
    for ent in doc.get("modules", []):
        name = need(ent, "name", "modules[]")
        r = need(ent, "rank", f"modules[{name!r}]")
        base = r * crank
        action = {}
        for a in ent.get("action", []):
            k = need(a, "k", f"modules[{name!r}].action[]")
            if not 1 <= k <= max_weight:
                raise DatasetError(f"modules[{name!r}].action: weight {k} out of range")
            action[k] = _matrix_from_json(
                ring, need(a, "matrix", f"modules[{name!r}].action[k={k}]"),
                base, comps[k].rank * base, f"modules[{name!r}].action[k={k}].matrix")
        modules[name] = LeftModule(name, coeff, r, action)
    ds = Dataset(p, N, doc.get("height_label", "?"), doc.get("q_label", 1),
                 doc.get("provenance", ""), algebra, modules)
    if "subgroup_package" in doc:
        from .isogeny import package_from_json
        ds.subgroup_package = package_from_json(ds, doc["subgroup_package"])
    if validate:
        rep = ds.validate()
        if not rep.passed:
            raise DatasetError(f"dataset failed validation:\n{rep}")
    return ds


def canonical_json(ds: Dataset) -> str:
    return json.dumps(dataset_to_json(ds), sort_keys=True, separators=(",", ":"))


def save_dataset(ds: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dataset_to_json(ds), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_dataset(path, validate: bool = True) -> Dataset:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}")
    return dataset_from_json(doc, validate=validate)
