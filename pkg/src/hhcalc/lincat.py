"""Finite k-linear B-categories, equivariant bifunctors and their Hochschild complexes.

Conventions (left composition):
  Hom(X,Y) holds maps X → Y; composition g∘f for f ∈ Hom(X,Y), g ∈ Hom(Y,Z).
  A bifunctor H has H(X,Y) with pre-composition h∘α (α ∈ Hom(W,X)) and
  post-composition β∘h (β ∈ Hom(Y,Z)); equivariance reads
  b(β∘h∘α) = b₍₁₎β ∘ b₍₂₎h ∘ b₍₃₎α, matching b(g∘f) = b₍₁₎g ∘ b₍₂₎f.

CH_n(C,H) = ⊕ H(X₀,Xₙ)⊗Hom(X₁,X₀)⊗…⊗Hom(Xₙ,X_{n-1}) with
  ∂₀ = h∘u₁,  ∂ⱼ = …u_j∘u_{j+1}…,  ∂ₙ = uₙ∘h
and the diagonal action b₍₁₎h ⊗ b₍₂₎u₁ ⊗ … ⊗ b₍ₙ₊₁₎uₙ.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable

import numpy as np

from .chain import (BettiTable, ChainComplexRealization, OracleReport, assemble, check_size, decode, encode, mrank,
                    tensor_vectors)
from .errors import ShapeError, StabilityViolation, ValidationFailure
from .exactfield import (FieldSpec, Matrix, SubspaceBasis, empty_subspace, kernel_basis, project_columns,
                         reduce_array, span_reduce_array, zeros)
from .hopfcore import HopfData, ValidationReport, accumulate, iterated_coproduct
from .modact import ModuleAlgebra


def _lin(field: FieldSpec, table, x: dict) -> dict:
    """Apply a column table (table[i] = image of basis i) to x."""
    acc: dict = {}
    for i, c in x.items():
        accumulate(acc, table[i], c)
    return field.clean(acc)


def _bil(field: FieldSpec, table, x: dict, y: dict) -> dict:
    acc: dict = {}
    for i, a in x.items():
        row = table[i]
        for j, b in y.items():
            accumulate(acc, row[j], a * b)
    return field.clean(acc)


# ---------------------------------------------------------------------------
# data


@dataclass(eq=False)
class FiniteLinearCategory:
    field: FieldSpec
    objects: list[str]
    hom_dims: dict            # (X, Y) -> dim Hom(X,Y)
    compose: dict             # (X, Y, Z) -> table[g][f] for g ∈ Hom(Y,Z), f ∈ Hom(X,Y)
    identities: dict          # X -> vector in Hom(X,X)

    def comp(self, X, Y, Z, g: dict, f: dict) -> dict:
        return _bil(self.field, self.compose[(X, Y, Z)], g, f)


@dataclass(eq=False)
class BCategoryData:
    cat: FiniteLinearCategory
    B: HopfData
    action: dict              # (X, Y) -> table[b][f]
    labels: dict = dc_field(default_factory=dict)

    @property
    def field(self) -> FieldSpec:
        return self.cat.field

    @property
    def objects(self) -> list[str]:
        return self.cat.objects

    def act(self, X, Y, b: int, f: dict) -> dict:
        row = self.action[(X, Y)][b]
        return _lin(self.field, row, f)


@dataclass(eq=False)
class BifunctorData:
    field: FieldSpec
    dims: dict                # (X, Y) -> dim H(X,Y)
    pre: dict                 # (W, X, Y) -> table[h][α]: h∘α ∈ H(W,Y)
    post: dict                # (X, Y, Z) -> table[β][h]: β∘h ∈ H(X,Z)
    act: dict                 # (X, Y) -> table[b][h]
    name: str = "Hom"

    def precompose(self, W, X, Y, h: dict, a: dict) -> dict:
        return _bil(self.field, self.pre[(W, X, Y)], h, a)

    def postcompose(self, X, Y, Z, b: dict, h: dict) -> dict:
        return _bil(self.field, self.post[(X, Y, Z)], b, h)


@dataclass(eq=False)
class RetractionData:
    """δ(X) ∈ D with r(X): δ(X) → X and s(X): X → δ(X), r∘s = id_X."""
    delta: dict
    r: dict
    s: dict


@dataclass(eq=False)
class DecompositionData:
    """E ≅ ⊕ D_i: per object a list of (D_i, u_i ∈ Hom(E,D_i), v_i ∈ Hom(D_i,E)) with Σ v_i∘u_i = id_E."""
    components: dict


# ---------------------------------------------------------------------------
# validation


def validate_category(cat: FiniteLinearCategory) -> ValidationReport:
    f = cat.field
    rep = ValidationReport("category")
    obs = cat.objects
    for (X, Y, Z) in itertools.product(obs, repeat=3):
        t = cat.compose.get((X, Y, Z))
        if t is None or len(t) != cat.hom_dims[(Y, Z)] or any(len(r) != cat.hom_dims[(X, Y)] for r in t):
            raise ShapeError(f"compose[{X},{Y},{Z}] has the wrong shape")
    rep.check("associativity")
    for W, X, Y, Z in itertools.product(obs, repeat=4):
        for h, g, e in itertools.product(range(cat.hom_dims[(Y, Z)]), range(cat.hom_dims[(X, Y)]),
                                         range(cat.hom_dims[(W, X)])):
            lhs = cat.comp(W, Y, Z, {h: 1}, cat.compose[(W, X, Y)][g][e])
            rhs = cat.comp(W, X, Z, cat.compose[(X, Y, Z)][h][g], {e: 1})
            if lhs != rhs:
                rep.fail("associativity", (W, X, Y, Z), h, g, e)
    rep.check("identity")
    for X, Y in itertools.product(obs, repeat=2):
        for g in range(cat.hom_dims[(X, Y)]):
            if cat.comp(X, X, Y, {g: 1}, cat.identities[X]) != {g: 1}:
                rep.fail("identity", (X, Y), g, "right")
            if cat.comp(X, Y, Y, cat.identities[Y], {g: 1}) != {g: 1}:
                rep.fail("identity", (X, Y), g, "left")
    return rep


def validate_bcategory(bc: BCategoryData) -> ValidationReport:
    """Module axioms per hom-space and b(g∘f) = b₍₁₎g∘b₍₂₎f."""
    cat, B, f = bc.cat, bc.B, bc.field
    rep = validate_category(cat)
    rep.subject = "B-category"
    obs = cat.objects
    rep.check("module_associativity")
    rep.check("module_unit")
    for X, Y in itertools.product(obs, repeat=2):
        d = cat.hom_dims[(X, Y)]
        t = bc.action.get((X, Y))
        if t is None or len(t) != B.dim or any(len(r) != d for r in t):
            raise ShapeError(f"action[{X},{Y}] has the wrong shape")
        for b1, b2, g in itertools.product(range(B.dim), range(B.dim), range(d)):
            lhs = bc.act(X, Y, b1, t[b2][g])
            rhs: dict = {}
            for k, c in B.alg.mult[b1][b2].items():
                accumulate(rhs, t[k][g], c)
            if lhs != f.clean(rhs):
                rep.fail("module_associativity", (X, Y), b1, b2, g)
        for g in range(d):
            acc: dict = {}
            for k, c in B.alg.unit.items():
                accumulate(acc, t[k][g], c)
            if f.clean(acc) != {g: 1}:
                rep.fail("module_unit", (X, Y), g)
    rep.check("composition_equivariance")
    for X, Y, Z in itertools.product(obs, repeat=3):
        for b, g, e in itertools.product(range(B.dim), range(cat.hom_dims[(Y, Z)]), range(cat.hom_dims[(X, Y)])):
            lhs = bc.act(X, Z, b, cat.compose[(X, Y, Z)][g][e])
            acc: dict = {}
            for c, p, q in B.comult[b]:
                accumulate(acc, cat.comp(X, Y, Z, bc.action[(Y, Z)][p][g], bc.action[(X, Y)][q][e]), c)
            if lhs != f.clean(acc):
                rep.fail("composition_equivariance", (X, Y, Z), B.alg.basis_names[b], g, e)
    return rep


def validate_bifunctor(bc: BCategoryData, H: BifunctorData) -> ValidationReport:
    cat, B, f = bc.cat, bc.B, bc.field
    rep = ValidationReport(f"bifunctor({H.name})")
    obs = cat.objects
    hd, cd = H.dims, cat.hom_dims
    rep.check("pre_associativity")
    rep.check("post_associativity")
    rep.check("pre_post_compatibility")
    rep.check("identity")
    for V, W, X, Y in itertools.product(obs, repeat=4):
        for h, a, a2 in itertools.product(range(hd[(X, Y)]), range(cd[(W, X)]), range(cd[(V, W)])):
            lhs = H.precompose(V, W, Y, H.pre[(W, X, Y)][h][a], {a2: 1})
            rhs = H.precompose(V, X, Y, {h: 1}, cat.compose[(V, W, X)][a][a2])
            if lhs != rhs:
                rep.fail("pre_associativity", (V, W, X, Y), h, a, a2)
    for X, Y, Z, T in itertools.product(obs, repeat=4):
        for b2, b1, h in itertools.product(range(cd[(Z, T)]), range(cd[(Y, Z)]), range(hd[(X, Y)])):
            lhs = H.postcompose(X, Z, T, {b2: 1}, H.post[(X, Y, Z)][b1][h])
            rhs = H.postcompose(X, Y, T, cat.compose[(Y, Z, T)][b2][b1], {h: 1})
            if lhs != rhs:
                rep.fail("post_associativity", (X, Y, Z, T), b2, b1, h)
    for W, X, Y, Z in itertools.product(obs, repeat=4):
        for be, h, al in itertools.product(range(cd[(Y, Z)]), range(hd[(X, Y)]), range(cd[(W, X)])):
            lhs = H.postcompose(W, Y, Z, {be: 1}, H.pre[(W, X, Y)][h][al])
            rhs = H.precompose(W, X, Z, H.post[(X, Y, Z)][be][h], {al: 1})
            if lhs != rhs:
                rep.fail("pre_post_compatibility", (W, X, Y, Z), be, h, al)
    for X, Y in itertools.product(obs, repeat=2):
        for h in range(hd[(X, Y)]):
            if H.precompose(X, X, Y, {h: 1}, cat.identities[X]) != {h: 1}:
                rep.fail("identity", (X, Y), h, "pre")
            if H.postcompose(X, Y, Y, cat.identities[Y], {h: 1}) != {h: 1}:
                rep.fail("identity", (X, Y), h, "post")
    rep.check("B_module")
    for X, Y in itertools.product(obs, repeat=2):
        t = H.act[(X, Y)]
        for b1, b2, h in itertools.product(range(B.dim), range(B.dim), range(hd[(X, Y)])):
            lhs = _lin(f, t[b1], t[b2][h])
            acc: dict = {}
            for k, c in B.alg.mult[b1][b2].items():
                accumulate(acc, t[k][h], c)
            if lhs != f.clean(acc):
                rep.fail("B_module", (X, Y), b1, b2, h)
    rep.check("equivariance")
    cop3 = iterated_coproduct(B, 3).result
    for W, X, Y, Z in itertools.product(obs, repeat=4):
        for b in range(B.dim):
            for be, h, al in itertools.product(range(cd[(Y, Z)]), range(hd[(X, Y)]), range(cd[(W, X)])):
                lhs = _lin(f, H.act[(W, Z)][b], H.postcompose(W, Y, Z, {be: 1}, H.pre[(W, X, Y)][h][al]))
                acc: dict = {}
                for (p, q, r), c in cop3[b].items():
                    hh = H.precompose(W, X, Y, H.act[(X, Y)][q][h], bc.action[(W, X)][r][al])
                    accumulate(acc, H.postcompose(W, Y, Z, bc.action[(Y, Z)][p][be], hh), c)
                if lhs != f.clean(acc):
                    rep.fail("equivariance", (W, X, Y, Z), B.alg.basis_names[b], be, h, al)
    return rep


# ---------------------------------------------------------------------------
# builders


def hom_bifunctor(bc: BCategoryData) -> BifunctorData:
    cat = bc.cat
    obs = cat.objects
    pre, post = {}, {}
    for W, X, Y in itertools.product(obs, repeat=3):
        c = cat.compose[(W, X, Y)]  # table[g ∈ Hom(X,Y)][f ∈ Hom(W,X)]
        pre[(W, X, Y)] = c
    for X, Y, Z in itertools.product(obs, repeat=3):
        post[(X, Y, Z)] = cat.compose[(X, Y, Z)]
    return BifunctorData(cat.field, dict(cat.hom_dims), pre, post, dict(bc.action), name="Hom")


def object_name(r: int) -> str:
    return "A" if r == 1 else f"A^{r}"


def build_module_category(ma: ModuleAlgebra, ranks: list[int], literal: bool = True
                          ) -> tuple[BCategoryData, BifunctorData]:
    """Free right A-modules A^r; Hom(A^r,A^s) = s×r matrices over A acting by left multiplication.

    Basis of Hom(A^r,A^s): index (i·r + j)·dim A + k for entry (i,j) equal to the k-th basis
    vector of A.  The B-action is (bf)(x) = b₍₁₎f(S(b₍₂₎)x); with ``literal`` it is evaluated
    through that formula on the standard generators, otherwise entrywise.
    """
    if not ranks or any(r < 1 for r in ranks):
        raise ValueError("ranks must be a nonempty list of positive integers")
    B, A, f = ma.B, ma.A, ma.field
    B.require_antipode()
    dA = A.dim
    objs = [object_name(r) for r in ranks]
    rk = dict(zip(objs, ranks))
    hom_dims = {(X, Y): rk[X] * rk[Y] * dA for X in objs for Y in objs}
    compose = {}
    for X, Y, Z in itertools.product(objs, repeat=3):
        r, s, t = rk[X], rk[Y], rk[Z]
        table = []
        for gi in range(t * s * dA):
            (i, j), gk = divmod(gi // dA, s), gi % dA
            row = []
            for fi in range(s * r * dA):
                (j2, l), fk = divmod(fi // dA, r), fi % dA
                if j2 != j:
                    row.append({})
                    continue
                prod = A.mult[gk][fk]
                row.append(f.clean({(i * r + l) * dA + k: c for k, c in prod.items()}))
            table.append(row)
        compose[(X, Y, Z)] = table
    identities = {}
    for X in objs:
        r = rk[X]
        acc: dict = {}
        for i in range(r):
            for k, c in A.unit.items():
                acc[(i * r + i) * dA + k] = c
        identities[X] = f.clean(acc)
    cat = FiniteLinearCategory(f, objs, hom_dims, compose, identities)
    action = {}
    for X, Y in itertools.product(objs, repeat=2):
        action[(X, Y)] = (_conjugation_literal(ma, rk[X], rk[Y]) if literal
                          else _conjugation_entrywise(ma, rk[X], rk[Y]))
    bc = BCategoryData(cat, B, action, labels={"ranks": list(ranks)})
    return bc, hom_bifunctor(bc)


def _conjugation_entrywise(ma: ModuleAlgebra, r: int, s: int) -> list[list[dict]]:
    dA = ma.A.dim
    out = []
    for b in range(ma.B.dim):
        row = []
        for fi in range(s * r * dA):
            ij, k = divmod(fi, dA)
            row.append({ij * dA + kk: c for kk, c in ma.action[b][k].items()})
        out.append(row)
    return out


def _conjugation_literal(ma: ModuleAlgebra, r: int, s: int) -> list[list[dict]]:
    """(bf)(x) = b₍₁₎ f(S(b₍₂₎)x), read off on the generators e_j of A^r, and A-linearity asserted."""
    A, B, f = ma.A, ma.B, ma.field
    dA = A.dim

    def apply_matrix(fvec: dict, x: list[dict]) -> list[dict]:
        # f as s×r matrix over A applied to the column x ∈ A^r
        out = [dict() for _ in range(s)]
        for fi, c in fvec.items():
            (i, j), k = divmod(fi // dA, r), fi % dA
            accumulate(out[i], A.mul({k: 1}, x[j]), c)
        return [f.clean(o) for o in out]

    def act_vec(bvec: dict, x: list[dict]) -> list[dict]:
        return [ma.act(bvec, xi) for xi in x]

    def bf_at(b: int, fvec: dict, x: list[dict]) -> list[dict]:
        out = [dict() for _ in range(s)]
        for c, p, q in B.comult[b]:
            y = act_vec({p: 1}, apply_matrix(fvec, act_vec(B.antipode[q], x)))
            for i in range(s):
                accumulate(out[i], y[i], c)
        return [f.clean(o) for o in out]

    table = []
    for b in range(B.dim):
        row = []
        for fi in range(s * r * dA):
            fvec = {fi: 1}
            vec: dict = {}
            for j in range(r):
                e = [dict(A.unit) if jj == j else {} for jj in range(r)]
                col = bf_at(b, fvec, e)
                for i in range(s):
                    for k, c in col[i].items():
                        vec[(i * r + j) * dA + k] = c
            vec = f.clean(vec)
            # A-linearity: (bf)(x a) = (bf)(x) a on basis x ∈ A^r, a ∈ A
            for j, xa, a in itertools.product(range(r), range(dA), range(dA)):
                x = [{xa: 1} if jj == j else {} for jj in range(r)]
                lhs = bf_at(b, fvec, [A.mul(xi, {a: 1}) for xi in x])
                rhs = [A.mul(yi, {a: 1}) for yi in bf_at(b, fvec, x)]
                if lhs != rhs:
                    rep = ValidationReport("conjugation_action")
                    rep.fail("A_linearity", B.alg.basis_names[b], fi, (j, xa), a)
                    raise ValidationFailure(rep)
            row.append(vec)
        table.append(row)
    return table


def full_subcategory(bc: BCategoryData, objects: list[str]) -> BCategoryData:
    cat = bc.cat
    obs = [o for o in cat.objects if o in set(objects)]
    hd = {(X, Y): cat.hom_dims[(X, Y)] for X in obs for Y in obs}
    comp = {(X, Y, Z): cat.compose[(X, Y, Z)] for X in obs for Y in obs for Z in obs}
    ids = {X: cat.identities[X] for X in obs}
    act = {(X, Y): bc.action[(X, Y)] for X in obs for Y in obs}
    return BCategoryData(FiniteLinearCategory(cat.field, obs, hd, comp, ids), bc.B, act, dict(bc.labels))


def restrict_bifunctor(H: BifunctorData, objects: list[str]) -> BifunctorData:
    s = set(objects)
    keep = lambda key: all(k in s for k in key)  # noqa: E731
    return BifunctorData(H.field, {k: v for k, v in H.dims.items() if keep(k)},
                         {k: v for k, v in H.pre.items() if keep(k)},
                         {k: v for k, v in H.post.items() if keep(k)},
                         {k: v for k, v in H.act.items() if keep(k)}, name=H.name)


@dataclass(eq=False)
class InvariantSubcategory:
    spaces: dict          # (X, Y) -> SubspaceBasis of B-invariant morphisms
    closed: bool
    witness: tuple | None = None


def invariant_subcategory(bc: BCategoryData) -> InvariantSubcategory:
    """ᴮC: morphisms with b(f) = ε(b)f, and a closure-under-composition check."""
    cat, B, f = bc.cat, bc.B, bc.field
    spaces = {}
    for X, Y in itertools.product(cat.objects, repeat=2):
        d = cat.hom_dims[(X, Y)]
        blocks = []
        for b in range(B.dim):
            m = assemble(f, d, d, lambda k, b=b: bc.action[(X, Y)][b][k])
            for i in range(d):
                m[i, i] = m[i, i] - B.counit[b]
            blocks.append(reduce_array(f, m))
        spaces[(X, Y)] = kernel_basis(Matrix(f, np.concatenate(blocks, axis=0)))
    for X, Y, Z in itertools.product(cat.objects, repeat=3):
        for g in spaces[(Y, Z)].vectors():
            gv = {i: c for i, c in enumerate(g) if not f.is_zero(c)}
            for e in spaces[(X, Y)].vectors():
                ev = {i: c for i, c in enumerate(e) if not f.is_zero(c)}
                prod = cat.comp(X, Y, Z, gv, ev)
                arr = zeros(f, 1, cat.hom_dims[(X, Z)])
                for k, c in prod.items():
                    arr[0, k] = c
                if not spaces[(X, Z)].contains_all(arr):
                    return InvariantSubcategory(spaces, False, ((X, Y, Z), tuple(g), tuple(e)))
    return InvariantSubcategory(spaces, True)


def matrix_morphism(ma: ModuleAlgebra, r: int, s: int, entries: dict) -> dict:
    """Morphism A^r → A^s from {(i, j): A-vector}."""
    dA = ma.A.dim
    out: dict = {}
    for (i, j), vec in entries.items():
        for k, c in vec.items():
            out[(i * r + j) * dA + k] = c
    return ma.field.clean(out)


def standard_retraction(ma: ModuleAlgebra, big: int = 2) -> RetractionData:
    """δ(A) = A^big with r: A^big → A the first projection and s: A → A^big the first inclusion."""
    one = ma.A.unit
    Ab = object_name(big)
    ident = {i: one for i in range(big)}
    return RetractionData(
        delta={"A": Ab, Ab: Ab},
        r={"A": matrix_morphism(ma, big, 1, {(0, 0): one}),
           Ab: matrix_morphism(ma, big, big, {(i, i): v for i, v in ident.items()})},
        s={"A": matrix_morphism(ma, 1, big, {(0, 0): one}),
           Ab: matrix_morphism(ma, big, big, {(i, i): v for i, v in ident.items()})})


def identity_retraction(bc: BCategoryData) -> RetractionData:
    ids = bc.cat.identities
    return RetractionData({X: X for X in bc.objects}, dict(ids), dict(ids))


def standard_decomposition(ma: ModuleAlgebra, big: int = 2) -> DecompositionData:
    """A^big = ⊕ A with coordinate projections u_i and injections v_i; A itself is its own component."""
    one = ma.A.unit
    Ab = object_name(big)
    comps = {"A": [("A", matrix_morphism(ma, 1, 1, {(0, 0): one}), matrix_morphism(ma, 1, 1, {(0, 0): one}))]}
    comps[Ab] = [("A", matrix_morphism(ma, big, 1, {(0, i): one}), matrix_morphism(ma, 1, big, {(i, 0): one}))
                 for i in range(big)]
    return DecompositionData(comps)


def identity_decomposition(bc: BCategoryData) -> DecompositionData:
    ids = bc.cat.identities
    return DecompositionData({X: [(X, ids[X], ids[X])] for X in bc.objects})


# ---------------------------------------------------------------------------
# the complex, realized sparsely


class CatComplex:
    """CH_n(C,H) for n = 0..top, evaluated basis-by-basis."""

    def __init__(self, bc: BCategoryData, H: BifunctorData, top: int, cap: int | None = None):
        self.bc, self.H, self.top = bc, H, top
        self.field = bc.field
        obs = bc.objects
        self.blocks: list[list[tuple]] = []
        self.offsets: list[list[int]] = []
        self.where: list[dict] = []
        cd = bc.cat.hom_dims
        for n in range(top + 1):
            blocks, offs, where = [], [], {}
            off = 0
            for tup in itertools.product(obs, repeat=n + 1):
                shape = [H.dims[(tup[0], tup[-1])]] + [cd[(tup[i], tup[i - 1])] for i in range(1, n + 1)]
                size = int(np.prod(shape)) if shape else 1
                if size == 0:
                    continue
                where[tup] = (off, shape)
                blocks.append((tup, shape))
                offs.append(off)
                off += size
            check_size(off, f"CH_{n}(C,H)", cap)
            self.blocks.append(blocks)
            self.offsets.append(offs)
            self.where.append(where)
        self.dims = [self._dim(n) for n in range(top + 1)]

    def _dim(self, n: int) -> int:
        if not self.blocks[n]:
            return 0
        tup, shape = self.blocks[n][-1]
        return self.offsets[n][-1] + int(np.prod(shape))

    def decode(self, n: int, k: int) -> tuple[tuple, tuple]:
        i = bisect.bisect_right(self.offsets[n], k) - 1
        tup, shape = self.blocks[n][i]
        return tup, decode(k - self.offsets[n][i], shape)

    def encode_vec(self, n: int, tup: tuple, factors: list[dict], coeff=1) -> dict:
        loc = self.where[n].get(tup)
        if loc is None:
            return {}
        off, shape = loc
        return {off + k: c for k, c in tensor_vectors(self.field, factors, shape, coeff).items()}

    def basis_factors(self, n: int, k: int):
        return self.decode(n, k)

    # faces -------------------------------------------------------------
    def face(self, n: int, j: int, k: int) -> dict:
        tup, loc = self.decode(n, k)
        H, cat = self.H, self.bc.cat
        h, us = loc[0], loc[1:]
        if j == 0:
            newh = H.pre[(tup[1], tup[0], tup[-1])][h][us[0]]
            return self.encode_vec(n - 1, tup[1:], [newh] + [{u: 1} for u in us[1:]])
        if j == n:
            newh = H.post[(tup[0], tup[-1], tup[-2])][us[-1]][h]
            return self.encode_vec(n - 1, tup[:-1], [newh] + [{u: 1} for u in us[:-1]])
        # merge u_j ∘ u_{j+1}: X_{j+1} → X_j → X_{j-1}
        comp = cat.compose[(tup[j + 1], tup[j], tup[j - 1])][us[j - 1]][us[j]]
        fac = [{h: 1}] + [{u: 1} for u in us[:j - 1]] + [comp] + [{u: 1} for u in us[j + 1:]]
        return self.encode_vec(n - 1, tup[:j] + tup[j + 1:], fac)

    def d(self, n: int, k: int) -> dict:
        acc: dict = {}
        for j in range(n + 1):
            accumulate(acc, self.face(n, j, k), -1 if j % 2 else 1)
        return self.field.clean(acc)

    def apply(self, fn: Callable[[int], dict], vec: dict) -> dict:
        acc: dict = {}
        for k, c in vec.items():
            accumulate(acc, fn(k), c)
        return self.field.clean(acc)

    def L(self, n: int, b: int, k: int) -> dict:
        tup, loc = self.decode(n, k)
        bc, H = self.bc, self.H
        legs = iterated_coproduct(bc.B, n + 1).result[b]
        acc: dict = {}
        for key, c in legs.items():
            fac = [H.act[(tup[0], tup[-1])][key[0]][loc[0]]]
            for i in range(1, n + 1):
                fac.append(bc.action[(tup[i], tup[i - 1])][key[i]][loc[i]])
            accumulate(acc, self.encode_vec(n, tup, fac), c)
        return self.field.clean(acc)

    def commutator(self, n: int, b: int, k: int) -> dict:
        """[L_b, ∂_{n+1}] on the basis vector k of CH_{n+1}."""
        f = self.field
        a = self.apply(lambda i: self.L(n, b, i), self.face(n + 1, n + 1, k))
        c = self.apply(lambda i: self.face(n + 1, n + 1, i), self.L(n + 1, b, k))
        acc = dict(a)
        accumulate(acc, c, -1)
        return f.clean(acc)

    # dense export ------------------------------------------------------
    def dense(self) -> ChainComplexRealization:
        f = self.field
        faces = [[]]
        for n in range(1, self.top + 1):
            faces.append([assemble(f, self.dims[n - 1], self.dims[n], lambda k, n=n, j=j: self.face(n, j, k))
                          for j in range(n + 1)])
        return ChainComplexRealization(f, list(self.dims), faces, "⊕ H(X0,Xn)⊗Hom(X1,X0)⊗…, tuples lexicographic",
                                       label="CH(C,H)")

    def d_squared_failures(self, up_to: int | None = None) -> list[tuple[int, int]]:
        bad = []
        for n in range(2, (self.top if up_to is None else up_to) + 1):
            for k in range(self.dims[n]):
                if self.apply(lambda i: self.d(n - 1, i), self.d(n, k)):
                    bad.append((n, k))
                    break
        return bad

    def presimplicial_failures(self, up_to: int | None = None) -> list[tuple[int, int, int, int]]:
        bad = []
        for n in range(2, (self.top if up_to is None else up_to) + 1):
            for k in range(self.dims[n]):
                for j in range(n + 1):
                    for i in range(j):
                        lhs = self.apply(lambda x: self.face(n - 1, i, x), self.face(n, j, k))
                        rhs = self.apply(lambda x: self.face(n - 1, j - 1, x), self.face(n, i, k))
                        if lhs != rhs:
                            bad.append((n, i, j, k))
        return bad


def build_cat_ch(bc: BCategoryData, H: BifunctorData, N: int = 3, cap: int | None = None) -> CatComplex:
    return CatComplex(bc, H, N + 1, cap)


# ---------------------------------------------------------------------------
# quotients


def _span_sparse(field: FieldSpec, vecs: Iterable[dict], n: int, start: SubspaceBasis | None = None,
                 chunk: int = 2048) -> SubspaceBasis:
    sub = start if start is not None else empty_subspace(field, n)
    buf: list[dict] = []

    def flush(sub):
        if not buf:
            return sub
        arr = zeros(field, len(buf), n)
        for i, v in enumerate(buf):
            for k, c in v.items():
                arr[i, k] = c
        buf.clear()
        return span_reduce_array(field, arr, n, start=sub)

    for v in vecs:
        if v:
            buf.append(v)
            if len(buf) >= chunk:
                sub = flush(sub)
    return flush(sub)


def _projected_rank(field: FieldSpec, sub: SubspaceBasis, vecs: Iterable[dict], chunk: int = 2048) -> int:
    """Rank of the images of ``vecs`` in the quotient by ``sub``."""
    n = sub.ambient_dim
    q = n - sub.dim
    if q == 0:
        return 0
    img = empty_subspace(field, q)
    buf: list[dict] = []

    def flush(img):
        if not buf:
            return img
        cols = zeros(field, n, len(buf))
        for j, v in enumerate(buf):
            for k, c in v.items():
                cols[k, j] = c
        buf.clear()
        proj = project_columns(sub, cols)
        return span_reduce_array(field, proj.T.copy(), q, start=img)

    for v in vecs:
        if v:
            buf.append(v)
            if len(buf) >= chunk:
                img = flush(img)
    img = flush(img)
    return img.dim


@dataclass(eq=False)
class CatQuotient:
    cx: CatComplex
    subspaces: list[SubspaceBasis]
    mode: str

    @property
    def field(self) -> FieldSpec:
        return self.cx.field

    def qdims(self) -> list[int]:
        return [self.cx.dims[n] - s.dim for n, s in enumerate(self.subspaces)]

    def rank_out(self, n: int) -> int:
        if n == 0:
            return 0
        return _projected_rank(self.field, self.subspaces[n - 1], (self.cx.d(n, k) for k in range(self.cx.dims[n])))

    def homology(self, up_to: int) -> BettiTable:
        if up_to >= len(self.subspaces) or up_to + 1 > self.cx.top:
            raise ValueError(f"homology up to {up_to} needs U through {up_to} and CH through {up_to + 1}")
        ranks = [self.rank_out(n) for n in range(up_to + 2)]
        qd = self.qdims()
        return BettiTable([(n, qd[n] - ranks[n] - ranks[n + 1]) for n in range(up_to + 1)], self.field.label,
                          f"{self.mode}(CH(C,H))")


def obstruction_vectors(cx: CatComplex, n: int) -> Iterable[dict]:
    for b in range(cx.bc.B.dim):
        for k in range(cx.dims[n + 1]):
            yield cx.commutator(n, b, k)


def coinvariant_vectors(cx: CatComplex, n: int) -> Iterable[dict]:
    B = cx.bc.B
    for b in range(B.dim):
        for k in range(cx.dims[n]):
            v = dict(cx.L(n, b, k))
            v[k] = v.get(k, 0) - B.counit[b]
            yield cx.field.clean(v)


def cat_quotient(bc: BCategoryData, H: BifunctorData, N: int = 2, mode: str = "coinvariant_qch",
                 cx: CatComplex | None = None, check: bool = False, J: CatQuotient | None = None) -> CatQuotient:
    """Quotient by J (``qch``) or by J + coinvariant relations; ``J`` reuses an earlier qch quotient."""
    if mode not in ("qch", "coinvariant_qch"):
        raise ValueError(f"unknown mode {mode!r}")
    cx = cx or build_cat_ch(bc, H, N)
    f = cx.field
    subs = []
    for n in range(N + 1):
        if J is not None and n < len(J.subspaces):
            U = J.subspaces[n]
        else:
            U = _span_sparse(f, obstruction_vectors(cx, n), cx.dims[n])
        if mode == "coinvariant_qch":
            U = _span_sparse(f, coinvariant_vectors(cx, n), cx.dims[n], start=U)
        subs.append(U)
    if check:
        for n in range(1, N + 1):
            for row in subs[n].basis:
                vec = {k: c for k, c in enumerate(row.tolist()) if not f.is_zero(c)}
                img = cx.apply(lambda k: cx.d(n, k), vec)
                arr = zeros(f, 1, cx.dims[n - 1])
                for k, c in img.items():
                    arr[0, k] = c
                if not subs[n - 1].contains_all(arr):
                    raise StabilityViolation(f"d(U_{n}) not contained in U_{n - 1}")
    return CatQuotient(cx, subs, mode)


# ---------------------------------------------------------------------------
# homotopy-equivalence oracles


def _vec_in(field: FieldSpec, sub: SubspaceBasis, vec: dict) -> bool:
    arr = zeros(field, 1, sub.ambient_dim)
    for k, c in vec.items():
        arr[0, k] = c
    return sub.contains_all(arr)


def _check_splitting(bc: BCategoryData, retr: RetractionData, small: list[str]) -> ValidationReport:
    cat = bc.cat
    rep = ValidationReport("retraction")
    rep.check("delta_in_subcategory")
    rep.check("r_after_s_identity")
    rep.check("identity_on_subcategory")
    rep.check("B_invariant")
    for X in bc.objects:
        D = retr.delta[X]
        if D not in small:
            rep.fail("delta_in_subcategory", X, D)
            continue
        if cat.comp(X, D, X, retr.r[X], retr.s[X]) != cat.identities[X]:
            rep.fail("r_after_s_identity", X)
        if X in small and (D != X or retr.r[X] != cat.identities[X] or retr.s[X] != cat.identities[X]):
            rep.fail("identity_on_subcategory", X)
        for b in range(bc.B.dim):
            eps = bc.B.counit[b]
            for vec, (P, Q), nm in ((retr.r[X], (D, X), "r"), (retr.s[X], (X, D), "s")):
                if bc.act(P, Q, b, vec) != bc.field.clean({k: eps * c for k, c in vec.items()}):
                    rep.fail("B_invariant", X, nm, bc.B.alg.basis_names[b])
    return rep


def _check_decomposition(bc: BCategoryData, dec: DecompositionData, small: list[str]) -> ValidationReport:
    cat, f = bc.cat, bc.field
    rep = ValidationReport("decomposition")
    rep.check("components_in_subcategory")
    rep.check("sum_v_u_identity")
    rep.check("u_v_projections")
    rep.check("B_invariant")
    for E in bc.objects:
        comps = dec.components[E]
        acc: dict = {}
        for D, u, v in comps:
            if D not in small:
                rep.fail("components_in_subcategory", E, D)
            accumulate(acc, cat.comp(E, D, E, v, u))
            for b in range(bc.B.dim):
                eps = bc.B.counit[b]
                if bc.act(E, D, b, u) != f.clean({k: eps * c for k, c in u.items()}) or \
                        bc.act(D, E, b, v) != f.clean({k: eps * c for k, c in v.items()}):
                    rep.fail("B_invariant", E, D, bc.B.alg.basis_names[b])
        if f.clean(acc) != cat.identities[E]:
            rep.fail("sum_v_u_identity", E)
        for i, (Di, ui, vi) in enumerate(comps):
            for j, (Dj, uj, vj) in enumerate(comps):
                want = cat.identities[Di] if i == j else {}
                if Di == Dj and cat.comp(Di, E, Dj, uj, vi) != want:
                    rep.fail("u_v_projections", E, i, j)
    return rep


class _MapOnBasis:
    """A linear map between two CatComplexes given on basis vectors."""

    def __init__(self, src: CatComplex, tgt: CatComplex, fn: Callable[[int, int], dict]):
        self.src, self.tgt, self.fn = src, tgt, fn
        self._cache: dict = {}

    def __call__(self, n: int, k: int) -> dict:
        key = (n, k)
        if key not in self._cache:
            self._cache[key] = self.fn(n, k)
        return self._cache[key]

    def vec(self, n: int, v: dict) -> dict:
        acc: dict = {}
        for k, c in v.items():
            accumulate(acc, self(n, k), c)
        return self.src.field.clean(acc)


def inclusion_map(small: CatComplex, big: CatComplex) -> _MapOnBasis:
    def fn(n, k):
        tup, loc = small.decode(n, k)
        return big.encode_vec(n, tup, [{i: 1} for i in loc])
    return _MapOnBasis(small, big, fn)


def _compose3(cat: FiniteLinearCategory, W, X, Y, Z, c: dict, b: dict, a: dict) -> dict:
    """c∘b∘a for a: W→X, b: X→Y, c: Y→Z."""
    return cat.comp(W, Y, Z, c, cat.comp(W, X, Y, b, a))


def cofinal_maps(big: CatComplex, small: CatComplex, retr: RetractionData):
    """M: CH(C) → CH(D) and h_i: CH_n(C) → CH_{n+1}(C)."""
    bc, H = big.bc, big.H
    cat = bc.cat
    dl, r, s = retr.delta, retr.r, retr.s
    f = big.field

    def M(n, k):
        tup, loc = big.decode(n, k)
        h, us = {loc[0]: 1}, loc[1:]
        X0, Xn = tup[0], tup[-1]
        d = [dl[X] for X in tup]
        # s_n ∘ h ∘ r_0 ∈ H(δX₀, δXₙ)
        newh = H.postcompose(d[0], Xn, d[-1], s[Xn], H.precompose(d[0], X0, Xn, h, r[X0]))
        fac = [newh]
        for i in range(1, n + 1):
            fac.append(_compose3(cat, d[i], tup[i], tup[i - 1], d[i - 1], s[tup[i - 1]], {us[i - 1]: 1}, r[tup[i]]))
        return small.encode_vec(n, tuple(d), fac)

    def hmap(i):
        def fn(n, k):
            tup, loc = big.decode(n, k)
            h, us = {loc[0]: 1}, loc[1:]
            X0, Xn = tup[0], tup[-1]
            d = [dl[X] for X in tup]
            newh = H.postcompose(X0, Xn, d[-1], s[Xn], h)
            fac = [newh] + [{u: 1} for u in us[:i]] + [r[tup[i]]]
            for j in range(i + 1, n + 1):
                fac.append(_compose3(cat, d[j], tup[j], tup[j - 1], d[j - 1], s[tup[j - 1]], {us[j - 1]: 1},
                                     r[tup[j]]))
            new_tup = tuple(tup[:i + 1]) + tuple(d[i:])
            return big.encode_vec(n + 1, new_tup, fac)
        return fn

    return _MapOnBasis(big, small, M), hmap


def free_generation_maps(big: CatComplex, small: CatComplex, dec: DecompositionData):
    """M = Σ u^n∘h∘v^0 ⊗ u^{i-1}f_i v^i and h_s = Σ h∘v^0 ⊗ … ⊗ u^s ⊗ f_{s+1} ⊗ …"""
    bc, H = big.bc, big.H
    cat = bc.cat
    comps = dec.components
    f = big.field

    def M(n, k):
        tup, loc = big.decode(n, k)
        h, us = {loc[0]: 1}, loc[1:]
        acc: dict = {}
        for choice in itertools.product(*[range(len(comps[X])) for X in tup]):
            cs = [comps[X][c] for X, c in zip(tup, choice)]
            D = [c[0] for c in cs]
            newh = H.postcompose(D[0], tup[-1], D[-1], cs[-1][1], H.precompose(D[0], tup[0], tup[-1], h, cs[0][2]))
            if not newh:
                continue
            fac = [newh]
            for i in range(1, n + 1):
                fac.append(_compose3(cat, D[i], tup[i], tup[i - 1], D[i - 1], cs[i - 1][1], {us[i - 1]: 1}, cs[i][2]))
            accumulate(acc, small.encode_vec(n, tuple(D), fac))
        return f.clean(acc)

    def hmap(s_):
        def fn(n, k):
            tup, loc = big.decode(n, k)
            h, us = {loc[0]: 1}, loc[1:]
            acc: dict = {}
            for choice in itertools.product(*[range(len(comps[X])) for X in tup[:s_ + 1]]):
                cs = [comps[X][c] for X, c in zip(tup, choice)]
                D = [c[0] for c in cs]
                newh = H.precompose(D[0], tup[0], tup[-1], h, cs[0][2])
                if not newh:
                    continue
                fac = [newh]
                for i in range(1, s_ + 1):
                    fac.append(_compose3(cat, D[i], tup[i], tup[i - 1], D[i - 1], cs[i - 1][1], {us[i - 1]: 1},
                                         cs[i][2]))
                fac.append(cs[s_][1])                # u^s: E_s → D^s
                fac += [{u: 1} for u in us[s_:]]     # f_{s+1} … f_n
                new_tup = tuple(D) + tuple(tup[s_:])
                accumulate(acc, big.encode_vec(n + 1, new_tup, fac))
            return f.clean(acc)
        return fn

    return _MapOnBasis(big, small, M), hmap


def _homotopy_suite(rep: OracleReport, big: CatComplex, small: CatComplex, M: _MapOnBasis, hmap, inc: _MapOnBasis,
                    up_to: int, expected_ends: tuple[str, str]) -> None:
    """Pre-simplicial homotopy identities between id and i∘M on CH_n(big), n ≤ up_to."""
    f = big.field
    H = {}

    def h(i, n, v):
        if (i, n) not in H:
            H[(i, n)] = _MapOnBasis(big, big, lambda nn, k, i=i: hmap(i)(nn, k))
        return H[(i, n)].vec(n, v)

    def face(n, j, v):
        return big.apply(lambda k: big.face(n, j, k), v)

    def iM(n, v):
        return inc.vec(n, M.vec(n, v))

    # M∘i = id
    for n in range(min(up_to, small.top) + 1):
        bad = next((k for k in range(small.dims[n]) if M.vec(n, inc(n, k)) != {k: 1}), None)
        rep.add("M_after_i_identity", n, bad is None, witness={"basis": bad})
    # M is pre-simplicial
    for n in range(1, min(up_to + 1, big.top) + 1):
        bad = None
        for k in range(big.dims[n]):
            for j in range(n + 1):
                if M.vec(n - 1, big.face(n, j, k)) != small.apply(lambda x: small.face(n, j, x), M(n, k)):
                    bad = (k, j)
                    break
            if bad:
                break
        rep.add("M_presimplicial", n, bad is None, witness={"basis_face": bad})
    # homotopy identities
    # which of id / i∘M each end face realises, on every basis vector
    ends = {"d0h0": {"id", "iM"}, "dlast_hn": {"id", "iM"}}
    for n in range(0, min(up_to, big.top - 1) + 1):
        bad = {}
        for k in range(big.dims[n]):
            x = {k: 1}
            hs = [h(i, n, x) for i in range(n + 1)]
            for i in range(n):
                for j in range(n + 1):
                    lhs = h(i, n - 1, face(n, j, x))
                    if j <= i:
                        rhs, key = face(n + 1, j, hs[i + 1]), "h_i d_j = d_j h_{i+1} (j<=i)"
                    else:
                        rhs, key = face(n + 1, j + 1, hs[i]), "h_i d_j = d_{j+1} h_i (j>i)"
                    if lhs != rhs:
                        bad.setdefault(key, (k, i, j))
            for i in range(1, n + 1):
                if face(n + 1, i, hs[i]) != face(n + 1, i, hs[i - 1]):
                    bad.setdefault("d_i h_i = d_i h_{i-1}", (k, i))
            im = iM(n, x)
            for name, val in (("d0h0", face(n + 1, 0, hs[0])), ("dlast_hn", face(n + 1, n + 1, hs[n]))):
                holds = {lab for lab, w in (("id", x), ("iM", im)) if val == w}
                ends[name] &= holds
        for key in ("h_i d_j = d_j h_{i+1} (j<=i)", "h_i d_j = d_{j+1} h_i (j>i)", "d_i h_i = d_i h_{i-1}"):
            rep.add(key, n, key not in bad, witness=bad.get(key))
    roles = [(a, b) for a in sorted(ends["d0h0"]) for b in sorted(ends["dlast_hn"]) if a != b]
    ok_ends = bool(roles)
    rep.add("homotopy_endpoints", None, ok_ends,
            witness={k: sorted(v) for k, v in ends.items()})
    if ok_ends:
        chosen = tuple(expected_ends) if tuple(expected_ends) in roles else roles[0]
        rep.tables["endpoints"] = {"d0h0": chosen[0], "d_{n+1}h_n": chosen[1]}
        if chosen != tuple(expected_ends):
            rep.notes.append(f"endpoint roles swapped: d0h0 = {chosen[0]}, d_(n+1)h_n = {chosen[1]}")


def _equivariance_suite(rep: OracleReport, big: CatComplex, small: CatComplex, M: _MapOnBasis, hmap, up_to: int):
    """L_b commutes with M and every h_i; together with the homotopy identities this keeps J stable."""
    B = big.bc.B
    for n in range(min(up_to, big.top - 1) + 1):
        badM = badh = None
        for b in range(B.dim):
            for k in range(big.dims[n]):
                if badM is None and small.apply(lambda x: small.L(n, b, x), M(n, k)) != \
                        M.vec(n, big.L(n, b, k)):
                    badM = (B.alg.basis_names[b], k)
                for i in range(n + 1):
                    if badh is not None:
                        break
                    hk = hmap(i)(n, k)
                    lhs = big.apply(lambda x: big.L(n + 1, b, x), hk)
                    rhs = big.apply(lambda x: hmap(i)(n, x), big.L(n, b, k))
                    if lhs != rhs:
                        badh = (B.alg.basis_names[b], k, i)
        rep.add("M_B_equivariant", n, badM is None, witness=badM)
        rep.add("h_B_equivariant", n, badh is None, witness=badh)


def _stability_suite(rep: OracleReport, big: CatComplex, small: CatComplex, M: _MapOnBasis, hmap,
                     inc: _MapOnBasis, qb: CatQuotient, qs: CatQuotient, up_to: int):
    """Images of obstruction generators stay inside the obstruction subspaces."""
    f = big.field
    B = big.bc.B
    for n in range(min(up_to, len(qb.subspaces) - 1, len(qs.subspaces) - 1) + 1):
        badM = badh = badi = None
        for b in range(B.dim):
            for k in range(big.dims[n + 1]):
                c = big.commutator(n, b, k)
                if not c:
                    continue
                if badM is None and not _vec_in(f, qs.subspaces[n], M.vec(n, c)):
                    badM = (B.alg.basis_names[b], k)
                if n + 1 < len(qb.subspaces):
                    for i in range(n + 1):
                        if badh is None and not _vec_in(f, qb.subspaces[n + 1], big.apply(lambda x: hmap(i)(n, x), c)):
                            badh = (B.alg.basis_names[b], k, i)
            for k in range(small.dims[n + 1]):
                c = small.commutator(n, b, k)
                if c and badi is None and not _vec_in(f, qb.subspaces[n], inc.vec(n, c)):
                    badi = (B.alg.basis_names[b], k)
        rep.add("M_preserves_J", n, badM is None, witness=badM)
        rep.add("i_preserves_J", n, badi is None, witness=badi)
        if n + 1 < len(qb.subspaces):
            rep.add("h_preserves_J", n, badh is None, witness=badh)


def cofinality_oracle(bc_big: BCategoryData, bc_small: BCategoryData, H: BifunctorData, retr: RetractionData,
                      N: int = 2, homotopy_degree: int | None = None) -> OracleReport:
    pre = _check_splitting(bc_big, retr, bc_small.objects)
    if not pre.ok:
        raise ValidationFailure(pre)
    return _equivalence_oracle("cofinal", bc_big, bc_small, H, lambda big, small: cofinal_maps(big, small, retr),
                               N, homotopy_degree, expected_ends=("iM", "id"))


def free_generation_oracle(bc_E: BCategoryData, bc_D: BCategoryData, H: BifunctorData, dec: DecompositionData,
                           N: int = 2, homotopy_degree: int | None = None) -> OracleReport:
    pre = _check_decomposition(bc_E, dec, bc_D.objects)
    if not pre.ok:
        raise ValidationFailure(pre)
    return _equivalence_oracle("free-gen", bc_E, bc_D, H, lambda big, small: free_generation_maps(big, small, dec),
                               N, homotopy_degree, expected_ends=("iM", "id"))


def _equivalence_oracle(name, bc_big, bc_small, H, maps, N, homotopy_degree, expected_ends) -> OracleReport:
    f = bc_big.field
    rep = OracleReport(name, f.label)
    hd = N if homotopy_degree is None else homotopy_degree
    Hs = restrict_bifunctor(H, bc_small.objects)
    big = build_cat_ch(bc_big, H, N)
    small = build_cat_ch(bc_small, Hs, N)
    M, hmap = maps(big, small)
    inc = inclusion_map(small, big)
    _homotopy_suite(rep, big, small, M, hmap, inc, hd, expected_ends)
    _equivariance_suite(rep, big, small, M, hmap, hd)
    qb = cat_quotient(bc_big, H, N, "qch", cx=big)
    qs = cat_quotient(bc_small, Hs, N, "qch", cx=small)
    _stability_suite(rep, big, small, M, hmap, inc, qb, qs, min(hd, N - 1))
    for mode in ("qch", "coinvariant_qch"):
        if mode == "coinvariant_qch":
            qb = cat_quotient(bc_big, H, N, mode, cx=big, J=qb)
            qs = cat_quotient(bc_small, Hs, N, mode, cx=small, J=qs)
        tb, ts = qb.homology(N), qs.homology(N)
        rep.tables[f"{mode}_big"] = tb.dims()
        rep.tables[f"{mode}_small"] = ts.dims()
        rep.add(f"{mode}_tables_equal", None, tb.dims() == ts.dims(), witness={"big": tb.dims(), "small": ts.dims()})
    return rep


# ---------------------------------------------------------------------------
# one object


ONE_OBJECT_CONVENTION = ("Hom(A,A) ≅ A by left multiplication (direct algebra); "
                         "h⊗u₁⊗…⊗uₙ ↦ (uₙ,…,u₁,h) identifies CH(*,Hom) with CH(A^op,A^op) "
                         "and the diagonal action with that of B^cop")


def one_object_comparison(ma: ModuleAlgebra, N: int = 3) -> OracleReport:
    """Bit-exact agreement of the one-object category complex with the algebra-level complex."""
    from . import hhcomplex as hc
    from .modact import opposite_module_algebra, regular_bimodule

    f = ma.field
    rep = OracleReport("one-object", f.label)
    rep.notes.append(ONE_OBJECT_CONVENTION)
    bc, H = build_module_category(ma, [1])
    rep.add("hom_is_algebra", None, bc.cat.compose[("A", "A", "A")] == ma.A.mult,
            note="composition table equals the multiplication table of A")
    cx = build_cat_ch(bc, H, N)
    op = opposite_module_algebra(ma)
    vop = regular_bimodule(op)
    ch = hc.build_ch(op, vop, N)
    dA = ma.A.dim
    perms = []
    for n in range(N + 2):
        shape = [dA] * (n + 1)
        perm = np.array([encode(tuple(reversed(decode(k, shape)[1:])) + (decode(k, shape)[0],), shape)
                         for k in range(dA ** (n + 1))], dtype=np.int64)
        perms.append(perm)
    rep.add("dimensions", None, cx.dims == ch.cx.dims, witness={"category": cx.dims, "algebra": ch.cx.dims})
    for n in range(1, N + 2):
        for j in range(n + 1):
            m = assemble(f, cx.dims[n - 1], cx.dims[n], lambda k: cx.face(n, j, k))
            alg = ch.cx.faces[n][j][np.ix_(perms[n - 1], perms[n])]
            ok = bool(np.all(m == alg)) if f.dtype is not object else m.tolist() == alg.tolist()
            if not ok:
                rep.add("faces_equal", n, False, witness={"face": j})
                break
        else:
            rep.add("faces_equal", n, True)
    for n in range(N + 1):
        bad = None
        for b in range(ma.B.dim):
            m = assemble(f, cx.dims[n], cx.dims[n], lambda k: cx.L(n, b, k))
            alg = ch.L(n, b)[np.ix_(perms[n], perms[n])]
            if m.tolist() != alg.tolist():
                bad = ma.B.alg.basis_names[b]
                break
        rep.add("diagonal_action_equal", n, bad is None, witness=bad)
    for mode in ("qch", "coinvariant_qch"):
        q = cat_quotient(bc, H, N, mode, cx=cx)
        qc = hc.quotient_complex(op, vop, N, mode=mode, ch=ch, check=False)
        for n, (qa, qb) in enumerate(zip(q.subspaces, qc.subspaces)):
            # the category subspace, transported to algebra coordinates, must equal the algebra one
            moved = zeros(f, qa.dim, qa.ambient_dim)
            moved[:, perms[n]] = qa.basis
            ok = qa.dim == qb.dim and qb.contains_all(moved)
            rep.add(f"{mode}_subspace_equal", n, ok, witness={"category": qa.dim, "algebra": qb.dim})
        tc = q.homology(N)
        ta = hc.homology_dims(qc, N)
        rep.tables[f"{mode}_category"] = tc.dims()
        rep.tables[f"{mode}_algebra_op_cop"] = ta.dims()
        rep.add(f"{mode}_homology_equal", None, tc.dims() == ta.dims())
    return rep
