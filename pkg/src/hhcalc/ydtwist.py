"""Yetter–Drinfeld modules and bifunctors twisted by them.

For a YD module M and an equivariant bifunctor H, M⋉H has spaces M⊗H(X,Y)
(M index slow).  Pre-composition is untwisted, post-composition goes through
the coaction:

    (m⊗h)∘α = m⊗(h∘α),    β∘(m⊗h) = m₍₀₎⊗(S⁻¹(m₍₋₁₎)β)∘h,    b(m⊗h) = b₍₁₎m⊗b₍₂₎h.

Post-composition is the side carrying the first coproduct leg in
b(β∘h∘α) = b₍₁₎β∘b₍₂₎h∘b₍₃₎α, which is what makes the YD condition the
right compatibility.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .chain import BettiTable, OracleReport
from .errors import ShapeError, ValidationFailure
from .exactfield import FieldSpec
from .hopfcore import HopfData, ValidationReport, accumulate, iterated_coproduct
from .lincat import (BCategoryData, BifunctorData, CatQuotient, build_cat_ch, build_module_category, cat_quotient,
                     free_generation_oracle, full_subcategory, restrict_bifunctor, standard_decomposition,
                     validate_bifunctor)
from .modact import ModuleAlgebra, adjoint_action


@dataclass(eq=False)
class YDModule:
    field: FieldSpec
    basis_names: list[str]
    action: list[list[dict]]     # action[b][m]
    coaction: list[list[tuple]]  # coaction[m] = [(c, b, m'), …] for m ↦ Σ c b⊗m'
    name: str = "M"

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def act(self, b: int, x: dict) -> dict:
        acc: dict = {}
        for i, c in x.items():
            accumulate(acc, self.action[b][i], c)
        return self.field.clean(acc)

    def coact(self, x: dict) -> dict:
        """ρ(x) keyed by (B index, M index)."""
        acc: dict = {}
        for i, a in x.items():
            for c, b, j in self.coaction[i]:
                acc[(b, j)] = acc.get((b, j), 0) + a * c
        return self.field.clean(acc)


def _check_shapes(B: HopfData, m: YDModule) -> None:
    if len(m.action) != B.dim or any(len(r) != m.dim for r in m.action):
        raise ShapeError(f"{m.name}.action: expected {B.dim} rows of {m.dim} vectors")
    if len(m.coaction) != m.dim:
        raise ShapeError(f"{m.name}.coaction: expected {m.dim} entries")
    for i, row in enumerate(m.coaction):
        for t in row:
            if len(t) != 3 or not (0 <= t[1] < B.dim) or not (0 <= t[2] < m.dim):
                raise ShapeError(f"{m.name}.coaction[{i}]: bad term {t!r}")


def validate_yd(B: HopfData, m: YDModule) -> ValidationReport:
    B.require_antipode()
    _check_shapes(B, m)
    f = m.field
    rep = ValidationReport(f"YD module {m.name}")
    Bm = B.alg
    rep.check("module_associativity")
    rep.check("module_unit")
    for b1, b2, i in itertools.product(range(B.dim), range(B.dim), range(m.dim)):
        lhs = m.act(b1, m.action[b2][i])
        acc: dict = {}
        for k, c in Bm.mult[b1][b2].items():
            accumulate(acc, m.action[k][i], c)
        if lhs != f.clean(acc):
            rep.fail("module_associativity", Bm.basis_names[b1], Bm.basis_names[b2], m.basis_names[i])
    for i in range(m.dim):
        acc = {}
        for k, c in Bm.unit.items():
            accumulate(acc, m.action[k][i], c)
        if f.clean(acc) != {i: 1}:
            rep.fail("module_unit", m.basis_names[i])
    rep.check("coassociativity")
    rep.check("counit")
    for i in range(m.dim):
        lhs: dict = {}   # (Δ⊗id)ρ
        rhs: dict = {}   # (id⊗ρ)ρ
        cu: dict = {}
        for c, b, j in m.coaction[i]:
            for c2, p, q in B.comult[b]:
                lhs[(p, q, j)] = lhs.get((p, q, j), 0) + c * c2
            for c2, b2, j2 in m.coaction[j]:
                rhs[(b, b2, j2)] = rhs.get((b, b2, j2), 0) + c * c2
            cu[j] = cu.get(j, 0) + c * B.counit[b]
        if f.clean(lhs) != f.clean(rhs):
            rep.fail("coassociativity", m.basis_names[i])
        if f.clean(cu) != {i: 1}:
            rep.fail("counit", m.basis_names[i])
    rep.check("yd_condition")
    cop3 = iterated_coproduct(B, 3).result
    for b, i in itertools.product(range(B.dim), range(m.dim)):
        lhs = m.coact(m.action[b][i])
        rhs: dict = {}
        for (p, q, r), c in cop3[b].items():
            Sr = B.antipode[r]
            for c2, bm, j in m.coaction[i]:
                left = Bm.mul(Bm.mul({p: 1}, {bm: 1}), Sr)
                right = m.action[q][j]
                for x, cx_ in left.items():
                    for y, cy in right.items():
                        rhs[(x, y)] = rhs.get((x, y), 0) + c * c2 * cx_ * cy
        if lhs != f.clean(rhs):
            rep.fail("yd_condition", Bm.basis_names[b], m.basis_names[i])
    return rep


# ---------------------------------------------------------------------------
# builtins


def trivial_yd(B: HopfData) -> YDModule:
    unit = next(iter(B.alg.unit)) if len(B.alg.unit) == 1 else None
    if unit is None or B.alg.unit[unit] != 1:
        raise ValueError("trivial YD module needs the unit to be a basis vector")
    return YDModule(B.field, ["1"], [[{0: c} if (c := B.field.norm(B.counit[b])) != 0 else {}]
                                     for b in range(B.dim)], [[(1, unit, 0)]], name="k")


def grouplike_yd(B: HopfData, g: int) -> YDModule:
    """k with trivial action and coaction 1 ↦ g⊗1."""
    m = trivial_yd(B)
    m.coaction = [[(1, g, 0)]]
    m.name = f"k_{B.alg.basis_names[g]}"
    return m


def adjoint_yd(B: HopfData) -> YDModule:
    """B with adjoint action b₍₁₎xS(b₍₂₎) and coaction Δ."""
    ad = adjoint_action(B)
    return YDModule(B.field, list(B.alg.basis_names), ad.action, [list(B.comult[i]) for i in range(B.dim)],
                    name=f"{B.name}_ad")


def yd_from_dense(B: HopfData, names, action, coaction, name: str = "M") -> YDModule:
    f = B.field
    n = len(names)
    if len(action) != B.dim or any(len(r) != n for r in action):
        raise ShapeError(f"yd.action: expected {B.dim}x{n} vectors")
    act = []
    for b, row in enumerate(action):
        out = []
        for i, vec in enumerate(row):
            if len(vec) != n:
                raise ShapeError(f"yd.action[{b}][{i}]: expected length {n}")
            out.append(f.clean({k: f(x) for k, x in enumerate(vec)}))
        act.append(out)
    co = []
    for i, row in enumerate(coaction):
        terms = []
        for t in row:
            if len(t) != 3:
                raise ShapeError(f"yd.coaction[{i}]: terms are [coeff, b, m]")
            terms.append((f(t[0]), int(t[1]), int(t[2])))
        co.append(terms)
    m = YDModule(f, list(names), act, co, name=name)
    _check_shapes(B, m)
    return m


# ---------------------------------------------------------------------------
# twisting


@dataclass(eq=False)
class TwistedBifunctor:
    bifunctor: BifunctorData
    m: YDModule
    report: ValidationReport | None

    def index(self, H: BifunctorData, X, Y, mi: int, hi: int) -> int:
        return mi * H.dims[(X, Y)] + hi


def twist_bifunctor(bc: BCategoryData, m: YDModule, H: BifunctorData, validate: bool = True,
                    twist_side: str = "post") -> TwistedBifunctor:
    """M⋉H.  ``twist_side="pre"`` moves the coaction to pre-composition; it exists for negative tests."""
    B = bc.B
    B.require_antipode(inverse=True)
    f = bc.field
    dm = m.dim
    dims = {k: dm * d for k, d in H.dims.items()}

    def sinv_act(X, Y, bm: int, vec_idx: int) -> dict:
        acc: dict = {}
        for k, c in B.antipode_inv[bm].items():
            accumulate(acc, bc.action[(X, Y)][k][vec_idx], c)
        return f.clean(acc)

    def lift(mvec: dict, hvec: dict, dh: int) -> dict:
        out: dict = {}
        for i, a in mvec.items():
            for j, c in hvec.items():
                out[i * dh + j] = out.get(i * dh + j, 0) + a * c
        return f.clean(out)

    pre, post, act = {}, {}, {}
    for (W, X, Y), tab in H.pre.items():
        dh = H.dims[(X, Y)]
        dout = H.dims[(W, Y)]
        rows = []
        for mh in range(dm * dh):
            mi, hi = divmod(mh, dh)
            row = []
            for al in range(len(tab[hi])):
                if twist_side == "post":
                    row.append(lift({mi: 1}, tab[hi][al], dout))
                else:
                    acc: dict = {}
                    for c, bm, mj in m.coaction[mi]:
                        accumulate(acc, lift({mj: 1}, H.precompose(W, X, Y, {hi: 1}, sinv_act(W, X, bm, al)),
                                             dout), c)
                    row.append(f.clean(acc))
            rows.append(row)
        pre[(W, X, Y)] = rows
    for (X, Y, Z), tab in H.post.items():
        dh = H.dims[(X, Y)]
        dout = H.dims[(X, Z)]
        rows = []
        for be in range(len(tab)):
            row = []
            for mh in range(dm * dh):
                mi, hi = divmod(mh, dh)
                if twist_side == "post":
                    acc = {}
                    for c, bm, mj in m.coaction[mi]:
                        accumulate(acc, lift({mj: 1}, H.postcompose(X, Y, Z, sinv_act(Y, Z, bm, be), {hi: 1}),
                                             dout), c)
                    row.append(f.clean(acc))
                else:
                    row.append(lift({mi: 1}, tab[be][hi], dout))
            rows.append(row)
        post[(X, Y, Z)] = rows
    for (X, Y), tab in H.act.items():
        dh = H.dims[(X, Y)]
        rows = []
        for b in range(B.dim):
            row = []
            for mh in range(dm * dh):
                mi, hi = divmod(mh, dh)
                acc = {}
                for c, p, q in B.comult[b]:
                    accumulate(acc, lift(m.action[p][mi], tab[q][hi], dh), c)
                row.append(f.clean(acc))
            rows.append(row)
        act[(X, Y)] = rows
    tb = BifunctorData(f, dims, pre, post, act, name=f"{m.name}⋉{H.name}")
    rep = None
    if validate:
        rep = validate_bifunctor(bc, tb)
        if not rep.ok:
            raise ValidationFailure(rep)
    return TwistedBifunctor(tb, m, rep)


def twisted_complex(ma: ModuleAlgebra, m: YDModule, N: int = 3, ranks: list[int] | None = None,
                    mode: str = "coinvariant_qch", validate: bool = True) -> tuple[CatQuotient, BettiTable]:
    """Quotient of CH(C, M⋉Hom) on the module category with the given ranks (default the one-object case)."""
    ma.B.require_antipode(inverse=True)
    bc, H = build_module_category(ma, ranks or [1])
    if validate:
        rep = validate_yd(ma.B, m)
        if not rep.ok:
            raise ValidationFailure(rep)
    tw = twist_bifunctor(bc, m, H, validate=validate)
    q = cat_quotient(bc, tw.bifunctor, N, mode)
    t = q.homology(N)
    t.provenance = f"{mode}(CH(*, {m.name}⋉Hom))"
    return q, t


def trivial_twist_identity(ma: ModuleAlgebra, N: int = 3, ranks: list[int] | None = None) -> OracleReport:
    """For M = k the twisted complex is the untwisted one: same faces, same diagonal action."""
    f = ma.field
    rep = OracleReport("trivial-twist", f.label)
    bc, H = build_module_category(ma, ranks or [1])
    tw = twist_bifunctor(bc, trivial_yd(ma.B), H).bifunctor
    for key in ("pre", "post", "act"):
        rep.add(f"structure_{key}_equal", None, getattr(tw, key) == getattr(H, key))
    a, b = build_cat_ch(bc, H, N), build_cat_ch(bc, tw, N)
    rep.add("dimensions", None, a.dims == b.dims, witness={"untwisted": a.dims, "twisted": b.dims})
    for n in range(1, N + 2):
        bad = next(((j, k) for k in range(a.dims[n]) for j in range(n + 1) if a.face(n, j, k) != b.face(n, j, k)),
                   None)
        rep.add("faces_equal", n, bad is None, witness=bad)
    for n in range(N + 1):
        bad = next(((bb, k) for bb in range(ma.B.dim) for k in range(a.dims[n]) if a.L(n, bb, k) != b.L(n, bb, k)),
                   None)
        rep.add("diagonal_action_equal", n, bad is None, witness=bad)
    return rep


def twisted_morita_oracle(ma: ModuleAlgebra, m: YDModule, N: int = 1, big: int = 2,
                          homotopy_degree: int | None = None) -> OracleReport:
    """Free generation of {A, A^big} by {A} with the twisted coefficient bifunctor."""
    bc, H = build_module_category(ma, [1, big])
    tw = twist_bifunctor(bc, m, H).bifunctor
    one = full_subcategory(bc, ["A"])
    rep = free_generation_oracle(bc, one, tw, standard_decomposition(ma, big), N=N, homotopy_degree=homotopy_degree)
    rep.name = f"twisted-morita({m.name})"
    return rep


__all__ = ["YDModule", "TwistedBifunctor", "validate_yd", "trivial_yd", "grouplike_yd", "adjoint_yd", "yd_from_dense",
           "twist_bifunctor", "twisted_complex", "trivial_twist_identity", "twisted_morita_oracle",
           "restrict_bifunctor"]
