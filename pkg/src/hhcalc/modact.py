"""Module algebras, equivariant bimodules and the crossed product A^e⋊B."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import ShapeError
from .exactfield import FieldSpec, Matrix, SubspaceBasis, kernel_basis, vectors_to_array, zeros
from .hopfcore import (HopfData, StructureAlgebra, ValidationReport, accumulate, bilinear, hopf_cop, dense_to_sparse,
                       iterated_coproduct, validate_algebra)


def act_table(field: FieldSpec, table, g: dict, x: dict) -> dict:
    """Bilinear action ``g·x`` from a table ``table[g_i][x_j] -> vec``."""
    return bilinear(field, table, g, x)


@dataclass(eq=False)
class ModuleAlgebra:
    B: HopfData
    A: StructureAlgebra
    action: list[list[dict]]  # action[b][a]
    name: str = "A"

    @property
    def field(self) -> FieldSpec:
        return self.A.field

    def act(self, b: dict, a: dict) -> dict:
        return bilinear(self.field, self.action, b, a)

    def act_basis(self, bi: int, a: dict) -> dict:
        acc: dict = {}
        row = self.action[bi]
        for i, c in a.items():
            accumulate(acc, row[i], c)
        return self.field.clean(acc)


@dataclass(eq=False)
class EquivariantBimodule:
    field: FieldSpec
    basis_names: list[str]
    left_A: list[list[dict]]   # left_A[a][v]
    right_A: list[list[dict]]  # right_A[v][a]
    left_B: list[list[dict]]   # left_B[b][v]
    name: str = "V"

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def lmul(self, a: dict, v: dict) -> dict:
        return bilinear(self.field, self.left_A, a, v)

    def rmul(self, v: dict, a: dict) -> dict:
        return bilinear(self.field, self.right_A, v, a)

    def bact(self, b: dict, v: dict) -> dict:
        return bilinear(self.field, self.left_B, b, v)

    def bact_basis(self, bi: int, v: dict) -> dict:
        acc: dict = {}
        row = self.left_B[bi]
        for i, c in v.items():
            accumulate(acc, row[i], c)
        return self.field.clean(acc)


def opposite_module_algebra(ma: ModuleAlgebra) -> ModuleAlgebra:
    """A^op as a B^cop-module algebra through the same action maps."""
    return ModuleAlgebra(hopf_cop(ma.B), ma.A.opposite(), ma.action, name=f"{ma.name}^op")


def regular_bimodule(ma: ModuleAlgebra) -> EquivariantBimodule:
    A = ma.A
    n = A.dim
    mult = [[dict(A.mult[i][j]) for j in range(n)] for i in range(n)]
    return EquivariantBimodule(ma.field, list(A.basis_names), mult, [[dict(x) for x in r] for r in mult],
                               [[dict(x) for x in r] for r in ma.action], name=ma.name)


def character_bimodule(ma: ModuleAlgebra, chi: list) -> EquivariantBimodule:
    """One-dimensional V = k with a·v = χ(a)v = v·a and b·v = ε(b)v."""
    f = ma.field
    chi = [f(c) for c in chi]
    left = [[f.clean({0: chi[a]})] for a in range(ma.A.dim)]
    right = [[f.clean({0: chi[a]}) for a in range(ma.A.dim)]]
    lb = [[f.clean({0: ma.B.counit[b]})] for b in range(ma.B.dim)]
    return EquivariantBimodule(f, ["v"], left, right, lb, name="k_chi")


# ---------------------------------------------------------------------------
# validation


def validate_module_algebra(ma: ModuleAlgebra) -> ValidationReport:
    B, A, f = ma.B, ma.A, ma.field
    rep = ValidationReport(f"module_algebra({ma.name})")
    if len(ma.action) != B.dim or any(len(r) != A.dim for r in ma.action):
        raise ShapeError(f"action must be a {B.dim}x{A.dim} table of vectors")
    bn, an = B.alg.basis_names, A.basis_names
    rep.check("module_associativity")
    for b1, b2, a in itertools.product(range(B.dim), range(B.dim), range(A.dim)):
        lhs = ma.act_basis(b1, ma.action[b2][a])
        rhs = ma.act(B.alg.mult[b1][b2], {a: 1})
        if lhs != rhs:
            rep.fail("module_associativity", bn[b1], bn[b2], an[a])
    rep.check("module_unit")
    for a in range(A.dim):
        if ma.act(B.alg.unit, {a: 1}) != {a: 1}:
            rep.fail("module_unit", "1_B", an[a])
    rep.check("leibniz")
    for b, a1, a2 in itertools.product(range(B.dim), range(A.dim), range(A.dim)):
        lhs = ma.act_basis(b, A.mult[a1][a2])
        acc: dict = {}
        for c, p, q in B.comult[b]:
            accumulate(acc, A.mul(ma.action[p][a1], ma.action[q][a2]), c)
        if lhs != f.clean(acc):
            rep.fail("leibniz", bn[b], an[a1], an[a2])
    rep.check("unitality")
    for b in range(B.dim):
        if ma.act_basis(b, A.unit) != f.clean({k: B.counit[b] * c for k, c in A.unit.items()}):
            rep.fail("unitality", bn[b], "1_A")
    return rep


def validate_equivariant_bimodule(ma: ModuleAlgebra, v: EquivariantBimodule) -> ValidationReport:
    B, A, f = ma.B, ma.A, ma.field
    rep = ValidationReport(f"equivariant_bimodule({v.name})")
    n = v.dim
    if (len(v.left_A) != A.dim or any(len(r) != n for r in v.left_A)
            or len(v.right_A) != n or any(len(r) != A.dim for r in v.right_A)
            or len(v.left_B) != B.dim or any(len(r) != n for r in v.left_B)):
        raise ShapeError(f"{v.name}: action tables have the wrong shape")
    an, bn, vn = A.basis_names, B.alg.basis_names, v.basis_names
    rep.check("left_associativity")
    rep.check("right_associativity")
    rep.check("bimodule_compatibility")
    for a1, a2, x in itertools.product(range(A.dim), range(A.dim), range(n)):
        if v.lmul({a1: 1}, v.left_A[a2][x]) != v.lmul(A.mult[a1][a2], {x: 1}):
            rep.fail("left_associativity", an[a1], an[a2], vn[x])
        if v.rmul(v.right_A[x][a1], {a2: 1}) != v.rmul({x: 1}, A.mult[a1][a2]):
            rep.fail("right_associativity", vn[x], an[a1], an[a2])
        if v.rmul(v.left_A[a1][x], {a2: 1}) != v.lmul({a1: 1}, v.right_A[x][a2]):
            rep.fail("bimodule_compatibility", an[a1], vn[x], an[a2])
    rep.check("left_unit")
    rep.check("right_unit")
    for x in range(n):
        if v.lmul(A.unit, {x: 1}) != {x: 1}:
            rep.fail("left_unit", "1_A", vn[x])
        if v.rmul({x: 1}, A.unit) != {x: 1}:
            rep.fail("right_unit", vn[x], "1_A")
    rep.check("B_module_associativity")
    for b1, b2, x in itertools.product(range(B.dim), range(B.dim), range(n)):
        if v.bact_basis(b1, v.left_B[b2][x]) != v.bact(B.alg.mult[b1][b2], {x: 1}):
            rep.fail("B_module_associativity", bn[b1], bn[b2], vn[x])
    rep.check("B_module_unit")
    for x in range(n):
        if v.bact(B.alg.unit, {x: 1}) != {x: 1}:
            rep.fail("B_module_unit", "1_B", vn[x])
    rep.check("left_equivariance")
    rep.check("right_equivariance")
    for b, a, x in itertools.product(range(B.dim), range(A.dim), range(n)):
        lhs = v.bact_basis(b, v.left_A[a][x])
        acc: dict = {}
        for c, p, q in B.comult[b]:
            accumulate(acc, v.lmul(ma.action[p][a], v.left_B[q][x]), c)
        if lhs != f.clean(acc):
            rep.fail("left_equivariance", bn[b], an[a], vn[x])
        lhs = v.bact_basis(b, v.right_A[x][a])
        acc = {}
        for c, p, q in B.comult[b]:
            accumulate(acc, v.rmul(v.left_B[p][x], ma.action[q][a]), c)
        if lhs != f.clean(acc):
            rep.fail("right_equivariance", bn[b], vn[x], an[a])
    return rep


# ---------------------------------------------------------------------------
# adjoint action


def adjoint_action(B: HopfData, A: StructureAlgebra | None = None, embedding: list[dict] | None = None,
                   name: str = "ad") -> ModuleAlgebra:
    """``ad_b(a) = b₍₁₎ a S(b₍₂₎)`` for A receiving an algebra map from B.

    ``embedding[i]`` is the image of the i-th basis element of B in A; the
    B-bimodule structure on A is multiplication through it.  Defaults to
    A = B with the identity embedding.
    """
    B.require_antipode()
    if A is None:
        A = B.alg
        embedding = [{i: 1} for i in range(B.dim)]
    f = A.field
    emb = lambda x: bilinear(f, [[e] for e in embedding], x, {0: 1})  # noqa: E731
    action = []
    for b in range(B.dim):
        row = []
        for a in range(A.dim):
            acc: dict = {}
            for c, p, q in B.comult[b]:
                accumulate(acc, A.mul(A.mul(embedding[p], {a: 1}), emb(B.antipode[q])), c)
            row.append(f.clean(acc))
        action.append(row)
    return ModuleAlgebra(B, A, action, name=name)


# ---------------------------------------------------------------------------
# crossed product


@dataclass(eq=False)
class CrossedProduct:
    ma: ModuleAlgebra
    E: StructureAlgebra

    def index(self, a: int, a2: int, b: int) -> int:
        dA, dB = self.ma.A.dim, self.ma.B.dim
        return (a * dA + a2) * dB + b

    def triple(self, e: int) -> tuple[int, int, int]:
        dA, dB = self.ma.A.dim, self.ma.B.dim
        b = e % dB
        rest = e // dB
        return rest // dA, rest % dA, b

    @property
    def dim(self) -> int:
        return self.E.dim


def crossed_product(ma: ModuleAlgebra) -> CrossedProduct:
    """A⊗A^op⊗B with (a₁⊗a₁'⊗b)(a₂⊗a₂'⊗b') = a₁b₍₁₎(a₂) ⊗ b₍₃₎(a₂')a₁' ⊗ b₍₂₎b'."""
    A, B, f = ma.A, ma.B, ma.field
    dA, dB = A.dim, B.dim
    cop3 = iterated_coproduct(B, 3).result
    idx = lambda a, a2, b: (a * dA + a2) * dB + b  # noqa: E731
    names = [f"{A.basis_names[a]}|{A.basis_names[a2]}|{B.alg.basis_names[b]}"
             for a, a2, b in itertools.product(range(dA), range(dA), range(dB))]
    # cache the pieces that depend only on (b, a2) / (b, a2')
    n = len(names)
    mult = [[None] * n for _ in range(n)]
    for a1, a1p, b1 in itertools.product(range(dA), range(dA), range(dB)):
        i = idx(a1, a1p, b1)
        for a2, a2p, b2 in itertools.product(range(dA), range(dA), range(dB)):
            acc: dict = {}
            for (p, q, r), c in cop3[b1].items():
                left = A.mul({a1: 1}, ma.action[p][a2])
                if not left:
                    continue
                right = A.mul(ma.action[r][a2p], {a1p: 1})
                if not right:
                    continue
                mid = B.alg.mult[q][b2]
                for x, cx in left.items():
                    for y, cy in right.items():
                        for z, cz in mid.items():
                            k = idx(x, y, z)
                            acc[k] = acc.get(k, 0) + c * cx * cy * cz
            mult[i][idx(a2, a2p, b2)] = f.clean(acc)
    unit: dict = {}
    for x, cx in A.unit.items():
        for y, cy in A.unit.items():
            for z, cz in B.alg.unit.items():
                unit[idx(x, y, z)] = cx * cy * cz
    E = StructureAlgebra(f, names, mult, f.clean(unit))
    return CrossedProduct(ma, E)


def crossed_product_via_ops(ma: ModuleAlgebra, e1: tuple, e2: tuple) -> dict:
    """Product of two basis triples straight from the formula (oracle)."""
    A, B, f = ma.A, ma.B, ma.field
    dA, dB = A.dim, B.dim
    (a1, a1p, b1), (a2, a2p, b2) = e1, e2
    acc: dict = {}
    for c, p, rest in B.comult[b1]:
        for c2, q, r in B.comult[rest]:
            left = A.mul({a1: 1}, ma.act({p: 1}, {a2: 1}))
            right = A.mul(ma.act({r: 1}, {a2p: 1}), {a1p: 1})
            mid = B.alg.mul({q: 1}, {b2: 1})
            for x, cx in left.items():
                for y, cy in right.items():
                    for z, cz in mid.items():
                        k = (x * dA + y) * dB + z
                        acc[k] = acc.get(k, 0) + c * c2 * cx * cy * cz
    return f.clean(acc)


# ---------------------------------------------------------------------------
# E-modules


def left_E_action(cp: CrossedProduct, v: EquivariantBimodule) -> list[list[dict]]:
    """``(a₁⊗a₂⊗b)(v) = a₁ b(v) a₂`` as a table ``[e][v]``."""
    out = []
    for e in range(cp.dim):
        a1, a2, b = cp.triple(e)
        row = []
        for x in range(v.dim):
            row.append(v.rmul(v.lmul({a1: 1}, v.left_B[b][x]), {a2: 1}))
        out.append(row)
    return out


def decompose_E_action(cp: CrossedProduct, table, dim_v: int, names=None) -> EquivariantBimodule:
    """Recover (left_A, right_A, left_B) from a left E-module table."""
    A, B, f = cp.ma.A, cp.ma.B, cp.ma.field

    def through(vec_e: dict, x: int) -> dict:
        return bilinear(f, table, vec_e, {x: 1})

    def embed(a: dict | None = None, a2: dict | None = None, b: dict | None = None) -> dict:
        a = a if a is not None else A.unit
        a2 = a2 if a2 is not None else A.unit
        b = b if b is not None else B.alg.unit
        acc: dict = {}
        for i, ci in a.items():
            for j, cj in a2.items():
                for k, ck in b.items():
                    idx = cp.index(i, j, k)
                    acc[idx] = acc.get(idx, 0) + ci * cj * ck
        return f.clean(acc)

    left_A = [[through(embed(a={a: 1}), x) for x in range(dim_v)] for a in range(A.dim)]
    right_A = [[through(embed(a2={a: 1}), x) for a in range(A.dim)] for x in range(dim_v)]
    left_B = [[through(embed(b={b: 1}), x) for x in range(dim_v)] for b in range(B.dim)]
    return EquivariantBimodule(f, list(names or [f"v{i}" for i in range(dim_v)]), left_A, right_A, left_B)


def validate_left_module(alg: StructureAlgebra, table, dim_v: int, name: str = "E-module") -> ValidationReport:
    f = alg.field
    rep = ValidationReport(name)
    rep.check("associativity")
    for e1, e2, x in itertools.product(range(alg.dim), range(alg.dim), range(dim_v)):
        lhs = bilinear(f, table, {e1: 1}, table[e2][x])
        rhs = bilinear(f, table, alg.mult[e1][e2], {x: 1})
        if lhs != rhs:
            rep.fail("associativity", alg.basis_names[e1], alg.basis_names[e2], x)
    rep.check("unit")
    for x in range(dim_v):
        if bilinear(f, table, alg.unit, {x: 1}) != {x: 1}:
            rep.fail("unit", x)
    return rep


def validate_right_module(alg: StructureAlgebra, table, dim_v: int, name: str = "right E-module") -> ValidationReport:
    """``table[v][e]``; checks (v·e₁)·e₂ = v·(e₁e₂)."""
    f = alg.field
    rep = ValidationReport(name)
    rep.check("associativity")
    for x, e1, e2 in itertools.product(range(dim_v), range(alg.dim), range(alg.dim)):
        lhs = bilinear(f, table, table[x][e1], {e2: 1})
        rhs = bilinear(f, table, {x: 1}, alg.mult[e1][e2])
        if lhs != rhs:
            rep.fail("associativity", x, alg.basis_names[e1], alg.basis_names[e2])
    rep.check("unit")
    for x in range(dim_v):
        if bilinear(f, table, {x: 1}, alg.unit) != {x: 1}:
            rep.fail("unit", x)
    return rep


def vop_right_action(cp: CrossedProduct, v: EquivariantBimodule) -> list[list[dict]]:
    """Right E-action ``v·(a⊗a'⊗b) = S(b)(a' v a)`` as a table ``[v][e]``."""
    B = cp.ma.B
    B.require_antipode(inverse=True)
    out = []
    for x in range(v.dim):
        row = []
        for e in range(cp.dim):
            a, a2, b = cp.triple(e)
            inner = v.rmul(v.lmul({a2: 1}, {x: 1}), {a: 1})
            row.append(v.bact(B.antipode[b], inner))
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# Ω(A)


@dataclass(eq=False)
class OmegaModule:
    sub: SubspaceBasis
    e_stable: bool
    witness: tuple | None = None

    @property
    def dim(self) -> int:
        return self.sub.dim


def enveloping_action(cp: CrossedProduct, e: int, a: int, a2: int) -> dict:
    """E acting on A⊗A: (x⊗y⊗b)(a⊗a') = x b₍₁₎(a) ⊗ b₍₂₎(a') y."""
    ma = cp.ma
    A, B, f = ma.A, ma.B, ma.field
    x, y, b = cp.triple(e)
    acc: dict = {}
    for c, p, q in B.comult[b]:
        left = A.mul({x: 1}, ma.action[p][a])
        right = A.mul(ma.action[q][a2], {y: 1})
        for i, ci in left.items():
            for j, cj in right.items():
                k = i * A.dim + j
                acc[k] = acc.get(k, 0) + c * ci * cj
    return f.clean(acc)


def multiplication_matrix(A: StructureAlgebra) -> Matrix:
    n = A.dim
    m = zeros(A.field, n, n * n)
    for i in range(n):
        for j in range(n):
            for k, c in A.mult[i][j].items():
                m[k, i * n + j] = c
    return Matrix(A.field, m)


def omega_basis(ma: ModuleAlgebra, cp: CrossedProduct | None = None) -> OmegaModule:
    """Ω(A) = ker(μ: A⊗A → A) with a check that it is an E-submodule."""
    cp = cp or crossed_product(ma)
    A, f = ma.A, ma.field
    sub = kernel_basis(multiplication_matrix(A))
    n = A.dim
    for row in sub.vectors():
        vec = {k: c for k, c in enumerate(row) if not f.is_zero(c)}
        for e in range(cp.dim):
            acc: dict = {}
            for k, c in vec.items():
                accumulate(acc, enveloping_action(cp, e, k // n, k % n), c)
            img = vectors_to_array(f, [f.clean(acc)], n * n)
            if not sub.contains_all(img):
                return OmegaModule(sub, False, (cp.E.basis_names[e], tuple(row)))
    return OmegaModule(sub, True)


# ---------------------------------------------------------------------------
# builtin algebras and actions


def dual_numbers(field: FieldSpec) -> StructureAlgebra:
    """k[y]/(y²) on the basis {1, y}."""
    return StructureAlgebra(field, ["1", "y"], [[{0: 1}, {1: 1}], [{1: 1}, {}]], {0: 1})


def trivial_algebra(field: FieldSpec) -> StructureAlgebra:
    return StructureAlgebra(field, ["1"], [[{0: 1}]], {0: 1})


def group_algebra_as_algebra(B: HopfData) -> StructureAlgebra:
    return StructureAlgebra(B.field, list(B.alg.basis_names), [[dict(x) for x in r] for r in B.alg.mult],
                            dict(B.alg.unit))


def trivial_action(B: HopfData, A: StructureAlgebra, name: str = "A") -> ModuleAlgebra:
    f = A.field
    action = [[f.clean({a: B.counit[b]}) for a in range(A.dim)] for b in range(B.dim)]
    return ModuleAlgebra(B, A, action, name=name)


def sign_action_dual(B: HopfData) -> ModuleAlgebra:
    """k[Z/2] on k[y]/(y²) with g·y = -y."""
    A = dual_numbers(B.field)
    f = B.field
    action = []
    for b in range(B.dim):
        s = 1 if b == _identity_index(B) else -1
        action.append([{0: 1}, f.clean({1: s})])
    return ModuleAlgebra(B, A, action, name="dual")


def _identity_index(B: HopfData) -> int:
    return next(iter(B.alg.unit))


def sweedler_action_dual(B: HopfData) -> ModuleAlgebra:
    """sweedler4 on k[y]/(y²): g·y = -y, x·y = 1, x·1 = 0."""
    f = B.field
    A = dual_numbers(f)
    action = [
        [{0: 1}, {1: 1}],                 # 1
        [{0: 1}, f.clean({1: -1})],       # g
        [{}, {0: 1}],                     # x
        [{}, {0: 1}],                     # gx = g∘x
    ]
    return ModuleAlgebra(B, A, action, name="dual")


def action_from_dense(B: HopfData, A: StructureAlgebra, table, name: str = "A") -> ModuleAlgebra:
    f = A.field
    if len(table) != B.dim or any(len(r) != A.dim for r in table):
        raise ShapeError(f"action: expected a {B.dim}x{A.dim} table of vectors")
    action = [[dense_to_sparse(f, table[b][a], A.dim, f"action[{b}][{a}]") for a in range(A.dim)]
              for b in range(B.dim)]
    return ModuleAlgebra(B, A, action, name=name)


def bimodule_from_dense(ma: ModuleAlgebra, names, left_A, right_A, left_B, name: str = "V") -> EquivariantBimodule:
    f = ma.field
    n = len(names)

    def tab(t, r, c, label):
        if len(t) != r or any(len(row) != c for row in t):
            raise ShapeError(f"{label}: expected a {r}x{c} table of vectors")
        return [[dense_to_sparse(f, t[i][j], n, f"{label}[{i}][{j}]") for j in range(c)] for i in range(r)]

    return EquivariantBimodule(f, list(names), tab(left_A, ma.A.dim, n, "left_A"),
                               tab(right_A, n, ma.A.dim, "right_A"), tab(left_B, ma.B.dim, n, "left_B"), name=name)


def algebra_with_dense_E(cp: CrossedProduct) -> np.ndarray:
    return vectors_to_array(cp.ma.field, [cp.E.mult[i][j] for i in range(cp.dim) for j in range(cp.dim)], cp.dim)
