"""Finite dimensional algebras and Hopf algebras given by structure constants.

Elements are sparse dicts ``{basis index: coefficient}``.  Multiplication
tables are stored per basis pair, comultiplication as ``(coeff, j, k)``
triples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .errors import AntipodeRequired, InvalidGroupTable, ShapeError
from .exactfield import FieldSpec, Matrix, RATIONAL, SubspaceBasis, span_reduce_array, vectors_to_array


# ---------------------------------------------------------------------------
# sparse vector helpers


def vadd(field: FieldSpec, *terms) -> dict:
    """Linear combination of ``(coeff, vec)`` pairs."""
    acc: dict = {}
    for c, v in terms:
        for k, x in v.items():
            acc[k] = acc.get(k, 0) + c * x
    return field.clean(acc)


def accumulate(acc: dict, vec: dict, c=1) -> None:
    for k, x in vec.items():
        acc[k] = acc.get(k, 0) + c * x


def bilinear(field: FieldSpec, table, x: dict, y: dict) -> dict:
    """``sum x_i y_j table[i][j]`` for a table of sparse vectors."""
    acc: dict = {}
    for i, a in x.items():
        row = table[i]
        for j, b in y.items():
            ab = a * b
            for k, z in row[j].items():
                acc[k] = acc.get(k, 0) + ab * z
    return field.clean(acc)


def linear(field: FieldSpec, cols, x: dict) -> dict:
    """Apply the map with sparse columns ``cols`` to ``x``."""
    acc: dict = {}
    for i, a in x.items():
        for k, z in cols[i].items():
            acc[k] = acc.get(k, 0) + a * z
    return field.clean(acc)


def basis_vec(i: int) -> dict:
    return {i: 1}


def dense_to_sparse(field: FieldSpec, vec: Sequence, dim: int, path: str = "") -> dict:
    if len(vec) != dim:
        raise ShapeError(f"{path}: expected length {dim}, got {len(vec)}")
    return field.clean({i: field(x) for i, x in enumerate(vec)})


# ---------------------------------------------------------------------------
# reports


@dataclass
class Failure:
    axiom: str
    witness: tuple
    detail: str = ""

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "witness": [str(w) for w in self.witness], "detail": self.detail}


@dataclass
class ValidationReport:
    subject: str
    checked: list[str] = dc_field(default_factory=list)
    failures: list[Failure] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, axiom: str, *witness, detail: str = "") -> None:
        self.failures.append(Failure(axiom, tuple(witness), detail))

    def check(self, axiom: str) -> None:
        if axiom not in self.checked:
            self.checked.append(axiom)

    def merge(self, other: "ValidationReport") -> "ValidationReport":
        for a in other.checked:
            self.check(f"{other.subject}.{a}")
        for f in other.failures:
            self.failures.append(Failure(f"{other.subject}.{f.axiom}", f.witness, f.detail))
        return self

    def failed_axioms(self) -> set[str]:
        return {f.axiom for f in self.failures}

    def to_dict(self) -> dict:
        return {"subject": self.subject, "ok": self.ok, "checked": list(self.checked),
                "failures": [f.to_dict() for f in self.failures]}

    def __str__(self) -> str:
        if self.ok:
            return f"{self.subject}: pass ({len(self.checked)} axioms)"
        first = self.failures[0]
        return f"{self.subject}: FAIL {first.axiom} witness {first.witness}"


# ---------------------------------------------------------------------------
# algebras


@dataclass(eq=False)
class StructureAlgebra:
    field: FieldSpec
    basis_names: list[str]
    mult: list[list[dict]]
    unit: dict

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    @classmethod
    def from_dense(cls, field: FieldSpec, names: Sequence[str], table, unit) -> "StructureAlgebra":
        n = len(names)
        if len(table) != n or any(len(row) != n for row in table):
            raise ShapeError(f"mult: expected a {n}x{n} table of vectors")
        mult = [[dense_to_sparse(field, table[i][j], n, f"mult[{i}][{j}]") for j in range(n)] for i in range(n)]
        return cls(field, list(names), mult, dense_to_sparse(field, unit, n, "unit"))

    def mul(self, x: dict, y: dict) -> dict:
        return bilinear(self.field, self.mult, x, y)

    def one(self) -> dict:
        return dict(self.unit)

    def dense_table(self) -> list:
        n = self.dim
        return [[[self.mult[i][j].get(k, 0) for k in range(n)] for j in range(n)] for i in range(n)]

    def opposite(self) -> "StructureAlgebra":
        n = self.dim
        return StructureAlgebra(self.field, list(self.basis_names),
                                [[dict(self.mult[j][i]) for j in range(n)] for i in range(n)], dict(self.unit))


def validate_algebra(a: StructureAlgebra, name: str = "algebra") -> ValidationReport:
    rep = ValidationReport(name)
    n = a.dim
    if len(a.mult) != n or any(len(r) != n for r in a.mult):
        raise ShapeError(f"{name}: multiplication table is not {n}x{n}")
    rep.check("associativity")
    for i, j, k in itertools.product(range(n), repeat=3):
        left = a.mul(a.mult[i][j], {k: 1})
        right = a.mul({i: 1}, a.mult[j][k])
        if left != right:
            rep.fail("associativity", a.basis_names[i], a.basis_names[j], a.basis_names[k])
    rep.check("unit")
    for i in range(n):
        e = {i: 1}
        if a.mul(a.unit, e) != e or a.mul(e, a.unit) != e:
            rep.fail("unit", "1", a.basis_names[i])
    return rep


# ---------------------------------------------------------------------------
# Hopf data


@dataclass(eq=False)
class HopfData:
    alg: StructureAlgebra
    comult: list[list[tuple]]          # per basis index: (coeff, j, k)
    counit: list
    antipode: list[dict] | None = None      # column i = S(b_i)
    antipode_inv: list[dict] | None = None
    name: str = "B"
    _cop_cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def field(self) -> FieldSpec:
        return self.alg.field

    @property
    def dim(self) -> int:
        return self.alg.dim

    def require_antipode(self, inverse: bool = False) -> None:
        if self.antipode is None or (inverse and self.antipode_inv is None):
            raise AntipodeRequired(f"{self.name}: operation needs "
                                   + ("an invertible antipode" if inverse else "an antipode"))

    def delta(self, x: dict) -> dict:
        """Comultiplication of ``x`` as a sparse vector keyed by index pairs."""
        acc: dict = {}
        for i, a in x.items():
            for c, j, k in self.comult[i]:
                acc[(j, k)] = acc.get((j, k), 0) + a * c
        return self.field.clean(acc)

    def eps(self, x: dict):
        return self.field.norm(sum(a * self.counit[i] for i, a in x.items()))

    def S(self, x: dict) -> dict:
        self.require_antipode()
        return linear(self.field, self.antipode, x)

    def Sinv(self, x: dict) -> dict:
        self.require_antipode(inverse=True)
        return linear(self.field, self.antipode_inv, x)

    def antipode_matrix(self) -> Matrix:
        self.require_antipode()
        return _cols_to_matrix(self.field, self.antipode, self.dim)

    def antipode_inv_matrix(self) -> Matrix:
        self.require_antipode(inverse=True)
        return _cols_to_matrix(self.field, self.antipode_inv, self.dim)

    def is_cocommutative(self) -> bool:
        return cocommutativity_defect(self).dim == 0


def hopf_cop(h: HopfData) -> HopfData:
    """Same algebra, flipped coproduct; the antipode of B^cop is S⁻¹."""
    comult = [[(c, k, j) for c, j, k in row] for row in h.comult]
    return HopfData(h.alg, comult, list(h.counit), h.antipode_inv, h.antipode, name=f"{h.name}^cop")


def _cols_to_matrix(field: FieldSpec, cols: list[dict], n: int) -> Matrix:
    return Matrix(field, vectors_to_array(field, cols, n).T.copy())


@dataclass(frozen=True)
class IteratedCoproduct:
    arity: int
    result: tuple[dict, ...]  # per basis index: {(j1..jn): coeff}

    def of(self, x: dict, field: FieldSpec) -> dict:
        acc: dict = {}
        for i, a in x.items():
            for key, c in self.result[i].items():
                acc[key] = acc.get(key, 0) + a * c
        return field.clean(acc)


def iterated_coproduct(h: HopfData, n: int) -> IteratedCoproduct:
    """Left-nested n-fold coproduct ``(Δ⊗id⊗...)∘...∘Δ`` of every basis element."""
    if n < 1:
        raise ValueError("arity must be >= 1")
    if n in h._cop_cache:
        return h._cop_cache[n]
    if n == 1:
        res = tuple({(i,): 1} for i in range(h.dim))
    else:
        prev = iterated_coproduct(h, n - 1)
        out = []
        for i in range(h.dim):
            acc: dict = {}
            for key, c in prev.result[i].items():
                for c2, j, k in h.comult[key[0]]:
                    nk = (j, k) + key[1:]
                    acc[nk] = acc.get(nk, 0) + c * c2
            out.append(h.field.clean(acc))
        res = tuple(out)
    ic = IteratedCoproduct(n, res)
    h._cop_cache[n] = ic
    return ic


def right_nested_coproduct(h: HopfData, n: int) -> IteratedCoproduct:
    """``(id⊗...⊗Δ)∘...∘Δ``; used only to cross-check nesting independence."""
    if n == 1:
        return IteratedCoproduct(1, tuple({(i,): 1} for i in range(h.dim)))
    prev = right_nested_coproduct(h, n - 1)
    out = []
    for i in range(h.dim):
        acc: dict = {}
        for key, c in prev.result[i].items():
            for c2, j, k in h.comult[key[-1]]:
                nk = key[:-1] + (j, k)
                acc[nk] = acc.get(nk, 0) + c * c2
        out.append(h.field.clean(acc))
    return IteratedCoproduct(n, tuple(out))


def cocommutativity_defect(h: HopfData) -> SubspaceBasis:
    """Image of ``(id - flip)∘Δ`` inside B⊗B."""
    n = h.dim
    vecs = []
    for i in range(n):
        d = h.delta({i: 1})
        acc: dict = {}
        for (j, k), c in d.items():
            acc[j * n + k] = acc.get(j * n + k, 0) + c
            acc[k * n + j] = acc.get(k * n + j, 0) - c
        vecs.append(h.field.clean(acc))
    return span_reduce_array(h.field, vectors_to_array(h.field, vecs, n * n), n * n)


def _tensor_mul(h: HopfData, x: dict, y: dict) -> dict:
    acc: dict = {}
    for (a, b), c in x.items():
        for (a2, b2), c2 in y.items():
            left = h.alg.mult[a][a2]
            right = h.alg.mult[b][b2]
            for p, u in left.items():
                for q, w in right.items():
                    acc[(p, q)] = acc.get((p, q), 0) + c * c2 * u * w
    return h.field.clean(acc)


def validate_hopf(h: HopfData) -> ValidationReport:
    field = h.field
    n = h.dim
    rep = ValidationReport(h.name)
    if len(h.comult) != n or len(h.counit) != n:
        raise ShapeError(f"{h.name}: comult/counit must have {n} entries")
    for i, terms in enumerate(h.comult):
        for t in terms:
            if len(t) != 3 or not (0 <= t[1] < n and 0 <= t[2] < n):
                raise ShapeError(f"{h.name}: bad comult triple {t} at index {i}")
    rep.merge(validate_algebra(h.alg, "algebra"))
    names = h.alg.basis_names

    rep.check("coassociativity")
    left = iterated_coproduct(h, 3)
    right = right_nested_coproduct(h, 3)
    for i in range(n):
        if left.result[i] != right.result[i]:
            rep.fail("coassociativity", names[i])

    rep.check("counit")
    for i in range(n):
        d = h.delta({i: 1})
        l: dict = {}
        r: dict = {}
        for (j, k), c in d.items():
            l[k] = l.get(k, 0) + c * h.counit[j]
            r[j] = r.get(j, 0) + c * h.counit[k]
        if field.clean(l) != {i: 1} or field.clean(r) != {i: 1}:
            rep.fail("counit", names[i])

    rep.check("comult_multiplicative")
    rep.check("counit_multiplicative")
    for i, j in itertools.product(range(n), repeat=2):
        if h.delta(h.alg.mult[i][j]) != _tensor_mul(h, h.delta({i: 1}), h.delta({j: 1})):
            rep.fail("comult_multiplicative", names[i], names[j])
        if not field.is_zero(h.eps(h.alg.mult[i][j]) - h.counit[i] * h.counit[j]):
            rep.fail("counit_multiplicative", names[i], names[j])
    rep.check("comult_unit")
    one = h.alg.unit
    if h.delta(one) != field.clean({(i, j): a * b for i, a in one.items() for j, b in one.items()}):
        rep.fail("comult_unit", "1")
    rep.check("counit_unit")
    if not field.is_zero(h.eps(one) - 1):
        rep.fail("counit_unit", "1")

    if h.antipode is not None:
        if len(h.antipode) != n:
            raise ShapeError(f"{h.name}: antipode must have {n} columns")
        rep.check("antipode")
        for i in range(n):
            d = h.delta({i: 1})
            target = field.clean({k: h.counit[i] * c for k, c in one.items()})
            l: dict = {}
            r: dict = {}
            for (j, k), c in d.items():
                accumulate(l, h.alg.mul(h.antipode[j], {k: 1}), c)
                accumulate(r, h.alg.mul({j: 1}, h.antipode[k]), c)
            if field.clean(l) != target or field.clean(r) != target:
                rep.fail("antipode", names[i])
    if h.antipode_inv is not None:
        if h.antipode is None or len(h.antipode_inv) != n:
            raise ShapeError(f"{h.name}: antipode_inv needs an antipode and {n} columns")
        rep.check("antipode_inverse")
        for i in range(n):
            e = {i: 1}
            if linear(field, h.antipode, h.antipode_inv[i]) != e or linear(field, h.antipode_inv, h.antipode[i]) != e:
                rep.fail("antipode_inverse", names[i])
    return rep


# ---------------------------------------------------------------------------
# builtins


def _invert_matrix_cols(field: FieldSpec, cols: list[dict], n: int) -> list[dict] | None:
    from .exactfield import rref, zeros
    m = _cols_to_matrix(field, cols, n).data
    aug = zeros(field, n, 2 * n)
    aug[:, :n] = m
    for i in range(n):
        aug[i, n + i] = 1
    red, piv = rref(field, aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    inv = red[:n, n:]
    return [field.clean({r: inv[r, c] for r in range(n)}) for c in range(n)]


def trivial_bialgebra(field: FieldSpec = RATIONAL) -> HopfData:
    alg = StructureAlgebra(field, ["1"], [[{0: 1}]], {0: 1})
    return HopfData(alg, [[(1, 0, 0)]], [1], [{0: 1}], [{0: 1}], name="k")


def _check_group_table(table) -> int:
    n = len(table)
    if n == 0 or any(len(r) != n for r in table):
        raise InvalidGroupTable("table must be square and nonempty")
    for r in table:
        if sorted(r) != list(range(n)):
            raise InvalidGroupTable("rows must be permutations of the elements")
    for col in range(n):
        if sorted(table[r][col] for r in range(n)) != list(range(n)):
            raise InvalidGroupTable("columns must be permutations of the elements")
    ident = [e for e in range(n) if all(table[e][j] == j and table[j][e] == j for j in range(n))]
    if not ident:
        raise InvalidGroupTable("no identity element")
    for a, b, c in itertools.product(range(n), repeat=3):
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise InvalidGroupTable(f"not associative at ({a},{b},{c})")
    return ident[0]


def group_algebra(table, field: FieldSpec = RATIONAL, names: Sequence[str] | None = None, name: str = "k[G]") -> HopfData:
    """Group algebra with Δ(g)=g⊗g, ε(g)=1, S(g)=g⁻¹ from a Cayley table."""
    e = _check_group_table(table)
    n = len(table)
    names = list(names) if names else [f"g{i}" for i in range(n)]
    mult = [[{table[i][j]: 1} for j in range(n)] for i in range(n)]
    alg = StructureAlgebra(field, names, mult, {e: 1})
    inv = [next(j for j in range(n) if table[i][j] == e) for i in range(n)]
    S = [{inv[i]: 1} for i in range(n)]
    return HopfData(alg, [[(1, i, i)] for i in range(n)], [1] * n, S, [dict(s) for s in S], name=name)


def cyclic_table(n: int) -> list[list[int]]:
    return [[(i + j) % n for j in range(n)] for i in range(n)]


def cyclic_group_algebra(n: int, field: FieldSpec = RATIONAL) -> HopfData:
    names = ["e"] + ([f"g^{i}" if i > 1 else "g" for i in range(1, n)])
    return group_algebra(cyclic_table(n), field, names, name=f"k[Z/{n}]")


def sweedler4(field: FieldSpec = RATIONAL) -> HopfData:
    """Sweedler's 4-dimensional Hopf algebra on the basis {1, g, x, gx}."""
    one, g, x, gx = range(4)
    m = [[{} for _ in range(4)] for _ in range(4)]
    for i in range(4):
        m[one][i] = {i: 1}
        m[i][one] = {i: 1}
    m[g][g] = {one: 1}
    m[g][x] = {gx: 1}
    m[g][gx] = {x: 1}
    m[x][g] = {gx: -1}
    m[gx][g] = {x: -1}
    alg = StructureAlgebra(field, ["1", "g", "x", "gx"], [[field.clean(v) for v in row] for row in m], {one: 1})
    comult = [
        [(1, one, one)],
        [(1, g, g)],
        [(1, x, one), (1, g, x)],
        [(1, gx, g), (1, one, gx)],
    ]
    S = [field.clean(v) for v in ({one: 1}, {g: 1}, {gx: -1}, {x: 1})]
    Sinv = [field.clean(v) for v in ({one: 1}, {g: 1}, {gx: 1}, {x: -1})]
    return HopfData(alg, comult, [1, 1, 0, 0], S, Sinv, name="sweedler4")


def make_builtin(name: str, field: FieldSpec = RATIONAL) -> HopfData:
    """``trivial`` / ``trivial_k``, ``sweedler4``, ``group:Z/n``."""
    if name in ("trivial", "trivial_k", "k"):
        return trivial_bialgebra(field)
    if name == "sweedler4":
        return sweedler4(field)
    if name.startswith("group:Z/"):
        try:
            n = int(name.split("/", 1)[1])
        except ValueError as exc:
            raise InvalidGroupTable(f"bad cyclic group {name!r}") from exc
        if n < 1:
            raise InvalidGroupTable(f"bad cyclic group {name!r}")
        return cyclic_group_algebra(n, field)
    raise KeyError(f"unknown builtin bialgebra {name!r}")


def hopf_from_dense(field: FieldSpec, names, table, unit, comult, counit, antipode=None,
                    antipode_inv=None, name: str = "B") -> HopfData:
    """Build HopfData from document-style arrays.

    ``antipode`` is a dim x dim matrix whose column i is S(b_i).  When it is
    given without ``antipode_inv`` the inverse is computed if it exists.
    """
    alg = StructureAlgebra.from_dense(field, names, table, unit)
    n = alg.dim
    cm = []
    for i, terms in enumerate(comult):
        row = []
        for t in terms:
            if len(t) != 3:
                raise ShapeError(f"comult[{i}]: triples must be (coeff, j, k)")
            c, j, k = t
            if not (isinstance(j, int) and isinstance(k, int) and 0 <= j < n and 0 <= k < n):
                raise ShapeError(f"comult[{i}]: index out of range in {t}")
            row.append((field(c), j, k))
        cm.append(row)
    if len(cm) != n:
        raise ShapeError(f"comult: expected {n} entries")
    if len(counit) != n:
        raise ShapeError(f"counit: expected {n} entries")
    eps = [field(c) for c in counit]

    def cols(mat, label):
        if len(mat) != n or any(len(r) != n for r in mat):
            raise ShapeError(f"{label}: expected a {n}x{n} matrix")
        return [field.clean({r: field(mat[r][c]) for r in range(n)}) for c in range(n)]

    S = cols(antipode, "antipode") if antipode is not None else None
    Sinv = cols(antipode_inv, "antipode_inv") if antipode_inv is not None else None
    if S is not None and Sinv is None:
        Sinv = _invert_matrix_cols(field, S, n)
    return HopfData(alg, cm, eps, S, Sinv, name=name)


def hopf_to_dense(h: HopfData) -> dict:
    n = h.dim
    out = {
        "basis": list(h.alg.basis_names),
        "mult": h.alg.dense_table(),
        "unit": [h.alg.unit.get(k, 0) for k in range(n)],
        "comult": [[[c, j, k] for c, j, k in terms] for terms in h.comult],
        "counit": list(h.counit),
    }
    if h.antipode is not None:
        out["antipode"] = h.antipode_matrix().tolist()
    if h.antipode_inv is not None:
        out["antipode_inv"] = h.antipode_inv_matrix().tolist()
    return out


def conjugation_matrix(h: HopfData, u: int, uinv: int) -> Matrix:
    """Matrix of b ↦ u b u⁻¹ for basis elements u, u⁻¹."""
    cols = [h.alg.mul(h.alg.mul({u: 1}, {i: 1}), {uinv: 1}) for i in range(h.dim)]
    return _cols_to_matrix(h.field, cols, h.dim)
