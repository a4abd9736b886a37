"""Hochschild complexes with a Hopf symmetry: CH, J, QCH, coinvariants, CB and cochains.

Face order on CH_n(A,V) = A^{⊗n}⊗V (basis index tuples (a₁,…,aₙ,v), rightmost fastest):

    ∂₀ = a₁⊗…⊗a_{n-1}⊗aₙv
    ∂ⱼ merges a_{n-j}a_{n-j+1}        (1 ≤ j ≤ n-1)
    ∂ₙ = a₂⊗…⊗aₙ⊗va₁

so that d = Σ(−1)ʲ∂ⱼ squares to zero and only ∂ₙ fails to commute with the
diagonal B-action.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .chain import (BettiTable, ChainComplexRealization, CochainComplexRealization, OracleReport, QuotientComplex,
                    all_tuples, assemble, check_size, cohomology_dims, decode, encode, first_nonzero_column,
                    homology_dims, is_zero, mrank, quotient_of, span_of_columns, tensor_vectors)
from .exactfield import FieldSpec, Matrix, SubspaceBasis, empty_subspace, kernel_basis, matmul, reduce_array, zeros
from .hopfcore import iterated_coproduct
from .modact import CrossedProduct, EquivariantBimodule, ModuleAlgebra, crossed_product, vop_right_action

DEFAULT_N = 4


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _twist(n: int) -> int:
    return _sign(n * (n + 1) // 2)


def _merge_table(A):
    """For each A-basis k: list of (p, q, c) with c = coefficient of k in a_p a_q."""
    out = [[] for _ in range(A.dim)]
    for p in range(A.dim):
        for q in range(A.dim):
            for k, c in A.mult[p][q].items():
                out[k].append((p, q, c))
    return out


def _eye(field: FieldSpec, n: int) -> np.ndarray:
    m = zeros(field, n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def _kron(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if field.dtype is object:
        out = np.empty((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]), dtype=object)
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                out[i * b.shape[0]:(i + 1) * b.shape[0], j * b.shape[1]:(j + 1) * b.shape[1]] = a[i, j] * b
        return out
    return reduce_array(field, np.kron(a, b))


# ---------------------------------------------------------------------------
# CH_*(A,V)


@dataclass(eq=False)
class HochschildComplex:
    ma: ModuleAlgebra
    v: EquivariantBimodule
    cx: ChainComplexRealization
    _L: dict = dc_field(default_factory=dict, repr=False)

    @property
    def field(self) -> FieldSpec:
        return self.ma.field

    @property
    def top(self) -> int:
        return self.cx.top

    def shape(self, n: int) -> list[int]:
        return [self.ma.A.dim] * n + [self.v.dim]

    def L(self, n: int, b: int) -> np.ndarray:
        key = (n, b)
        if key not in self._L:
            self._L[key] = diagonal_action(self.ma, self.v, n, {b: 1})
        return self._L[key]

    def commutator(self, n: int, b: int) -> np.ndarray:
        """[L_b, ∂_{n+1}] : CH_{n+1} → CH_n."""
        f = self.field
        last = self.cx.faces[n + 1][n + 1]
        return reduce_array(f, matmul(f, self.L(n, b), last) - matmul(f, last, self.L(n + 1, b)))


def build_ch(ma: ModuleAlgebra, v: EquivariantBimodule, N: int = DEFAULT_N, cap: int | None = None) -> HochschildComplex:
    if N < 0:
        raise ValueError("N must be non-negative")
    A, f = ma.A, ma.field
    dA, dV = A.dim, v.dim
    for n in range(N + 2):
        check_size(dA ** n * dV, f"CH_{n}", cap)
    dims, faces = [], []
    for n in range(N + 2):
        shp = [dA] * n + [dV]
        dims.append(dA ** n * dV)
        if n == 0:
            faces.append([])
            continue
        tgt = [dA] * (n - 1) + [dV]
        tuples = all_tuples(shp)
        fl = []
        for j in range(n + 1):
            def col(k, j=j):
                t = tuples[k]
                a, x = t[:-1], t[-1]
                if j == 0:
                    return tensor_vectors(f, [{i: 1} for i in a[:-1]] + [v.left_A[a[-1]][x]], tgt)
                if j == n:
                    return tensor_vectors(f, [{i: 1} for i in a[1:]] + [v.right_A[x][a[0]]], tgt)
                p = n - j - 1  # 0-based left factor of the merged pair
                fac = [{i: 1} for i in a[:p]] + [A.mult[a[p]][a[p + 1]]] + [{i: 1} for i in a[p + 2:]] + [{x: 1}]
                return tensor_vectors(f, fac, tgt)
            fl.append(assemble(f, dims[n - 1], dims[n], col))
        faces.append(fl)
    cx = ChainComplexRealization(f, dims, faces, "A^n⊗V, indices (a1..an, v) row-major, rightmost fastest",
                                 label="CH")
    return HochschildComplex(ma, v, cx)


def diagonal_action(ma: ModuleAlgebra, v: EquivariantBimodule, n: int, b) -> np.ndarray:
    """Matrix of L_b(a₁⊗…⊗aₙ⊗v) = b₍₁₎(a₁)⊗…⊗b₍ₙ₎(aₙ)⊗b₍ₙ₊₁₎(v) on CH_n."""
    f, B = ma.field, ma.B
    if isinstance(b, int):
        b = {b: 1}
    shp = [ma.A.dim] * n + [v.dim]
    legs = iterated_coproduct(B, n + 1).of(b, f)
    tuples = all_tuples(shp)

    def col(k):
        t = tuples[k]
        acc: dict = {}
        for key, c in legs.items():
            fac = [ma.action[key[i]][t[i]] for i in range(n)] + [v.left_B[key[n]][t[n]]]
            for idx, x in tensor_vectors(f, fac, shp, c).items():
                acc[idx] = acc.get(idx, 0) + x
        return f.clean(acc)

    dim = len(tuples)
    return assemble(f, dim, dim, col)


def obstruction_subspace(ma: ModuleAlgebra, v: EquivariantBimodule, n: int,
                         ch: HochschildComplex | None = None) -> SubspaceBasis:
    """J_n = Σ_b im [L_b, ∂_{n+1}] over a basis of B."""
    ch = ch or build_ch(ma, v, n)
    f = ma.field
    cols = [ch.commutator(n, b) for b in range(ma.B.dim)]
    return span_of_columns(f, np.concatenate(cols, axis=1), ch.cx.dims[n])


def coinvariant_relations(ch: HochschildComplex, n: int) -> np.ndarray:
    f, B = ch.field, ch.ma.B
    dim = ch.cx.dims[n]
    cols = []
    for b in range(B.dim):
        cols.append(reduce_array(f, ch.L(n, b) - _eye(f, dim) * B.counit[b]))
    return np.concatenate(cols, axis=1)


def quotient_complex(ma: ModuleAlgebra, v: EquivariantBimodule, N: int = DEFAULT_N, mode: str = "coinvariant_qch",
                     ch: HochschildComplex | None = None, check: bool = True) -> QuotientComplex:
    """mode ``qch``: U_n = J_n.  mode ``coinvariant_qch``: U_n = J_n + span{L_b x − ε(b)x}."""
    if mode not in ("qch", "coinvariant_qch"):
        raise ValueError(f"unknown mode {mode!r}")
    ch = ch or build_ch(ma, v, N)
    f = ma.field
    subs = []
    for n in range(N + 1):
        J = obstruction_subspace(ma, v, n, ch)
        if mode == "coinvariant_qch":
            J = span_of_columns(f, coinvariant_relations(ch, n), ch.cx.dims[n], start=J)
        subs.append(J)
    qc = quotient_of(ch.cx, subs, mode, check=check)
    qc.base.label = "CH"
    return qc


def hopf_hochschild_homology(ma: ModuleAlgebra, v: EquivariantBimodule, up_to: int = 3,
                             mode: str = "coinvariant_qch") -> BettiTable:
    qc = quotient_complex(ma, v, up_to, mode=mode, ch=build_ch(ma, v, up_to))
    return homology_dims(qc, up_to)


def submodule_failures(ch: HochschildComplex, subs: list[SubspaceBasis]) -> list[tuple[int, int]]:
    """(n, b) where L_b does not preserve U_n."""
    f = ch.field
    bad = []
    for n, sub in enumerate(subs):
        if sub.dim == 0:
            continue
        for b in range(ch.ma.B.dim):
            img = matmul(f, ch.L(n, b), sub.basis.T.copy())
            if not sub.contains_all(img.T.copy()):
                bad.append((n, b))
    return bad


def face_commutation_failures(ch: HochschildComplex) -> list[tuple[int, int, int]]:
    """(n, j, b) with [L_b, ∂_j] ≠ 0 on CH_n, restricted to j ≤ n−1."""
    f = ch.field
    bad = []
    for n in range(1, ch.top + 1):
        for j in range(n):
            face = ch.cx.faces[n][j]
            for b in range(ch.ma.B.dim):
                c = matmul(f, ch.L(n - 1, b), face) - matmul(f, face, ch.L(n, b))
                if not is_zero(f, c):
                    bad.append((n, j, b))
    return bad


def dgm_homotopy_oracle(ma: ModuleAlgebra, v: EquivariantBimodule, N: int = 3,
                        ch: HochschildComplex | None = None) -> OracleReport:
    """[L_b,∂_{*+1}] is a chain map CH[+1]→CH, null-homotopic through s_n = (−1)^{n−1}L_b.

    T_n = [L_b,∂_{n+1}]: CH_{n+1}→CH_n.  The homotopy identity is tested as
    T_n = α(d_{n+1}s_{n+1} + β s_n d_{n+1}) for α, β ∈ {±1}; every convention
    that holds is recorded and the oracle fails only if none does.
    """
    ch = ch or build_ch(ma, v, N + 1)
    f = ma.field
    rep = OracleReport("dgm-homotopy", f.label)
    conventions = {"dS+Sd": (1, 1), "dS-Sd": (1, -1), "-(dS+Sd)": (-1, 1), "-(dS-Sd)": (-1, -1)}
    holding = set(conventions)
    for b in range(ma.B.dim):
        bname = ma.B.alg.basis_names[b]
        for n in range(0, min(N, ch.top - 1) + 1):
            T = ch.commutator(n, b)
            if n >= 1:
                lhs = matmul(f, ch.cx.d(n), T)
                rhs = matmul(f, ch.commutator(n - 1, b), ch.cx.d(n + 1))
                rep.add("chain_map", n, is_zero(f, lhs - rhs), witness={"b": bname})
            s_hi = _sign(n) * ch.L(n + 1, b)            # s_{n+1} = (−1)^n L_b
            s_lo = _sign(n - 1) * ch.L(n, b)            # s_n = (−1)^{n−1} L_b
            ds = matmul(f, ch.cx.d(n + 1), s_hi)
            sd = matmul(f, s_lo, ch.cx.d(n + 1))
            for name, (al, be) in conventions.items():
                if name in holding and not is_zero(f, T - al * (ds + be * sd)):
                    holding.discard(name)
    rep.add("null_homotopy", None, bool(holding), witness="no sign convention holds")
    rep.tables["conventions_holding"] = sorted(holding)
    return rep


# ---------------------------------------------------------------------------
# CB_*(A)


@dataclass(eq=False)
class BarComplex:
    ma: ModuleAlgebra
    cp: CrossedProduct
    cx: ChainComplexRealization
    _E: dict = dc_field(default_factory=dict, repr=False)

    @property
    def field(self) -> FieldSpec:
        return self.ma.field

    def shape(self, n: int) -> list[int]:
        return [self.ma.A.dim] * (n + 2)

    def e_action(self, n: int, e) -> np.ndarray:
        """(a⊗a'⊗b)(a₀⊗…⊗a_{n+1}) = a b₍₁₎(a₀)⊗b₍₂₎(a₁)⊗…⊗b₍ₙ₊₂₎(a_{n+1}) a'."""
        key = (n, e if isinstance(e, int) else tuple(sorted(e.items())))
        if key in self._E:
            return self._E[key]
        f, A, B = self.field, self.ma.A, self.ma.B
        evec = {e: 1} if isinstance(e, int) else e
        shp = self.shape(n)
        tuples = all_tuples(shp)
        dim = len(tuples)
        out = zeros(f, dim, dim)
        for ei, ce in evec.items():
            a, a2, b = self.cp.triple(ei)
            legs = iterated_coproduct(B, n + 2).result[b]

            def col(k):
                t = tuples[k]
                acc: dict = {}
                for key2, c in legs.items():
                    fac = [ma_act for ma_act in (self.ma.action[key2[i]][t[i]] for i in range(n + 2))]
                    fac[0] = A.mul({a: 1}, fac[0])
                    fac[-1] = A.mul(fac[-1], {a2: 1})
                    for idx, x in tensor_vectors(f, fac, shp, c * ce).items():
                        acc[idx] = acc.get(idx, 0) + x
                return f.clean(acc)

            out = out + assemble(f, dim, dim, col)
        out = reduce_array(f, out)
        self._E[key] = out
        return out

    def generators(self) -> list[int]:
        """Basis indices a⊗1⊗1, 1⊗a⊗1, 1⊗1⊗b (enough to generate E when 1_A, 1_B are basis vectors)."""
        A, B = self.ma.A, self.ma.B
        ua, ub = _unit_index(A.unit), _unit_index(B.alg.unit)
        if ua is None or ub is None:
            return list(range(self.cp.dim))
        gens = {self.cp.index(a, ua, ub) for a in range(A.dim)}
        gens |= {self.cp.index(ua, a, ub) for a in range(A.dim)}
        gens |= {self.cp.index(ua, ua, b) for b in range(B.dim)}
        return sorted(gens)


def _unit_index(u: dict):
    if len(u) == 1:
        (k, c), = u.items()
        if c == 1:
            return k
    return None


def build_cb(ma: ModuleAlgebra, N: int = DEFAULT_N, cp: CrossedProduct | None = None,
             cap: int | None = None) -> BarComplex:
    A, f = ma.A, ma.field
    dA = A.dim
    for n in range(N + 2):
        check_size(dA ** (n + 2), f"CB_{n}", cap)
    dims, faces = [], []
    for n in range(N + 2):
        shp = [dA] * (n + 2)
        dims.append(dA ** (n + 2))
        if n == 0:
            faces.append([])
            continue
        tgt = [dA] * (n + 1)
        tuples = all_tuples(shp)
        fl = []
        for j in range(n + 1):
            def col(k, j=j):
                t = tuples[k]
                fac = [{i: 1} for i in t[:j]] + [A.mult[t[j]][t[j + 1]]] + [{i: 1} for i in t[j + 2:]]
                return tensor_vectors(f, fac, tgt)
            fl.append(assemble(f, dims[n - 1], dims[n], col))
        faces.append(fl)
    cx = ChainComplexRealization(f, dims, faces, "A^(n+2), indices (a0..a_{n+1}) row-major", label="CB")
    return BarComplex(ma, cp or crossed_product(ma), cx)


def cb_linearity_failures(cb: BarComplex) -> list[tuple[int, int, int]]:
    """(n, j, e) where face ∂_j of CB_n fails to commute with generator e of E."""
    f = cb.field
    bad = []
    for n in range(1, cb.cx.top + 1):
        for e in cb.generators():
            lo, hi = cb.e_action(n - 1, e), cb.e_action(n, e)
            for j, face in enumerate(cb.cx.faces[n]):
                if not is_zero(f, matmul(f, lo, face) - matmul(f, face, hi)):
                    bad.append((n, j, e))
    return bad


# ---------------------------------------------------------------------------
# cochains


def _tensor_action_A(ma: ModuleAlgebra, n: int, b: int) -> np.ndarray:
    """Diagonal action of basis b on A^{⊗n} (ε(b) on k when n = 0)."""
    f = ma.field
    if n == 0:
        m = zeros(f, 1, 1)
        m[0, 0] = f.norm(ma.B.counit[b]) if f.dtype is not object else ma.B.counit[b]
        return m
    shp = [ma.A.dim] * n
    legs = iterated_coproduct(ma.B, n).result[b]
    tuples = all_tuples(shp)

    def col(k):
        t = tuples[k]
        acc: dict = {}
        for key, c in legs.items():
            for idx, x in tensor_vectors(f, [ma.action[key[i]][t[i]] for i in range(n)], shp, c).items():
                acc[idx] = acc.get(idx, 0) + x
        return f.clean(acc)

    return assemble(f, len(tuples), len(tuples), col)


def _op_matrix(field: FieldSpec, table_cols, dim: int) -> np.ndarray:
    """Matrix whose column x is the sparse vector table_cols[x]."""
    return assemble(field, dim, dim, lambda x: table_cols[x])


def _hom_constraint(field: FieldSpec, left_ops: list[np.ndarray], right_ops: list[np.ndarray],
                    rows: int, cols: int) -> np.ndarray:
    """Stack of G ↦ G·R − L·G on row-major vec(G), G of shape rows×cols."""
    blocks = []
    for L, R in zip(left_ops, right_ops):
        blocks.append(reduce_array(field, _kron(field, _eye(field, rows), R.T.copy()) - _kron(field, L, _eye(field, cols))))
    if not blocks:
        return zeros(field, 0, rows * cols)
    return np.concatenate(blocks, axis=0)


def equivariant_cochains(ma: ModuleAlgebra, v: EquivariantBimodule, n: int) -> SubspaceBasis:
    """{g : A^{⊗n} → V | g(L_b x) = b g(x)} inside Hom, row-major vec over (v, input tuple)."""
    f = ma.field
    cols = ma.A.dim ** n
    Ls = [_op_matrix(f, v.left_B[b], v.dim) for b in range(ma.B.dim)]
    Rs = [_tensor_action_A(ma, n, b) for b in range(ma.B.dim)]
    return kernel_basis(Matrix(f, _hom_constraint(f, Ls, Rs, v.dim, cols)))


def hochschild_coboundary(ma: ModuleAlgebra, v: EquivariantBimodule, n: int) -> np.ndarray:
    """δ: Hom(A^{⊗n},V) → Hom(A^{⊗n+1},V),
    δg(a₁..a_{n+1}) = a₁g(a₂..) + Σ(−1)ⁱ g(..aᵢa_{i+1}..) + (−1)^{n+1} g(a₁..aₙ)a_{n+1}."""
    f, A = ma.field, ma.A
    dA, dV = A.dim, v.dim
    src_cols, tgt_cols = dA ** n, dA ** (n + 1)
    merges = _merge_table(A)
    shp_n = [dA] * n

    def col(k):
        x, ti = divmod(k, src_cols)
        t = decode(ti, shp_n) if n else ()
        acc: dict = {}

        def put(vec: dict, s: tuple, c):
            si = encode(s, [dA] * (n + 1))
            for y, cy in vec.items():
                idx = y * tgt_cols + si
                acc[idx] = acc.get(idx, 0) + c * cy

        for a in range(dA):
            put(v.left_A[a][x], (a,) + t, 1)
        for i in range(1, n + 1):
            for p, q, c in merges[t[i - 1]]:
                put({x: 1}, t[:i - 1] + (p, q) + t[i:], _sign(i) * c)
        for a in range(dA):
            put(v.right_A[x][a], t + (a,), _sign(n + 1))
        return f.clean(acc)

    return assemble(f, dV * tgt_cols, dV * src_cols, col)


def cochain_complex(ma: ModuleAlgebra, v: EquivariantBimodule, N: int = DEFAULT_N,
                    cap: int | None = None) -> CochainComplexRealization:
    """Reduced model: B-equivariant maps A^{⊗n}→V, n = 0..N, with coboundaries δ_0..δ_{N-1}."""
    f = ma.field
    amb = []
    for n in range(N + 1):
        check_size(v.dim * ma.A.dim ** n, f"Hom(A^{n},V)", cap)
        amb.append(v.dim * ma.A.dim ** n)
    spaces = [equivariant_cochains(ma, v, n) for n in range(N + 1)]
    cobs = [hochschild_coboundary(ma, v, n) for n in range(N)]
    return CochainComplexRealization(f, amb, spaces, cobs, label="Hom_B(A^n,V)")


def full_cochain_complex(ma: ModuleAlgebra, v: EquivariantBimodule, N: int = 2,
                         cb: BarComplex | None = None) -> CochainComplexRealization:
    """Hom_E(CB_n, V), n = 0..N, as solution spaces; δF = F∘d^{CB}."""
    f = ma.field
    cb = cb or build_cb(ma, N)
    cp = cb.cp
    from .modact import left_E_action
    vE = left_E_action(cp, v)
    gens = cb.generators()
    amb, spaces, cobs = [], [], []
    for n in range(N + 1):
        cols = cb.cx.dims[n]
        amb.append(v.dim * cols)
        Ls = [_op_matrix(f, vE[e], v.dim) for e in gens]
        Rs = [cb.e_action(n, e) for e in gens]
        spaces.append(kernel_basis(Matrix(f, _hom_constraint(f, Ls, Rs, v.dim, cols))))
    # row-major vec(F·D) = (I ⊗ Dᵀ) vec(F)
    cobs = [_kron(f, _eye(f, v.dim), cb.cx.d(n + 1).T.copy()) for n in range(N)]
    return CochainComplexRealization(f, amb, spaces, cobs, label="Hom_E(CB_n,V)")


def restriction_map(ma: ModuleAlgebra, v: EquivariantBimodule, n: int) -> np.ndarray:
    """F ↦ (x ↦ F(1⊗x⊗1)) from Hom(A^{⊗n+2},V) to Hom(A^{⊗n},V), row-major vecs."""
    f, A = ma.field, ma.A
    dA, dV = A.dim, v.dim
    src, tgt = dA ** (n + 2), dA ** n
    inc = zeros(f, src, tgt)
    for ti, t in enumerate(all_tuples([dA] * n) if n else [()]):
        for idx, c in tensor_vectors(f, [A.unit] + [{i: 1} for i in t] + [A.unit], [dA] * (n + 2)).items():
            inc[idx, ti] = c
    # vec(F·inc) = (I ⊗ incᵀ) vec(F)
    return _kron(f, _eye(f, dV), inc.T.copy())


def model_crosscheck(ma: ModuleAlgebra, v: EquivariantBimodule, N: int = 2) -> OracleReport:
    f = ma.field
    red = cochain_complex(ma, v, N + 1)
    full = full_cochain_complex(ma, v, N + 1)
    rep = OracleReport("cochain-models", f.label)
    for n in range(N + 1):
        rep.add("dimension", n, red.spaces[n].dim == full.spaces[n].dim,
                witness={"reduced": red.spaces[n].dim, "full": full.spaces[n].dim})
        R = restriction_map(ma, v, n)
        img = matmul(f, R, full.spaces[n].basis.T.copy())
        rep.add("restriction_lands_in_reduced", n, red.spaces[n].contains_all(img.T.copy()))
        rep.add("restriction_injective", n, mrank(f, img) == full.spaces[n].dim)
        R1 = restriction_map(ma, v, n + 1)
        lhs = matmul(f, R1, full.restricted(n))
        rhs = matmul(f, red.coboundaries[n], img)
        rep.add("coboundaries_commute", n, is_zero(f, lhs - rhs))
    return rep


def hh01_closed_forms(ma: ModuleAlgebra, v: EquivariantBimodule) -> tuple[int, int]:
    """(dim (ᴮV)^{Lie(A)}, dim Der_B(A,V) − dim [A, ᴮV])."""
    f, A, B = ma.field, ma.A, ma.B
    dA, dV = A.dim, v.dim
    inv_rows = []
    for b in range(B.dim):
        M = _op_matrix(f, v.left_B[b], dV)
        inv_rows.append(reduce_array(f, M - _eye(f, dV) * B.counit[b]))
    BV = kernel_basis(Matrix(f, np.concatenate(inv_rows, axis=0)))
    comm_rows = [reduce_array(f, _op_matrix(f, v.left_A[a], dV) - _op_matrix(f, [v.right_A[x][a] for x in range(dV)], dV))
                 for a in range(dA)]
    hh0 = kernel_basis(Matrix(f, np.concatenate(inv_rows + comm_rows, axis=0))).dim
    # derivations D: A→V as dV×dA matrices, row-major vec
    rows = []
    for a1, a2 in itertools.product(range(dA), range(dA)):
        # D(a1 a2) − a1 D(a2) − D(a1) a2 = 0, one row per output coordinate
        block = zeros(f, dV, dV * dA)
        for k, c in A.mult[a1][a2].items():
            for y in range(dV):
                block[y, y * dA + k] += c
        for x in range(dV):
            for y, c in v.left_A[a1][x].items():
                block[y, x * dA + a2] -= c
            for y, c in v.right_A[x][a2].items():
                block[y, x * dA + a1] -= c
        rows.append(reduce_array(f, block))
    Ls = [_op_matrix(f, v.left_B[b], dV) for b in range(B.dim)]
    Rs = [_tensor_action_A(ma, 1, b) for b in range(B.dim)]
    rows.append(_hom_constraint(f, Ls, Rs, dV, dA))
    der = kernel_basis(Matrix(f, np.concatenate(rows, axis=0))).dim
    inner = hochschild_coboundary(ma, v, 0)
    inner_dim = mrank(f, matmul(f, inner, BV.basis.T.copy())) if BV.dim else 0
    return hh0, der - inner_dim


# ---------------------------------------------------------------------------
# V^op ⊗_E CB_* and the comparison with coinvariants of QCH


@dataclass(eq=False)
class VopTensor:
    cb: BarComplex
    qc: QuotientComplex
    right: list


def vop_tensor_complex(ma: ModuleAlgebra, v: EquivariantBimodule, N: int,
                       cb: BarComplex | None = None, check: bool = True) -> VopTensor:
    """V⊗CB_n modulo span{v·e⊗c − v⊗e·c}, with differential id⊗d."""
    f = ma.field
    cb = cb or build_cb(ma, N)
    right = vop_right_action(cb.cp, v)
    dV = v.dim
    Rv = [assemble(f, dV, dV, lambda x, e=e: right[x][e]) for e in range(cb.cp.dim)]
    I_V = _eye(f, dV)
    dims = [dV * d for d in cb.cx.dims]
    faces = [[_kron(f, I_V, face) for face in fl] for fl in cb.cx.faces]
    cx = ChainComplexRealization(f, dims, faces, "V⊗CB_n, index v*dim(CB_n)+c", label="V⊗CB")
    subs = []
    for n in range(N + 1):
        dC = cb.cx.dims[n]
        I_C = _eye(f, dC)
        sub = empty_subspace(f, dims[n])
        for e in range(cb.cp.dim):
            rel = reduce_array(f, _kron(f, Rv[e], I_C) - _kron(f, I_V, cb.e_action(n, e)))
            sub = span_of_columns(f, rel, dims[n], start=sub)
        subs.append(sub)
    qc = quotient_of(cx, subs, "vop_tensor", check=check)
    return VopTensor(cb, qc, right)


def _phi_matrix(ma: ModuleAlgebra, v: EquivariantBimodule, n: int) -> np.ndarray:
    """σ_n·(a₁⊗…⊗aₙ⊗v ↦ v⊗(1⊗a₁⊗…⊗aₙ⊗1)), σ_n = (−1)^{n(n+1)/2}."""
    f, A = ma.field, ma.A
    dA, dV = A.dim, v.dim
    shp = [dA] * n + [dV]
    tuples = all_tuples(shp)
    dC = dA ** (n + 2)
    sg = _twist(n)

    def col(k):
        t = tuples[k]
        vec = tensor_vectors(f, [A.unit] + [{i: 1} for i in t[:-1]] + [A.unit], [dA] * (n + 2), sg)
        return {t[-1] * dC + c: x for c, x in vec.items()}

    return assemble(f, dV * dC, len(tuples), col)


def _s_matrix(ma: ModuleAlgebra, v: EquivariantBimodule, n: int) -> np.ndarray:
    """σ_n·(v⊗(a⊗a₁⊗…⊗aₙ⊗a') ↦ a₁⊗…⊗aₙ⊗a'va)."""
    f, A = ma.field, ma.A
    dA, dV = A.dim, v.dim
    dC = dA ** (n + 2)
    tgt = [dA] * n + [dV]
    sg = _twist(n)

    def col(k):
        x, ci = divmod(k, dC)
        t = decode(ci, [dA] * (n + 2))
        w = v.rmul(v.lmul({t[-1]: 1}, {x: 1}), {t[0]: 1})
        return tensor_vectors(f, [{i: 1} for i in t[1:-1]] + [w], tgt, sg)

    return assemble(f, dA ** n * dV, dV * dC, col)


def _in_sub(sub: SubspaceBasis, cols: np.ndarray):
    """None if every column lies in ``sub``, else the index of the first one that does not."""
    if cols.shape[1] == 0:
        return None
    mask = sub.contains(cols.T.copy())
    bad = np.flatnonzero(~mask)
    return None if len(bad) == 0 else int(bad[0])


def main_iso_oracle(ma: ModuleAlgebra, v: EquivariantBimodule, N: int = 3) -> OracleReport:
    """φ″: _B QCH_* → V^op⊗_E CB_* and its inverse s, checked degreewise for n ≤ N."""
    f = ma.field
    ma.B.require_antipode(inverse=True)
    rep = OracleReport("main-iso", f.label)
    ch = build_ch(ma, v, N + 1)
    qc = quotient_complex(ma, v, N, mode="coinvariant_qch", ch=ch)
    vt = vop_tensor_complex(ma, v, N, check=False)
    tq = vt.qc
    try:
        quotient_of(tq.base, tq.subspaces, "vop_tensor", check=True)
        rep.add("relations_d_stable", None, True)
    except Exception as exc:  # StabilityViolation
        rep.add("relations_d_stable", None, False, witness=str(exc))
    U, R = qc.subspaces, tq.subspaces
    phis = [_phi_matrix(ma, v, n) for n in range(N + 1)]
    ss = [_s_matrix(ma, v, n) for n in range(N + 1)]
    for n in range(N + 1):
        w = _in_sub(R[n], matmul(f, phis[n], U[n].basis.T.copy()) if U[n].dim else zeros(f, R[n].ambient_dim, 0))
        rep.add("phi_well_defined", n, w is None, witness={"U_vector": w})
        w = _in_sub(U[n], matmul(f, ss[n], R[n].basis.T.copy()) if R[n].dim else zeros(f, U[n].ambient_dim, 0))
        rep.add("s_well_defined", n, w is None, witness={"relation": w})
        if n >= 1:
            diff = matmul(f, phis[n - 1], ch.cx.d(n)) - matmul(f, tq.base.d(n), phis[n])
            w = _in_sub(R[n - 1], reduce_array(f, diff))
            rep.add("phi_chain_map", n, w is None, witness={"CH_basis": w})
            diff = matmul(f, ss[n - 1], tq.base.d(n)) - matmul(f, ch.cx.d(n), ss[n])
            w = _in_sub(U[n - 1], reduce_array(f, diff))
            rep.add("s_chain_map", n, w is None, witness={"tensor_basis": w})
        d1 = reduce_array(f, matmul(f, phis[n], ss[n]) - _eye(f, R[n].ambient_dim))
        w = _in_sub(R[n], d1)
        rep.add("phi_s_identity", n, w is None, witness={"tensor_basis": w})
        d2 = reduce_array(f, matmul(f, ss[n], phis[n]) - _eye(f, U[n].ambient_dim))
        w = _in_sub(U[n], d2)
        rep.add("s_phi_identity", n, w is None, witness={"CH_basis": w})
        rep.add("dimension", n, qc.qdim(n) == tq.qdim(n), witness={"BQCH": qc.qdim(n), "vop_tensor": tq.qdim(n)})
    rep.tables["BQCH_dims"] = qc.qdims()
    rep.tables["vop_tensor_dims"] = tq.qdims()
    if N >= 1:
        rep.tables["BQCH_homology"] = homology_dims(qc, N - 1).dims()
        rep.tables["vop_tensor_homology"] = homology_dims(tq, N - 1).dims()
    return rep


def tor0_closed_form(ma: ModuleAlgebra, v: EquivariantBimodule) -> int:
    """dim _BV/[A,_BV] = dim V − dim span{b v − ε(b)v, a v − v a}."""
    f = ma.field
    dV = v.dim
    cols = []
    for b in range(ma.B.dim):
        cols.append(reduce_array(f, _op_matrix(f, v.left_B[b], dV) - _eye(f, dV) * ma.B.counit[b]))
    for a in range(ma.A.dim):
        cols.append(reduce_array(f, _op_matrix(f, v.left_A[a], dV)
                                 - _op_matrix(f, [v.right_A[x][a] for x in range(dV)], dV)))
    return dV - mrank(f, np.concatenate(cols, axis=1))


def tor_ext_crosscheck(ma: ModuleAlgebra, v: EquivariantBimodule, N: int = 3) -> OracleReport:
    """Tor_n(Ω,V^op) and Ext^n(Ω,V) through CB_{*>0}, against HH_{n+1} and HH^{n+1}."""
    f = ma.field
    rep = OracleReport("tor-ext", f.label)
    ma.B.require_antipode(inverse=True)
    ch = build_ch(ma, v, N + 1)
    qc = quotient_complex(ma, v, N, mode="coinvariant_qch", ch=ch)
    hh = homology_dims(qc, N - 1 if N >= 1 else 0).as_dict()
    vt = vop_tensor_complex(ma, v, N, check=False).qc
    # truncated complex T_k = V^op⊗_E CB_{k+1}; for k ≥ 1 its homology is that of the full tensor complex
    tor = {}
    for k in range(1, N - 1):
        n = k + 1
        rk_out = vt.rank_out(n)
        rk_in = vt.rank_out(n + 1)
        tor[k] = vt.qdim(n) - rk_out - rk_in
        rep.add("tor_vs_homology", k, tor[k] == hh.get(k + 1), witness={"tor": tor[k], "HH": hh.get(k + 1)})
    tor[0] = vt.qdim(1) - vt.rank_out(2) if N >= 2 else None
    rep.tables["tor"] = tor
    rep.tables["HH_hopf"] = hh
    c0 = tor0_closed_form(ma, v)
    rep.add("degree0_closed_form", 0, c0 == hh[0], witness={"BV/[A,BV]": c0, "HH_0": hh[0]})
    # cohomology side
    red = cochain_complex(ma, v, N)
    full = full_cochain_complex(ma, v, N)
    hc = cohomology_dims(red, N - 1).as_dict()
    ext = {}
    for k in range(1, N - 1):
        n = k + 1
        r_out = mrank(f, full.restricted(n)) if n < len(full.coboundaries) else None
        r_in = mrank(f, full.restricted(n - 1))
        if r_out is None:
            continue
        ext[k] = full.spaces[n].dim - r_out - r_in
        rep.add("ext_vs_cohomology", k, ext[k] == hc.get(k + 1), witness={"ext": ext[k], "HH": hc.get(k + 1)})
    rep.tables["ext"] = ext
    rep.tables["HH^hopf"] = hc
    return rep
