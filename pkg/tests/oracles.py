"""Independent reference computations for the test-suite.

Nothing here imports hhcalc.  Everything is plain Fraction arithmetic on
dense lists, and Hochschild chains use the textbook convention
v⊗a₁⊗…⊗aₙ with the coefficient first:

    b(v⊗a₁…aₙ) = va₁⊗a₂… + Σ (−1)^i v⊗…a_i a_{i+1}… + (−1)^n aₙv⊗a₁…a_{n−1}.

Structures are given as dense tables: mult[i][j] is the coefficient list of
e_i e_j, act[b][a] the coefficient list of b·e_a, comult[b] a list of
(coeff, j, k).
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def rank(rows: list[list[Fraction]]) -> int:
    m = [list(map(Fraction, r)) for r in rows if any(r)]
    if not m:
        return 0
    ncol = len(m[0])
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def row_space(rows, n):
    """Reduced basis of the span of ``rows`` (list of length-n lists)."""
    m = [list(map(Fraction, r)) for r in rows if any(r)]
    basis, pivots = [], []
    for v in m:
        v = v[:]
        for b, p in zip(basis, pivots):
            if v[p] != 0:
                f = v[p]
                v = [x - f * y for x, y in zip(v, b)]
        p = next((i for i, x in enumerate(v) if x != 0), None)
        if p is None:
            continue
        inv = 1 / v[p]
        v = [x * inv for x in v]
        for i, b in enumerate(basis):
            if b[p] != 0:
                f = b[p]
                basis[i] = [x - f * y for x, y in zip(b, v)]
        basis.append(v)
        pivots.append(p)
    return basis, pivots


def _reduce(v, basis, pivots):
    v = list(v)
    for b, p in zip(basis, pivots):
        if v[p] != 0:
            f = v[p]
            v = [x - f * y for x, y in zip(v, b)]
    return v


def _mul(mult, x, y):
    n = len(x)
    out = [Fraction(0)] * n
    for i, a in enumerate(x):
        if a == 0:
            continue
        for j, b in enumerate(y):
            if b == 0:
                continue
            for k, c in enumerate(mult[i][j]):
                if c:
                    out[k] += a * b * c
    return out


def _unit(n, i):
    v = [Fraction(0)] * n
    v[i] = Fraction(1)
    return v


def _tensor_index(idx, dims):
    k = 0
    for i, d in zip(idx, dims):
        k = k * d + i
    return k


def hochschild_chains(mult, dim_a, n):
    """Basis tuples (v, a₁..aₙ) of A⊗A^{⊗n}, regular coefficients."""
    return list(itertools.product(range(dim_a), repeat=n + 1))


def boundary(mult, dim_a, n):
    """Matrix (list of columns) of b: C_n → C_{n−1} for V = A."""
    cols = []
    dims_lo = [dim_a] * n
    for t in itertools.product(range(dim_a), repeat=n + 1):
        v, a = t[0], t[1:]
        col = [Fraction(0)] * dim_a ** n
        # va₁ ⊗ a₂…
        prod = mult[v][a[0]]
        for k, c in enumerate(prod):
            if c:
                col[_tensor_index((k,) + a[1:], dims_lo)] += c
        for i in range(1, n):
            prod = mult[a[i - 1]][a[i]]
            for k, c in enumerate(prod):
                if c:
                    col[_tensor_index((v,) + a[:i - 1] + (k,) + a[i + 1:], dims_lo)] += (-1) ** i * c
        prod = mult[a[-1]][v]
        for k, c in enumerate(prod):
            if c:
                col[_tensor_index((k,) + a[:-1], dims_lo)] += (-1) ** n * c
        cols.append(col)
    return cols


def ordinary_hh(mult, dim_a, up_to):
    """dim HH_n(A, A) for n = 0..up_to."""
    ranks = [0]
    for n in range(1, up_to + 2):
        cols = boundary(mult, dim_a, n)
        ranks.append(rank(cols))
    return [dim_a ** (n + 1) - ranks[n] - ranks[n + 1] for n in range(up_to + 1)]


def _diag_action(act, comult_iter, dim_a, n, b):
    """Diagonal action of B on A^{⊗(n+1)} through the (n+1)-fold coproduct of b."""
    legs = comult_iter(b, n + 1)
    dims = [dim_a] * (n + 1)
    cols = []
    for t in itertools.product(range(dim_a), repeat=n + 1):
        col = [Fraction(0)] * dim_a ** (n + 1)
        for c, key in legs:
            factors = [act[key[i]][t[i]] for i in range(n + 1)]
            for idx in itertools.product(*[[k for k, x in enumerate(f) if x] for f in factors]):
                coeff = c
                for f, k in zip(factors, idx):
                    coeff *= f[k]
                col[_tensor_index(idx, dims)] += coeff
        cols.append(col)
    return cols


def iterated(comult):
    """(b, m) ↦ list of (coeff, legs) for the m-fold coproduct."""
    cache = {}

    def go(b, m):
        if (b, m) in cache:
            return cache[(b, m)]
        if m == 1:
            out = [(Fraction(1), (b,))]
        else:
            acc = {}
            for c, key in go(b, m - 1):
                for c2, j, k in comult[key[0]]:
                    nk = (j, k) + key[1:]
                    acc[nk] = acc.get(nk, 0) + c * c2
            out = [(Fraction(v), k) for k, v in acc.items() if v]
        cache[(b, m)] = out
        return out

    return go


def coinvariant_hh(mult, dim_a, act, comult, counit, up_to):
    """Homology of k⊗_B CH(A,A) for cocommutative B: quotient by span{b·x − ε(b)x}."""
    go = iterated(comult)
    nb = len(act)
    subs = []
    for n in range(up_to + 2):
        dim = dim_a ** (n + 1)
        rows = []
        for b in range(nb):
            cols = _diag_action(act, go, dim_a, n, b)
            for j, col in enumerate(cols):
                v = list(col)
                v[j] -= Fraction(counit[b])
                rows.append(v)
        subs.append(row_space(rows, dim))
    ranks = [0]
    for n in range(1, up_to + 2):
        basis_lo, piv_lo = subs[n - 1]
        cols = boundary(mult, dim_a, n)
        basis_hi, piv_hi = subs[n]
        # quotient rank: rank of [d(cols) ; U_{n-1}] minus dim U_{n-1}, on a complement of U_n
        imgs = [_reduce(c, basis_lo, piv_lo) for c in cols]
        ranks.append(rank(imgs))
    out = []
    for n in range(up_to + 1):
        q = dim_a ** (n + 1) - len(subs[n][0])
        out.append(q - ranks[n] - ranks[n + 1])
    return out


def equivariant_hh_cohomology(mult, dim_a, act, comult, counit, antipode, up_to):
    """dim HH^n for n ≤ up_to of B-equivariant Hochschild cochains A^{⊗n} → A.

    Cochains are matrices f (dim_a × dim_a^n, row-major vector), equivariance
    b·f(x) = f(b·x) for all b, via the diagonal action; coboundary in the
    textbook convention (δf)(a₀…aₙ) = a₀f(a₁…) + Σ(−1)^{i+1} f(…a_i a_{i+1}…) + (−1)^{n+1} f(a₀…a_{n−1})aₙ.
    """
    go = iterated(comult)
    nb = len(act)

    def diag(n, b):
        if n == 0:
            return [[Fraction(counit[b])]]
        legs = go(b, n)
        dims = [dim_a] * n
        cols = []
        for t in itertools.product(range(dim_a), repeat=n):
            col = [Fraction(0)] * dim_a ** n
            for c, key in legs:
                factors = [act[key[i]][t[i]] for i in range(n)]
                for idx in itertools.product(*[[k for k, x in enumerate(f) if x] for f in factors]):
                    coeff = c
                    for f, k in zip(factors, idx):
                        coeff *= f[k]
                    col[_tensor_index(idx, dims)] += coeff
            cols.append(col)
        return cols

    def equivariant_space(n):
        m = dim_a ** n
        N = dim_a * m  # f[r][s] at r*m + s
        rows = []
        for b in range(nb):
            # B acts on Hom by b·f = b₁ ∘ f ∘ S(b₂)-action; equivariant ⇔ b₁ f(S(b₂)x) = ε(b) f(x)
            for r_out in range(dim_a):
                for s_in in range(m):
                    row = [Fraction(0)] * N
                    for c, p, q in comult[b]:
                        # S(q) as combination
                        for sq, sc in enumerate(antipode[q]):
                            if not sc:
                                continue
                            Dx = diag(n, sq)[s_in]  # S(q)·e_s
                            for s2, dx in enumerate(Dx):
                                if not dx:
                                    continue
                                for r2 in range(dim_a):
                                    a = act[p][r2][r_out]
                                    if a:
                                        row[r2 * m + s2] += c * sc * dx * a
                    row[r_out * m + s_in] -= Fraction(counit[b])
                    rows.append(row)
        basis, piv = row_space(rows, N)
        # kernel of the constraint rows
        free = [c for c in range(N) if c not in piv]
        ker = []
        for fc in free:
            v = [Fraction(0)] * N
            v[fc] = Fraction(1)
            for b_, p in zip(basis, piv):
                v[p] = -b_[fc]
            ker.append(v)
        return ker

    def coboundary(fvec, n):
        m = dim_a ** n
        out = [Fraction(0)] * (dim_a * dim_a ** (n + 1))
        m1 = dim_a ** (n + 1)
        for t in itertools.product(range(dim_a), repeat=n + 1):
            col = _tensor_index(t, [dim_a] * (n + 1))

            def f_at(idx_vec):
                res = [Fraction(0)] * dim_a
                for s, coeff in idx_vec.items():
                    if coeff:
                        for r in range(dim_a):
                            res[r] += coeff * fvec[r * m + s]
                return res

            terms = [Fraction(0)] * dim_a
            inner = f_at({_tensor_index(t[1:], [dim_a] * n): Fraction(1)})
            for r, x in enumerate(_mul(mult, _unit(dim_a, t[0]), inner)):
                terms[r] += x
            for i in range(n):
                prod = mult[t[i]][t[i + 1]]
                idx = {}
                for k, c in enumerate(prod):
                    if c:
                        key = _tensor_index(t[:i] + (k,) + t[i + 2:], [dim_a] * n)
                        idx[key] = idx.get(key, 0) + c
                for r, x in enumerate(f_at(idx)):
                    terms[r] += (-1) ** (i + 1) * x
            inner = f_at({_tensor_index(t[:-1], [dim_a] * n): Fraction(1)})
            for r, x in enumerate(_mul(mult, inner, _unit(dim_a, t[-1]))):
                terms[r] += (-1) ** (n + 1) * x
            for r in range(dim_a):
                out[r * m1 + col] = terms[r]
        return out

    spaces = [equivariant_space(n) for n in range(up_to + 2)]
    ranks = []
    for n in range(up_to + 1):
        ranks.append(rank([coboundary(f, n) for f in spaces[n]]))
    return [len(spaces[n]) - ranks[n] - (ranks[n - 1] if n else 0) for n in range(up_to + 1)]


# -- reference data, typed in by hand --------------------------------------------

DUAL_MULT = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]          # basis 1, y with y² = 0
Z2_MULT = [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]            # basis e, g
TRIVIAL_ACT_DUAL = [[[1, 0], [0, 1]]]                     # B = k
TRIVIAL_COMULT = [[(1, 0, 0)]]
Z2_SIGN_ACT_DUAL = [[[1, 0], [0, 1]], [[1, 0], [0, -1]]]  # g·y = −y
Z2_COMULT = [[(1, 0, 0)], [(1, 1, 1)]]
Z2_COUNIT = [1, 1]
Z2_ANTIPODE = [[1, 0], [0, 1]]
