"""Exact scalars and dense linear algebra over Q or F_p.

Rational matrices are numpy object arrays of ``int``/``Fraction``;
prime-field matrices are ``int64`` arrays of residues in ``[0, p)``.
Nothing here ever touches floating point except the blocked modular
matrix product, which is exact because every partial sum stays
below 2**53.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, ShapeError

_FLOAT_EXACT = 2 ** 53


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    kind: str = "rational"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("rational", "prime"):
            raise ParseError(f"unknown field kind {self.kind!r}")
        if self.kind == "prime":
            if self.p is None or not _is_prime(int(self.p)):
                raise ParseError(f"p must be prime (got {self.p})")
        elif self.p is not None:
            raise ParseError("p given for the rational field")

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @classmethod
    def prime(cls, p: int = 32003) -> "FieldSpec":
        return cls("prime", p)

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    @property
    def label(self) -> str:
        return "QQ" if self.kind == "rational" else f"GF({self.p})"

    @property
    def dtype(self):
        return np.int64 if self.is_prime and not self._big else object

    @property
    def _big(self) -> bool:
        # residues whose products overflow int64 fall back to python ints
        return self.is_prime and (self.p - 1) ** 2 >= 2 ** 62

    # -- scalars ---------------------------------------------------------
    def __call__(self, x):
        """Coerce an int, Fraction or ``"num/den"`` string into the field."""
        if isinstance(x, str):
            try:
                x = Fraction(x.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad scalar {x!r}") from exc
        if isinstance(x, bool):
            x = int(x)
        if isinstance(x, (np.integer,)):
            x = int(x)
        if isinstance(x, float):
            raise ParseError("floating point scalars are not accepted")
        if not isinstance(x, (int, Fraction)):
            raise ParseError(f"bad scalar {x!r}")
        if self.is_prime:
            if isinstance(x, Fraction):
                den = x.denominator % self.p
                if den == 0:
                    raise ParseError(f"denominator {x.denominator} vanishes mod {self.p}")
                return x.numerator * pow(den, -1, self.p) % self.p
            return x % self.p
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def norm(self, x):
        """Canonical representative of an already-valid element."""
        if self.is_prime:
            return int(x) % self.p
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def inv(self, x):
        if self.is_prime:
            x = int(x) % self.p
            if x == 0:
                raise ZeroDivisionError("inverse of zero")
            return pow(x, -1, self.p)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.norm(Fraction(1) / x)

    def is_zero(self, x) -> bool:
        if self.is_prime:
            return int(x) % self.p == 0
        return x == 0

    def to_text(self, x) -> str:
        x = self.norm(x)
        if isinstance(x, Fraction):
            return f"{x.numerator}/{x.denominator}"
        return str(x)

    # -- sparse vectors (dict index -> scalar) -----------------------------
    def clean(self, vec: dict) -> dict:
        """Normalize coefficients and drop zeros."""
        if self.is_prime:
            p = self.p
            return {k: v % p for k, v in vec.items() if v % p}
        return {k: self.norm(v) for k, v in vec.items() if v != 0}


RATIONAL = FieldSpec.rational()


# ---------------------------------------------------------------------------
# Matrix


@dataclass(frozen=True, eq=False)
class Matrix:
    field: FieldSpec
    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 2:
            raise ShapeError("matrix data must be 2-dimensional")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def entries(self) -> list:
        return [self.field.norm(x) for x in self.data.ravel().tolist()]

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = list(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        out = zeros(field, len(rows), ncols)
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ShapeError(f"row {i} has length {len(r)}, expected {ncols}")
            for j, x in enumerate(r):
                out[i, j] = field(x)
        return cls(field, out)

    @classmethod
    def from_triples(cls, field: FieldSpec, nrows: int, ncols: int, triples: Iterable) -> "Matrix":
        out = zeros(field, nrows, ncols)
        for i, j, x in triples:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise ShapeError(f"triple index ({i},{j}) out of range")
            out[i, j] = field.norm(out[i, j] + field(x))
        return cls(field, out)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        out = zeros(field, n, n)
        for i in range(n):
            out[i, i] = 1
        return cls(field, out)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.field, matmul(self.field, self.data, other.data))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix) or self.data.shape != other.data.shape:
            return False
        return bool(np.all(reduce_array(self.field, self.data - other.data) == 0))

    __hash__ = None

    def is_zero(self) -> bool:
        return bool(np.all(reduce_array(self.field, self.data) == 0))

    def tolist(self) -> list[list]:
        return [[self.field.norm(x) for x in row] for row in self.data.tolist()]


def zeros(field: FieldSpec, rows: int, cols: int) -> np.ndarray:
    if field.dtype is object:
        out = np.empty((rows, cols), dtype=object)
        out.fill(0)
        return out
    return np.zeros((rows, cols), dtype=np.int64)


def reduce_array(field: FieldSpec, a: np.ndarray) -> np.ndarray:
    if field.is_prime:
        return a % field.p
    return a


def matmul(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product of two field matrices."""
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    if field.dtype is object:
        if a.shape[1] == 0:
            return zeros(field, a.shape[0], b.shape[1])
        out = np.dot(a, b)
        if field.is_prime:
            out = out % field.p
        return out
    p = field.p
    k = a.shape[1]
    if k == 0:
        return zeros(field, a.shape[0], b.shape[1])
    step = (_FLOAT_EXACT - 1) // ((p - 1) ** 2 or 1)
    if step == 0:
        # a single product already exceeds the float mantissa
        out = np.dot((a % p).astype(object), (b % p).astype(object)) % p
        return out.astype(np.int64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    af = (a % p).astype(np.float64)
    bf = (b % p).astype(np.float64)
    for s in range(0, k, step):
        part = af[:, s:s + step] @ bf[s:s + step, :]
        out = (out + np.fmod(part, p).astype(np.int64)) % p
    return out


# ---------------------------------------------------------------------------
# Echelon forms


def _rref_prime(m: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    m = m % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = (m[hit] - np.outer(col[hit], m[r]) % p) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _rref_object(m: np.ndarray, field: FieldSpec) -> tuple[np.ndarray, list[int]]:
    rows = [list(r) for r in m.tolist()]
    ncols = m.shape[1]
    pivots: list[int] = []
    out: list[list] = []
    norm = field.norm
    inv = field.inv
    for c in range(ncols):
        piv = None
        for idx, row in enumerate(rows):
            if not field.is_zero(row[c]):
                piv = idx
                break
        if piv is None:
            continue
        prow = rows.pop(piv)
        s = inv(prow[c])
        prow = [norm(x * s) for x in prow]
        rest = []
        for row in rows:
            f = row[c]
            if not field.is_zero(f):
                row = [norm(x - f * y) for x, y in zip(row, prow)]
            if any(not field.is_zero(x) for x in row):
                rest.append(row)
        rows = rest
        for j, row in enumerate(out):
            f = row[c]
            if not field.is_zero(f):
                out[j] = [norm(x - f * y) for x, y in zip(row, prow)]
        out.append(prow)
        pivots.append(c)
        if not rows:
            break
    res = zeros(field, len(out), ncols)
    for i, row in enumerate(out):
        res[i, :] = row
    return res, pivots


def rref(field: FieldSpec, m: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form: leftmost pivot, first nonzero row, unit pivots."""
    if m.shape[0] == 0 or m.shape[1] == 0:
        return zeros(field, 0, m.shape[1]), []
    if field.dtype is object:
        return _rref_object(m, field)
    return _rref_prime(m.astype(np.int64, copy=True), field.p)


def _rank_fraction_free(m: np.ndarray) -> int:
    rows = []
    for r in m.tolist():
        den = 1
        for x in r:
            if isinstance(x, Fraction):
                den = den * x.denominator // np.gcd(den, x.denominator)
        ints = [int(x * den) for x in r]
        if any(ints):
            rows.append(ints)
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    from math import gcd
    for c in range(ncols):
        piv = next((i for i, r in enumerate(rows) if r[c]), None)
        if piv is None:
            continue
        prow = rows.pop(piv)
        a = prow[c]
        nxt = []
        for r in rows:
            b = r[c]
            if b:
                r = [a * x - b * y for x, y in zip(r, prow)]
                g = 0
                for x in r:
                    if x:
                        g = gcd(g, x)
                        if g == 1:
                            break
                if g > 1:
                    r = [x // g for x in r]
            if any(r):
                nxt.append(r)
        rows = nxt
        rank += 1
        if not rows:
            break
    return rank


# ---------------------------------------------------------------------------
# Public kernel operations


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    field: FieldSpec
    ambient_dim: int
    basis: np.ndarray  # rows, reduced echelon form
    pivot_cols: tuple[int, ...] = dc_field(default=())

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def vectors(self) -> list[list]:
        return [[self.field.norm(x) for x in row] for row in self.basis.tolist()]

    def reduce(self, vecs: np.ndarray) -> np.ndarray:
        """Remainders of the rows of ``vecs`` after elimination against the basis."""
        if self.dim == 0 or vecs.shape[0] == 0:
            return reduce_array(self.field, vecs)
        piv = list(self.pivot_cols)
        coeff = vecs[:, piv]
        out = vecs - matmul(self.field, coeff, self.basis)
        return reduce_array(self.field, out)

    def contains(self, vecs: np.ndarray) -> np.ndarray:
        """Boolean mask: which rows of ``vecs`` lie in the subspace."""
        if vecs.shape[0] == 0:
            return np.zeros(0, dtype=bool)
        rem = self.reduce(vecs)
        if self.field.dtype is object:
            return np.array([all(self.field.is_zero(x) for x in r) for r in rem.tolist()], dtype=bool)
        return ~np.any(rem != 0, axis=1)

    def contains_all(self, vecs: np.ndarray) -> bool:
        return bool(np.all(self.contains(vecs)))

    def equals(self, other: "SubspaceBasis") -> bool:
        return (self.ambient_dim == other.ambient_dim and self.pivot_cols == other.pivot_cols
                and Matrix(self.field, self.basis) == Matrix(other.field, other.basis))


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.field.kind == "rational":
        return _rank_fraction_free(m.data)
    return len(rref(m.field, m.data)[1])


def empty_subspace(field: FieldSpec, n: int) -> SubspaceBasis:
    return SubspaceBasis(field, n, zeros(field, 0, n), ())


def span_reduce_array(field: FieldSpec, vecs: np.ndarray, ambient_dim: int,
                      start: SubspaceBasis | None = None, chunk: int = 2048) -> SubspaceBasis:
    """Reduced echelon basis of the row span of ``vecs`` (plus ``start``).

    Rows are consumed in blocks so that long generator lists never form one
    huge elimination problem.
    """
    if vecs.ndim != 2 or vecs.shape[1] != ambient_dim:
        raise ShapeError(f"vectors must have length {ambient_dim}")
    sub = start if start is not None else empty_subspace(field, ambient_dim)
    basis = sub.basis
    pivots = list(sub.pivot_cols)
    for s in range(0, vecs.shape[0], chunk):
        block = reduce_array(field, vecs[s:s + chunk])
        if field.dtype is not object:
            block = block.astype(np.int64)
        if pivots:
            block = SubspaceBasis(field, ambient_dim, basis, tuple(pivots)).reduce(block)
        if field.dtype is object:
            keep = [i for i, r in enumerate(block.tolist()) if any(not field.is_zero(x) for x in r)]
        else:
            keep = np.flatnonzero(np.any(block != 0, axis=1)).tolist()
        if not keep:
            continue
        new, newpiv = rref(field, block[keep])
        if not newpiv:
            continue
        if pivots:
            basis = reduce_array(field, basis - matmul(field, basis[:, newpiv], new))
        merged = sorted([(c, basis[i]) for i, c in enumerate(pivots)] + [(c, new[i]) for i, c in enumerate(newpiv)],
                        key=lambda t: t[0])
        pivots = [c for c, _ in merged]
        basis = np.array([row for _, row in merged], dtype=field.dtype).reshape(len(merged), ambient_dim)
    return SubspaceBasis(field, ambient_dim, basis, tuple(pivots))


def span_reduce(field: FieldSpec, vectors: Sequence[Sequence], ambient_dim: int) -> SubspaceBasis:
    arr = zeros(field, len(vectors), ambient_dim)
    for i, v in enumerate(vectors):
        if len(v) != ambient_dim:
            raise ShapeError(f"vector {i} has length {len(v)}, expected {ambient_dim}")
        for j, x in enumerate(v):
            arr[i, j] = field(x)
    return span_reduce_array(field, arr, ambient_dim)


def kernel_basis(m: Matrix) -> SubspaceBasis:
    field = m.field
    n = m.cols
    red, piv = rref(field, m.data)
    free = [c for c in range(n) if c not in set(piv)]
    vecs = zeros(field, len(free), n)
    for k, f in enumerate(free):
        vecs[k, f] = 1
        for r, c in enumerate(piv):
            vecs[k, c] = field.norm(-red[r, f])
    return span_reduce_array(field, vecs, n)


def image_basis(m: Matrix) -> SubspaceBasis:
    """Column space of ``m``."""
    return span_reduce_array(m.field, m.data.T.copy(), m.rows)


@dataclass(frozen=True, eq=False)
class QuotientData:
    complement_indices: tuple[int, ...]
    project: Matrix


def quotient_data(sub: SubspaceBasis) -> QuotientData:
    field = sub.field
    n = sub.ambient_dim
    piv = set(sub.pivot_cols)
    comp = [c for c in range(n) if c not in piv]
    proj = zeros(field, len(comp), n)
    for r, c in enumerate(comp):
        proj[r, c] = 1
    for i, pc in enumerate(sub.pivot_cols):
        for r, c in enumerate(comp):
            if not field.is_zero(sub.basis[i, c]):
                proj[r, pc] = field.norm(-sub.basis[i, c])
    return QuotientData(tuple(comp), Matrix(field, proj))


def project_columns(sub: SubspaceBasis, cols: np.ndarray) -> np.ndarray:
    """Quotient coordinates of the columns of ``cols`` (ambient x m)."""
    field = sub.field
    piv = set(sub.pivot_cols)
    comp = [c for c in range(sub.ambient_dim) if c not in piv]
    out = cols[comp, :]
    if sub.dim:
        out = out - matmul(field, sub.basis[:, comp].T.copy(), cols[list(sub.pivot_cols), :])
    return reduce_array(field, out)


def vectors_to_array(field: FieldSpec, vecs: Sequence[dict], n: int) -> np.ndarray:
    """Dense rows from sparse dict vectors."""
    arr = zeros(field, len(vecs), n)
    for i, v in enumerate(vecs):
        for k, x in v.items():
            arr[i, k] = x
    return arr
