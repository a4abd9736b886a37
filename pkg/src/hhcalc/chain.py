"""Realized (co)chain complexes over an exact field, quotients and Betti tables."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from .errors import OracleFailure, SizeLimit, StabilityViolation
from .exactfield import (FieldSpec, Matrix, SubspaceBasis, empty_subspace, matmul, project_columns, rank,
                         reduce_array, span_reduce_array, zeros)

SIZE_CAP = 200_000


def check_size(dim: int, label: str, cap: int | None = None) -> None:
    cap = SIZE_CAP if cap is None else cap
    if dim > cap:
        raise SizeLimit(f"{label} has dimension {dim}, above the cap {cap}")


# ---------------------------------------------------------------------------
# tensor bases: row-major, rightmost index fastest


def encode(idx: Sequence[int], dims: Sequence[int]) -> int:
    k = 0
    for i, d in zip(idx, dims):
        k = k * d + i
    return k


def decode(k: int, dims: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(dims)
    for p in range(len(dims) - 1, -1, -1):
        k, out[p] = divmod(k, dims[p])
    return tuple(out)


def all_tuples(dims: Sequence[int]) -> list[tuple[int, ...]]:
    n = 1
    for d in dims:
        n *= d
    return [decode(k, dims) for k in range(n)]


def tensor_vectors(field: FieldSpec, factors: Sequence[dict], dims: Sequence[int], coeff=1) -> dict:
    """Sparse index vector of ``coeff·(x₁⊗…⊗x_m)`` in the row-major tensor basis."""
    acc = {(): coeff}
    for f in factors:
        if not f:
            return {}
        nxt: dict = {}
        for key, c in acc.items():
            for i, x in f.items():
                nk = key + (i,)
                nxt[nk] = nxt.get(nk, 0) + c * x
        acc = nxt
    out: dict = {}
    for key, c in acc.items():
        k = encode(key, dims)
        out[k] = out.get(k, 0) + c
    return field.clean(out)


def assemble(field: FieldSpec, nrows: int, ncols: int, column: Callable[[int], dict]) -> np.ndarray:
    """Dense matrix whose j-th column is the sparse vector ``column(j)``."""
    m = zeros(field, nrows, ncols)
    for j in range(ncols):
        for i, c in column(j).items():
            m[i, j] = field.norm(c) if field.dtype is not object else c
    return m


def mat_sub(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return reduce_array(field, a - b)


def mat_add(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return reduce_array(field, a + b)


def scal(field: FieldSpec, c, a: np.ndarray) -> np.ndarray:
    return reduce_array(field, a * c)


def is_zero(field: FieldSpec, a: np.ndarray) -> bool:
    return Matrix(field, reduce_array(field, a)).is_zero()


def first_nonzero_column(field: FieldSpec, a: np.ndarray):
    a = reduce_array(field, a)
    for j in range(a.shape[1]):
        col = a[:, j]
        if any(not field.is_zero(x) for x in col.tolist()):
            return j
    return None


def mrank(field: FieldSpec, a: np.ndarray) -> int:
    return rank(Matrix(field, a))


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckResult:
    check: str
    degree: int | None
    ok: bool
    witness: object = None
    note: str = ""

    def to_dict(self) -> dict:
        return {"check": self.check, "degree": self.degree, "ok": self.ok,
                "witness": _jsonable(self.witness), "note": self.note}


def _jsonable(w):
    if w is None or isinstance(w, (int, str, bool, float)):
        return w
    if isinstance(w, dict):
        return {str(k): _jsonable(v) for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [_jsonable(x) for x in w]
    return str(w)


@dataclass
class OracleReport:
    name: str
    field: str
    checks: list[CheckResult] = dc_field(default_factory=list)
    tables: dict = dc_field(default_factory=dict)
    notes: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, check: str, degree, ok: bool, witness=None, note: str = "") -> bool:
        self.checks.append(CheckResult(check, degree, bool(ok), None if ok else witness, note))
        return ok

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.ok]

    def raise_if_failed(self) -> "OracleReport":
        for c in self.checks:
            if not c.ok:
                raise OracleFailure(c.check, c.degree, c.witness)
        return self

    def to_dict(self) -> dict:
        return {"oracle": self.name, "field": self.field, "passed": self.passed,
                "checks": [c.to_dict() for c in self.checks],
                "tables": {k: _jsonable(v) for k, v in self.tables.items()}, "notes": list(self.notes)}

    def __str__(self) -> str:
        lines = [f"{self.name} [{self.field}]: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            deg = "" if c.degree is None else f" (degree {c.degree})"
            lines.append(f"  {'ok  ' if c.ok else 'FAIL'} {c.check}{deg}"
                         + ("" if c.ok or c.witness is None else f" witness={_jsonable(c.witness)}"))
        for k, v in self.tables.items():
            lines.append(f"  {k}: {v}")
        return "\n".join(lines)


@dataclass
class BettiTable:
    entries: list[tuple[int, int]]
    field: str
    provenance: str

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def dims(self) -> list[int]:
        return [d for _, d in self.entries]

    def __getitem__(self, n: int) -> int:
        return self.as_dict()[n]

    def to_dict(self) -> dict:
        return {"field": self.field, "complex": self.provenance,
                "betti": [{"degree": n, "dim": d} for n, d in self.entries]}


# ---------------------------------------------------------------------------
# chain complexes


@dataclass(eq=False)
class ChainComplexRealization:
    """Degrees 0..top with face maps; ``faces[n][j]`` maps C_n to C_{n-1}."""
    field: FieldSpec
    dims: list[int]
    faces: list[list[np.ndarray]]
    basis_desc: str
    label: str = "C"
    _diffs: dict = dc_field(default_factory=dict, repr=False)

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def d(self, n: int) -> np.ndarray:
        """d_n = Σ(−1)^j ∂_j : C_n → C_{n-1}; zero map out of C_0."""
        if n in self._diffs:
            return self._diffs[n]
        f = self.field
        if n == 0:
            out = zeros(f, 0, self.dims[0])
        else:
            out = zeros(f, self.dims[n - 1], self.dims[n])
            for j, face in enumerate(self.faces[n]):
                out = out + face if j % 2 == 0 else out - face
            out = reduce_array(f, out)
        self._diffs[n] = out
        return out

    def d_squared_failures(self) -> list[int]:
        bad = []
        for n in range(2, self.top + 1):
            if not is_zero(self.field, matmul(self.field, self.d(n - 1), self.d(n))):
                bad.append(n)
        return bad

    def presimplicial_failures(self) -> list[tuple[int, int, int]]:
        """Triples (n, i, j) with ∂_i∂_j ≠ ∂_{j-1}∂_i on C_n, i < j."""
        f = self.field
        bad = []
        for n in range(2, self.top + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs = matmul(f, self.faces[n - 1][i], self.faces[n][j])
                    rhs = matmul(f, self.faces[n - 1][j - 1], self.faces[n][i])
                    if not is_zero(f, lhs - rhs):
                        bad.append((n, i, j))
        return bad


def plain_homology(cc: ChainComplexRealization, up_to: int) -> BettiTable:
    f = cc.field
    out = []
    for n in range(up_to + 1):
        rk_out = mrank(f, cc.d(n)) if n > 0 else 0
        rk_in = mrank(f, cc.d(n + 1))
        out.append((n, cc.dims[n] - rk_out - rk_in))
    return BettiTable(out, f.label, cc.label)


@dataclass(eq=False)
class QuotientComplex:
    base: ChainComplexRealization
    subspaces: list[SubspaceBasis]
    mode: str
    _dbar: dict = dc_field(default_factory=dict, repr=False)

    @property
    def field(self) -> FieldSpec:
        return self.base.field

    @property
    def top(self) -> int:
        return len(self.subspaces) - 1

    def qdim(self, n: int) -> int:
        return self.base.dims[n] - self.subspaces[n].dim

    def qdims(self) -> list[int]:
        return [self.qdim(n) for n in range(self.top + 1)]

    def complement(self, n: int) -> list[int]:
        piv = set(self.subspaces[n].pivot_cols)
        return [c for c in range(self.base.dims[n]) if c not in piv]

    def project(self, n: int, cols: np.ndarray) -> np.ndarray:
        return project_columns(self.subspaces[n], cols)

    def dbar(self, n: int) -> np.ndarray:
        """Induced d̄_n on quotient coordinates (complement-of-pivot bases)."""
        if n not in self._dbar:
            full = self.base.d(n)[:, self.complement(n)]
            self._dbar[n] = self.project(n - 1, full) if n > 0 else zeros(self.field, 0, self.qdim(0))
        return self._dbar[n]

    def rank_out(self, n: int) -> int:
        """rank of d̄_n, computed on the whole of C_n (U_n maps into U_{n-1})."""
        if n == 0:
            return 0
        return mrank(self.field, self.project(n - 1, self.base.d(n)))


def quotient_of(base: ChainComplexRealization, subspaces: list[SubspaceBasis], mode: str,
                check: bool = True) -> QuotientComplex:
    if check:
        f = base.field
        for n in range(1, len(subspaces)):
            sub = subspaces[n]
            if sub.dim == 0:
                continue
            img = matmul(f, base.d(n), sub.basis.T.copy())
            if not subspaces[n - 1].contains_all(img.T.copy()):
                raise StabilityViolation(f"d({mode} subspace) not contained in degree {n - 1}")
    return QuotientComplex(base, subspaces, mode)


def homology_dims(qc: QuotientComplex, up_to: int) -> BettiTable:
    """dim H_n = dim Q_n − rank d̄_n − rank d̄_{n+1}; degree n needs U_n and d_{n+1}."""
    if up_to > qc.top or up_to + 1 > qc.base.top:
        raise ValueError(f"homology up to {up_to} needs the complex realized to degree {up_to + 1}")
    ranks = [qc.rank_out(n) for n in range(up_to + 2)]
    out = [(n, qc.qdim(n) - ranks[n] - ranks[n + 1]) for n in range(up_to + 1)]
    return BettiTable(out, qc.field.label, f"{qc.mode}({qc.base.label})")


def span_of_columns(field: FieldSpec, cols: np.ndarray, n: int, start: SubspaceBasis | None = None) -> SubspaceBasis:
    if cols.shape[1] == 0:
        return start if start is not None else empty_subspace(field, n)
    return span_reduce_array(field, cols.T.copy(), n, start=start)


# ---------------------------------------------------------------------------
# cochain complexes


@dataclass(eq=False)
class CochainComplexRealization:
    """Cochains as subspaces K_n of ambient spaces with coboundary δ_n: amb_n → amb_{n+1}."""
    field: FieldSpec
    ambient_dims: list[int]
    spaces: list[SubspaceBasis]
    coboundaries: list[np.ndarray]  # coboundaries[n]: amb_n → amb_{n+1}
    label: str = "Hom"

    @property
    def top(self) -> int:
        return len(self.spaces) - 1

    def dims(self) -> list[int]:
        return [s.dim for s in self.spaces]

    def restricted(self, n: int) -> np.ndarray:
        """δ_n applied to the basis of K_n (columns in amb_{n+1})."""
        return matmul(self.field, self.coboundaries[n], self.spaces[n].basis.T.copy())

    def coboundary_squared_failures(self) -> list[int]:
        f = self.field
        return [n for n in range(len(self.coboundaries) - 1)
                if not is_zero(f, matmul(f, self.coboundaries[n + 1], self.coboundaries[n]))]

    def stability_failures(self) -> list[int]:
        bad = []
        for n in range(min(len(self.coboundaries), self.top)):
            img = self.restricted(n)
            if not self.spaces[n + 1].contains_all(img.T.copy()):
                bad.append(n)
        return bad


def cohomology_dims(cc: CochainComplexRealization, up_to: int) -> BettiTable:
    if up_to + 1 > len(cc.coboundaries):
        raise ValueError(f"cohomology up to {up_to} needs coboundaries through degree {up_to}")
    f = cc.field
    ranks = [mrank(f, cc.restricted(n)) for n in range(up_to + 1)]
    out = []
    for n in range(up_to + 1):
        out.append((n, cc.spaces[n].dim - ranks[n] - (ranks[n - 1] if n > 0 else 0)))
    return BettiTable(out, f.label, cc.label)
