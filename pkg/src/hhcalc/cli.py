"""Command line front end: ``hhcalc <command> <input-file> [options]``.

Input is one JSON document; see README for the schema.  Exit status: 0 on
success, 1 when a validator or oracle fails, 2 on parse/shape errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import hhcomplex as hc
from . import lincat as lc
from . import ydtwist as yd
from .chain import BettiTable, OracleReport, homology_dims, plain_homology, quotient_of, span_of_columns
from .errors import (HHError, InvalidGroupTable, OracleFailure, ParseError, ShapeError, StabilityViolation,
                     ValidationFailure)
from .exactfield import FieldSpec
from .hopfcore import (HopfData, StructureAlgebra, ValidationReport, hopf_from_dense, make_builtin, validate_algebra,
                       validate_hopf)
from .modact import (EquivariantBimodule, ModuleAlgebra, action_from_dense, adjoint_action, bimodule_from_dense,
                     crossed_product, dual_numbers, group_algebra_as_algebra, regular_bimodule, sign_action_dual,
                     sweedler_action_dual, trivial_action, trivial_algebra, validate_equivariant_bimodule,
                     validate_module_algebra)

COMMANDS = ("validate", "homology", "cohomology", "crossed-product", "oracle", "twist", "compare")
ORACLES = ("main-iso", "tor-ext", "cofinal", "free-gen", "dgm-homotopy")
DEFAULT_MAX_DEGREE = 4


@dataclass(eq=False)
class InputDocument:
    field: FieldSpec
    B: HopfData
    ma: ModuleAlgebra
    v: EquivariantBimodule
    yd: yd.YDModule | None = None
    ranks: list[int] | None = None
    options: dict = dc_field(default_factory=dict)
    raw: dict = dc_field(default_factory=dict, repr=False)

    @property
    def max_degree(self) -> int:
        return int(self.options.get("max_degree", DEFAULT_MAX_DEGREE))


# ---------------------------------------------------------------------------
# parsing


def _field_from(value) -> FieldSpec:
    if value is None or value == "rational" or value == "Q":
        return FieldSpec.rational()
    if isinstance(value, dict):
        value = value.get("p")
    if isinstance(value, str):
        s = value.strip()
        if s.startswith("p="):
            s = s[2:]
        try:
            value = int(s)
        except ValueError as exc:
            raise ParseError(f"field: expected 'rational' or a prime, got {value!r}") from exc
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"field: expected 'rational' or a prime, got {value!r}")
    return FieldSpec.prime(value)


def _need(block: dict, key: str, path: str):
    if not isinstance(block, dict):
        raise ShapeError(f"{path}: expected an object")
    if key not in block:
        raise ShapeError(f"{path}.{key}: missing")
    return block[key]


def _dense_mult(block: dict, n: int, path: str):
    """Nested n×n×n arrays, or {"sparse": [[i, j, k, c], …]}."""
    m = _need(block, "mult", path)
    if isinstance(m, dict):
        trip = _need(m, "sparse", f"{path}.mult")
        out = [[[0] * n for _ in range(n)] for _ in range(n)]
        for t in trip:
            if not isinstance(t, list) or len(t) != 4:
                raise ShapeError(f"{path}.mult.sparse: entries are [i, j, k, coeff]")
            i, j, k, c = t
            if not all(isinstance(x, int) and 0 <= x < n for x in (i, j, k)):
                raise ShapeError(f"{path}.mult.sparse: index out of range in {t}")
            out[i][j][k] = c
        return out
    return m


def _algebra_block(block: dict, f: FieldSpec, path: str) -> StructureAlgebra:
    names = _need(block, "basis", path)
    n = len(names)
    return StructureAlgebra.from_dense(f, names, _dense_mult(block, n, path), _need(block, "unit", path))


def _bialgebra(block, f: FieldSpec) -> HopfData:
    if isinstance(block, str):
        block = {"builtin": block}
    if "builtin" in block:
        try:
            return make_builtin(block["builtin"], f)
        except KeyError as exc:
            raise ParseError(f"bialgebra.builtin: unknown {block['builtin']!r}") from exc
    names = _need(block, "basis", "bialgebra")
    n = len(names)
    return hopf_from_dense(f, names, _dense_mult(block, n, "bialgebra"), _need(block, "unit", "bialgebra"),
                           _need(block, "comult", "bialgebra"), _need(block, "counit", "bialgebra"),
                           block.get("antipode"), block.get("antipode_inv"), name=block.get("name", "B"))


def _algebra(block, B: HopfData, f: FieldSpec) -> StructureAlgebra:
    if isinstance(block, str):
        block = {"builtin": block}
    if "builtin" in block:
        name = block["builtin"]
        if name == "dual_numbers":
            return dual_numbers(f)
        if name == "trivial":
            return trivial_algebra(f)
        if name == "bialgebra":
            return B.alg
        if isinstance(name, str) and name.startswith("group:"):
            return group_algebra_as_algebra(make_builtin(name, f))
        raise ParseError(f"algebra.builtin: unknown {name!r}")
    return _algebra_block(block, f, "algebra")


def _action(block, B: HopfData, A: StructureAlgebra, alg_block) -> ModuleAlgebra:
    if isinstance(block, str):
        block = {"builtin": block}
    if block is None:
        block = {"builtin": "trivial"}
    if "builtin" in block:
        name = block["builtin"]
        if name == "trivial":
            return trivial_action(B, A)
        if name == "adjoint":
            if A is not B.alg:
                raise ParseError("action.builtin 'adjoint' needs algebra 'bialgebra'")
            return adjoint_action(B)
        if name in ("sign", "sweedler_dual"):
            if A.basis_names != ["1", "y"]:
                raise ParseError(f"action.builtin {name!r} needs algebra 'dual_numbers'")
            if name == "sign":
                if B.dim != 2:
                    raise ParseError("action.builtin 'sign' needs group:Z/2")
                return sign_action_dual(B)
            if B.name != "sweedler4":
                raise ParseError("action.builtin 'sweedler_dual' needs bialgebra sweedler4")
            return sweedler_action_dual(B)
        raise ParseError(f"action.builtin: unknown {name!r}")
    return action_from_dense(B, A, _need(block, "table", "action"))


def _bimodule(block, ma: ModuleAlgebra) -> EquivariantBimodule:
    if block is None or block == "regular" or (isinstance(block, dict) and block.get("builtin") == "regular"):
        return regular_bimodule(ma)
    if isinstance(block, str) or "builtin" in block:
        raise ParseError(f"bimodule.builtin: unknown {block!r}")
    return bimodule_from_dense(ma, _need(block, "basis", "bimodule"), _need(block, "left_A", "bimodule"),
                               _need(block, "right_A", "bimodule"), _need(block, "left_B", "bimodule"))


def _yd(block, B: HopfData):
    if block is None:
        return None
    if isinstance(block, str):
        block = {"builtin": block}
    if "builtin" in block:
        name = block["builtin"]
        if name == "trivial":
            return yd.trivial_yd(B)
        if name == "adjoint":
            return yd.adjoint_yd(B)
        if isinstance(name, str) and name.startswith("grouplike:"):
            g = name.split(":", 1)[1]
            if g not in B.alg.basis_names:
                raise ParseError(f"yd.builtin: no basis element {g!r}")
            return yd.grouplike_yd(B, B.alg.basis_names.index(g))
        raise ParseError(f"yd.builtin: unknown {name!r}")
    return yd.yd_from_dense(B, _need(block, "basis", "yd"), _need(block, "action", "yd"),
                            _need(block, "coaction", "yd"))


def parse_input(text: str, field_override: str | None = None) -> InputDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError("document: expected a JSON object")
    f = _field_from(field_override if field_override is not None else raw.get("field", "rational"))
    try:
        B = _bialgebra(_need(raw, "bialgebra", "document"), f)
        A = _algebra(raw.get("algebra", "trivial"), B, f)
        ma = _action(raw.get("action"), B, A, raw.get("algebra"))
        v = _bimodule(raw.get("bimodule"), ma)
        m = _yd(raw.get("yd"), B)
    except InvalidGroupTable as exc:
        raise ParseError(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, HHError):
            raise
        raise ShapeError(f"document: {exc}") from exc
    ranks = None
    if "category" in raw:
        ranks = _need(raw["category"], "ranks", "category")
        if not isinstance(ranks, list) or not ranks or not all(isinstance(r, int) and r >= 1 for r in ranks):
            raise ShapeError("category.ranks: expected a nonempty list of positive integers")
    options = dict(raw.get("options", {}))
    if "max_degree" in options and (not isinstance(options["max_degree"], int) or options["max_degree"] < 0):
        raise ShapeError("options.max_degree: expected a non-negative integer")
    return InputDocument(f, B, ma, v, m, ranks, options, raw)


# ---------------------------------------------------------------------------
# commands


@dataclass
class Report:
    command: list[str]
    field: str
    ok: bool = True
    validation: list[dict] = dc_field(default_factory=list)
    tables: list[BettiTable] = dc_field(default_factory=list)
    oracles: list[OracleReport] = dc_field(default_factory=list)
    data: dict = dc_field(default_factory=dict)
    notes: list[str] = dc_field(default_factory=list)
    error: str | None = None
    timing: float | None = None

    def to_dict(self) -> dict:
        out = {"command": self.command, "field": self.field, "ok": self.ok,
               "validation": self.validation, "tables": [t.to_dict() for t in self.tables],
               "oracles": [o.to_dict() for o in self.oracles], "notes": list(self.notes)}
        if self.data:
            out["data"] = self.data
        if self.error is not None:
            out["error"] = self.error
        if self.timing is not None:
            out["timing_seconds"] = round(self.timing, 3)
        return out


def _add_validation(rep: Report, vr: ValidationReport) -> None:
    rep.validation.append(vr.to_dict())
    rep.ok = rep.ok and vr.ok


def _validate_all(doc: InputDocument, rep: Report) -> None:
    _add_validation(rep, validate_hopf(doc.B))
    _add_validation(rep, validate_algebra(doc.ma.A, "algebra"))
    _add_validation(rep, validate_module_algebra(doc.ma))
    _add_validation(rep, validate_equivariant_bimodule(doc.ma, doc.v))
    if doc.yd is not None:
        _add_validation(rep, yd.validate_yd(doc.B, doc.yd))
    if doc.ranks is not None:
        bc, H = lc.build_module_category(doc.ma, doc.ranks)
        _add_validation(rep, lc.validate_bcategory(bc))
        _add_validation(rep, lc.validate_bifunctor(bc, H))


def _require_valid(doc: InputDocument) -> None:
    for vr in (validate_hopf(doc.B), validate_module_algebra(doc.ma), validate_equivariant_bimodule(doc.ma, doc.v)):
        if not vr.ok:
            raise ValidationFailure(vr)


def _scalar_text(f: FieldSpec, x):
    x = f.norm(x)
    return f.to_text(x) if isinstance(x, Fraction) else int(x)


def _crossed_product_block(doc: InputDocument) -> dict:
    cp = crossed_product(doc.ma)
    f = doc.field
    E = cp.E
    n = E.dim
    names = []
    for e in range(n):
        a, a2, b = cp.triple(e)
        names.append(f"{doc.ma.A.basis_names[a]}⊗{doc.ma.A.basis_names[a2]}⊗{doc.B.alg.basis_names[b]}")
    sparse = []
    for i in range(n):
        for j in range(n):
            for k, c in sorted(E.mult[i][j].items()):
                sparse.append([i, j, k, _scalar_text(f, c)])
    return {"basis": names, "mult": {"sparse": sparse},
            "unit": [_scalar_text(f, E.unit.get(k, 0)) for k in range(n)]}


def _ordinary_tables(doc: InputDocument, N: int):
    """Ordinary Hochschild homology, its B-coinvariant quotient, and the J dims."""
    ch = hc.build_ch(doc.ma, doc.v, N)
    plain = plain_homology(ch.cx, N)
    f = doc.field
    subs = [span_of_columns(f, hc.coinvariant_relations(ch, n), ch.cx.dims[n]) for n in range(N + 1)]
    jdims = [hc.obstruction_subspace(doc.ma, doc.v, n, ch).dim for n in range(N + 1)]
    try:
        coinv = homology_dims(quotient_of(ch.cx, subs, "coinvariants_only", check=True), N)
    except StabilityViolation as exc:
        # without J the coinvariant relations need not form a subcomplex
        return plain, None, jdims, str(exc)
    return plain, coinv, jdims, None


def run(command: str, doc: InputDocument, sub: str | None = None, max_degree: int | None = None,
        against: str = "ordinary") -> Report:
    f = doc.field
    rep = Report([command] + ([sub] if sub else []), f.label)
    N = max_degree if max_degree is not None else doc.max_degree
    mode = doc.options.get("mode", "coinvariant_qch")
    if command == "validate":
        _validate_all(doc, rep)
        return rep
    _require_valid(doc)
    if command == "homology":
        t = hc.hopf_hochschild_homology(doc.ma, doc.v, N, mode=mode)
        t.provenance = mode
        rep.tables.append(t)
    elif command == "cohomology":
        cc = hc.cochain_complex(doc.ma, doc.v, N + 1)
        t = hc.cohomology_dims(cc, N)
        t.provenance = "equivariant_cochains"
        rep.tables.append(t)
        h0, h1 = hc.hh01_closed_forms(doc.ma, doc.v)
        rep.data["closed_forms"] = {"HH0": h0, "HH1": h1}
    elif command == "crossed-product":
        vr = validate_algebra(crossed_product(doc.ma).E, "crossed product")
        _add_validation(rep, vr)
        rep.data["algebra"] = _crossed_product_block(doc)
    elif command == "oracle":
        rep.oracles.append(_run_oracle(doc, sub, max_degree))
        rep.ok = rep.oracles[-1].passed
    elif command == "twist":
        m = doc.yd if doc.yd is not None else yd.trivial_yd(doc.B)
        deg = max_degree if max_degree is not None else min(doc.max_degree, 3)
        _add_validation(rep, yd.validate_yd(doc.B, m))
        if rep.ok:
            _, t = yd.twisted_complex(doc.ma, m, deg, mode=mode)
            t.provenance = f"twisted_{mode}({m.name})"
            rep.tables.append(t)
    elif command == "compare":
        if against != "ordinary":
            raise ParseError(f"compare: unknown reference {against!r}")
        plain, coinv, jdims, unstable = _ordinary_tables(doc, N)
        hopf = hc.hopf_hochschild_homology(doc.ma, doc.v, N, mode="coinvariant_qch")
        plain.provenance, hopf.provenance = "ordinary", "coinvariant_qch"
        rep.tables += [hopf, plain]
        if coinv is not None:
            coinv.provenance = "ordinary_coinvariants"
            rep.tables.insert(1, coinv)
        else:
            rep.notes.append(f"coinvariant relations are not a subcomplex: {unstable}")
        cocom = doc.B.is_cocommutative()
        rep.data["cocommutative"] = cocom
        rep.data["J_dims"] = jdims
        agree = coinv is not None and hopf.dims() == coinv.dims()
        rep.data["coinvariant_tables_agree"] = agree
        rep.ok = all(d == 0 for d in jdims) and agree
        if not cocom:
            rep.notes.append("bialgebra is not cocommutative; the reduction is not expected to hold")
    else:
        raise ParseError(f"unknown command {command!r}")
    return rep


def _run_oracle(doc: InputDocument, name: str | None, max_degree: int | None) -> OracleReport:
    if name not in ORACLES:
        raise ParseError(f"oracle: expected one of {', '.join(ORACLES)}")
    if name == "main-iso":
        return hc.main_iso_oracle(doc.ma, doc.v, max_degree if max_degree is not None else 3)
    if name == "tor-ext":
        return hc.tor_ext_crosscheck(doc.ma, doc.v, max_degree if max_degree is not None else 3)
    if name == "dgm-homotopy":
        return hc.dgm_homotopy_oracle(doc.ma, doc.v, max_degree if max_degree is not None else 3)
    ranks = doc.ranks or [1, 2]
    if len(ranks) != 2 or ranks[0] != 1:
        raise ShapeError("category.ranks: the cofinal/free-gen oracles expect [1, r]")
    N = max_degree if max_degree is not None else 2
    bc, H = lc.build_module_category(doc.ma, ranks)
    big = lc.object_name(ranks[1])
    if name == "cofinal":
        small = lc.full_subcategory(bc, [big])
        return lc.cofinality_oracle(bc, small, H, lc.standard_retraction(doc.ma, ranks[1]), N)
    small = lc.full_subcategory(bc, ["A"])
    return lc.free_generation_oracle(bc, small, H, lc.standard_decomposition(doc.ma, ranks[1]), N)


# ---------------------------------------------------------------------------
# output


def emit(rep: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(rep.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["complex", "degree", "dim"])
        for t in rep.tables:
            for n, d in t.entries:
                w.writerow([t.provenance, n, d])
        return buf.getvalue()
    if fmt == "text":
        lines = [f"hhcalc {' '.join(rep.command)} [{rep.field}]: {'ok' if rep.ok else 'FAILED'}"]
        if rep.error:
            lines.append(f"error: {rep.error}")
        for v in rep.validation:
            state = "pass" if v["ok"] else "FAIL " + "; ".join(
                f"{x['axiom']} {x['witness']}" for x in v["failures"][:3])
            lines.append(f"  validate {v['subject']}: {state}")
        for t in rep.tables:
            lines.append(f"  {t.provenance}: " + "  ".join(f"H{n}={d}" for n, d in t.entries))
        for o in rep.oracles:
            lines.extend("  " + s for s in str(o).splitlines())
        for k, v in sorted(rep.data.items()):
            if k != "algebra":
                lines.append(f"  {k}: {v}")
        if "algebra" in rep.data:
            lines.append(f"  crossed product of dimension {len(rep.data['algebra']['basis'])}")
        lines.extend(f"  note: {n}" for n in rep.notes)
        if rep.timing is not None:
            lines.append(f"  time: {rep.timing:.2f}s")
        return "\n".join(lines) + "\n"
    raise ParseError(f"unknown format {fmt!r}")


def fixture_path(name: str) -> Path:
    """Path of a fixture shipped with the package."""
    return Path(str(resources.files("hhcalc") / "fixtures" / name))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hhcalc", description="Hopf–Hochschild (co)homology of module algebras")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("args", nargs="+", help="[oracle name] input-file")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--field", default=None, help="'rational' or a prime p (overrides the document)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", default=None)
    p.add_argument("--against", default="ordinary")
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    sub = None
    args = list(ns.args)
    if ns.command == "oracle":
        if len(args) != 2:
            parser.error("usage: hhcalc oracle <name> <input-file>")
        sub = args.pop(0)
    elif len(args) != 1:
        parser.error(f"usage: hhcalc {ns.command} <input-file>")
    t0 = time.perf_counter()
    code = 0
    label = ns.field or "?"
    try:
        text = Path(args[0]).read_text(encoding="utf-8")
        doc = parse_input(text, ns.field)
        label = doc.field.label
        rep = run(ns.command, doc, sub, ns.max_degree, ns.against)
        code = 0 if rep.ok else 1
    except (ParseError, ShapeError, OSError) as exc:
        rep = Report([ns.command] + ([sub] if sub else []), label, ok=False, error=str(exc))
        code = 2
    except ValidationFailure as exc:
        rep = Report([ns.command] + ([sub] if sub else []), label, ok=False, error=str(exc))
        rep.validation.append(exc.report.to_dict())
        code = 1
    except (OracleFailure, HHError) as exc:
        rep = Report([ns.command] + ([sub] if sub else []), label, ok=False, error=str(exc))
        code = 1
    if ns.timing:
        rep.timing = time.perf_counter() - t0
    out = emit(rep, ns.format)
    if ns.out:
        Path(ns.out).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    if code == 2:
        print(f"hhcalc: {rep.error}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
