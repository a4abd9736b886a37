"""Acceptance suite: nine criteria, one PASS/FAIL line each in the terminal summary.

Run with ``pytest tests/test_acceptance.py -v``; add ``-s`` to see the
per-check lines as they happen.
"""

import copy
import subprocess
import sys
import time

import pytest

from hhcalc import cli, hhcomplex as hc, lincat as lc, ydtwist as yd
from hhcalc.chain import cohomology_dims, is_zero
from hhcalc.exactfield import FieldSpec, matmul
from hhcalc.hopfcore import (cyclic_group_algebra, hopf_from_dense, hopf_to_dense, sweedler4, trivial_bialgebra,
                             validate_hopf)
from hhcalc.modact import dual_numbers, regular_bimodule, sign_action_dual, trivial_action

import oracles

Q = FieldSpec.rational()
P = FieldSpec.prime()

FIXTURES = ["trivial_dual", "z2_dual", "z2_semisimple", "sweedler_dual", "sweedler_dual_explicit",
            "sweedler_grouplike", "sweedler_adjoint"]
DUAL_FIXTURES = FIXTURES[:-1]


def load(name, field=None):
    return cli.parse_input(cli.fixture_path(name + ".json").read_text(), field_override=field)


def say(n, what, ok, seconds=None):
    t = f" [{seconds:.2f}s]" if seconds is not None else ""
    print(f"criterion {n}: {'pass' if ok else 'FAIL'} {what}{t}")


# ---------------------------------------------------------------------------
# 1


@pytest.mark.criterion(1)
@pytest.mark.parametrize("name", ["trivial", "group:Z/2", "group:Z/3", "sweedler4"])
def test_c1_builtins_validate(name):
    from hhcalc.hopfcore import make_builtin
    for f in (Q, P):
        rep = validate_hopf(make_builtin(name, f))
        say(1, f"validate_hopf {name} over {f.label}", rep.ok)
        assert rep.ok, str(rep)


def _sweedler_mutations(d):
    n = len(d["basis"])
    cm = [[[0] * n for _ in range(n)] for _ in range(n)]
    for b, terms in enumerate(d["comult"]):
        for c, j, k in terms:
            cm[b][j][k] += c
    base = dict(mult=d["mult"], unit=d["unit"], cm=cm, counit=d["counit"], S=d["antipode"])
    for i in range(n):
        for j in range(n):
            for k in range(n):
                m = copy.deepcopy(d["mult"])
                m[i][j][k] += 1
                yield f"mult[{i}][{j}][{k}]", {**base, "mult": m}
                c = copy.deepcopy(cm)
                c[i][j][k] += 1
                yield f"comult[{i}][{j}][{k}]", {**base, "cm": c}
            s = copy.deepcopy(d["antipode"])
            s[i][j] += 1
            yield f"antipode[{i}][{j}]", {**base, "S": s}
        u = list(d["unit"])
        u[i] += 1
        yield f"unit[{i}]", {**base, "unit": u}
        e = list(d["counit"])
        e[i] += 1
        yield f"counit[{i}]", {**base, "counit": e}


def _from_parts(d, parts):
    n = len(d["basis"])
    cm = parts["cm"]
    trip = [[[cm[b][j][k], j, k] for j in range(n) for k in range(n) if cm[b][j][k]] for b in range(n)]
    return hopf_from_dense(Q, d["basis"], parts["mult"], parts["unit"], trip, parts["counit"], parts["S"])


@pytest.mark.criterion(1)
def test_c1_every_single_entry_mutation_fails():
    t0 = time.perf_counter()
    d = hopf_to_dense(sweedler4(Q))
    survivors, count = [], 0
    for label, parts in _sweedler_mutations(d):
        count += 1
        if validate_hopf(_from_parts(d, parts)).ok:
            survivors.append(label)
    dt = time.perf_counter() - t0
    say(1, f"{count} single-entry mutations of sweedler4 all rejected", not survivors, dt)
    assert count == 152
    assert not survivors
    assert dt < 1.0


# ---------------------------------------------------------------------------
# 2


def _dsq_quotient(q):
    f = q.field
    return [n for n in range(2, q.top + 1) if not is_zero(f, matmul(f, q.dbar(n - 1), q.dbar(n)))]


def _degrees(doc, prime):
    if doc.ma.A.dim <= 2:
        return dict(ch=5, q=5, cb=5, coch=5, cat1=5, cat2=3, tw1=5, tw2=2)
    if prime:
        return dict(ch=5, q=3, cb=4, coch=4, cat1=4, cat2=None, tw1=4, tw2=None)
    return dict(ch=3, q=2, cb=3, coch=3, cat1=3, cat2=None, tw1=3, tw2=None)


def realized_complex_failures(doc, prime):
    """Every realized complex for one document; returns a list of (complex, failure) pairs."""
    deg = _degrees(doc, prime)
    ma, v = doc.ma, doc.v
    bad = []

    ch = hc.build_ch(ma, v, N=deg["ch"] - 1)
    assert ch.top == deg["ch"]
    bad += [("CH d^2", n) for n in ch.cx.d_squared_failures()]
    bad += [("CH presimplicial", t) for t in ch.cx.presimplicial_failures()]

    chq = ch if deg["q"] == deg["ch"] - 1 else hc.build_ch(ma, v, N=deg["q"])
    for mode in ("qch", "coinvariant_qch"):
        q = hc.quotient_complex(ma, v, N=deg["q"], mode=mode, ch=chq, check=True)
        bad += [(f"{mode} d^2", n) for n in _dsq_quotient(q)]

    cb = hc.build_cb(ma, N=deg["cb"] - 1)
    bad += [("CB d^2", n) for n in cb.cx.d_squared_failures()]
    bad += [("CB presimplicial", t) for t in cb.cx.presimplicial_failures()]

    cc = hc.cochain_complex(ma, v, N=deg["coch"])
    bad += [("cochain d^2", n) for n in cc.coboundary_squared_failures()]

    bc1, H1 = lc.build_module_category(ma, [1])
    cx = lc.build_cat_ch(bc1, H1, N=deg["cat1"] - 1)
    bad += [("category {A} d^2", t) for t in cx.d_squared_failures()]
    bad += [("category {A} presimplicial", t) for t in cx.presimplicial_failures()]
    lc.cat_quotient(bc1, H1, N=min(deg["cat1"] - 1, 3), mode="coinvariant_qch", cx=cx, check=True)

    if deg["cat2"] is not None and doc.ranks:
        bc2, H2 = lc.build_module_category(ma, doc.ranks)
        cx2 = lc.build_cat_ch(bc2, H2, N=deg["cat2"] - 1)
        bad += [("category {A,A^2} d^2", t) for t in cx2.d_squared_failures()]
        bad += [("category {A,A^2} presimplicial", t) for t in cx2.presimplicial_failures()]

    if doc.yd is not None and yd.validate_yd(doc.B, doc.yd).ok:
        tw = yd.twist_bifunctor(bc1, doc.yd, H1)
        tcx = lc.build_cat_ch(bc1, tw.bifunctor, N=deg["tw1"] - 1)
        bad += [("twisted {A} d^2", t) for t in tcx.d_squared_failures()]
        bad += [("twisted {A} presimplicial", t) for t in tcx.presimplicial_failures()]
        lc.cat_quotient(bc1, tw.bifunctor, N=min(deg["tw1"] - 1, 3), mode="coinvariant_qch", cx=tcx, check=True)
        if deg["tw2"] is not None and doc.ranks:
            tw2 = yd.twist_bifunctor(bc2, doc.yd, H2)
            tcx2 = lc.build_cat_ch(bc2, tw2.bifunctor, N=deg["tw2"] - 1)
            bad += [("twisted {A,A^2} d^2", t) for t in tcx2.d_squared_failures()]
            bad += [("twisted {A,A^2} presimplicial", t) for t in tcx2.presimplicial_failures()]
    return bad


@pytest.mark.criterion(2)
@pytest.mark.parametrize("field,budget", [("32003", 30.0), ("rational", 300.0)])
def test_c2_differentials_square_to_zero(field, budget):
    t0 = time.perf_counter()
    all_bad = {}
    for name in FIXTURES:
        t = time.perf_counter()
        doc = load(name, field)
        bad = realized_complex_failures(doc, doc.field.is_prime)
        say(2, f"{name} over {doc.field.label}", not bad, time.perf_counter() - t)
        if bad:
            all_bad[name] = bad
    dt = time.perf_counter() - t0
    say(2, f"all fixtures over {field} within {budget:.0f}s", not all_bad and dt < budget, dt)
    assert not all_bad
    assert dt < budget


# ---------------------------------------------------------------------------
# 3


def _cocommutative_instances(f):
    k = trivial_bialgebra(f)
    z2 = cyclic_group_algebra(2, f)
    return [
        ("B=k", trivial_action(k, dual_numbers(f)), oracles.TRIVIAL_ACT_DUAL, oracles.TRIVIAL_COMULT, [1]),
        ("B=k[Z/2]", sign_action_dual(z2), oracles.Z2_SIGN_ACT_DUAL, oracles.Z2_COMULT, oracles.Z2_COUNIT),
    ]


@pytest.mark.criterion(3)
@pytest.mark.parametrize("f", [Q, P], ids=["QQ", "GF"])
@pytest.mark.parametrize("which", [0, 1], ids=["B=k", "B=kZ2"])
def test_c3_cocommutative_reduction(f, which):
    label, ma, act, comult, counit = _cocommutative_instances(f)[which]
    v = regular_bimodule(ma)
    got = hc.hopf_hochschild_homology(ma, v, up_to=3, mode="coinvariant_qch").dims()
    want = oracles.coinvariant_hh(oracles.DUAL_MULT, 2, act, comult, counit, 3)
    ch = hc.build_ch(ma, v, N=4)
    jdims = [hc.obstruction_subspace(ma, v, n, ch=ch).dim for n in range(4)]
    ok = got == want and jdims == [0, 0, 0, 0]
    say(3, f"{label} over {f.label}: {got} vs oracle {want}, dim J = {jdims}", ok)
    assert jdims == [0, 0, 0, 0]
    assert got == want


# ---------------------------------------------------------------------------
# 4


@pytest.mark.criterion(4)
@pytest.mark.parametrize("name", FIXTURES)
def test_c4_closed_forms(name):
    doc = load(name)
    cc = hc.cochain_complex(doc.ma, doc.v, N=2)
    got = tuple(cohomology_dims(cc, 1).dims())
    want = hc.hh01_closed_forms(doc.ma, doc.v)
    say(4, f"{name}: cohomology {got} vs closed forms {want}", got == want)
    assert got == want


# ---------------------------------------------------------------------------
# 5


@pytest.mark.criterion(5)
@pytest.mark.parametrize("name,N", [("sweedler_dual", 3), ("sweedler_dual_explicit", 3), ("z2_dual", 3),
                                    ("z2_semisimple", 3), ("sweedler_adjoint", 2)])
def test_c5_main_isomorphism(name, N):
    doc = load(name)
    rep = hc.main_iso_oracle(doc.ma, doc.v, N=N)
    degs = sorted({c.degree for c in rep.checks if c.degree is not None})
    ok = rep.passed and rep.tables["BQCH_dims"] == rep.tables["vop_tensor_dims"]
    say(5, f"{name} degrees {degs}: dims {rep.tables['BQCH_dims']}", ok)
    assert degs == list(range(N + 1))
    assert rep.passed, [c.to_dict() for c in rep.failures()]
    assert rep.tables["BQCH_homology"] == rep.tables["vop_tensor_homology"]


# ---------------------------------------------------------------------------
# 6


@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", FIXTURES)
def test_c6_degree_zero(name):
    doc = load(name)
    hh0 = hc.hopf_hochschild_homology(doc.ma, doc.v, up_to=0)[0]
    c0 = hc.tor0_closed_form(doc.ma, doc.v)
    say(6, f"{name}: BV/[A,BV] = {c0}, HH_0 = {hh0}", c0 == hh0)
    assert c0 == hh0


@pytest.mark.criterion(6)
@pytest.mark.parametrize("name", DUAL_FIXTURES)
def test_c6_tor_ext(name):
    doc = load(name)
    rep = hc.tor_ext_crosscheck(doc.ma, doc.v, N=4)
    tor_deg = sorted(c.degree for c in rep.checks if c.check == "tor_vs_homology")
    ext_deg = sorted(c.degree for c in rep.checks if c.check == "ext_vs_cohomology")
    say(6, f"{name}: Tor {rep.tables['tor']}, Ext {rep.tables['ext']}", rep.passed)
    assert tor_deg == [1, 2] and ext_deg == [1, 2]
    assert rep.passed, [c.to_dict() for c in rep.failures()]


# ---------------------------------------------------------------------------
# 7


@pytest.fixture(scope="module")
def sweedler_categories():
    ma = load("sweedler_dual", "32003").ma
    bc, H = lc.build_module_category(ma, [1, 2])
    return ma, bc, H


@pytest.mark.criterion(7)
def test_c7_cofinality(sweedler_categories):
    ma, bc, H = sweedler_categories
    t0 = time.perf_counter()
    small = lc.full_subcategory(bc, ["A^2"])
    rep = lc.cofinality_oracle(bc, small, H, lc.standard_retraction(ma, 2), N=2, homotopy_degree=2)
    dt = time.perf_counter() - t0
    say(7, f"cofinal {{A^2}} in {{A,A^2}}: {rep.tables}", rep.passed, dt)
    assert rep.passed, [c.to_dict() for c in rep.failures()]
    assert dt < 300


@pytest.mark.criterion(7)
def test_c7_free_generation(sweedler_categories):
    ma, bc, H = sweedler_categories
    t0 = time.perf_counter()
    small = lc.full_subcategory(bc, ["A"])
    rep = lc.free_generation_oracle(bc, small, H, lc.standard_decomposition(ma, 2), N=2, homotopy_degree=2)
    dt = time.perf_counter() - t0
    say(7, f"free generation {{A}} in {{A,A^2}}: {rep.tables}", rep.passed, dt)
    assert rep.passed, [c.to_dict() for c in rep.failures()]
    for mode in ("qch", "coinvariant_qch"):
        assert rep.tables[f"{mode}_big"] == rep.tables[f"{mode}_small"]
        assert len(rep.tables[f"{mode}_big"]) == 3
    assert dt < 300


# ---------------------------------------------------------------------------
# 8


@pytest.mark.criterion(8)
@pytest.mark.parametrize("name", ["sweedler_dual", "sweedler_adjoint", "z2_dual"])
def test_c8_trivial_twist_is_untwisted(name):
    doc = load(name)
    rep = yd.trivial_twist_identity(doc.ma, N=2)
    say(8, f"M = k on {name}: {rep.tables}", rep.passed)
    assert rep.passed, [c.to_dict() for c in rep.failures()]


@pytest.mark.criterion(8)
def test_c8_adjoint_yd_and_twist_suite():
    B = sweedler4(P)
    m = yd.adjoint_yd(B)
    vr = yd.validate_yd(B, m)
    ma = load("sweedler_dual", "32003").ma
    bc, H = lc.build_module_category(ma, [1, 2])
    tw = yd.twist_bifunctor(bc, m, H, validate=False)
    rep = lc.validate_bifunctor(bc, tw.bifunctor)
    say(8, f"validate_yd(ad) {vr.ok}, twisted bifunctor suite {rep.ok}", vr.ok and rep.ok)
    assert vr.ok, str(vr)
    assert rep.ok, str(rep)


@pytest.mark.criterion(8)
def test_c8_twisted_tables_invariant_under_adding_A2():
    ma = load("sweedler_dual", "32003").ma
    t0 = time.perf_counter()
    rep = yd.twisted_morita_oracle(ma, yd.adjoint_yd(ma.B), N=1)
    dt = time.perf_counter() - t0
    say(8, f"twisted {{A}} vs {{A,A^2}}: {rep.tables}", rep.passed, dt)
    assert rep.passed, [c.to_dict() for c in rep.failures()]
    for mode in ("qch", "coinvariant_qch"):
        assert rep.tables[f"{mode}_big"] == rep.tables[f"{mode}_small"]


# ---------------------------------------------------------------------------
# 9

DETERMINISM_RUNS = [
    ("validate", "sweedler_dual", []),
    ("validate", "sweedler_grouplike", []),
    ("homology", "trivial_dual", ["--max-degree", "3"]),
    ("homology", "sweedler_adjoint", []),
    ("cohomology", "sweedler_dual_explicit", ["--max-degree", "3"]),
    ("crossed-product", "sweedler_dual", []),
    ("oracle", "z2_dual", ["main-iso"]),
    ("oracle", "sweedler_dual", ["tor-ext"]),
    ("oracle", "trivial_dual", ["dgm-homotopy"]),
    ("twist", "sweedler_dual", []),
    ("compare", "z2_dual", ["--against", "ordinary"]),
]


def _cli(cmd, fixture, extra):
    path = str(cli.fixture_path(fixture + ".json"))
    args = [sys.executable, "-m", "hhcalc", cmd]
    if cmd == "oracle":
        args += [extra[0], path] + extra[1:]
    else:
        args += [path] + extra
    return subprocess.run(args + ["--format", "json"], capture_output=True, timeout=600)


@pytest.mark.criterion(9)
@pytest.mark.parametrize("cmd,fixture,extra", DETERMINISM_RUNS, ids=[f"{c}-{f}" for c, f, _ in DETERMINISM_RUNS])
def test_c9_byte_identical_json(cmd, fixture, extra):
    a = _cli(cmd, fixture, extra)
    b = _cli(cmd, fixture, extra)
    same = a.stdout == b.stdout and a.returncode == b.returncode
    say(9, f"{cmd} {fixture}: exit {a.returncode}, {len(a.stdout)} bytes", same and bool(a.stdout))
    assert a.stdout, a.stderr.decode()
    assert a.stdout == b.stdout
    assert a.returncode == b.returncode
