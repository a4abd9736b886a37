import pytest

from hhcalc import cli, lincat as lc, ydtwist as yd
from hhcalc.errors import AntipodeRequired, ShapeError, ValidationFailure
from hhcalc.exactfield import FieldSpec
from hhcalc.hopfcore import cyclic_group_algebra, hopf_from_dense, hopf_to_dense, make_builtin, sweedler4
from hhcalc.modact import ModuleAlgebra, sweedler_action_dual

Q = FieldSpec.rational()
P = FieldSpec.prime()


def fixture(name, field="32003"):
    return cli.parse_input(cli.fixture_path(name + ".json").read_text(), field_override=field)


def direct_sum(a: yd.YDModule, b: yd.YDModule) -> yd.YDModule:
    n = a.dim
    shift = lambda v: {k + n: c for k, c in v.items()}  # noqa: E731
    action = [ra + [shift(v) for v in rb] for ra, rb in zip(a.action, b.action)]
    coaction = a.coaction + [[(c, g, m + n) for c, g, m in terms] for terms in b.coaction]
    return yd.YDModule(a.field, a.basis_names + [f"{x}'" for x in b.basis_names], action, coaction,
                       name=f"{a.name}+{b.name}")


@pytest.mark.parametrize("name", ["trivial", "group:Z/2", "group:Z/3", "sweedler4"])
@pytest.mark.parametrize("f", [Q, P], ids=["QQ", "GF"])
def test_trivial_and_adjoint_are_yd(name, f):
    B = make_builtin(name, f)
    assert yd.validate_yd(B, yd.trivial_yd(B)).ok
    rep = yd.validate_yd(B, yd.adjoint_yd(B))
    assert rep.ok, str(rep)


def test_grouplike_coaction():
    # over a commutative cocommutative B the group-like coaction is YD
    z2 = cyclic_group_algebra(2, Q)
    assert yd.validate_yd(z2, yd.grouplike_yd(z2, 1)).ok
    B = sweedler4(Q)
    rep = yd.validate_yd(B, yd.grouplike_yd(B, B.alg.basis_names.index("g")))
    assert not rep.ok
    assert "yd_condition" in rep.failed_axioms()


def test_grouplike_twist_fails_equivariance():
    ma = fixture("sweedler_dual").ma
    bc, H = lc.build_module_category(ma, [1])
    with pytest.raises(ValidationFailure):
        yd.twist_bifunctor(bc, yd.grouplike_yd(ma.B, 1), H)


def test_twisting_the_wrong_side_fails():
    ma = fixture("sweedler_dual").ma
    bc, H = lc.build_module_category(ma, [1])
    m = yd.adjoint_yd(ma.B)
    assert yd.twist_bifunctor(bc, m, H).report.ok
    with pytest.raises(ValidationFailure):
        yd.twist_bifunctor(bc, m, H, twist_side="pre")


def test_trivial_twist_on_two_objects():
    rep = yd.trivial_twist_identity(fixture("sweedler_dual").ma, N=1, ranks=[1, 2])
    assert rep.passed


def test_trivial_twist_table_equals_untwisted():
    ma = fixture("sweedler_adjoint").ma
    bc, H = lc.build_module_category(ma, [1])
    for mode in ("qch", "coinvariant_qch"):
        q = lc.cat_quotient(bc, H, N=2, mode=mode)
        _, t = yd.twisted_complex(ma, yd.trivial_yd(ma.B), N=2, mode=mode)
        assert t.dims() == q.homology(2).dims()


@pytest.mark.parametrize("name", ["sweedler_adjoint", "sweedler_dual"])
def test_twisting_is_additive(name):
    ma = fixture(name).ma
    k, ad = yd.trivial_yd(ma.B), yd.adjoint_yd(ma.B)
    s = direct_sum(ad, k)
    assert yd.validate_yd(ma.B, s).ok
    for mode in ("qch", "coinvariant_qch"):
        a = yd.twisted_complex(ma, ad, N=2, mode=mode)[1].dims()
        b = yd.twisted_complex(ma, k, N=2, mode=mode)[1].dims()
        c = yd.twisted_complex(ma, s, N=2, mode=mode)[1].dims()
        assert c == [x + y for x, y in zip(a, b)]


def test_twisted_complex_needs_inverse_antipode():
    d = hopf_to_dense(sweedler4(Q))
    B = hopf_from_dense(Q, d["basis"], d["mult"], d["unit"], d["comult"], d["counit"])
    ma0 = sweedler_action_dual(sweedler4(Q))
    ma = ModuleAlgebra(B, ma0.A, ma0.action)
    with pytest.raises(AntipodeRequired):
        yd.twisted_complex(ma, yd.trivial_yd(ma0.B), N=1)


def test_yd_from_dense_shapes():
    B = sweedler4(Q)
    with pytest.raises(ShapeError):
        yd.yd_from_dense(B, ["m"], [[[1]]], [[[1, 0, 0]]])
    m = yd.yd_from_dense(B, ["m"], [[[1]], [[1]], [[0]], [[0]]], [[[1, 0, 0]]])
    assert yd.validate_yd(B, m).ok
