import copy
import itertools

import pytest

from hhcalc.errors import ShapeError
from hhcalc.exactfield import FieldSpec
from hhcalc.hopfcore import cyclic_group_algebra, sweedler4, trivial_bialgebra, validate_algebra
from hhcalc.modact import (action_from_dense, adjoint_action, character_bimodule, crossed_product,
                           crossed_product_via_ops, decompose_E_action, dual_numbers, left_E_action, omega_basis,
                           opposite_module_algebra, regular_bimodule, sign_action_dual, sweedler_action_dual,
                           trivial_action, validate_equivariant_bimodule, validate_left_module,
                           validate_module_algebra, validate_right_module, vop_right_action)

Q = FieldSpec.rational()
P = FieldSpec.prime()


def instances(f):
    return {
        "k": trivial_action(trivial_bialgebra(f), dual_numbers(f)),
        "Z2-sign": sign_action_dual(cyclic_group_algebra(2, f)),
        "sweedler-dual": sweedler_action_dual(sweedler4(f)),
        "sweedler-adjoint": adjoint_action(sweedler4(f)),
    }


NAMES = ["k", "Z2-sign", "sweedler-dual", "sweedler-adjoint"]


@pytest.mark.parametrize("name", NAMES)
def test_module_algebra_and_regular_bimodule(name):
    ma = instances(Q)[name]
    assert validate_module_algebra(ma).ok
    assert validate_equivariant_bimodule(ma, regular_bimodule(ma)).ok


@pytest.mark.parametrize("name", NAMES)
def test_opposite_is_module_algebra_over_cop(name):
    ma = opposite_module_algebra(instances(Q)[name])
    rep = validate_module_algebra(ma)
    assert rep.ok, str(rep)


def test_action_mutations_detected():
    ma = instances(Q)["Z2-sign"]
    table = [[[ma.action[b][a].get(k, 0) for k in range(2)] for a in range(2)] for b in range(2)]
    missed = []
    for b, a, k in itertools.product(range(2), repeat=3):
        t = copy.deepcopy(table)
        t[b][a][k] += 1
        if validate_module_algebra(action_from_dense(ma.B, ma.A, t)).ok:
            missed.append((b, a, k))
    assert not missed


def test_action_shape_error():
    ma = instances(Q)["k"]
    with pytest.raises(ShapeError):
        action_from_dense(ma.B, ma.A, [[[1, 0]]])


@pytest.mark.parametrize("name", ["k", "Z2-sign", "sweedler-dual"])
def test_crossed_product_is_algebra_and_matches_formula(name):
    ma = instances(Q)[name]
    cp = crossed_product(ma)
    assert cp.dim == ma.A.dim ** 2 * ma.B.dim
    assert validate_algebra(cp.E, "E").ok
    for e1, e2 in itertools.product(range(cp.dim), repeat=2):
        assert cp.E.mult[e1][e2] == crossed_product_via_ops(ma, cp.triple(e1), cp.triple(e2))


def test_crossed_product_adjoint_over_prime_field():
    cp = crossed_product(instances(P)["sweedler-adjoint"])
    assert cp.dim == 64
    assert validate_algebra(cp.E, "E").ok


@pytest.mark.parametrize("name", ["k", "Z2-sign", "sweedler-dual"])
def test_equivariant_bimodules_are_E_modules(name):
    ma = instances(Q)[name]
    cp = crossed_product(ma)
    v = regular_bimodule(ma)
    table = left_E_action(cp, v)
    assert validate_left_module(cp.E, table, v.dim).ok
    back = decompose_E_action(cp, table, v.dim)
    assert back.left_A == v.left_A and back.right_A == v.right_A and back.left_B == v.left_B


@pytest.mark.parametrize("name", ["k", "Z2-sign", "sweedler-dual"])
def test_omega_is_E_submodule(name):
    ma = instances(Q)[name]
    om = omega_basis(ma)
    assert om.dim == ma.A.dim ** 2 - ma.A.dim
    assert om.e_stable, om.witness


def test_character_bimodule():
    ma = instances(Q)["k"]
    v = character_bimodule(ma, [1, 0])
    assert validate_equivariant_bimodule(ma, v).ok
    # y acts by 1 on the left only: not a bimodule
    bad = character_bimodule(ma, [1, 1])
    assert not validate_equivariant_bimodule(ma, bad).ok


@pytest.mark.parametrize("name", ["k", "Z2-sign"])
def test_vop_right_module_involutive_antipode(name):
    ma = instances(Q)[name]
    cp = crossed_product(ma)
    v = regular_bimodule(ma)
    assert validate_right_module(cp.E, vop_right_action(cp, v), v.dim).ok


def test_vop_right_module_sweedler():
    """The stated right E-action on V^op, checked on a non-involutive antipode.

    This fails: associativity needs S² = id on the B leg.  Left red on purpose.
    """
    ma = instances(Q)["sweedler-dual"]
    cp = crossed_product(ma)
    v = regular_bimodule(ma)
    rep = validate_right_module(cp.E, vop_right_action(cp, v), v.dim)
    assert rep.ok, str(rep)
