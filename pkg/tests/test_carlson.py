import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abdegen.carlson import (ExtensionProblem, build_retraction, extension_class,
                             j0_dimension_check)
from abdegen.cycle import CycleData, build_cycle_mhs
from abdegen.errors import DegenerateF1, NotPrimitive, WrongDimension
from abdegen.exact_linalg import IntMatrix
from abdegen.lattice import ComplexLattice, TorusPoint, reduce_point
from abdegen.mhs import MixedHS
from abdegen.verify import random_gl, transform_mhs


def e(*idx, n=4):
    return IntMatrix.from_columns([[1 if k == i - 1 else 0 for k in range(n)] for i in idx], n)


def central_mhs(tau2, tau3, p):
    return MixedHS(4, e(1), e(1, 2, 4), np.array([[0, tau2, 1, 0], [tau2, tau3, 0, p]]))


def peripheral_mhs(tau1, tau2, p):
    return MixedHS(4, e(2), e(1, 2, 3), np.array([[tau1, tau2, 1, 0], [tau2, 0, 0, p]]))


def solve(mhs, r=None):
    prob = ExtensionProblem.from_mhs(mhs)
    r = build_retraction(mhs.W0, mhs.W1) if r is None else r
    return prob, extension_class(prob, r)


upper = st.builds(complex, st.floats(-1, 1), st.floats(0.5, 3))
plane = st.builds(complex, st.floats(-1, 1), st.floats(-1, 1))
primes = st.sampled_from([3, 5, 7, 11])
unit = st.floats(0, 1, exclude_max=True)


# -- retractions --------------------------------------------------------------------------

def test_retraction_central():
    r = build_retraction(e(1), e(1, 2, 4))
    assert r == IntMatrix([[1, 0, 0]])  # W1 coordinates (e1, e2, e4)


def test_retraction_peripheral():
    assert build_retraction(e(2), e(1, 2, 3)) == IntMatrix([[0, 1, 0]])


def test_retraction_non_unit_vector():
    r = build_retraction(IntMatrix([[1], [2]]), IntMatrix.identity(2))
    assert r == IntMatrix([[1, 0]])
    assert (r @ IntMatrix([[1], [2]])).tolist() == [[1]]


def test_retraction_rejects_imprimitive():
    with pytest.raises(NotPrimitive):
        build_retraction(IntMatrix([[2], [0]]), IntMatrix.identity(2))


# -- the two boundary extensions ----------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(plane, upper, primes)
def test_central_class_is_tau2(tau2, tau3, p):
    prob, cls = solve(central_mhs(tau2, tau3, p))
    assert cls.point.distance(reduce_point(tau2, prob.curve)) < 1e-9
    assert prob.curve.generators == pytest.approx((tau3, p))


@settings(max_examples=40, deadline=None)
@given(upper, plane, primes)
def test_peripheral_class_is_tau2(tau1, tau2, p):
    prob, cls = solve(peripheral_mhs(tau1, tau2, p))
    assert cls.point.distance(reduce_point(tau2, prob.curve)) < 1e-9
    assert prob.curve.generators == pytest.approx((tau1, 1))


def test_psi_matches_explicit_hom():
    # central: psi = (tau2 / p) e4* (x) e1, evaluated on the generator of the curve (tau3/p, 1)
    tau2, tau3, p = 0.3 + 0.2j, 2j, 5
    _, cls = solve(central_mhs(tau2, tau3, p))
    assert abs(cls.psi_on_hodge - tau2 / p) < 1e-12


def test_split_extension_has_zero_class():
    mhs = MixedHS(3, IntMatrix([[1], [0], [0]]), IntMatrix.identity(3),
                  np.array([[0, 0.2 + 1.1j, 1]]))
    _, cls = solve(mhs)
    assert cls.point.is_zero()
    assert cls.point.distance(TorusPoint(cls.point.lattice, 0)) < 1e-12


def test_degenerate_f1_in_w0():
    mhs = MixedHS(3, IntMatrix([[1], [0], [0]]), IntMatrix.identity(3),
                  np.array([[1, 1j, 1], [1, 0, 0]]))
    with pytest.raises((DegenerateF1, WrongDimension)):
        solve(mhs)


def test_extension_problem_requires_rank_1_and_3():
    mhs = MixedHS(4, IntMatrix.zeros(4, 0), e(1, 2, 4), np.zeros((1, 4)))
    with pytest.raises(WrongDimension):
        ExtensionProblem(mhs, ComplexLattice(1j, 1), e(2, 4))


# -- invariance properties ----------------------------------------------------------------------------

def cycle_mhs(tau, s1, s2, n=3):
    L = ComplexLattice(tau, 1)
    return build_cycle_mhs(CycleData(n, L, TorusPoint(L, L.point(s1, s2))))


@settings(max_examples=60, deadline=None)
@given(st.builds(complex, st.floats(-0.45, 0.45), st.floats(1.0, 2.5)), unit, unit,
       st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5)), min_size=1, max_size=4))
def test_retraction_independence(tau, s1, s2, shifts):
    prob, cls = solve(cycle_mhs(tau, s1, s2))
    r = build_retraction(prob.ambient.W0, prob.ambient.W1)
    for r2 in prob.alternative_retractions(r, [list(m) for m in shifts]):
        assert extension_class(prob, r2).point.distance(cls.point) < 1e-9


def test_retraction_independence_in_a_skewed_basis():
    rng = np.random.default_rng(11)
    for _ in range(20):
        mhs = transform_mhs(cycle_mhs(0.1 + 1.3j, 0.4, 0.7), random_gl(rng, 3))
        prob, cls = solve(mhs)
        r = build_retraction(mhs.W0, mhs.W1)
        r2, = prob.alternative_retractions(r, [[2, -3]])
        assert r2 != r
        assert extension_class(prob, r2).point.distance(cls.point) < 1e-9


@settings(max_examples=40, deadline=None)
@given(unit, unit, st.builds(complex, st.floats(-2, 2), st.floats(-2, 2)).filter(
    lambda a: abs(a) > 0.1))
def test_homothety_naturality(s1, s2, alpha):
    prob, cls = solve(cycle_mhs(0.2 + 1.2j, s1, s2))
    scaled = ExtensionProblem(prob.ambient, prob.curve.scaled(alpha), prob.quotient_basis)
    cls2 = extension_class(scaled, build_retraction(prob.ambient.W0, prob.ambient.W1))
    L2 = scaled.curve
    assert cls2.point.distance(TorusPoint(L2, L2.point(*cls.point.coords))) < 1e-9
    assert cls2.point.distance(TorusPoint(L2, alpha * cls.point.rep)) < 1e-9


# -- J0 ----------------------------------------------------------------------------------------

def test_j0_checks():
    assert j0_dimension_check(ComplexLattice(1j, 1)).covolume == pytest.approx(1)
    rec = j0_dimension_check(ComplexLattice(0.3 + 2j, 5))
    assert rec.nonsingular and rec.covolume == pytest.approx(10)
    assert not j0_dimension_check((1, 2)).nonsingular
