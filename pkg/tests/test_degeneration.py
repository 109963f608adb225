import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abdegen.carlson import ExtensionProblem, build_retraction, extension_class
from abdegen.cycle import CycleData, build_cycle_mhs, cycle_pairing
from abdegen.degeneration import (BundleUpToTorsion, CentralPoint, ExactBundle, PeripheralPoint,
                                  components_from_pairing, count_components, default_probes,
                                  disk_parameter, family_from_boundary, graded_pairing,
                                  reconstruct, reconstruct_detailed)
from abdegen.errors import InvalidBoundaryPoint, NonIntegerRatio, OutsideConvergence
from abdegen.exact_linalg import IntMatrix, subspace_distance
from abdegen.hodge import PolarizedHS, check_riemann
from abdegen.lattice import ComplexLattice, TorusPoint, lattices_equivalent, reduce_point

upper = st.builds(complex, st.floats(-1, 1), st.floats(0.5, 3))
plane = st.builds(complex, st.floats(-1, 1), st.floats(-1, 1))
primes = st.sampled_from([3, 5, 7, 11])
boundary_points = st.one_of(st.builds(CentralPoint, plane, upper, primes),
                            st.builds(PeripheralPoint, upper, plane, primes))


# -- boundary points and families -----------------------------------------------------------------

@pytest.mark.parametrize("p", [1, 2, 4, 9, 15, 10**6 + 3, 2.5, True])
def test_p_must_be_odd_prime(p):
    with pytest.raises(InvalidBoundaryPoint):
        CentralPoint(0.1, 1j, p)


def test_upper_half_plane_required():
    with pytest.raises(InvalidBoundaryPoint):
        CentralPoint(0.1, -1j, 5)
    with pytest.raises(InvalidBoundaryPoint):
        PeripheralPoint(0.5, 0.1, 5)


def test_period_rows_central():
    tau2, tau3, p = 0.3 + 0.2j, 2j, 5
    fam = family_from_boundary(CentralPoint(tau2, tau3, p))
    assert np.allclose(fam.period_map(2j), [[2j, tau2, 1, 0], [tau2, tau3, 0, p]])
    assert fam.T == IntMatrix([[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_period_rows_peripheral():
    tau1, tau2, p = 1j, 0.3 - 0.4j, 3
    fam = family_from_boundary(PeripheralPoint(tau1, tau2, p))
    assert np.allclose(fam.period_map(2j), [[tau1, tau2, 1, 0], [tau2, 2 * p * p * 1j, 0, p]])
    assert fam.T == IntMatrix([[1, 0, 0, 0], [0, 1, 0, p], [0, 0, 1, 0], [0, 0, 0, 1]])


@settings(max_examples=40, deadline=None)
@given(boundary_points)
def test_family_invariants(b):
    fam = family_from_boundary(b)
    assert fam.T.T @ fam.Q @ fam.T == fam.Q
    N = fam.T - IntMatrix.identity(4)
    assert (N @ N).is_zero()
    rng = np.random.default_rng(0)
    Tt = fam.T.to_numpy().T
    for _ in range(10):
        t = complex(rng.uniform(-2, 2), fam.M + rng.uniform(0.1, 3))
        assert subspace_distance(fam.period_map(t + 1), fam.period_map(t) @ Tt) < 1e-9
        assert check_riemann(PolarizedHS(fam.period_map(t), fam.Q))


def test_default_probes():
    assert default_probes(2.0) == [3j + k * (0.7 + 0.3j) for k in range(5)]
    fam = family_from_boundary(CentralPoint(0.1, 1j, 3))
    assert fam.M == 2 and all(t.imag > fam.M for t in fam.probes(10))


def test_convergence_bound_grows_with_im_tau2():
    fam = family_from_boundary(CentralPoint(4j, 1j, 3))
    assert fam.M > 16
    t = fam.M + 0.01
    assert np.all(np.linalg.eigvalsh(fam.period_matrix(1j * t).imag) > 0)


# -- disk parameter ------------------------------------------------------------------------------

def test_disk_parameter():
    b = CentralPoint(0.1, 1j, 5)
    t = disk_parameter(b, 5j)
    assert abs(t - math.exp(-10 * math.pi)) < 1e-25 and abs(t.imag) < 1e-25
    assert abs(disk_parameter(b, 5j + 0.3) - disk_parameter(b, 5j + 1.3)) < 1e-20
    M = family_from_boundary(b).M
    assert abs(disk_parameter(b, (M + 1) * 1j)) < math.exp(-2 * math.pi * M)
    with pytest.raises(OutsideConvergence):
        disk_parameter(b, 1j)
    assert abs(disk_parameter(PeripheralPoint(1j, 0.1, 3), 4j)) == pytest.approx(
        abs(cmath.exp(-8 * math.pi)))


# -- component count ----------------------------------------------------------------------------

@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_count_components(p):
    assert count_components(family_from_boundary(CentralPoint(0.2 + 0.1j, 1.5j, p))) == 1
    assert count_components(family_from_boundary(PeripheralPoint(1.5j, 0.2 + 0.1j, p))) == p


@pytest.mark.parametrize("p", [3, 7])
def test_graded_pairings(p):
    q = graded_pairing(family_from_boundary(PeripheralPoint(1.5j, 0.2, p)))
    assert abs(q[0, 1]) == p and q[0, 1] == -q[1, 0]
    q = graded_pairing(family_from_boundary(CentralPoint(0.2, 1.5j, p)))
    assert abs(q[0, 1]) == 1


def test_components_from_pairing():
    assert components_from_pairing(IntMatrix([[0, -3], [3, 0]])) == 3
    with pytest.raises(NonIntegerRatio):
        components_from_pairing(IntMatrix([[0, -3], [3, 0]]), IntMatrix([[0, 2], [-2, 0]]))
    with pytest.raises(NonIntegerRatio):
        components_from_pairing(IntMatrix([[1, 0], [0, 1]]))


# -- reconstruction -----------------------------------------------------------------------------------

def test_reconstruct_central_example():
    fib = reconstruct(CentralPoint(0.3 + 0.2j, 2j, 5))
    assert fib.n_components == 1
    assert lattices_equivalent(fib.curve, ComplexLattice(2j, 5)) is not None
    assert fib.curve.generators == pytest.approx((2j, 5))
    assert fib.shift.distance(reduce_point(0.3 + 0.2j, fib.curve)) < 1e-9
    assert isinstance(fib.bundle, ExactBundle)
    assert fib.bundle.point.distance(fib.shift) < 1e-12


def test_reconstruct_peripheral_zero_shift():
    fib = reconstruct(PeripheralPoint(1j, 0, 3))
    assert fib.n_components == 3
    assert lattices_equivalent(fib.curve, ComplexLattice(1j, 1)) is not None
    assert fib.shift.is_zero()
    assert isinstance(fib.bundle, BundleUpToTorsion)
    assert fib.bundle.candidate.is_zero() and fib.bundle.order == 3
    pts = fib.bundle.coset.points()
    assert len(pts) == 9 and all((3 * x).is_zero() for x in pts)


@settings(max_examples=40, deadline=None)
@given(plane, upper, primes)
def test_reconstruct_central(tau2, tau3, p):
    fib = reconstruct(CentralPoint(tau2, tau3, p))
    assert fib.n_components == 1
    assert lattices_equivalent(fib.curve, ComplexLattice(tau3, p)) is not None
    assert fib.shift.distance(reduce_point(tau2, ComplexLattice(tau3, p))) < 1e-9


@settings(max_examples=40, deadline=None)
@given(upper, plane, primes)
def test_reconstruct_peripheral(tau1, tau2, p):
    fib = reconstruct(PeripheralPoint(tau1, tau2, p))
    assert fib.n_components == p
    assert lattices_equivalent(fib.curve, ComplexLattice(tau1, 1)) is not None
    assert fib.shift.distance(reduce_point(tau2, ComplexLattice(tau1, 1))) < 1e-9
    assert (p * fib.bundle.candidate).distance(fib.shift) < 1e-9
    assert fib.bundle.coset.contains(fib.bundle.candidate)


@settings(max_examples=25, deadline=None)
@given(boundary_points, st.floats(0, 5), st.floats(-3, 3))
def test_reconstruct_probe_invariance(b, lift, slide):
    base = reconstruct(b)
    M = family_from_boundary(b).M
    probes = [complex(slide + k, M + 0.5 + lift + 0.7 * k) for k in range(6)]
    other = reconstruct(b, probes)
    assert other.n_components == base.n_components
    assert other.shift.distance(base.shift) < 1e-9
    assert lattices_equivalent(other.curve, base.curve) is not None


@settings(max_examples=30, deadline=None)
@given(upper, plane, primes)
def test_reconstruct_matches_forward_model(tau1, tau2, p):
    # the peripheral fibre is a cycle of p ruled surfaces over (tau1, 1) with shift tau2
    rec = reconstruct_detailed(PeripheralPoint(tau1, tau2, p))
    L = ComplexLattice(tau1, 1)
    data = CycleData(p, L, TorusPoint(L, tau2))
    mhs = build_cycle_mhs(data)
    cls = extension_class(ExtensionProblem.from_mhs(mhs), build_retraction(mhs.W0, mhs.W1))
    assert lattices_equivalent(rec.fiber.curve, cls.point.lattice) is not None
    assert rec.fiber.shift.distance(TorusPoint(rec.fiber.curve, cls.point.rep)) < 1e-9
    assert abs(cycle_pairing(data)[0, 1]) == abs(rec.pairing[0, 1]) == rec.fiber.n_components
