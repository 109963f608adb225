"""Corank-1 boundary points of the (1, p) moduli space and the degenerate fibre they determine."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .carlson import ExtensionProblem, build_retraction, extension_class
from .errors import InvalidBoundaryPoint, NonIntegerRatio, OutsideConvergence
from .exact_linalg import DEFAULT_TOL, IntMatrix
from .hodge import induced_pairing, polarization_matrix
from .lattice import ComplexLattice, DivisionCoset, TorusPoint, divide_point
from .mhs import MixedHS, graded_piece, limit_filtration, log_monodromy, weight_filtration

MAX_PRIME = 10**6
INTERSECTION_FORM = IntMatrix([[0, 1], [-1, 0]])


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % k for k in range(2, math.isqrt(p) + 1))


def _check_p(p) -> int:
    if isinstance(p, bool) or int(p) != p:
        raise InvalidBoundaryPoint(f"p must be an integer, got {p!r}")
    p = int(p)
    if p >= MAX_PRIME:
        raise InvalidBoundaryPoint(f"p={p} is too large (limit {MAX_PRIME})")
    if p < 3 or not _is_prime(p):
        raise InvalidBoundaryPoint(f"p={p} must be an odd prime")
    return p


@dataclass(frozen=True)
class CentralPoint:
    """Point ``(tau2, tau3)`` of the central boundary surface."""

    tau2: complex
    tau3: complex
    p: int

    def __post_init__(self):
        object.__setattr__(self, "p", _check_p(self.p))
        object.__setattr__(self, "tau2", complex(self.tau2))
        object.__setattr__(self, "tau3", complex(self.tau3))
        if not self.tau3.imag > 0:
            raise InvalidBoundaryPoint("Im(tau3) must be positive")
        if not all(map(math.isfinite, (self.tau2.real, self.tau2.imag, self.tau3.real))):
            raise InvalidBoundaryPoint("non-finite coordinates")

    kind = "central"


@dataclass(frozen=True)
class PeripheralPoint:
    """Point ``(tau1, tau2)`` of the peripheral boundary surface ``D(l_(0,1))``."""

    tau1: complex
    tau2: complex
    p: int

    def __post_init__(self):
        object.__setattr__(self, "p", _check_p(self.p))
        object.__setattr__(self, "tau1", complex(self.tau1))
        object.__setattr__(self, "tau2", complex(self.tau2))
        if not self.tau1.imag > 0:
            raise InvalidBoundaryPoint("Im(tau1) must be positive")
        if not all(map(math.isfinite, (self.tau2.real, self.tau2.imag, self.tau1.real))):
            raise InvalidBoundaryPoint("non-finite coordinates")

    kind = "peripheral"


BoundaryPoint = Union[CentralPoint, PeripheralPoint]


@dataclass(frozen=True, eq=False)
class Family:
    """One-parameter family over ``Im tau > M`` with unipotent monodromy ``T``."""

    period_map: Callable[[complex], np.ndarray]
    T: IntMatrix
    Q: IntMatrix
    M: float
    boundary: BoundaryPoint | None = None

    def period_matrix(self, tau: complex) -> np.ndarray:
        """The 2x2 point of Siegel space over ``tau``."""
        return self.period_map(tau)[:, :2]

    def probes(self, count: int = 5) -> list[complex]:
        return default_probes(self.M, count)


def default_probes(M: float, count: int = 5) -> list[complex]:
    return [(M + 1) * 1j + k * (0.7 + 0.3j) for k in range(count)]


def _monodromy(eta) -> IntMatrix:
    (a, b), (c, d) = eta
    return IntMatrix([[1, 0, a, b], [0, 1, c, d], [0, 0, 1, 0], [0, 0, 0, 1]])


def family_from_boundary(b: BoundaryPoint) -> Family:
    p = b.p
    D = np.diag([1.0, p]).astype(complex)
    if isinstance(b, CentralPoint):
        tau2, tau3 = b.tau2, b.tau3

        def period_map(tau):
            return np.hstack([np.array([[tau, tau2], [tau2, tau3]]), D])

        T = _monodromy(((1, 0), (0, 0)))
        # Im of the Siegel point is positive definite once Im tau > (Im tau2)^2 / Im tau3
        threshold = tau2.imag ** 2 / tau3.imag
    elif isinstance(b, PeripheralPoint):
        tau1, tau2 = b.tau1, b.tau2

        def period_map(tau):
            return np.hstack([np.array([[tau1, tau2], [tau2, p * p * tau]]), D])

        T = _monodromy(((0, 0), (0, p)))
        threshold = tau2.imag ** 2 / (tau1.imag * p * p)
    else:
        raise InvalidBoundaryPoint(f"unknown boundary point {b!r}")
    M = max(2, math.floor(threshold) + 1)
    return Family(period_map, T, polarization_matrix((1, p)), float(M), b)


def disk_parameter(b: BoundaryPoint, tau: complex) -> complex:
    """``t = exp(2 pi i tau)``; for peripheral points the ``p^2`` is already in ``tau``."""
    M = family_from_boundary(b).M
    tau = complex(tau)
    if not tau.imag > M:
        raise OutsideConvergence(f"Im(tau)={tau.imag} must exceed M={M}")
    return cmath.exp(2j * math.pi * tau)


def graded_pairing(fam: Family) -> IntMatrix:
    """The polarization induced on ``Gr_1^W`` in the basis used to identify the curve."""
    N = log_monodromy(fam.T)
    W0, W1 = weight_filtration(N)
    F_inf = limit_filtration(fam.period_map, N, fam.probes())
    mhs = MixedHS(fam.T.rows, W0, W1, F_inf)
    return induced_pairing(fam.Q, W1, W0, graded_piece(mhs).quotient_basis)


def components_from_pairing(q: IntMatrix, gamma: IntMatrix = INTERSECTION_FORM) -> int:
    """``N`` from ``q = N eps gamma``, using absolute values to sidestep the orientation sign."""
    if q.shape != (2, 2) or q[0, 0] or q[1, 1] or q[0, 1] != -q[1, 0]:
        raise NonIntegerRatio(f"pairing {q.tolist()} is not alternating 2x2")
    n, rem = divmod(abs(q[0, 1]), abs(gamma[0, 1]))
    if rem or n == 0:
        raise NonIntegerRatio(f"|q12|={abs(q[0, 1])} is not a positive multiple of "
                              f"|gamma12|={abs(gamma[0, 1])}")
    return n


def count_components(fam: Family) -> int:
    return components_from_pairing(graded_pairing(fam))


@dataclass(frozen=True)
class ExactBundle:
    point: TorusPoint


@dataclass(frozen=True)
class BundleUpToTorsion:
    candidate: TorusPoint
    order: int

    @property
    def coset(self) -> DivisionCoset:
        return DivisionCoset(self.candidate, self.order)


@dataclass(frozen=True)
class DegenerateFiber:
    n_components: int
    curve: ComplexLattice
    shift: TorusPoint
    bundle: ExactBundle | BundleUpToTorsion


@dataclass(frozen=True, eq=False)
class Reconstruction:
    """A :class:`DegenerateFiber` with the intermediate objects that produced it."""

    fiber: DegenerateFiber
    family: Family
    mhs: MixedHS
    pairing: IntMatrix
    retraction: IntMatrix
    problem: ExtensionProblem


def reconstruct_detailed(b: BoundaryPoint, probes: Sequence[complex] | None = None,
                         tol: float = DEFAULT_TOL) -> Reconstruction:
    fam = family_from_boundary(b)
    probes = fam.probes() if probes is None else list(probes)
    N = log_monodromy(fam.T)
    W0, W1 = weight_filtration(N)
    F_inf = limit_filtration(fam.period_map, N, probes, tol, bound=fam.M)
    mhs = MixedHS(fam.T.rows, W0, W1, F_inf)
    prob = ExtensionProblem.from_mhs(mhs, tol)
    r = build_retraction(W0, W1)
    shift = extension_class(prob, r, tol).point
    q = induced_pairing(fam.Q, W1, W0, prob.quotient_basis)
    n = components_from_pairing(q)
    if n == 1:
        bundle = ExactBundle(shift)
    else:
        bundle = BundleUpToTorsion(divide_point(shift, n)[0], n)
    fiber = DegenerateFiber(n, prob.curve, shift, bundle)
    return Reconstruction(fiber, fam, mhs, q, r, prob)


def reconstruct(b: BoundaryPoint, probes: Sequence[complex] | None = None,
                tol: float = DEFAULT_TOL) -> DegenerateFiber:
    """Number of components, base curve, shift and line-bundle data from a boundary point."""
    return reconstruct_detailed(b, probes, tol).fiber
