"""Rank-2 lattices in C, elliptic curves as C/L, and points on them.

A :class:`ComplexLattice` stands in for an elliptic curve ``C`` (and for
``Alb(C)`` and ``Pic^0(C)``, which are identified with ``C`` once the origin
is fixed at 0).  Curve equality means lattice homothety.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateLattice, InvalidInput, NotUpperHalfPlane
from .exact_linalg import DEFAULT_TOL, IntMatrix, solve_complex

# coordinates this close to 1 are folded to 0 so canonical reps are stable
_WRAP_EPS = 1e-12

_S = ((0, -1), (1, 0))


def mobius(M, tau: complex) -> complex:
    (a, b), (c, d) = (M.row(0), M.row(1)) if isinstance(M, IntMatrix) else M
    return (a * tau + b) / (c * tau + d)


def _mul(A, B):
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(2)) for j in range(2))
                 for i in range(2))


def reduce_fundamental(tau: complex, tol: float = DEFAULT_TOL) -> tuple[complex, IntMatrix]:
    """Move ``tau`` into the standard fundamental domain of SL(2, Z).

    Returns ``(tau_red, M)`` with ``tau_red = M . tau``.  On the boundary the
    representative with ``Re tau_red >= 0`` is preferred.
    """
    tau = complex(tau)
    if not (tau.imag > 0) or not math.isfinite(tau.real):
        raise NotUpperHalfPlane(f"Im(tau) must be positive, got {tau!r}")
    M = ((1, 0), (0, 1))
    for _ in range(10_000):
        n = math.floor(tau.real + 0.5)
        if n:
            tau -= n
            M = _mul(((1, -n), (0, 1)), M)
        if abs(tau) < 1 - tol:
            tau = -1 / tau
            M = _mul(_S, M)
            continue
        break
    else:  # pragma: no cover - reduction always terminates for Im tau > 0
        raise NotUpperHalfPlane("reduction did not terminate")
    if tau.real < -0.5 + tol:
        tau += 1
        M = _mul(((1, 1), (0, 1)), M)
    if abs(abs(tau) - 1) <= tol and tau.real < -tol:
        tau = -1 / tau
        M = _mul(_S, M)
    return tau, IntMatrix(M)


@dataclass(frozen=True)
class ComplexLattice:
    """The lattice ``Z l1 + Z l2`` with ``Im(l1 / l2) > 0``.

    Generators given in the wrong orientation are swapped.
    """

    l1: complex
    l2: complex

    def __post_init__(self):
        l1, l2 = complex(self.l1), complex(self.l2)
        if not all(math.isfinite(x) for x in (l1.real, l1.imag, l2.real, l2.imag)):
            raise DegenerateLattice("lattice generators must be finite")
        if abs((l1 * l2.conjugate()).imag) <= DEFAULT_TOL * abs(l1) * abs(l2) or l2 == 0:
            raise DegenerateLattice(f"generators {l1!r}, {l2!r} are R-linearly dependent")
        if (l1 / l2).imag < 0:
            l1, l2 = l2, l1
        object.__setattr__(self, "l1", l1)
        object.__setattr__(self, "l2", l2)

    @property
    def generators(self) -> tuple[complex, complex]:
        return (self.l1, self.l2)

    @property
    def tau(self) -> complex:
        return self.l1 / self.l2

    @property
    def covolume(self) -> float:
        return abs((self.l1 * self.l2.conjugate()).imag)

    def coordinates(self, z: complex) -> tuple[float, float]:
        """Real ``(x1, x2)`` with ``z = x1 l1 + x2 l2``."""
        A = np.array([[self.l1.real, self.l2.real], [self.l1.imag, self.l2.imag]])
        x, _ = solve_complex(A, [complex(z).real, complex(z).imag])
        return float(x[0, 0].real), float(x[1, 0].real)

    def point(self, x1: float, x2: float) -> complex:
        return x1 * self.l1 + x2 * self.l2

    def scaled(self, alpha: complex) -> "ComplexLattice":
        return ComplexLattice(alpha * self.l1, alpha * self.l2)

    def normalized(self) -> "ComplexLattice":
        """The homothetic lattice ``Z tau + Z``."""
        return ComplexLattice(self.tau, 1.0)


def _wrap(x: float) -> float:
    x = x - math.floor(x)
    return 0.0 if x >= 1.0 - _WRAP_EPS else x


@dataclass(frozen=True)
class TorusPoint:
    """A point of ``C / L``; ``rep`` is canonicalised to coordinates in [0, 1)^2."""

    lattice: ComplexLattice
    rep: complex
    coords: tuple[float, float] = field(init=False, compare=False)

    def __post_init__(self):
        x1, x2 = self.lattice.coordinates(self.rep)
        x1, x2 = _wrap(x1), _wrap(x2)
        object.__setattr__(self, "coords", (x1, x2))
        object.__setattr__(self, "rep", self.lattice.point(x1, x2))

    def distance(self, other: "TorusPoint") -> float:
        """Wraparound distance between lattice coordinates (max over both)."""
        return max(min(abs(a - b), 1.0 - abs(a - b)) for a, b in zip(self.coords, other.coords))

    def isclose(self, other: "TorusPoint", tol: float = DEFAULT_TOL) -> bool:
        return self.distance(other) < tol

    def __add__(self, other: "TorusPoint") -> "TorusPoint":
        return TorusPoint(self.lattice, self.rep + other.rep)

    def __neg__(self) -> "TorusPoint":
        return TorusPoint(self.lattice, -self.rep)

    def __sub__(self, other: "TorusPoint") -> "TorusPoint":
        return self + (-other)

    def __rmul__(self, n: int) -> "TorusPoint":
        return TorusPoint(self.lattice, n * self.rep)

    def is_zero(self, tol: float = DEFAULT_TOL) -> bool:
        return self.isclose(TorusPoint(self.lattice, 0j), tol)


def reduce_point(z: complex, L: ComplexLattice) -> TorusPoint:
    return TorusPoint(L, complex(z))


def lattices_equivalent(L1: ComplexLattice, L2: ComplexLattice,
                        tol: float = DEFAULT_TOL) -> complex | None:
    """Return ``alpha`` with ``alpha * L1 == L2`` as sets, or None."""

    def reduced_basis(L):
        _, M = reduce_fundamental(L.tau, tol)
        (a, b), (c, d) = M.row(0), M.row(1)
        return a * L.l1 + b * L.l2, c * L.l1 + d * L.l2

    m1, m2 = reduced_basis(L1)
    n1, n2 = reduced_basis(L2)
    # boundary twins of the reduced basis of L2
    for u1, u2 in ((n1, n2), (n1 + n2, n2), (n1 - n2, n2), (-n2, n1)):
        if abs(m1 / m2 - u1 / u2) < tol:
            return u2 / m2
    return None


@dataclass(frozen=True)
class DivisionCoset:
    """The ``n**2`` solutions of ``n x = s``: ``base + (1/n) L`` modulo ``L``."""

    base: TorusPoint
    order: int

    def __len__(self) -> int:
        return self.order ** 2

    def points(self) -> list[TorusPoint]:
        L, n = self.base.lattice, self.order
        return [TorusPoint(L, self.base.rep + L.point(i / n, j / n))
                for i in range(n) for j in range(n)]

    def contains(self, x: TorusPoint, tol: float = DEFAULT_TOL) -> bool:
        return (self.order * x).isclose(self.order * self.base, tol)


def divide_point(s: TorusPoint, n: int) -> tuple[TorusPoint, DivisionCoset]:
    """The solution of ``n x = s`` with both coordinates in [0, 1/n), plus the full coset."""
    if n < 1:
        raise InvalidInput("n must be a positive integer")
    x1, x2 = s.coords
    sp = TorusPoint(s.lattice, s.lattice.point(x1 / n, x2 / n))
    return sp, DivisionCoset(sp, n)
