"""Carlson's extension class of ``0 -> W0 -> W1 -> Gr_1^W -> 0`` as a point of Alb(C).

Recipe: choose an integral retraction ``r: W1 -> W0``, push F^1 to
``W0 + Gr_1^W`` via ``(r, pi)``, find ``psi: Gr_1^W -> W0`` with
``r(omega) = psi(pi(omega))`` on the Hodge generator ``omega``, and read
``psi`` on ``F^1 H^1(C)`` as a point of ``C / L``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateF1, NotPrimitive, WrongDimension
from .exact_linalg import (DEFAULT_TOL, IntMatrix, as_intmatrix, complete_to_unimodular,
                           is_primitive, lattice_coordinates, solve_complex, unimodular_inverse)
from .lattice import ComplexLattice, TorusPoint
from .mhs import MixedHS, graded_piece, restrict_to_W1


@dataclass(frozen=True, eq=False)
class ExtensionProblem:
    ambient: MixedHS
    curve: ComplexLattice
    quotient_basis: IntMatrix

    def __post_init__(self):
        if self.ambient.W0.cols != 1 or self.ambient.W1.cols != 3:
            raise WrongDimension("expected rank W0 = 1 and rank W1 = 3")
        object.__setattr__(self, "quotient_basis", as_intmatrix(self.quotient_basis))

    @classmethod
    def from_mhs(cls, mhs: MixedHS, tol: float = DEFAULT_TOL) -> "ExtensionProblem":
        gr = graded_piece(mhs, tol)
        return cls(mhs, gr.curve, gr.quotient_basis)

    def _w1_frame(self) -> tuple[IntMatrix, IntMatrix]:
        """W1-coordinates of ``w0`` and of the quotient basis, and the inverse frame."""
        W0, W1 = self.ambient.W0, self.ambient.W1
        frame = lattice_coordinates(W1, W0.hstack(self.quotient_basis))
        return frame, unimodular_inverse(frame)

    def projection(self) -> IntMatrix:
        """``pi`` on W1-coordinates, landing in quotient-basis coordinates."""
        _, inv = self._w1_frame()
        return inv.select_rows([1, 2])

    def alternative_retractions(self, r: IntMatrix, shifts) -> list[IntMatrix]:
        """``r + m pi`` for integer row vectors ``m``; all are integral retractions."""
        pi = self.projection()
        return [r + IntMatrix([m]) @ pi for m in shifts]


@dataclass(frozen=True)
class ExtensionClass:
    point: TorusPoint
    psi_on_hodge: complex  # psi evaluated on tau dx1 + dx2


@dataclass(frozen=True)
class J0Record:
    covolume: float
    nonsingular: bool


def build_retraction(W0, W1) -> IntMatrix:
    """Integral row vector ``r`` on W1-coordinates with ``r(w0) = 1``.

    ``r`` is the first row of the inverse of the completed frame
    ``[w0 | complement]``, so it kills the Hermite complement.
    """
    W0, W1 = as_intmatrix(W0), as_intmatrix(W1)
    if W0.cols != 1 or not is_primitive(W0):
        raise NotPrimitive("W0 must be a primitive rank-1 sublattice")
    try:
        C = lattice_coordinates(W1, W0)
        frame = C.hstack(complete_to_unimodular(C))
    except ValueError as exc:
        raise NotPrimitive(str(exc)) from exc
    return unimodular_inverse(frame).select_rows([0])


def extension_class(prob: ExtensionProblem, r, tol: float = DEFAULT_TOL) -> ExtensionClass:
    r = as_intmatrix(r)
    mhs = prob.ambient
    if (r @ lattice_coordinates(mhs.W1, mhs.W0)).tolist() != [[1]]:
        raise NotPrimitive("r is not a retraction onto W0")
    omega = restrict_to_W1(mhs.F1, mhs.W1, tol)
    c, _ = solve_complex(mhs.W1.to_numpy(), omega.reshape(-1, 1), tol, consistent=True)
    r_omega = complex((r.to_numpy() @ c)[0, 0])
    pi_omega = (prob.projection().to_numpy() @ c)[:, 0]
    if np.max(np.abs(pi_omega)) <= tol:
        raise DegenerateF1("F^1 lies in W0")
    # pi(omega) = kappa * (l1, l2) = kappa * l2 * phi with phi = tau dx1 + dx2
    L = prob.curve
    kappa, _ = solve_complex(np.array([[L.l1], [L.l2]]), pi_omega.reshape(-1, 1), tol,
                             consistent=True)
    scale = complex(kappa[0, 0]) * L.l2
    psi_phi = r_omega / scale
    x1, x2 = L.normalized().coordinates(psi_phi)
    return ExtensionClass(TorusPoint(L, L.point(x1, x2)), psi_phi)


def j0_dimension_check(curve, tol: float = DEFAULT_TOL) -> J0Record:
    """Is the target of the class a real 2-torus?  Accepts a lattice or a raw pair."""
    l1, l2 = (curve.l1, curve.l2) if isinstance(curve, ComplexLattice) else map(complex, curve)
    covolume = abs((l1 * l2.conjugate()).imag)
    return J0Record(covolume, covolume > tol * abs(l1) * abs(l2))
