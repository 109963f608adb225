"""Polarized weight-1 Hodge structures of abelian varieties from period data."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidPeriodPoint, NotIsotropicAgainstW0
from .exact_linalg import (DEFAULT_TOL, IntMatrix, as_intmatrix, lattice_coordinates,
                           quotient_complement)


@dataclass(frozen=True, eq=False)
class PeriodPoint:
    """A point ``tau`` of Siegel space together with a polarization type ``D``."""

    tau: np.ndarray
    D: tuple[int, ...]
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        tau = np.atleast_2d(np.array(self.tau, dtype=complex))
        D = tuple(int(d) for d in self.D)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "D", D)
        g = len(D)
        if tau.shape != (g, g):
            raise InvalidPeriodPoint(f"tau has shape {tau.shape}, expected {(g, g)}")
        if not np.all(np.isfinite(tau)):
            raise InvalidPeriodPoint("tau has non-finite entries")
        if any(d <= 0 for d in D) or any(D[i + 1] % D[i] for i in range(g - 1)):
            raise InvalidPeriodPoint(f"D={D} must be positive with d_i | d_(i+1)")
        if np.max(np.abs(tau - tau.T)) > self.tol * max(1.0, np.max(np.abs(tau))):
            raise InvalidPeriodPoint("tau is not symmetric")
        im = tau.imag
        if any(np.linalg.det(im[:k, :k]) <= 0 for k in range(1, g + 1)):
            raise InvalidPeriodPoint("Im(tau) is not positive definite")

    @property
    def g(self) -> int:
        return len(self.D)


@dataclass(frozen=True, eq=False)
class PolarizedHS:
    """Rows of ``F1`` span F^1 in the coordinates of the dual symplectic basis."""

    F1: np.ndarray
    Q: IntMatrix

    @property
    def rank(self) -> int:
        return self.Q.rows


def polarization_matrix(D: Sequence[int]) -> IntMatrix:
    """The form on H^1 induced by a polarization of type ``D``.

    Blocks are ``+-(g-1)! * Dhat`` with ``Dhat = (prod d_i) D^{-1}``; the
    overall sign is ``(-1)**g`` so that the matrix agrees with integrating
    ``dx_a ^ dx_b ^ omega^(g-1)`` for ``omega = -sum d_i dx_i ^ dx_(i+g)``.
    For ``g = 2`` this is ``[[0, -Dhat], [Dhat, 0]]``.
    """
    g = len(D)
    prod = math.prod(D)
    dhat = [prod // d for d in D]
    c = (-1) ** g * math.factorial(g - 1)
    Q = [[0] * (2 * g) for _ in range(2 * g)]
    for i in range(g):
        Q[i][i + g] = -c * dhat[i]
        Q[i + g][i] = c * dhat[i]
    return IntMatrix(Q)


def build_hs(p: PeriodPoint) -> PolarizedHS:
    F1 = np.hstack([p.tau, np.diag(np.array(p.D, dtype=complex))])
    return PolarizedHS(F1, polarization_matrix(p.D))


def period_point_from_hs(hs: PolarizedHS) -> PeriodPoint:
    """Read ``(tau, D)`` back off the period rows of ``hs``."""
    g = hs.F1.shape[0]
    tau, right = hs.F1[:, :g], hs.F1[:, g:]
    if np.any(right != np.diag(np.diag(right))) or np.any(np.diag(right).imag != 0):
        raise InvalidPeriodPoint("right block of F1 is not a real diagonal matrix")
    D = tuple(int(round(d)) for d in np.diag(right).real)
    return PeriodPoint(tau, D)


def hermitian_sign(hs: PolarizedHS, tol: float = DEFAULT_TOL) -> int:
    """+1 / -1 if ``i F1 Q conj(F1)^T`` is positive / negative definite, else 0."""
    Q = hs.Q.to_numpy()
    H = 1j * hs.F1 @ Q @ hs.F1.conj().T
    H = (H + H.conj().T) / 2
    ev = np.linalg.eigvalsh(H)
    scale = tol * max(1.0, float(np.max(np.abs(hs.F1))) ** 2)
    if np.all(ev > scale):
        return 1
    if np.all(ev < -scale):
        return -1
    return 0


def riemann_residual(hs: PolarizedHS) -> float:
    """``max |F Q F^T|`` relative to ``max(1, max|F|^2)``; zero for a valid structure."""
    F = hs.F1
    if not F.size:
        return 0.0
    first = float(np.max(np.abs(F @ hs.Q.to_numpy() @ F.T)))
    return first / max(1.0, float(np.max(np.abs(F))) ** 2)


def check_riemann(hs: PolarizedHS, tol: float = DEFAULT_TOL) -> bool:
    """Both Riemann relations; the sign of the Hermitian form is not prescribed."""
    if np.linalg.matrix_rank(hs.F1, tol=tol) < hs.F1.shape[0]:
        return False
    return riemann_residual(hs) <= tol and hermitian_sign(hs, tol) != 0


def induced_pairing(Q, W1, W0, quotient_basis=None) -> IntMatrix:
    """Matrix of ``Q`` on ``W1 / W0`` in a basis of integral representatives.

    ``quotient_basis`` defaults to the Hermite complement of ``W0`` in ``W1``.
    """
    Q, W1, W0 = as_intmatrix(Q), as_intmatrix(W1), as_intmatrix(W0)
    lattice_coordinates(W1, W0)  # W0 must sit inside W1
    if not (W1.T @ Q @ W0).is_zero():
        raise NotIsotropicAgainstW0("Q(W1, W0) != 0")
    B = quotient_complement(W0, W1) if quotient_basis is None else as_intmatrix(quotient_basis)
    return B.T @ Q @ B
