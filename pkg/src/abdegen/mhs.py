"""Mixed Hodge structures with weights 0 and 1 and the limit MHS of a nilpotent orbit.

Only unipotent monodromy of index 2 is handled: ``N = T - 1`` with ``N^2 = 0``,
``W0`` the saturation of ``Im N`` and ``W1 = Ker N``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (DegenerateLine, InvalidInput, NotConstant, NotUnipotent, OutsideConvergence,
                     WrongDimension)
from .exact_linalg import (DEFAULT_TOL, IntMatrix, as_intmatrix, image_saturation,
                           in_integer_span, is_primitive, kernel_basis, left_null_space,
                           quotient_complement, solve_complex, subspace_distance)
from .lattice import ComplexLattice


@dataclass(frozen=True, eq=False)
class MixedHS:
    """Integral lattice ``Z^rank`` with ``W0 <= W1`` and Hodge rows ``F1``."""

    rank: int
    W0: IntMatrix
    W1: IntMatrix
    F1: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "F1", np.atleast_2d(np.array(self.F1, dtype=complex)))
        for name in ("W0", "W1"):
            W = as_intmatrix(getattr(self, name))
            object.__setattr__(self, name, W)
            if W.rows != self.rank or not is_primitive(W):
                raise InvalidInput(f"{name} is not a primitive sublattice of Z^{self.rank}")
        if not in_integer_span(self.W1, self.W0):
            raise InvalidInput("W0 is not contained in W1")
        if self.F1.shape[1] != self.rank:
            raise InvalidInput("F1 rows have the wrong length")


@dataclass(frozen=True)
class NilpotentOp:
    N: IntMatrix

    def __post_init__(self):
        N = as_intmatrix(self.N)
        object.__setattr__(self, "N", N)
        if not (N @ N).is_zero():
            raise NotUnipotent("N^2 != 0")


def log_monodromy(T) -> NilpotentOp:
    """``N = log T = T - 1`` for unipotent ``T`` with ``(T - 1)^2 = 0``."""
    T = as_intmatrix(T)
    return NilpotentOp(T - IntMatrix.identity(T.rows))


def weight_filtration(N: NilpotentOp) -> tuple[IntMatrix, IntMatrix]:
    return image_saturation(N.N), kernel_basis(N.N)


def limit_filtration(phi: Callable[[complex], np.ndarray], N: NilpotentOp,
                     probes: Sequence[complex], tol: float = DEFAULT_TOL,
                     bound: float | None = None) -> np.ndarray:
    """Untwist the period map by ``(1 - tau N)`` and check it is constant.

    ``phi(tau)`` returns period rows (spanning F^1).  The untwisted rows
    ``phi(tau) (1 - tau N)^T`` are evaluated at every probe; the value at the
    first probe is returned once all probes agree as subspaces.
    """
    probes = list(probes)
    if not probes:
        raise InvalidInput("at least one probe is required")
    if bound is not None and any(complex(t).imag <= bound for t in probes):
        raise OutsideConvergence(f"probes must have imaginary part > {bound}")
    values = _untwisted(phi, N, probes)
    spread = _spread(values)
    if spread >= tol:
        raise NotConstant(f"untwisted period map varies: subspace distance {spread:.3e}")
    return values[0]


def limit_spread(phi, N: NilpotentOp, probes: Sequence[complex]) -> float:
    """Largest pairwise subspace distance of the untwisted period map over ``probes``."""
    return _spread(_untwisted(phi, N, probes))


def _untwisted(phi, N: NilpotentOp, probes) -> list[np.ndarray]:
    Nn = N.N.to_numpy(complex)
    eye = np.eye(Nn.shape[0])
    return [np.atleast_2d(phi(t)) @ (eye - t * Nn).T for t in probes]


def _spread(values) -> float:
    return max((subspace_distance(a, b) for i, a in enumerate(values) for b in values[i + 1:]),
               default=0.0)


def restrict_to_W1(F_inf, W1, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Generator of ``F_inf`` intersected with ``span_C(W1)``, in ambient coordinates.

    The generator is ``a @ F_inf`` with ``a`` scaled so its largest entry is 1.
    """
    F = np.atleast_2d(np.array(F_inf, dtype=complex))
    W1 = as_intmatrix(W1)
    ann = kernel_basis(W1.T)  # columns l with l^T W1 = 0
    null = left_null_space(F @ ann.to_numpy(complex), tol)
    if null.shape[0] != 1:
        raise WrongDimension(f"F meets W1 in dimension {null.shape[0]}, expected 1")
    a = null[0]
    a = a / a[np.argmax(np.abs(a))]
    return a @ F


@dataclass(frozen=True, eq=False)
class GradedPiece:
    """``Gr_1^W`` as the curve ``C`` together with the basis it was read off from."""

    curve: ComplexLattice
    quotient_basis: IntMatrix
    hodge_vector: np.ndarray  # generator of F^1 meet W1, ambient coordinates


def graded_piece(mhs: MixedHS, tol: float = DEFAULT_TOL) -> GradedPiece:
    """Identify ``Gr_1^W`` with ``H^1(C)`` for a weight-1 piece of rank 2.

    With quotient basis ``b1, b2`` and ``F^1 = [a b1 + b b2]`` the curve is
    ``C / (Z a + Z b)``.  If ``Im(a / b) < 0`` the basis is swapped so that the
    lattice generators stay paired with ``b1, b2`` in order.
    """
    if mhs.W1.cols - mhs.W0.cols != 2:
        raise WrongDimension("Gr_1^W must have rank 2")
    v = restrict_to_W1(mhs.F1, mhs.W1, tol)
    B = quotient_complement(mhs.W0, mhs.W1)
    basis = mhs.W0.hstack(B).to_numpy(complex)
    c, _ = solve_complex(basis, v.reshape(-1, 1), tol, consistent=True)
    a, b = complex(c[-2, 0]), complex(c[-1, 0])
    if abs((a * b.conjugate()).imag) <= tol * max(abs(a) * abs(b), tol):
        raise DegenerateLine("Hodge line on Gr_1^W is real-proportional")
    if (a * b.conjugate()).imag < 0:
        B = B.select_columns([1, 0])
        a, b = b, a
    return GradedPiece(ComplexLattice(a, b), B, v)


def identify_curve(mhs: MixedHS, tol: float = DEFAULT_TOL) -> ComplexLattice:
    return graded_piece(mhs, tol).curve
