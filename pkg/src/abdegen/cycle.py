"""Forward model: the MHS on H^1 of a cycle of N elliptic ruled surfaces.

Works at the E1 page of the double complex.  With ``Y^0`` the disjoint union
of the components and ``Y^1`` the disjoint union of the double curves, the
differential ``delta`` sends the class on ``Y_i`` to ``(-beta_(i-1)^*, alpha_i^*)``.
Every pullback is the identity on H^0 and on H^1 (sections and translations
act trivially on torus cohomology), so the gluing shift only enters through
the correction term ``f_N`` of the integral splitting.

A single component is handled by doubling: two copies glued with the same
shift carry the same MHS.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, UnexpectedTopology
from .exact_linalg import IntMatrix, smith_normal_form, unimodular_inverse
from .lattice import ComplexLattice, TorusPoint
from .mhs import MixedHS


@dataclass(frozen=True)
class CycleData:
    n: int
    curve: ComplexLattice
    shift: TorusPoint

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InvalidInput("number of components must be a positive integer")
        if self.shift.lattice != self.curve:
            object.__setattr__(self, "shift",
                               TorusPoint(self.curve, self.curve.point(*self.shift.coords)))


@dataclass(frozen=True)
class E1Page:
    delta0: IntMatrix
    delta1: IntMatrix


def working_components(n: int) -> int:
    """Components actually used in the E1 computation (one component is doubled)."""
    return max(n, 2)


def _circulant(n: int, block: int) -> IntMatrix:
    m = [[0] * (n * block) for _ in range(n * block)]
    for j in range(n):
        for k in range(block):
            m[j * block + k][j * block + k] += 1
            m[j * block + k][((j + 1) % n) * block + k] -= 1
    return IntMatrix(m)


def e1_differentials(n: int) -> E1Page:
    """``delta`` on ``H^0`` (n x n) and on ``H^1`` (2n x 2n).

    Row ``j`` is the double curve ``C_j = Y_j meet Y_(j+1)``; ``Y_j`` contributes
    ``+alpha_j^*`` and ``Y_(j+1)`` contributes ``-beta_j^*``.
    """
    if n < 2:
        raise InvalidInput("E1 page needs n >= 2; double a single component first")
    return E1Page(_circulant(n, 1), _circulant(n, 2))


def _cokernel_functional(delta0: IntMatrix) -> list[int]:
    """Integral functional ``Z^n -> Z`` identifying ``Coker(delta0)`` with Z.

    Its sign is fixed so that it is the summation map.
    """
    U, S, _ = smith_normal_form(delta0)
    r = sum(1 for i in range(min(S.shape)) if S[i, i])
    if S.rows - r != 1 or any(S[i, i] != 1 for i in range(r)):
        raise UnexpectedTopology(f"Coker(delta0) is not Z: diagonal {[S[i, i] for i in range(r)]}")
    row = list(unimodular_inverse(U).row(r))
    if row[0] < 0:
        row = [-x for x in row]
    return row


def e2_page(e1: E1Page) -> tuple[int, int]:
    """Ranks of ``W0 = Coker(delta0)`` and ``Gr_1^W = Ker(delta1)``; must be (1, 2)."""
    _, S0, _ = smith_normal_form(e1.delta0)
    d0 = [S0[i, i] for i in range(min(S0.shape))]
    if any(d > 1 for d in d0):
        raise UnexpectedTopology(f"torsion in Coker(delta0): invariant factors {d0}")
    w0 = e1.delta0.rows - sum(1 for d in d0 if d)
    _, S1, _ = smith_normal_form(e1.delta1)
    gr1 = e1.delta1.cols - sum(1 for i in range(min(S1.shape)) if S1[i, i])
    if (w0, gr1) != (1, 2):
        raise UnexpectedTopology(f"E2 ranks {(w0, gr1)}, expected (1, 2)")
    return w0, gr1


def splitting_correction(data: CycleData, xi: tuple[complex, complex]) -> list[complex]:
    """The constants ``f_i`` on the double curves: zero except ``f_N = -xi . s``."""
    n = working_components(data.n)
    s1, s2 = data.shift.coords
    f = [0j] * n
    f[-1] = -(xi[0] * s1 + xi[1] * s2)
    return f


def build_cycle_mhs(data: CycleData) -> MixedHS:
    """MHS on the rank-3 lattice with basis ``w0, sigma(dx1), sigma(dx2)``.

    The Hodge generator is ``omega = i(-f) + sigma(phi)`` for
    ``phi = tau dx1 + dx2``; its ``w0`` coordinate is the class of ``-f`` in
    ``Coker(delta0)``.
    """
    tau = data.curve.tau
    xi = (tau, 1.0 + 0j)
    e1 = e1_differentials(working_components(data.n))
    e2_page(e1)
    summation = _cokernel_functional(e1.delta0)
    f = splitting_correction(data, xi)
    w0_coord = sum(c * -fi for c, fi in zip(summation, f))
    F1 = np.array([[w0_coord, xi[0], xi[1]]])
    return MixedHS(3, IntMatrix([[1], [0], [0]]), IntMatrix.identity(3), F1)


def loop_functional(coeffs) -> complex:
    """The loop ``c`` on the basis ``w0, sigma(dx1), sigma(dx2)``: 1, 0, 0."""
    return coeffs[0]


def loop_integral(data: CycleData, xi: tuple[complex, complex]) -> tuple[complex, complex]:
    """The two nonzero pieces of ``c(sigma(phi))`` for ``phi = xi1 dx1 + xi2 dx2``.

    Along the loop only the last component contributes: the jump of the
    correction function ``g_N`` and the integral of ``phi`` from ``p_N + s``
    back to ``p_N``.  They cancel.
    """
    f_n = splitting_correction(data, xi)[-1]
    jump = -f_n
    s1, s2 = data.shift.coords
    back_integral = -(xi[0] * s1 + xi[1] * s2)
    return jump, back_integral


def cycle_pairing(data: CycleData, n: int | None = None) -> IntMatrix:
    """``q = N * gamma`` on the basis ``sigma(dx1), sigma(dx2)``."""
    n = data.n if n is None else n
    if n < 1:
        raise InvalidInput("n must be positive")
    return IntMatrix([[0, n], [-n, 0]])
