"""Self-test harness behind ``abdegen verify``.

Each check draws its random cases from a seeded generator, so a failing run
can be replayed exactly.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .carlson import ExtensionProblem, build_retraction, extension_class
from .cycle import CycleData, build_cycle_mhs, e1_differentials, e2_page
from .degeneration import (CentralPoint, PeripheralPoint, count_components, default_probes,
                           family_from_boundary, reconstruct)
from .exact_linalg import DEFAULT_TOL, IntMatrix, invariant_factors
from .hodge import induced_pairing, polarization_matrix
from .lattice import (ComplexLattice, TorusPoint, lattices_equivalent, mobius,
                      reduce_fundamental, reduce_point)
from .mhs import MixedHS, limit_spread, log_monodromy


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_residual: float = 0.0
    cases: int = 0
    detail: str = ""
    elapsed: float = field(default=0.0, compare=False)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "max_residual": self.max_residual,
                "cases": self.cases, "detail": self.detail}


# -- random inputs -----------------------------------------------------------

def random_complex(rng, re=(-1.0, 1.0), im=(-1.0, 1.0)) -> complex:
    return complex(rng.uniform(*re), rng.uniform(*im))


def random_reduced_tau(rng, margin: float = 0.05) -> complex:
    """A point strictly inside the fundamental domain."""
    while True:
        tau = complex(rng.uniform(-0.5 + margin, 0.5 - margin), rng.uniform(0.8, 3.0))
        if abs(tau) > 1 + margin:
            return tau


def random_sl2(rng, bound: int = 5) -> IntMatrix:
    while True:
        a, b, c, d = (int(x) for x in rng.integers(-bound, bound + 1, size=4))
        if a * d - b * c == 1:
            return IntMatrix([[a, b], [c, d]])


def random_gl(rng, n: int, steps: int = 8) -> IntMatrix:
    """Random unimodular matrix as a product of elementary operations."""
    m = IntMatrix.identity(n).tolist()
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        k = int(rng.integers(-2, 3))
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
    if rng.random() < 0.5:
        m[0] = [-a for a in m[0]]
    return IntMatrix(m)


def transform_mhs(mhs: MixedHS, G: IntMatrix) -> MixedHS:
    """The same MHS written in the lattice basis obtained by applying ``G``."""
    return MixedHS(mhs.rank, G @ mhs.W0, G @ mhs.W1, mhs.F1 @ G.to_numpy().T)


# -- independent oracle --------------------------------------------------------

def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _wedge(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            idx = ka + kb
            if len(set(idx)) < len(idx):
                continue
            key = tuple(sorted(idx))
            out[key] = out.get(key, 0) + _perm_sign(idx) * va * vb
    return {k: v for k, v in out.items() if v}


def wedge_polarization_oracle(D) -> IntMatrix:
    """``Q_ab = int dx_a ^ dx_b ^ omega^(g-1)`` by expanding in the exterior algebra."""
    g = len(D)
    omega = {(i, i + g): -d for i, d in enumerate(D)}
    power = {(): 1}
    for _ in range(g - 1):
        power = _wedge(power, omega)
    vol_order = [x for i in range(g) for x in (i, i + g)]
    vol_sign = _perm_sign(vol_order)
    Q = [[0] * (2 * g) for _ in range(2 * g)]
    for a, b in itertools.permutations(range(2 * g), 2):
        top = _wedge({(a, b): 1}, power)
        Q[a][b] = sum(top.values()) * vol_sign
    return IntMatrix(Q)


# -- checks -------------------------------------------------------------------

def check_central(rng, cases: int = 50, tol: float = DEFAULT_TOL) -> CheckResult:
    worst, ok = 0.0, True
    start = time.perf_counter()
    for _ in range(cases):
        p = int(rng.choice([3, 5, 7]))
        tau2 = random_complex(rng)
        tau3 = random_complex(rng, im=(0.5, 3.0))
        fib = reconstruct(CentralPoint(tau2, tau3, p), tol=tol)
        expected = ComplexLattice(tau3, p)
        d = fib.shift.distance(reduce_point(tau2, expected))
        worst = max(worst, d)
        ok &= fib.n_components == 1 and lattices_equivalent(fib.curve, expected, tol) is not None
        ok &= d < tol
    elapsed = time.perf_counter() - start
    budget = max(1.0, cases / 50)  # one second per 50 cases
    return CheckResult("theorem_central", bool(ok and elapsed < budget), worst, cases,
                       "N=1, C ~ Z tau3 + Z p, s = [tau2]", elapsed)


def check_peripheral(rng, cases: int = 50, tol: float = DEFAULT_TOL) -> CheckResult:
    worst, ok = 0.0, True
    for _ in range(cases):
        p = int(rng.choice([3, 5, 7]))
        tau1 = random_complex(rng, im=(0.5, 3.0))
        tau2 = random_complex(rng)
        fib = reconstruct(PeripheralPoint(tau1, tau2, p), tol=tol)
        expected = ComplexLattice(tau1, 1.0)
        d = fib.shift.distance(reduce_point(tau2, expected))
        d2 = (p * fib.bundle.candidate).distance(fib.shift)
        worst = max(worst, d, d2)
        ok &= fib.n_components == p and lattices_equivalent(fib.curve, expected, tol) is not None
        ok &= fib.bundle.order == p and d < tol and d2 < tol
    return CheckResult("theorem_peripheral", bool(ok), worst, cases,
                       "N=p, C ~ Z tau1 + Z, s = [tau2], p c = s")


def check_orbit_constancy(rng, cases: int = 10, tol: float = DEFAULT_TOL) -> CheckResult:
    worst = 0.0
    for b in (CentralPoint(random_complex(rng), random_complex(rng, im=(0.5, 3.0)), 5),
              PeripheralPoint(random_complex(rng, im=(0.5, 3.0)), random_complex(rng), 5)):
        fam = family_from_boundary(b)
        probes = default_probes(fam.M, 5) + [
            complex(rng.uniform(-3, 3), fam.M + rng.uniform(0.5, 4)) for _ in range(cases - 5)]
        worst = max(worst, limit_spread(fam.period_map, log_monodromy(fam.T), probes))
    return CheckResult("nilpotent_orbit_constancy", worst < tol, worst, cases,
                       "pairwise subspace distance of the untwisted period map")


def check_monodromy_polarization() -> CheckResult:
    ok = True
    for p in (3, 5, 7, 11):
        for b in (CentralPoint(0.1j, 1j, p), PeripheralPoint(1j, 0.1j, p)):
            fam = family_from_boundary(b)
            ok &= fam.T.T @ fam.Q @ fam.T == fam.Q
    return CheckResult("monodromy_preserves_polarization", bool(ok), 0.0, 8, "T^T Q T == Q")


def check_polarization_oracle() -> CheckResult:
    ok = polarization_matrix((1,)) == wedge_polarization_oracle((1,))
    for p in (3, 5, 7):
        Q = polarization_matrix((1, p))
        ok &= Q == wedge_polarization_oracle((1, p))
        central = induced_pairing(Q, IntMatrix.from_columns([[1, 0, 0, 0], [0, 1, 0, 0],
                                                            [0, 0, 0, 1]], 4),
                                  IntMatrix([[1], [0], [0], [0]]))
        peripheral = induced_pairing(Q, IntMatrix.from_columns([[1, 0, 0, 0], [0, 1, 0, 0],
                                                               [0, 0, 1, 0]], 4),
                                     IntMatrix([[0], [1], [0], [0]]))
        ok &= central == IntMatrix([[0, -1], [1, 0]])
        ok &= peripheral == IntMatrix([[0, -p], [p, 0]])
    return CheckResult("polarization_matrix_oracle", bool(ok), 0.0, 4,
                       "build_hs Q equals wedge-form integral")


def random_cycle_data(rng) -> CycleData:
    n = int(rng.integers(1, 8))
    L = ComplexLattice(random_reduced_tau(rng), 1.0)
    s = L.point(rng.random(), rng.random())
    return CycleData(n, L, TorusPoint(L, s))


def check_carlson_roundtrip(rng, cases: int = 100, tol: float = DEFAULT_TOL) -> CheckResult:
    worst = 0.0
    for _ in range(cases):
        data = random_cycle_data(rng)
        mhs = build_cycle_mhs(data)
        cls = extension_class(ExtensionProblem.from_mhs(mhs, tol),
                              build_retraction(mhs.W0, mhs.W1), tol)
        worst = max(worst, cls.point.distance(data.shift))
    return CheckResult("carlson_roundtrip", worst < tol, worst, cases,
                       "extension class of the cycle MHS equals the shift")


def check_retraction_independence(rng, cases: int = 20, tol: float = DEFAULT_TOL) -> CheckResult:
    worst = 0.0
    for _ in range(cases):
        mhs = transform_mhs(build_cycle_mhs(random_cycle_data(rng)), random_gl(rng, 3))
        prob = ExtensionProblem.from_mhs(mhs, tol)
        r = build_retraction(mhs.W0, mhs.W1)
        shift = [int(x) for x in rng.integers(-4, 5, size=2)]
        if shift == [0, 0]:
            shift = [1, 0]
        r2, = prob.alternative_retractions(r, [shift])
        a = extension_class(prob, r, tol).point
        b = extension_class(prob, r2, tol).point
        worst = max(worst, a.distance(b))
    return CheckResult("retraction_independence", worst < tol, worst, cases,
                       "two integral retractions give the same class")


def check_spectral_sequence() -> CheckResult:
    ok = True
    for n in range(2, 8):
        e1 = e1_differentials(n)
        ok &= e2_page(e1) == (1, 2)
        ok &= all(d in (0, 1) for d in invariant_factors(e1.delta0))
    return CheckResult("spectral_sequence_e2", bool(ok), 0.0, 6, "E2 ranks (1, 2), no torsion")


def check_component_count() -> CheckResult:
    ok = True
    for p in (3, 5, 7, 11):
        ok &= count_components(family_from_boundary(CentralPoint(0.2 + 0.1j, 1.5j, p))) == 1
        ok &= count_components(family_from_boundary(PeripheralPoint(1.5j, 0.2 + 0.1j, p))) == p
    return CheckResult("component_count", bool(ok), 0.0, 8, "N = 1 central, N = p peripheral")


def check_lattice_reduction(rng, cases: int = 200, tol: float = DEFAULT_TOL) -> CheckResult:
    worst = 0.0
    ok = True
    for _ in range(cases):
        tau = random_reduced_tau(rng)
        red, _ = reduce_fundamental(mobius(random_sl2(rng), tau))
        worst = max(worst, abs(red - tau))
        again, M = reduce_fundamental(red)
        ok &= abs(again - red) < tol and M == IntMatrix.identity(2)
    return CheckResult("lattice_reduction", bool(ok and worst < tol), worst, cases,
                       "SL(2,Z) translates reduce back; reduction idempotent")


def run_all(seed: int = 0, cases: int | None = None, tol: float = DEFAULT_TOL) -> list[CheckResult]:
    """Run every acceptance check; ``cases`` overrides the per-check default counts."""
    rng = np.random.default_rng(seed)

    def n(default):
        return default if cases is None else cases

    return [
        check_central(rng, n(50), tol),
        check_peripheral(rng, n(50), tol),
        check_orbit_constancy(rng, max(n(10), 5), tol),
        check_monodromy_polarization(),
        check_polarization_oracle(),
        check_carlson_roundtrip(rng, n(100), tol),
        check_retraction_independence(rng, n(20), tol),
        check_spectral_sequence(),
        check_component_count(),
        check_lattice_reduction(rng, n(200), tol),
    ]
