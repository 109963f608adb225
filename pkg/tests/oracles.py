"""Reference computations that share no code with the package.

Each one is slow and naive on purpose.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import reduce


def _minor(A, rows, cols) -> int:
    return _det([[A[i][j] for j in cols] for i in rows])


def _det(M) -> int:
    """Cofactor expansion along the first row."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det([row[:j] + row[j + 1:] for row in M[1:]])
               for j in range(n) if M[0][j])


def invariant_factors_by_minors(A) -> list[int]:
    """``d_k = D_k / D_(k-1)`` where ``D_k`` is the gcd of all k x k minors."""
    m, n = len(A), len(A[0])
    D = [1]
    for k in range(1, min(m, n) + 1):
        g = reduce(math.gcd, (abs(_minor(A, r, c)) for r in itertools.combinations(range(m), k)
                              for c in itertools.combinations(range(n), k)), 0)
        D.append(g)
    out = []
    for k in range(1, len(D)):
        out.append(0 if D[k] == 0 else D[k] // D[k - 1])
    return out


def rational_rank(A) -> int:
    """Rank over Q by Gaussian elimination with Fractions."""
    M = [[Fraction(x) for x in row] for row in A]
    rank, rows, cols = 0, len(M), len(M[0]) if M else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if M[r][c] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        for r in range(rows):
            if r != rank and M[r][c] != 0:
                f = M[r][c] / M[rank][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def _pfaffian(M) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    rest = list(range(1, n))
    for k, j in enumerate(rest):
        if M[0][j] == 0:
            continue
        keep = [i for i in rest if i != j]
        sub = [[M[a][b] for b in keep] for a in keep]
        total += (-1) ** k * M[0][j] * _pfaffian(sub)
    return total


def _perm_parity(seq) -> int:
    seen, sign = set(), 1
    seq = list(seq)
    for i in range(len(seq)):
        if i in seen:
            continue
        length, j = 0, i
        while j not in seen:
            seen.add(j)
            j = seq[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def polarization_by_pfaffian(D) -> list[list[int]]:
    """``int dx_a ^ dx_b ^ omega^(g-1)`` via ``(omega + t alpha)^g / g! = Pf`` times volume.

    ``omega = -sum d_i dx_i ^ dx_(i+g)``; the volume form
    ``dx_1 ^ dx_(g+1) ^ dx_2 ^ dx_(g+2) ...`` integrates to 1.
    """
    g = len(D)
    n = 2 * g
    omega = [[Fraction(0)] * n for _ in range(n)]
    for i, d in enumerate(D):
        omega[i][i + g], omega[i + g][i] = Fraction(-d), Fraction(d)
    orientation = _perm_parity([x for i in range(g) for x in (i, i + g)])
    Q = [[0] * n for _ in range(n)]
    for a, b in itertools.permutations(range(n), 2):
        shifted = [row[:] for row in omega]
        shifted[a][b] += 1
        shifted[b][a] -= 1
        # alpha ^ alpha = 0, so the t-derivative is a plain difference
        diff = _pfaffian(shifted) - _pfaffian(omega)
        Q[a][b] = int(diff * math.factorial(g - 1) * orientation)
    return Q


def sl2_orbit_search(tau: complex, max_len: int = 12) -> complex:
    """Breadth-first search over words in T, T^-1, S for a point of the closed fundamental domain.

    Among all hits at the shortest word length, returns the one with the
    largest imaginary part, then the largest real part, with boundary ties
    sent to ``Re >= 0``.
    """
    def in_domain(z):
        return abs(z.real) <= 0.5 + 1e-12 and abs(z) >= 1 - 1e-12

    frontier = {(round(tau.real, 12), round(tau.imag, 12)): tau}
    seen = set(frontier)
    for _ in range(max_len + 1):
        hits = [z for z in frontier.values() if in_domain(z)]
        if hits:
            z = max(hits, key=lambda z: (round(z.imag, 9), z.real))
            # boundary ties go to Re >= 0: z ~ z + 1 on the left edge, z ~ -conj(z) on the arc
            if abs(z.real + 0.5) < 1e-12:
                z += 1
            elif abs(abs(z) - 1) < 1e-12 and z.real < 0:
                z = -z.conjugate()
            return z
        nxt = {}
        for z in frontier.values():
            for w in (z + 1, z - 1, -1 / z):
                key = (round(w.real, 12), round(w.imag, 12))
                if key not in seen:
                    seen.add(key)
                    nxt[key] = w
        frontier = nxt
    raise RuntimeError("no word of the allowed length reaches the fundamental domain")
