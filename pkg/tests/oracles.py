"""Independent reference computations used by the tests.

None of these call into the package's solvers.
"""

import math
from fractions import Fraction

import numpy as np


def bisect_root(f, lo, hi, tol=1e-15):
    flo = f(lo)
    assert flo * f(hi) < 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cos_fixed_point(amplitude=1.0, shift=0.0):
    return bisect_root(lambda x: amplitude * math.cos(x) + shift - x, -2.0, 2.0)


def linear_funceq_solution(psi, a, c):
    """Solve f = diag(a) P f + c exactly, P the permutation/selection matrix of psi.

    ``c`` has shape (n, d).
    """
    n = len(psi)
    P = np.zeros((n, n))
    for s, j in enumerate(psi):
        P[s, j] = 1.0
    M = np.eye(n) - np.diag(np.asarray(a, dtype=float)) @ P
    return np.linalg.solve(M, np.asarray(c, dtype=float))


def banach_bound(delta, lam):
    return Fraction(delta) / (1 - Fraction(lam))


def kannan_chatterjea_bound(delta, lam):
    lam = Fraction(lam)
    return (1 + lam) * Fraction(delta) / (1 - 2 * lam)


def ciric_bound(delta, lam):
    lam = Fraction(lam)
    return (2 + lam) * Fraction(delta) / (2 * (1 - lam))


def ciric_factor(l1, l2, l3, l4, l5):
    l1, l2, l3, l4, l5 = map(Fraction, (l1, l2, l3, l4, l5))
    half = (l2 + l3) / 2 + (l4 + l5) / 2
    return (l1 + half) / (1 - half)


def splitmix64_reference(seed, count):
    """Straight transcription of the published splitmix64 step."""
    out = []
    x = seed & 0xFFFFFFFFFFFFFFFF
    for _ in range(count):
        x = (x + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
        z = x
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        out.append(z ^ (z >> 31))
    return out


def naive_triangle_violation(D, rtol=1e-12):
    n = len(D)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs = D[a][c]
                if lhs - (D[a][b] + D[b][c]) > rtol * lhs:
                    return (a, b, c)
    return None
