import itertools
from fractions import Fraction

import pytest

from tropnorm.semiring import MonoidPair, TropPoly

ACCEPTANCE_LINES = {}


def poly1(*slopes, coeffs=None):
    """One-variable polynomial with the given slopes (coefficients default to 0)."""
    coeffs = coeffs or [0] * len(slopes)
    return TropPoly.from_terms(1, [((k,), c) for k, c in zip(slopes, coeffs)])


def poly(dim, *terms):
    return TropPoly.from_terms(dim, [(tuple(k), c) for k, c in terms])


@pytest.fixture
def unit():
    return MonoidPair.box([0], [1])


@pytest.fixture
def sym():
    return MonoidPair.box([-1], [1])


@pytest.fixture
def square():
    return MonoidPair.box([0, 0], [1, 1])


def grid(lo, hi, steps):
    axes = [[Fraction(a) + (Fraction(b) - Fraction(a)) * Fraction(j, steps) for j in range(steps + 1)]
            for a, b in zip(lo, hi)]
    return list(itertools.product(*axes))


def grid_essential(f, lo, hi, steps=24):
    """Independent oracle: slopes that uniquely attain the max at some grid point of a box."""
    found = set()
    for p in grid(lo, hi, steps):
        vals = sorted(((t(p), t.slope) for t in f.terms), reverse=True)
        if len(vals) == 1 or vals[0][0] > vals[1][0]:
            found.add(vals[0][1])
    return found


def solve_square(A, b):
    n = len(A)
    M = [[Fraction(x) for x in A[i]] + [Fraction(b[i])] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                fac = M[r][c] / M[c][c]
                M[r] = [x - fac * y for x, y in zip(M[r], M[c])]
    return tuple(M[i][-1] / M[i][i] for i in range(n))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
