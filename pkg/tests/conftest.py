import cmath
import math

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)


def random_disk(rng, n, rmax=0.999):
    """Points uniform in angle, radius spread toward the boundary."""
    r = rmax * np.sqrt(rng.uniform(0.0, 1.0, n))
    return r * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n))


def hayman_admissible(rng, m, max_tries=2000):
    """``m`` points with |b_k(z_p)| > exp(-2**-(p-k)) for all k < p, by rejection.

    Radii approach the boundary fast enough (1 - r_p ~ 8**-p) that later
    points are pseudohyperbolically far from all earlier ones.
    """
    pts = []
    for p in range(m):
        for _ in range(max_tries):
            r = 1.0 - rng.uniform(0.3, 1.0) * 8.0 ** -(p + 1)
            z = r * cmath.exp(2j * math.pi * rng.uniform())
            if all(abs((z - w) / (1 - w.conjugate() * z)) > math.exp(-(2.0 ** -(p - k)))
                   for k, w in enumerate(pts)):
                pts.append(z)
                break
        else:
            raise RuntimeError("could not place admissible point")
    return pts


_ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion: ``criterion(n, ok, detail)``."""
    def record(number, ok, detail):
        _ACCEPTANCE[number] = (bool(ok), detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"AC{number:<2} {'PASS' if ok else 'FAIL'}  {detail}")
