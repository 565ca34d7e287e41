import math

import numpy as np
import pytest

from bloch_interp.geometry import rho
from bloch_interp.sequences import (HAYMAN_THRESHOLD, N_MAX, PointSequence, augment_close,
                                    close_point, gen_geometric, hayman_bounds, separation_report)
from conftest import hayman_admissible, random_disk

# mpmath brute force over all 132 ordered pairs at 40 digits
DELTA_UNIF_GEOMETRIC_12 = 0.016886832666488143904


def test_point_sequence_validation():
    with pytest.raises(ValueError):
        PointSequence([])
    with pytest.raises(ValueError):
        PointSequence([0.1, 0.2, 0.1])
    with pytest.raises(ValueError):
        PointSequence([0.5, 1.2])
    with pytest.raises(ValueError):
        PointSequence(np.linspace(0, 0.9, N_MAX + 1))
    seq = PointSequence([0.1, 0.2j], "x")
    assert len(seq) == 2 and seq[1].im == 0.2
    with pytest.raises(ValueError):
        seq.z[0] = 0.3


def test_sequence_json_roundtrip():
    seq = PointSequence([0.5, -0.25 + 0.125j], "demo")
    again = PointSequence.from_dict(seq.to_dict())
    assert again.label == "demo"
    assert np.array_equal(again.z, seq.z)
    with pytest.raises(ValueError):
        PointSequence.from_dict({"label": "no points"})
    with pytest.raises(ValueError):
        PointSequence.from_dict({"points": [{"im": 0.1}]})


def test_gen_geometric_examples():
    assert list(gen_geometric(1).z) == [0.5]
    assert list(gen_geometric(3).z) == [0.5, 0.75, 0.875]
    for bad in (0, -1, N_MAX + 1, 2.5, True):
        with pytest.raises(ValueError):
            gen_geometric(bad)


def test_gen_geometric_boundary_guard():
    # 1 - 2**-40 is within 1e-12 of the unit circle
    assert len(gen_geometric(39)) == 39
    with pytest.raises(ValueError, match="boundary"):
        gen_geometric(40)


@pytest.mark.parametrize("n", range(1, 21))
def test_geometric_consecutive_rho_closed_form(n):
    z = gen_geometric(n + 1).z
    assert abs(rho(z[n - 1], z[n]) - 1.0 / (3.0 - 2.0 ** -n)) <= 1e-12


@pytest.mark.parametrize("n", [1, 2, 5, 12, 20, 39])
def test_geometric_blaschke_sum(n):
    assert abs(separation_report(gen_geometric(n)).blaschke_sum - (1 - 2.0 ** -n)) <= 1e-15


def test_single_point_report():
    rep = separation_report(gen_geometric(1))
    assert rep.delta_unif == 1.0
    assert rep.blaschke_sum == 0.5
    assert rep.per_point_products == [1.0]


def test_delta_unif_geometric_12():
    rep = gen_geometric(12).separation
    assert 0 < rep.delta_unif < 1
    assert rep.delta_unif == pytest.approx(DELTA_UNIF_GEOMETRIC_12, rel=1e-12)


def test_log_space_products_match_direct(rng):
    seq = PointSequence(random_disk(rng, 30))
    rep = seq.separation
    for k in range(len(seq)):
        direct = math.prod(rho(seq.z[n], seq.z[k]) for n in range(len(seq)) if n != k)
        assert rep.per_point_products[k] == pytest.approx(direct, rel=1e-12)


def test_delta_unif_le_delta_sep(rng):
    for _ in range(50):
        seq = PointSequence(random_disk(rng, int(rng.integers(2, 20))))
        rep = seq.separation
        assert 0 <= rep.delta_unif <= rep.delta_sep < 1
        assert rep.blaschke_sum >= 0


def test_close_point_distance():
    for z1 in (0.5, 0.3 - 0.6j, 0.0):
        z0 = close_point(z1, 0.025)
        assert rho(z0, z1) == pytest.approx(0.025, abs=1e-15)
    assert close_point(0.5, 0.1).imag == 0 and close_point(0.5, 0.1).real < 0.5


def test_augment_close_example():
    base = gen_geometric(8)
    seq = augment_close(base, 0.05)
    assert len(seq) == 9
    assert np.array_equal(seq.z[1:], base.z)
    r01 = rho(seq.z[0], seq.z[1])
    assert 0 < r01 < 0.05
    assert r01 == pytest.approx(0.025, abs=1e-15)
    assert seq.separation.delta_sep < 0.05
    # exact closed form for a real z1: (z1 - s)/(1 - s z1)
    assert seq.z[0] == (0.5 - 0.025) / (1 - 0.025 * 0.5)


@pytest.mark.parametrize("eps", [0.5, 0.2, 0.05, 0.01, 1e-4])
def test_augment_close_changes_blaschke_sum_by_new_point(eps):
    base = gen_geometric(8)
    seq = augment_close(base, eps)
    assert seq.separation.delta_sep < eps
    gained = seq.separation.blaschke_sum - base.separation.blaschke_sum
    assert gained == pytest.approx(1 - abs(seq.z[0]), abs=1e-15)


def test_augment_close_errors():
    base = gen_geometric(4)
    for bad in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            augment_close(base, bad)
    with pytest.raises(ValueError, match="too small"):
        augment_close(base, 1e-20)


def test_hayman_single_index():
    rep = hayman_bounds(gen_geometric(5), [2])
    assert rep.products == [1.0]
    assert rep.hypothesis_holds and rep.passed


def test_hayman_index_validation():
    seq = gen_geometric(5)
    for bad in ([], [0, 0], [3, 1], [0, 5], [-1]):
        with pytest.raises(ValueError):
            hayman_bounds(seq, bad)


def test_hayman_pairwise_symmetry(rng):
    z, w = random_disk(rng, 500), random_disk(rng, 500)
    bzw = np.abs((w - z) / (1 - np.conj(z) * w))
    bwz = np.abs((z - w) / (1 - np.conj(w) * z))
    assert np.max(np.abs(bzw - bwz)) <= 1e-12


def test_hayman_admissible_configuration(rng):
    pts = hayman_admissible(rng, 6)
    seq = PointSequence(pts)
    rep = hayman_bounds(seq, range(6))
    assert rep.hypothesis_holds
    assert all(q > HAYMAN_THRESHOLD for q in rep.products)
    assert rep.passed


def test_hayman_hypothesis_failure_reported():
    rep = hayman_bounds(gen_geometric(6), [0, 1, 2])
    assert not rep.hypothesis_holds
    assert rep.bound_holds is None and not rep.passed
    assert [0, 1] in rep.violations
