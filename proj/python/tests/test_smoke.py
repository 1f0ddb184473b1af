import csv
import io
import json
import math

import numpy as np
import pytest

import magchain as mc

ZETA3 = 1.2020569031595943


def test_straight_chain_positions():
    c = mc.build_straight_chain(4)
    assert len(c) == 5
    np.testing.assert_array_equal(c.positions[:, 0], [0.0, 0.25, 0.5, 0.75, 1.0])
    np.testing.assert_array_equal(c.moments, np.tile([1.0, 0.0, 0.0], (5, 1)))


def test_ring_energy_matches_direct_pair_sum():
    n = 12
    ring = mc.build_circular_ring(n)
    p, m = ring.positions, ring.moments
    direct = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            d = p[i] - p[j]
            r = np.linalg.norm(d)
            direct -= (3 * d.dot(m[i]) * d.dot(m[j]) - r * r * m[i].dot(m[j])) / r**5 / n**3
    assert mc.total_energy(ring) == pytest.approx(direct, rel=1e-13)


def test_ring_energy_approaches_closed_form():
    for n in (32, 64):
        e = mc.total_energy(mc.build_circular_ring(n))
        closed = -2 * ZETA3 * n + (ZETA3 + 1 / 6) * math.pi**2 / n
        assert abs(e - closed) < 40 / n**3
    assert mc.ring_energy_closed_form(20) == pytest.approx(-2 * ZETA3 * 20 + (ZETA3 + 1 / 6) * math.pi**2 / 20)


def test_lattice_sum_and_limits():
    assert mc.regularized_limit(3) == pytest.approx(2 * ZETA3, abs=1e-14)
    assert mc.regularized_limit(2) == 0.0
    assert mc.lattice_sum(3, 0.5) == pytest.approx(14 * ZETA3, rel=1e-12)


def test_continuum_regularized_field_on_chord_circle():
    n = 200
    curve = mc.make_curve(mc.CurveFamily.CIRCLE, n=n)
    ring = mc.build_circular_ring(n)
    b = np.array(mc.regularized_field_at(ring, 0))
    s = math.atan2(ring.positions[0, 1], ring.positions[0, 0]) / (2 * math.pi)
    bc = np.array(mc.continuum_field(curve, s, n, mc.FieldMode.REGULARIZED))
    assert np.linalg.norm(b - bc) <= 1e-3 * np.linalg.norm(b)


def test_ring_functionals():
    p = mc.RingPerturbation.mode(2, 0.1)
    assert mc.e_loc(p) == pytest.approx(4 * math.pi**2 + 72 * math.pi**2 * 0.01, rel=1e-13)
    q = mc.RingPerturbation.mode(2, 1.0)
    direct = mc.e_nonloc(q, mc.NonlocalMethod.DIRECT) - math.pi**2 / 3
    assert direct == pytest.approx(72 * math.pi**2 / 12, rel=1e-2)
    assert abs(mc.kernel_identity_residual(math.pi)) < 1e-6


def test_mode_frequencies_ratio():
    w = mc.mode_frequencies(mc.MagnetSpec(), 50, 3)
    assert w[0] == 0.0
    assert w[2] / w[1] == pytest.approx(math.sqrt(8), rel=1e-14)


def test_optimizer_returns_tangent_moments():
    ring = mc.build_circular_ring(12)
    r = mc.optimize_orientations(mc.tilt_moments(ring, 0.3, 1))
    assert r["gradient_norm"] < 1e-8
    assert mc.max_line_angle(r["config"].moments, ring.moments) < 0.02


def test_errors_map_to_exception_types():
    with pytest.raises(mc.InvalidParameter):
        mc.build_circular_ring(2)
    with pytest.raises(mc.MagchainError):
        mc.build_straight_chain(0)
    with pytest.raises(mc.InvalidParameter):
        mc.run_experiment(json.dumps({"experiment": "sweep", "bogus": 1}))


def test_run_experiment_csv():
    ok, text = mc.run_experiment(json.dumps({"experiment": "ring-energy", "n": [10, 20]}))
    assert ok
    rows = list(csv.DictReader(io.StringIO(text)))
    assert [r["n"] for r in rows] == ["10", "20"]
    assert all(r["pass"] == "true" for r in rows)
    ok2, text2 = mc.run_experiment(json.dumps({"experiment": "ring-energy", "n": [10, 20]}))
    assert text2 == text
