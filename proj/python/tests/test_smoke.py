import math

import pytest

import felab


def test_gamma_disc():
    g = felab.gamma(2, 4.0)
    assert g.value == pytest.approx(4.0, abs=1e-8)


def test_interval_phi_closed_form():
    E = felab.IntervalSet([(0.0, 1.0)])
    assert felab.phi(E, 4.0).phi == pytest.approx((2.0 / 3.0) ** 0.25, rel=1e-10)


def test_threshold_error_is_a_domain_error():
    with pytest.raises(felab.DomainError):
        felab.kernel_value("L", 2, 3.0, 0.5)


def test_circle_coefficients():
    for n in (3, 4):
        exact = 2 / (math.pi * n * n) if n % 2 else 2 / (math.pi * (n * n - 1))
        assert felab.circle_coeff(4.0, n).value == pytest.approx(exact, rel=1e-8)


def test_spectrum_neutral_modes():
    s = felab.mode_margins(2, 4.0, 8)
    assert s.neutral_modes == [1, 2]
    assert s.worst_mode == 4


def test_sets_round_trip_through_json():
    S = felab.StarSet((0.0, 0.0), 1.0, [0.0, 0.0, 0.05], [0.0, 0.01, 0.0])
    back = felab.set_from_json(felab.set_to_json(S))
    assert back.measure() == pytest.approx(S.measure())


def test_translation_is_neutral():
    r = felab.expansion_report(felab.family_member("translate", 1, 0.05), 4.0)
    assert r.direct == pytest.approx(r.base, rel=1e-12)


def test_probe_respects_ball():
    r = felab.random_probe(4.0, "intervals:2", restarts=5, budget=40, seed=3)
    assert r.evaluations == 40
    assert r.best_phi <= r.phi_ball + 1e-9
