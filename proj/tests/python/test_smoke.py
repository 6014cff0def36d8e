import math

import pytest

import chdg


def test_simulate_conserves_mass_and_decays_energy():
    out = chdg.simulate(n=8, test_case=1, epsilon=0.1, k=1e-5, T=3e-5)
    assert out["step"] == [0, 1, 2, 3]
    mass0 = out["mass"][0]
    for m in out["mass"]:
        assert abs(m - mass0) <= 4e-10
    for a, b in zip(out["energy"], out["energy"][1:]):
        assert b <= a + 1e-9
    e0 = out["energy"][0]
    assert all(abs(r) <= 1e-6 * e0 for r in out["energy_law_residual"])


def test_implicit_scheme_runs():
    out = chdg.simulate(n=6, test_case=2, k=1e-5, T=2e-5, scheme="implicit")
    assert len(out["energy"]) == 3
    assert out["energy"][-1] <= out["energy"][0] + 1e-9


def test_invalid_scheme_rejected():
    with pytest.raises(ValueError):
        chdg.simulate(n=4, scheme="leapfrog")


def test_gronwall_trivial_case():
    bounds = chdg.gronwall_bound(0.25, [0.0] * 5, [0.0] * 5, p=3.0)
    assert bounds == pytest.approx([0.25] * 5)


def test_ellipse_signed_distance_signs():
    assert chdg.ellipse_signed_distance(0.0, 0.5, 0.6, 0.2) == pytest.approx(0.3)
    assert chdg.ellipse_signed_distance(0.0, 0.0, 0.6, 0.2) < 0.0


def test_zero_level_set_tracks_the_ellipse():
    segments = chdg.zero_level_set(n=32, test_case=1, epsilon=0.05)
    assert len(segments) > 20
    for x0, y0, x1, y1 in segments:
        for x, y in ((x0, y0), (x1, y1)):
            assert abs(chdg.ellipse_signed_distance(x, y, 0.6, 0.2)) < 0.1


def test_spectrum_nonnegative_for_unit_potential():
    lam = chdg.spectrum_estimate(n=5, fprime=lambda u: 1.0)
    assert lam >= 0.0


def test_convergence_study_shape():
    rows = chdg.convergence_study(test_case=1, n_list=[2, 4], reference_n=8, T=2e-5)
    assert [r["n"] for r in rows] == [2, 4]
    assert math.isnan(rows[0]["order_l2"])
    assert rows[1]["err_linf_l2"] < rows[0]["err_linf_l2"]
