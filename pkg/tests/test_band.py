import numpy as np
import pytest

from nitsche_bands import (PRESETS, KPath, KPoint, compute_bands, convergence_study, detect_gaps,
                           homogeneous_dispersion, sample_path)
from nitsche_bands.band import BandSample, BandStructure
from nitsche_bands.exceptions import ConfigurationError


def _fake(freqs):
    freqs = np.asarray(freqs, dtype=float)
    samples = tuple(BandSample(float(i), KPoint(0.0, 0.0), f ** 2, f) for i, f in enumerate(freqs))
    return BandStructure(samples, freqs.shape[1])


def test_constant_bands_gap():
    rep = detect_gaps(_fake([[1, 2], [1, 2], [1, 2]]))
    assert len(rep) == 1
    g = rep.gaps[0]
    assert (g.band_low, g.bottom, g.top, g.width) == (1, 1.0, 2.0, 1.0)


def test_crossing_bands_no_gap():
    assert len(detect_gaps(_fake([[1, 2], [1.5, 1.6], [2, 2.1]]))) == 0


def test_gap_needs_two_bands():
    with pytest.raises(ValueError):
        detect_gaps(_fake([[1], [2]]))


@pytest.fixture(scope="module")
def epoxy_bands(epoxy_only):
    return compute_bands(epoxy_only.discretize(16), KPath.square_irreducible(1.0, 4), 10)


def test_zero_modes_at_origin(epoxy_bands):
    first = epoxy_bands.samples[0]
    assert first.kpoint.label == "O"
    np.testing.assert_allclose(first.freq[:2], 0.0, atol=1e-6)
    assert first.freq[2] > 0.1


def test_homogeneous_bands_follow_dispersion(epoxy_only):
    disc = epoxy_only.discretize(32)
    path = KPath.square_irreducible(1.0, 2)
    bands = compute_bands(disc, path, 6)
    for s in bands.samples:
        ref = homogeneous_dispersion(PRESETS["epoxy"], s.kpoint, m=6)
        scale = ref.max()
        assert np.all(np.abs(s.omega2 - ref) <= 0.03 * scale)
        assert np.all(s.omega2 >= ref - 1e-6 * scale)  # conforming space: from above


def test_samples_ordered_and_labelled(epoxy_bands):
    arcs = epoxy_bands.arc
    assert np.all(np.diff(arcs) > 0)
    assert [lab for _, lab in epoxy_bands.ticks] == ["O", "X", "M", "O"]
    assert np.all(epoxy_bands.freq >= 0)
    assert np.all(np.diff(epoxy_bands.omega2, axis=1) >= 0)


def test_homogeneous_has_no_gap(epoxy_bands):
    assert len(detect_gaps(epoxy_bands)) == 0


def test_continuity_along_path(epoxy_bands, au_circle):
    # Lipschitz bound calibrated on the homogeneous medium
    def jumps(b):
        dk = np.diff(b.arc)
        return np.abs(np.diff(b.freq, axis=0)) / dk[:, None]
    lip = jumps(epoxy_bands).max()
    b = compute_bands(au_circle.discretize(8), KPath.square_irreducible(1.0, 4), 10)
    assert jumps(b).max() <= 1.5 * lip


def test_time_reversal(au16):
    k = np.array([1.3, -0.7])
    np.testing.assert_allclose(au16.solve(k, 6).eigenvalues, au16.solve(-k, 6).eigenvalues, rtol=1e-9)


def test_threads_preserve_order(au_circle):
    disc = au_circle.discretize(8)
    path = KPath.square_irreducible(1.0, 3)
    seq = compute_bands(disc, path, 4, threads=1)
    par = compute_bands(disc, path, 4, threads=3)
    np.testing.assert_array_equal(seq.arc, par.arc)
    np.testing.assert_allclose(seq.omega2, par.omega2, rtol=1e-12)


def test_gaps_only_shrink_when_resampled(au_circle):
    disc = au_circle.discretize(8)
    coarse = detect_gaps(compute_bands(disc, KPath.square_irreducible(1.0, 3), 6))
    fine = detect_gaps(compute_bands(disc, KPath.square_irreducible(1.0, 6), 6))
    for g in fine:
        c = coarse.between(g.band_low)
        assert c is not None and g.bottom >= c.bottom - 1e-12 and g.top <= c.top + 1e-12


def test_error_carries_kpoint(au_circle):
    disc = au_circle.discretize(8)
    with pytest.raises(Exception) as info:
        compute_bands(disc, KPath((KPoint(0.3, 0.1), KPoint(0.5, 0.1)), 1), 3, tol=1e-30)
    assert "0.29999999999999999" in str(info.value)
    assert getattr(info.value, "k", None) == (0.3, 0.1)


def test_convergence_homogeneous(epoxy_only):
    k = [np.pi, np.pi]
    ref = homogeneous_dispersion(PRESETS["epoxy"], k, m=6)
    rep = convergence_study(epoxy_only, k, [8, 16, 32], 6, reference=ref)
    assert rep.rel_errors.shape == (2, 6) and rep.rates.shape == (1, 6)
    moving = ~rep.exact
    np.testing.assert_allclose(rep.ref_rates[:, moving], 2.0, atol=0.3)
    np.testing.assert_allclose(rep.rates[:, moving], 2.0, atol=0.3)
    # the plane waves with G = 0 are represented exactly by P1
    assert rep.exact.tolist() == [True, False, False, False, True, False]
    fitted = rep.fitted_rates
    assert np.all(np.isnan(fitted[rep.exact]))
    # two levels of errors: the slope is the single successive rate
    np.testing.assert_allclose(fitted[moving], np.log2(rep.rel_errors[0] / rep.rel_errors[1])[moving])


def test_convergence_needs_three_levels(epoxy_only):
    with pytest.raises(ConfigurationError):
        convergence_study(epoxy_only, [1, 1], [8, 16])
    with pytest.raises(ConfigurationError):
        convergence_study(epoxy_only, [1, 1], [8, 12, 16])


def test_dispersion_oracle_gamma():
    vals = homogeneous_dispersion(PRESETS["epoxy"], [0.0, 0.0], m=4)
    assert vals[0] == 0.0 and vals[1] == 0.0
    c_t2 = 1.57e9 / 1180
    assert vals[2] == pytest.approx(c_t2 * 4 * np.pi ** 2)


def test_sample_count_matches_path():
    path = KPath.square_irreducible(1.0, 30)
    assert len(sample_path(path)) == 91
