import numpy as np
import pytest

from ordinaldepth.discretization import (SID, UD, build_scheme, decode_depth,
                                         depth_to_label, scheme_from_record,
                                         scheme_to_record)


def brute_force_label(scheme, depth):
    # oracle: linear search over stored thresholds with boundary clamping
    s = depth + scheme.xi
    t = scheme.thresholds
    if s < t[0]:
        return 0
    for i in range(scheme.k_bins):
        if t[i] <= s < t[i + 1]:
            return i
    return scheme.k_bins - 1


def test_ud_thresholds_linear():
    s = build_scheme(UD, 0, 80, 5)
    assert np.array_equal(s.thresholds, [1.0, 17.0, 33.0, 49.0, 65.0, 81.0])
    assert s.xi == 1.0


def test_sid_endpoints_pinned():
    s = build_scheme(SID, 0, 80, 80)
    assert s.thresholds[0] == 1.0
    assert s.thresholds[-1] == 81.0


def test_sid_interior_matches_power_formula():
    s = build_scheme(SID, 0, 80, 80)
    assert np.isclose(s.thresholds[1], 81.0 ** (1.0 / 80.0), rtol=1e-14)
    i = np.arange(81)
    assert np.allclose(s.thresholds, 81.0 ** (i / 80.0), rtol=1e-13)


def test_sid_ratio_constant():
    s = build_scheme(SID, 0, 80, 80)
    ratios = s.thresholds[1:] / s.thresholds[:-1]
    assert ratios.max() - ratios.min() < 1e-12


def test_nonzero_alpha_shift():
    s = build_scheme(SID, 2.0, 50.0, 10)
    assert s.xi == -1.0
    assert s.thresholds[0] == 1.0
    assert s.thresholds[-1] == 49.0


def test_build_scheme_rejects_bad_inputs():
    with pytest.raises(ValueError):
        build_scheme(UD, 5.0, 5.0, 10)
    with pytest.raises(ValueError):
        build_scheme(UD, 5.0, 2.0, 10)
    with pytest.raises(ValueError):
        build_scheme(SID, 0.0, 80.0, 0)
    with pytest.raises(ValueError):
        build_scheme(SID, -1.0, 80.0, 10)
    with pytest.raises(ValueError):
        build_scheme(SID, 0.0, np.inf, 10)
    with pytest.raises(ValueError):
        build_scheme("LOG", 0.0, 80.0, 10)


def test_depth_to_label_examples():
    sid = build_scheme(SID, 0, 80, 80)
    assert depth_to_label(sid, 0.0) == 0
    ud = build_scheme(UD, 0, 80, 5)
    assert depth_to_label(ud, 40.0) == 2  # shifted 41 in [33, 49)
    assert depth_to_label(sid, 2.0) == brute_force_label(sid, 2.0)


def test_depth_to_label_clamps_out_of_range():
    ud = build_scheme(UD, 0, 80, 5)
    assert depth_to_label(ud, -3.0) == 0
    assert depth_to_label(ud, 80.0) == 4
    assert depth_to_label(ud, 500.0) == 4


def test_depth_to_label_rejects_non_finite():
    ud = build_scheme(UD, 0, 80, 5)
    with pytest.raises(ValueError):
        depth_to_label(ud, np.nan)
    with pytest.raises(ValueError):
        depth_to_label(ud, np.inf)


def test_closed_form_matches_linear_search():
    rng = np.random.default_rng(0)
    for strategy in (UD, SID):
        for k in (5, 80, 120):
            s = build_scheme(strategy, 0, 80, k)
            depths = rng.uniform(0.0, 80.0, 500)
            # exact bin edges are the adversarial inputs for the floor form
            edges = s.thresholds - s.xi
            near = np.concatenate([edges, np.nextafter(edges, -np.inf),
                                   np.nextafter(edges, np.inf)])
            for d in np.concatenate([depths, near]):
                got = depth_to_label(s, float(d))
                assert got == brute_force_label(s, float(d)), (strategy, k, d)


def test_depth_to_label_vectorized_matches_scalar():
    s = build_scheme(SID, 0, 80, 80)
    depths = np.random.default_rng(1).uniform(0, 80, (7, 9))
    labs = depth_to_label(s, depths)
    assert labs.shape == depths.shape
    for idx in np.ndindex(depths.shape):
        assert labs[idx] == depth_to_label(s, float(depths[idx]))


def test_decode_examples():
    ud = build_scheme(UD, 0, 80, 5)
    assert decode_depth(ud, 0) == 8.0
    assert decode_depth(ud, 5) == decode_depth(ud, 4) == 72.0
    sid = build_scheme(SID, 0, 80, 80)
    expected = (1.0 + 81.0 ** (1.0 / 80.0)) / 2.0 - 1.0
    assert np.isclose(decode_depth(sid, 0), expected, rtol=1e-12)


def test_decode_rejects_bad_labels():
    ud = build_scheme(UD, 0, 80, 5)
    with pytest.raises(ValueError):
        decode_depth(ud, -1)
    with pytest.raises(ValueError):
        decode_depth(ud, 6)
    with pytest.raises(ValueError):
        decode_depth(ud, np.array([0.5]))


def test_roundtrip_within_half_bin():
    rng = np.random.default_rng(2)
    for strategy in (UD, SID):
        for k in (5, 80, 120):
            s = build_scheme(strategy, 0, 80, k)
            d = rng.uniform(0.0, 80.0, 2000)
            lab = depth_to_label(s, d)
            back = decode_depth(s, lab)
            half = 0.5 * s.bin_widths()[lab]
            assert np.all(np.abs(back - d) <= half + 1e-9)


def test_label_monotone_in_depth():
    for strategy in (UD, SID):
        s = build_scheme(strategy, 0, 80, 17)
        d = np.sort(np.random.default_rng(3).uniform(-2, 85, 400))
        labs = depth_to_label(s, d)
        assert np.all(np.diff(labs) >= 0)


def test_bin_width_shapes():
    sid = build_scheme(SID, 0, 80, 40)
    ud = build_scheme(UD, 0, 80, 40)
    # SID widths never shrink with depth; UD widths are constant
    assert np.all(np.diff(sid.bin_widths()) > 0)
    assert np.allclose(ud.bin_widths(), ud.bin_widths()[0], rtol=1e-12)
    # SID is finer than UD near alpha, coarser near beta
    assert sid.bin_widths()[0] < ud.bin_widths()[0]
    assert sid.bin_widths()[-1] > ud.bin_widths()[-1]


def test_record_roundtrip():
    for strategy, alpha, beta, k in ((UD, 0.0, 80.0, 5), (SID, 1.7, 42.5, 33)):
        s = build_scheme(strategy, alpha, beta, k)
        r = scheme_from_record(scheme_to_record(s))
        assert r.strategy == s.strategy and r.k_bins == s.k_bins
        assert r.alpha == s.alpha and r.beta == s.beta
        assert np.array_equal(r.thresholds, s.thresholds)


def test_record_rejects_garbage():
    with pytest.raises(ValueError):
        scheme_from_record("SID,0,80")
    with pytest.raises(ValueError):
        scheme_from_record("SID,zero,80,5")
