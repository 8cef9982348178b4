import numpy as np
import pytest

from ordinaldepth.features import BOX_RADII, N_FEATURES, extract_features


def test_shape_and_channel_count():
    f = extract_features(np.zeros((12, 20)))
    assert f.shape == (12, 20, N_FEATURES)
    assert N_FEATURES == 16


def test_constant_image_has_zero_gradients():
    f = extract_features(np.full((16, 16), 37.0))
    assert np.all(f[..., 5:13] == 0.0)
    assert np.allclose(f[..., 0:5], 37.0 / 255.0, rtol=1e-14)


def test_bias_channel_is_one():
    f = extract_features(np.random.default_rng(0).integers(0, 256, (9, 9)))
    assert np.all(f[..., 15] == 1.0)


def test_box_mean_radius_one_hand_computed():
    img = np.array([[10.0, 20.0, 30.0],
                    [40.0, 50.0, 60.0],
                    [70.0, 80.0, 90.0]])
    f = extract_features(img)
    assert np.isclose(f[1, 1, 1], 50.0 / 255.0, rtol=1e-13)
    # border pixels replicate the edge: mean of the clamped 3x3 around (0, 0)
    want = np.mean([10, 10, 20, 10, 10, 20, 40, 40, 50]) / 255.0
    assert np.isclose(f[0, 0, 1], want, rtol=1e-13)


def test_difference_channels_hand_computed():
    img = np.zeros((5, 5))
    img[:, 3] = 255.0
    f = extract_features(img)
    # horizontal difference at radius 1, interior pixel (2, 2): (I[2,3]-I[2,1])/2
    assert np.isclose(f[2, 2, 5], (1.0 - 0.0) / 2.0, rtol=1e-13)
    # vertical difference is zero for a column pattern
    assert np.all(f[..., 9] == 0.0)


def test_coordinate_channels():
    f = extract_features(np.zeros((4, 8)))
    assert np.allclose(f[..., 13], (np.arange(4) / 3.0)[:, None])
    assert np.allclose(f[..., 14], (np.arange(8) / 7.0)[None, :])


def test_translation_consistency_away_from_borders():
    rng = np.random.default_rng(1)
    img = rng.integers(0, 256, (40, 40)).astype(np.float64)
    shifted = np.roll(img, 1, axis=1)
    fa = extract_features(img)
    fb = extract_features(shifted)
    r = max(BOX_RADII)
    # interior features (all but the column coordinate) shift along
    inner_a = fa[r + 1:-r - 1, r + 1:-r - 2, :14]
    inner_b = fb[r + 1:-r - 1, r + 2:-r - 1, :14]
    # drop the column coordinate channel, which encodes absolute position
    assert np.allclose(inner_a[..., :13], inner_b[..., :13], atol=1e-12)


def test_rejects_bad_inputs():
    with pytest.raises(ValueError):
        extract_features(np.zeros((3, 3, 3)))
    with pytest.raises(ValueError):
        extract_features(np.array([[np.nan, 1.0]]))
    with pytest.raises(ValueError):
        extract_features(np.zeros((0, 4)))
