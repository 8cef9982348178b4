import dataclasses

import numpy as np
import pytest

from ordinaldepth.discretization import build_scheme, decode_depth
from ordinaldepth.features import N_FEATURES, extract_features
from ordinaldepth.heads import MULTICLASS, ORDINAL, REGRESSION, LinearHead, new_head
from ordinaldepth.optim import OptimizerConfig
from ordinaldepth.synthetic import SceneSpec, generate_scene
from ordinaldepth.training import (
    TrainingDiverged,
    build_sample,
    predict_depth,
    train,
)

SCHEME = build_scheme("SID", 0.0, 80.0, 8)


def _samples(n=2, seed=0, size=24):
    out = []
    for i in range(n):
        img, dmap = generate_scene(SceneSpec(seed=seed + i, width=size, height=size))
        out.append(build_sample(img, dmap))
    return out


def test_build_sample_shapes():
    s = _samples(1)[0]
    assert s.features.shape == (24, 24, N_FEATURES)
    assert s.features_flipped.shape == (24, 24, N_FEATURES)
    assert s.depth.shape == (24, 24)
    assert np.allclose(s.features_flipped[:, :, 0], np.fliplr(s.features[:, :, 0]))


def test_zero_iterations_returns_zero_head():
    cfg = OptimizerConfig(total_iters=0)
    head, trace = train(_samples(), SCHEME, ORDINAL, cfg)
    assert np.all(head.weights == 0.0)
    assert trace.shape == (0, 2)


def test_same_seed_is_bitwise_deterministic():
    cfg = OptimizerConfig(base_lr=0.5, total_iters=40, seed=9)
    samples = _samples()
    a, trace_a = train(samples, SCHEME, ORDINAL, cfg, crop=(16, 16))
    b, trace_b = train(samples, SCHEME, ORDINAL, cfg, crop=(16, 16))
    assert np.array_equal(a.weights, b.weights)
    assert np.array_equal(trace_a, trace_b)
    c, _ = train(samples, SCHEME, ORDINAL, dataclasses.replace(cfg, seed=10),
                 crop=(16, 16))
    assert not np.array_equal(a.weights, c.weights)


def test_zero_learning_rate_keeps_weights_at_init():
    cfg = OptimizerConfig(base_lr=0.0, total_iters=25)
    # one sample, no flip, no crop: every iteration sees the same full batch,
    # so with lr=0 the loss trace must be exactly flat
    head, trace = train(_samples(1), SCHEME, ORDINAL, cfg, flip=False,
                        trace_every=1)
    assert np.all(head.weights == 0.0)
    assert np.all(trace[:, 1] == trace[0, 1])


def test_trace_rows_and_iteration_column():
    cfg = OptimizerConfig(base_lr=0.1, total_iters=30, seed=1)
    _, trace = train(_samples(), SCHEME, ORDINAL, cfg, trace_every=10)
    assert trace.shape == (3, 2)
    assert np.array_equal(trace[:, 0], [0.0, 10.0, 20.0])
    assert np.all(np.isfinite(trace[:, 1]))


def test_single_pixel_full_batch_loss_non_increasing():
    # one valid pixel: the batch is that pixel every iteration, so plain SGD
    # descends a convex loss and the trace cannot increase
    img = np.full((4, 4), 120, dtype=np.uint8)
    depth = np.full((4, 4), 5.0)
    valid = np.zeros((4, 4), dtype=bool)
    valid[2, 2] = True
    from ordinaldepth.depthmap import DepthMap

    sample = build_sample(img, DepthMap(depth=np.where(valid, depth, 0.0), valid=valid))
    cfg = OptimizerConfig(base_lr=0.05, momentum=0.0, weight_decay=0.0,
                          total_iters=60, batch_size=1, seed=0)
    _, trace = train([sample], SCHEME, ORDINAL, cfg, flip=False, trace_every=1)
    losses = trace[:, 1]
    assert np.all(np.diff(losses) <= 1e-12)
    assert losses[-1] < losses[0]


def test_ordinal_trains_toward_labels():
    samples = _samples()
    cfg = OptimizerConfig(base_lr=1.0, total_iters=300, seed=0)
    head, trace = train(samples, SCHEME, ORDINAL, cfg, crop=(16, 16))
    assert trace[-1, 1] < trace[0, 1]
    pred = predict_depth(head, samples[0].features, SCHEME)
    assert pred.depth.shape == (24, 24)


def test_predict_zero_ordinal_head_hits_top_bin():
    head = new_head(ORDINAL, SCHEME.k_bins, N_FEATURES)
    feats = extract_features(np.zeros((5, 6), dtype=np.uint8))
    pred = predict_depth(head, feats, SCHEME)
    # all pairwise probabilities are 0.5, counted as "past the threshold",
    # so every pixel decodes to the clamped top label K-1
    want = decode_depth(SCHEME, SCHEME.k_bins - 1)
    assert np.allclose(pred.depth, want)
    assert pred.valid.all()


def test_predict_multiclass_argmax_label_midpoint():
    k = SCHEME.k_bins
    w = np.zeros((k, N_FEATURES))
    w[3, -1] = 10.0  # bias drives every pixel to label 3
    head = LinearHead(weights=w, head_kind=MULTICLASS, k_bins=k)
    feats = extract_features(np.zeros((4, 4), dtype=np.uint8))
    pred = predict_depth(head, feats, SCHEME)
    assert np.allclose(pred.depth, decode_depth(SCHEME, 3))


def test_predict_regression_exp_shift_roundtrip():
    w = np.zeros((1, N_FEATURES))
    w[0, -1] = np.log(12.5 + SCHEME.xi)  # constant z via the bias channel
    head = LinearHead(weights=w, head_kind=REGRESSION, k_bins=SCHEME.k_bins)
    feats = extract_features(np.zeros((3, 3), dtype=np.uint8))
    pred = predict_depth(head, feats, SCHEME)
    assert np.allclose(pred.depth, 12.5, rtol=1e-12)


def test_quantized_targets_change_regression_fit():
    samples = _samples()
    coarse = build_scheme("SID", 0.0, 80.0, 2)
    cfg = OptimizerConfig(base_lr=0.1, total_iters=80, seed=3)
    plain, _ = train(samples, coarse, REGRESSION, cfg, crop=(16, 16))
    snapped, _ = train(samples, coarse, REGRESSION, cfg, crop=(16, 16),
                       quantize_targets=True)
    assert not np.allclose(plain.weights, snapped.weights)


def test_diverged_training_raises():
    cfg = OptimizerConfig(base_lr=1e6, momentum=0.0, total_iters=50, seed=0)
    with pytest.raises(TrainingDiverged):
        train(_samples(), SCHEME, REGRESSION, cfg, crop=(16, 16))


def test_bad_loss_kind_rejected():
    cfg = OptimizerConfig(total_iters=1)
    with pytest.raises(ValueError):
        train(_samples(), SCHEME, ORDINAL, cfg, loss_kind="huber")


def test_no_samples_rejected():
    with pytest.raises(ValueError):
        train([], SCHEME, ORDINAL, OptimizerConfig(total_iters=1))


def test_build_sample_shape_mismatch():
    img, _ = generate_scene(SceneSpec(seed=0, width=16, height=16))
    _, dmap = generate_scene(SceneSpec(seed=0, width=8, height=8))
    with pytest.raises(ValueError):
        build_sample(img, dmap)
