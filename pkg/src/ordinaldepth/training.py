"""Desk-scale training loop over fixed features and a linear head.

Each iteration samples batch_size random crops (with replacement, optionally
mirrored), pools their masked pixels into one flat batch, computes the
variant's loss and analytic gradient, and takes one SGD step.  Everything is
driven by a single generator seeded from the config, so identical inputs give
bitwise-identical heads and traces.
"""

from dataclasses import dataclass

import numpy as np

from .depthmap import DepthMap
from .discretization import decode_depth, depth_to_label
from .features import extract_features
from .heads import (MULTICLASS, ORDINAL, REGRESSION, head_logits, new_head)
from .losses import berhu_loss, mcc_loss, mse_log_loss
from .optim import lr_at, sgd_step
from .ordinal import decode_labels, ordinal_gradient, ordinal_loss, pairwise_probabilities

LOSS_KINDS = ("ordinal", "mcc", "mse_log", "berhu")
_DEFAULT_LOSS = {ORDINAL: "ordinal", MULTICLASS: "mcc", REGRESSION: "mse_log"}


class TrainingDiverged(RuntimeError):
    """Raised when the loss stops being finite."""


@dataclass(frozen=True)
class TrainSample:
    """One training image with precomputed features for both flip states."""

    features: np.ndarray       # (H, W, C)
    features_flipped: np.ndarray  # features of the mirrored image
    depth: np.ndarray          # (H, W) meters
    valid: np.ndarray          # (H, W) bool


def build_sample(image, dmap):
    img = np.asarray(image)
    if img.shape != dmap.depth.shape:
        raise ValueError(f"image shape {img.shape} does not match depth "
                         f"{dmap.depth.shape}")
    return TrainSample(features=extract_features(img),
                       features_flipped=extract_features(np.fliplr(img)),
                       depth=dmap.depth, valid=dmap.valid)


def _batch_pixels(samples, rng, batch_size, crop, flip):
    """Gather masked pixels of batch_size random (possibly mirrored) crops."""
    xs, ds = [], []
    for _ in range(batch_size):
        for _attempt in range(100):
            s = samples[rng.integers(len(samples))]
            mirrored = flip and rng.integers(2) == 1
            h, w = s.depth.shape
            ch, cw = (h, w) if crop is None else (min(crop[1], h), min(crop[0], w))
            y0 = rng.integers(h - ch + 1)
            x0 = rng.integers(w - cw + 1)
            feats = s.features_flipped if mirrored else s.features
            depth = np.fliplr(s.depth) if mirrored else s.depth
            valid = np.fliplr(s.valid) if mirrored else s.valid
            m = valid[y0:y0 + ch, x0:x0 + cw]
            if m.any():
                xs.append(feats[y0:y0 + ch, x0:x0 + cw][m])
                ds.append(depth[y0:y0 + ch, x0:x0 + cw][m])
                break
        else:
            raise ValueError("could not draw a crop containing valid pixels")
    return np.concatenate(xs), np.concatenate(ds)


def _loss_and_gradient(head, loss_kind, scheme, x, d):
    """Loss and d(loss)/d(weights) on one flat pixel batch."""
    mask = np.ones(d.shape, dtype=bool)
    y = head_logits(head, x)
    if loss_kind == "ordinal":
        labels = depth_to_label(scheme, d)
        p = pairwise_probabilities(y)
        return ordinal_loss(p, labels, mask), ordinal_gradient(x, p, labels, mask)
    if loss_kind == "mcc":
        labels = depth_to_label(scheme, d)
        loss, gy = mcc_loss(y, labels, mask)
        return loss, gy.T @ x
    # regression heads predict z = log(d + xi); chain through exp(z)
    z = y[..., 0]
    with np.errstate(over="ignore"):
        ez = np.exp(z)
    if not np.all(np.isfinite(ez)) or ez.min() <= 0:
        raise TrainingDiverged("regression output left the representable depth range")
    if loss_kind == "mse_log":
        loss, gp = mse_log_loss(ez, d + scheme.xi, mask)
    elif loss_kind == "berhu":
        loss, gp = berhu_loss(ez - scheme.xi, d, mask)
    else:
        raise ValueError(f"loss_kind must be one of {LOSS_KINDS}, got {loss_kind!r}")
    gz = gp * ez
    return loss, gz[None, :] @ x


def train(samples, scheme, head_kind, config, loss_kind=None, crop=None,
          flip=True, quantize_targets=False, trace_every=10):
    """Train a linear head; returns (head, trace) with trace rows (iter, loss).

    quantize_targets snaps ground-truth depths onto the scheme's bin
    midpoints before the loss sees them, isolating the effect of
    discretization on a regression baseline.
    """
    if not samples:
        raise ValueError("need at least one training sample")
    if loss_kind is None:
        loss_kind = _DEFAULT_LOSS[head_kind]
    if loss_kind not in LOSS_KINDS:
        raise ValueError(f"loss_kind must be one of {LOSS_KINDS}, got {loss_kind!r}")
    rng = np.random.default_rng(config.seed)
    n_features = samples[0].features.shape[-1]
    head = new_head(head_kind, scheme.k_bins, n_features)
    velocity = np.zeros_like(head.weights)
    trace = []
    for it in range(config.total_iters):
        x, d = _batch_pixels(samples, rng, config.batch_size, crop, flip)
        if quantize_targets:
            d = decode_depth(scheme, depth_to_label(scheme, d))
        loss, grad = _loss_and_gradient(head, loss_kind, scheme, x, d)
        if not np.isfinite(loss):
            raise TrainingDiverged(f"loss became {loss} at iteration {it} "
                                   f"({head_kind}/{loss_kind}, lr={lr_at(config, it):.3g})")
        if it % trace_every == 0:
            trace.append((it, loss))
        head, velocity = sgd_step(head, grad, config, it, velocity)
    return head, np.asarray(trace, dtype=np.float64).reshape(-1, 2)


def predict_depth(head, features, scheme):
    """Per-pixel depth from a trained head; every output pixel is valid."""
    y = head_logits(head, features)
    if head.head_kind == ORDINAL:
        labels = decode_labels(pairwise_probabilities(y))
        depth = decode_depth(scheme, labels)
    elif head.head_kind == MULTICLASS:
        labels = np.argmax(y, axis=-1).astype(np.int64)
        depth = decode_depth(scheme, labels)
    else:
        # regression heads model z = log(d + xi)
        depth = np.maximum(np.exp(y[..., 0]) - scheme.xi, 0.0)
    depth = np.asarray(depth, dtype=np.float64)
    return DepthMap(depth=depth, valid=np.ones(depth.shape, dtype=bool))
