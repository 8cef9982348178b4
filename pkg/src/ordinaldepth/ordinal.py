"""Pairwise-softmax ordinal regression core.

Depth estimation is cast as K ordered binary questions "is the depth past
threshold k?".  Each question owns a logit pair (y_{2k}, y_{2k+1}); the
softmax of the pair gives P^k, the probability of the answer "yes".  The loss
is the summed binary log-likelihood, averaged over masked-in pixels, and the
analytic gradients below are exact for a linear head y_i = theta_i . x.
"""

import numpy as np

from .validation import (as_float_array, check_labels, check_mask,
                         check_nonempty_mask)

# probabilities are clamped here before any log; the loss is unbounded as
# P -> {0, 1} and saturated pairs would otherwise produce non-finite values
PROB_EPS = 1e-12


def pairwise_probabilities(logits):
    """P^k = exp(y_{2k+1}) / (exp(y_{2k}) + exp(y_{2k+1})), overflow-safe.

    logits: (..., 2K).  Returns (..., K) with every entry in (0, 1).
    """
    y = as_float_array(logits, "logits")
    if y.ndim < 1 or y.shape[-1] % 2 != 0 or y.shape[-1] == 0:
        raise ValueError(f"logits last dimension must be 2K, got shape {y.shape}")
    if not np.all(np.isfinite(y)):
        raise ValueError("logits must be finite")
    y0 = y[..., 0::2]
    y1 = y[..., 1::2]
    m = np.maximum(y0, y1)
    e0 = np.exp(y0 - m)
    e1 = np.exp(y1 - m)
    return e1 / (e0 + e1)


def _check_volume(probs, labels, mask):
    p = as_float_array(probs, "probs")
    if p.ndim < 1:
        raise ValueError("probs must have a trailing K dimension")
    if not np.all(np.isfinite(p)) or p.size and (p.min() < 0 or p.max() > 1):
        raise ValueError("probs must lie in [0, 1]")
    k = p.shape[-1]
    grid = p.shape[:-1]
    labels = check_labels(labels, k, "labels")
    if labels.shape != grid:
        raise ValueError(f"labels shape {labels.shape} does not match probs grid {grid}")
    mask = check_mask(mask, grid)
    check_nonempty_mask(mask)
    return p, labels, mask, k


def ordinal_loss(probs, labels, mask):
    """Mean negative ordinal log-likelihood over masked-in pixels.

    Per pixel with true label l: sum_{k<l} log P^k + sum_{k>=l} log(1 - P^k),
    negated and averaged over the N masked pixels.
    """
    p, labels, mask, k = _check_volume(probs, labels, mask)
    p = np.clip(p, PROB_EPS, 1.0 - PROB_EPS)
    below = np.arange(k) < labels[..., None]
    psi = np.where(below, np.log(p), np.log(1.0 - p)).sum(axis=-1)
    n = mask.sum()
    return float(-psi[mask].sum() / n)


def _pair_factor(p, labels, k):
    # d(psi)/d(y_{2k}) = P^k - 1 for k < l else P^k
    below = np.arange(k) < labels[..., None]
    return p - below


def ordinal_gradient(features, probs, labels, mask):
    """Gradient of ordinal_loss with respect to the head weights Theta.

    features: (..., C) pixel vectors x that produced the logits via
    y_i = theta_i . x.  Returns (2K, C); odd rows are the exact negation of
    even rows.
    """
    p, labels, mask, k = _check_volume(probs, labels, mask)
    x = as_float_array(features, "features")
    if x.shape[:-1] != p.shape[:-1]:
        raise ValueError(f"features grid {x.shape[:-1]} does not match probs grid {p.shape[:-1]}")
    n = mask.sum()
    factor = _pair_factor(p[mask], labels[mask], k)  # (N, K)
    g_even = -(factor.T @ x[mask].reshape(-1, x.shape[-1])) / n
    grad = np.empty((2 * k, x.shape[-1]), dtype=np.float64)
    grad[0::2] = g_even
    grad[1::2] = -g_even
    return grad


def ordinal_logit_gradient(probs, labels, mask):
    """Gradient of ordinal_loss with respect to the raw logits y.

    Returns (..., 2K) with zeros at masked-out pixels; lets alternative heads
    chain through their own parameterization.
    """
    p, labels, mask, k = _check_volume(probs, labels, mask)
    n = mask.sum()
    factor = _pair_factor(p, labels, k)
    g_even = np.where(mask[..., None], -factor / n, 0.0)
    grad = np.zeros(p.shape[:-1] + (2 * k,), dtype=np.float64)
    grad[..., 0::2] = g_even
    grad[..., 1::2] = -g_even
    return grad


def decode_labels(probs):
    """Count-based decoding: l = #{k : P^k >= 0.5}, clamped to K-1.

    Counts over all k, not the longest leading run; clamping keeps the top
    bin decodable when every pair votes past the last threshold.
    """
    p = as_float_array(probs, "probs")
    if p.ndim < 1:
        raise ValueError("probs must have a trailing K dimension")
    if not np.all(np.isfinite(p)):
        raise ValueError("probs must be finite")
    k = p.shape[-1]
    counts = (p >= 0.5).sum(axis=-1)
    return np.minimum(counts, k - 1).astype(np.int64)
