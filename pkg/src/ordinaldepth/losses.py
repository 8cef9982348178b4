"""Baseline regression and classification losses with analytic gradients.

Each loss returns (scalar, gradient) so the training loop never needs
autodiff; every gradient here is checked against central finite differences
in the tests.
"""

import numpy as np

from .validation import (as_float_array, check_labels, check_mask,
                         check_nonempty_mask, check_same_shape)

BERHU_CUTOFF_FRACTION = 0.2  # cutoff c as a fraction of the max batch residual


def mse_log_loss(pred_depth, gt_depth, mask):
    """Mean squared log-depth error over masked pixels, with d(loss)/d(pred).

    Both inputs must be strictly positive under the mask; callers working
    with ranges that include zero shift both depths first.
    """
    pred = as_float_array(pred_depth, "pred_depth")
    gt = as_float_array(gt_depth, "gt_depth")
    check_same_shape(pred, gt, "pred_depth", "gt_depth")
    mask = check_mask(mask, pred.shape)
    check_nonempty_mask(mask)
    if pred[mask].min() <= 0 or gt[mask].min() <= 0:
        raise ValueError("depths must be strictly positive under the mask")
    n = mask.sum()
    e = np.zeros_like(pred)
    e[mask] = np.log(pred[mask]) - np.log(gt[mask])
    loss = float((e[mask] ** 2).sum() / n)
    grad = np.zeros_like(pred)
    grad[mask] = 2.0 * e[mask] / (n * pred[mask])
    return loss, grad


def berhu_loss(pred_depth, gt_depth, mask):
    """Reverse Huber on linear depth: linear up to c, quadratic past it.

    c = 0.2 * max masked |residual| in the batch.  The gradient includes the
    dependence of c on the largest residual, so it matches finite differences
    exactly (the c term is routed through the argmax pixel).
    """
    pred = as_float_array(pred_depth, "pred_depth")
    gt = as_float_array(gt_depth, "gt_depth")
    check_same_shape(pred, gt, "pred_depth", "gt_depth")
    mask = check_mask(mask, pred.shape)
    check_nonempty_mask(mask)
    n = mask.sum()
    r = pred - gt
    a = np.abs(r[mask])
    c = BERHU_CUTOFF_FRACTION * a.max()
    grad = np.zeros_like(pred)
    if c == 0.0:
        return 0.0, grad
    quad = a > c
    per_pixel = np.where(quad, (a ** 2 + c ** 2) / (2.0 * c), a)
    loss = float(per_pixel.sum() / n)
    s = np.sign(r[mask])
    g = np.where(quad, a / c, 1.0) * s / n
    # d(loss)/dc summed over quadratic pixels, chained into the argmax pixel
    dloss_dc = ((c ** 2 - a[quad] ** 2) / (2.0 * c ** 2)).sum() / n
    j = int(np.argmax(a))
    g[j] += BERHU_CUTOFF_FRACTION * s[j] * dloss_dc
    grad[mask] = g
    return loss, grad


def mcc_loss(logits, labels, mask):
    """Masked mean softmax cross-entropy over K classes, with d(loss)/d(logits).

    The bins are treated as unordered classes; this is the flat-classification
    baseline against which the ordinal loss is compared.
    """
    y = as_float_array(logits, "logits")
    if y.ndim < 1:
        raise ValueError("logits must have a trailing K dimension")
    if not np.all(np.isfinite(y)):
        raise ValueError("logits must be finite")
    k = y.shape[-1]
    grid = y.shape[:-1]
    labels = check_labels(labels, k, "labels")
    if labels.shape != grid:
        raise ValueError(f"labels shape {labels.shape} does not match logits grid {grid}")
    mask = check_mask(mask, grid)
    check_nonempty_mask(mask)
    n = mask.sum()
    shifted = y - y.max(axis=-1, keepdims=True)
    ey = np.exp(shifted)
    soft = ey / ey.sum(axis=-1, keepdims=True)
    p_true = np.take_along_axis(soft, labels[..., None], axis=-1)[..., 0]
    loss = float(-np.log(np.maximum(p_true[mask], 1e-12)).sum() / n)
    onehot = np.arange(k) == labels[..., None]
    grad = np.where(mask[..., None], (soft - onehot) / n, 0.0)
    return loss, grad
