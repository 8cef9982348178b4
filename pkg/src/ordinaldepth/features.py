"""Fixed per-pixel feature extraction.

The feature map is deliberately hand-designed and frozen: only the linear
head on top of it is ever trained, which keeps gradients exact and training
desk-scale.  Channel order (C_f = 16):

  0      intensity scaled to [0, 1] (gray / 255)
  1..4   box-filter means of channel 0 at radii 1, 2, 4, 8 (clamp-to-edge)
  5..8   horizontal central differences of channel 0 at the same radii
  9..12  vertical central differences at the same radii
  13     normalized row coordinate (0 at top, 1 at bottom)
  14     normalized column coordinate (0 at left, 1 at right)
  15     constant 1 (bias channel)

Differences at radius r use index clamping at the borders and are divided by
the nominal span 2r, so a constant image yields exactly zero.
"""

import numpy as np
from scipy.ndimage import uniform_filter

BOX_RADII = (1, 2, 4, 8)
N_FEATURES = 16


def _central_diff(img, radius, axis):
    n = img.shape[axis]
    idx = np.arange(n)
    fwd = np.take(img, np.minimum(idx + radius, n - 1), axis=axis)
    bwd = np.take(img, np.maximum(idx - radius, 0), axis=axis)
    return (fwd - bwd) / (2.0 * radius)


def extract_features(image):
    """Image of gray values on the 0..255 scale -> (H, W, 16) float features."""
    img = np.asarray(image, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"image must be 2-D grayscale, got shape {img.shape}")
    if img.size == 0:
        raise ValueError("image must be non-empty")
    if not np.all(np.isfinite(img)):
        raise ValueError("image must be finite")
    h, w = img.shape
    norm = img / 255.0
    feats = np.empty((h, w, N_FEATURES), dtype=np.float64)
    feats[..., 0] = norm
    for i, r in enumerate(BOX_RADII):
        feats[..., 1 + i] = uniform_filter(norm, size=2 * r + 1, mode="nearest")
    for i, r in enumerate(BOX_RADII):
        feats[..., 5 + i] = _central_diff(norm, r, axis=1)
        feats[..., 9 + i] = _central_diff(norm, r, axis=0)
    rows = np.arange(h, dtype=np.float64) / max(h - 1, 1)
    cols = np.arange(w, dtype=np.float64) / max(w - 1, 1)
    feats[..., 13] = rows[:, None]
    feats[..., 14] = cols[None, :]
    feats[..., 15] = 1.0
    return feats
