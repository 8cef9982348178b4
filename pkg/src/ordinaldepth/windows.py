"""Overlapping-window prediction with per-pixel averaging.

Test images are tiled by windows of the training crop size; each window is
predicted independently (features are extracted per window) and overlapping
predictions are averaged per pixel, which smooths seams at window borders.
"""

import numpy as np

from .depthmap import DepthMap
from .features import extract_features
from .training import predict_depth


def window_starts(length, window, stride):
    """Start offsets covering [0, length) with the last window border-snapped."""
    if window > length:
        raise ValueError(f"window {window} larger than extent {length}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    starts = list(range(0, length - window + 1, stride))
    if starts[-1] != length - window:
        starts.append(length - window)
    return starts


def predict_windows(head, image, scheme, window, stride):
    """Tile, predict per window, average: window=(w, h), stride=(sx, sy)."""
    img = np.asarray(image)
    if img.ndim != 2:
        raise ValueError(f"image must be 2-D grayscale, got shape {img.shape}")
    h, w = img.shape
    ww, wh = int(window[0]), int(window[1])
    sx, sy = int(stride[0]), int(stride[1])
    total = np.zeros((h, w), dtype=np.float64)
    count = np.zeros((h, w), dtype=np.float64)
    for y0 in window_starts(h, wh, sy):
        for x0 in window_starts(w, ww, sx):
            patch = img[y0:y0 + wh, x0:x0 + ww]
            pred = predict_depth(head, extract_features(patch), scheme)
            total[y0:y0 + wh, x0:x0 + ww] += pred.depth
            count[y0:y0 + wh, x0:x0 + ww] += 1.0
    return DepthMap(depth=total / count, valid=np.ones((h, w), dtype=bool))
