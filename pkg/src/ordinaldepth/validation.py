"""Input validation helpers shared across the package.

All helpers raise ``ValueError`` with the offending argument named, so the
failure is attributable from the message alone.
"""

import numpy as np


def as_float_array(x, name, ndim=None):
    """Convert to a float64 ndarray and optionally enforce dimensionality."""
    arr = np.asarray(x, dtype=np.float64)
    if ndim is not None and arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    return arr


def check_finite(arr, name):
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_positive_scalar(x, name):
    if not np.isfinite(x) or x <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {x!r}")
    return float(x)


def check_mask(mask, shape, name="mask"):
    """Validate a boolean validity mask against an expected spatial shape."""
    m = np.asarray(mask)
    if m.dtype != np.bool_:
        raise ValueError(f"{name} must be boolean, got dtype {m.dtype}")
    if m.shape != tuple(shape):
        raise ValueError(f"{name} shape {m.shape} does not match data shape {tuple(shape)}")
    return m


def check_nonempty_mask(mask, name="mask"):
    if not np.any(mask):
        raise ValueError(f"{name} selects no pixels")
    return mask


def check_labels(labels, k_bins, name="labels"):
    """Validate integer labels lie in {0..K-1}."""
    lab = np.asarray(labels)
    if not np.issubdtype(lab.dtype, np.integer):
        raise ValueError(f"{name} must be an integer array, got dtype {lab.dtype}")
    if lab.size and (lab.min() < 0 or lab.max() > k_bins - 1):
        raise ValueError(f"{name} must lie in [0, {k_bins - 1}], got range "
                         f"[{lab.min()}, {lab.max()}]")
    return lab


def check_same_shape(a, b, name_a, name_b):
    if np.shape(a) != np.shape(b):
        raise ValueError(f"{name_a} shape {np.shape(a)} does not match "
                         f"{name_b} shape {np.shape(b)}")
