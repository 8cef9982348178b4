"""Depth map container: per-pixel metric depth plus a validity mask.

Sparse ground truth (e.g. LiDAR-projected maps) leaves many pixels without a
depth reading; those are marked invalid and carry depth 0 by convention.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DepthMap:
    """Dense or sparse depth in meters over an (H, W) grid.

    Invalid pixels carry depth 0.0; valid pixels carry finite depth >= 0.
    """

    depth: np.ndarray  # float64 (H, W), meters
    valid: np.ndarray  # bool (H, W)

    def __post_init__(self):
        depth = np.asarray(self.depth, dtype=np.float64)
        valid = np.asarray(self.valid, dtype=bool)
        if depth.ndim != 2:
            raise ValueError(f"depth must be 2-D, got shape {depth.shape}")
        if valid.shape != depth.shape:
            raise ValueError(f"valid shape {valid.shape} does not match depth shape {depth.shape}")
        if not np.all(np.isfinite(depth[valid])):
            raise ValueError("valid pixels must carry finite depth")
        if depth[valid].size and depth[valid].min() < 0:
            raise ValueError("valid pixels must carry depth >= 0")
        depth = np.where(valid, depth, 0.0)
        object.__setattr__(self, "depth", depth)
        object.__setattr__(self, "valid", valid)

    @property
    def height(self):
        return self.depth.shape[0]

    @property
    def width(self):
        return self.depth.shape[1]

    @property
    def n_valid(self):
        return int(self.valid.sum())

    @classmethod
    def dense(cls, depth):
        """Wrap a fully valid depth grid."""
        depth = np.asarray(depth, dtype=np.float64)
        return cls(depth=depth, valid=np.ones(depth.shape, dtype=bool))
