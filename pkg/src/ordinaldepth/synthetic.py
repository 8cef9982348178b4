"""Synthetic desk-scale scenes: a receding ground plane plus floating rectangles.

Image intensity is a fixed nonlinear function of depth (quadratic in
log-depth), plus a per-surface albedo offset, a checker texture, and Gaussian
noise whose standard deviation grows proportionally with depth.  The
curvature in log-depth is deliberate: an affine regressor on intensity
carries a systematic bias that bin-based predictors do not.
"""

from dataclasses import dataclass

import numpy as np

from .depthmap import DepthMap


@dataclass(frozen=True)
class SceneSpec:
    seed: int = 0
    width: int = 64
    height: int = 64
    depth_min: float = 0.0
    depth_max: float = 80.0
    num_shapes: int = 6
    sigma0: float = 0.05  # noise std per meter of depth, in gray units
    sparsity: float = 0.0  # fraction of pixels marked invalid

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("scene must have positive area")
        if not self.depth_max > self.depth_min >= 0:
            raise ValueError(f"need depth_max > depth_min >= 0, got "
                             f"[{self.depth_min}, {self.depth_max}]")
        if not 0 <= self.sparsity < 1:
            raise ValueError(f"sparsity must be in [0, 1), got {self.sparsity}")
        if self.sigma0 < 0:
            raise ValueError(f"sigma0 must be >= 0, got {self.sigma0}")
        if self.num_shapes < 0:
            raise ValueError(f"num_shapes must be >= 0, got {self.num_shapes}")


def shade(depth):
    """Gray level for a surface at the given depth (before albedo and noise).

    Quadratic in log-depth, so intensity alone never maps back to depth
    through an affine fit.
    """
    u = np.log(depth + 1.0)
    return 248.0 - 10.0 * u - 10.0 * u ** 2


def generate_scene(spec):
    """Deterministic (image uint8, DepthMap) pair for the given spec."""
    rng = np.random.default_rng(spec.seed)
    h, w = spec.height, spec.width
    span = spec.depth_max - spec.depth_min
    near = spec.depth_min + 0.01 * span
    far = spec.depth_max

    # ground plane: depth grows exponentially from the bottom row to the top
    if h > 1:
        f = (h - 1 - np.arange(h, dtype=np.float64)) / (h - 1)
    else:
        f = np.zeros(1)
    ground = near * (far / near) ** f
    depth = np.tile(ground[:, None], (1, w))
    surface = np.full((h, w), -1, dtype=np.int64)

    # fronto-parallel rectangles at log-uniform depths, far ones painted first
    shape_depths = np.exp(rng.uniform(np.log(near), np.log(0.95 * far), spec.num_shapes))
    boxes = []
    for s in range(spec.num_shapes):
        bw = rng.integers(max(w // 8, 1), max(w // 3, 2))
        bh = rng.integers(max(h // 8, 1), max(h // 3, 2))
        x0 = rng.integers(0, max(w - bw, 1))
        y0 = rng.integers(0, max(h - bh, 1))
        boxes.append((x0, y0, bw, bh))
    for s in np.argsort(-shape_depths):
        x0, y0, bw, bh = boxes[s]
        depth[y0:y0 + bh, x0:x0 + bw] = shape_depths[s]
        surface[y0:y0 + bh, x0:x0 + bw] = s

    # shading from depth, per-surface albedo (ground stays neutral), checker
    albedo = rng.uniform(-6.0, 6.0, max(spec.num_shapes, 1))
    img = shade(depth)
    img += np.where(surface >= 0, albedo[np.minimum(surface, len(albedo) - 1)], 0.0)
    ii, jj = np.meshgrid(np.arange(h), np.arange(w), indexing="ij")
    img += 3.0 * (2.0 * ((ii // 4 + jj // 4) % 2) - 1.0)
    img += rng.normal(0.0, 1.0, (h, w)) * (spec.sigma0 * depth)
    img = np.clip(np.rint(img), 0, 255).astype(np.uint8)

    valid = rng.random((h, w)) >= spec.sparsity
    return img, DepthMap(depth=np.where(valid, depth, 0.0), valid=valid)
