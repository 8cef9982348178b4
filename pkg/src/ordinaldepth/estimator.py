"""Estimator-style front end over the functional core.

OrdinalDepthEstimator packages discretization, the linear head, and the
training loop behind fit/predict/score; DepthDiscretizer exposes the depth
<-> label mapping as a transformer.  Hyperparameters are stored verbatim in
__init__ (so get_params/set_params/clone behave), and all validation happens
in fit.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .depthmap import DepthMap
from .discretization import build_scheme, decode_depth, depth_to_label
from .metrics import evaluate
from .optim import OptimizerConfig
from .training import build_sample, predict_depth, train
from .features import extract_features
from .windows import predict_windows


class DepthDiscretizer(BaseEstimator, TransformerMixin):
    """Maps metric depths to ordinal bin labels and back.

    Stateless apart from the threshold table, which fit builds from the
    configured range; X is ignored during fit and may be None.
    """

    def __init__(self, strategy="SID", depth_min=0.0, depth_max=80.0, k_bins=80):
        self.strategy = strategy
        self.depth_min = depth_min
        self.depth_max = depth_max
        self.k_bins = k_bins

    def fit(self, X=None, y=None):
        self.scheme_ = build_scheme(self.strategy, self.depth_min, self.depth_max,
                                    self.k_bins)
        return self

    def transform(self, X):
        check_is_fitted(self, "scheme_")
        return depth_to_label(self.scheme_, np.asarray(X, dtype=np.float64))

    def inverse_transform(self, X):
        check_is_fitted(self, "scheme_")
        return decode_depth(self.scheme_, np.asarray(X))


def _as_image_list(X, name):
    if isinstance(X, np.ndarray):
        if X.ndim == 2:
            return [X]
        if X.ndim == 3:
            return list(X)
        raise ValueError(f"{name} must be (H, W) or (n, H, W), got shape {X.shape}")
    return [np.asarray(item) for item in X]


class OrdinalDepthEstimator(BaseEstimator):
    """Depth regressor: fixed features, a linear head, ordinal decoding.

    X holds grayscale images on the 0..255 scale, y the matching depth maps
    in meters with 0 marking pixels without ground truth.
    """

    def __init__(self, strategy="SID", depth_min=0.0, depth_max=80.0, k_bins=80,
                 head_kind="ordinal", loss_kind=None, quantize_targets=False,
                 base_lr=0.1, power=0.9, momentum=0.9, weight_decay=5e-4,
                 total_iters=400, batch_size=3, crop=32, flip=True,
                 cap_min=0.5, seed=0):
        self.strategy = strategy
        self.depth_min = depth_min
        self.depth_max = depth_max
        self.k_bins = k_bins
        self.head_kind = head_kind
        self.loss_kind = loss_kind
        self.quantize_targets = quantize_targets
        self.base_lr = base_lr
        self.power = power
        self.momentum = momentum
        self.weight_decay = weight_decay
        self.total_iters = total_iters
        self.batch_size = batch_size
        self.crop = crop
        self.flip = flip
        self.cap_min = cap_min
        self.seed = seed

    def fit(self, X, y):
        images = _as_image_list(X, "X")
        depths = _as_image_list(y, "y")
        if len(images) != len(depths):
            raise ValueError(f"X has {len(images)} images but y has {len(depths)} maps")
        samples = []
        for img, d in zip(images, depths):
            d = np.asarray(d, dtype=np.float64)
            samples.append(build_sample(img, DepthMap(depth=d, valid=d > 0)))
        self.scheme_ = build_scheme(self.strategy, self.depth_min, self.depth_max,
                                    self.k_bins)
        config = OptimizerConfig(base_lr=self.base_lr, power=self.power,
                                 momentum=self.momentum, weight_decay=self.weight_decay,
                                 total_iters=self.total_iters, batch_size=self.batch_size,
                                 seed=self.seed)
        self.head_, self.trace_ = train(samples, self.scheme_, self.head_kind, config,
                                        loss_kind=self.loss_kind,
                                        crop=(self.crop, self.crop), flip=self.flip,
                                        quantize_targets=self.quantize_targets)
        return self

    def _predict_maps(self, X, windowed, window=None, stride=None):
        check_is_fitted(self, "head_")
        maps = []
        for img in _as_image_list(X, "X"):
            if windowed:
                win = window or (self.crop, self.crop)
                st = stride or (max(win[0] // 2, 1), max(win[1] // 2, 1))
                maps.append(predict_windows(self.head_, img, self.scheme_, win, st))
            else:
                maps.append(predict_depth(self.head_, extract_features(img), self.scheme_))
        return maps

    def predict(self, X):
        """Whole-image prediction; returns (n, H, W) when shapes agree."""
        maps = self._predict_maps(X, windowed=False)
        depths = [m.depth for m in maps]
        if len({d.shape for d in depths}) == 1:
            return np.stack(depths)
        return depths

    def predict_windows(self, X, window=None, stride=None):
        """Overlapping-window prediction, averaged per pixel."""
        maps = self._predict_maps(X, windowed=True, window=window, stride=stride)
        depths = [m.depth for m in maps]
        if len({d.shape for d in depths}) == 1:
            return np.stack(depths)
        return depths

    def score(self, X, y):
        """Mean delta<1.25 over the given images (higher is better)."""
        maps = self._predict_maps(X, windowed=True)
        scores = []
        for pred, d in zip(maps, _as_image_list(y, "y")):
            d = np.asarray(d, dtype=np.float64)
            gt = DepthMap(depth=d, valid=d > 0)
            rep = evaluate(pred, gt, (self.cap_min, self.depth_max))
            scores.append(rep.delta1)
        return float(np.mean(scores))
