"""Ordinal regression for dense depth prediction.

Continuous depth is discretized into ordered bins (uniform or
spacing-increasing), a linear head over fixed per-pixel features is trained
with the pairwise-softmax ordinal loss (or one of the baseline losses), and
predictions are decoded back to metric depth and scored with the standard
depth-evaluation metrics.
"""

from .depthmap import DepthMap
from .discretization import (SID, UD, DiscretizationScheme, build_scheme,
                             decode_depth, depth_to_label, scheme_from_record,
                             scheme_to_record)
from .encoder_budget import EncoderConfig, params_fc_fashion, params_pooled_encoder
from .estimator import DepthDiscretizer, OrdinalDepthEstimator
from .experiment import (ExperimentConfig, load_config, parse_config,
                         run_ablation, run_interval_sweep)
from .features import N_FEATURES, extract_features
from .heads import (MULTICLASS, ORDINAL, REGRESSION, LinearHead, head_logits,
                    load_head, new_head, save_head)
from .losses import berhu_loss, mcc_loss, mse_log_loss
from .metrics import MetricsReport, compare_reports, evaluate, mean_report
from .optim import OptimizerConfig, lr_at, sgd_step
from .ordinal import (decode_labels, ordinal_gradient, ordinal_logit_gradient,
                      ordinal_loss, pairwise_probabilities)
from .synthetic import SceneSpec, generate_scene
from .training import TrainingDiverged, TrainSample, build_sample, predict_depth, train
from .windows import predict_windows, window_starts

__version__ = "0.1.0"

__all__ = [
    "DepthMap", "DiscretizationScheme", "UD", "SID", "build_scheme",
    "depth_to_label", "decode_depth", "scheme_to_record", "scheme_from_record",
    "pairwise_probabilities", "ordinal_loss", "ordinal_gradient",
    "ordinal_logit_gradient", "decode_labels",
    "mse_log_loss", "berhu_loss", "mcc_loss",
    "LinearHead", "ORDINAL", "MULTICLASS", "REGRESSION", "new_head",
    "head_logits", "save_head", "load_head",
    "OptimizerConfig", "lr_at", "sgd_step",
    "N_FEATURES", "extract_features", "SceneSpec", "generate_scene",
    "TrainSample", "TrainingDiverged", "build_sample", "train", "predict_depth",
    "window_starts", "predict_windows",
    "MetricsReport", "evaluate", "compare_reports", "mean_report",
    "EncoderConfig", "params_fc_fashion", "params_pooled_encoder",
    "OrdinalDepthEstimator", "DepthDiscretizer",
    "ExperimentConfig", "parse_config", "load_config", "run_ablation",
    "run_interval_sweep",
]
