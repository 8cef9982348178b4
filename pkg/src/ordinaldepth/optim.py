"""SGD with momentum, weight decay, and polynomial learning-rate decay.

The step is pure: it returns a fresh head and velocity so callers can keep
checkpoints without copying.  The bias column (last) is excluded from weight
decay.
"""

from dataclasses import dataclass

import numpy as np

from .heads import LinearHead


@dataclass(frozen=True)
class OptimizerConfig:
    base_lr: float = 1e-4
    power: float = 0.9
    momentum: float = 0.9
    weight_decay: float = 5e-4
    total_iters: int = 1000
    batch_size: int = 3
    seed: int = 0

    def __post_init__(self):
        if not (self.base_lr >= 0 and np.isfinite(self.base_lr)):
            raise ValueError(f"base_lr must be >= 0, got {self.base_lr}")
        if not 0 <= self.momentum < 1:
            raise ValueError(f"momentum must be in [0, 1), got {self.momentum}")
        if not self.power > 0:
            raise ValueError(f"power must be > 0, got {self.power}")
        if self.weight_decay < 0:
            raise ValueError(f"weight_decay must be >= 0, got {self.weight_decay}")
        if self.total_iters < 0:
            raise ValueError(f"total_iters must be >= 0, got {self.total_iters}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")


def lr_at(config, iteration):
    """base_lr * (1 - iteration/total_iters)^power."""
    if not 0 <= iteration <= config.total_iters:
        raise ValueError(f"iteration {iteration} outside [0, {config.total_iters}]")
    if config.total_iters == 0:
        return config.base_lr
    frac = iteration / config.total_iters
    return config.base_lr * (1.0 - frac) ** config.power


def sgd_step(head, gradient, config, iteration, velocity):
    """v <- momentum*v + (grad + wd*theta); theta <- theta - lr*v.

    Returns (new head, new velocity); inputs are left untouched.
    """
    grad = np.asarray(gradient, dtype=np.float64)
    if grad.shape != head.weights.shape:
        raise ValueError(f"gradient shape {grad.shape} does not match weights "
                         f"{head.weights.shape}")
    if velocity.shape != head.weights.shape:
        raise ValueError(f"velocity shape {velocity.shape} does not match weights "
                         f"{head.weights.shape}")
    decayed = config.weight_decay * head.weights
    decayed[:, -1] = 0.0  # bias column carries no decay
    v = config.momentum * velocity + grad + decayed
    w = head.weights - lr_at(config, iteration) * v
    return LinearHead(weights=w, head_kind=head.head_kind, k_bins=head.k_bins), v
