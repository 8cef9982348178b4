"""Parameter budgets for two full-image encoder designs.

A fully-connected encoder flattens the (downsampled) feature map into a
hidden vector and projects it back per pixel; the pooled alternative shrinks
the map with average pooling and uses a single channel-to-channel projection.
All arithmetic is exact integer math; the spatial downsampling of the
fc-fashion design enters as a 1/downsample^2 factor on the dense terms.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class EncoderConfig:
    c_in: int = 512       # feature channels entering the encoder
    c_out: int = 512      # channels produced for the decoder
    m: int = 2048         # hidden fully-connected width
    k: int = 4            # pooling kernel and stride
    h: int = 49           # feature-map height
    w: int = 65           # feature-map width
    downsample: int = 3   # spatial stride before the fc layers

    def __post_init__(self):
        for name in ("c_in", "c_out", "m", "k", "h", "w", "downsample"):
            if int(getattr(self, name)) < 1:
                raise ValueError(f"{name} must be a positive integer")


def params_fc_fashion(config):
    """Weights of the flatten -> hidden -> per-pixel-broadcast design."""
    c, cs = int(config.c_in), int(config.c_out)
    m, h, w = int(config.m), int(config.h), int(config.w)
    d2 = int(config.downsample) ** 2
    return (m * w * h * c) // d2 + m * m + (w * h * cs * m) // d2


def params_pooled_encoder(config):
    """Weights of the average-pool -> channel projection design."""
    c, cs = int(config.c_in), int(config.c_out)
    k, h, w = int(config.k), int(config.h), int(config.w)
    return cs * (w // k) * (h // k) * c + cs * cs
