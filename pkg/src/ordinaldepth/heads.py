"""Learnable linear heads and their binary serialization.

A head is a single weight matrix applied per pixel to a fixed feature vector
whose last channel is the constant 1, so the bias lives in the last weight
column.  Row count is tied to the head kind: the ordinal head drives K logit
pairs, the multi-class head K class logits, the regression head one scalar.
"""

import struct
from dataclasses import dataclass

import numpy as np

ORDINAL = "ordinal"
MULTICLASS = "multiclass"
REGRESSION = "regression"
HEAD_KINDS = (ORDINAL, MULTICLASS, REGRESSION)

_HEAD_CODES = {ORDINAL: 0, MULTICLASS: 1, REGRESSION: 2}
_CODE_HEADS = {v: k for k, v in _HEAD_CODES.items()}

MAGIC = b"ORDH"
VERSION = 1


def head_rows(head_kind, k_bins):
    if head_kind == ORDINAL:
        return 2 * k_bins
    if head_kind == MULTICLASS:
        return k_bins
    if head_kind == REGRESSION:
        return 1
    raise ValueError(f"head_kind must be one of {HEAD_KINDS}, got {head_kind!r}")


@dataclass(frozen=True)
class LinearHead:
    """Weights of shape (rows, n_features); last column multiplies the bias channel."""

    weights: np.ndarray
    head_kind: str
    k_bins: int

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 2:
            raise ValueError(f"weights must be 2-D, got shape {w.shape}")
        rows = head_rows(self.head_kind, self.k_bins)
        if w.shape[0] != rows:
            raise ValueError(f"{self.head_kind} head with K={self.k_bins} needs "
                             f"{rows} weight rows, got {w.shape[0]}")
        object.__setattr__(self, "weights", w)

    @property
    def n_features(self):
        return self.weights.shape[1]


def new_head(head_kind, k_bins, n_features):
    """Zero-initialized head: the ordinal head starts at uniform P^k = 0.5."""
    if n_features < 1:
        raise ValueError(f"n_features must be >= 1, got {n_features}")
    rows = head_rows(head_kind, k_bins)
    return LinearHead(weights=np.zeros((rows, n_features)), head_kind=head_kind,
                      k_bins=k_bins)


def head_logits(head, features):
    """Apply the head per pixel: (..., C) -> (..., rows)."""
    x = np.asarray(features, dtype=np.float64)
    if x.shape[-1] != head.n_features:
        raise ValueError(f"features have {x.shape[-1]} channels, head expects "
                         f"{head.n_features}")
    return x @ head.weights.T


def save_head(head, path):
    """Versioned binary record: magic, version, kind, K, feature count, weights.

    The stored feature count excludes the constant bias channel; weights are
    row-major float64 little-endian.
    """
    rows, n_in = head.weights.shape
    header = struct.pack("<4sIIII", MAGIC, VERSION, _HEAD_CODES[head.head_kind],
                         head.k_bins, n_in - 1)
    payload = head.weights.astype("<f8").tobytes(order="C")
    with open(path, "wb") as fh:
        fh.write(header + payload)


def load_head(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    header_size = struct.calcsize("<4sIIII")
    if len(blob) < header_size:
        raise ValueError(f"truncated head file {path}")
    magic, version, code, k_bins, c_f = struct.unpack_from("<4sIIII", blob)
    if magic != MAGIC:
        raise ValueError(f"bad magic in {path}: {magic!r}")
    if version != VERSION:
        raise ValueError(f"unsupported head version {version}")
    if code not in _CODE_HEADS:
        raise ValueError(f"unknown head kind code {code}")
    head_kind = _CODE_HEADS[code]
    rows = head_rows(head_kind, k_bins)
    n_in = c_f + 1
    expected = header_size + rows * n_in * 8
    if len(blob) != expected:
        raise ValueError(f"head file {path} has {len(blob)} bytes, expected {expected}")
    w = np.frombuffer(blob, dtype="<f8", offset=header_size).reshape(rows, n_in)
    return LinearHead(weights=w.astype(np.float64), head_kind=head_kind, k_bins=k_bins)
