"""Depth-range discretization into ordered bins.

Two strategies: uniform bin edges (UD) and log-uniform edges that widen with
depth (SID).  Thresholds live in a shifted range whose lower edge is pinned at
exactly 1.0, so the log-space formula stays well-posed when the depth range
starts at 0.  The shift xi = 1.0 - alpha is subtracted again on decode.
"""

from dataclasses import dataclass, field

import numpy as np

UD = "UD"
SID = "SID"
STRATEGIES = (UD, SID)


@dataclass(frozen=True)
class DiscretizationScheme:
    """Ordered thresholds t_0..t_K over the shifted range [1, beta - alpha + 1]."""

    strategy: str
    alpha: float
    beta: float
    xi: float
    k_bins: int
    thresholds: np.ndarray = field(repr=False)  # (K+1,), shifted space

    @property
    def shifted_min(self):
        return self.thresholds[0]

    @property
    def shifted_max(self):
        return self.thresholds[-1]

    def bin_widths(self):
        """Widths t_{i+1} - t_i, identical in shifted and unshifted space."""
        return np.diff(self.thresholds)


def build_scheme(strategy, alpha, beta, k_bins):
    """Construct a scheme with K+1 thresholds in the shifted range.

    UD places edges linearly, SID exponentially (uniform in log space).  Both
    endpoints are pinned to the exact range bounds so decoded depths never
    leak outside [alpha, beta].
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    alpha = float(alpha)
    beta = float(beta)
    if not (np.isfinite(alpha) and np.isfinite(beta)):
        raise ValueError("alpha and beta must be finite")
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if beta <= alpha:
        raise ValueError(f"beta must exceed alpha, got alpha={alpha} beta={beta}")
    k_bins = int(k_bins)
    if k_bins < 1:
        raise ValueError(f"k_bins must be >= 1, got {k_bins}")

    xi = 1.0 - alpha
    hi = beta + xi  # shifted upper bound; lower bound is exactly 1.0
    i = np.arange(k_bins + 1, dtype=np.float64)
    if strategy == UD:
        t = 1.0 + (hi - 1.0) * i / k_bins
    else:
        # log t is linear in i; log of the lower bound is 0 by construction
        t = np.exp(np.log(hi) * i / k_bins)
    # pin endpoints so they are exact despite exp/log rounding
    t[0] = 1.0
    t[-1] = hi
    if not np.all(np.diff(t) > 0):
        raise ValueError("thresholds must be strictly increasing; range too fine for K")
    t.setflags(write=False)
    return DiscretizationScheme(strategy=strategy, alpha=alpha, beta=beta,
                                xi=xi, k_bins=k_bins, thresholds=t)


def depth_to_label(scheme, depth):
    """Bin index l with t_l <= depth + xi < t_{l+1}.

    Depths below the range clamp to bin 0, at or above the top edge to K-1.
    Accepts scalars or arrays; labels come back as int64.
    """
    arr = np.asarray(depth, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("depth must be finite")
    k = scheme.k_bins
    t = scheme.thresholds
    shifted = arr + scheme.xi
    if scheme.strategy == UD:
        frac = (shifted - 1.0) * (k / (t[-1] - 1.0))
    else:
        safe = np.where(shifted > 0, shifted, 1.0)
        frac = np.log(safe) * (k / np.log(t[-1]))
        frac = np.where(shifted > 0, frac, -1.0)
    lab = np.clip(np.floor(frac), 0, k - 1).astype(np.int64)
    # closed form can be off by one ulp at bin edges; settle against the
    # stored thresholds (at most one step in either direction)
    lab += ((shifted >= t[lab + 1]) & (lab < k - 1)).astype(np.int64)
    lab -= ((shifted < t[lab]) & (lab > 0)).astype(np.int64)
    if arr.ndim == 0:
        return int(lab)
    return lab


def decode_depth(scheme, label):
    """Representative depth for a label: bin midpoint minus the shift.

    Label K (reachable from probability decoding) is clamped to K-1.
    """
    lab = np.asarray(label)
    if not np.issubdtype(lab.dtype, np.integer):
        raise ValueError(f"label must be integer, got dtype {lab.dtype}")
    k = scheme.k_bins
    if lab.size and (lab.min() < 0 or lab.max() > k):
        raise ValueError(f"labels must lie in [0, {k}], got range "
                         f"[{lab.min()}, {lab.max()}]")
    clamped = np.minimum(lab, k - 1)
    t = scheme.thresholds
    d = 0.5 * (t[clamped] + t[clamped + 1]) - scheme.xi
    if lab.ndim == 0:
        return float(d)
    return d


def scheme_to_record(scheme):
    """Plain-text form `strategy,alpha,beta,K`; thresholds re-derived on load."""
    return f"{scheme.strategy},{scheme.alpha!r},{scheme.beta!r},{scheme.k_bins}"


def scheme_from_record(text):
    parts = [p.strip() for p in text.strip().split(",")]
    if len(parts) != 4:
        raise ValueError(f"scheme record must have 4 fields, got {len(parts)}")
    strategy, alpha, beta, k_bins = parts
    try:
        return build_scheme(strategy, float(alpha), float(beta), int(k_bins))
    except ValueError:
        raise
    except Exception as exc:
        raise ValueError(f"malformed scheme record {text!r}") from exc
