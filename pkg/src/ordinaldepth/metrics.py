"""Depth-map evaluation metrics with masking and depth caps.

The evaluation set is every pixel that is valid in the ground truth and whose
ground-truth depth lies inside the cap; predictions are clamped into the cap
before scoring.  delta thresholds use strict <, inverse-depth metrics are in
1/km, and silog is the root of the scale-invariant log variance.
"""

import io
from dataclasses import dataclass, fields

import numpy as np

REPORT_COLUMNS = ("delta1", "delta2", "delta3", "abs_rel", "sq_rel", "rmse",
                  "rmse_log", "log10_mae", "silog", "irmse", "imae",
                  "scale_inv", "n_pixels")
HIGHER_IS_BETTER = frozenset({"delta1", "delta2", "delta3"})


@dataclass(frozen=True)
class MetricsReport:
    delta1: float
    delta2: float
    delta3: float
    abs_rel: float
    sq_rel: float
    rmse: float
    rmse_log: float
    log10_mae: float
    silog: float
    irmse: float
    imae: float
    scale_inv: float
    n_pixels: int

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


def evaluate(pred, gt, cap):
    """Score a predicted DepthMap against ground truth under a depth cap.

    cap = (min, max) in meters with min > 0 so the log metrics stay finite
    after clamping.
    """
    cap_min, cap_max = float(cap[0]), float(cap[1])
    if not (np.isfinite(cap_min) and np.isfinite(cap_max)):
        raise ValueError("cap bounds must be finite")
    if cap_min <= 0:
        raise ValueError(f"cap minimum must be > 0, got {cap_min}")
    if cap_max <= cap_min:
        raise ValueError(f"cap maximum must exceed minimum, got [{cap_min}, {cap_max}]")
    if pred.depth.shape != gt.depth.shape:
        raise ValueError(f"prediction shape {pred.depth.shape} does not match "
                         f"ground truth {gt.depth.shape}")
    sel = gt.valid & (gt.depth >= cap_min) & (gt.depth <= cap_max)
    n = int(sel.sum())
    if n == 0:
        raise ValueError("no ground-truth pixels inside the cap")
    g = gt.depth[sel]
    p = np.clip(pred.depth[sel], cap_min, cap_max)
    if g.min() <= 0 or p.min() <= 0:
        raise ValueError("evaluation depths must be strictly positive")

    ratio = np.maximum(p / g, g / p)
    diff = p - g
    e = np.log(p) - np.log(g)
    var = max(float((e ** 2).mean() - e.mean() ** 2), 0.0)
    ip = 1000.0 / p  # inverse depth in 1/km
    ig = 1000.0 / g
    return MetricsReport(
        delta1=float((ratio < 1.25).mean()),
        delta2=float((ratio < 1.25 ** 2).mean()),
        delta3=float((ratio < 1.25 ** 3).mean()),
        abs_rel=float((np.abs(diff) / g).mean()),
        sq_rel=float((diff ** 2 / g).mean()),
        rmse=float(np.sqrt((diff ** 2).mean())),
        rmse_log=float(np.sqrt((e ** 2).mean())),
        log10_mae=float(np.abs(np.log10(p) - np.log10(g)).mean()),
        silog=float(np.sqrt(var)),
        irmse=float(np.sqrt(((ip - ig) ** 2).mean())),
        imae=float(np.abs(ip - ig).mean()),
        scale_inv=var,
        n_pixels=n,
    )


def compare_reports(a, b):
    """Per-metric flags for a against b: 'better', 'worse', or 'tie'.

    Polarity follows the usual table conventions: the delta fractions are
    higher-is-better, every error metric lower-is-better.
    """
    if a.n_pixels != b.n_pixels:
        raise ValueError(f"reports cover different sets: {a.n_pixels} vs {b.n_pixels} pixels")
    out = {}
    for name in REPORT_COLUMNS[:-1]:
        va, vb = getattr(a, name), getattr(b, name)
        if va == vb:
            out[name] = "tie"
        elif (va > vb) == (name in HIGHER_IS_BETTER):
            out[name] = "better"
        else:
            out[name] = "worse"
    return out


def mean_report(reports):
    """Average metric columns over per-image reports; pixel counts add up."""
    if not reports:
        raise ValueError("need at least one report")
    vals = {name: float(np.mean([getattr(r, name) for r in reports]))
            for name in REPORT_COLUMNS[:-1]}
    return MetricsReport(n_pixels=int(sum(r.n_pixels for r in reports)), **vals)


def report_csv_header(extra=()):
    return ",".join(tuple(extra) + REPORT_COLUMNS)


def report_csv_line(report, extra=()):
    cells = [str(v) for v in extra]
    for name in REPORT_COLUMNS[:-1]:
        cells.append(f"{getattr(report, name):.10g}")
    cells.append(str(report.n_pixels))
    return ",".join(cells)


def format_report(report):
    """Pretty two-column table, one metric per line."""
    buf = io.StringIO()
    for name in REPORT_COLUMNS:
        arrow = "higher" if name in HIGHER_IS_BETTER else "lower"
        val = getattr(report, name)
        if name == "n_pixels":
            buf.write(f"{name:>10}  {val}\n")
        else:
            buf.write(f"{name:>10}  {val:12.6f}  ({arrow} is better)\n")
    return buf.getvalue()
