"""Command-line surface.

Subcommands: gen-data, train, ablate, sweep-k, eval, thresholds, param-count.
Exit codes: 0 success, 1 usage or configuration error, 2 trend-assertion
failure, 3 I/O error.
"""

import argparse
import os
import sys

import numpy as np

from .dataio import read_depth_png16, write_depth_png16
from .depthmap import DepthMap
from .discretization import build_scheme
from .encoder_budget import EncoderConfig, params_fc_fashion, params_pooled_encoder
from .experiment import (DEFAULT_K_LIST, VARIANTS, ExperimentConfig,
                         generate_dataset, load_benchmark, load_config,
                         run_ablation, run_interval_sweep, train_variant)
from .heads import save_head
from .metrics import (evaluate, format_report, mean_report, report_csv_header,
                      report_csv_line)
from .training import TrainingDiverged
from .windows import predict_windows

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_TREND = 2
EXIT_IO = 3


def _load_experiment(args):
    config = load_config(args.config) if args.config else ExperimentConfig()
    if getattr(args, "seed", None) is not None:
        config.seed = args.seed
    if getattr(args, "out", None):
        config.out_dir = args.out
    return config


def _out_path(config, name):
    os.makedirs(config.out_dir, exist_ok=True)
    return os.path.join(config.out_dir, name)


def cmd_gen_data(args):
    config = _load_experiment(args)
    rows = generate_dataset(config, config.out_dir)
    print(f"wrote {len(rows)} scenes to {config.out_dir} "
          f"({sum(r['split'] == 'train' for r in rows)} train, "
          f"{sum(r['split'] == 'test' for r in rows)} test)")
    return EXIT_OK


def cmd_train(args):
    if args.variant not in VARIANTS:
        raise ValueError(f"unknown variant {args.variant!r}; choose from {sorted(VARIANTS)}")
    config = _load_experiment(args)
    train_samples, test_pairs = load_benchmark(args.data)
    try:
        head, scheme, trace = train_variant(args.variant, train_samples, config)
    except TrainingDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    save_head(head, _out_path(config, f"{args.variant}.ordh"))
    with open(_out_path(config, f"{args.variant}_trace.csv"), "w") as fh:
        fh.write("iter,loss\n")
        for it, loss in trace:
            fh.write(f"{int(it)},{loss:.10g}\n")
    pred_dir = _out_path(config, "pred")
    gt_dir = _out_path(config, "gt")
    os.makedirs(pred_dir, exist_ok=True)
    os.makedirs(gt_dir, exist_ok=True)
    window = (config.crop, config.crop)
    stride = (max(config.crop // 2, 1),) * 2
    reports = []
    for i, (img, gt) in enumerate(test_pairs):
        pred = predict_windows(head, img, scheme, window, stride)
        clipped = np.clip(pred.depth, config.cap_min, config.depth_max)
        # pred/ and gt/ carry matching names so `eval` can pair them directly
        write_depth_png16(DepthMap.dense(clipped), os.path.join(pred_dir, f"{i:04d}_depth.png"))
        write_depth_png16(gt, os.path.join(gt_dir, f"{i:04d}_depth.png"))
        reports.append(evaluate(pred, gt, config.cap()))
    print(f"trained {args.variant} for {config.total_iters} iterations")
    print(format_report(mean_report(reports)), end="")
    return EXIT_OK


def cmd_ablate(args):
    config = _load_experiment(args)
    rows, ordering_ok = run_ablation(config, args.data)
    n_metrics = len(report_csv_header().split(","))
    lines = [report_csv_header(extra=("variant",)) + ",note"]
    for label, rep, note in rows:
        if rep is None:
            lines.append(",".join([label] + [""] * n_metrics + [note]))
        else:
            lines.append(report_csv_line(rep, extra=(label,)) + "," + note)
    csv_text = "\n".join(lines) + "\n"
    path = _out_path(config, "ablation.csv")
    with open(path, "w") as fh:
        fh.write(csv_text)
    print(csv_text, end="")
    if not ordering_ok:
        print("trend check failed: DORN-SID is not the best variant on delta1",
              file=sys.stderr)
        return EXIT_TREND
    return EXIT_OK


def cmd_sweep_k(args):
    config = _load_experiment(args)
    k_list = [int(k) for k in args.k_list.split(",")] if args.k_list else list(DEFAULT_K_LIST)
    rows, spread = run_interval_sweep(config, k_list, args.data)
    path = _out_path(config, "sweep.csv")
    with open(path, "w") as fh:
        fh.write("k_bins,delta1,rmse\n")
        for k, d1, rmse in rows:
            fh.write(f"{k},{d1:.10g},{rmse:.10g}\n")
    for k, d1, rmse in rows:
        print(f"K={k:4d}  delta1={d1:.4f}  rmse={rmse:.4f}")
    print(f"delta1 spread {spread:.4f} (band {config.band})")
    if args.check_band and spread >= config.band:
        print(f"trend check failed: delta1 spread {spread:.4f} is not below "
              f"band {config.band}", file=sys.stderr)
        return EXIT_TREND
    return EXIT_OK


def cmd_eval(args):
    names = sorted(n for n in os.listdir(args.gt) if n.endswith("_depth.png"))
    if not names:
        raise OSError(f"no *_depth.png files in {args.gt}")
    reports = []
    lines = [report_csv_header(extra=("name",))]
    for name in names:
        pred_path = os.path.join(args.pred, name)
        if not os.path.isfile(pred_path):
            raise OSError(f"no prediction for {name} in {args.pred}")
        pred = read_depth_png16(pred_path)
        gt = read_depth_png16(os.path.join(args.gt, name))
        rep = evaluate(pred, gt, (args.cap_min, args.cap_max))
        reports.append(rep)
        lines.append(report_csv_line(rep, extra=(name,)))
    lines.append(report_csv_line(mean_report(reports), extra=("mean",)))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(text, end="")
    return EXIT_OK


def cmd_thresholds(args):
    scheme = build_scheme(args.strategy, args.alpha, args.beta, args.k_bins)
    print(f"# {args.strategy} over [{args.alpha}, {args.beta}] m, K={args.k_bins}, "
          f"shift xi={scheme.xi}")
    print("i,t_shifted,depth_m")
    for i, t in enumerate(scheme.thresholds):
        print(f"{i},{t:.10g},{t - scheme.xi:.10g}")
    return EXIT_OK


def cmd_param_count(args):
    config = EncoderConfig(c_in=args.c_in, c_out=args.c_out, m=args.m, k=args.k,
                           h=args.h, w=args.w, downsample=args.downsample)
    fc = params_fc_fashion(config)
    pooled = params_pooled_encoder(config)
    print(f"fc-fashion encoder parameters:     {fc:15d}  ({fc / 1e6:.1f}M)")
    print(f"pooled encoder parameters:         {pooled:15d}  ({pooled / 1e6:.1f}M)")
    print(f"ratio fc/pooled:                   {fc / pooled:15.2f}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="ordinaldepth",
                                     description="Ordinal regression for dense depth prediction")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("gen-data", cmd_gen_data, "generate a synthetic benchmark directory")
    p.add_argument("--config", help="key = value experiment config")
    p.add_argument("--out", required=True, help="output dataset directory")
    p.add_argument("--seed", type=int, help="override the config seed")

    p = add("train", cmd_train, "train one variant and predict the held-out split")
    p.add_argument("--config", help="key = value experiment config")
    p.add_argument("--data", required=True, help="dataset directory from gen-data")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--variant", default="DORN-SID", help="comparison-table variant")
    p.add_argument("--seed", type=int, help="override the config seed")

    p = add("ablate", cmd_ablate, "train and score all configured variants")
    p.add_argument("--config", help="key = value experiment config")
    p.add_argument("--data", required=True, help="dataset directory from gen-data")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, help="override the config seed")

    p = add("sweep-k", cmd_sweep_k, "sweep the number of depth intervals")
    p.add_argument("--config", help="key = value experiment config")
    p.add_argument("--data", required=True, help="dataset directory from gen-data")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--k-list", help="comma-separated K values")
    p.add_argument("--check-band", action="store_true",
                   help="exit 2 when the delta1 spread reaches the configured band")
    p.add_argument("--seed", type=int, help="override the config seed")

    p = add("eval", cmd_eval, "score predicted depth maps against ground truth")
    p.add_argument("--pred", required=True, help="directory of predicted *_depth.png")
    p.add_argument("--gt", required=True, help="directory of ground-truth *_depth.png")
    p.add_argument("--cap-min", type=float, default=0.5)
    p.add_argument("--cap-max", type=float, default=80.0)
    p.add_argument("--out", help="also write the CSV here")

    p = add("thresholds", cmd_thresholds, "print the threshold table of a scheme")
    p.add_argument("--strategy", default="SID", choices=("UD", "SID"))
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=80.0)
    p.add_argument("--k-bins", type=int, default=80)

    p = add("param-count", cmd_param_count, "parameter budgets of the two encoders")
    p.add_argument("--c-in", type=int, default=512)
    p.add_argument("--c-out", type=int, default=512)
    p.add_argument("--m", type=int, default=2048)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--h", type=int, default=49)
    p.add_argument("--w", type=int, default=65)
    p.add_argument("--downsample", type=int, default=3)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if (exc.code or 0) == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
