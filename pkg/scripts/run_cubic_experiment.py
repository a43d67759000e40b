"""Count points on xyz = u^3 and set the normalized series against the
predicted leading constant.

    python scripts/run_cubic_experiment.py --max-bound 10000 --workers 4
"""
import argparse
import json
import math
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ratpoints.asymptotics import compare, predict
from ratpoints.config import CubicExperimentConfig
from ratpoints.enumeration import cubic_surface_heights, curve_from_histogram, geometric_bounds
from ratpoints.varieties import cubic_surface_variety


def run(cfg: CubicExperimentConfig, out_dir: Path):
    out_dir.mkdir(parents=True, exist_ok=True)
    pred = predict(cubic_surface_variety(), cfg.euler_truncation, cfg.workers)
    hist = cubic_surface_heights(cfg.max_bound, cfg.workers)
    bounds = geometric_bounds(10, cfg.max_bound, cfg.schedule_points)
    curve = curve_from_histogram(hist, bounds, "cubic-xyz-u3")
    report = compare(pred, curve, constant_slack=cfg.constant_slack)

    cum = np.cumsum(hist.astype(np.int64))
    rows = ["B,count,N/(B log^6 B),N/(B log^6 B / 720)"]
    for b in bounds:
        base = b * math.log(b) ** 6
        rows.append(f"{b},{int(cum[b])},{cum[b] / base:.6g},{720 * cum[b] / base:.6g}")
    (out_dir / "cubic_series.csv").write_text("\n".join(rows) + "\n")
    (out_dir / "cubic_report.json").write_text(json.dumps(
        {"config": asdict(cfg), "report": report.to_dict()}, indent=2) + "\n")
    print(report.table())
    print(f"\npredicted c in [{pred.c.lo:.4g}, {pred.c.hi:.4g}]")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-bound", type=int, default=CubicExperimentConfig.max_bound)
    ap.add_argument("--workers", type=int, default=CubicExperimentConfig.workers)
    ap.add_argument("--euler-truncation", type=int, default=CubicExperimentConfig.euler_truncation)
    ap.add_argument("--out", default="results")
    args = ap.parse_args()
    cfg = CubicExperimentConfig(max_bound=args.max_bound, workers=args.workers,
                                euler_truncation=args.euler_truncation)
    run(cfg, Path(args.out))


if __name__ == "__main__":
    main()
