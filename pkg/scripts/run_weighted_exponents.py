"""Fit the growth exponent of P(1,1,m) torus counts for several m and
compare with 2m/(m+2)."""
import argparse
from fractions import Fraction

from ratpoints.asymptotics import fit_asymptotic
from ratpoints.config import WeightedExperimentConfig
from ratpoints.enumeration import count_curve, geometric_bounds


def run(cfg: WeightedExperimentConfig):
    bounds = geometric_bounds(cfg.min_bound, cfg.max_bound, cfg.schedule_points)
    print(f"{'m':>3} {'2m/(m+2)':>10} {'a (b=1)':>10} {'a free':>10} {'b free':>8}")
    for m in cfg.m_values:
        curve = count_curve("weighted", bounds, m=m)
        fixed = fit_asymptotic(curve, fix_b=1)
        free = fit_asymptotic(curve)
        alpha = Fraction(2 * m, m + 2)
        print(f"{m:>3} {float(alpha):>10.4f} {fixed.a:>10.4f} {free.a:>10.4f} {free.b:>8.3f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, nargs="+", default=list(WeightedExperimentConfig.m_values))
    ap.add_argument("--max-bound", type=int, default=WeightedExperimentConfig.max_bound)
    args = ap.parse_args()
    run(WeightedExperimentConfig(m_values=tuple(args.m), max_bound=args.max_bound))


if __name__ == "__main__":
    main()
