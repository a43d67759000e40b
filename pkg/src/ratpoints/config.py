"""Run configuration shared by the CLI and the experiment scripts."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .enumeration import geometric_bounds


@dataclass
class PredictConfig:
    euler_truncation: int = 10_000
    workers: int = 1


@dataclass
class EnumerateConfig:
    bounds: list = field(default_factory=lambda: [10, 100, 1000])
    engine: str = "auto"
    threads: int = 1
    box: int | None = None


@dataclass
class CompareConfig:
    exponent_tolerance: float = 0.05
    constant_slack: float = 3.0


@dataclass
class CubicExperimentConfig:
    max_bound: int = 10_000
    schedule_points: int = 25
    euler_truncation: int = 10_000
    workers: int = 1
    constant_slack: float = 3.0


@dataclass
class WeightedExperimentConfig:
    m_values: tuple[int, ...] = (2, 3, 4, 5)
    min_bound: int = 50
    max_bound: int = 1000
    schedule_points: int = 20


def parse_bounds(text: str) -> list:
    """``"10,100,1000"`` or ``"geom:LO:HI:COUNT"`` (integers, log-spaced)."""
    text = text.strip()
    if text.startswith("geom:"):
        lo, hi, count = (int(x) for x in text[5:].split(":"))
        return geometric_bounds(lo, hi, count)
    out = []
    for tok in text.split(","):
        f = Fraction(tok.strip())
        out.append(int(f) if f.denominator == 1 else f)
    if not out or sorted(set(out)) != out:
        raise ValueError("bounds must be a strictly increasing, non-empty list")
    return out
