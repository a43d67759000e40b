"""Predicted asymptotics N(B) ~ c B^a (log B)^(b-1), product rules, height
zeta partial sums, regression of count curves and comparison reports."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .densities import (EulerProductResult, Interval, RigidDivisorData, assemble_constant,
                        compute_delta, tau_archimedean, tau_finite)
from .enumeration import CountCurve
from .toric import (FanError, anticanonical_pl, build_picard, compute_alpha, compute_beta,
                    compute_gamma, pullback_pl, resolve_fan_2d, rigid_component_count)

PREDICTION_SCHEMA = "ratpoints.prediction/1"
FIT_SCHEMA = "ratpoints.fit/1"
REPORT_SCHEMA = "ratpoints.report/1"


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause


def tauberian_constant(theta, a, b: int):
    """theta / (a (b-1)!); exact when theta and a are exact."""
    if b < 1:
        raise ValueError("b must be at least 1")
    if a <= 0:
        raise ValueError("a must be positive")
    if isinstance(theta, Interval):
        k = 1 / (float(a) * math.factorial(b - 1))
        return theta.scaled(k)
    if isinstance(theta, float) or isinstance(a, float):
        return theta / (a * math.factorial(b - 1))
    return Fraction(theta) / (Fraction(a) * math.factorial(b - 1))


def _mul(x, y):
    if x is None or y is None:
        return None
    if isinstance(x, Interval) or isinstance(y, Interval):
        xi = x if isinstance(x, Interval) else Interval(float(x), float(x))
        yi = y if isinstance(y, Interval) else Interval(float(y), float(y))
        ends = [a * b for a in (xi.lo, xi.hi) for b in (yi.lo, yi.hi)]
        lo, hi = min(ends), max(ends)
        return Interval(math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf))
    if isinstance(x, float) or isinstance(y, float):
        return float(x) * float(y)
    return Fraction(x) * Fraction(y)


@dataclass(frozen=True)
class AsymptoticPrediction:
    alpha: Fraction
    beta: int
    gamma: Fraction | None = None
    delta: int = 1
    tau_finite: EulerProductResult | None = None
    tau_inf: Fraction | float | Interval | None = None
    theta: Fraction | Interval | None = None
    c: Fraction | Interval | None = None
    provenance: Mapping[str, str] = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    truncation: Mapping | None = None

    @property
    def log_power(self) -> int:
        return self.beta - 1

    def c_interval(self) -> Interval | None:
        if self.c is None:
            return None
        if isinstance(self.c, Interval):
            return self.c
        v = float(self.c)
        return Interval(math.nextafter(v, -math.inf), math.nextafter(v, math.inf))

    def to_dict(self) -> dict:
        def num(x):
            if x is None:
                return None
            if isinstance(x, Interval):
                return {"lo": x.lo, "hi": x.hi, "mid": x.mid}
            if isinstance(x, Fraction):
                return str(x)
            return x
        tf = None
        if self.tau_finite is not None:
            iv = self.tau_finite.interval
            tf = {"truncation_prime": self.tau_finite.truncation_prime,
                  "partial_value": self.tau_finite.partial_value,
                  "tail_bound": self.tau_finite.tail_bound,
                  "lo": iv.lo, "hi": iv.hi}
        return {"schema": PREDICTION_SCHEMA, "alpha": str(self.alpha), "beta": self.beta,
                "gamma": num(self.gamma), "delta": self.delta, "tau_finite": tf,
                "tau_inf": num(self.tau_inf), "theta": num(self.theta), "c": num(self.c),
                "provenance": dict(self.provenance), "notes": list(self.notes),
                "truncation": dict(self.truncation) if self.truncation else None}

    @classmethod
    def from_dict(cls, d: dict) -> AsymptoticPrediction:
        if d.get("schema") != PREDICTION_SCHEMA:
            raise ValueError(f"expected schema {PREDICTION_SCHEMA}")

        def num(x):
            if x is None:
                return None
            if isinstance(x, dict):
                return Interval(x["lo"], x["hi"])
            if isinstance(x, str):
                return Fraction(x)
            return x
        tf = None
        if d.get("tau_finite"):
            t = d["tau_finite"]
            tf = EulerProductResult(t["truncation_prime"], t["partial_value"], t["tail_bound"], ())
        return cls(Fraction(d["alpha"]), int(d["beta"]), num(d["gamma"]), int(d["delta"]), tf,
                   num(d["tau_inf"]), num(d["theta"]), num(d["c"]), d.get("provenance", {}),
                   tuple(d.get("notes", ())), d.get("truncation"))


def product_prediction(p1: AsymptoticPrediction, p2: AsymptoticPrediction,
                       base_heights: Iterable | None = None) -> AsymptoticPrediction:
    """Prediction for a product X1 x X2 with the product polarization.

    Equal indices multiply Theta and add the ranks.  When one index is
    smaller its factor only contributes the height zeta value of the base at
    the larger index; ``base_heights`` (heights of enumerated points of the
    smaller-index factor) turns that into a truncated lower bound.
    """
    if p1.alpha <= 0 or p2.alpha <= 0 or p1.beta < 1 or p2.beta < 1:
        raise ValueError("ill-formed predictions")
    if p1.alpha == p2.alpha:
        theta = _mul(p1.theta, p2.theta)
        beta = p1.beta + p2.beta
        c = tauberian_constant(theta, p1.alpha, beta) if theta is not None else None
        prov = {"theta": "product of factor constants", "beta": "sum of factor ranks"}
        return AsymptoticPrediction(p1.alpha, beta, _mul(p1.gamma, p2.gamma),
                                    p1.delta * p2.delta, None, _mul(p1.tau_inf, p2.tau_inf),
                                    theta, c, prov)
    base, top = (p1, p2) if p1.alpha < p2.alpha else (p2, p1)
    if base_heights is None:
        raise ValueError("unequal indices need the base factor's point heights")
    heights = list(base_heights)
    if top.alpha.denominator == 1 and all(isinstance(h, (int, Fraction)) for h in heights):
        zeta = sum((Fraction(h) ** -int(top.alpha) for h in heights), Fraction(0))
    else:
        zeta = math.fsum(float(h) ** -float(top.alpha) for h in heights)
    theta = _mul(top.theta, zeta)
    c = tauberian_constant(theta, top.alpha, top.beta) if theta is not None else None
    trunc = {"base_points": len(heights), "max_height": float(max(heights, default=0)),
             "zeta_partial": float(zeta)}
    prov = {"theta": "monotone lower bound: partial height zeta sum over the base points",
            "c": "monotone lower bound"}
    return AsymptoticPrediction(top.alpha, top.beta, None, top.delta, None, None, theta, c,
                                prov, ("theta and c are truncated lower bounds",), trunc)


# ---------------------------------------------------------------------------
# height zeta partial sums

def _height_counts(points) -> list[tuple[float, int]]:
    if isinstance(points, np.ndarray):
        return [(float(h), int(n)) for h, n in enumerate(points) if n]
    if isinstance(points, Mapping):
        return [(float(h), int(n)) for h, n in points.items()]
    return [(float(h), 1) for h in points]


def zeta_partial(points, s: float, bound) -> float:
    """sum of H(x)^(-s) over points with H(x) <= B.

    ``points`` is an iterable of heights, a mapping height -> multiplicity,
    or a histogram array indexed by integer height.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    b = float(bound)
    return math.fsum(n * h ** (-s) for h, n in _height_counts(points) if h <= b)


# ---------------------------------------------------------------------------
# regression

@dataclass(frozen=True)
class FitResult:
    a: float
    b: float
    log_c: float
    residual: float
    fixed_mask: tuple[bool, bool] = (False, False)

    @property
    def c(self) -> float:
        return math.exp(self.log_c)

    def to_dict(self) -> dict:
        return {"schema": FIT_SCHEMA, "a": self.a, "b": self.b, "log_c": self.log_c,
                "c": self.c, "residual": self.residual,
                "fixed": {"a": self.fixed_mask[0], "b": self.fixed_mask[1]}}


def fit_asymptotic(curve: CountCurve, fix_a=None, fix_b=None) -> FitResult:
    """Least squares for log N = log c + a log B + (b-1) log log B."""
    rows = [(float(b), n) for b, n in curve.samples if float(b) >= 3 and n > 0]
    if len(rows) < 3:
        raise ValueError("need at least 3 samples with B >= 3 and N > 0")
    lb = np.array([math.log(b) for b, _ in rows])
    llb = np.log(lb)
    y = np.array([math.log(n) for _, n in rows])
    cols, names = [np.ones_like(lb)], ["log_c"]
    if fix_a is None:
        cols.append(lb)
        names.append("a")
    else:
        y = y - float(fix_a) * lb
    if fix_b is None:
        cols.append(llb)
        names.append("b")
    else:
        y = y - (float(fix_b) - 1) * llb
    design = np.column_stack(cols)
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise ValueError("degenerate design matrix: the bound schedule does not separate the parameters")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = float(np.sqrt(np.mean((design @ coef - y) ** 2)))
    vals = dict(zip(names, coef))
    a = float(fix_a) if fix_a is not None else float(vals["a"])
    b = float(fix_b) if fix_b is not None else float(vals["b"]) + 1
    return FitResult(a, b, float(vals["log_c"]), resid, (fix_a is not None, fix_b is not None))


# ---------------------------------------------------------------------------
# prediction

def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except StageError:
        raise
    except (ValueError, ArithmeticError, FanError) as e:
        raise StageError(name, e) from e


def predict(variety, big_p: int = 10_000, workers: int = 1) -> AsymptoticPrediction:
    """Assemble alpha, beta, gamma, delta, tau and c for a toric variety.

    The constant is Theta / (alpha (beta-1)!) with Theta = alpha^beta gamma
    delta tau, the alpha^beta accounting for heights taken in the L-scale
    rather than the anticanonical scale.
    """
    fan, phi = variety.fan, variety.polarization
    if not fan.is_smooth:
        if fan.dim != 2:
            raise StageError("resolve", FanError("non-smooth fan in dimension > 2"))
        fine = _stage("resolve", resolve_fan_2d, fan)
        phi = _stage("resolve", pullback_pl, phi, fine)
        fan = fine
    pm = _stage("picard", build_picard, fan)
    l_class = pm.class_of_pl(phi)
    alpha = _stage("alpha", compute_alpha, pm, l_class)
    rigid = _stage("alpha", rigid_component_count, pm, l_class)
    beta = _stage("beta", compute_beta, pm, rigid)
    prov = {"alpha": "exact", "beta": "exact", "delta": "exact (split)"}
    delta = _stage("delta", compute_delta, True)
    if rigid:
        note = (f"alpha L + K spans a face of dimension {rigid} of the effective cone; "
                "the constant needs quotient lattice and fibration data and is not assembled")
        return AsymptoticPrediction(alpha, beta, None, delta, provenance=prov, notes=(note,))
    gamma = _stage("gamma", compute_gamma, pm)
    tf = _stage("tau_finite", tau_finite, fan, pm, RigidDivisorData(), big_p, workers)
    ti = _stage("tau_inf", tau_archimedean, fan, anticanonical_pl(fan))
    c_anticanonical = _stage("constant", assemble_constant, alpha, beta, gamma, delta, tf, ti)
    c = c_anticanonical.scaled(float(alpha ** beta))
    theta = c.scaled(float(alpha) * math.factorial(beta - 1))
    prov.update(gamma="exact", tau_inf="exact",
                tau_finite=f"enclosure: exact product over p <= {big_p} and tail bound",
                theta="enclosure", c="enclosure")
    return AsymptoticPrediction(alpha, beta, gamma, delta, tf, ti, theta, c, prov)


# ---------------------------------------------------------------------------
# comparison

@dataclass(frozen=True)
class Verdict:
    name: str
    status: str
    tolerance: str
    observed: float | None = None
    expected: str = ""
    detail: str = ""

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ComparisonReport:
    prediction: AsymptoticPrediction
    fit: FitResult | None
    free_fit: FitResult | None
    curve: CountCurve
    verdicts: tuple[Verdict, ...]
    trend: tuple[tuple[float, float], ...] = ()

    def to_dict(self) -> dict:
        return {"schema": REPORT_SCHEMA, "prediction": self.prediction.to_dict(),
                "fit": self.fit.to_dict() if self.fit else None,
                "free_fit": self.free_fit.to_dict() if self.free_fit else None,
                "curve": [[str(b), n] for b, n in self.curve.samples],
                "verdicts": [v.to_dict() for v in self.verdicts],
                "trend": [[b, s] for b, s in self.trend]}

    def table(self) -> str:
        lines = [f"{'check':<10} {'status':<13} {'observed':>14}  expected / tolerance"]
        for v in self.verdicts:
            obs = "-" if v.observed is None else f"{v.observed:.6g}"
            lines.append(f"{v.name:<10} {v.status:<13} {obs:>14}  {v.expected} ({v.tolerance})")
        if self.trend:
            lines.append("")
            lines.append(f"{'B':>12} {'N/(B^a (log B)^(b-1))':>24}")
            lines.extend(f"{b:>12g} {s:>24.6g}" for b, s in self.trend)
        return "\n".join(lines)


def trend_series(curve: CountCurve, alpha, beta: int) -> list[tuple[float, float]]:
    out = []
    for b, n in curve.samples:
        bf = float(b)
        if bf > 1:
            out.append((bf, n / (bf ** float(alpha) * math.log(bf) ** (beta - 1))))
    return out


def compare(pred: AsymptoticPrediction, curve: CountCurve, exponent_tol: float = 0.05,
            constant_slack: float = 3.0) -> ComparisonReport:
    verdicts = []
    usable = [s for s in curve.samples if float(s[0]) >= 3 and s[1] > 0]
    fit = free = None
    if len(usable) >= 3:
        free = fit_asymptotic(curve, fix_b=pred.beta)
        fit = fit_asymptotic(curve, fix_a=pred.alpha, fix_b=pred.beta)
    alpha = float(pred.alpha)

    if free is None:
        verdicts.append(Verdict("exponent", "inconclusive", f"|a - alpha| <= {exponent_tol}",
                                None, f"alpha = {pred.alpha}", "fewer than 3 usable samples"))
    else:
        ok = abs(free.a - alpha) <= exponent_tol
        verdicts.append(Verdict("exponent", "pass" if ok else "fail", f"|a - alpha| <= {exponent_tol}",
                                free.a, f"alpha = {pred.alpha}", "free-a fit with b fixed to beta"))

    trend = trend_series(curve, pred.alpha, pred.beta)
    civ = pred.c_interval()
    if civ is None or len(trend) < 3 or math.isinf(civ.hi):
        verdicts.append(Verdict("trend", "inconclusive", "monotone approach over the last half",
                                None, "predicted c", "no finite predicted constant or too few samples"))
    else:
        target = math.log(civ.mid)
        tail = trend[len(trend) // 2:]
        dist = [abs(math.log(s) - target) for _, s in tail]
        ok = all(d2 <= d1 for d1, d2 in zip(dist, dist[1:]))
        direction = "from above" if tail[-1][1] > civ.mid else "from below"
        verdicts.append(Verdict("trend", "pass" if ok else "fail", "monotone approach over the last half",
                                tail[-1][1], f"c = {civ.mid:.6g}", f"series approaches {direction}"))

    if civ is None or fit is None or math.isinf(civ.hi):
        verdicts.append(Verdict("constant", "inconclusive", f"slack factor {constant_slack}",
                                None, "predicted c", "no finite predicted constant or no fit"))
    else:
        ok = civ.lo / constant_slack <= fit.c <= civ.hi * constant_slack
        verdicts.append(Verdict("constant", "pass" if ok else "fail", f"slack factor {constant_slack}",
                                fit.c, f"c in [{civ.lo:.6g}, {civ.hi:.6g}]", "fit with a, b fixed"))
    return ComparisonReport(pred, fit, free, curve, tuple(verdicts), tuple(trend))
