"""Exhaustive enumeration of rational points of bounded height.

Each engine is exact: it produces every point of height at most B exactly
once.  ``torus_grid_enumerate`` is the slow general sweep the specialised
engines are checked against.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from math import gcd
from typing import Iterable, Sequence

import numpy as np
from sympy import integer_nthroot, primefactors

from .heights import HeightModel, HeightValue, TorusPoint, toric_height


class EnumerationError(ValueError):
    pass


@dataclass(frozen=True)
class CountCurve:
    samples: tuple[tuple[int, int], ...]
    model_id: str = ""

    def __post_init__(self):
        s = tuple((b, int(n)) for b, n in self.samples)
        if any(b2 <= b1 for (b1, _), (b2, _) in zip(s, s[1:])):
            raise EnumerationError("bounds must be strictly increasing")
        if any(n2 < n1 for (_, n1), (_, n2) in zip(s, s[1:])):
            raise EnumerationError("counts must be nondecreasing")
        object.__setattr__(self, "samples", s)

    @property
    def bounds(self) -> list:
        return [b for b, _ in self.samples]

    @property
    def counts(self) -> list[int]:
        return [n for _, n in self.samples]

    def to_csv(self) -> str:
        return "B,count\n" + "".join(f"{b},{n}\n" for b, n in self.samples)

    @classmethod
    def from_csv(cls, text: str, model_id: str = "") -> CountCurve:
        rows = [line.split(",") for line in text.strip().splitlines()
                if line.strip() and not line.startswith("#")]
        if rows and rows[0][0].strip() == "B":
            rows = rows[1:]
        return cls(tuple((_parse_bound(b), int(n)) for b, n in rows), model_id)


def _parse_bound(s: str):
    f = Fraction(s.strip())
    return int(f) if f.denominator == 1 else f


def mobius_sieve(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    mu[0] = 0
    is_comp = np.zeros(n + 1, dtype=bool)
    for p in range(2, n + 1):
        if is_comp[p]:
            continue
        is_comp[2 * p::p] = True
        mu[p::p] *= -1
        mu[p * p::p * p] = 0
    return mu


def smallest_prime_factors(n: int) -> np.ndarray:
    spf = np.arange(n + 1, dtype=np.int64)
    for p in range(2, int(n ** 0.5) + 1):
        if spf[p] == p:
            block = spf[p * p::p]
            mask = block == np.arange(p * p, n + 1, p)
            block[mask] = p
    return spf


def _factor(u: int, spf: np.ndarray) -> list[tuple[int, int]]:
    out = []
    while u > 1:
        p = int(spf[u])
        e = 0
        while u % p == 0:
            u //= p
            e += 1
        out.append((p, e))
    return out


# ---------------------------------------------------------------------------
# projective space

def enumerate_projective(n: int, bound: int) -> int:
    """Points of P^n(Q) with standard height <= B, by Moebius inversion over
    the common divisor of the coordinate vector."""
    if n < 1:
        raise EnumerationError("n must be at least 1")
    if bound < 1:
        return 0
    mu = mobius_sieve(bound)
    total = 0
    for d in range(1, bound + 1):
        if mu[d]:
            total += int(mu[d]) * ((2 * (bound // d) + 1) ** (n + 1) - 1)
    return total // 2


def projective_heights(n: int, bound: int) -> np.ndarray:
    """``out[h]`` = number of points of P^n(Q) of height exactly h."""
    # vectors with max |x_i| = k number (2k+1)^(n+1) - (2k-1)^(n+1); invert
    # over the common divisor d, then identify v with -v
    out = np.zeros(bound + 1, dtype=object)
    if bound < 1:
        return out
    mu = mobius_sieve(bound)
    shell = [0] + [(2 * k + 1) ** (n + 1) - (2 * k - 1) ** (n + 1) for k in range(1, bound + 1)]
    for d in range(1, bound + 1):
        if mu[d]:
            md = int(mu[d])
            for k in range(1, bound // d + 1):
                out[d * k] += md * shell[k]
    return out // 2


# ---------------------------------------------------------------------------
# the cubic surface xyz = u^3

_SPLITS: dict[int, list[tuple[int, int, int]]] = {}


def _splits(e: int) -> list[tuple[int, int, int]]:
    """Exponent triples (a, b, c), a + b + c = 3e, with one of them zero."""
    if e not in _SPLITS:
        n = 3 * e
        _SPLITS[e] = [(a, b, n - a - b) for a in range(n + 1) for b in range(n + 1 - a)
                      if min(a, b, n - a - b) == 0]
    return _SPLITS[e]


def _cubic_triples(u: int, bound: int, spf: np.ndarray):
    """Positive primitive triples with xyz = u^3 and max <= B."""
    fac = _factor(u, spf)
    stack = [(0, 1, 1, 1)]
    while stack:
        i, x, y, z = stack.pop()
        if i == len(fac):
            yield x, y, z
            continue
        p, e = fac[i]
        for a, b, c in _splits(e):
            xa, yb, zc = x * p ** a, y * p ** b, z * p ** c
            if xa <= bound and yb <= bound and zc <= bound:
                stack.append((i + 1, xa, yb, zc))


def _cubic_histogram_chunk(args) -> np.ndarray:
    lo, hi, bound = args
    spf = smallest_prime_factors(bound)
    hist = np.zeros(bound + 1, dtype=np.int64)
    for u in range(lo, hi):
        for x, y, z in _cubic_triples(u, bound, spf):
            hist[max(x, y, z)] += 1
    return hist


def cubic_surface_heights(bound: int, workers: int = 1) -> np.ndarray:
    """``out[h]`` = number of torus points of xyz = u^3 of height exactly h."""
    if bound < 1:
        return np.zeros(1, dtype=np.int64)
    if workers <= 1:
        hist = _cubic_histogram_chunk((1, bound + 1, bound))
    else:
        edges = np.linspace(1, bound + 1, 4 * workers + 1).astype(int)
        tasks = [(int(a), int(b), bound) for a, b in zip(edges, edges[1:]) if b > a]
        with ProcessPoolExecutor(workers) as ex:
            hist = reduce(np.add, ex.map(_cubic_histogram_chunk, tasks))
    # four sign patterns with xyz > 0
    return 4 * hist


def enumerate_cubic_surface_torus(bound: int, workers: int = 1) -> int:
    """Primitive (x, y, z, u), u > 0, xyz = u^3, max(|x|,|y|,|z|) <= B."""
    return int(cubic_surface_heights(bound, workers).sum())


def cubic_surface_points(bound: int) -> Iterable[tuple[int, int, int, int]]:
    spf = smallest_prime_factors(max(bound, 1))
    for u in range(1, bound + 1):
        for x, y, z in _cubic_triples(u, bound, spf):
            for sx, sy in product((1, -1), repeat=2):
                yield sx * x, sy * y, sx * sy * z, u


# ---------------------------------------------------------------------------
# P(1, 1, m)

def _root_floor(bound, m: int) -> int:
    """floor(B^(m/(m+2))) for a positive integer or Fraction B."""
    b = Fraction(bound)
    # largest K with K^(m+2) <= B^m
    num, den = b.numerator ** m, b.denominator ** m
    k, _ = integer_nthroot(num // den, m + 2)
    while (k + 1) ** (m + 2) * den <= num:
        k += 1
    while k ** (m + 2) * den > num:
        k -= 1
    return k


def _smooth_parts(primes: Sequence[int], max_exp: int) -> list[int]:
    out = [1]
    for p in primes:
        out = [h * p ** e for h in out for e in range(max_exp + 1)]
    return out


def _coprime_count(k: int, primes: Sequence[int]) -> int:
    """#{1 <= j <= k : gcd(j, prod primes) = 1}."""
    total = 0
    for r in range(len(primes) + 1):
        for sub in combinations(primes, r):
            d = reduce(lambda a, b: a * b, sub, 1)
            total += (-1) ** r * (k // d)
    return total


def _weighted_admissible(m: int, bound, x0: int, x1: int, h: int) -> bool:
    """max(|x0|,|x1|)^m <= h B^(m/(m+2)), compared after raising to m+2."""
    b = Fraction(bound)
    top = max(abs(x0), abs(x1)) ** (m * (m + 2))
    return top * b.denominator ** m <= h ** (m + 2) * b.numerator ** m


def enumerate_weighted_torus(m: int, bound) -> int:
    """Torus points of P(1,1,m) with anticanonical height <= B.

    A normalized point (x0, x1, x2), x0 > 0, has height
    H = (max(|x0|^m, |x1|^m, |x2|) / h)^((m+2)/m) where h is the part of x2
    supported on primes of G = gcd(x0, x1), each exponent at most m - 1.
    Since h <= G^(m-1) <= |x0|^(m-1), H <= B forces |x0|, |x1| <= K and
    x2 = h k with |k| <= K, gcd(k, G) = 1, where K = floor(B^(m/(m+2))).
    """
    if m < 2:
        raise EnumerationError("m must be at least 2")
    if Fraction(bound) < 1:
        return 0
    kmax = _root_floor(bound, m)
    total = 0
    for x0 in range(1, kmax + 1):
        for x1 in range(1, kmax + 1):
            g = gcd(x0, x1)
            primes = primefactors(g)
            free = _coprime_count(kmax, primes)
            for h in _smooth_parts(primes, m - 1):
                if _weighted_admissible(m, bound, x0, x1, h):
                    total += 2 * free
    # x1 < 0 mirrors x1 > 0
    return 2 * total


def weighted_torus_points(m: int, bound) -> Iterable[tuple[int, int, int]]:
    """The normalized representatives counted by ``enumerate_weighted_torus``."""
    kmax = _root_floor(bound, m)
    for x0 in range(1, kmax + 1):
        for x1 in range(-kmax, kmax + 1):
            if x1 == 0:
                continue
            g = gcd(x0, x1)
            primes = primefactors(g)
            for h in _smooth_parts(primes, m - 1):
                if not _weighted_admissible(m, bound, x0, x1, h):
                    continue
                for k in range(-kmax, kmax + 1):
                    if k and gcd(k, g) == 1:
                        yield x0, x1, h * k


# ---------------------------------------------------------------------------
# general oracle

def reduced_fractions(num_bound: int, den_bound: int) -> list[Fraction]:
    return [Fraction(s * a, b) for b in range(1, den_bound + 1) for a in range(1, num_bound + 1)
            if gcd(a, b) == 1 for s in (1, -1)]


def torus_grid_enumerate(model: HeightModel, bound, box) -> int:
    """Count torus points with coordinates a/b, |a| <= A_j, 1 <= b <= D_j.

    ``box`` is one int (A = D = box in every coordinate) or a list of
    (A_j, D_j) pairs.  The caller is responsible for the box containing every
    point of height <= B.
    """
    return sum(1 for _ in torus_grid_points(model, bound, box))


def torus_grid_points(model: HeightModel, bound, box):
    dim = len(model.monomials[0])
    if isinstance(box, int):
        box = [(box, box)] * dim
    axes = [reduced_fractions(a, d) for a, d in box]
    b = HeightValue.of(Fraction(bound))
    for t in product(*axes):
        h = toric_height(TorusPoint(t), model)
        if HeightValue.of(h) <= b:
            yield t, h


# ---------------------------------------------------------------------------
# curves

def curve_from_histogram(hist: np.ndarray, bounds: Sequence[int], model_id: str) -> CountCurve:
    cum = np.cumsum(np.asarray(hist, dtype=object))
    return CountCurve(tuple((b, int(cum[min(b, len(cum) - 1)])) for b in bounds), model_id)


def count_curve(engine: str, bounds: Sequence, *, n: int = 1, m: int = 2,
                workers: int = 1) -> CountCurve:
    bounds = sorted(bounds)
    if not bounds:
        raise EnumerationError("empty bound schedule")
    if engine == "projective":
        return CountCurve(tuple((b, enumerate_projective(n, b)) for b in bounds), f"projective-{n}")
    if engine == "cubic-surface":
        hist = cubic_surface_heights(int(max(bounds)), workers)
        return curve_from_histogram(hist, [int(b) for b in bounds], "cubic-xyz-u3")
    if engine == "weighted":
        return CountCurve(tuple((b, enumerate_weighted_torus(m, b)) for b in bounds), f"weighted-1-1-{m}")
    raise EnumerationError(f"unknown engine {engine!r}")


def geometric_bounds(lo: int, hi: int, count: int) -> list[int]:
    vals = np.unique(np.round(np.geomspace(lo, hi, count)).astype(int))
    return [int(v) for v in vals]


def saturation_ratios(sub: CountCurve, whole: CountCurve) -> list[tuple[int, Fraction | None]]:
    """Pointwise N_sub / N_whole; None marks 0/0."""
    if sub.bounds != whole.bounds:
        raise EnumerationError("curves use different bound schedules")
    out = []
    for (b, ns), (_, nw) in zip(sub.samples, whole.samples):
        if nw == 0:
            if ns:
                raise EnumerationError("sub-curve exceeds the whole curve")
            out.append((b, None))
        else:
            out.append((b, Fraction(ns, nw)))
    return out
