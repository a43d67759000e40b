"""Local densities, the finite Euler product, the archimedean density and
assembly of the leading constant.

Finite factors are kept as exact rationals and multiplied exactly; the
product is turned into a float once, so the result does not depend on the
number of worker threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from sympy import integer_nthroot, primerange

from .cones import DivergenceError
from .toric import Fan, PicardModel, PLFunction, toric_strata_counts

# Rosser-Schoenfeld: pi(x) < 1.25506 x / log x for x > 1
PRIME_COUNT_CONSTANT = 1.25506


class DensityError(ValueError):
    pass


@dataclass(frozen=True)
class RigidComponent:
    id: int
    multiplicity: Fraction
    orbit_size: int = 1

    def __post_init__(self):
        r = Fraction(self.multiplicity)
        if r <= 0:
            raise DensityError(f"rigid multiplicity must be positive, got {r}")
        if self.orbit_size < 1:
            raise DensityError("orbit size must be a positive integer")
        object.__setattr__(self, "multiplicity", r)


@dataclass(frozen=True)
class RigidDivisorData:
    components: tuple[RigidComponent, ...] = ()

    @classmethod
    def from_pairs(cls, pairs) -> RigidDivisorData:
        return cls(tuple(RigidComponent(i, Fraction(r)) for i, r in pairs))

    @property
    def ids(self) -> frozenset:
        return frozenset(c.id for c in self.components)

    def __len__(self):
        return len(self.components)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @property
    def mid(self) -> float:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def scaled(self, k: float) -> Interval:
        a, b = self.lo * k, self.hi * k
        return Interval(min(a, b), max(a, b))


def _widen(lo: float, hi: float, ulps: int = 2) -> Interval:
    for _ in range(ulps):
        lo = math.nextafter(lo, -math.inf)
        hi = math.nextafter(hi, math.inf)
    return Interval(lo, hi)


def _rational_power(q: int, e: Fraction) -> Fraction:
    e = Fraction(e)
    n, exact = integer_nthroot(q, e.denominator)
    if not exact:
        raise DensityError(f"{q}^{e} is irrational; clear denominators in the multiplicities")
    return Fraction(n) ** e.numerator


def denef_density(strata_counts: Mapping, q: int, n: int,
                  rigid: RigidDivisorData = RigidDivisorData()) -> Fraction:
    """Local density from strata point counts.

    ``strata_counts`` maps frozensets of rigid component ids to the number of
    F_q-points of the stratum lying on exactly those components.  Strata
    with no points may be omitted, but the open stratum (key ``frozenset()``)
    is required and every component must appear in some key.
    """
    counts = {frozenset(k): int(v) for k, v in strata_counts.items()}
    ids = rigid.ids
    if frozenset() not in counts:
        raise DensityError("incomplete strata: the open stratum count is missing")
    for key in counts:
        if not key <= ids:
            raise DensityError(f"strata key {sorted(key)} names unknown components")
    for j in ids:
        if not any(j in key for key in counts):
            raise DensityError(f"incomplete strata: no stratum lies on component {j}")
    factor = {}
    for c in rigid.components:
        qb = Fraction(q) ** c.orbit_size
        factor[c.id] = (qb - 1) / (_rational_power(q, c.orbit_size * (c.multiplicity + 1)) - 1)
    total = Fraction(0)
    for key, c_j in counts.items():
        term = Fraction(c_j)
        for j in key:
            term *= factor[j]
        total += term
    return total / Fraction(q) ** n


def convergence_factor(q: int, picard_rank: int) -> Fraction:
    """L_q(1, Pic) for trivial Galois action: (1 - 1/q)^(-rank)."""
    return (1 - Fraction(1, q)) ** (-picard_rank)


@dataclass(frozen=True)
class EulerProductResult:
    truncation_prime: int
    partial_value: float
    tail_bound: float
    factor_table: tuple[tuple[int, Fraction], ...] = field(repr=False)
    exact_partial: Fraction = field(repr=False, default=Fraction(1))
    tail_constant: int = 0
    tail_exponent: float = 0.5

    @property
    def interval(self) -> Interval:
        """Enclosure of the full product: the tail bounds |log(tail)|."""
        return _widen(self.partial_value * math.exp(-self.tail_bound),
                      self.partial_value * math.exp(self.tail_bound))


def tail_log_bound(big_p: int, c: float, eps: float) -> float:
    """Bound on sum_{p > P} |log f_p| when |f_p - 1| <= c / p^(1+eps)."""
    if c == 0:
        return 0.0
    if big_p < 3:
        return math.inf
    head = c / big_p ** (1 + eps)
    if head >= 1:
        return math.inf
    s = PRIME_COUNT_CONSTANT * (1 + eps) * big_p ** (-eps) / (eps * math.log(big_p))
    return c * s / (1 - head)


def local_factor(fan: Fan, pm: PicardModel, rigid: RigidDivisorData, p: int) -> Fraction:
    counts = toric_strata_counts(fan, rigid.ids, p)
    d = denef_density(counts, p, fan.dim, rigid)
    return d / convergence_factor(p, pm.rank - len(rigid))


def euler_product(factor, big_p: int, tail_constant: float, eps: float = 0.5,
                  workers: int = 1) -> EulerProductResult:
    """Exact product of ``factor(p)`` over primes p <= P, floated once."""
    if big_p < 2:
        raise DensityError("truncation prime must be at least 2")
    primes = list(primerange(2, big_p + 1))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            factors = list(ex.map(factor, primes))
    else:
        factors = [factor(p) for p in primes]
    num, den = 1, 1
    for f in factors:
        f = Fraction(f)
        num *= f.numerator
        den *= f.denominator
    exact = Fraction(num, den)
    return EulerProductResult(big_p, float(exact), tail_log_bound(big_p, tail_constant, eps),
                              tuple(zip(primes, (Fraction(f) for f in factors))), exact,
                              tail_constant, eps)


def tau_finite(fan: Fan, pm: PicardModel, rigid: RigidDivisorData = RigidDivisorData(),
               big_p: int = 10_000, workers: int = 1) -> EulerProductResult:
    """Euler product of (1 - 1/p)^(rank - l) d_p over p <= P with a tail bound.

    Each factor satisfies |f_p - 1| <= C / p^(1+eps) with C = rank^2 + 2 rank
    and eps = min(1/2, r_j); the tail bound follows from that and an explicit
    prime counting estimate.
    """
    eps = min([0.5] + [float(x.multiplicity) for x in rigid.components])
    return euler_product(lambda p: local_factor(fan, pm, rigid, p), big_p,
                         pm.rank ** 2 + 2 * pm.rank, eps, workers)


def tau_archimedean(fan: Fan, phi: PLFunction) -> Fraction:
    """2^dim * integral of exp(-phi) over N_R, exactly.

    On a simplicial cone spanned by rays of determinant d the integral is
    d / prod phi(e_rho).
    """
    for i, v in enumerate(phi.ray_values):
        if v <= 0:
            raise DivergenceError(f"phi(e_{i})", v)
    total = Fraction(0)
    for c in fan.cones:
        term = Fraction(fan.cone_det(c))
        for i in c:
            term /= phi.ray_values[i]
        total += term
    return 2 ** fan.dim * total


def compute_delta(split: bool = True) -> int:
    if not split:
        raise DensityError("non-split Galois module out of scope")
    return 1


def assemble_constant(alpha, beta: int, gamma, delta: int, tau_fin, tau_inf) -> Interval:
    """Enclosure of gamma * delta * tau / (alpha * (beta - 1)!)."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise DensityError("alpha must be positive")
    if beta < 1:
        raise DensityError("beta must be at least 1")
    if isinstance(tau_fin, EulerProductResult):
        part, tail = tau_fin.exact_partial, tau_fin.tail_bound
    else:
        part, tail = Fraction(tau_fin), 0.0
    if isinstance(tau_inf, Interval):
        inf_lo, inf_hi = tau_inf.lo, tau_inf.hi
        base = Fraction(gamma) * delta * part / (alpha * math.factorial(beta - 1))
        lo, hi = float(base) * inf_lo, float(base) * inf_hi
    else:
        lo = hi = float(Fraction(gamma) * delta * part * Fraction(tau_inf)
                        / (alpha * math.factorial(beta - 1)))
    if math.isinf(tail):
        return Interval(0.0, math.inf)
    return _widen(lo * math.exp(-tail), hi * math.exp(tail), ulps=4)
