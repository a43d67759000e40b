"""Exact global heights.

Every height here is a product over all places of a max of absolute values.
For rationals r_1..r_k this product has a closed form: clear denominators so
that the r_k become coprime integers a_k, and the finite places then
contribute exactly 1/gcd while the real place contributes max |a_k|.
Heights that involve a fractional power are returned as ``HeightValue``
(``power ** (1/root)``) so they can still be compared exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce, total_ordering
from itertools import product
from math import gcd, lcm
from typing import Iterable, Sequence

from sympy import integer_nthroot, primefactors

from .toric import PLFunction


class HeightError(ValueError):
    pass


def adelic_max(values: Iterable) -> Fraction:
    """prod_v max_k |r_k|_v over all places of Q (zeros allowed, not all)."""
    vals = [Fraction(v) for v in values]
    nonzero = [v for v in vals if v]
    if not nonzero:
        raise HeightError("all values are zero")
    den = reduce(lcm, (v.denominator for v in nonzero), 1)
    ints = [abs(v.numerator * (den // v.denominator)) for v in nonzero]
    return Fraction(max(ints), reduce(gcd, ints))


@total_ordering
@dataclass(frozen=True)
class HeightValue:
    """The positive real ``power ** (1/root)``, compared exactly."""
    power: Fraction
    root: int = 1

    def __post_init__(self):
        p = Fraction(self.power)
        if p <= 0 or self.root < 1:
            raise HeightError("height values are positive reals")
        object.__setattr__(self, "power", p)

    @classmethod
    def of(cls, x) -> HeightValue:
        return x if isinstance(x, HeightValue) else cls(Fraction(x))

    def raised(self, k: int) -> Fraction:
        """``self ** k`` when k is a multiple of root."""
        if k % self.root:
            raise HeightError("exponent must be a multiple of the root")
        return self.power ** (k // self.root)

    def simplify(self):
        """A Fraction when the value is rational, otherwise self."""
        for r in range(self.root, 0, -1):
            if self.root % r:
                continue
            n, ok_n = integer_nthroot(self.power.numerator, r)
            d, ok_d = integer_nthroot(self.power.denominator, r)
            if ok_n and ok_d:
                if r == self.root:
                    return Fraction(n, d)
                return HeightValue(Fraction(n, d), self.root // r)
        return self

    def _cmp_pair(self, other):
        o = HeightValue.of(other)
        k = lcm(self.root, o.root)
        return self.raised(k), o.raised(k)

    def __eq__(self, other):
        if not isinstance(other, (HeightValue, int, Fraction)):
            return NotImplemented
        a, b = self._cmp_pair(other)
        return a == b

    def __lt__(self, other):
        a, b = self._cmp_pair(other)
        return a < b

    def __hash__(self):
        s = self.simplify()
        return hash(s) if isinstance(s, Fraction) else hash((s.power, s.root))

    def __float__(self):
        return float(self.power) ** (1.0 / self.root)


def _as_height(power: Fraction, root: int):
    return HeightValue(power, root).simplify()


# ---------------------------------------------------------------------------
# points

@dataclass(frozen=True)
class ProjectivePoint:
    coords: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coords)
        if not any(c):
            raise HeightError("projective point with all coordinates zero")
        g = reduce(gcd, c)
        c = tuple(x // g for x in c)
        if next(x for x in c if x) < 0:
            c = tuple(-x for x in c)
        object.__setattr__(self, "coords", c)


@dataclass(frozen=True)
class TorusPoint:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        c = tuple(Fraction(x) for x in self.coords)
        if any(x == 0 for x in c):
            raise HeightError("torus coordinates must be nonzero")
        object.__setattr__(self, "coords", c)

    def monomial(self, exponents: Sequence) -> Fraction:
        out = Fraction(1)
        for x, e in zip(self.coords, exponents):
            out *= x ** int(e)
        return out


def _reduce_weighted(weights: Sequence[int], coords: Sequence[int]) -> tuple[int, ...]:
    c = list(coords)
    g = reduce(gcd, c)
    # a prime can only be removed if it divides every nonzero coordinate
    for p in primefactors(g):
        while all(x % p ** w == 0 for x, w in zip(c, weights)):
            c = [x // p ** w for x, w in zip(c, weights)]
    for x, w in zip(c, weights):
        if x and w % 2:
            if x < 0:
                c = [-y if wi % 2 else y for y, wi in zip(c, weights)]
            break
    return tuple(c)


@dataclass(frozen=True)
class WeightedPoint:
    """Point of P(w_0..w_n) by integer coordinates, normalized so that no
    prime p has p^(w_i) | x_i for every i; the sign is fixed on the first
    nonzero odd-weight coordinate."""
    weights: tuple[int, ...]
    coords: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        if len(w) != len(self.coords) or any(x < 1 for x in w):
            raise HeightError("weights must be positive, one per coordinate")
        if not any(self.coords):
            raise HeightError("weighted point with all coordinates zero")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "coords", _reduce_weighted(w, [int(x) for x in self.coords]))


# ---------------------------------------------------------------------------
# height models

@dataclass(frozen=True)
class HeightModel:
    kind: str
    monomials: tuple[tuple, ...]
    normalization_degree: Fraction = Fraction(1)
    weights: tuple[int, ...] = ()
    pl: PLFunction | None = field(default=None, compare=False)

    KINDS = ("standard-projective", "toric-pl", "weighted-monomial")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise HeightError(f"unknown height model kind {self.kind!r}")
        if not self.monomials:
            raise HeightError("monomial list is empty")
        object.__setattr__(self, "normalization_degree", Fraction(self.normalization_degree))
        if self.kind == "weighted-monomial":
            degs = {sum(e * w for e, w in zip(m, self.weights)) for m in self.monomials}
            if len(degs) != 1:
                raise HeightError("monomials do not share one weighted degree")

    @property
    def degree(self) -> int:
        return sum(e * w for e, w in zip(self.monomials[0], self.weights))


def toric_model(phi: PLFunction) -> HeightModel:
    if not phi.is_convex():
        raise HeightError("toric heights need a convex PL function; evaluate cone by cone instead")
    return HeightModel("toric-pl", tuple(phi.forms()), Fraction(1), pl=phi)


def weighted_degree(weights: Sequence[int]) -> int:
    """Smallest degree that is a multiple of sum(w) and of every weight."""
    return lcm(sum(weights), reduce(lcm, weights))


def weighted_anticanonical_model(weights: Sequence[int], vertices_only: bool = False) -> HeightModel:
    """Monomials of degree D = lcm(sum w, lcm w), read as (D/sum w)(-K)."""
    w = tuple(int(x) for x in weights)
    d = weighted_degree(w)
    if vertices_only:
        mons = tuple(tuple(d // wi if i == j else 0 for j in range(len(w))) for i, wi in enumerate(w))
    else:
        mons = tuple(e for e in product(*(range(d // wi + 1) for wi in w))
                     if sum(a * b for a, b in zip(e, w)) == d)
    return HeightModel("weighted-monomial", mons, Fraction(d, sum(w)), w)


# ---------------------------------------------------------------------------
# evaluation

def standard_height(p: ProjectivePoint | Sequence[int]) -> Fraction:
    if not isinstance(p, ProjectivePoint):
        p = ProjectivePoint(tuple(p))
    return adelic_max(p.coords)


def toric_height(t: TorusPoint | Sequence, phi: PLFunction | HeightModel):
    """prod_v max_sigma |t^{m_sigma}|_v.

    Integral forms give a Fraction.  Rational forms (a Q-Cartier polarization)
    give the exact real ``HeightValue`` unless it happens to be rational.
    """
    if not isinstance(t, TorusPoint):
        t = TorusPoint(tuple(t))
    model = phi if isinstance(phi, HeightModel) else toric_model(phi)
    if model.kind != "toric-pl":
        raise HeightError("toric_height needs a toric-pl model")
    den = reduce(lcm, (Fraction(x).denominator for m in model.monomials for x in m), 1)
    vals = [t.monomial([Fraction(x) * den for x in m]) for m in model.monomials]
    return _as_height(adelic_max(vals), den)


def weighted_height(p: WeightedPoint, hm: HeightModel):
    """Height of a weighted point in the anticanonical scale of ``hm``."""
    if hm.kind != "weighted-monomial":
        raise HeightError("weighted_height needs a weighted-monomial model")
    if tuple(p.weights) != tuple(hm.weights):
        raise HeightError("point and model weights differ")
    vals = []
    for m in hm.monomials:
        v = 1
        for x, e in zip(p.coords, m):
            v *= x ** e
        vals.append(v)
    nd = hm.normalization_degree
    # H = adelic_max ** (1 / nd) with nd = num/den, so H = (max ** den) ** (1/num)
    return _as_height(adelic_max(vals) ** nd.denominator, nd.numerator)


def weighted_to_torus(p: WeightedPoint, rays: Sequence[Sequence[int]]) -> TorusPoint:
    """Torus coordinates t_j = prod_i x_i^(-(v_i)_j) for a point off the boundary."""
    if any(x == 0 for x in p.coords):
        raise HeightError("point lies on the boundary")
    dim = len(rays[0])
    coords = []
    for j in range(dim):
        t = Fraction(1)
        for x, v in zip(p.coords, rays):
            t *= Fraction(x) ** (-v[j])
        coords.append(t)
    return TorusPoint(tuple(coords))


def cubic_embedding(t: TorusPoint) -> tuple[int, int, int, int]:
    """The primitive quadruple (x, y, z, u), u > 0, on xyz = u^3 for (t1, t2)."""
    t1, t2 = t.coords
    vals = [t1, t2, 1 / (t1 * t2), Fraction(1)]
    den = reduce(lcm, (v.denominator for v in vals), 1)
    ints = [int(v * den) for v in vals]
    g = reduce(gcd, ints)
    return tuple(x // g for x in ints)
