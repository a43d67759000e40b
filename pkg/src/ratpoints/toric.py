"""Split toric data: fans, piecewise-linear functions, Picard lattices and the
invariants alpha, beta, gamma computed from them.

Sign convention: a PL function takes value ``ray_values[i]`` on ray ``i`` and
is the linear form ``cone_forms[sigma]`` on each maximal cone.  Convexity means
``phi = max_sigma <m_sigma, .>``, i.e. ``<m_sigma, e_rho> <= phi(e_rho)``; this
is the convention under which the local toric height is
``max_sigma |t^{m_sigma}|_v``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain, combinations
from math import gcd
from typing import Iterable, Sequence

from .cones import (ConeError, RationalCone, det, dot, min_shift, primitive,
                    rank, solve, x_function)

Vector = tuple[int, ...]


class FanError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[Vector, ...]
    cones: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.dim < 1:
            raise FanError("fan dimension must be positive")
        for r in self.rays:
            if len(r) != self.dim:
                raise FanError(f"ray {r} has wrong length")
            if primitive(r) != tuple(r):
                raise FanError(f"ray {r} is not primitive")
        if len(set(self.rays)) != len(self.rays):
            raise FanError("rays must be pairwise distinct")
        for c in self.cones:
            if any(i < 0 or i >= len(self.rays) for i in c):
                raise FanError(f"cone {c} refers to a missing ray")
            if rank([self.rays[i] for i in c]) != len(c):
                raise FanError(f"cone {c} is not simplicial")

    @classmethod
    def from_dict(cls, data: dict) -> Fan:
        return cls(int(data["dim"]),
                   tuple(tuple(int(x) for x in r) for r in data["rays"]),
                   tuple(tuple(sorted(int(i) for i in c)) for c in data["max_cones"]))

    def to_dict(self) -> dict:
        return {"dim": self.dim, "rays": [list(r) for r in self.rays],
                "max_cones": [list(c) for c in self.cones]}

    # -- structure -----------------------------------------------------------
    def cone_det(self, cone: Sequence[int]) -> int:
        return abs(int(det([self.rays[i] for i in cone])))

    @property
    def is_smooth(self) -> bool:
        return all(len(c) == self.dim and self.cone_det(c) == 1 for c in self.cones)

    def all_cones(self) -> list[frozenset]:
        """Every face of every maximal cone, the zero cone included."""
        faces = set()
        for c in self.cones:
            for k in range(len(c) + 1):
                faces.update(frozenset(s) for s in combinations(c, k))
        return sorted(faces, key=lambda f: (len(f), sorted(f)))

    def is_cone(self, rays: Iterable[int]) -> bool:
        j = set(rays)
        return any(j <= set(c) for c in self.cones)

    def locate(self, v: Sequence) -> tuple[int, ...] | None:
        """A maximal cone containing ``v`` (full-dimensional cones only)."""
        for c in self.cones:
            if len(c) != self.dim:
                continue
            coeffs = solve([[self.rays[i][k] for i in c] for k in range(self.dim)], list(v))
            if all(x >= 0 for x in coeffs):
                return c
        return None

    def is_complete(self, samples: int = 64, seed: int = 0) -> bool:
        if any(len(c) != self.dim for c in self.cones):
            return False
        walls: dict[frozenset, int] = {}
        for c in self.cones:
            for w in combinations(c, self.dim - 1):
                walls[frozenset(w)] = walls.get(frozenset(w), 0) + 1
        if any(n != 2 for n in walls.values()):
            return False
        rng = random.Random(seed)
        for _ in range(samples):
            v = [Fraction(rng.randint(-97, 97), rng.randint(1, 13)) for _ in range(self.dim)]
            if all(x == 0 for x in v):
                continue
            if self.locate(v) is None:
                return False
        return True


# ---------------------------------------------------------------------------
# standard fans

def projective_space_fan(n: int) -> Fan:
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    return Fan(n, tuple(rays), tuple(combinations(range(n + 1), n)))


def hirzebruch_fan(m: int) -> Fan:
    return Fan(2, ((1, 0), (0, 1), (-1, m), (0, -1)), ((0, 1), (1, 2), (2, 3), (0, 3)))


def cubic_surface_fan() -> Fan:
    """Fan of the singular cubic surface ``xyz = u^3`` (three A2 cones)."""
    return Fan(2, ((-2, 1), (1, -2), (1, 1)), ((1, 2), (0, 2), (0, 1)))


def _unimodular_sending_to_e1(w: Sequence[int]) -> list[list[int]]:
    n = len(w)
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = list(w)
    while sum(1 for x in v if x) > 1:
        i = min((k for k in range(n) if v[k]), key=lambda k: abs(v[k]))
        for j in range(n):
            if j != i and v[j]:
                q = v[j] // v[i]
                v[j] -= q * v[i]
                u[j] = [a - q * b for a, b in zip(u[j], u[i])]
    i = next(k for k in range(n) if v[k])
    if abs(v[i]) != 1:
        raise FanError("weights must be coprime")
    u[0], u[i] = u[i], u[0]
    v[0], v[i] = v[i], v[0]
    if v[0] < 0:
        u[0] = [-a for a in u[0]]
    return u


def weighted_projective_fan(weights: Sequence[int]) -> Fan:
    """Fan of ``P(w_0, ..., w_n)``: rays ``v_i`` with ``sum w_i v_i = 0``."""
    w = [int(x) for x in weights]
    if len(w) < 2 or any(x < 1 for x in w):
        raise FanError("weights must be positive, at least two of them")
    u = _unimodular_sending_to_e1(w)
    n = len(w) - 1
    rays = tuple(tuple(u[r][i] for r in range(1, n + 1)) for i in range(n + 1))
    return Fan(n, rays, tuple(combinations(range(n + 1), n)))


def product_fan(f1: Fan, f2: Fan) -> Fan:
    z1, z2 = (0,) * f1.dim, (0,) * f2.dim
    rays = tuple(r + z2 for r in f1.rays) + tuple(z1 + r for r in f2.rays)
    off = len(f1.rays)
    cones = tuple(tuple(c1) + tuple(off + i for i in c2) for c1 in f1.cones for c2 in f2.cones)
    return Fan(f1.dim + f2.dim, rays, cones)


# ---------------------------------------------------------------------------
# PL functions

@dataclass(frozen=True)
class PLFunction:
    fan: Fan
    ray_values: tuple[Fraction, ...]
    cone_forms: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        vals = tuple(Fraction(x) for x in self.ray_values)
        object.__setattr__(self, "ray_values", vals)
        if len(vals) != len(self.fan.rays):
            raise FanError("one value per ray required")
        if not self.cone_forms:
            forms = {}
            for c in self.fan.cones:
                if len(c) != self.fan.dim:
                    raise FanError("PL forms need full-dimensional maximal cones")
                forms[c] = tuple(solve([self.fan.rays[i] for i in c], [vals[i] for i in c]))
            object.__setattr__(self, "cone_forms", forms)

    @classmethod
    def from_dict(cls, fan: Fan, data: dict) -> PLFunction:
        return cls(fan, tuple(Fraction(x) for x in data["ray_values"]))

    def to_dict(self) -> dict:
        return {"ray_values": [str(v) for v in self.ray_values]}

    def __call__(self, v: Sequence) -> Fraction:
        c = self.fan.locate(v)
        if c is None:
            raise FanError(f"{tuple(v)} is outside the support of the fan")
        return dot(self.cone_forms[c], v)

    def forms(self) -> list[tuple[Fraction, ...]]:
        out = []
        for m in self.cone_forms.values():
            if m not in out:
                out.append(m)
        return out

    def is_convex(self) -> bool:
        return all(dot(m, r) <= a for m in self.cone_forms.values()
                   for r, a in zip(self.fan.rays, self.ray_values))

    def is_strictly_convex(self) -> bool:
        for c, m in self.cone_forms.items():
            for i, (r, a) in enumerate(zip(self.fan.rays, self.ray_values)):
                if i not in c and not dot(m, r) < a:
                    return False
        return self.is_convex()


def anticanonical_pl(fan: Fan) -> PLFunction:
    return PLFunction(fan, tuple(Fraction(1) for _ in fan.rays))


def pullback_pl(phi: PLFunction, finer: Fan) -> PLFunction:
    """Restrict ``phi`` to a refinement of its fan."""
    return PLFunction(finer, tuple(phi(r) for r in finer.rays))


# ---------------------------------------------------------------------------
# resolution of toric surfaces

def _boundary_points(v1: Vector, v2: Vector) -> list[Vector]:
    """Lattice points strictly between v1 and v2 on the compact boundary of
    conv(cone(v1, v2) & Z^2 minus 0), ordered from v1 to v2."""
    d = det([v1, v2])
    bound = abs(v1[0]) + abs(v2[0]) + abs(v1[1]) + abs(v2[1])
    pts = []
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            if (x, y) == (0, 0):
                continue
            # coordinates (a, b) with (x, y) = a v1 + b v2
            a = Fraction(x * v2[1] - y * v2[0]) / d
            b = Fraction(v1[0] * y - v1[1] * x) / d
            if 0 <= a <= 1 and 0 <= b <= 1:
                pts.append(((a, b), (x, y)))
    pts.sort(key=lambda p: (p[0][1] / (p[0][0] + p[0][1]), p[0][0] + p[0][1]))
    # keep, per direction, only the point closest to the origin
    chain_in: list = []
    for p in pts:
        if chain_in and chain_in[-1][0][1] * (p[0][0] + p[0][1]) == p[0][1] * (chain_in[-1][0][0] + chain_in[-1][0][1]):
            continue
        chain_in.append(p)
    hull: list = []
    for p in chain_in:
        while len(hull) >= 2:
            (a0, b0), (a1, b1), (a2, b2) = hull[-2][0], hull[-1][0], p[0]
            cross = (a1 - a0) * (b2 - b1) - (b1 - b0) * (a2 - a1)
            if cross > 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return [q for _, q in hull[1:-1]]


def resolve_fan_2d(fan: Fan) -> Fan:
    """Minimal resolution of a complete toric surface fan.

    Each singular cone is subdivided by the lattice points on the compact
    boundary of the convex hull of its nonzero lattice points.
    """
    if fan.dim != 2:
        raise FanError("resolve_fan_2d handles dimension 2 only")
    if not fan.is_complete():
        raise FanError("fan is not complete")
    rays = list(fan.rays)
    cones = []
    for c in fan.cones:
        if fan.cone_det(c) == 1:
            cones.append(tuple(c))
            continue
        i, j = c
        chain_ids = [i]
        for p in _boundary_points(fan.rays[i], fan.rays[j]):
            if p not in rays:
                rays.append(p)
            chain_ids.append(rays.index(p))
        chain_ids.append(j)
        cones.extend(tuple(sorted(pair)) for pair in zip(chain_ids, chain_ids[1:]))
    out = Fan(2, tuple(rays), tuple(cones))
    if not out.is_smooth:
        raise FanError("resolution failed to produce a smooth fan")
    return out


# ---------------------------------------------------------------------------
# Picard lattice and invariants

@dataclass(frozen=True)
class PicardModel:
    fan: Fan
    rank: int
    divisor_classes: tuple[tuple[int, ...], ...]
    canonical_class: tuple[int, ...]
    effective_cone: RationalCone
    basis_rays: tuple[int, ...]

    def class_of(self, coeffs: Sequence) -> tuple[Fraction, ...]:
        """Class of the divisor ``sum coeffs[i] D_i``."""
        if len(coeffs) != len(self.divisor_classes):
            raise FanError("one coefficient per ray required")
        return tuple(sum((Fraction(a) * c[k] for a, c in zip(coeffs, self.divisor_classes)), Fraction(0))
                     for k in range(self.rank))

    def class_of_pl(self, phi: PLFunction) -> tuple[Fraction, ...]:
        return self.class_of(phi.ray_values)


def build_picard(fan: Fan) -> PicardModel:
    """Classes of boundary divisors in a Z-basis of Pic.

    For a smooth cone sigma the divisors off sigma form a basis; a divisor on
    sigma is rewritten through the relation given by the dual basis vector.
    """
    if not fan.is_smooth:
        raise FanError("fan is not smooth; resolve it first (resolve_fan_2d in dimension 2)")
    if not fan.is_complete():
        raise FanError("fan is not complete")
    sigma = fan.cones[0]
    others = tuple(i for i in range(len(fan.rays)) if i not in sigma)
    r = len(others)
    classes: list = [None] * len(fan.rays)
    for k, i in enumerate(others):
        classes[i] = tuple(int(j == k) for j in range(r))
    basis = [fan.rays[i] for i in sigma]
    for k, i in enumerate(sigma):
        target = [int(j == k) for j in range(fan.dim)]
        m = solve(basis, target)     # <m, e_sigma_j> = delta_jk
        classes[i] = tuple(int(-dot(m, fan.rays[o])) for o in others)
    canonical = tuple(-sum(c[k] for c in classes) for k in range(r))
    eff = RationalCone.from_generators(classes, r) if r else None
    return PicardModel(fan, r, tuple(classes), canonical, eff, others)


def compute_alpha(pm: PicardModel, l_class: Sequence) -> Fraction:
    return min_shift(pm.effective_cone, l_class, pm.canonical_class)


def adjoint_class(pm: PicardModel, l_class: Sequence) -> tuple[Fraction, ...]:
    """``alpha * L + K``, the class of the rigid part."""
    a = compute_alpha(pm, l_class)
    return tuple(a * Fraction(x) + k for x, k in zip(l_class, pm.canonical_class))


def rigid_component_count(pm: PicardModel, l_class: Sequence) -> int:
    """Dimension of the face of the effective cone spanned by ``alpha L + K``."""
    return pm.effective_cone.face_dimension(adjoint_class(pm, l_class))


def compute_beta(pm: PicardModel, rigid_components: int = 0) -> int:
    if rigid_components < 0 or rigid_components > pm.rank:
        raise FanError(f"rigid component count must lie in [0, {pm.rank}]")
    return pm.rank - rigid_components


def compute_gamma(pm: PicardModel, l_class: Sequence | None = None,
                  quotient: Sequence[Sequence[int]] | None = None) -> Fraction:
    """X-function of the effective cone at the anticanonical class.

    With rigid components present the caller supplies ``quotient``, an integer
    matrix onto the quotient lattice, and the image cone is used.
    """
    minus_k = [-k for k in pm.canonical_class]
    if quotient is None:
        if l_class is not None and rigid_component_count(pm, l_class):
            raise FanError("L has rigid components; supply quotient lattice data")
        return x_function(pm.effective_cone, minus_k)
    q = [list(row) for row in quotient]
    image = RationalCone.from_generators([[dot(row, c) for row in q] for c in pm.divisor_classes], len(q))
    return x_function(image, [dot(row, minus_k) for row in q])


# ---------------------------------------------------------------------------
# strata over finite fields

@dataclass(frozen=True)
class StrataDescriptor:
    ray_subset: frozenset
    orbit_dimension: int
    exists: bool


def describe_stratum(fan: Fan, j: Iterable[int]) -> StrataDescriptor:
    j = frozenset(j)
    if any(i < 0 or i >= len(fan.rays) for i in j):
        raise FanError(f"invalid ray indices {sorted(j)}")
    exists = fan.is_cone(j)
    return StrataDescriptor(j, fan.dim - len(j) if exists else -1, exists)


def strata_count(fan: Fan, j: Iterable[int], q: int) -> int:
    """Points over F_q of the torus orbit attached to the ray set ``j``."""
    if q < 2:
        raise ValueError("q must be at least 2")
    s = describe_stratum(fan, j)
    return (q - 1) ** s.orbit_dimension if s.exists else 0


def count_points_mod_q(fan: Fan, q: int) -> int:
    return sum((q - 1) ** (fan.dim - len(c)) for c in fan.all_cones())


def toric_strata_counts(fan: Fan, rigid_rays: Iterable[int], q: int) -> dict[frozenset, int]:
    """``c_J`` for subsets J of the rigid boundary divisors.

    ``D_J°`` is the union of the torus orbits whose cone meets the rigid rays
    exactly in J.
    """
    rigid = frozenset(rigid_rays)
    counts: dict[frozenset, int] = {}
    for c in fan.all_cones():
        key = c & rigid
        counts[key] = counts.get(key, 0) + (q - 1) ** (fan.dim - len(c))
    return counts


def polarization_from_rays(fan: Fan, coeffs: Sequence) -> PLFunction:
    return PLFunction(fan, tuple(Fraction(x) for x in coeffs))


__all__ = [n for n in dir() if not n.startswith("_")]
