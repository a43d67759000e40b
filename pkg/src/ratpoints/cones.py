"""Exact rational linear algebra and rational polyhedral cones.

Cones live in coordinates of a fixed lattice basis, so the ambient lattice is
always ``Z^d`` and the dual lattice is ``Z^d`` in dual coordinates.  Every
cone carries both a generator (V-) and a facet (H-) description.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd, lcm
from typing import Iterable, Sequence

Vector = tuple[int, ...]


class ConeError(ValueError):
    pass


class DivergenceError(ConeError):
    """Raised when an X-function argument leaves the open cone."""

    def __init__(self, form, value):
        self.form = tuple(form)
        self.value = value
        super().__init__(
            f"pole/divergence: linear form {self.form} takes value {value} <= 0")


# ---------------------------------------------------------------------------
# exact linear algebra over Q

def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def _rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(_rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : row . x = 0 for every row}``."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def det(rows: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("det of a non-square matrix")
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return d


def solve(a: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve the square system ``a x = b`` exactly."""
    n = len(a)
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    red, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise ConeError("singular system")
    return [red[i][n] for i in range(n)]


def primitive(v: Iterable) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    v = [Fraction(x) for x in v]
    den = reduce(lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    g = reduce(gcd, ints, 0)
    if g == 0:
        raise ConeError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# cones

@dataclass(frozen=True)
class SimplicialPiece:
    rays: tuple[Vector, ...]
    lattice_determinant: int

    def __post_init__(self):
        d = abs(det(self.rays))
        if d == 0:
            raise ConeError("simplicial piece with dependent rays")
        if d != self.lattice_determinant:
            raise ConeError("lattice determinant does not match the rays")


@dataclass(frozen=True)
class RationalCone:
    """A finitely generated rational cone with V- and H-descriptions.

    ``facets`` are primitive inner normals ``u`` with ``<u, x> >= 0`` on the
    cone; ``equations`` are primitive forms vanishing on the linear span.
    """

    ambient_dim: int
    generators: tuple[Vector, ...]
    facets: tuple[Vector, ...] = field(default=())
    equations: tuple[Vector, ...] = field(default=())

    def __post_init__(self):
        for g in self.generators:
            if len(g) != self.ambient_dim:
                raise ConeError(f"generator {g} has wrong length")
            if any(dot(u, g) < 0 for u in self.facets) or any(dot(w, g) for w in self.equations):
                raise ConeError(f"generator {g} violates the facet description")

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence], ambient_dim: int | None = None) -> RationalCone:
        gens = [tuple(g) for g in gens]
        if ambient_dim is None:
            if not gens:
                raise ConeError("ambient dimension needed for an empty generator list")
            ambient_dim = len(gens[0])
        prim = []
        for g in gens:
            if any(x != 0 for x in g):
                p = primitive(g)
                if p not in prim:
                    prim.append(p)
        facets, equations = _facets_of(prim, ambient_dim)
        return cls(ambient_dim, tuple(prim), facets, equations)

    # -- basic queries ------------------------------------------------------
    @property
    def dim(self) -> int:
        return rank(self.generators) if self.generators else 0

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    @property
    def lineality_dim(self) -> int:
        if not self.generators:
            return 0
        forms = list(self.facets) + list(self.equations)
        return len(nullspace(forms, self.ambient_dim)) if forms else self.ambient_dim

    @property
    def is_pointed(self) -> bool:
        return self.lineality_dim == 0

    def contains(self, x: Sequence) -> bool:
        return all(dot(u, x) >= 0 for u in self.facets) and not any(dot(w, x) for w in self.equations)

    def contains_in_interior(self, x: Sequence) -> bool:
        """Relative interior membership."""
        return all(dot(u, x) > 0 for u in self.facets) and not any(dot(w, x) for w in self.equations)

    def same_set(self, other: RationalCone) -> bool:
        return (self.ambient_dim == other.ambient_dim
                and all(other.contains(g) for g in self.generators)
                and all(self.contains(g) for g in other.generators))

    @property
    def rays(self) -> tuple[Vector, ...]:
        """Extreme rays of a pointed cone, in generator order."""
        if not self.is_pointed:
            raise ConeError("extreme rays requested for a non-pointed cone")
        eqs = list(self.equations)
        out = []
        for g in self.generators:
            tight = [u for u in self.facets if dot(u, g) == 0]
            if rank(tight + eqs) == self.ambient_dim - 1:
                out.append(g)
        return tuple(out)

    def face_dimension(self, x: Sequence) -> int:
        """Dimension of the smallest face containing ``x``."""
        if not self.contains(x):
            raise ConeError(f"{tuple(x)} is not in the cone")
        tight = [u for u in self.facets if dot(u, x) == 0]
        on_face = [g for g in self.generators if all(dot(u, g) == 0 for u in tight)]
        return rank(on_face) if on_face else 0


def _facets_of(gens: list[Vector], d: int) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
    if d < 1:
        raise ConeError("ambient dimension must be positive")
    if not gens:
        eqs = tuple(tuple(int(i == j) for j in range(d)) for i in range(d))
        return (), eqs
    perp = [primitive(v) for v in nullspace(gens, d)]
    k = d - len(perp)
    facets: list[Vector] = []
    for subset in combinations(range(len(gens)), k - 1):
        rows = [gens[i] for i in subset]
        if rows and rank(rows) < k - 1:
            continue
        ns = nullspace(rows + perp, d)
        if len(ns) != 1:
            continue
        u = primitive(ns[0])
        vals = [dot(u, g) for g in gens]
        if all(v >= 0 for v in vals):
            cand = u
        elif all(v <= 0 for v in vals):
            cand = tuple(-x for x in u)
        else:
            continue
        if cand not in facets:
            facets.append(cand)
    return tuple(facets), tuple(perp)


def dual_cone(c: RationalCone) -> RationalCone:
    """``{y : <y, x> >= 0 for all x in c}``."""
    if c.ambient_dim < 1:
        raise ConeError("dual of a cone in a zero-dimensional space")
    if c.generators and c.is_full_dimensional and c.is_pointed:
        # facets and extreme rays swap roles; no enumeration needed
        return RationalCone(c.ambient_dim, tuple(c.facets), tuple(primitive(r) for r in c.rays))
    gens = list(c.facets)
    for w in c.equations:
        gens.append(w)
        gens.append(tuple(-x for x in w))
    return RationalCone.from_generators(gens, c.ambient_dim)


def orthant(d: int) -> RationalCone:
    return RationalCone.from_generators([tuple(int(i == j) for j in range(d)) for i in range(d)])


def triangulate(c: RationalCone, order: Sequence[int] | None = None,
                use_all_generators: bool = False) -> list[SimplicialPiece]:
    """Placing triangulation of a pointed full-dimensional cone.

    Extreme rays are inserted in ``order`` (default: generator order); each new
    ray is coned over the boundary facets of the current union that it sees.
    With ``use_all_generators`` the non-extreme generators are placed too, so
    they may appear as rays of pieces.
    """
    if not c.is_full_dimensional:
        raise ConeError("triangulation needs a full-dimensional cone")
    if not c.is_pointed:
        raise ConeError("triangulation needs a pointed cone")
    rays = list(c.generators if use_all_generators else c.rays)
    d = c.ambient_dim
    idx = list(range(len(rays))) if order is None else list(order)
    if sorted(idx) != list(range(len(rays))):
        raise ConeError("order must be a permutation of the extreme rays")

    start: list[int] = []
    for i in idx:
        if rank([rays[j] for j in start + [i]]) == len(start) + 1:
            start.append(i)
        if len(start) == d:
            break
    simplices = [tuple(start)]
    normals: dict[frozenset, list] = {}
    for i in idx:
        if i in start:
            continue
        counts: dict[frozenset, list] = {}
        for s in simplices:
            for j in s:
                face = frozenset(s) - {j}
                counts.setdefault(face, []).append(j)
        new = []
        for face, opposite in counts.items():
            if len(opposite) != 1:
                continue
            if face not in normals:
                normals[face] = nullspace([rays[k] for k in face], d)[0]
            u = normals[face]
            if dot(u, rays[opposite[0]]) < 0:
                u = [-x for x in u]
            if dot(u, rays[i]) < 0:
                new.append(tuple(sorted(face)) + (i,))
        simplices.extend(new)

    pieces = []
    for s in simplices:
        rs = tuple(rays[j] for j in s)
        pieces.append(SimplicialPiece(rs, int(abs(det(rs)))))
    return pieces


def x_function(c: RationalCone, s: Sequence, order: Sequence[int] | None = None) -> Fraction:
    """``X_c(s) = integral over the dual cone of exp(-<s, y>) dy``.

    The measure is normalised by the dual lattice, so each simplicial piece of
    the dual contributes ``|det| / prod <s, ray>``.
    """
    s = [Fraction(x) for x in s]
    if len(s) != c.ambient_dim:
        raise ConeError("argument has the wrong dimension")
    for u in c.facets:
        val = dot(u, s)
        if val <= 0:
            raise DivergenceError(u, val)
    if c.equations:
        raise ConeError("X-function of a lower-dimensional cone diverges")
    dual = dual_cone(c)
    total = Fraction(0)
    for piece in triangulate(dual, order):
        denom = Fraction(1)
        for r in piece.rays:
            denom *= dot(r, s)
        total += piece.lattice_determinant / denom
    return total


def min_shift(effective: RationalCone, l_class: Sequence, k_class: Sequence) -> Fraction:
    """Exact ``inf { t : t*l + k in effective }`` for ``l`` interior."""
    if not effective.is_full_dimensional:
        raise ConeError("min_shift needs a full-dimensional cone")
    best = None
    for u in effective.facets:
        ul = dot(u, l_class)
        if ul <= 0:
            raise ConeError(f"L not interior: facet {u} gives {ul}")
        t = Fraction(-dot(u, k_class)) / ul
        if best is None or t > best:
            best = t
    if best is None:
        raise ConeError("cone has no facets; the infimum is -infinity")
    return best
