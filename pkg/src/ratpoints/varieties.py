"""Variety descriptions: JSON parsing and the built-in models."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .toric import (Fan, PLFunction, cubic_surface_fan, projective_space_fan,
                    weighted_projective_fan)

VARIETY_SCHEMA = "ratpoints.variety/1"


@dataclass(frozen=True)
class Variety:
    name: str
    kind: str
    fan: Fan
    polarization: PLFunction
    n: int | None = None
    weights: tuple[int, ...] = ()

    @property
    def default_engine(self) -> str:
        if self.kind == "projective":
            return "projective"
        if self.kind == "weighted" and len(self.weights) == 3 and self.weights[:2] == (1, 1):
            return "weighted"
        if self.fan == cubic_surface_fan() and all(v == 1 for v in self.polarization.ray_values):
            return "cubic-surface"
        return "torus-grid"

    def to_dict(self) -> dict:
        d = {"schema": VARIETY_SCHEMA, "name": self.name, "kind": self.kind}
        if self.kind == "projective":
            d["n"] = self.n
        elif self.kind == "weighted":
            d["weights"] = list(self.weights)
        else:
            d["fan"] = self.fan.to_dict()
            d["polarization"] = self.polarization.to_dict()
        return d


def projective_variety(n: int) -> Variety:
    """P^n with O(1), whose toric height is the standard height."""
    fan = projective_space_fan(n)
    vals = [0] * n + [1]
    return Variety(f"P{n}", "projective", fan, PLFunction(fan, tuple(vals)), n=n)


def weighted_variety(weights) -> Variety:
    """P(w) polarized by its anticanonical class."""
    w = tuple(int(x) for x in weights)
    fan = weighted_projective_fan(w)
    name = "P(" + ",".join(map(str, w)) + ")"
    return Variety(name, "weighted", fan, PLFunction(fan, (1,) * len(fan.rays)), weights=w)


def toric_variety(fan: Fan, ray_values=None, name: str = "toric") -> Variety:
    vals = ray_values if ray_values is not None else (1,) * len(fan.rays)
    return Variety(name, "toric", fan, PLFunction(fan, tuple(Fraction(v) for v in vals)))


def cubic_surface_variety() -> Variety:
    return toric_variety(cubic_surface_fan(), name="xyz=u^3")


def parse_variety(d: dict) -> Variety:
    schema = d.get("schema", VARIETY_SCHEMA)
    if schema != VARIETY_SCHEMA:
        raise ValueError(f"unsupported variety schema {schema!r}")
    kind = d.get("kind", "toric")
    if kind == "projective":
        return projective_variety(int(d["n"]))
    if kind == "weighted":
        return weighted_variety(d["weights"])
    if kind == "toric":
        fan = Fan.from_dict(d["fan"])
        pol = d.get("polarization")
        vals = [Fraction(v) for v in pol["ray_values"]] if pol else None
        return toric_variety(fan, vals, d.get("name", "toric"))
    raise ValueError(f"unknown variety kind {kind!r}")


def load_variety(arg: str) -> Variety:
    """A JSON file path or an inline shorthand: ``projective:2``,
    ``weighted:1,1,3`` or ``cubic``."""
    if arg == "cubic":
        return cubic_surface_variety()
    if arg.startswith("projective:"):
        return projective_variety(int(arg.split(":", 1)[1]))
    if arg.startswith("weighted:"):
        return weighted_variety(int(x) for x in arg.split(":", 1)[1].split(","))
    return parse_variety(json.loads(Path(arg).read_text()))
