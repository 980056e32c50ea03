"""JSON schemas and constructors for bodies, measures, and stable parameters.

Unknown keys are rejected (additionalProperties: false everywhere); the
schemas are exported so the documentation and the CLI validation cannot
drift apart.  Radial-density measures are available through a small set
of named profiles, since arbitrary callables do not serialise.
"""

import math

import jsonschema

from .errors import DomainError
from .geometry import Ball, Box, DisjointBoxUnion, Interval, Polygon2D
from .levy import FiniteAtomic, IsotropicStable, OneDimStable, RadialDensity
from .stable import IsotropicStableParams, SkewedStableParams

BODY_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "shape": {"const": "interval"},
                "a": {"type": "number"},
                "b": {"type": "number"},
            },
            "required": ["shape", "a", "b"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "shape": {"const": "box"},
                "intervals": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {"type": "number"},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                    "minItems": 1,
                },
            },
            "required": ["shape", "intervals"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "shape": {"const": "ball"},
                "d": {"type": "integer", "minimum": 1},
                "center": {"type": "array", "items": {"type": "number"}},
                "radius": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["shape", "d", "center", "radius"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "shape": {"const": "polygon"},
                "vertices": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {"type": "number"},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                    "minItems": 3,
                },
            },
            "required": ["shape", "vertices"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "shape": {"const": "disjoint_box_union"},
                "boxes": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": {"type": "number"},
                            "minItems": 2,
                            "maxItems": 2,
                        },
                    },
                    "minItems": 1,
                },
            },
            "required": ["shape", "boxes"],
            "additionalProperties": False,
        },
    ]
}

RADIAL_PROFILES = {
    "gaussian": lambda scale: (lambda r: math.exp(-(r / scale) ** 2)),
    "exponential": lambda scale: (lambda r: math.exp(-r / scale)),
}

MEASURE_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "family": {"const": "isotropic_stable"},
                "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 2},
                "d": {"type": "integer", "minimum": 1},
            },
            "required": ["family", "alpha"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "family": {"const": "one_dim_stable"},
                "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 2},
                "beta": {"type": "number", "minimum": -1, "maximum": 1},
            },
            "required": ["family", "alpha"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "family": {"const": "finite_atomic"},
                "d": {"type": "integer", "minimum": 1},
                "atoms": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "location": {
                                "type": "array", "items": {"type": "number"},
                            },
                            "mass": {"type": "number", "exclusiveMinimum": 0},
                        },
                        "required": ["location", "mass"],
                        "additionalProperties": False,
                    },
                    "minItems": 1,
                },
            },
            "required": ["family", "atoms"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "family": {"const": "radial_density"},
                "d": {"type": "integer", "minimum": 1},
                "profile": {"enum": sorted(RADIAL_PROFILES)},
                "scale": {"type": "number", "exclusiveMinimum": 0},
                "cutoff": {"type": "number", "exclusiveMinimum": 0},
            },
            "required": ["family", "d", "profile"],
            "additionalProperties": False,
        },
    ]
}

PARAMS_SCHEMA = {
    "type": "object",
    "properties": {
        "alpha": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 2},
        "beta": {"type": "number", "minimum": -1, "maximum": 1},
        "d": {"type": "integer", "minimum": 1},
    },
    "required": ["alpha"],
    "additionalProperties": False,
}


def _validate(obj, schema, what):
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        raise DomainError(f"invalid {what} spec: {exc.message}") from exc


def body_from_json(obj):
    _validate(obj, BODY_SCHEMA, "body")
    shape = obj["shape"]
    if shape == "interval":
        return Interval(obj["a"], obj["b"])
    if shape == "box":
        return Box(tuple(tuple(iv) for iv in obj["intervals"]))
    if shape == "ball":
        if len(obj["center"]) != obj["d"]:
            raise DomainError("ball center has wrong dimension")
        return Ball(tuple(obj["center"]), obj["radius"])
    if shape == "polygon":
        return Polygon2D(tuple(tuple(v) for v in obj["vertices"]))
    return DisjointBoxUnion(tuple(
        Box(tuple(tuple(iv) for iv in b)) for b in obj["boxes"]))


def measure_from_json(obj):
    _validate(obj, MEASURE_SCHEMA, "measure")
    fam = obj["family"]
    if fam == "isotropic_stable":
        return IsotropicStable(obj["alpha"], obj.get("d", 1))
    if fam == "one_dim_stable":
        return OneDimStable(obj["alpha"], obj.get("beta", 0.0))
    if fam == "finite_atomic":
        atoms = tuple((tuple(a["location"]), a["mass"]) for a in obj["atoms"])
        d = obj.get("d", len(obj["atoms"][0]["location"]))
        return FiniteAtomic(atoms, d)
    profile = RADIAL_PROFILES[obj["profile"]](obj.get("scale", 1.0))
    return RadialDensity(obj["d"], profile, cutoff=obj.get("cutoff", math.inf))


def params_from_json(obj):
    _validate(obj, PARAMS_SCHEMA, "stable parameters")
    beta = obj.get("beta", 0.0)
    d = obj.get("d", 1)
    if beta == 0.0 and (d > 1 or obj.get("beta") is None):
        return IsotropicStableParams(obj["alpha"], d)
    if d != 1:
        raise DomainError("skewed laws are one-dimensional")
    return SkewedStableParams(obj["alpha"], beta)
