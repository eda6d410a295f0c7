"""Experiment configuration: JSON schema, semantic checks and object construction."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from ..bounds import TAIL_FLAVORS
from ..errors import ConfigError, FrechetError
from ..geometry import ConvexDomainSpec, validate_domain
from ..spaces import MetricTree, TreeSpace, build_figure1_tree, make_space
from .samplers import GaussianSampler, TreeLeafSampler, TwoPointSampler, UniformCapSampler

CHECKS = ("expectation", "tail", "slope", "hilbert_rate")

SCHEMA = {
    "type": "object",
    "required": ["experiment_id", "space", "sampler", "estimator", "n_grid", "replicates"],
    "additionalProperties": False,
    "properties": {
        "experiment_id": {"type": "string", "minLength": 1},
        "space": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["euclidean", "sphere", "hyperbolic", "spd", "tree"]},
                "dim": {"type": "integer", "minimum": 1},
                "kappa": {"type": "number"},
                "edges": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"type": "array", "minItems": 3, "maxItems": 3},
                },
                "figure1": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "arms": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}, "minItems": 3, "maxItems": 3},
                    },
                },
            },
        },
        "sampler": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["gaussian", "uniform_cap", "two_point", "tree_leaves"]},
                "center": {"type": "array", "items": {"type": "number"}},
                "scale": {"type": "number", "exclusiveMinimum": 0},
                "radius": {"type": "number", "minimum": 0},
                "radii": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1},
                "direction": {"type": "array", "items": {"type": "number"}},
                "leaves": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}, "minItems": 1},
                "weights": {"type": "array", "items": {"type": "number", "minimum": 0}},
            },
        },
        "estimator": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["empirical", "iterated", "parallel", "stochastic-approx"]},
                "method": {"enum": ["auto", "exact", "cyclic", "gradient"]},
                "schedule": {"enum": ["harmonic", "positive-curvature"]},
                "P": {"type": "integer", "minimum": 1},
                "eps": {"type": "number", "exclusiveMinimum": 0},
                "delta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "bound": {"enum": ["hoeffding", "bernstein", "auto"]},
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "max_rounds": {"type": "integer", "minimum": 1},
            },
        },
        "n_grid": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "replicates": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "domain": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kappa": {"type": "number"},
                "epsilon": {"type": "number", "exclusiveMinimum": 0},
                "radius": {"type": "number", "minimum": 0},
            },
        },
        "delta": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "tail_flavor": {"enum": list(TAIL_FLAVORS)},
        "checks": {"type": "array", "items": {"enum": list(CHECKS)}},
        "variance_mc": {"type": "integer", "minimum": 2},
        "workers": {"type": "integer", "minimum": 0},
    },
}


@dataclass
class ExperimentConfig:
    experiment_id: str
    space: dict
    sampler: dict
    estimator: dict
    n_grid: list
    replicates: int
    seed: int = 0
    domain: dict = field(default_factory=dict)
    delta: float = 0.1
    tail_flavor: str = "hoeffding"
    checks: list = field(default_factory=lambda: ["expectation", "tail"])
    variance_mc: int = 100_000
    workers: int = 0

    @classmethod
    def from_dict(cls, data: dict, seed: int | None = None) -> "ExperimentConfig":
        validate_config(data)
        data = dict(data)
        if seed is not None:
            data["seed"] = seed
        cfg = cls(**data)
        cfg.build()  # semantic checks
        return cfg

    def to_dict(self):
        return {k: getattr(self, k) for k in SCHEMA["properties"]}

    # -- object construction ------------------------------------------
    @property
    def kappa(self) -> float:
        return float(self.domain.get("kappa", self.build_space().kappa))

    @property
    def epsilon(self):
        return self.domain.get("epsilon")

    def build_space(self):
        s = self.space
        if s["kind"] == "tree":
            if "edges" in s:
                return TreeSpace(MetricTree([tuple(e) for e in s["edges"]]))
            arms = s.get("figure1", {}).get("arms", [1.0, 1.0, 1.0])
            tree, _ = build_figure1_tree(1, arms)
            return TreeSpace(tree)
        return make_space(s["kind"], s.get("dim"), s.get("kappa"))

    def default_center(self, space):
        kind = space.name
        if kind == "euclidean":
            return np.zeros(space.dim)
        if kind == "sphere":
            return space.pole()
        if kind == "hyperbolic":
            return space.origin()
        if kind == "spd":
            return np.eye(space.dim)
        return None

    def build_samplers(self, space):
        """One sampler, or several sharing a center when ``radii`` is given (heteroskedastic)."""
        s = self.sampler
        kind = s["kind"]
        if kind == "tree_leaves":
            if space.name != "tree":
                raise ConfigError("sampler: tree_leaves needs a tree space")
            if "leaves" in s:
                leaves = [space.validate_point(tuple(x)) for x in s["leaves"]]
            else:
                leaves = [space.tree.node(lbl) for lbl in "ABC"]
            return [TreeLeafSampler(space, leaves, s.get("weights"))]
        if space.name == "tree":
            raise ConfigError(f"sampler: '{kind}' is not available on trees")
        center = self.default_center(space) if "center" not in s else np.asarray(s["center"], float)
        if space.name == "spd" and center.ndim == 1:
            center = center.reshape(space.dim, space.dim)
        if kind == "gaussian":
            return [GaussianSampler(space, center, s.get("scale", 1.0))]
        radii = s.get("radii", [s.get("radius", 1.0)])
        if kind == "uniform_cap":
            return [UniformCapSampler(space, center, r) for r in radii]
        direction = None if "direction" not in s else np.asarray(s["direction"], float)
        return [TwoPointSampler(space, center, r, direction) for r in radii]

    def build(self):
        try:
            space = self.build_space()
            samplers = self.build_samplers(space)
        except ConfigError:
            raise
        except (FrechetError, ValueError) as exc:
            raise ConfigError(f"space/sampler: {exc}") from None
        if list(self.n_grid) != sorted(set(self.n_grid)):
            raise ConfigError("n_grid: must be strictly ascending")
        est = self.estimator
        if est["kind"] == "parallel":
            P = est.get("P")
            if P is None:
                raise ConfigError("estimator.P: required for the parallel estimator")
            bad = [n for n in self.n_grid if n % P]
            if bad:
                raise ConfigError(f"n_grid: {bad} not divisible by estimator.P = {P}")
        if est["kind"] == "stochastic-approx" and ("eps" not in est or "delta" not in est):
            raise ConfigError("estimator: stochastic-approx needs eps and delta")
        if est.get("method") == "gradient" and not space.smooth:
            raise ConfigError("estimator.method: gradient needs a smooth space")
        kappa = float(self.domain.get("kappa", space.kappa))
        if kappa < space.kappa:
            raise ConfigError(f"domain.kappa: {kappa} is below the curvature of the space ({space.kappa})")
        if kappa > 0:
            eps = self.domain.get("epsilon")
            if eps is None:
                raise ConfigError("domain.epsilon: required when kappa > 0")
            support = max(s.support_radius for s in samplers) if all(
                s.support_radius is not None for s in samplers
            ) else math.inf
            radius = float(self.domain.get("radius", support))
            if support > radius:
                raise ConfigError(
                    f"domain.radius: sampler support radius {support} exceeds the domain radius {radius}"
                )
            rep = validate_domain(ConvexDomainSpec(samplers[0].center, radius, eps), space.geometry)
            if not rep:
                raise ConfigError(f"domain: {rep.violations[0]}")
        if est.get("schedule") == "positive-curvature" and kappa <= 0:
            raise ConfigError("estimator.schedule: positive-curvature needs kappa > 0")
        return space, samplers


def _path(err):
    return "/".join(str(p) for p in err.absolute_path) or "<root>"


def validate_config(data):
    """Schema validation; raises :class:`ConfigError` naming the offending field path."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise ConfigError(f"{_path(e)}: {e.message}")


def shipped_configs():
    base = resources.files("frechet") / "configs"
    return sorted(p.name for p in base.iterdir() if p.name.endswith(".json"))


def load_config(path_or_name, seed: int | None = None) -> ExperimentConfig:
    """Load a config file; bare names fall back to the configs shipped with the package."""
    p = Path(path_or_name)
    if p.exists():
        text = p.read_text()
    else:
        ref = resources.files("frechet") / "configs" / p.name
        if not ref.is_file():
            raise ConfigError(f"config file '{path_or_name}' not found")
        text = ref.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"<root>: invalid JSON ({exc})") from None
    return ExperimentConfig.from_dict(data, seed=seed)
