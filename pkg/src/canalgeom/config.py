"""Run configuration: JSON ingestion, grid and random-point sampling.

Curve and patch specs are plain JSON coefficient tables; user curves are
never ingested as runtime code.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import canal, classify, curve as curve_mod, curvature4
from .canal import CanalPatch, CenterCurve
from .curve import frenet_apparatus
from .errors import ConfigError, GeometryError

POLE_BAND = 5e-2     # excluded neighborhood of |cos v3| = 0
Q_BAND = 1e-6        # excluded neighborhood of the focal locus Q = 0
TWO_PI = 2.0 * math.pi


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def parse_curve(spec) -> CenterCurve:
    _require(isinstance(spec, dict) and "kind" in spec, "curve spec must be a dict with 'kind'")
    kind = spec["kind"]
    try:
        if kind == "line":
            return curve_mod.line(spec.get("point", [0.0, 0.0, 0.0, 0.0]),
                                  spec.get("direction", [1.0, 0.0, 0.0, 0.0]),
                                  domain=spec.get("domain", (0.0, 1.0)),
                                  dim=spec.get("dim"))
        if kind == "circle":
            return curve_mod.circle(spec["radius"], dim=spec.get("dim", 4),
                                    center=spec.get("center"),
                                    domain=spec.get("domain"))
        if kind == "quad_helix":
            return curve_mod.quad_helix(spec["a"], spec["b"], spec["c"],
                                        domain=spec.get("domain", (0.0, TWO_PI)))
        if kind == "poly_trig":
            fo = spec.get("frame_override")
            c = curve_mod.poly_trig(spec["coords"], spec["domain"],
                                    frame_override=None if fo is None else np.asarray(fo, float))
            return curve_mod.reparametrize_arclength(c, samples=spec.get("samples", 200))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad curve spec: {exc}") from exc
    raise ConfigError(f"unknown curve kind {kind!r}")


def parse_profile(spec) -> canal.RadiusProfile:
    _require(isinstance(spec, dict) and "kind" in spec, "radius spec must be a dict with 'kind'")
    kind = spec["kind"]
    try:
        if kind == "constant":
            return canal.constant_profile(spec["value"])
        if kind == "linear":
            return canal.linear_profile(spec["a"], spec["b"])
        if kind == "poly_trig":
            return canal.poly_trig_profile(spec.get("poly", ()), spec.get("trig", ()))
        if kind == "catenoid":
            prof = classify.solve_catenoid(spec["a"], spec.get("rho0"),
                                           spec.get("span", (0.0, 2.0)),
                                           spec.get("step", 1e-3))
            return prof.to_profile()
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad radius spec: {exc}") from exc
    raise ConfigError(f"unknown radius kind {kind!r}")


def parse_patch(spec) -> CanalPatch:
    _require(isinstance(spec, dict), "patch spec must be a dict")
    _require("curve" in spec and "radius" in spec, "patch spec needs 'curve' and 'radius'")
    c = parse_curve(spec["curve"])
    profile = parse_profile(spec["radius"])
    n = int(spec.get("n", c.dim))
    _require(n == c.dim, f"patch n = {n} but curve dim = {c.dim}")
    domain = {}
    dom_spec = spec.get("domain", {})
    for i in range(1, n):
        name = f"v{i}"
        if name in dom_spec:
            lo, hi = dom_spec[name]
            domain[name] = (float(lo), float(hi))
        elif i == 1:
            domain[name] = (float(c.domain[0]), float(c.domain[1]))
        else:
            domain[name] = (0.0, TWO_PI)
    try:
        return CanalPatch(curve=c, profile=profile, n=n, domain=domain)
    except GeometryError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass
class RunConfig:
    patch: CanalPatch
    grid: tuple = (20, 20, 20)
    seed: int = 0
    tolerance_scale: float = 1.0
    fd_step: Optional[float] = None      # absolute override for all axes
    outputs: list = field(default_factory=list)
    inject: dict = field(default_factory=dict)   # test-fixture fault hooks
    raw: dict = field(default_factory=dict)


def load_run_config(source) -> RunConfig:
    if isinstance(source, (str, bytes)):
        try:
            with open(source) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    else:
        data = source
    _require(isinstance(data, dict), "config root must be a JSON object")
    patch = parse_patch(data.get("patch", data))
    grid = tuple(int(x) for x in data.get("grid", (20,) * (patch.n - 1)))
    _require(len(grid) == patch.n - 1 and all(g >= 1 for g in grid),
             f"grid must list {patch.n - 1} positive node counts")
    return RunConfig(patch=patch, grid=grid,
                     seed=int(data.get("seed", 0)),
                     tolerance_scale=float(data.get("tolerance_scale", 1.0)),
                     fd_step=data.get("fd_step"),
                     outputs=data.get("outputs", []),
                     inject=data.get("_inject", {}),
                     raw=data)


# ---------------------------------------------------------------------------
# sampling

def probe_steps(patch: CanalPatch, fd_step=None):
    if fd_step is not None:
        return tuple(float(fd_step) for _ in range(patch.n - 1))
    return tuple(3e-5 * (hi - lo) for lo, hi in patch.param_box())


def grid_axes(patch: CanalPatch, counts, fd_step=None):
    """Cell-centered nodes per axis, kept off boundaries and the v3 pole band."""
    steps = probe_steps(patch, fd_step)
    axes = []
    for axis, ((lo, hi), cnt) in enumerate(zip(patch.param_box(), counts)):
        margin = max(2.0 * steps[axis], 1e-9 * (hi - lo))
        lo2, hi2 = lo + margin, hi - margin
        nodes = lo2 + (np.arange(cnt) + 0.5) * (hi2 - lo2) / cnt
        if axis == patch.n - 2 and patch.n == 4:
            # nudge any node out of the pole band |cos v3| <= POLE_BAND
            for i, v in enumerate(nodes):
                while abs(math.cos(nodes[i])) <= 2.0 * POLE_BAND:
                    nodes[i] += 4.0 * POLE_BAND
        axes.append(nodes)
    return axes


def grid_points(patch: CanalPatch, counts, fd_step=None):
    axes = grid_axes(patch, counts, fd_step)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def admissible(patch: CanalPatch, pt) -> bool:
    """True when a parameter point avoids poles, focal loci and irregularity."""
    try:
        v1 = pt[0]
        prof = patch.profile.at(v1)
        if patch.n == 4:
            if abs(math.cos(pt[2])) <= POLE_BAND:
                return False
            fren = frenet_apparatus(patch.curve, v1)
            if abs(curvature4.helper_q(fren, prof, pt[1], pt[2])) <= Q_BAND:
                return False
        return True
    except GeometryError:
        return False


def random_points(patch: CanalPatch, count, rng, fd_step=None, max_tries=200):
    """Seeded random admissible interior points (rejection sampling)."""
    steps = probe_steps(patch, fd_step)
    box = patch.param_box()
    lows = np.array([lo + 2.0 * s for (lo, hi), s in zip(box, steps)])
    highs = np.array([hi - 2.0 * s for (lo, hi), s in zip(box, steps)])
    out = []
    tries = 0
    while len(out) < count:
        pt = lows + rng.random(len(box)) * (highs - lows)
        if admissible(patch, pt):
            out.append(pt)
            tries = 0
        else:
            tries += 1
            if tries > max_tries:
                raise ConfigError("could not sample admissible points in this domain")
    return np.array(out)
