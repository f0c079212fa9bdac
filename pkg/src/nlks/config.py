"""JSON run configuration: parsing, validation, defaults, initial data.

Every effective value (including filled defaults) is echoed back into the
output JSON so a run can be reproduced from its artifacts alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .comparison import equilibrium
from .dynamics import NumericalControls, Params
from .grid import Field, Grid, make_grid
from .reaction import ReactionParams

SCENARIOS = ("simulate", "sandwich", "ode", "sweep", "probe")

_NUMERICAL_DEFAULTS = {
    "dt_initial": 1e-3,
    "dt_min": 1e-9,
    "dt_max": 0.05,
    "cfl_safety": 0.5,
    "blow_up_threshold": None,
    "t_final": 10.0,
    "record_every": 10,
}


class ConfigError(ValueError):
    """Configuration rejected, with the offending field in the message."""


@dataclass
class RunConfig:
    scenario: str
    grid: Grid
    params: Params
    initial: dict
    comparison_margin: float = 0.01
    ode: dict = field(default_factory=lambda: {"t_final": 50.0, "dt": 0.01})
    sweep: dict | None = None
    diagnostic_k: float = 4.0
    seed: int = 0
    effective: dict = field(default_factory=dict)  # full echo of the config


def _need(raw: dict, key: str, context: str):
    if key not in raw:
        raise ConfigError(f"missing field '{key}' in {context}")
    return raw[key]


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a JSON run configuration."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc

    scenario = _need(raw, "scenario", "config")
    if scenario not in SCENARIOS:
        raise ConfigError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")

    g = _need(raw, "grid", "config")
    try:
        grid = make_grid(_need(g, "dim", "grid"), _need(g, "extents", "grid"),
                         _need(g, "cells", "grid"))
    except ValueError as exc:
        raise ConfigError(f"grid: {exc}") from exc

    p = _need(raw, "params", "config")
    alpha = float(_need(p, "alpha", "params"))
    beta = float(_need(p, "beta", "params"))
    gamma = float(_need(p, "gamma", "params"))
    m = float(_need(p, "m", "params"))
    chi = float(_need(p, "chi", "params"))
    lam = float(_need(p, "lam", "params"))
    sigma = float(_need(p, "sigma", "params"))
    n = int(_need(p, "n", "params"))

    if beta <= 1:
        raise ConfigError(f"params.beta: the exponent range requires beta > 1, got {beta}")
    if alpha < 1:
        raise ConfigError(f"params.alpha: the exponent range requires alpha >= 1, got {alpha}")
    if lam < 0:
        raise ConfigError(f"params.lam must be >= 0, got {lam}")
    if lam == 0 and scenario != "probe":
        raise ConfigError("params.lam = 0 (reaction disabled) is only allowed "
                          "in the 'probe' scenario")

    if lam > 0:
        try:
            reaction = ReactionParams(alpha=alpha, beta=beta, sigma=sigma, lam=lam)
        except ValueError as exc:
            raise ConfigError(f"params: {exc}") from exc
    else:
        reaction = None

    nd = dict(_NUMERICAL_DEFAULTS)
    nd.update(raw.get("numerical", {}))
    record_every = int(nd.pop("record_every"))
    if record_every < 1:
        raise ConfigError(f"numerical.record_every must be >= 1, got {record_every}")
    try:
        numerical = NumericalControls(record_every=record_every, **nd)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"numerical: {exc}") from exc

    try:
        params = Params(n=n, chi=chi, m=m, gamma=gamma, reaction=reaction,
                        numerical=numerical)
    except ValueError as exc:
        raise ConfigError(f"params: {exc}") from exc

    initial = raw.get("initial", {"kind": "constant", "value": None})
    _validate_initial(initial, scenario, reaction)

    ode = {"t_final": 50.0, "dt": 0.01}
    ode.update(raw.get("ode", {}))
    if ode["t_final"] <= 0 or ode["dt"] <= 0:
        raise ConfigError(f"ode: t_final and dt must be > 0, got {ode}")

    sweep_spec = raw.get("sweep")
    if scenario == "sweep":
        if not sweep_spec:
            raise ConfigError("sweep scenario requires a 'sweep' section with "
                              "alpha/beta/gamma/m ranges")
        for key in ("alpha", "beta", "gamma", "m"):
            vals = sweep_spec.get(key, [p[key]])
            if not vals:
                raise ConfigError(f"sweep.{key}: empty range")
            sweep_spec[key] = [float(v) for v in vals]

    margin = float(raw.get("comparison_margin", 0.01))
    if margin <= 0:
        raise ConfigError(f"comparison_margin must be > 0, got {margin}")

    cfg = RunConfig(
        scenario=scenario, grid=grid, params=params, initial=initial,
        comparison_margin=margin, ode=ode, sweep=sweep_spec,
        diagnostic_k=float(raw.get("diagnostic_k", 4.0)),
        seed=int(raw.get("seed", 0)),
    )
    cfg.effective = _echo(cfg, alpha, beta, gamma, m, chi, lam, sigma, n)
    return cfg


def _validate_initial(spec: dict, scenario: str, reaction) -> None:
    kind = spec.get("kind", "constant")
    if kind == "constant":
        value = spec.get("value")
        if value is not None and value < 0:
            raise ConfigError(f"initial.value must be >= 0, got {value}")
        if scenario == "sandwich" and (value is None or value <= 0) \
                and reaction is None:
            raise ConfigError("sandwich scenario requires a strictly positive "
                              "initial datum")
    elif kind == "gaussian":
        for key in ("center", "width", "amplitude"):
            _need(spec, key, "initial (gaussian)")
        floor = float(spec.get("floor", 0.0))
        if floor < 0 or spec["amplitude"] < 0 or spec["width"] <= 0:
            raise ConfigError("initial (gaussian): need width > 0, "
                              "amplitude >= 0, floor >= 0")
        if scenario == "sandwich" and floor <= 0:
            raise ConfigError("sandwich scenario requires min u0 > 0; set a "
                              "positive 'floor' on the gaussian initial datum")
    elif kind == "cosine":
        amp = float(_need(spec, "amplitude", "initial (cosine)"))
        if not (-1.0 < amp < 1.0) and scenario == "sandwich":
            raise ConfigError("sandwich scenario requires |amplitude| < 1 so "
                              "that min u0 > 0")
    elif kind == "file":
        _need(spec, "path", "initial (file)")
    else:
        raise ConfigError(f"initial.kind must be constant | gaussian | cosine "
                          f"| file, got {kind!r}")


def build_initial(cfg: RunConfig) -> Field:
    """Materialize the configured initial datum on the grid."""
    spec = cfg.initial
    grid = cfg.grid
    kind = spec.get("kind", "constant")
    if cfg.params.reaction is not None:
        base = equilibrium(cfg.params.reaction.sigma, cfg.params.reaction.beta).xi
    else:
        base = 1.0

    if kind == "constant":
        value = spec.get("value")
        return Field.constant(grid, base if value is None else float(value))
    if kind == "cosine":
        amp = float(spec["amplitude"])

        def fn(*coords):
            mode = np.ones_like(coords[0])
            for x, length in zip(coords, grid.extents):
                mode = mode * np.cos(np.pi * x / length)
            return base * (1.0 + amp * mode)

        return Field.from_function(grid, fn)
    if kind == "gaussian":
        center = [float(c) for c in spec["center"]]
        width = float(spec["width"])
        amp = float(spec["amplitude"])
        floor = float(spec.get("floor", 0.0))

        def fn(*coords):
            r2 = sum((x - c) ** 2 for x, c in zip(coords, center))
            return floor + amp * np.exp(-r2 / (2.0 * width**2))

        return Field.from_function(grid, fn)
    if kind == "file":
        values = np.load(spec["path"])
        return Field(grid, values)
    raise ConfigError(f"unknown initial kind {kind!r}")


def _echo(cfg: RunConfig, alpha, beta, gamma, m, chi, lam, sigma, n) -> dict:
    num = cfg.params.numerical
    return {
        "scenario": cfg.scenario,
        "grid": {"dim": cfg.grid.dim, "extents": list(cfg.grid.extents),
                 "cells": list(cfg.grid.cells)},
        "params": {"n": n, "alpha": alpha, "beta": beta, "gamma": gamma,
                   "m": m, "chi": chi, "lam": lam, "sigma": sigma},
        "numerical": {
            "dt_initial": num.dt_initial, "dt_min": num.dt_min,
            "dt_max": num.dt_max, "cfl_safety": num.cfl_safety,
            "blow_up_threshold": num.blow_up_threshold,
            "t_final": num.t_final, "record_every": num.record_every,
        },
        "initial": cfg.initial,
        "comparison_margin": cfg.comparison_margin,
        "ode": cfg.ode,
        "sweep": cfg.sweep,
        "diagnostic_k": cfg.diagnostic_k,
        "seed": cfg.seed,
    }
