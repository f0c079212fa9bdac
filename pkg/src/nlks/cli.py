"""Command-line entry point.

Subcommands: simulate | sandwich | ode | sweep | probe, each driven by a
JSON config. Exit codes: 0 completed (probe reports blow-up via the JSON
status, still 0), 2 blow-up detected, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import comparison as cmp
from . import regimes
from .config import ConfigError, RunConfig, build_initial, parse_config
from .diagnostics import status_to_json, write_csv, write_json
from .dynamics import BlowUp, Completed, SolverFailed, run_simulation
from .elliptic import SolverFailure


def execute(cfg: RunConfig, out_dir: Path) -> int:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.scenario == "ode":
        return _run_ode(cfg, out_dir)
    if cfg.scenario == "sweep":
        return _run_sweep(cfg, out_dir)
    return _run_pde(cfg, out_dir)


def _regime_payload(cfg: RunConfig) -> dict | None:
    r = cfg.params.reaction
    if r is None:
        return None
    report = regimes.classify(n=cfg.params.n, alpha=r.alpha, beta=r.beta,
                              gamma=cfg.params.gamma, m=cfg.params.m,
                              chi=cfg.params.chi, lam=r.lam, sigma=r.sigma)
    return {"existence": report.existence,
            "remark_boundary": report.remark_boundary,
            "convergence": report.convergence,
            "details": report.details}


def _run_pde(cfg: RunConfig, out_dir: Path) -> int:
    u0 = build_initial(cfg)
    comp0 = None
    if cfg.scenario == "sandwich":
        if float(u0.values.min()) <= 0:
            raise ConfigError("sandwich scenario requires min u0 > 0")
        xi = cmp.equilibrium(cfg.params.reaction.sigma, cfg.params.reaction.beta).xi
        comp0 = cmp.make_initial(u0, xi, cfg.comparison_margin)
    try:
        record = run_simulation(u0, cfg.params, ks=(cfg.diagnostic_k,),
                                comparison_start=comp0)
    except SolverFailure as exc:
        write_json({"config": cfg.effective,
                    "status": {"kind": "solver_failure", "message": str(exc)}},
                   out_dir / "run.json")
        return 1
    write_csv(record.rows, out_dir / "run.csv")
    payload = {
        "config": cfg.effective,
        "status": status_to_json(record.status),
        "clamped_mass_total": record.clamped_mass_total,
        "regime": _regime_payload(cfg),
    }
    write_json(payload, out_dir / "run.json")
    if isinstance(record.status, SolverFailed):
        return 1
    if isinstance(record.status, BlowUp):
        return 0 if cfg.scenario == "probe" else 2
    return 0


def _run_ode(cfg: RunConfig, out_dir: Path) -> int:
    r = cfg.params.reaction
    if r is None:
        raise ConfigError("ode scenario requires lam > 0")
    xi = cmp.equilibrium(r.sigma, r.beta).xi
    u0 = build_initial(cfg)
    s0 = cmp.make_initial(u0, xi, cfg.comparison_margin)
    try:
        traj = cmp.integrate_comparison(
            s0, chi=cfg.params.chi, m=cfg.params.m, gamma=cfg.params.gamma,
            alpha=r.alpha, beta=r.beta, sigma=r.sigma, lam=r.lam,
            t_final=cfg.ode["t_final"], dt=cfg.ode["dt"])
    except cmp.IntegratorFailure as exc:
        write_json({"config": cfg.effective,
                    "status": {"kind": "integrator_failure", "message": str(exc)}},
                   out_dir / "ode.json")
        return 1
    with open(out_dir / "ode.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "ubar", "ulow"])
        for t, ub, ul in zip(traj.times, traj.ubar, traj.ulow):
            writer.writerow([repr(float(t)), repr(float(ub)), repr(float(ul))])
    rate = cmp.estimate_rate(traj)
    write_json({
        "config": cfg.effective,
        "status": {"kind": "completed", "t": float(traj.times[-1])},
        "xi": xi,
        "final_gap": float(traj.gap[-1]),
        "decay_rate": rate,
        "regime": _regime_payload(cfg),
    }, out_dir / "ode.json")
    return 0


def _run_sweep(cfg: RunConfig, out_dir: Path) -> int:
    r = cfg.params.reaction
    reports = regimes.sweep(
        n=cfg.params.n, chi=cfg.params.chi, lam=r.lam if r else 0.0,
        sigma=r.sigma if r else 1.0,
        alpha=cfg.sweep["alpha"], beta=cfg.sweep["beta"],
        gamma=cfg.sweep["gamma"], m=cfg.sweep["m"])
    write_json({
        "config": cfg.effective,
        "status": {"kind": "completed"},
        "reports": [
            {"point": point,
             "existence": rep.existence,
             "remark_boundary": rep.remark_boundary,
             "convergence": rep.convergence,
             "details": rep.details}
            for point, rep in reports
        ],
    }, out_dir / "sweep.json")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nlks",
        description="Simulator for chemotaxis with a nonlocal logistic reaction")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in [
        ("simulate", "run the PDE and write diagnostics"),
        ("sandwich", "run the PDE with the bracketing ODE pair co-integrated"),
        ("ode", "integrate only the super/sub-solution ODE pair"),
        ("sweep", "classify a grid of exponent vectors"),
        ("probe", "blow-up probe (lam = 0 allowed; blow-up exits 0)"),
    ]:
        sp = sub.add_parser(name, help=doc)
        sp.add_argument("--config", required=True, help="path to JSON config")
        sp.add_argument("--out", required=True, help="output directory")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
    args = parser.parse_args(argv)

    try:
        cfg = parse_config(Path(args.config).read_text())
    except (OSError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if cfg.scenario != args.command:
        cfg.scenario = args.command
        cfg.effective["scenario"] = args.command
    if args.seed is not None:
        cfg.seed = args.seed
        cfg.effective["seed"] = args.seed
    try:
        return execute(cfg, Path(args.out))
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
