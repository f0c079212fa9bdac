"""Diagnostic rows and CSV/JSON serialization for simulation output.

The CSV header order is frozen; plot scripts index columns by name but the
byte layout must stay reproducible. Floats are rendered with repr(), the
shortest round-trip representation, so a read-back reproduces every value.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .grid import Field, lk_norm, mean_integral

CSV_HEADER = ["t", "l1", "l2", "lk", "linf", "min_u", "dist_u", "dist_c",
              "nonlocal_factor", "ubar", "ulow", "clamped_mass"]

SCHEMA_VERSION = "1"


@dataclass
class DiagnosticsRow:
    t: float
    l1: float
    l2: float
    lk: float
    linf: float
    min_u: float
    dist_u: float
    dist_c: float
    nonlocal_factor: float
    ubar: float
    ulow: float
    clamped_mass: float


def record(state, comp, eq, ks, params, clamped_total: float) -> DiagnosticsRow:
    """Compute one diagnostics row from the current simulation state.

    comp and eq may be None (no co-integrated pair / no reaction); the
    corresponding entries are NaN.
    """
    from .reaction import nonlocal_factor as nlf

    u, c = state.u, state.c
    if not (u.is_finite() and c.is_finite()):
        raise ValueError("non-finite state fields")
    if eq is not None:
        xi = eq.xi
        dist_u = float(np.abs(u.values - xi).max())
        dist_c = float(np.abs(c.values - xi**params.gamma).max())
    else:
        dist_u = dist_c = math.nan
    factor = nlf(u, params.reaction) if params.reaction is not None else math.nan
    k = ks[0] if ks else 4.0
    return DiagnosticsRow(
        t=state.t,
        l1=lk_norm(u, 1.0),
        l2=lk_norm(u, 2.0),
        lk=lk_norm(u, k),
        linf=lk_norm(u, math.inf),
        min_u=float(u.values.min()),
        dist_u=dist_u,
        dist_c=dist_c,
        nonlocal_factor=factor,
        ubar=comp.ubar if comp is not None else math.nan,
        ulow=comp.ulow if comp is not None else math.nan,
        clamped_mass=clamped_total,
    )


def write_csv(rows, path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for row in rows:
                d = asdict(row)
                writer.writerow([repr(float(d[name])) for name in CSV_HEADER])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path) -> list[DiagnosticsRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}: {header}")
        return [DiagnosticsRow(*(float(v) for v in line)) for line in reader]


def status_to_json(status) -> dict:
    from .dynamics import BlowUp, Completed, SolverFailed

    if isinstance(status, Completed):
        return {"kind": "completed", "t": status.t}
    if isinstance(status, BlowUp):
        return {"kind": "blow_up", "t": status.t, "reason": status.reason}
    if isinstance(status, SolverFailed):
        return {"kind": "solver_failure", "t": status.t, "message": status.message}
    raise TypeError(f"unknown status {status!r}")


def write_json(payload: dict, path) -> None:
    """Write a run summary (status, config echo, regime report) with schema tag."""
    doc = {"schema_version": SCHEMA_VERSION, **payload}
    try:
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write JSON to {path}: {exc}") from exc
