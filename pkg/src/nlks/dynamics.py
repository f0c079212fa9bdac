"""IMEX time marching for u_t = Lap(u) - chi*div(u^m grad c) + lam*f(u).

Diffusion is implicit (backward Euler), the chemotactic transport and the
nonlocal reaction explicit. The chemoattractant c is recomputed from u at
every step (quasi-static elliptic coupling). Step sizes follow a dyadic
ladder dt_max / 2^k so implicit factorizations can be cached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import comparison as cmp
from .elliptic import DiffusionSolver, HelmholtzSolver, SolverFailure, chemoattractant
from .grid import Field, lk_norm
from .reaction import ReactionParams, reaction_term


@dataclass(frozen=True)
class NumericalControls:
    dt_initial: float = 1e-3
    dt_min: float = 1e-9
    dt_max: float = 0.05
    cfl_safety: float = 0.5
    blow_up_threshold: float | None = None  # None: 1e6 * max(xi, sup u0)
    t_final: float = 10.0
    record_every: int = 10

    def __post_init__(self):
        if not (0 < self.dt_min < self.dt_initial <= self.dt_max):
            raise ValueError(
                f"need 0 < dt_min < dt_initial <= dt_max, got "
                f"({self.dt_min}, {self.dt_initial}, {self.dt_max})")
        if not (0 < self.cfl_safety < 1):
            raise ValueError(f"cfl_safety must be in (0,1), got {self.cfl_safety}")
        if self.t_final <= 0:
            raise ValueError(f"t_final must be > 0, got {self.t_final}")


@dataclass(frozen=True)
class Params:
    """Model parameters plus numerical controls.

    n is the analysis dimension fed to the regime classifier; the simulated
    grid dimension may be lower. reaction=None disables the source entirely
    (the lam = 0 probe configuration).
    """

    n: int
    chi: float
    m: float
    gamma: float
    reaction: ReactionParams | None
    numerical: NumericalControls = field(default_factory=NumericalControls)

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"analysis dimension n must be >= 3, got {self.n}")
        if self.chi <= 0:
            raise ValueError(f"chi must be > 0, got {self.chi}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.gamma < 1:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")


@dataclass
class SimState:
    t: float
    u: Field
    c: Field
    dt: float
    step_count: int = 0


@dataclass(frozen=True)
class Completed:
    t: float


@dataclass(frozen=True)
class BlowUp:
    t: float
    reason: str  # "linf_threshold" or "dt_collapse"


@dataclass(frozen=True)
class SolverFailed:
    t: float
    message: str


Status = Completed | BlowUp | SolverFailed


@dataclass
class RunRecord:
    """Diagnostic time series plus terminal status of one simulation."""

    rows: list  # DiagnosticsRow
    status: Status
    clamped_mass_total: float = 0.0

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.rows])


def chemotactic_divergence(u: Field, c: Field, chi: float, m: float) -> Field:
    """Divergence of the chemotactic flux chi * u^m * grad(c).

    Conservative face-flux form with the u^m factor upwinded by the sign of
    the face gradient of c; boundary faces carry zero flux, so the output
    integrates to zero over the domain.
    """
    if not (u.is_finite() and c.is_finite()):
        raise ValueError("non-finite input field")
    um = np.maximum(u.values, 0.0) ** m
    cv = c.values
    out = np.zeros_like(cv)
    for axis, h in enumerate(u.grid.spacing):
        dc = (np.diff(cv, axis=axis)) / h  # interior face gradients
        lo = tuple(slice(0, -1) if a == axis else slice(None) for a in range(cv.ndim))
        hi = tuple(slice(1, None) if a == axis else slice(None) for a in range(cv.ndim))
        donor = np.where(dc > 0, um[lo], um[hi])
        flux = chi * donor * dc
        out[lo] += flux / h
        out[hi] -= flux / h
    return Field(u.grid, out)


def _reaction_lipschitz(sup_u: float, p: ReactionParams) -> float:
    """Crude bound on |d/du| of the reaction at states up to sup_u."""
    s = max(sup_u, 1e-300)
    return p.lam * (p.alpha * s ** (p.alpha - 1) * (1.0 + p.sigma * s**p.beta)
                    + p.sigma * p.beta * s ** (p.alpha + p.beta - 1))


def adapt_dt(state: SimState, params: Params) -> float:
    """Stable-step candidate: cfl * min(advective, reaction, dt_max)."""
    num = params.numerical
    candidates = [num.dt_max]

    max_vel = 0.0
    uv = np.maximum(state.u.values, 0.0)
    cv = state.c.values
    for axis, h in enumerate(state.u.grid.spacing):
        dc = np.abs(np.diff(cv, axis=axis)) / h
        lo = tuple(slice(0, -1) if a == axis else slice(None) for a in range(cv.ndim))
        hi = tuple(slice(1, None) if a == axis else slice(None) for a in range(cv.ndim))
        uface = np.maximum(uv[lo], uv[hi])
        if params.m == 1.0:
            vel = params.chi * dc
        else:
            vel = params.chi * params.m * uface ** (params.m - 1.0) * dc
        if vel.size:
            max_vel = max(max_vel, float(vel.max()))
    if max_vel > 0:
        candidates.append(min(state.u.grid.spacing) / max_vel)

    if params.reaction is not None:
        lip = _reaction_lipschitz(float(uv.max()), params.reaction)
        if lip > 0:
            candidates.append(1.0 / lip)

    return num.cfl_safety * min(candidates)


def _dyadic_dt(candidate: float, dt_max: float, dt_min: float) -> float:
    """Largest dt on the ladder dt_max / 2^k not exceeding the candidate."""
    if candidate >= dt_max:
        return dt_max
    k = max(0, math.ceil(math.log2(dt_max / candidate)))
    return max(dt_max / 2**k, dt_min)


def imex_step(state: SimState, params: Params, helm: HelmholtzSolver,
              diff: DiffusionSolver) -> tuple[SimState, float]:
    """One IMEX step; returns the new state and the clamped (negative) mass.

    Explicit increment: -div(chi u^m grad c) + reaction at the current level.
    Implicit diffusion: (I - dt*Lap) u_new = u + dt * E.
    """
    u, dt = state.u, state.dt
    c = chemoattractant(helm, u, params.gamma)
    incr = -chemotactic_divergence(u, c, params.chi, params.m).values
    if params.reaction is not None:
        incr = incr + reaction_term(u, params.reaction).values
    if not np.all(np.isfinite(incr)):
        raise SolverFailure("explicit increment is non-finite", math.inf)
    rhs = Field(u.grid, u.values + dt * incr)
    u_new = diff.solve(rhs, dt)
    clamped = float(-np.minimum(u_new.values, 0.0).sum() * u.grid.cell_measure)
    u_new.values = np.maximum(u_new.values, 0.0)
    return (
        SimState(t=state.t + dt, u=u_new, c=c, dt=dt,
                 step_count=state.step_count + 1),
        clamped,
    )


def run_simulation(u0: Field, params: Params, ks=(4.0,),
                   comparison_start: cmp.ComparisonState | None = None) -> RunRecord:
    """March to t_final or until blow-up / solver failure is detected.

    Blow-up is flagged when the sup norm exceeds the threshold, or when the
    stable step collapses below dt_min while the sup norm keeps growing
    (numerical proxy for sup-norm divergence at a finite time).

    When comparison_start is given, the homogeneous super/sub-solution pair
    is advanced with RK4 at the same steps and recorded alongside.
    """
    from .diagnostics import record as record_row  # local import, avoids cycle

    if float(u0.values.min()) < 0 or not u0.is_finite():
        raise ValueError("initial datum must be nonnegative and finite")
    num = params.numerical
    grid = u0.grid
    helm = HelmholtzSolver(grid)
    diff = DiffusionSolver(grid)

    if params.reaction is not None:
        eq = cmp.equilibrium(params.reaction.sigma, params.reaction.beta)
    else:
        eq = None
    sup_u0 = float(u0.values.max())
    threshold = num.blow_up_threshold
    if threshold is None:
        threshold = 1e6 * max(eq.xi if eq else 0.0, sup_u0, 1.0)

    comp = comparison_start
    if comp is not None:
        xi = eq.xi
        r = params.reaction

        def comp_rhs(ub, ul):
            return cmp.comparison_rhs(ub, ul, params.chi, params.m, params.gamma,
                                      r.alpha, r.beta, r.sigma, r.lam, xi)

    state = SimState(t=0.0, u=u0.copy(),
                     c=chemoattractant(helm, u0, params.gamma),
                     dt=num.dt_initial, step_count=0)
    clamped_total = 0.0
    rows = [record_row(state, comp, eq, ks, params, clamped_total)]
    status: Status | None = None

    while state.t < num.t_final - 1e-14 * num.t_final:
        candidate = adapt_dt(state, params)
        linf = lk_norm(state.u, math.inf)
        if candidate < num.dt_min and linf > 5.0 * max(sup_u0, eq.xi if eq else 0.0):
            status = BlowUp(t=state.t, reason="dt_collapse")
            break
        dt = _dyadic_dt(candidate, num.dt_max, num.dt_min)
        dt = min(dt, num.t_final - state.t)
        state.dt = dt
        try:
            state, clamped = imex_step(state, params, helm, diff)
        except SolverFailure as exc:
            status = SolverFailed(t=state.t, message=str(exc))
            break
        clamped_total += clamped
        if comp is not None:
            ub, ul = cmp._rk4_step(comp.ubar, comp.ulow, dt, comp_rhs)
            comp = cmp.ComparisonState(ubar=ub, ulow=ul, t=state.t)
        linf_now = lk_norm(state.u, math.inf)
        if linf_now > threshold:
            rows.append(record_row(state, comp, eq, ks, params, clamped_total))
            status = BlowUp(t=state.t, reason="linf_threshold")
            break
        if state.step_count % num.record_every == 0:
            rows.append(record_row(state, comp, eq, ks, params, clamped_total))

    if status is None:
        status = Completed(t=state.t)
        if rows[-1].t < state.t:
            rows.append(record_row(state, comp, eq, ks, params, clamped_total))
    return RunRecord(rows=rows, status=status, clamped_mass_total=clamped_total)
