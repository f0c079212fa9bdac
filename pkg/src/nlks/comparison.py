"""Spatially homogeneous super/sub-solution ODE pair and its diagnostics.

The pair (ubar, ulow) brackets the PDE solution from above and below. Both
trajectories are driven toward the constant equilibrium xi = sigma^(-1/beta)
when the convergence conditions alpha + beta >= gamma + m and lam > 2*chi
hold; the gap then decays exponentially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import Field


class IntegratorFailure(RuntimeError):
    """Ordering of the ODE pair could not be maintained numerically."""


@dataclass(frozen=True)
class Equilibrium:
    xi: float


def equilibrium(sigma: float, beta: float) -> Equilibrium:
    """Constant state xi = sigma^(-1/beta) at which the reaction vanishes."""
    if sigma <= 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    if beta <= 1:
        raise ValueError(f"beta must be > 1, got {beta}")
    return Equilibrium(xi=sigma ** (-1.0 / beta))


@dataclass
class ComparisonState:
    ubar: float
    ulow: float
    t: float = 0.0


@dataclass(frozen=True)
class ConvergenceConditions:
    """Checkable sufficient conditions for gap decay, plus exponent bookkeeping."""

    delta_low: float
    delta_high: float
    exponent_ok: bool  # alpha + beta >= gamma + m
    damping_ok: bool  # lam > 2 * chi

    @property
    def guaranteed(self) -> bool:
        return self.exponent_ok and self.damping_ok


def convergence_conditions(alpha: float, beta: float, gamma: float, m: float,
                           chi: float, lam: float) -> ConvergenceConditions:
    return ConvergenceConditions(
        delta_low=max(alpha - 1.0, gamma + m - 1.0),
        delta_high=alpha + beta - 1.0,
        exponent_ok=alpha + beta >= gamma + m,
        damping_ok=lam > 2.0 * chi,
    )


def comparison_rhs(ubar: float, ulow: float, chi: float, m: float, gamma: float,
                   alpha: float, beta: float, sigma: float, lam: float,
                   xi: float) -> tuple[float, float]:
    """Time derivatives of the super/sub-solution pair.

    ubar' = chi*ubar^m*(ubar^g - ulow^g) + lam*sigma*ubar^a*(xi^b - ubar^b)
    and symmetrically for ulow.
    """
    if ubar <= 0 or ulow <= 0:
        raise ValueError(f"state must be positive, got ({ubar}, {ulow})")
    xib = xi**beta
    dbar = chi * ubar**m * (ubar**gamma - ulow**gamma) \
        + lam * sigma * ubar**alpha * (xib - ubar**beta)
    dlow = chi * ulow**m * (ulow**gamma - ubar**gamma) \
        + lam * sigma * ulow**alpha * (xib - ulow**beta)
    return dbar, dlow


def make_initial(u0: Field, xi: float, margin: float = 0.01) -> ComparisonState:
    """Bracketing initial pair strictly outside the range of u0 and of xi."""
    if margin <= 0:
        raise ValueError(f"margin must be > 0, got {margin}")
    lo = float(u0.values.min())
    hi = float(u0.values.max())
    if lo <= 0:
        raise ValueError("initial datum must be strictly positive for bracketing")
    ubar0 = max(hi, xi) * (1.0 + margin)
    ulow0 = min(lo, xi) * (1.0 - margin)
    if ulow0 <= 0:
        ulow0 = 0.5 * min(lo, xi)
    return ComparisonState(ubar=ubar0, ulow=ulow0, t=0.0)


@dataclass
class ComparisonTrajectory:
    times: np.ndarray
    ubar: np.ndarray
    ulow: np.ndarray
    xi: float

    @property
    def gap(self) -> np.ndarray:
        return self.ubar - self.ulow


def _rk4_step(ubar, ulow, dt, rhs):
    k1 = rhs(ubar, ulow)
    k2 = rhs(ubar + 0.5 * dt * k1[0], ulow + 0.5 * dt * k1[1])
    k3 = rhs(ubar + 0.5 * dt * k2[0], ulow + 0.5 * dt * k2[1])
    k4 = rhs(ubar + dt * k3[0], ulow + dt * k3[1])
    return (
        ubar + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
        ulow + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
    )


def integrate_comparison(s0: ComparisonState, chi: float, m: float, gamma: float,
                         alpha: float, beta: float, sigma: float, lam: float,
                         t_final: float, dt: float,
                         max_halvings: int = 6) -> ComparisonTrajectory:
    """Fixed-step RK4 integration of the pair, retried at dt/2 on ordering loss.

    The bracketing ordering 0 < ulow < xi < ubar must hold at every output
    time (equality at xi is accepted for trajectories started on it).
    """
    xi = equilibrium(sigma, beta).xi
    if not (0 < s0.ulow <= xi <= s0.ubar):
        raise ValueError(
            f"initial pair ({s0.ulow}, {s0.ubar}) does not bracket xi={xi}")

    def rhs(ub, ul):
        return comparison_rhs(ub, ul, chi, m, gamma, alpha, beta, sigma, lam, xi)

    for halving in range(max_halvings + 1):
        step = dt / 2**halving
        n_steps = max(1, int(math.ceil(t_final / step)))
        step = t_final / n_steps
        times = np.empty(n_steps + 1)
        ubars = np.empty(n_steps + 1)
        ulows = np.empty(n_steps + 1)
        times[0], ubars[0], ulows[0] = s0.t, s0.ubar, s0.ulow
        ok = True
        ub, ul = s0.ubar, s0.ulow
        for i in range(1, n_steps + 1):
            try:
                ub, ul = _rk4_step(ub, ul, step, rhs)
            except (ValueError, OverflowError, FloatingPointError):
                ok = False
                break
            if not (np.isfinite(ub) and np.isfinite(ul)) \
                    or not (0 < ul <= xi <= ub):
                ok = False
                break
            times[i] = s0.t + i * step
            ubars[i] = ub
            ulows[i] = ul
        if ok:
            return ComparisonTrajectory(times=times, ubar=ubars, ulow=ulows, xi=xi)
    raise IntegratorFailure(
        f"ordering 0 < ulow < xi < ubar lost even at dt={dt / 2**max_halvings:g}")


def estimate_rate(trajectory: ComparisonTrajectory) -> float | None:
    """Least-squares slope of log(gap) over the final half of the trajectory.

    Returns None when the gap is not decreasing over that tail (or is
    already at rounding level), in which case no decay rate is defined.
    """
    n = len(trajectory.times)
    tail = slice(n // 2, n)
    t = trajectory.times[tail]
    gap = trajectory.gap[tail]
    scale = max(trajectory.xi, abs(trajectory.ubar[0]))
    if np.all(gap <= 1e-13 * scale):
        return None
    if gap[-1] >= gap[0]:
        return None
    mask = gap > 0
    if mask.sum() < 2:
        return None
    slope = np.polyfit(t[mask], np.log(gap[mask]), 1)[0]
    return float(slope)
