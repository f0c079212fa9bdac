"""Classification of parameter vectors against the analytic regime boundaries.

Two mutually exclusive global-existence branches:
    branch 1: gamma + m <= alpha < 1 + 2*beta/n
    branch 2: (n + 4)/2 - beta < alpha < gamma + m
Collapse prevention holds on beta > (n/2)*(gamma + m - 1); below or at that
boundary blow-up is an open question. Convergence to the equilibrium is
guaranteed on a classified branch when alpha + beta >= gamma + m and
lam > 2*chi.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

EXISTENCE_BRANCH_1 = "global_branch_1"
EXISTENCE_BRANCH_2 = "global_branch_2"
EXISTENCE_UNCLASSIFIED = "unclassified"
COLLAPSE_PREVENTION_HOLDS = "collapse_prevention_holds"
OPEN_REGIME = "open_regime"
CONVERGENCE_GUARANTEED = "guaranteed"
CONVERGENCE_NOT_GUARANTEED = "not_guaranteed"


@dataclass(frozen=True)
class RegimeReport:
    existence: str
    remark_boundary: str
    convergence: str
    details: dict


def classify(n: int, alpha: float, beta: float, gamma: float, m: float,
             chi: float, lam: float, sigma: float) -> RegimeReport:
    """Evaluate all regime inequalities with exact comparisons."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    if alpha < 1 or gamma < 1 or m < 1:
        raise ValueError(f"alpha, gamma, m must be >= 1, got {(alpha, gamma, m)}")
    if beta <= 1:
        raise ValueError(f"beta must be > 1, got {beta}")
    if chi <= 0 or lam < 0 or sigma <= 0:
        raise ValueError(f"chi, sigma must be > 0 and lam >= 0, got {(chi, lam, sigma)}")

    branch1_upper = 1.0 + 2.0 * beta / n
    branch2_lower = (n + 4.0) / 2.0 - beta
    prevention_boundary = 0.5 * n * (gamma + m - 1.0)

    if gamma + m <= alpha < branch1_upper:
        existence = EXISTENCE_BRANCH_1
    elif branch2_lower < alpha < gamma + m:
        existence = EXISTENCE_BRANCH_2
    else:
        existence = EXISTENCE_UNCLASSIFIED

    remark = (COLLAPSE_PREVENTION_HOLDS if beta > prevention_boundary
              else OPEN_REGIME)

    converges = (existence != EXISTENCE_UNCLASSIFIED
                 and alpha + beta >= gamma + m
                 and lam > 2.0 * chi)
    convergence = CONVERGENCE_GUARANTEED if converges else CONVERGENCE_NOT_GUARANTEED

    return RegimeReport(
        existence=existence,
        remark_boundary=remark,
        convergence=convergence,
        details={
            "alpha": alpha, "beta": beta, "gamma": gamma, "m": m,
            "n": n, "chi": chi, "lam": lam, "sigma": sigma,
            "growth_vs_dampening": gamma + m,
            "branch1_upper": branch1_upper,
            "branch2_lower": branch2_lower,
            "prevention_boundary": prevention_boundary,
            "alpha_plus_beta": alpha + beta,
            "two_chi": 2.0 * chi,
        },
    )


def sweep(n: int, chi: float, lam: float, sigma: float,
          alpha, beta, gamma, m) -> list[tuple[dict, RegimeReport]]:
    """Classify the cartesian product of the given exponent ranges.

    Ranges iterate lexicographically in the order (alpha, beta, gamma, m).
    """
    alpha, beta, gamma, m = (list(alpha), list(beta), list(gamma), list(m))
    if not (alpha and beta and gamma and m):
        raise ValueError("empty parameter grid")
    out = []
    for a, b, g, mm in itertools.product(alpha, beta, gamma, m):
        point = {"n": n, "alpha": a, "beta": b, "gamma": g, "m": mm,
                 "chi": chi, "lam": lam, "sigma": sigma}
        out.append((point, classify(**point)))
    return out
