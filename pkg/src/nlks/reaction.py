"""Nonlocal logistic reaction u^alpha * (1 - sigma * avg(u^beta)).

The dampening factor is a single domain-average scalar, so the sign of the
reaction is uniform across the domain at each time level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Field, mean_integral


@dataclass(frozen=True)
class ReactionParams:
    alpha: float
    beta: float
    sigma: float
    lam: float

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if self.beta <= 1:
            raise ValueError(f"beta must be > 1, got {self.beta}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.lam <= 0:
            raise ValueError(f"lam must be > 0, got {self.lam}")


def nonlocal_factor(u: Field, p: ReactionParams) -> float:
    """sigma times the domain average of u^beta; one scalar per time level."""
    powered = Field(u.grid, np.maximum(u.values, 0.0) ** p.beta)
    return p.sigma * mean_integral(powered)


def reaction_term(u: Field, p: ReactionParams) -> Field:
    """Pointwise lam * u^alpha * (1 - sigma * avg(u^beta))."""
    factor = 1.0 - nonlocal_factor(u, p)
    values = p.lam * np.maximum(u.values, 0.0) ** p.alpha * factor
    return Field(u.grid, values)
