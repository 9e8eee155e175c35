from __future__ import annotations

from sincsmooth.markov.simulate import simulate_ar1, simulate_coupled_ar
from sincsmooth.markov.transition import TransitionEvaluation, transition_at, transition_grid

__all__ = [
    "TransitionEvaluation",
    "simulate_ar1",
    "simulate_coupled_ar",
    "transition_at",
    "transition_grid",
]
