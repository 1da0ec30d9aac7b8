"""Closed-form regret and mistake bounds. All logarithms are natural."""

import math

LOG_BASE = "natural"

FORMULAS = {
    "bl_agnostic": "8*sqrt(L*BL*T*ln(T))",
    "bl_agnostic_intermediate": "2e*sqrt(2*L*BL*T*ln(T))",
    "projection_agnostic": "e*sqrt(L*C*T*ln(T*C))",
    "uniform_lower": "(min(C,T)-1)/2",
    "bltree_lower": "min(BL,T)/C",
    "realizable_upper": "BL",
    "full_realizable_upper": "L",
    "adaptive_lower": "min(BL,T)",
}


def regret_bounds(L: int, BL: int, C: int, T: int) -> dict[str, float]:
    """Upper bounds on expected bandit regret.

    ``bl_agnostic`` is the headline ``8 sqrt(L BL T ln T)``;
    ``projection_agnostic`` is ``e sqrt(L C T ln(TC))`` for a learner over
    ``C`` remapped labels; ``bl_agnostic_intermediate`` is the step between
    them, valid when ``T > BL``.  For ``T <= BL`` regret is trivially at most
    ``BL``; note ``bl_agnostic`` is 0 at ``T = 1``.
    """
    if min(L, BL, C) < 0 or T < 1:
        raise ValueError("need L, BL, C >= 0 and T >= 1")
    return {
        "bl_agnostic": 8 * math.sqrt(L * BL * T * math.log(T)),
        "bl_agnostic_intermediate": 2 * math.e * math.sqrt(2 * L * BL * T * math.log(T)),
        "projection_agnostic": math.e * math.sqrt(L * C * T * math.log(T * C)) if C > 0 else 0.0,
    }


def lower_bounds(BL: int, C: int, T: int) -> dict[str, float]:
    """Expected-regret lower bounds for realizable streams."""
    return {
        "uniform_lower": (min(C, T) - 1) / 2,
        "bltree_lower": min(BL, T) / C if C > 0 else 0.0,
    }
