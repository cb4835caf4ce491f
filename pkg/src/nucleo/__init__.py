"""Exact least core and nucleolus of weighted voting games.

The nucleolus is computed by successive LPs whose separation oracle counts
coalitions by deficit with a pseudopolynomial dynamic program, so the running
time is polynomial in the number of agents and the largest weight.
"""

from .dp_oracle import DeficitProfile, build_tables, peel_witness, profile, top_deficits, witness_at
from .enumeration import brute_nucleolus, brute_profile, deficit_vector, lex_compare
from .errors import ContractError, GuardExceededError, NucleoError, ValidationError
from .game import Game, coalition, coalition_value, deficit, members, payoff, validate_game
from .solver import NucleolusSolver, SolverConfig, StageRecord, least_core, nucleolus

__all__ = [
    "ContractError",
    "DeficitProfile",
    "Game",
    "GuardExceededError",
    "NucleoError",
    "NucleolusSolver",
    "SolverConfig",
    "StageRecord",
    "ValidationError",
    "brute_nucleolus",
    "brute_profile",
    "build_tables",
    "coalition",
    "coalition_value",
    "deficit",
    "deficit_vector",
    "least_core",
    "lex_compare",
    "members",
    "nucleolus",
    "payoff",
    "peel_witness",
    "profile",
    "top_deficits",
    "validate_game",
    "witness_at",
]
