"""Time-based security periodic game: payoffs, simulation, best responses,
equilibria and VERIS incident-timing statistics."""

from .best_response import (BestResponseResult, Candidate, Player, Source,
                            attacker_candidates, br_attacker, br_defender,
                            brute_force_argmax, defender_candidates)
from .equilibrium import EquilibriumCandidate, find_equilibria
from .model import (CaseRegion, GameError, GameParams, PayoffProfile,
                    StrategyPair, classify_case, validate)
from .payoff import boundary_gap, compute_payoffs, compute_tau_delta
from .simulator import SimConfig, SimResult, simulate

__version__ = "0.1.0"
