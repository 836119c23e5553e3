"""Simulation, strategies and exact analysis for biased Waiter-Client and
Client-Waiter games on hypergraph and clause boards."""

__version__ = "0.1.0"

from .boards import (CLIENT, FREE, WAITER, ClauseBoard, HypergraphBoard, OwnedSets, PlainBoard,
                     board_from_description, rank_subset, unrank_subset)
from .families import (Criterion, FamilyTooLarge, SetFamily, client_cw_criterion, clique_family,
                       explicit_family, local_density_family, monochromatic_clause_family,
                       phi_potential, waiter_wc_criterion)
from .engine import (GameRules, GameState, IllegalMoveError, Kind, NonTerminationError, Outcome,
                     Transcript, legal_offer, play, winner_of_final_position)
from .strategies import CLIENTS, WAITERS, PotentialLedger, make_client, make_waiter
from .analyzers import (CapExceeded, ClauseSet, Hypergraph, chromatic_number, clique_number,
                        independence_number, is_one_degenerate, is_proper_coloring, is_r_colorable,
                        is_satisfiable, satisfies)
from .extraction import ExtractionFailed, extract_assignment, greedy_two_coloring
from .solver import (BudgetExceeded, MonotonicityError, Solver, best_response_strategy,
                     exact_threshold_bias, solve)
from .bounds import ReferenceConstants, TheoremBound, gap_factor, reference_constants, theorem_bound
from .experiments import (ExperimentConfig, bisect_threshold, bootstrap_ci, random_baseline, sweep)
