"""Stochastic games whose discounted equilibrium payoffs do not converge."""
from .classic import (EquilibriumSetDescription, bimatrix_support_enum, build_example1, build_example15,
                      ex1_regime, ex1_spe_check, ex15_payoff_set, ex15_stage_nash, stationary_eq_verify)
from .core import (Belief, FiniteStochasticGame, HiddenStochasticGame, belief_game_reduce, belief_update,
                   eval_discounted_payoffs, known_payoffs_partition, load_game, save_game)
from .hidden import (build_final_game, build_gamma_star, first_stage_certificates, hsg_simulate,
                     perturbed_bounds, prop6_check, regime_classify)
from .jump import (JumpGameParams, find_parameters, joint_delta_enumerate, solve_game,
                   zerosum_vi_oracle)
from .mdp import MdpParams, critical_threshold, level_set_classify, mdp_value, mdp_vi_oracle, score_bounds
from .numerics import DiscountFactor, DomainError
from .risk import RiskChain, expected_hitting_time, hit_factor, hit_factor_mc, hit_factor_recursion
from .solvers import SeedStream, VIConfig, mc_engine, mdp_value_iteration, single_controller_vi

__version__ = "0.1.0"
