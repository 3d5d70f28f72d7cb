from .algorithms import (QueryMode, bernoulli_swa, const_left_ideal_swa, exact_oracle, lb_direct_swa,
                         loglog_suffix_free_swa, mod_prime_swa, path_summary_swa, prime_pool, solve_xi_epsilon,
                         trivial_reject_swa)
from .base import ExactOracle, Factory, SwaError, SwaInstance, window_truth
from .combinators import amplification_copies, amplify, boolean_combine, space_cap
from .compile import CompiledSpec, LanguageSpec, Setting, compile_spec, load_spec, parse_setting, spec_from_json

__all__ = [
    "CompiledSpec", "ExactOracle", "Factory", "LanguageSpec", "QueryMode", "Setting", "SwaError", "SwaInstance",
    "amplification_copies", "amplify", "bernoulli_swa", "boolean_combine", "compile_spec", "const_left_ideal_swa",
    "exact_oracle", "lb_direct_swa", "load_spec", "loglog_suffix_free_swa", "mod_prime_swa", "parse_setting",
    "path_summary_swa", "prime_pool", "solve_xi_epsilon", "space_cap", "spec_from_json", "trivial_reject_swa",
    "window_truth",
]
