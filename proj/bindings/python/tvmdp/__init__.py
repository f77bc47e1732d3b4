"""Solver for MDPs with time-varying geometric discounting.

Thin wrapper over the native module; see the native docstrings for the API.
"""

try:
    from ._tvmdp import *  # noqa: F401,F403  (installed layout)
except ImportError:
    from _tvmdp import *  # noqa: F401,F403  (build-tree layout)

__all__ = [
    "Instance",
    "builtin_instance",
    "solve",
    "gamma_set",
    "exact_spe",
    "eps_spe",
    "verify",
    "valit",
    "reduce_to_spe_start",
    "preference_reversal",
    "continuity_bound",
    "ParseError",
    "DegenerateLimitError",
    "HorizonCapError",
    "EnumerationCapError",
]
