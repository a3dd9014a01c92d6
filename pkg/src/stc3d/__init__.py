"""Toolkit for the three-dimensional subsystem toric code (3D STC).

Subpackages cover GF(2) linear algebra, code construction on the open-boundary
cubic lattice, the chain-complex maps linking errors to syndromes, exact
minimum-weight perfect matching, the two-stage single-shot decoder, sustained
Monte Carlo experiments, and threshold/subthreshold fitting.

Submodules are imported lazily so that light-weight uses (e.g. only the GF(2)
helpers) do not pay for the heavier ones.
"""

from importlib import import_module

__version__ = "0.1.0"

_SUBMODULES = ("gf2", "code", "chain", "matching", "decoder", "sim", "stats", "cli", "viz")

_EXPORTS = {
    "SubsystemCode": "code",
    "build_code": "code",
    "code_parameters": "code",
    "graph_constants": "code",
    "distance_exhaustive": "code",
    "logical_z_representative": "code",
    "ChainComplex": "chain",
    "build_chain": "chain",
    "MatchingInstance": "matching",
    "MatchingResult": "matching",
    "build_instance": "matching",
    "solve_mwpm": "matching",
    "brute_force_mwpm": "matching",
    "estimate_syndrome": "decoder",
    "ideal_decode": "decoder",
    "single_shot_decode": "decoder",
    "is_logical_error": "decoder",
    "run_cycle": "sim",
    "run_trial": "sim",
    "run_batch": "sim",
    "estimate_pfail": "stats",
    "fit_threshold": "stats",
    "fit_subthreshold": "stats",
    "bound_f_tau": "stats",
}

__all__ = ["__version__", *_SUBMODULES, *_EXPORTS]


def __getattr__(name):
    if name in _SUBMODULES:
        return import_module(f".{name}", __name__)
    if name in _EXPORTS:
        module = import_module(f".{_EXPORTS[name]}", __name__)
        return getattr(module, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(__all__)
