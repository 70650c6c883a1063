"""Adaptive proximal gradient solvers and the experiment harness."""

from ._core import (
    ConfigError,
    ParseError,
    adapg_stepsize,
    check,
    generate_lasso,
    parse_libsvm,
    preset_names,
    run_config,
    run_preset,
    solve_lasso,
)

__all__ = [
    "ConfigError",
    "ParseError",
    "adapg_stepsize",
    "check",
    "generate_lasso",
    "parse_libsvm",
    "preset_names",
    "run_config",
    "run_preset",
    "solve_lasso",
]
