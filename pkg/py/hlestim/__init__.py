"""Calculators and brute-force oracles for Heisenberg-limited estimation of many observables."""

__version__ = "0.1.0"

from .errors import ConfigError, ConvergenceError, DomainError, HlestimError  # noqa: E402

__all__ = ["__version__", "HlestimError", "DomainError", "ConvergenceError", "ConfigError"]
