from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional, TypeVar

from dotenv import load_dotenv

from .errors import ConfigError

T = TypeVar("T")

EIGENSOLVERS = ("jacobi", "lapack")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

_EXAMPLE_ENV = (
    "\nExample .env:\n"
    "    HLESTIM_LOG_LEVEL=INFO\n"
    "    HLESTIM_WORKERS=4\n"
    "    HLESTIM_EIGENSOLVER=lapack\n"
    "    HLESTIM_QAE_POINTS=10000\n"
    "    HLESTIM_QPE_POINTS=100000\n"
    "    HLESTIM_HOST=127.0.0.1\n"
    "    HLESTIM_PORT=5000\n"
)


# -----------------------
# Env parsing helpers
# -----------------------

def _read(name: str, default: T, parse: Callable[[str], T], check: Callable[[T], bool], hint: str) -> T:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = parse(raw.strip())
    except ValueError:
        value = None
    if value is None or not check(value):
        raise ConfigError(
            "hlestim configuration error:\n"
            f"{name}={raw!r} is invalid ({hint}).\n\n"
            "Make sure your .env file is in the SAME DIRECTORY where you run the command.\n"
            + _EXAMPLE_ENV
        )
    return value


# -----------------------
# Config
# -----------------------

@dataclass(frozen=True)
class EstimatorConfig:
    log_level: str = "WARNING"
    workers: int = 4
    eigensolver: str = "lapack"  # used for W(θ) sweeps; jacobi stays selectable
    qae_points: int = 10_000
    qpe_points: int = 100_000
    host: str = "127.0.0.1"
    port: int = 5000

    @staticmethod
    def from_env(env_file: Optional[Path] = None) -> "EstimatorConfig":
        # Explicitly load .env from current working directory
        load_dotenv(dotenv_path=env_file or Path.cwd() / ".env", override=True)

        return EstimatorConfig(
            log_level=_read("HLESTIM_LOG_LEVEL", "WARNING", str.upper,
                            lambda v: v in LOG_LEVELS, "one of " + ", ".join(LOG_LEVELS)),
            workers=_read("HLESTIM_WORKERS", 4, int, lambda v: v >= 1, "a positive integer"),
            eigensolver=_read("HLESTIM_EIGENSOLVER", "lapack", str.lower,
                              lambda v: v in EIGENSOLVERS, "jacobi or lapack"),
            qae_points=_read("HLESTIM_QAE_POINTS", 10_000, int, lambda v: v >= 2, "an integer >= 2"),
            qpe_points=_read("HLESTIM_QPE_POINTS", 100_000, int, lambda v: v >= 2, "an integer >= 2"),
            host=_read("HLESTIM_HOST", "127.0.0.1", str, lambda v: bool(v), "a host name"),
            port=_read("HLESTIM_PORT", 5000, int, lambda v: 0 < v < 65536, "a TCP port"),
        )


@lru_cache(maxsize=1)
def load_config() -> EstimatorConfig:
    """Process-wide config, read from the environment once."""
    return EstimatorConfig.from_env()
