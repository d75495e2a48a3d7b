"""
Toolkit configuration
"""
import logging
import os
from dotenv import load_dotenv

load_dotenv()

# Equality tolerance on reals; also the relative slack of log-domain comparisons
TAU_EQ = 1e-12

# Converged solvers must satisfy d(x, Ux) <= RESIDUAL_FACTOR * tol
RESIDUAL_FACTOR = 10


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name, "").strip()
    return int(raw) if raw else default


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name, "").strip()
    return float(raw) if raw else default


class ToolkitConfig:
    """Defaults for checks, solvers and the CLI (overridable from .env)"""
    SEED = _env_int("EXPANSIVE_SEED", 20240601)
    TOL = _env_float("EXPANSIVE_TOL", 1e-10)
    MAX_ITER = _env_int("EXPANSIVE_MAX_ITER", 100_000)
    CAUCHY_WINDOW = _env_int("EXPANSIVE_CAUCHY_WINDOW", 50)
    SAMPLE_BUDGET = _env_int("EXPANSIVE_SAMPLE_BUDGET", 10_000)
    GRID_POINTS = _env_int("EXPANSIVE_GRID_POINTS", 100_000)
    DEPTH = _env_int("EXPANSIVE_DEPTH", 64)
    SEARCH_DEPTH_LIMIT = _env_int("EXPANSIVE_SEARCH_DEPTH_LIMIT", 1 << 20)
    LOG_LEVEL = os.getenv("EXPANSIVE_LOG_LEVEL", "WARNING").strip().upper()

    VERSION = "0.3.0"

    @classmethod
    def summary(cls) -> dict:
        """Active defaults, echoed into every run report"""
        return {
            "seed": cls.SEED,
            "tol": cls.TOL,
            "max_iter": cls.MAX_ITER,
            "cauchy_window": cls.CAUCHY_WINDOW,
            "sample_budget": cls.SAMPLE_BUDGET,
            "grid_points": cls.GRID_POINTS,
            "depth": cls.DEPTH,
            "search_depth_limit": cls.SEARCH_DEPTH_LIMIT,
            "tau_eq": TAU_EQ,
        }

    @classmethod
    def configure_logging(cls) -> None:
        """Attach a stderr handler to the `expansive` logger tree"""
        logger = logging.getLogger("expansive")
        if not logger.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
            logger.addHandler(handler)
        logger.setLevel(getattr(logging, cls.LOG_LEVEL, logging.WARNING))
