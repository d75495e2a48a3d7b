"""Input validation utilities for problem parameters"""
import math
from typing import Iterable, List


class ValidationError(Exception):
    """Custom exception for validation errors"""
    pass


def validate_eta(eta: float) -> float:
    """
    Validate the expansion exponent.

    Args:
        eta: The exponent η of the expansive inequality

    Returns:
        eta as a float

    Raises:
        ValidationError: If eta is not a finite real strictly greater than 1
    """
    if isinstance(eta, bool) or not isinstance(eta, (int, float)):
        raise ValidationError(f"eta must be a real number, got {type(eta).__name__}")

    eta = float(eta)
    if not math.isfinite(eta):
        raise ValidationError(f"eta must be finite, got {eta}")

    if eta <= 1.0:
        raise ValidationError(f"eta must be greater than 1, got {eta}")

    return eta


def validate_positive_int(value: int, name: str = "value") -> int:
    """
    Validate a strictly positive integer (budgets, depths, iteration caps).

    Raises:
        ValidationError: If value is not an integer or is below 1
    """
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{name} must be an integer, got {type(value).__name__}")

    if value < 1:
        raise ValidationError(f"{name} must be at least 1, got {value}")

    return value


def validate_depth(depth: int) -> int:
    """Truncation depth of the shrinking-fractions space"""
    return validate_positive_int(depth, name="depth")


def validate_tolerance(tol: float, name: str = "tol") -> float:
    """
    Validate a tolerance.

    Raises:
        ValidationError: If tol is not a finite positive real
    """
    if isinstance(tol, bool) or not isinstance(tol, (int, float)):
        raise ValidationError(f"{name} must be a real number, got {type(tol).__name__}")

    tol = float(tol)
    if not math.isfinite(tol) or tol <= 0.0:
        raise ValidationError(f"{name} must be positive and finite, got {tol}")

    return tol


def validate_seed(seed: int) -> int:
    """Seeds are non-negative integers"""
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ValidationError(f"seed must be an integer, got {type(seed).__name__}")

    if seed < 0:
        raise ValidationError(f"seed must be non-negative, got {seed}")

    return seed


def validate_probe_scales(scales: Iterable[float]) -> List[float]:
    """
    Validate θ probe scales: positive and strictly decreasing toward 0.

    Raises:
        ValidationError: If fewer than three scales are given or the order is wrong
    """
    scales = [float(t) for t in scales]
    if len(scales) < 3:
        raise ValidationError(f"At least three probe scales are needed, got {len(scales)}")

    if any(t <= 0.0 for t in scales):
        raise ValidationError("Probe scales must be positive")

    if any(b >= a for a, b in zip(scales, scales[1:])):
        raise ValidationError("Probe scales must be strictly decreasing")

    return scales


def validate_unit_interval_grid(grid: Iterable[float], name: str = "r_grid") -> List[float]:
    """Every entry must lie in the open interval (0, 1)"""
    grid = [float(r) for r in grid]
    if not grid:
        raise ValidationError(f"{name} must not be empty")

    bad = [r for r in grid if not 0.0 < r < 1.0]
    if bad:
        raise ValidationError(f"{name} entries must lie in (0, 1), got {bad}")

    return sorted(grid)
