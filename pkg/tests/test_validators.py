"""Tests for input validation and configuration"""
import pytest
import sys
import os

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.core.config import RESIDUAL_FACTOR, TAU_EQ, ToolkitConfig
from src.core.errors import SpecParseError
from src.core.validators import (
    validate_eta,
    validate_positive_int,
    validate_depth,
    validate_tolerance,
    validate_seed,
    validate_probe_scales,
    validate_unit_interval_grid,
    ValidationError
)


class TestValidators:
    """Test input validation"""

    def test_validate_eta_valid(self):
        assert validate_eta(2) == 2.0
        assert validate_eta(1.0001) == 1.0001

    def test_validate_eta_invalid(self):
        with pytest.raises(ValidationError, match="greater than 1"):
            validate_eta(1.0)

        with pytest.raises(ValidationError, match="greater than 1"):
            validate_eta(0.5)

        with pytest.raises(ValidationError, match="must be finite"):
            validate_eta(float("inf"))

        with pytest.raises(ValidationError, match="must be a real number"):
            validate_eta("2")

        with pytest.raises(ValidationError, match="must be a real number"):
            validate_eta(True)

    def test_validate_positive_int(self):
        assert validate_positive_int(64) == 64
        assert validate_depth(1) == 1

        with pytest.raises(ValidationError, match="must be at least 1"):
            validate_positive_int(0, name="budget")

        with pytest.raises(ValidationError, match="depth must be an integer"):
            validate_depth(2.5)

    def test_validate_tolerance(self):
        assert validate_tolerance(1e-10) == 1e-10

        with pytest.raises(ValidationError, match="positive and finite"):
            validate_tolerance(0.0)

        with pytest.raises(ValidationError, match="positive and finite"):
            validate_tolerance(-1e-3)

    def test_validate_seed(self):
        assert validate_seed(0) == 0

        with pytest.raises(ValidationError, match="non-negative"):
            validate_seed(-1)

    def test_validate_probe_scales(self):
        assert validate_probe_scales([1e-1, 1e-2, 1e-3]) == [1e-1, 1e-2, 1e-3]

        with pytest.raises(ValidationError, match="At least three"):
            validate_probe_scales([1e-1, 1e-2])

        with pytest.raises(ValidationError, match="strictly decreasing"):
            validate_probe_scales([1e-3, 1e-2, 1e-1])

    def test_validate_unit_interval_grid(self):
        assert validate_unit_interval_grid([0.5, 0.1]) == [0.1, 0.5]

        with pytest.raises(ValidationError, match=r"lie in \(0, 1\)"):
            validate_unit_interval_grid([0.5, 1.0])


class TestConfig:
    """Test configuration defaults"""

    def test_defaults(self):
        summary = ToolkitConfig.summary()
        assert summary["tau_eq"] == TAU_EQ == 1e-12
        assert RESIDUAL_FACTOR == 10
        assert set(summary) >= {"seed", "tol", "max_iter", "cauchy_window", "sample_budget", "depth"}

    def test_spec_parse_error_location(self):
        error = SpecParseError("bad value", line=3, column=7, field="eta")
        assert str(error) == "bad value (line 3, column 7, field 'eta')"
        assert str(SpecParseError("plain")) == "plain"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
