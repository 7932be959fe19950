"""Tests for version management."""

import importlib.metadata
from unittest.mock import patch

from TorsiLimit import __version__
from TorsiLimit._version import get_version


class TestVersion:
    """Test suite for version utilities."""

    def test_version_is_string(self) -> None:
        """Test that __version__ is a non-empty string."""
        assert isinstance(__version__, str)
        assert __version__

    def test_get_version_from_metadata(self) -> None:
        """Test that installed metadata wins."""
        with patch("importlib.metadata.version", return_value="9.9.9"):
            assert get_version() == "9.9.9"

    def test_get_version_from_pyproject(self) -> None:
        """Test the source-checkout fallback reads pyproject.toml."""
        missing = importlib.metadata.PackageNotFoundError("torsilimit")
        with patch("importlib.metadata.version", side_effect=missing):
            assert get_version() == "1.0.0"

    def test_get_version_unknown(self) -> None:
        """Test 'unknown' when neither source is available."""
        missing = importlib.metadata.PackageNotFoundError("torsilimit")
        with patch("importlib.metadata.version", side_effect=missing):
            with patch("pathlib.Path.exists", return_value=False):
                assert get_version() == "unknown"
