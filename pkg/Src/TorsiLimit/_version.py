# File: Version.py
# Path: /root/pkg/Src/TorsiLimit/_version.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 09:20AM

"""Version management utilities.

The installed distribution metadata is the source of truth; a source checkout
falls back to reading pyproject.toml.
"""

import importlib.metadata
from pathlib import Path
from typing import Any, Dict

DISTRIBUTION_NAME = "torsilimit"


def get_version() -> str:
    """Get version from package metadata.

    Returns:
        Version string (e.g., "1.0.0")
    """
    try:
        return importlib.metadata.version(DISTRIBUTION_NAME)
    except importlib.metadata.PackageNotFoundError:
        return _get_version_from_pyproject()


def _get_version_from_pyproject() -> str:
    """Read the version directly from pyproject.toml.

    Returns:
        Version string or "unknown" if it cannot be determined
    """
    try:
        import tomllib
    except ImportError:
        try:
            import tomli as tomllib  # type: ignore[import-untyped,no-redef]
        except ImportError:
            return "unknown"

    current_dir = Path(__file__).parent
    for _ in range(5):
        pyproject_path = current_dir / "pyproject.toml"
        if pyproject_path.exists():
            try:
                with open(pyproject_path, "rb") as f:
                    data: Dict[str, Any] = tomllib.load(f)
            except (OSError, ValueError):
                return "unknown"
            version: str = data.get("project", {}).get("version", "unknown")
            return version
        current_dir = current_dir.parent

    return "unknown"


__version__: str = get_version()
