# File: Init.py
# Path: /root/pkg/Src/TorsiLimit/__init__.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 09:20AM

"""TorsiLimit - subsynchronous fluctuation limits for AI data centers near turbine-generators."""

from TorsiLimit._version import __version__

__all__ = ["__version__"]
