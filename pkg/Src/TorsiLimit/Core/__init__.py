# File: Init.py
# Path: /root/pkg/Src/TorsiLimit/Core/__init__.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 20:10PM

"""Core package for TorsiLimit.

Domain types, per-unit conversions and the study configuration.
"""

__all__: list[str] = []
