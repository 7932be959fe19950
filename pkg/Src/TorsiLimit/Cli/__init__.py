# File: Init.py
# Path: /root/pkg/Src/TorsiLimit/Cli/__init__.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 20:10PM

"""Command-line package for TorsiLimit."""

__all__: list[str] = []
