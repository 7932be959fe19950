# File: Init.py
# Path: /root/pkg/Src/TorsiLimit/Network/__init__.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 20:10PM

"""Network package: power flow and interaction factors."""

__all__: list[str] = []
