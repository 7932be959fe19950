# File: Init.py
# Path: /root/pkg/Src/TorsiLimit/Dynamics/__init__.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 20:10PM

"""Shaft dynamics package.

Linearized multi-mass shaft model, frequency response and the nonlinear
time-domain simulation.
"""

__all__: list[str] = []
