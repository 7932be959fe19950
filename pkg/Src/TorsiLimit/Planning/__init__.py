# File: Init.py
# Path: /root/pkg/Src/TorsiLimit/Planning/__init__.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 20:10PM

"""Planning package.

Site screening, the allocation LP and the FFT compliance check.
"""

__all__: list[str] = []
