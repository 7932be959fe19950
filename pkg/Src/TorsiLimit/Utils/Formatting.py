# File: Formatting.py
# Path: /root/pkg/Src/TorsiLimit/Utils/Formatting.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 12:02PM

"""Number formatting for artifacts and console tables."""

import math
from typing import Any, Optional, Union

SIGNIFICANT_DIGITS = 9


def round_significant(value: float, digits: int = SIGNIFICANT_DIGITS) -> Optional[float]:
    """Round to a fixed number of significant digits; non-finite values become None."""
    if not math.isfinite(value):
        return None
    rounded = float(f"{value:.{digits}g}")
    return 0.0 if rounded == 0 else rounded


def format_sig(value: float, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Fixed-significance text used in CSV artifacts (inf and nan kept literal)."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    rounded = float(f"{value:.{digits}g}")
    return f"{0.0 if rounded == 0 else rounded:.{digits}g}"


def format_number(value: Union[int, float], decimals: int = 0) -> str:
    """Format number with thousands separator.

    Args:
        value: Number to format
        decimals: Number of decimal places (default: 0)

    Returns:
        Formatted number string with thousands separator
    """
    if not math.isfinite(value):
        return "∞" if value > 0 else ("-∞" if value < 0 else "n/a")
    if decimals > 0:
        return f"{value:,.{decimals}f}"
    return f"{int(round(value)):,}"


def format_mw(value: float, decimals: int = 2) -> str:
    return f"{format_number(value, decimals)} MW"


def format_hz(value: float, decimals: int = 3) -> str:
    return f"{format_number(value, decimals)} Hz"


def format_percent(ratio: float, decimals: int = 1) -> str:
    """Format a ratio (0.25) as a percentage string (25.0%)."""
    if not math.isfinite(ratio):
        return format_number(ratio)
    return f"{ratio * 100:.{decimals}f}%"


def format_verdict(passed: Any) -> str:
    return "PASS" if passed else "FAIL"
