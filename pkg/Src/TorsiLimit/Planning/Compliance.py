# File: Compliance.py
# Path: /root/pkg/Src/TorsiLimit/Planning/Compliance.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 17:10PM

"""FFT compliance check of measured data-center power against its allocation."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.signal import detrend

from TorsiLimit.ErrorHandling import ComplianceInputError

logger = logging.getLogger(__name__)

WINDOW_S = 10.0


@dataclass(frozen=True)
class ComplianceResult:
    """Verdict and subsynchronous spectrum of one measurement window."""

    passed: bool
    amplitude_sum: float
    limit: float
    f_hz: np.ndarray
    amplitude_mw: np.ndarray
    bus: Optional[int] = None

    @property
    def margin(self) -> float:
        return self.limit - self.amplitude_sum


def subsynchronous_spectrum(
    series: Sequence[float], sample_rate_hz: float, f_sync_hz: float = 60.0
) -> Tuple[np.ndarray, np.ndarray]:
    """Single-sided amplitude spectrum (2|X_k|/n) of the detrended series on (0, f_s)."""
    values = np.asarray(series, dtype=float)
    n = values.size
    spectrum = np.fft.rfft(detrend(values, type="constant"))
    freqs = np.fft.rfftfreq(n, d=1.0 / sample_rate_hz)
    amplitudes = 2.0 * np.abs(spectrum) / n
    band = (freqs > 0) & (freqs < f_sync_hz)
    return freqs[band], amplitudes[band]


def _check_input(n: int, sample_rate_hz: float, f_sync_hz: float, window_s: float) -> None:
    if not sample_rate_hz >= 2.0 * f_sync_hz:
        raise ComplianceInputError(
            f"sampling {sample_rate_hz:g} Hz is below 2 x {f_sync_hz:g} Hz"
        )
    expected = window_s * sample_rate_hz
    if abs(n - expected) > 1e-6 * max(1.0, expected):
        raise ComplianceInputError(
            f"window holds {n} samples ({n / sample_rate_hz:.6g} s), "
            f"need exactly {window_s:g} s at {sample_rate_hz:g} Hz"
        )


def compliance_check(
    series: Sequence[float],
    sample_rate_hz: float,
    limit_mw: float,
    f_sync_hz: float = 60.0,
    window_s: float = WINDOW_S,
    bus: Optional[int] = None,
) -> ComplianceResult:
    """Sum the subsynchronous FFT amplitudes of one window and compare with the limit.

    Args:
        series: Power samples in MW covering exactly window_s seconds
        sample_rate_hz: Sampling rate, at least twice f_sync_hz
        limit_mw: Allocated fluctuation P_dc^(j)
        f_sync_hz: Synchronous frequency
        window_s: Window length (0.1 Hz bins for 10 s)
        bus: Optional site bus carried into the result

    Raises:
        ComplianceInputError: wrong window length or sampling too slow
    """
    values = np.asarray(series, dtype=float)
    _check_input(values.size, sample_rate_hz, f_sync_hz, window_s)
    freqs, amplitudes = subsynchronous_spectrum(values, sample_rate_hz, f_sync_hz)
    total = float(amplitudes.sum())
    passed = total <= limit_mw + 1e-9 * max(1.0, abs(limit_mw))
    where = f"bus {bus}: " if bus is not None else ""
    logger.info(
        f"{where}subsynchronous amplitude sum {total:.6g} MW vs limit {limit_mw:.6g} MW "
        f"-> {'PASS' if passed else 'FAIL'}"
    )
    return ComplianceResult(
        passed=passed,
        amplitude_sum=total,
        limit=float(limit_mw),
        f_hz=freqs,
        amplitude_mw=amplitudes,
        bus=bus,
    )


def aligned_windows(
    series: Sequence[float], sample_rate_hz: float, window_s: float = WINDOW_S
) -> Iterator[np.ndarray]:
    """Consecutive non-overlapping windows; a trailing partial window is dropped."""
    values = np.asarray(series, dtype=float)
    size = int(round(window_s * sample_rate_hz))
    for start in range(0, values.size - size + 1, size):
        yield values[start : start + size]


def window_amplitude_sums(
    series: Sequence[float],
    sample_rate_hz: float,
    f_sync_hz: float = 60.0,
    window_s: float = WINDOW_S,
) -> np.ndarray:
    """Subsynchronous amplitude sum of every aligned window."""
    sums = []
    for window in aligned_windows(series, sample_rate_hz, window_s):
        _, amplitudes = subsynchronous_spectrum(window, sample_rate_hz, f_sync_hz)
        sums.append(float(amplitudes.sum()))
    return np.array(sums, dtype=float)


def check_sites(
    series_by_bus: Mapping[int, Sequence[float]],
    sample_rate_hz: float,
    limits_by_bus: Mapping[int, float],
    f_sync_hz: float = 60.0,
    window_s: float = WINDOW_S,
    max_workers: Optional[int] = None,
) -> Dict[int, ComplianceResult]:
    """Independent compliance checks of several sites."""
    buses = sorted(series_by_bus)
    missing = [b for b in buses if b not in limits_by_bus]
    if missing:
        raise ComplianceInputError(f"no allocation for buses {missing}")

    def run(bus: int) -> ComplianceResult:
        return compliance_check(
            series_by_bus[bus], sample_rate_hz, limits_by_bus[bus], f_sync_hz, window_s, bus
        )

    if max_workers and max_workers > 1 and len(buses) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(run, buses))
    else:
        results = [run(bus) for bus in buses]
    return dict(zip(buses, results))


__all__ = [
    "ComplianceResult",
    "aligned_windows",
    "check_sites",
    "compliance_check",
    "subsynchronous_spectrum",
    "window_amplitude_sums",
]
