"""Tests for Planning.Compliance."""

import numpy as np
import pytest
from conftest import sine

from TorsiLimit.ErrorHandling import ComplianceInputError
from TorsiLimit.Planning.Compliance import (
    aligned_windows,
    check_sites,
    compliance_check,
    subsynchronous_spectrum,
    window_amplitude_sums,
)


class TestComplianceCheck:
    """Single-window verdicts."""

    def test_single_tone_at_the_limit(self) -> None:
        """A bin-centred tone sums to its own amplitude; the verdict flips just below it."""
        series = sine(32.39, 20.0, 1000.0, 10.0)
        assert compliance_check(series, 1000.0, 32.39).passed
        result = compliance_check(series, 1000.0, 32.38)
        assert not result.passed
        assert result.amplitude_sum == pytest.approx(32.39, rel=1e-9)
        assert result.margin == pytest.approx(-0.01, abs=1e-6)

    def test_offset_is_removed(self) -> None:
        series = sine(2.0, 15.0, 1000.0, 10.0, offset=400.0)
        assert compliance_check(series, 1000.0, 2.0).amplitude_sum == pytest.approx(2.0, rel=1e-9)

    def test_tones_add(self) -> None:
        series = sine(3.0, 10.0, 1000.0, 10.0) + sine(4.0, 25.5, 1000.0, 10.0, phase=1.0)
        assert compliance_check(series, 1000.0, 10.0).amplitude_sum == pytest.approx(7.0, rel=1e-9)

    def test_every_bin_counts(self) -> None:
        """Sub-microwatt content still adds to the sum."""
        series = sine(5e-7, 20.0, 1000.0, 10.0)
        assert compliance_check(series, 1000.0, 1.0).amplitude_sum == pytest.approx(5e-7, rel=1e-6)
        result = compliance_check(series, 1000.0, 4e-7)
        assert not result.passed

    def test_supersynchronous_content_ignored(self) -> None:
        series = sine(1.0, 30.0, 1000.0, 10.0) + sine(50.0, 120.0, 1000.0, 10.0)
        result = compliance_check(series, 1000.0, 1.0)
        assert result.passed
        assert result.f_hz.max() < 60.0

    def test_spectrum_bins(self) -> None:
        freqs, amplitudes = subsynchronous_spectrum(sine(1.0, 20.0, 1000.0, 10.0), 1000.0)
        assert freqs[0] == pytest.approx(0.1)
        assert freqs[int(np.argmax(amplitudes))] == pytest.approx(20.0)

    def test_window_must_be_ten_seconds(self) -> None:
        with pytest.raises(ComplianceInputError, match="exactly"):
            compliance_check(sine(1.0, 20.0, 1000.0, 9.9), 1000.0, 5.0)

    def test_sampling_too_slow(self) -> None:
        with pytest.raises(ComplianceInputError, match="below"):
            compliance_check(sine(1.0, 20.0, 100.0, 10.0), 100.0, 5.0)

    def test_carries_bus(self) -> None:
        assert compliance_check(sine(1.0, 20.0, 1000.0, 10.0), 1000.0, 5.0, bus=12).bus == 12


class TestWindows:
    """Long recordings."""

    def test_aligned_windows_drop_the_tail(self) -> None:
        windows = list(aligned_windows(np.arange(25000.0), 1000.0))
        assert len(windows) == 2
        assert windows[1][0] == 10000.0

    def test_window_sums(self) -> None:
        series = np.concatenate((sine(1.0, 20.0, 1000.0, 10.0), sine(3.0, 20.0, 1000.0, 10.0)))
        np.testing.assert_allclose(window_amplitude_sums(series, 1000.0), [1.0, 3.0], rtol=1e-9)


class TestCheckSites:
    """Several sites at once."""

    def test_each_site_against_its_allocation(self) -> None:
        series = {4: sine(5.0, 20.0, 1000.0, 10.0), 9: sine(5.0, 20.0, 1000.0, 10.0)}
        results = check_sites(series, 1000.0, {4: 6.0, 9: 4.0}, max_workers=2)
        assert results[4].passed
        assert not results[9].passed

    def test_missing_allocation(self) -> None:
        with pytest.raises(ComplianceInputError, match="no allocation"):
            check_sites({4: sine(5.0, 20.0, 1000.0, 10.0)}, 1000.0, {})
