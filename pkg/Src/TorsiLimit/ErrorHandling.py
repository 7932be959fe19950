# File: ErrorHandling.py
# Path: /root/pkg/Src/TorsiLimit/ErrorHandling.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 09:31AM

"""Exception hierarchy and centralized error reporting for TorsiLimit.

Every failure the toolkit raises deliberately derives from TorsiLimitError so
the CLI can map it onto an exit code. The report_* helpers log with a
standardized context payload.
"""

import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Union


class ErrorLevel(str, Enum):
    """Error severity levels for logging."""

    INFO = "info"
    WARNING = "warning"
    ERROR = "error"


class TorsiLimitError(Exception):
    """Base class for all toolkit errors."""

    exit_code: int = 1


class InputValidationError(TorsiLimitError):
    """An input file violates its schema or a domain invariant."""

    exit_code = 2

    def __init__(self, message: str, field_path: Optional[str] = None) -> None:
        self.field_path = field_path
        prefix = f"{field_path}: " if field_path else ""
        super().__init__(f"{prefix}{message}")


class ConfigurationError(TorsiLimitError):
    """Study configuration is incomplete or inconsistent."""

    exit_code = 2


class DomainError(TorsiLimitError, ValueError):
    """Arguments fall outside the mathematical domain of an operation."""


class YieldExceededError(DomainError):
    """Mean stress already violates the static yield boundary."""

    def __init__(self, sigma_m: float, yield_strength: float) -> None:
        self.sigma_m = sigma_m
        self.yield_strength = yield_strength
        super().__init__(
            f"|mean stress| {abs(sigma_m):.6g} reaches yield strength {yield_strength:.6g}"
        )


class PowerFlowDivergenceError(TorsiLimitError):
    """Newton-Raphson failed to reach the mismatch tolerance."""

    def __init__(
        self, worst_bus: Any, max_mismatch: float, iterations: int, reason: str = ""
    ) -> None:
        self.worst_bus = worst_bus
        self.max_mismatch = max_mismatch
        self.iterations = iterations
        detail = f" ({reason})" if reason else ""
        super().__init__(
            f"power flow diverged after {iterations} iterations; worst mismatch "
            f"{max_mismatch:.3e} p.u. at bus {worst_bus}{detail}"
        )


class SimulationInstabilityError(TorsiLimitError):
    """Time-domain trajectory left the small-deviation region."""

    def __init__(self, time_s: float, speed_deviation: float, label: str = "") -> None:
        self.time_s = time_s
        self.speed_deviation = speed_deviation
        self.label = label
        where = f" in scenario '{label}'" if label else ""
        super().__init__(
            f"speed deviation {speed_deviation:.4f} p.u. at t={time_s:.4f} s{where}"
        )


class LPUnboundedError(TorsiLimitError):
    """The linear program has no finite optimum."""


class ComplianceInputError(DomainError):
    """Measured series cannot be evaluated by the FFT compliance check."""


def report_error(
    exception: Exception,
    component: str,
    context_name: Optional[str] = None,
    context_data: Optional[Dict[str, Any]] = None,
    level: ErrorLevel = ErrorLevel.ERROR,
) -> None:
    """Report an exception with standardized logging and context.

    Args:
        exception: The exception to report
        component: Logger name of the reporting component
        context_name: Optional context name (e.g., "power_flow", "parsing")
        context_data: Optional dictionary of context data
        level: Error severity level
    """
    logger = logging.getLogger(component)
    log_method = getattr(logger, level.value, logger.error)

    extra_data = {"context": context_name, "data": context_data}

    try:
        log_method(
            f"Error in {component}: {exception}",
            exc_info=level == ErrorLevel.ERROR,
            extra=extra_data,
        )
    except Exception:
        pass


def report_file_error(
    exception: Exception,
    file_path: Union[str, Path],
    operation: str = "read",
    additional_context: Optional[Dict[str, Any]] = None,
) -> None:
    """Report file-related errors with standardized context.

    Args:
        exception: The exception that occurred
        file_path: Path to the file
        operation: The operation that failed (read, write, parse)
        additional_context: Any additional context data
    """
    context_data: Dict[str, Any] = {
        "file_path": str(file_path),
        "operation": operation,
    }

    if additional_context:
        context_data.update(additional_context)

    report_error(
        exception=exception,
        component="TorsiLimit.files",
        context_name="file_error",
        context_data=context_data,
        level=ErrorLevel.WARNING,
    )


def report_configuration_error(
    exception: Exception,
    config_file: Optional[Union[str, Path]] = None,
    config_section: Optional[str] = None,
    additional_context: Optional[Dict[str, Any]] = None,
) -> None:
    """Report configuration-related errors.

    Args:
        exception: The configuration exception
        config_file: Path to the configuration file
        config_section: Configuration section that failed
        additional_context: Additional context data
    """
    context_data: Dict[str, Any] = {
        "config_file": str(config_file) if config_file else None,
        "config_section": config_section,
    }

    if additional_context:
        context_data.update(additional_context)

    report_error(
        exception=exception,
        component="TorsiLimit.configuration",
        context_name="config_error",
        context_data=context_data,
        level=ErrorLevel.WARNING,
    )
