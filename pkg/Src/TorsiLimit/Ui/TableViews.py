# File: TableViews.py
# Path: /root/pkg/Src/TorsiLimit/Ui/TableViews.py
# Standard: AIDEV-PascalCase-2.1
# Created: 2026-10-19
# Last Modified: 2026-10-19 18:30PM

"""Console summaries of study results.

Tables are rendered with Rich on stderr; machine-readable results only ever go
to the artifact files.
"""

import logging
import math
from typing import Mapping, Optional, Sequence

from rich.console import Console
from rich.table import Table
from rich.text import Text

from TorsiLimit.Limits.TerminalLimits import LimitProfile
from TorsiLimit.Network.InteractionFactors import IFMatrix
from TorsiLimit.Planning.Compliance import ComplianceResult
from TorsiLimit.Planning.Planner import LPResult, SiteBound
from TorsiLimit.Utils.Formatting import (
    format_hz,
    format_mw,
    format_number,
    format_percent,
    format_verdict,
)
from TorsiLimit.Validation.Validator import GeneratorVerdict

logger = logging.getLogger(__name__)


class TableViewsController:
    """Controller for the per-command result tables."""

    def __init__(self, console: Optional[Console] = None):
        """Initialize the table views controller.

        Args:
            console: Optional Console instance; defaults to a stderr console
        """
        self.console = console or Console(stderr=True)
        self.key_style = "cyan"
        self.value_style = "white"
        self.accent_style = "yellow"
        self.success_style = "green"
        self.failure_style = "bold red"
        self.border_style = "bright_blue"

    def _create_base_table(self, title: str) -> Table:
        return Table(
            title=title,
            title_style="bold cyan",
            show_header=True,
            header_style="bold",
            border_style=self.border_style,
            expand=False,
        )

    def _verdict_text(self, passed: bool) -> Text:
        style = self.success_style if passed else self.failure_style
        return Text(format_verdict(passed), style=style)

    def create_limits_table(self, profiles: Sequence[LimitProfile]) -> Table:
        """Terminal limits: P_e^max, its share of rating and the critical frequency."""
        table = self._create_base_table("Terminal fluctuation limits")
        table.add_column("Generator", style=self.key_style)
        table.add_column("MVA", justify="right")
        table.add_column("P_e^max", style=self.accent_style, justify="right")
        table.add_column("Share", justify="right")
        table.add_column("Critical f", justify="right")
        table.add_column("Modes", style=self.value_style)
        for p in profiles:
            modes = ", ".join(f"{w / math.tau:.2f}" for w in p.modes_rad_s)
            table.add_row(
                p.generator,
                format_number(p.mva_rating, 1),
                format_mw(p.P_e_max, 3),
                format_percent(p.P_e_max_fraction, 2),
                format_hz(p.critical_omega / math.tau, 3),
                modes or "-",
            )
        return table

    def create_if_table(self, IF: IFMatrix) -> Table:
        table = self._create_base_table(
            f"Interaction factors ({format_number(IF.perturbation_mw, 3)} MW step)"
        )
        table.add_column("Generator", style=self.key_style)
        for bus in IF.dc_buses:
            header = f"Bus {bus}" + (" (invalid)" if bus in IF.invalid_columns else "")
            table.add_column(header, justify="right")
        for i, gen in enumerate(IF.generators):
            table.add_row(gen, *[format_number(v, 4) for v in IF.values[i]])
        table.add_row(
            Text("Sum", style=self.accent_style),
            *[Text(format_number(v, 4), style=self.accent_style) for v in IF.column_sums()],
        )
        return table

    def create_plan_table(self, bounds: Sequence[SiteBound], result: LPResult) -> Table:
        """Ranked site bounds next to the LP allocation."""
        table = self._create_base_table(
            f"Data-center allocation (alpha = {result.alpha_final:.2f}, "
            f"{result.iterations} LP iterations)"
        )
        table.add_column("Rank", justify="right")
        table.add_column("Bus", style=self.key_style, justify="right")
        table.add_column("P_dc^max", justify="right")
        table.add_column("Binding", style=self.value_style)
        table.add_column("Allocation", style=self.accent_style, justify="right")
        for rank, b in enumerate(bounds, start=1):
            allocation = result.allocations.get(b.bus)
            table.add_row(
                str(rank),
                str(b.bus) + (" *" if b.existing else ""),
                format_mw(b.P_dc_max, 2),
                b.binding,
                format_mw(allocation, 2) if allocation is not None else "-",
            )
        table.add_row("", Text("Total", style=self.accent_style), "", "", format_mw(result.total_mw, 2))
        return table

    def create_verdict_table(self, verdicts: Sequence[GeneratorVerdict]) -> Table:
        table = self._create_base_table("Time-domain validation")
        table.add_column("Generator", style=self.key_style)
        table.add_column("Section")
        table.add_column("Amplitude / allowable", justify="right")
        table.add_column("Peak / allowable", justify="right")
        table.add_column("Damage D", justify="right")
        table.add_column("max |df|", justify="right")
        table.add_column("Verdict")
        for v in verdicts:
            for s in v.sections:
                ratio = s.sigma_a / s.allowable if s.allowable > 0 else float("inf")
                table.add_row(
                    v.generator,
                    s.label,
                    format_number(ratio, 3),
                    format_number(s.normalized_peak, 3),
                    f"{s.damage:.3e}",
                    format_hz(v.max_freq_dev_hz, 4),
                    self._verdict_text(s.passed and v.frequency_ok),
                )
            if not v.sections:
                table.add_row(
                    v.generator, "-", "-", "-", "-", format_hz(v.max_freq_dev_hz, 4),
                    self._verdict_text(v.passed),
                )
        return table

    def create_compliance_table(self, results: Mapping[Optional[int], ComplianceResult]) -> Table:
        table = self._create_base_table("FFT compliance (10 s window)")
        table.add_column("Bus", style=self.key_style, justify="right")
        table.add_column("Amplitude sum", justify="right")
        table.add_column("Limit", justify="right")
        table.add_column("Margin", justify="right")
        table.add_column("Verdict")
        for bus, r in results.items():
            table.add_row(
                "-" if bus is None else str(bus),
                format_mw(r.amplitude_sum, 3),
                format_mw(r.limit, 3),
                format_mw(r.margin, 3),
                self._verdict_text(r.passed),
            )
        return table

    def display(self, table: Table) -> None:
        self.console.print(table)
