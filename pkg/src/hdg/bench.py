"""Cross-solver checking harness.

Generates seeded random instances, runs every applicable solver on both
stability notions, and demands unanimous YES/NO answers with verified
witnesses.  Any disagreement is reported (and the offending instance
serialized) for triage; the harness is both a CLI command and the
workhorse of the acceptance suite.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path

from .brute import solve_brute, solve_brute_positions
from .colors_ntcoal import solve_colors_ntcoal, solve_colors_totcoal
from .colors_size import solve_colors_size
from .colors_types import solve_colors_types
from .errors import HdgError, InstanceTooLarge, OwnColorViolation, SearchSpaceTooLarge
from .fileio import serialize_instance
from .ownhdg import own_ratio_orders, solve_ownhdg_nash
from .randgen import GenCaps, random_instance
from .stability import IS, NS, check_outcome

GENERAL_SOLVERS = (
    ("brute", solve_brute),
    ("brute-positions", solve_brute_positions),
    ("colors-size", solve_colors_size),
    ("colors-types", solve_colors_types),
    ("colors-ntcoal", solve_colors_ntcoal),
    ("colors-totcoal", solve_colors_totcoal),
)


@dataclass
class BenchReport:
    count: int = 0
    runs: int = 0
    yes: int = 0
    no: int = 0
    disagreements: list[str] = field(default_factory=list)
    witness_failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.witness_failures


def check_instance(instance, report: BenchReport, label: str, out_dir=None) -> None:
    """Run all applicable solvers on one instance; record mismatches."""
    try:
        own_ratio_orders(instance)
        own_ok = True
    except (OwnColorViolation, HdgError):
        own_ok = False
    for notion in (NS, IS):
        answers = {}
        for name, solver in GENERAL_SOLVERS:
            try:
                outcome = solver(instance, notion)
            except (InstanceTooLarge, SearchSpaceTooLarge):
                continue  # solver declined: not applicable at these caps
            answers[name] = outcome is not None
            report.runs += 1
            if outcome is not None and not check_outcome(instance, outcome, notion).stable:
                report.witness_failures.append(f"{label}/{notion}/{name}")
        if notion == NS and own_ok:
            outcome = solve_ownhdg_nash(instance)
            answers["own-nash"] = outcome is not None
            report.runs += 1
            if outcome is not None and not check_outcome(instance, outcome, NS).stable:
                report.witness_failures.append(f"{label}/{notion}/own-nash")
        if not answers:
            continue
        if len(set(answers.values())) > 1:
            report.disagreements.append(f"{label}/{notion}: {answers}")
            if out_dir is not None:
                path = Path(out_dir) / f"disagreement-{label.replace('/', '_')}.json"
                path.write_text(serialize_instance(instance))
        if next(iter(answers.values())):
            report.yes += 1
        else:
            report.no += 1


def run_bench(
    seed: int,
    count: int,
    caps: GenCaps = GenCaps(),
    out_dir=None,
    own_color_share: float = 0.3,
) -> BenchReport:
    rng = random.Random(seed)
    report = BenchReport(count=count)
    for i in range(count):
        own = rng.random() < own_color_share
        instance = random_instance(rng, caps, own_color=own)
        check_instance(instance, report, label=f"{seed}-{i}", out_dir=out_dir)
    return report
