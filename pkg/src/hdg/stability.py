"""Deviation detection and outcome verification.

An outcome is a partition of the agents.  An agent admits an NS-deviation
to a coalition C of the outcome (or to the empty coalition) when it
strictly prefers C plus itself over its current coalition; an IS-deviation
additionally requires every member of C to weakly approve the join.
Deviations ignore the size/count budgets: budgets only filter which
outcomes are acceptable, they do not change the game.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Instance,
    palette_of,
    prefers,
    reduce_counts,
    singleton_palette,
    weakly_prefers,
)
from .errors import InvalidOutcome

NS = "ns"
IS = "is"

# Sentinel target: deviate to the empty coalition, i.e. go alone.
EMPTY = -1


@dataclass(frozen=True)
class Outcome:
    coalitions: tuple[frozenset[int], ...]

    @classmethod
    def from_sets(cls, sets) -> "Outcome":
        return cls(tuple(frozenset(s) for s in sets))

    def member_of(self, n: int) -> list[int]:
        """Coalition index per agent; validates the partition property."""
        owner = [-1] * n
        for idx, block in enumerate(self.coalitions):
            if not block:
                raise InvalidOutcome("outcome contains an empty coalition")
            for agent in block:
                if not 0 <= agent < n:
                    raise InvalidOutcome(f"unknown agent {agent}")
                if owner[agent] != -1:
                    raise InvalidOutcome(f"agent {agent} in two coalitions")
                owner[agent] = idx
        missing = [i for i, b in enumerate(owner) if b == -1]
        if missing:
            raise InvalidOutcome(f"agents {missing} not covered")
        return owner


@dataclass(frozen=True)
class Deviation:
    agent: int
    target: int  # coalition index, or EMPTY
    kind: str  # NS or IS


def _deviation_search(instance: Instance, outcome: Outcome, kind: str):
    owner = outcome.member_of(instance.n)
    palettes = [palette_of(block, instance) for block in outcome.coalitions]
    for agent in range(instance.n):
        t = instance.types[agent]
        color = instance.colors[agent]
        own = palettes[owner[agent]]
        for idx, block in enumerate(outcome.coalitions):
            if idx == owner[agent]:
                continue
            joined_counts = [0] * instance.gamma
            for member in block:
                joined_counts[instance.colors[member]] += 1
            joined_counts[color] += 1
            joined = reduce_counts(joined_counts)
            if not prefers(t, joined, own, instance):
                continue
            if kind == IS:
                base = palettes[idx]
                if not all(
                    weakly_prefers(instance.types[m], joined, base, instance)
                    for m in block
                ):
                    continue
            return Deviation(agent, idx, kind)
        # Deviation to the empty coalition: always accepted under IS.
        alone = singleton_palette(color, instance.gamma)
        if prefers(t, alone, own, instance):
            return Deviation(agent, EMPTY, kind)
    return None


def find_ns_deviation(instance: Instance, outcome: Outcome) -> Deviation | None:
    """First NS-deviation in (agent id, target index, EMPTY last) order."""
    return _deviation_search(instance, outcome, NS)


def find_is_deviation(instance: Instance, outcome: Outcome) -> Deviation | None:
    """First IS-deviation, same witness order as find_ns_deviation."""
    return _deviation_search(instance, outcome, IS)


@dataclass(frozen=True)
class CheckResult:
    status: str  # "stable" | "unstable" | "budget"
    deviation: Deviation | None = None
    detail: str = ""

    @property
    def stable(self) -> bool:
        return self.status == "stable"


def check_outcome(instance: Instance, outcome: Outcome, notion: str) -> CheckResult:
    """Verify stability and budget compliance of an outcome."""
    if notion not in (NS, IS):
        raise ValueError(f"unknown stability notion {notion!r}")
    outcome.member_of(instance.n)  # validates the partition
    b = instance.budgets
    total = len(outcome.coalitions)
    nontrivial = sum(1 for c in outcome.coalitions if len(c) >= 2)
    biggest = max(len(c) for c in outcome.coalitions)
    if total > b.rho1:
        return CheckResult("budget", detail=f"{total} coalitions > rho1={b.rho1}")
    if nontrivial > b.rho2:
        return CheckResult(
            "budget", detail=f"{nontrivial} non-trivial coalitions > rho2={b.rho2}"
        )
    if biggest > b.sigma:
        return CheckResult("budget", detail=f"coalition of size {biggest} > sigma={b.sigma}")
    finder = find_ns_deviation if notion == NS else find_is_deviation
    dev = finder(instance, outcome)
    if dev is not None:
        return CheckResult("unstable", deviation=dev)
    return CheckResult("stable")
