"""Integral maximum flow on bipartite assignment networks.

Source -> agent edges have capacity one, agent -> slot edges capacity one,
slot -> sink edges carry the slot capacities.  Augmenting paths are found
breadth-first with neighbors visited in node-index order, so results are
reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import InvalidInput


@dataclass(frozen=True)
class FlowNetwork:
    num_agents: int
    slot_caps: tuple[int, ...]
    edges: frozenset[tuple[int, int]]  # (agent, slot)

    def __post_init__(self):
        if any(c < 0 for c in self.slot_caps):
            raise InvalidInput("slot capacities must be nonnegative")
        for a, s in self.edges:
            if not (0 <= a < self.num_agents and 0 <= s < len(self.slot_caps)):
                raise InvalidInput(f"edge ({a},{s}) out of range")

    @property
    def source(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return 1 + self.num_agents + len(self.slot_caps)

    def agent_node(self, a: int) -> int:
        return 1 + a

    def slot_node(self, s: int) -> int:
        return 1 + self.num_agents + s


def max_flow(net: FlowNetwork) -> tuple[int, dict[int, int]]:
    """Maximum flow value plus one integral agent -> slot assignment."""
    size = net.sink + 1
    cap: list[dict[int, int]] = [dict() for _ in range(size)]

    def add(u: int, v: int, c: int):
        cap[u][v] = cap[u].get(v, 0) + c
        cap[v].setdefault(u, 0)

    for a in range(net.num_agents):
        add(net.source, net.agent_node(a), 1)
    for a, s in sorted(net.edges):
        add(net.agent_node(a), net.slot_node(s), 1)
    for s, c in enumerate(net.slot_caps):
        add(net.slot_node(s), net.sink, c)

    value = 0
    while True:
        parent = {net.source: net.source}
        queue = deque([net.source])
        while queue and net.sink not in parent:
            u = queue.popleft()
            for v in sorted(cap[u]):
                if v not in parent and cap[u][v] > 0:
                    parent[v] = u
                    queue.append(v)
        if net.sink not in parent:
            break
        # All arc capacities on an augmenting path are >= 1 and the
        # bottleneck is 1 because agent arcs are unit.
        v = net.sink
        while v != net.source:
            u = parent[v]
            cap[u][v] -= 1
            cap[v][u] += 1
            v = u
        value += 1

    assignment: dict[int, int] = {}
    for a, s in net.edges:
        if cap[net.slot_node(s)].get(net.agent_node(a), 0) > 0:
            assignment[a] = s
    return value, assignment
