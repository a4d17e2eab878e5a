"""Independent reference implementations used to check the real ones.

Everything here is deliberately naive: plain enumeration, no shared code
with the solvers under test.
"""

import itertools


def all_partitions(agents):
    agents = list(agents)
    if not agents:
        yield []
        return
    first, rest = agents[0], agents[1:]
    for sub in all_partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [sub[i] | {first}] + sub[i + 1 :]
        yield sub + [{first}]


def box_exhaustive_feasible(system):
    """Scan the full box [0, max rhs]^vars for a satisfying point."""
    top = 0
    for _, rhs in system.equalities + system.inequalities_le:
        top = max(top, rhs)
    for point in itertools.product(range(top + 1), repeat=system.num_vars):
        good = all(
            sum(c * x for c, x in zip(coeffs, point)) == rhs
            for coeffs, rhs in system.equalities
        ) and all(
            sum(c * x for c, x in zip(coeffs, point)) <= rhs
            for coeffs, rhs in system.inequalities_le
        )
        if good:
            return point
    return None


def brute_max_assignment(num_agents, slot_caps, edges):
    """Best agent->slot assignment size by scanning all possibilities."""
    slots = len(slot_caps)
    best = 0
    for choice in itertools.product(range(slots + 1), repeat=num_agents):
        loads = [0] * slots
        size = 0
        ok = True
        for agent, pick in enumerate(choice):
            if pick == slots:
                continue
            if (agent, pick) not in edges:
                ok = False
                break
            loads[pick] += 1
            size += 1
        if ok and all(l <= c for l, c in zip(loads, slot_caps)):
            best = max(best, size)
    return best
