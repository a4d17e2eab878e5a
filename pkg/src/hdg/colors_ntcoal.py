"""Solver for bounded color count plus bounded non-trivial coalition count.

Guess the number of non-trivial coalitions and each one's per-color
composition; the leftover agents of each color sit in trivial coalitions.
An agent may occupy a slot only when it weakly prefers that coalition's
palette over joining any other guessed coalition (or going alone), so a
saturating assignment -- found by maximum flow on agents versus
(coalition, color) slots -- is exactly a stable outcome.

Individual stability additionally guesses, per coalition and color,
whether joiners of that color would be accepted, with a concrete blocking
member certifying each refusal, and per color pair whether some trivial
coalition would accept the second color.  Agents of one (color, type)
class are interchangeable, so blocking agents are drawn canonically from
each class, and accept/blocked guesses that can never affect any agent's
validity are fixed to their permissive value.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterator

from .core import Instance, Palette, reduce_counts, singleton_palette
from .errors import SearchSpaceTooLarge, SolverDivergence
from .maxflow import FlowNetwork, max_flow
from .prefs import TierCache
from .stability import IS, NS, Outcome, check_outcome

GUESS_CAP = 500_000

TRIVIAL = "trivial"


def _cap(default: int) -> int:
    env = os.environ.get("HDG_SEARCH_CAP")
    return int(env) if env else default


@dataclass(frozen=True)
class Guess:
    """One branch: d non-trivial compositions plus per-color trivial counts.

    The three optional fields exist only for individual stability:
    accepted[j][c] says coalition j would accept color-c joiners, blocked
    holds (c, c') pairs where no trivial c-coalition accepts color c', and
    blockers pins specific agents to the coalition they refuse joiners for.
    """

    compositions: tuple[tuple[int, ...], ...]
    trivial_counts: tuple[int, ...]
    accepted: tuple[tuple[bool, ...], ...] | None = None
    blocked: frozenset[tuple[int, int]] | None = None
    blockers: tuple[tuple[int, int], ...] = ()  # (agent, coalition index)


def _comp_palette(comp: tuple[int, ...]) -> Palette:
    return reduce_counts(comp)


def _joined(comp: tuple[int, ...], color: int) -> Palette:
    grown = list(comp)
    grown[color] += 1
    return reduce_counts(grown)


def _pair_palette(c1: int, c2: int, gamma: int) -> Palette:
    counts = [0] * gamma
    counts[c1] += 1
    counts[c2] += 1
    return reduce_counts(counts)


def _class_valid(
    cache: TierCache,
    instance: Instance,
    color: int,
    type_id: int,
    target,  # coalition index or TRIVIAL
    guess: Guess,
    notion: str,
) -> bool:
    gamma = instance.gamma
    comps = guess.compositions
    if target == TRIVIAL:
        if guess.trivial_counts[color] == 0:
            return False
        own = singleton_palette(color, gamma)
        own_index = None
    else:
        if comps[target][color] == 0:
            return False
        own = _comp_palette(comps[target])
        own_index = target

    def accepts(j: int) -> bool:
        return guess.accepted is None or guess.accepted[j][color]

    for j, comp in enumerate(comps):
        if j == own_index:
            continue
        if notion == IS and not accepts(j):
            continue
        if cache.prefers(type_id, _joined(comp, color), own):
            return False
    for c2 in range(gamma):
        if guess.trivial_counts[c2] == 0 or c2 == color:
            continue
        if (
            notion == IS
            and guess.blocked is not None
            and (c2, color) in guess.blocked
        ):
            continue
        if cache.prefers(type_id, _pair_palette(c2, color, gamma), own):
            return False
    # Joining a same-color singleton or going alone both yield the
    # singleton palette, covered by one check.
    if cache.prefers(type_id, singleton_palette(color, gamma), own):
        return False
    if target == TRIVIAL and notion == IS and guess.blocked is not None:
        for c_from, c_to in guess.blocked:
            if c_from == color and not cache.prefers(
                type_id, own, _pair_palette(color, c_to, gamma)
            ):
                return False
    return True


def is_valid_for(
    agent: int, target, guess: Guess, instance: Instance, notion: str
) -> bool:
    """May this agent occupy the given coalition (or a trivial one)?"""
    cache = TierCache(instance)
    return _class_valid(
        cache,
        instance,
        instance.colors[agent],
        instance.types[agent],
        target,
        guess,
        notion,
    )


def _compositions(instance: Instance) -> list[tuple[int, ...]]:
    from .core import compositions_upto

    sigma = min(instance.budgets.sigma, instance.n)
    limit = _cap(GUESS_CAP)
    out = []
    for c in compositions_upto(instance.class_sizes, sigma, min_size=2):
        out.append(c)
        if len(out) > limit:
            raise SearchSpaceTooLarge(
                f"more than {limit} coalition compositions (cap via HDG_SEARCH_CAP)"
            )
    return sorted(out)


def _try_flow(
    instance: Instance, cache: TierCache, guess: Guess, notion: str
) -> Outcome | None:
    """Assignment network for one guess; an outcome on saturation."""
    gamma = instance.gamma
    slots: list[tuple] = []
    caps: list[int] = []
    for j, comp in enumerate(guess.compositions):
        for c in range(gamma):
            if comp[c] > 0:
                slots.append((j, c))
                caps.append(comp[c])
    for c in range(gamma):
        if guess.trivial_counts[c] > 0:
            slots.append((TRIVIAL, c))
            caps.append(guess.trivial_counts[c])
    slot_index = {s: i for i, s in enumerate(slots)}

    forced = dict(guess.blockers)
    class_ok: dict[tuple[int, int, object], bool] = {}

    def valid(color, type_id, target) -> bool:
        key = (color, type_id, target)
        hit = class_ok.get(key)
        if hit is None:
            hit = _class_valid(cache, instance, color, type_id, target, guess, notion)
            class_ok[key] = hit
        return hit

    edges = set()
    for agent in range(instance.n):
        color, type_id = instance.colors[agent], instance.types[agent]
        if agent in forced:
            j = forced[agent]
            if not valid(color, type_id, j):
                return None  # blocker cannot sit where it blocks
            edges.add((agent, slot_index[(j, color)]))
            continue
        for s, slot in enumerate(slots):
            kind, c = slot
            if c != color:
                continue
            if valid(color, type_id, TRIVIAL if kind == TRIVIAL else kind):
                edges.add((agent, s))
    net = FlowNetwork(instance.n, tuple(caps), frozenset(edges))
    value, assignment = max_flow(net)
    if value != instance.n:
        return None
    members: dict[int, list[int]] = {}
    singles: list[list[int]] = []
    for agent, s in assignment.items():
        kind, c = slots[s]
        if kind == TRIVIAL:
            singles.append([agent])
        else:
            members.setdefault(kind, []).append(agent)
    blocks = [members[j] for j in sorted(members)] + sorted(singles)
    return Outcome.from_sets(blocks)


def _is_guesses(
    instance: Instance,
    cache: TierCache,
    comps: tuple[tuple[int, ...], ...],
    trivial_counts: tuple[int, ...],
) -> Iterator[Guess]:
    """Accept/blocked/blocker refinements of one composition guess.

    Flags whose restrictive choice cannot change any agent's validity are
    fixed to the permissive one; restrictive accept flags need a member
    class that objects to the join, from which one canonical blocking
    agent per class is pinned to the coalition.
    """
    gamma = instance.gamma
    types_of_color: dict[int, list[int]] = {}
    for (c, t) in instance.present_pairs:
        types_of_color.setdefault(c, []).append(t)

    def seats(color: int) -> list[Palette]:
        out = [singleton_palette(color, gamma)]
        for comp in comps:
            if comp[color] > 0:
                out.append(_comp_palette(comp))
        return out

    # Acceptance flags that could matter: some joiner class strictly
    # gains over one of its potential seats.
    relevant_accept: list[tuple[int, int]] = []
    objectors: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for j, comp in enumerate(comps):
        own = _comp_palette(comp)
        for c in range(gamma):
            if not types_of_color.get(c):
                continue
            lure = _joined(comp, c)
            if not any(
                cache.prefers(t, lure, seat)
                for t in types_of_color[c]
                for seat in seats(c)
            ):
                continue
            classes = [
                (c2, t2)
                for c2 in range(gamma)
                if comp[c2] > 0
                for t2 in types_of_color.get(c2, [])
                if cache.prefers(t2, own, lure)
            ]
            relevant_accept.append((j, c))
            objectors[(j, c)] = classes

    relevant_blocked: list[tuple[int, int]] = []
    for c_from in range(gamma):
        if trivial_counts[c_from] == 0:
            continue
        for c_to in range(gamma):
            if c_to == c_from or not types_of_color.get(c_to):
                continue
            lure = _pair_palette(c_from, c_to, gamma)
            if any(
                cache.prefers(t, lure, seat)
                for t in types_of_color[c_to]
                for seat in seats(c_to)
            ):
                relevant_blocked.append((c_from, c_to))

    base_accept = [[True] * gamma for _ in comps]

    for refused in _subsets(relevant_accept):
        if any(not objectors[key] for key in refused):
            continue  # refusal needs at least one objecting member class
        accepted = tuple(
            tuple(base_accept[j][c] and (j, c) not in refused for c in range(gamma))
            for j in range(len(comps))
        )
        cover_choices: list[list[frozenset[tuple[int, int]]]] = []
        for j in range(len(comps)):
            colors_here = [c for (jj, c) in refused if jj == j]
            if not colors_here:
                cover_choices.append([frozenset()])
                continue
            covers = {
                frozenset(pick)
                for pick in itertools.product(
                    *(objectors[(j, c)] for c in colors_here)
                )
            }
            cover_choices.append(sorted(covers, key=sorted))
        for cover_pick in itertools.product(*cover_choices):
            blockers = _assign_blockers(instance, cover_pick)
            if blockers is None:
                continue
            for blocked in _subsets(relevant_blocked):
                yield Guess(
                    compositions=comps,
                    trivial_counts=trivial_counts,
                    accepted=accepted,
                    blocked=frozenset(blocked),
                    blockers=blockers,
                )


def _subsets(items: list) -> Iterator[tuple]:
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def _assign_blockers(instance: Instance, cover_pick) -> tuple | None:
    """Concrete agents per (coalition, class) cover; one agent may block
    several colors of its own coalition but never two coalitions."""
    used: dict[tuple[int, int], int] = {}
    out: list[tuple[int, int]] = []
    for j, classes in enumerate(cover_pick):
        for klass in sorted(classes):
            pool = instance.agents_of_ct[klass]
            idx = used.get(klass, 0)
            if idx >= len(pool):
                return None
            out.append((pool[idx], j))
            used[klass] = idx + 1
    return tuple(out)


def solve_colors_ntcoal(
    instance: Instance, notion: str, cap: int | None = None
) -> Outcome | None:
    """Some stable budget-respecting outcome, or None if none exists."""
    cache = TierCache(instance)
    budgets = instance.budgets
    n = instance.n
    sizes = instance.class_sizes
    limit = cap if cap is not None else _cap(GUESS_CAP)
    d_max = min(budgets.rho2, budgets.rho1, n // 2)
    comps_all = _compositions(instance)
    examined = 0

    for d in range(0, d_max + 1):
        for comps in itertools.combinations_with_replacement(comps_all, d):
            used = [sum(comp[c] for comp in comps) for c in range(instance.gamma)]
            if any(u > s for u, s in zip(used, sizes)):
                continue
            trivial_counts = tuple(s - u for s, u in zip(sizes, used))
            if d + sum(trivial_counts) > budgets.rho1:
                continue
            if notion == NS:
                guesses: Iterator[Guess] = iter(
                    [Guess(compositions=comps, trivial_counts=trivial_counts)]
                )
            else:
                guesses = _is_guesses(instance, cache, comps, trivial_counts)
            for guess in guesses:
                examined += 1
                if examined > limit:
                    raise SearchSpaceTooLarge(
                        f"more than {limit} guesses (cap via HDG_SEARCH_CAP)"
                    )
                outcome = _try_flow(instance, cache, guess, notion)
                if outcome is not None:
                    verdict = check_outcome(instance, outcome, notion)
                    if not verdict.stable:
                        raise SolverDivergence(
                            f"colors-ntcoal witness failed: {verdict}"
                        )
                    return outcome
    return None


def solve_colors_totcoal(
    instance: Instance, notion: str, cap: int | None = None
) -> Outcome | None:
    """Total-coalition-count variant: non-trivial coalitions never exceed
    all coalitions, so the bound is tightened and delegated."""
    b = instance.budgets
    if b.rho2 > b.rho1:
        instance = Instance(
            gamma=instance.gamma,
            colors=instance.colors,
            types=instance.types,
            prefs=instance.prefs,
            budgets=type(b)(b.sigma, b.rho1, b.rho1),
            agent_ids=instance.agent_ids,
        )
    return solve_colors_ntcoal(instance, notion, cap)
