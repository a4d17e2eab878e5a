"""Solver for bounded color count plus bounded number of agent types.

The search packs coalitions one by one, summarizing partial packings by a
pattern: agents used per (color, type), a flag per (color, type) for "one
coalition below the second-worst palette already exists", and the two
coalition counters.  Whether a candidate coalition may join a partial
packing depends on two branched palettes per (color, type): the worst
palette C1 any coalition holding such an agent may have, and the
second-worst palette C2 (with C2 weakly above C1), which together encode
all deviation checks between packed coalitions.

Enumerating the branch product up front is hopeless even at toy sizes, so
the production solver runs one DP in which every (color, type) carries the
set of still-viable (C2, w) choices, each with an interval of viable C1
ranks; the per-(color, type) choices never interact, so this is exactly
the disjunction of the per-branch DPs.  A literal per-branch reference
implementation is kept for cross-checking on tiny inputs.

Branched C1 palettes are additionally required to sit weakly above the
agent's own singleton palette: any packing certified with a C1 below the
singleton could leave an agent that prefers going alone, while the worst
coalition of a genuinely stable outcome always clears its members'
singletons, so completeness is unaffected.
"""

from __future__ import annotations

import os
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Mapping

from .core import Instance, Palette, compositions_upto, reduce_counts, singleton_palette
from .errors import SearchSpaceTooLarge, SolverDivergence
from .prefs import TierCache, order_values
from .stability import IS, NS, Outcome, check_outcome

STATES_CAP = 400_000
BRANCH_CAP = 5_000


def _cap(default: int) -> int:
    env = os.environ.get("HDG_SEARCH_CAP")
    return int(env) if env else default


@dataclass(frozen=True)
class WorstPair:
    """Branched (worst, second-worst) palettes per (color, type)."""

    palettes: Mapping[tuple[int, int], tuple[Palette, Palette]]

    def worst(self, pair):
        return self.palettes[pair][0]

    def second_worst(self, pair):
        return self.palettes[pair][1]


@dataclass(frozen=True)
class Pattern:
    a: Mapping[tuple[int, int], int]
    w: Mapping[tuple[int, int], int]
    r: int
    l: int


def coalition_compatible(
    candidate: Mapping[tuple[int, int], int],
    pattern: Pattern,
    worst_pairs: WorstPair,
    instance: Instance,
    notion: str,
) -> bool:
    """Literal compatibility test of one candidate against a pattern.

    The candidate is a count vector over (color, type) pairs.  Pairs with
    no agents in the instance are skipped entirely.
    """
    cache = TierCache(instance)
    gamma = instance.gamma
    size = sum(candidate.values())
    if size == 0 or size > instance.budgets.sigma:
        return False
    counts = [0] * gamma
    for (c, _), k in candidate.items():
        counts[c] += k
    palette = reduce_counts(counts)
    present_types = {t for (c, t), k in candidate.items() if k >= 1}

    if pattern.r + (1 if size >= 2 else 0) > instance.budgets.rho2:
        return False
    if pattern.l + 1 > instance.budgets.rho1:
        return False

    for pair in instance.present_pairs:
        c, t = pair
        n_ct = instance.n_ct[pair]
        a_c = candidate.get(pair, 0)
        c1, c2 = worst_pairs.worst(pair), worst_pairs.second_worst(pair)
        if a_c >= 1 and not cache.weakly_prefers(t, palette, c1):
            return False
        if pattern.a.get(pair, 0) + a_c > n_ct:
            return False
        w_c = 1 if a_c >= 1 and cache.prefers(t, c2, palette) else 0
        if pattern.w.get(pair, 0) + w_c > 1:
            return False
        grown = list(counts)
        grown[c] += 1
        plus = reduce_counts(grown)
        if w_c == 1 and cache.weakly_prefers(t, c2, plus):
            continue
        if w_c == 0 and cache.weakly_prefers(t, c1, plus):
            continue
        if a_c == n_ct:
            continue
        if notion == IS and any(
            cache.prefers(t2, palette, plus) for t2 in present_types
        ):
            continue
        return False
    return True


# --------------------------------------------------------------------------
# Shared candidate/rank precomputation.
# --------------------------------------------------------------------------


class _Setup:
    def __init__(self, instance: Instance, notion: str):
        self.instance = instance
        self.notion = notion
        self.cache = TierCache(instance)
        self.pairs: list[tuple[int, int]] = list(instance.present_pairs)
        self.n_vec = tuple(instance.n_ct[p] for p in self.pairs)
        self.sigma = min(instance.budgets.sigma, instance.n)
        self.candidates = self._enumerate_candidates()
        self.theta: dict[int, list[Palette]] = {}
        self._build_rank_tables()

    def _enumerate_candidates(self) -> list[tuple[int, ...]]:
        limit = _cap(STATES_CAP)
        out: list[tuple[int, ...]] = []

        def rec(i: int, total: int, acc: list[int]):
            if i == len(self.pairs):
                if total >= 1:
                    out.append(tuple(acc))
                    if len(out) > limit:
                        raise SearchSpaceTooLarge(
                            f"more than {limit} candidate coalitions "
                            f"(cap via HDG_SEARCH_CAP)"
                        )
                return
            for k in range(0, min(self.n_vec[i], self.sigma - total) + 1):
                acc.append(k)
                rec(i + 1, total + k, acc)
                acc.pop()

        rec(0, 0, [])
        out.sort()
        return out

    def palette_of_candidate(self, vec: tuple[int, ...]) -> Palette:
        counts = [0] * self.instance.gamma
        for (c, _), k in zip(self.pairs, vec):
            counts[c] += k
        return reduce_counts(counts)

    def _build_rank_tables(self):
        inst = self.instance
        # Palettes a branched worst/second-worst may take: everything some
        # coalition within the size budget can realize with that color.
        theta_by_color: dict[int, set[Palette]] = {c: set() for c in range(inst.gamma)}
        limit = _cap(STATES_CAP)
        for scanned, counts in enumerate(compositions_upto(inst.class_sizes, self.sigma)):
            if scanned > limit:
                raise SearchSpaceTooLarge(
                    f"more than {limit} realizable compositions (cap via HDG_SEARCH_CAP)"
                )
            p = reduce_counts(counts)
            for c in range(inst.gamma):
                if counts[c] > 0:
                    theta_by_color[c].add(p)

        plus_by_pair: dict[int, set[Palette]] = {i: set() for i in range(len(self.pairs))}
        self.cand_palette = [self.palette_of_candidate(v) for v in self.candidates]
        self.cand_plus: list[list[Palette]] = []
        for vec in self.candidates:
            counts = [0] * inst.gamma
            for (c, _), k in zip(self.pairs, vec):
                counts[c] += k
            row = []
            for i, (c, _) in enumerate(self.pairs):
                counts[c] += 1
                row.append(reduce_counts(counts))
                counts[c] -= 1
                plus_by_pair[i].add(row[-1])
            self.cand_plus.append(row)

        # Joint dense ranks per pair over branch palettes and plus-palettes.
        self.rank: list[dict[Palette, int]] = []
        self.theta_ranks: list[list[int]] = []
        self.singleton_rank: list[int] = []
        for i, (c, t) in enumerate(self.pairs):
            universe = theta_by_color[c] | plus_by_pair[i]
            values = order_values(self.cache, t, sorted(universe))
            self.rank.append(values)
            self.theta_ranks.append(sorted({values[p] for p in theta_by_color[c]}))
            self.singleton_rank.append(values[singleton_palette(c, inst.gamma)])

        # Static per-candidate, per-pair condition data.
        self.cand_static: list[list[tuple[bool, int, int, bool]]] = []
        for idx, vec in enumerate(self.candidates):
            pal = self.cand_palette[idx]
            present_types = {t for (c, t), k in zip(self.pairs, vec) if k >= 1}
            row = []
            for i, (c, t) in enumerate(self.pairs):
                in_s = vec[i] >= 1
                r_c = self.rank[i][pal] if in_s else -1
                r_plus = self.rank[i][self.cand_plus[idx][i]]
                escape = vec[i] == self.n_vec[i]
                if not escape and self.notion == IS:
                    plus = self.cand_plus[idx][i]
                    escape = any(
                        self.cache.prefers(t2, pal, plus) for t2 in present_types
                    )
                row.append((in_s, r_c, r_plus, escape))
            self.cand_static.append(row)

    def theta_in(self, i: int, lo: int, hi: int) -> bool:
        ranks = self.theta_ranks[i]
        pos = bisect_left(ranks, lo)
        return pos < len(ranks) and ranks[pos] <= hi


# --------------------------------------------------------------------------
# Production solver: branch choices deferred into viability sets.
# --------------------------------------------------------------------------

# One entry: (theta2 rank, w used so far, lo..hi interval of theta1 ranks).
Entries = tuple[tuple[int, int, int, int], ...]


def _initial_entries(setup: _Setup, i: int) -> Entries:
    s0 = setup.singleton_rank[i]
    out = []
    for t2 in setup.theta_ranks[i]:
        if t2 >= s0 and setup.theta_in(i, s0, t2):
            out.append((t2, 0, s0, t2))
    return tuple(out)


def _apply_candidate(
    setup: _Setup, i: int, entries: Entries, cand_idx: int
) -> Entries:
    in_s, r_c, r_plus, escape = setup.cand_static[cand_idx][i]
    out = []
    for t2, w, lo, hi in entries:
        w_c = 1 if in_s and r_c < t2 else 0
        if w + w_c > 1:
            continue
        if w_c == 1:
            if not (escape or r_plus <= t2):
                continue
        elif not escape:
            lo2 = max(lo, r_plus)
            if lo2 > lo:
                lo = lo2
        if in_s and r_c < hi:
            hi = r_c
        if lo > hi or not setup.theta_in(i, lo, hi):
            continue
        out.append((t2, w + w_c, lo, hi))
    return tuple(sorted(set(out)))


def solve_colors_types(
    instance: Instance, notion: str, cap: int | None = None
) -> Outcome | None:
    """Some stable budget-respecting outcome, or None if none exists."""
    setup = _Setup(instance, notion)
    pairs = setup.pairs
    n_vec = setup.n_vec
    budgets = instance.budgets
    limit = cap if cap is not None else _cap(STATES_CAP)

    init_viab = tuple(_initial_entries(setup, i) for i in range(len(pairs)))
    if any(not e for e in init_viab):
        return None
    zero = (0,) * len(pairs)
    start = (zero, 0, 0, 0, init_viab)  # a, r, l, next candidate index, viability

    transition_cache: dict[tuple[int, int, Entries], Entries] = {}

    def shift(viab, cand_idx):
        out = []
        for i, entries in enumerate(viab):
            key = (i, cand_idx, entries)
            new = transition_cache.get(key)
            if new is None:
                new = _apply_candidate(setup, i, entries, cand_idx)
                transition_cache[key] = new
            if not new:
                return None
            out.append(new)
        return tuple(out)

    seen = {start}
    queue = deque([start])
    parent: dict[tuple, tuple] = {}
    target_state = None
    while queue:
        state = queue.popleft()
        a, r, l, nxt, viab = state
        if a == n_vec:
            target_state = state
            break
        if l + 1 > budgets.rho1:
            continue
        for cand_idx in range(nxt, len(setup.candidates)):
            vec = setup.candidates[cand_idx]
            new_a = tuple(x + y for x, y in zip(a, vec))
            if any(x > m for x, m in zip(new_a, n_vec)):
                continue
            r_c = 1 if sum(vec) >= 2 else 0
            if r + r_c > budgets.rho2:
                continue
            new_viab = shift(viab, cand_idx)
            if new_viab is None:
                continue
            new_state = (new_a, r + r_c, l + 1, cand_idx, new_viab)
            if new_state in seen:
                continue
            if len(seen) > limit:
                raise SearchSpaceTooLarge(
                    f"more than {limit} packing states (cap via HDG_SEARCH_CAP)"
                )
            seen.add(new_state)
            parent[new_state] = (state, cand_idx)
            queue.append(new_state)

    if target_state is None:
        return None

    chosen: list[int] = []
    state = target_state
    while state in parent:
        state, cand_idx = parent[state]
        chosen.append(cand_idx)
    outcome = _materialize(instance, setup, chosen)
    verdict = check_outcome(instance, outcome, notion)
    if not verdict.stable:
        raise SolverDivergence(f"colors-types witness failed: {verdict}")
    return outcome


def _materialize(instance: Instance, setup: _Setup, chosen: list[int]) -> Outcome:
    pools = {pair: list(agents) for pair, agents in instance.agents_of_ct.items()}
    blocks = []
    for cand_idx in chosen:
        vec = setup.candidates[cand_idx]
        block: list[int] = []
        for pair, k in zip(setup.pairs, vec):
            block.extend(pools[pair][:k])
            del pools[pair][:k]
        blocks.append(block)
    assert not any(pools.values())
    return Outcome.from_sets(blocks)


# --------------------------------------------------------------------------
# Reference implementation: explicit branch product, tiny inputs only.
# --------------------------------------------------------------------------


def worst_pair_branches(
    instance: Instance, cap: int | None = None
) -> Iterator[WorstPair]:
    """All branched worst/second-worst palette choices, one class rep each."""
    setup = _Setup(instance, NS)
    limit = cap if cap is not None else _cap(BRANCH_CAP)
    per_pair: list[list[tuple[Palette, Palette]]] = []
    for i, (c, t) in enumerate(setup.pairs):
        reps: dict[int, Palette] = {}
        for p in sorted(setup.rank[i]):
            reps.setdefault(setup.rank[i][p], p)
        s0 = setup.singleton_rank[i]
        options = []
        for t1 in setup.theta_ranks[i]:
            if t1 < s0:
                continue
            for t2 in setup.theta_ranks[i]:
                if t2 >= t1:
                    options.append((reps[t1], reps[t2]))
        per_pair.append(options)

    total = 1
    for options in per_pair:
        total *= max(len(options), 1)
        if total > limit:
            raise SearchSpaceTooLarge(
                f"{total}+ worst-pair branches (cap via HDG_SEARCH_CAP)"
            )

    def rec(i: int, acc: dict):
        if i == len(setup.pairs):
            yield WorstPair(dict(acc))
            return
        for c1, c2 in per_pair[i]:
            acc[setup.pairs[i]] = (c1, c2)
            yield from rec(i + 1, acc)
        acc.pop(setup.pairs[i], None)

    yield from rec(0, {})


def branch_reaches_target(
    instance: Instance, worst_pairs: WorstPair, notion: str
) -> bool:
    """Pattern DP for one explicit branch: is a full packing realizable?"""
    setup = _Setup(instance, notion)
    pairs = setup.pairs
    n_vec = setup.n_vec
    realized = {((0,) * len(pairs), (0,) * len(pairs), 0, 0)}
    frontier = deque(realized)
    while frontier:
        a, w, r, l = frontier.popleft()
        pattern = Pattern(dict(zip(pairs, a)), dict(zip(pairs, w)), r, l)
        for vec in setup.candidates:
            candidate = {pair: k for pair, k in zip(pairs, vec) if k >= 1}
            if not coalition_compatible(candidate, pattern, worst_pairs, instance, notion):
                continue
            pal = setup.palette_of_candidate(vec)
            new_w = list(w)
            for i, (c, t) in enumerate(pairs):
                if vec[i] >= 1 and setup.cache.prefers(
                    t, worst_pairs.second_worst(pairs[i]), pal
                ):
                    new_w[i] += 1
            new = (
                tuple(x + y for x, y in zip(a, vec)),
                tuple(new_w),
                r + (1 if sum(vec) >= 2 else 0),
                l + 1,
            )
            if new in realized:
                continue
            if new[0] == n_vec:
                return True
            realized.add(new)
            frontier.append(new)
    return False


def solve_colors_types_branchwise(
    instance: Instance, notion: str, cap: int | None = None
) -> bool:
    """Literal algorithm: one pattern DP per branch.  YES/NO only."""
    return any(
        branch_reaches_target(instance, branch, notion)
        for branch in worst_pair_branches(instance, cap)
    )
