"""Exact extremal search: largest subfamily with no k pairwise crossing sets.

The solver is a branch-and-bound over universe members in canonical order.
It explores include-before-exclude, updates the incumbent only on strict
improvement and prunes with a greedy clique-partition bound (a clique in
the crossing graph contributes at most k-1 members to any feasible
subfamily).  Pruning is sound, so when the search completes the witness is
the lexicographically smallest optimal subfamily; members related to
nothing are forced in up front, which every optimal solution contains.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import Family, GroundSet, Subset

__all__ = [
    "UNIVERSES",
    "SearchSpace",
    "ExtremalResult",
    "SweepRow",
    "universe_all",
    "universe_proper",
    "interval_universe",
    "make_space",
    "capoyleas_pach_bound",
    "applicable_bound",
    "max_cross_free",
    "bounds_sweep",
    "sweep_to_csv",
]

UNIVERSES = ("all", "proper", "intervals", "custom")

# building 2^n subsets past this point is pointless for exact search
_MAX_POWERSET_N = 16


def universe_all(n: int) -> list[Subset]:
    """Every subset of [n], including the empty set and [n] itself."""
    if n > _MAX_POWERSET_N:
        raise ValueError(
            f"power-set universe capped at n <= {_MAX_POWERSET_N}, got n={n}"
        )
    ground = GroundSet(n)
    masks = sorted(range(1 << n), key=lambda m: (m.bit_count(), m))
    return [Subset(ground, m) for m in masks]


def universe_proper(n: int) -> list[Subset]:
    """Every proper non-empty subset of [n]."""
    return [s for s in universe_all(n) if 0 < s.size < n]


def interval_universe(n: int) -> list[Subset]:
    """All n(n-1) proper non-empty contiguous intervals of the cycle 1..n."""
    if n < 2:
        raise ValueError(f"interval universe needs n >= 2, got {n}")
    ground = GroundSet(n)
    masks = set()
    for start in range(n):
        bits = 0
        for length in range(1, n):
            bits |= 1 << ((start + length - 1) % n)
            masks.add(bits)
    return [
        Subset(ground, m) for m in sorted(masks, key=lambda m: (m.bit_count(), m))
    ]


@dataclass(frozen=True)
class SearchSpace:
    """A universe of candidate subsets plus the crossing mode and k."""

    ground: GroundSet
    members: tuple[Subset, ...]
    mode: str
    k: int
    universe: str = "custom"


def make_space(
    mode: str,
    k: int,
    n: Optional[int] = None,
    universe: str = "proper",
    members: Optional[Sequence[Subset]] = None,
) -> SearchSpace:
    """Build a SearchSpace from a named universe or an explicit member list."""
    if mode not in ("cross", "weak"):
        raise ValueError(f"mode must be 'cross' or 'weak', got {mode!r}")
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if members is not None:
        ground = members[0].ground if members else GroundSet(n or 1)
        fam = Family.of(ground, members)
        return SearchSpace(ground, fam.members, mode, k, "custom")
    if n is None:
        raise ValueError("need n for a named universe")
    if universe == "all":
        subs = universe_all(n)
    elif universe == "proper":
        subs = universe_proper(n)
    elif universe == "intervals":
        subs = interval_universe(n)
    else:
        raise ValueError(f"universe must be one of {UNIVERSES}, got {universe!r}")
    return SearchSpace(GroundSet(n), tuple(subs), mode, k, universe)


def capoyleas_pach_bound(n: int, k: int) -> int:
    """4(k-1)n - 2*C(2k-1, 2): the exact maximum for cyclic intervals.

    Stated only for n >= 2k-1; smaller n raise.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if n < 2 * k - 1:
        raise ValueError(f"bound stated only for n >= 2k-1 = {2 * k - 1}, got n={n}")
    return 4 * (k - 1) * n - 2 * math.comb(2 * k - 1, 2)


def applicable_bound(n: int, k: int, universe: str) -> Optional[int]:
    """The known linear bound for this (n, k, universe), if there is one."""
    if universe == "intervals":
        return capoyleas_pach_bound(n, k) if n >= 2 * k - 1 else None
    if k == 2:
        return 4 * n - 2
    if k == 3:
        return 6 * n
    return None


@dataclass
class ExtremalResult:
    space: SearchSpace
    max_size: int
    witness: Family
    optimal: bool
    nodes_explored: int
    elapsed_ms: float

    def to_json_dict(self) -> dict:
        return {
            "schema": "search-result/1",
            "n": self.space.ground.n,
            "k": self.space.k,
            "mode": self.space.mode,
            "universe": self.space.universe,
            "universe_size": len(self.space.members),
            "max_size": self.max_size,
            "witness": [str(s) for s in self.witness],
            "optimal": self.optimal,
            "nodes_explored": self.nodes_explored,
            "elapsed_ms": self.elapsed_ms,
        }


def _adjacency(members: Sequence[Subset], mode: str) -> list[int]:
    bits = [s.bits for s in members]
    full = members[0].ground.full_mask if members else 0
    m = len(bits)
    rows = [0] * m
    for i in range(m):
        bi = bits[i]
        for j in range(i + 1, m):
            bj = bits[j]
            if bi & ~bj and bj & ~bi and bi & bj:
                if mode == "weak" or (bi | bj) != full:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
    return rows


def _completes_clique(v: int, chosen: int, rows: Sequence[int], k: int) -> bool:
    """Would adding v to the chosen set create k pairwise related members?"""
    cand = rows[v] & chosen
    need = k - 1

    def search(mask: int, need: int) -> bool:
        if need == 0:
            return True
        if mask.bit_count() < need:
            return False
        rest = mask
        while rest:
            low = rest & -rest
            u = low.bit_length() - 1
            rest &= rest - 1
            if search(mask & rows[u] & ~((low << 1) - 1), need - 1):
                return True
        return False

    return search(cand, need)


def _partition_bound(rest: Sequence[int], rows: Sequence[int], km1: int) -> int:
    """Greedy clique partition of the remaining vertices; each clique can
    contribute at most k-1 members to any feasible extension."""
    classes: list[tuple[int, int]] = []  # (clique mask, size)
    for v in rest:
        rv = rows[v]
        for idx, (cmask, csize) in enumerate(classes):
            if cmask & ~rv == 0:
                classes[idx] = (cmask | (1 << v), csize + 1)
                break
        else:
            classes.append((1 << v, 1))
    return sum(min(csize, km1) for _, csize in classes)


class _Budget(Exception):
    pass


def max_cross_free(
    space: SearchSpace, budget_ms: Optional[float] = None
) -> ExtremalResult:
    """Exact maximum subfamily of the universe with no k pairwise related sets.

    Returns the canonical (lexicographically smallest) optimal witness when
    the search runs to completion; with an exhausted time budget the best
    subfamily found so far is returned and flagged optimal=False.
    """
    t0 = time.perf_counter()
    members = space.members
    k = space.k
    rows_full = _adjacency(members, space.mode)
    forced = [i for i in range(len(members)) if rows_full[i] == 0]
    free = [i for i in range(len(members)) if rows_full[i] != 0]
    # compress adjacency onto the free vertices
    pos = {v: p for p, v in enumerate(free)}
    rows = [0] * len(free)
    for p, v in enumerate(free):
        row = rows_full[v]
        packed = 0
        while row:
            low = row & -row
            u = low.bit_length() - 1
            row &= row - 1
            if u in pos:
                packed |= 1 << pos[u]
        rows[p] = packed
    m = len(free)
    km1 = k - 1

    best: list[int] = []
    nodes = 0
    aborted = False
    deadline = None if budget_ms is None else t0 + budget_ms / 1000.0

    def dfs(p: int, chosen: int, picked: list[int]) -> None:
        nonlocal nodes, best
        nodes += 1
        if deadline is not None and nodes % 1024 == 0:
            if time.perf_counter() > deadline:
                raise _Budget
        if p == m:
            if len(picked) > len(best):
                best = picked.copy()
            return
        rest = list(range(p, m))
        if len(picked) + len(rest) <= len(best):
            return
        if len(picked) + _partition_bound(rest, rows, km1) <= len(best):
            return
        v = p
        if not _completes_clique(v, chosen, rows, k):
            picked.append(v)
            dfs(p + 1, chosen | (1 << v), picked)
            picked.pop()
        dfs(p + 1, chosen, picked)

    try:
        dfs(0, 0, [])
        optimal = True
    except _Budget:
        aborted = True
        optimal = False

    chosen_members = [members[i] for i in forced] + [members[free[p]] for p in best]
    witness = Family.of(space.ground, chosen_members)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return ExtremalResult(
        space=space,
        max_size=len(forced) + len(best),
        witness=witness,
        optimal=optimal and not aborted,
        nodes_explored=nodes,
        elapsed_ms=round(elapsed, 3),
    )


@dataclass
class SweepRow:
    n: int
    k: int
    universe: str
    mode: str
    exact_max: Optional[int]
    paper_bound: Optional[int]
    optimal: Optional[bool]
    nodes: int
    ms: float
    skipped: bool = False
    reason: str = ""

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "universe": self.universe,
            "mode": self.mode,
            "exact_max": self.exact_max,
            "paper_bound": self.paper_bound,
            "optimal": self.optimal,
            "nodes": self.nodes,
            "ms": self.ms,
            "skipped": self.skipped,
            "reason": self.reason,
        }


def bounds_sweep(
    k: int,
    ns: Sequence[int],
    universe: str = "proper",
    mode: str = "cross",
    budget_ms: Optional[float] = None,
) -> list[SweepRow]:
    """Exact maxima across a range of n, next to the applicable known bound.

    Rows whose universe is too large for exact search (and no budget was
    given) are marked skipped rather than attempted.
    """
    cap = 64 if k == 2 else 40
    out = []
    for n in ns:
        try:
            space = make_space(mode, k, n=n, universe=universe)
        except ValueError as exc:
            out.append(
                SweepRow(n, k, universe, mode, None, None, None, 0, 0.0, True, str(exc))
            )
            continue
        bound = applicable_bound(n, k, universe)
        if budget_ms is None and len(space.members) > cap:
            out.append(
                SweepRow(
                    n,
                    k,
                    universe,
                    mode,
                    None,
                    bound,
                    None,
                    0,
                    0.0,
                    True,
                    f"universe size {len(space.members)} over exact-search cap {cap}",
                )
            )
            continue
        res = max_cross_free(space, budget_ms=budget_ms)
        out.append(
            SweepRow(
                n,
                k,
                universe,
                mode,
                res.max_size,
                bound,
                res.optimal,
                res.nodes_explored,
                res.elapsed_ms,
            )
        )
    return out


def sweep_to_csv(rows: Sequence[SweepRow]) -> str:
    lines = ["n,k,universe,mode,exact_max,paper_bound,optimal,nodes,ms"]
    for r in rows:
        lines.append(
            ",".join(
                [
                    str(r.n),
                    str(r.k),
                    r.universe,
                    r.mode,
                    "" if r.exact_max is None else str(r.exact_max),
                    "" if r.paper_bound is None else str(r.paper_bound),
                    "skipped" if r.skipped else str(bool(r.optimal)).lower(),
                    str(r.nodes),
                    f"{r.ms:.3f}",
                ]
            )
        )
    return "\n".join(lines) + "\n"
