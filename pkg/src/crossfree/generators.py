"""Deterministic family generators for experiments and tests.

All randomness comes from Python's random.Random (MT19937), fully
determined by the 64-bit seed and identical across platforms.
"""

from __future__ import annotations

import math
import random
from typing import Optional

from .core import Family, GroundSet, Subset

__all__ = ["gen_laminar", "gen_random_crossfree"]


def gen_laminar(n: int, seed: Optional[int] = None) -> Family:
    """A maximal laminar family of non-empty subsets (2n-1 members).

    Recursive binary splitting: without a seed the split is balanced over
    1..n in order (n=4 gives {1},{2},{3},{4},{1,2},{3,4},{1,2,3,4}); with a
    seed the element order and split points are drawn from the seeded RNG.
    Any two members are nested or disjoint, so the result is k-cross-free
    and weakly k-cross-free for every k.
    """
    ground = GroundSet(n)
    rng = random.Random(seed) if seed is not None else None
    order = list(range(1, n + 1))
    if rng is not None:
        rng.shuffle(order)
    parts: list[list[int]] = []

    def split(lo: int, hi: int) -> None:
        parts.append(order[lo:hi])
        if hi - lo <= 1:
            return
        mid = (lo + hi) // 2 if rng is None else rng.randint(lo + 1, hi - 1)
        split(lo, mid)
        split(mid, hi)

    split(0, n)
    return Family.of(ground, [Subset.from_elements(ground, p) for p in parts])


def _related(abits: int, bbits: int, full: int, mode: str) -> bool:
    if not (abits & ~bbits and bbits & ~abits and abits & bbits):
        return False
    return mode == "weak" or (abits | bbits) != full


def _neighbors_have_clique(nbr_ids: list[int], rows: list[int], size: int) -> bool:
    """Is there a clique of the given size among the listed members?"""
    if size <= 0:
        return True
    mask = 0
    for i in nbr_ids:
        mask |= 1 << i

    def search(cand: int, need: int) -> bool:
        if need == 0:
            return True
        if cand.bit_count() < need:
            return False
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest &= rest - 1
            if search(cand & rows[v] & ~((low << 1) - 1), need - 1):
                return True
        return False

    return search(mask, size)


def gen_random_crossfree(
    n: int,
    k: int,
    target_size: int,
    mode: str = "cross",
    seed: int = 0,
    max_attempts: Optional[int] = None,
) -> Family:
    """Greedy randomized k-cross-free family in the given mode.

    Random subsets of size >= 2 (log-uniform sizes, so every block gets
    traffic) are accepted exactly when the family stays free of k pairwise
    (mode-)related members, checked incrementally.  When the target is at
    least 2n-1 the family is seeded with a full laminar family first, which
    is always acceptable.  Stops at target_size or when the attempt budget
    runs out; the output certifies by construction.
    """
    if n < 2:
        raise ValueError(f"generator needs n >= 2, got {n}")
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if mode not in ("cross", "weak"):
        raise ValueError(f"mode must be 'cross' or 'weak', got {mode!r}")
    rng = random.Random(seed)
    ground = GroundSet(n)
    full = ground.full_mask

    members: list[int] = []
    rows: list[int] = []
    present: set[int] = set()

    def add(bits: int) -> None:
        i = len(members)
        row = 0
        for j, other in enumerate(members):
            if _related(bits, other, full, mode):
                row |= 1 << j
                rows[j] |= 1 << i
        members.append(bits)
        rows.append(row)
        present.add(bits)

    if target_size >= 2 * n - 1:
        for s in gen_laminar(n, seed=rng.randrange(2**32)):
            add(s.bits)

    budget = max_attempts if max_attempts is not None else 64 * target_size + 256
    log2n = math.log2(n)
    attempts = 0
    while len(members) < target_size and attempts < budget:
        attempts += 1
        size = max(2, min(n, round(2 ** (rng.random() * log2n))))
        bits = 0
        for e in rng.sample(range(1, n + 1), size):
            bits |= 1 << (e - 1)
        if bits in present:
            continue
        nbr_ids = [j for j, other in enumerate(members) if _related(bits, other, full, mode)]
        # adding is safe unless the new set completes a k-clique
        if _neighbors_have_clique(nbr_ids, rows, k - 1):
            continue
        add(bits)
    return Family.from_masks(ground, members)
