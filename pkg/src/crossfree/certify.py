"""Crossing graphs, k-clique witnesses and cross-freeness certification.

A family is k-cross-free (mode "cross") when no k members are pairwise
crossing, and weakly k-cross-free (mode "weak") when no k members are
pairwise weakly crossing.  Certification either reports cross-freeness or
returns a witness: k member indices whose sets are pairwise related.  The
search explores member indices in canonical order with sound pruning only,
so the returned witness is always the lexicographically smallest index
tuple and repeated runs are reproducible bit for bit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .core import Family, Subset

__all__ = [
    "MODES",
    "CrossingGraph",
    "Witness",
    "CertReport",
    "build_crossing_graph",
    "find_k_pairwise",
    "certify",
]

MODES = ("cross", "weak")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def _check_k(k: int) -> None:
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")


@dataclass(frozen=True)
class CrossingGraph:
    """Symmetric relation over member indices, stored as packed bit rows."""

    family: Family
    mode: str
    rows: tuple[int, ...]

    @property
    def edge_count(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2


@dataclass(frozen=True)
class Witness:
    """k member indices whose sets are pairwise related under the mode."""

    indices: tuple[int, ...]
    mode: str

    def subsets(self, family: Family) -> tuple[Subset, ...]:
        return tuple(family.members[i] for i in self.indices)


@dataclass(frozen=True)
class CertReport:
    verdict: str  # "cross-free" | "witness"
    k: int
    mode: str
    witness: Optional[Witness]
    witness_sets: Optional[tuple[str, ...]]
    pairs_crossing: int
    pairs_weakly_crossing: int
    max_clique_found: int
    family_size: int
    n: int
    elapsed_ms: float

    @property
    def cross_free(self) -> bool:
        return self.verdict == "cross-free"

    def to_json_dict(self) -> dict:
        return {
            "schema": "cert-report/1",
            "verdict": self.verdict,
            "k": self.k,
            "mode": self.mode,
            "witness": list(self.witness_sets) if self.witness_sets else None,
            "witness_indices": list(self.witness.indices) if self.witness else None,
            "pairs_crossing": self.pairs_crossing,
            "pairs_weakly_crossing": self.pairs_weakly_crossing,
            "max_clique_found": self.max_clique_found,
            "family_size": self.family_size,
            "n": self.n,
            "elapsed_ms": self.elapsed_ms,
        }


def _pair_rows(family: Family) -> tuple[list[int], list[int], int, int]:
    """Adjacency bit rows and pair counts for both relations in one pass."""
    bits = [s.bits for s in family.members]
    full = family.ground.full_mask
    m = len(bits)
    rows_cross = [0] * m
    rows_weak = [0] * m
    n_cross = n_weak = 0
    for i in range(m):
        bi = bits[i]
        for j in range(i + 1, m):
            bj = bits[j]
            if bi & ~bj and bj & ~bi and bi & bj:
                n_weak += 1
                rows_weak[i] |= 1 << j
                rows_weak[j] |= 1 << i
                if (bi | bj) != full:
                    n_cross += 1
                    rows_cross[i] |= 1 << j
                    rows_cross[j] |= 1 << i
    return rows_cross, rows_weak, n_cross, n_weak


def build_crossing_graph(family: Family, mode: str) -> CrossingGraph:
    """Evaluate the mode's predicate on all member pairs (O(|F|^2))."""
    _check_mode(mode)
    rows_cross, rows_weak, _, _ = _pair_rows(family)
    return CrossingGraph(family, mode, tuple(rows_cross if mode == "cross" else rows_weak))


def _color_upper(mask: int, rows: tuple[int, ...] | list[int], cap: int) -> int:
    """Greedy-coloring upper bound (capped) on the clique number within mask."""
    classes: list[int] = []
    m = mask
    while m:
        low = m & -m
        v = low.bit_length() - 1
        m &= m - 1
        for idx, cls in enumerate(classes):
            if cls & rows[v] == 0:
                classes[idx] = cls | low
                break
        else:
            classes.append(low)
            if len(classes) >= cap:
                return cap
    return len(classes)


def _lex_first_clique(rows: tuple[int, ...] | list[int], k: int) -> Optional[tuple[int, ...]]:
    """Lexicographically smallest k-clique as a sorted index tuple, or None.

    Depth-first over indices in ascending order; pruning (candidate count
    and greedy coloring) only discards subtrees that contain no k-clique,
    so the first complete tuple found is the canonical one.
    """
    m = len(rows)
    if k > m:
        return None
    out: list[int] = []

    def extend(cand: int) -> bool:
        if len(out) == k:
            return True
        need = k - len(out)
        if cand.bit_count() < need:
            return False
        if need > 1 and _color_upper(cand, rows, need) < need:
            return False
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest &= rest - 1
            out.append(v)
            if extend(cand & rows[v] & ~((low << 1) - 1)):
                return True
            out.pop()
        return False

    return tuple(out) if extend((1 << m) - 1) else None


def _max_clique_capped(rows: tuple[int, ...] | list[int], cap: int) -> int:
    """Largest clique size, capped: decreasing existence searches."""
    for size in range(min(cap, len(rows)), 0, -1):
        if _lex_first_clique(rows, size) is not None:
            return size
    return 0


def find_k_pairwise(family: Family, k: int, mode: str) -> Optional[Witness]:
    """Canonical witness of k pairwise (mode-)crossing members, if any."""
    _check_k(k)
    graph = build_crossing_graph(family, mode)
    tup = _lex_first_clique(graph.rows, k)
    return Witness(tup, mode) if tup is not None else None


def certify(family: Family, k: int, mode: str = "cross") -> CertReport:
    """Decide (weak) k-cross-freeness, with witness or clique-size summary."""
    _check_k(k)
    _check_mode(mode)
    t0 = time.perf_counter()
    rows_cross, rows_weak, n_cross, n_weak = _pair_rows(family)
    rows = rows_cross if mode == "cross" else rows_weak
    tup = _lex_first_clique(rows, k)
    if tup is not None:
        witness: Optional[Witness] = Witness(tup, mode)
        witness_sets: Optional[tuple[str, ...]] = tuple(
            str(family.members[i]) for i in tup
        )
        verdict = "witness"
        max_found = k
    else:
        witness = None
        witness_sets = None
        verdict = "cross-free"
        max_found = _max_clique_capped(rows, k - 1)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return CertReport(
        verdict=verdict,
        k=k,
        mode=mode,
        witness=witness,
        witness_sets=witness_sets,
        pairs_crossing=n_cross,
        pairs_weakly_crossing=n_weak,
        max_clique_found=max_found,
        family_size=len(family),
        n=family.ground.n,
        elapsed_ms=round(elapsed, 3),
    )
