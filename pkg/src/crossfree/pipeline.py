"""Bound-verification pipeline for weakly k-cross-free families.

The pipeline turns a counting argument about weakly k-cross-free families
into a checkable computation.  Members are grouped into size blocks
(2^i < |X| <= 2^{i+1}); each block is covered by chains whose maxima form
an antichain; every chain donates one representative element per set; and
nested chain tuples through a common element are counted from above and
below.  Every inequality met along the way is recorded in a BoundsReport
together with the raw quantities needed to recompute it independently.

Counts and rational bounds are compared exactly (fractions); bounds with
irrational ingredients (fractional powers of two) fall back to floats with
the slack recorded, and the one constant whose exact value can be
astronomically small is handled in log space.
"""

from __future__ import annotations

import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .certify import CertReport, certify
from .core import Family, GroundSet, Subset, is_antichain

__all__ = [
    "Block",
    "Chain",
    "ChainCover",
    "ChainReps",
    "RepresentativeMap",
    "GoodTuple",
    "Check",
    "BoundsReport",
    "Schedule",
    "PipelineReport",
    "HypothesisError",
    "ext_binom",
    "normalize_weakly",
    "strip_small",
    "block_index",
    "blocks",
    "chain_cover",
    "representatives",
    "enumerate_good_tuples",
    "good_tuple_index",
    "count_nice_tuples",
    "verify_claims",
    "schedule",
    "log_star",
    "lomonosov_report",
    "run_pipeline",
]

Number = Union[int, float, Fraction]

REP_POLICIES = ("min", "random")


def ext_binom(x: Number, k: int) -> Number:
    """Binomial coefficient extended to real upper argument.

    Equals x(x-1)...(x-k+1)/k! when x >= k-1 and 0 otherwise; it is
    monotone increasing and convex in x for fixed k.  Exact (Fraction) for
    int/Fraction input, float for float input.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if isinstance(x, float):
        if x < k - 1:
            return 0.0
        p = 1.0
        for i in range(k):
            p *= x - i
        return p / math.factorial(k)
    x = Fraction(x)
    if x < k - 1:
        return Fraction(0)
    p = Fraction(1)
    for i in range(k):
        p *= x - i
    return p / math.factorial(k)


def normalize_weakly(family: Family, pivot: int = 1) -> Family:
    """Replace every member containing the pivot element by its complement.

    The result never contains the pivot in any member and keeps at least
    half the original size (a member and its complement may collide).  If
    the input is k-cross-free, the output is weakly k-cross-free: with the
    pivot element outside every member, no two members can cover [n], so a
    weakly crossing pair would already be crossing.
    """
    n = family.ground.n
    if not 1 <= pivot <= n:
        raise ValueError(f"pivot element {pivot} outside 1..{n}")
    pbit = 1 << (pivot - 1)
    full = family.ground.full_mask
    return Family.from_masks(
        family.ground,
        (m if not m & pbit else m ^ full for m in (s.bits for s in family.members)),
    )


def strip_small(family: Family) -> Family:
    """Drop the empty set and singletons (at most n+1 members)."""
    return Family.from_masks(
        family.ground, (s.bits for s in family.members if s.size >= 2)
    )


def block_index(size: int) -> int:
    """The unique i with 2^i < size <= 2^{i+1} (size must be >= 2)."""
    if size < 2:
        raise ValueError(f"block index undefined for set size {size}")
    return (size - 1).bit_length() - 1


@dataclass(frozen=True)
class Block:
    """All members whose size lies in (2^i, 2^{i+1}]."""

    index: int
    members: Family


def blocks(family: Family) -> list[Block]:
    """Partition a small-set-free family into size blocks (ascending index)."""
    buckets: dict[int, list[int]] = {}
    for s in family.members:
        if s.size <= 1:
            raise ValueError(
                "blocks() requires strip_small() input: found a set of size <= 1"
            )
        buckets.setdefault(block_index(s.size), []).append(s.bits)
    return [
        Block(i, Family.from_masks(family.ground, buckets[i])) for i in sorted(buckets)
    ]


@dataclass(frozen=True)
class Chain:
    """Strictly inclusion-increasing sets, all from one block."""

    block: int
    sets: tuple[Subset, ...]

    def __post_init__(self) -> None:
        for a, b in zip(self.sets, self.sets[1:]):
            if a.bits & ~b.bits or a.bits == b.bits:
                raise ValueError("chain sets must strictly increase under inclusion")

    def __len__(self) -> int:
        return len(self.sets)

    @property
    def minimum(self) -> Subset:
        return self.sets[0]

    @property
    def maximum(self) -> Subset:
        return self.sets[-1]


@dataclass(frozen=True)
class ChainCover:
    """One chain per inclusion-maximal member of a block."""

    block: int
    chains: tuple[Chain, ...]

    def sum_lengths(self) -> int:
        return sum(len(c) for c in self.chains)


def chain_cover(block: Block, k: int) -> ChainCover:
    """Cover a block by one chain per inclusion-maximal member.

    Each member is assigned to the canonically smallest maximal member
    containing it; inside every group a longest chain (dynamic program
    over the containment order, canonical tie-breaking) is extracted,
    necessarily ending at the group's maximal member.  On weakly
    k-cross-free input each group is intersecting, hence has no antichain
    of size k, which forces sum(len(chain)) >= |block|/(k-1); the chain
    maxima are exactly the block's maximal members and form an antichain.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    members = block.members.members
    m = len(members)
    maximal = [
        i
        for i in range(m)
        if not any(
            j != i and members[i].bits & ~members[j].bits == 0 for j in range(m)
        )
    ]
    groups: dict[int, list[int]] = {i: [] for i in maximal}
    for j in range(m):
        home = next(i for i in maximal if members[j].bits & ~members[i].bits == 0)
        groups[home].append(j)
    chains = []
    for top in maximal:
        idxs = groups[top]  # canonical order inherited from the family
        length = [1] * len(idxs)
        prev = [-1] * len(idxs)
        for pos, j in enumerate(idxs):
            bj = members[j].bits
            for qos in range(pos):
                bq = members[idxs[qos]].bits
                if bq & ~bj == 0 and bq != bj and length[qos] + 1 > length[pos]:
                    length[pos] = length[qos] + 1
                    prev[pos] = qos
        end = idxs.index(top)  # the maximal member is the unique largest
        path = []
        at = end
        while at != -1:
            path.append(members[idxs[at]])
            at = prev[at]
        chains.append(Chain(block.index, tuple(reversed(path))))
    return ChainCover(block.index, tuple(chains))


@dataclass(frozen=True)
class ChainReps:
    """A chain plus its representative elements, one per inclusion step.

    reps[0] lies in the minimum set; reps[j] lies in sets[j] \\ sets[j-1].
    The representatives are pairwise distinct because the difference sets
    are disjoint, so len(reps) == len(chain).
    """

    chain: Chain
    reps: tuple[int, ...]

    def minimal_set_for(self, y: int) -> Subset:
        """Smallest chain set containing a representative element y."""
        return self.chain.sets[self.reps.index(y)]


@dataclass(frozen=True, eq=False)
class RepresentativeMap:
    """All chains of the (a, b] block window with representatives and degrees.

    degrees[y] counts the chains whose representative set contains y.
    """

    a: Number
    b: Number
    entries: tuple[ChainReps, ...]
    degrees: dict[int, int]


def _pick_element(mask: int, rng: Optional[random.Random]) -> int:
    if rng is None:
        return (mask & -mask).bit_length()
    out = []
    m = mask
    while m:
        out.append((m & -m).bit_length())
        m &= m - 1
    return rng.choice(out)


def representatives(
    covers: Iterable[ChainCover],
    a: Number,
    b: Number,
    policy: str = "min",
    seed: Optional[int] = None,
) -> RepresentativeMap:
    """Pick one representative per difference step of every window chain.

    The default policy takes the smallest element of each difference set
    (and of the chain minimum); policy="random" draws seeded-uniform
    choices instead, for checking that downstream counts do not depend on
    the picking rule.
    """
    if policy not in REP_POLICIES:
        raise ValueError(f"policy must be one of {REP_POLICIES}, got {policy!r}")
    # a missing seed must not fall back to OS entropy: outputs are contractually
    # deterministic, so the random policy defaults to seed 0
    rng = random.Random(seed if seed is not None else 0) if policy == "random" else None
    entries = []
    for cover in sorted(covers, key=lambda c: c.block):
        if not a < cover.block <= b:
            continue
        for chain in cover.chains:
            reps = []
            prev = 0
            for s in chain.sets:
                reps.append(_pick_element(s.bits & ~prev, rng))
                prev = s.bits
            entries.append(ChainReps(chain, tuple(reps)))
    degrees: Counter[int] = Counter()
    for entry in entries:
        degrees.update(entry.reps)
    return RepresentativeMap(a, b, tuple(entries), dict(degrees))


@dataclass(frozen=True)
class GoodTuple:
    """k chains from strictly increasing blocks, nested through element y.

    chain_ids index into the RepresentativeMap entries; minimal_sets[i] is
    the smallest set of chain i containing y, and these form an inclusion
    chain.
    """

    y: int
    chain_ids: tuple[int, ...]
    blocks: tuple[int, ...]
    minimal_sets: tuple[Subset, ...]


def enumerate_good_tuples(y: int, rep_map: RepresentativeMap, k: int) -> list[GoodTuple]:
    """All k-tuples of window chains good for y, in canonical order."""
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    cands = []
    for ci, entry in enumerate(rep_map.entries):
        if y in entry.reps:
            cands.append((entry.chain.block, ci, entry.minimal_set_for(y)))
    out: list[GoodTuple] = []

    def extend(start: int, picked: list[tuple[int, int, Subset]]) -> None:
        if len(picked) == k:
            out.append(
                GoodTuple(
                    y,
                    tuple(p[1] for p in picked),
                    tuple(p[0] for p in picked),
                    tuple(p[2] for p in picked),
                )
            )
            return
        for idx in range(start, len(cands)):
            blk, _, mset = cands[idx]
            if picked:
                last_blk, _, last_set = picked[-1]
                if blk <= last_blk or last_set.bits & ~mset.bits:
                    continue
            picked.append(cands[idx])
            extend(idx + 1, picked)
            picked.pop()

    extend(0, [])
    return out


def good_tuple_index(
    rep_map: RepresentativeMap, k: int
) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Map every nice tuple (good for >= 1 element) to its elements."""
    idx: dict[tuple[int, ...], list[int]] = {}
    for y in sorted(rep_map.degrees):
        for gt in enumerate_good_tuples(y, rep_map, k):
            idx.setdefault(gt.chain_ids, []).append(y)
    return {t: tuple(ys) for t, ys in idx.items()}


def count_nice_tuples(rep_map: RepresentativeMap, k: int) -> int:
    """Number of distinct k-tuples good for at least one element."""
    return len(good_tuple_index(rep_map, k))


# --- numeric checks -----------------------------------------------------


@dataclass(frozen=True)
class Check:
    """One recorded inequality: pass/fail plus both sides and the margin."""

    name: str
    passed: bool
    lhs: Number
    rhs: Number
    slack: Number
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "lhs": _json_num(self.lhs),
            "rhs": _json_num(self.rhs),
            "slack": _json_num(self.slack),
            "note": self.note,
        }


def _json_num(v: Number) -> Union[int, float]:
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else float(v)
    return v


def _exactify(x: Number) -> Number:
    """Integral floats become ints so powers of two stay exact."""
    if isinstance(x, float) and x.is_integer():
        return int(x)
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _pow2(x: Number) -> Number:
    x = _exactify(x)
    if isinstance(x, int):
        return Fraction(2) ** x
    return 2.0 ** float(x)


def _upper_coeff(k: int) -> Fraction:
    """2 (k-1)^{k+1} / (k-1)!  -- incidence upper bound coefficient."""
    return Fraction(2 * (k - 1) ** (k + 1), math.factorial(k - 1))


def _lower_coeff(k: int) -> Fraction:
    """1 / (2^k (k-1)^{3k} k!)  -- dense-window lower bound coefficient."""
    return Fraction(1, 2**k * (k - 1) ** (3 * k) * math.factorial(k))


@dataclass(eq=False)
class BoundsReport:
    """Everything one window run measured, with pass/fail per inequality."""

    k: int
    a: Number
    b: Number
    n: int
    policy: str
    seed: Optional[int]
    hypothesis_certified: Optional[bool]
    window_size: int
    gamma_size: int
    sum_chain_lengths: int
    sum_degrees: int
    incidences: int  # good (element, tuple) pairs
    nice_tuples: int  # distinct tuples good for >= 1 element
    degrees: dict[int, int]
    good_counts: dict[int, int]
    block_stats: list[dict]
    constants: dict
    checks: list[Check] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json_dict(self) -> dict:
        return {
            "schema": "bounds-report/1",
            "k": self.k,
            "a": _json_num(self.a),
            "b": _json_num(self.b),
            "n": self.n,
            "policy": self.policy,
            "seed": self.seed,
            "hypothesis_certified": self.hypothesis_certified,
            "window_size": self.window_size,
            "gamma_size": self.gamma_size,
            "sum_chain_lengths": self.sum_chain_lengths,
            "sum_degrees": self.sum_degrees,
            "incidences": self.incidences,
            "nice_tuples": self.nice_tuples,
            "degrees": {str(y): d for y, d in sorted(self.degrees.items())},
            "good_counts": {str(y): g for y, g in sorted(self.good_counts.items())},
            "blocks": self.block_stats,
            "constants": self.constants,
            "checks": [c.to_dict() for c in self.checks],
            "all_passed": self.all_passed,
            "elapsed_ms": self.elapsed_ms,
        }


def verify_claims(
    family: Family,
    k: int,
    a: Number,
    b: Number,
    *,
    policy: str = "min",
    seed: Optional[int] = None,
    hypothesis_certified: Optional[bool] = None,
) -> BoundsReport:
    """Run the whole window pipeline and record every inequality.

    The caller is responsible for certifying weak k-cross-freeness first
    (pass the outcome as hypothesis_certified); on certified input every
    recorded check must pass, so any failure is a bug in the construction.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    a = _exactify(a)
    b = _exactify(b)
    if not a <= b:
        raise ValueError(f"need a <= b, got a={a}, b={b}")
    t0 = time.perf_counter()
    n = family.ground.n
    stripped = strip_small(family)
    window_blocks = [blk for blk in blocks(stripped) if a < blk.index <= b]
    covers = [chain_cover(blk, k) for blk in window_blocks]
    rep_map = representatives(covers, a, b, policy=policy, seed=seed)
    window_size = sum(len(blk.members) for blk in window_blocks)

    checks: list[Check] = []
    block_stats: list[dict] = []
    for blk, cover in zip(window_blocks, covers):
        i = blk.index
        maxima = Family.of(family.ground, [c.maximum for c in cover.chains])
        comparable = 0
        ms = maxima.members
        for p in range(len(ms)):
            for q in range(p + 1, len(ms)):
                if ms[p].bits & ~ms[q].bits == 0:
                    comparable += 1
        bound = Fraction((k - 1) * n, 2**i)
        sum_len = cover.sum_lengths()
        mass_rhs = Fraction(len(blk.members), k - 1)
        checks.append(
            Check(
                f"maxima_antichain[i={i}]",
                comparable == 0,
                lhs=comparable,
                rhs=0,
                slack=-comparable,
                note="comparable pairs among chain maxima",
            )
        )
        checks.append(
            Check(
                f"antichain_bound[i={i}]",
                len(maxima) <= bound,
                lhs=len(maxima),
                rhs=bound,
                slack=bound - len(maxima),
            )
        )
        checks.append(
            Check(
                f"chain_count_bound[i={i}]",
                len(cover.chains) <= bound,
                lhs=len(cover.chains),
                rhs=bound,
                slack=bound - len(cover.chains),
            )
        )
        checks.append(
            Check(
                f"cover_mass[i={i}]",
                sum_len >= mass_rhs,
                lhs=sum_len,
                rhs=mass_rhs,
                slack=sum_len - mass_rhs,
            )
        )
        block_stats.append(
            {
                "index": i,
                "size": len(blk.members),
                "chains": len(cover.chains),
                "sum_chain_lengths": sum_len,
                "maxima_comparable_pairs": comparable,
            }
        )

    sum_degrees = sum(rep_map.degrees.values())
    sum_chain_lengths = sum(len(e.chain.sets) for e in rep_map.entries)
    gamma_size = len(rep_map.entries)
    checks.append(
        Check(
            "degree_sum_identity",
            sum_degrees == sum_chain_lengths,
            lhs=sum_degrees,
            rhs=sum_chain_lengths,
            slack=0,
            note="exact bookkeeping identity",
        )
    )
    mass_rhs = Fraction(window_size, k - 1)
    checks.append(
        Check(
            "degree_sum_mass",
            sum_chain_lengths >= mass_rhs,
            lhs=sum_chain_lengths,
            rhs=mass_rhs,
            slack=sum_chain_lengths - mass_rhs,
        )
    )

    idx = good_tuple_index(rep_map, k)
    good_counts: Counter[int] = Counter()
    for ys in idx.values():
        good_counts.update(ys)
    incidences = sum(good_counts.values())
    nice_tuples = len(idx)

    fail_elems = 0
    min_margin: Optional[Number] = None
    for y, d in sorted(rep_map.degrees.items()):
        g = good_counts.get(y, 0)
        rhs = ext_binom(Fraction(d, (k - 1) ** 2), k)
        margin = g - rhs
        if min_margin is None or margin < min_margin:
            min_margin = margin
        if g < rhs:
            fail_elems += 1
    checks.append(
        Check(
            "good_tuple_lower",
            fail_elems == 0,
            lhs=fail_elems,
            rhs=0,
            slack=min_margin if min_margin is not None else 0,
            note="elements with g(y) below the degree bound; slack = min margin",
        )
    )

    multiplicity = max((len(ys) for ys in idx.values()), default=0)
    checks.append(
        Check(
            "tuple_multiplicity",
            multiplicity <= k - 1,
            lhs=multiplicity,
            rhs=k - 1,
            slack=k - 1 - multiplicity,
            note="max elements any tuple is good for",
        )
    )
    checks.append(
        Check(
            "incidence_vs_nice",
            incidences <= (k - 1) * nice_tuples,
            lhs=incidences,
            rhs=(k - 1) * nice_tuples,
            slack=(k - 1) * nice_tuples - incidences,
        )
    )

    pow2a = _pow2(a)
    nice_rhs = Fraction(2 * (k - 1) ** k * n) / pow2a * ext_binom(b, k - 1)
    vacuous = nice_tuples == 0 and nice_rhs == 0
    checks.append(
        Check(
            "nice_tuple_upper",
            nice_tuples < nice_rhs or vacuous,
            lhs=nice_tuples,
            rhs=nice_rhs,
            slack=nice_rhs - nice_tuples,
            note="vacuous: zero tuples and zero bound" if vacuous else "",
        )
    )

    c1 = _upper_coeff(k)
    c2 = _lower_coeff(k)
    upper_rhs = c1 * n * _exactify(b) ** (k - 1) / pow2a
    checks.append(
        Check(
            "incidence_upper",
            incidences <= upper_rhs,
            lhs=incidences,
            rhs=upper_rhs,
            slack=upper_rhs - incidences,
        )
    )
    lower_rhs = n * ext_binom(Fraction(window_size, (k - 1) ** 3 * n), k)
    checks.append(
        Check(
            "incidence_lower",
            incidences >= lower_rhs,
            lhs=incidences,
            rhs=lower_rhs,
            slack=incidences - lower_rhs,
        )
    )

    threshold = 2 * k * (k - 1) ** 3 * n
    if window_size > threshold:
        dense_rhs = c2 * window_size**k / Fraction(n ** (k - 1))
        checks.append(
            Check(
                "dense_incidence_lower",
                incidences > dense_rhs,
                lhs=incidences,
                rhs=dense_rhs,
                slack=incidences - dense_rhs,
            )
        )
    else:
        checks.append(
            Check(
                "dense_incidence_lower",
                True,
                lhs=window_size,
                rhs=threshold,
                slack=0,
                note="not applicable: window not above the density threshold",
            )
        )

    ratio = c1 / c2
    log2_c3 = (math.log2(ratio.numerator) - math.log2(ratio.denominator)) / k
    if b > 0:
        term = 2.0 ** (
            log2_c3 + math.log2(n) + (k - 1) / k * math.log2(float(b)) - float(a) / k
        )
    else:
        term = 0.0
    window_rhs = max(float(threshold), term)
    checks.append(
        Check(
            "window_size_upper",
            window_size < window_rhs,
            lhs=window_size,
            rhs=window_rhs,
            slack=window_rhs - window_size,
            note="computed in log space",
        )
    )

    constants = {
        "incidence_upper_coeff": float(c1),
        "incidence_upper_coeff_exact": f"{c1.numerator}/{c1.denominator}",
        "dense_lower_coeff": float(c2),
        "dense_lower_coeff_exact": f"{c2.numerator}/{c2.denominator}",
        "window_coeff": 2.0**log2_c3,
        "density_threshold": threshold,
    }

    elapsed = (time.perf_counter() - t0) * 1000.0
    return BoundsReport(
        k=k,
        a=a,
        b=b,
        n=n,
        policy=policy,
        seed=seed,
        hypothesis_certified=hypothesis_certified,
        window_size=window_size,
        gamma_size=gamma_size,
        sum_chain_lengths=sum_chain_lengths,
        sum_degrees=sum_degrees,
        incidences=incidences,
        nice_tuples=nice_tuples,
        degrees=dict(rep_map.degrees),
        good_counts=dict(good_counts),
        block_stats=block_stats,
        constants=constants,
        checks=checks,
        elapsed_ms=round(elapsed, 3),
    )


# --- window schedule ------------------------------------------------------


def log_star(x: float) -> int:
    """Iterated base-2 logarithm: applications of log2 until the value is <= 1."""
    count = 0
    v = float(x)
    while v > 1.0:
        v = math.log2(v)
        count += 1
    return count


@dataclass(frozen=True)
class Schedule:
    """Window endpoints a_0=0, a_1=k^2, a_{i+1}=2^{a_i/(k-1)}, up to a_s > log2 n."""

    k: int
    n: int
    a_values: tuple[Number, ...]
    s: int
    log_star_n: int

    def windows(self) -> list[tuple[Number, Number]]:
        """The (a_i, a_{i+1}] pairs, the first widened to include block 0."""
        lows: list[Number] = [-1] + list(self.a_values[1:-1])
        highs = list(self.a_values[1:])
        return list(zip(lows, highs))


def schedule(k: int, n: int) -> Schedule:
    """Window endpoints for splitting all blocks of an n-element ground set."""
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    log2n = math.log2(n)
    values: list[Number] = [0, k * k]
    while values[-1] <= log2n:
        prev = values[-1]
        if isinstance(prev, int) and prev % (k - 1) == 0:
            values.append(2 ** (prev // (k - 1)))
        else:
            values.append(2.0 ** (float(prev) / (k - 1)))
    s = next(i for i, v in enumerate(values) if v > log2n)
    return Schedule(k, n, tuple(values), s, log_star(n))


# --- per-size point loads -------------------------------------------------


def lomonosov_report(family: Family, k: int) -> dict:
    """Per-size point-load audit.

    In a weakly k-cross-free family every element lies in at most k-1
    members of any one size: distinct equal-size sets through a common
    point are pairwise weakly crossing.  Consequently there are at most
    (k-1)n/s members of size s.  Violations are reported with an explicit
    witness of k equal-size sets through one point.
    """
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    n = family.ground.n
    by_size: dict[int, list[Subset]] = {}
    for s in family.members:
        by_size.setdefault(s.size, []).append(s)
    per_size = []
    violations = []
    for size in sorted(by_size):
        sets_s = by_size[size]
        load: Counter[int] = Counter()
        for subset in sets_s:
            load.update(subset.elements())
        max_load = max(load.values(), default=0)
        count_bound = Fraction((k - 1) * n, size) if size else Fraction(0)
        ok = max_load <= k - 1 and len(sets_s) <= count_bound
        per_size.append(
            {
                "size": size,
                "count": len(sets_s),
                "count_bound": float(count_bound),
                "max_point_load": max_load,
                "ok": ok,
            }
        )
        if max_load >= k:
            for element in sorted(e for e, c in load.items() if c >= k):
                hitting = [s for s in sets_s if element in s][:k]
                violations.append(
                    {
                        "size": size,
                        "element": element,
                        "sets": [str(s) for s in hitting],
                    }
                )
    harmonic_bound = float(sum(Fraction((k - 1) * n, s) for s in range(1, n + 1)))
    return {
        "schema": "lomonosov-report/1",
        "k": k,
        "n": n,
        "family_size": len(family),
        "per_size": per_size,
        "violations": violations,
        "size_bound_total": harmonic_bound,
        "ok": not violations and all(r["ok"] for r in per_size),
    }


# --- whole pipeline -------------------------------------------------------


class HypothesisError(RuntimeError):
    """Input failed weak k-cross-freeness certification (and force is off)."""

    def __init__(self, cert_report: CertReport):
        super().__init__(
            f"family is not weakly {cert_report.k}-cross-free; "
            f"witness: {cert_report.witness_sets}"
        )
        self.cert_report = cert_report


@dataclass(eq=False)
class PipelineReport:
    k: int
    n: int
    input_size: int
    stripped_size: int
    certified: Optional[bool]
    forced: bool
    window_schedule: Optional[Schedule]
    windows: list[BoundsReport]
    lomonosov: dict
    elapsed_ms: float = 0.0

    @property
    def window_sizes(self) -> list[int]:
        return [w.window_size for w in self.windows]

    @property
    def sum_matches_stripped(self) -> Optional[bool]:
        if self.window_schedule is None:
            return None
        return sum(self.window_sizes) == self.stripped_size

    @property
    def all_passed(self) -> bool:
        ok = all(w.all_passed for w in self.windows)
        if self.window_schedule is not None:
            ok = ok and bool(self.sum_matches_stripped)
        return ok

    def to_json_dict(self) -> dict:
        sched = None
        if self.window_schedule is not None:
            sched = {
                "a_values": [_json_num(v) for v in self.window_schedule.a_values],
                "s": self.window_schedule.s,
                "log_star_n": self.window_schedule.log_star_n,
            }
        return {
            "schema": "pipeline-report/1",
            "k": self.k,
            "n": self.n,
            "input_size": self.input_size,
            "stripped_size": self.stripped_size,
            "certified_weakly_cross_free": self.certified,
            "forced": self.forced,
            "schedule": sched,
            "window_sizes": self.window_sizes,
            "window_sizes_total": sum(self.window_sizes),
            "sum_matches_stripped": self.sum_matches_stripped,
            "windows": [w.to_json_dict() for w in self.windows],
            "lomonosov": self.lomonosov,
            "all_passed": self.all_passed,
            "elapsed_ms": self.elapsed_ms,
        }


def run_pipeline(
    family: Family,
    k: int,
    *,
    a: Optional[Number] = None,
    b: Optional[Number] = None,
    use_schedule: bool = False,
    policy: str = "min",
    seed: Optional[int] = None,
    check_hypothesis: bool = True,
    force: bool = False,
) -> PipelineReport:
    """Certify, then verify every inequality over one window or the schedule.

    Raises HypothesisError when the input is not weakly k-cross-free and
    force is False.  With use_schedule, the windows are (a_i, a_{i+1}] with
    the first widened to cover block 0, so window sizes add up to the
    stripped family size exactly.
    """
    if use_schedule == (a is not None or b is not None):
        raise ValueError("pass either use_schedule=True or both a and b")
    if not use_schedule and (a is None or b is None):
        raise ValueError("explicit windows need both a and b")
    t0 = time.perf_counter()
    cert = certify(family, k, "weak") if check_hypothesis else None
    certified = cert.cross_free if cert is not None else None
    if certified is False and not force:
        raise HypothesisError(cert)
    stripped = strip_small(family)
    n = family.ground.n
    sched: Optional[Schedule] = None
    if use_schedule:
        if n >= 2:
            sched = schedule(k, n)
            window_bounds = sched.windows()
        else:
            window_bounds = [(-1, 0)]
    else:
        window_bounds = [(a, b)]
    windows = [
        verify_claims(
            family,
            k,
            lo,
            hi,
            policy=policy,
            seed=seed,
            hypothesis_certified=certified,
        )
        for lo, hi in window_bounds
    ]
    report = PipelineReport(
        k=k,
        n=n,
        input_size=len(family),
        stripped_size=len(stripped),
        certified=certified,
        forced=force and certified is False,
        window_schedule=sched,
        windows=windows,
        lomonosov=lomonosov_report(family, k),
    )
    report.elapsed_ms = round((time.perf_counter() - t0) * 1000.0, 3)
    return report
