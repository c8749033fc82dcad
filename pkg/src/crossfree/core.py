"""Ground sets, bit-vector subsets, families and the crossing relations.

Elements are 1-based: a ground set of size ``n`` carries the elements
``1..n`` and a subset stores membership as an ``n``-bit mask, bit ``e-1``
holding element ``e``.  Two subsets A, B of the same ground set are
*crossing* when A\\B, B\\A, A&B and the outside region are all non-empty,
and *weakly crossing* when the first three are non-empty (the outside may
vanish).  All values are immutable and every operation is a pure function,
so the module is safe under arbitrary concurrency.

Canonical order -- the ordering used everywhere for deterministic output --
sorts subsets by (size, numeric value of the bit mask).
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "MAX_GROUND_SIZE",
    "FamilyFormatError",
    "GroundMismatchError",
    "GroundSet",
    "Subset",
    "Family",
    "RegionProfile",
    "regions",
    "is_crossing",
    "is_weakly_crossing",
    "complement",
    "is_antichain",
    "is_chain",
    "parse_family",
    "serialize_family",
]

# Python ints keep the bit tricks exact at any width; the cap is a declared
# capability boundary so oversized inputs fail loudly instead of grinding.
MAX_GROUND_SIZE = 4096


class FamilyFormatError(ValueError):
    """Malformed family file: bad syntax, out-of-range element, duplicate set."""


class GroundMismatchError(ValueError):
    """An operation mixed subsets living on different ground sets."""


@dataclass(frozen=True)
class GroundSet:
    """The set {1, ..., n} all members of one family are drawn from."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"ground set needs n >= 1, got {self.n}")
        if self.n > MAX_GROUND_SIZE:
            raise ValueError(
                f"ground set size {self.n} is beyond the supported limit of "
                f"{MAX_GROUND_SIZE} elements"
            )

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def elements(self) -> range:
        return range(1, self.n + 1)


@dataclass(frozen=True)
class Subset:
    """An immutable subset of a ground set, stored as a bit mask."""

    ground: GroundSet
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= self.ground.full_mask:
            raise ValueError(
                f"bit mask {self.bits:#x} out of range for n={self.ground.n}"
            )

    @classmethod
    def from_elements(cls, ground: GroundSet, elements: Iterable[int]) -> "Subset":
        bits = 0
        for e in elements:
            if not 1 <= e <= ground.n:
                raise ValueError(f"element {e} outside 1..{ground.n}")
            bits |= 1 << (e - 1)
        return cls(ground, bits)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    @property
    def key(self) -> tuple[int, int]:
        """Canonical sort key: (size, numeric mask value)."""
        return (self.bits.bit_count(), self.bits)

    def elements(self) -> tuple[int, ...]:
        out = []
        m = self.bits
        while m:
            out.append((m & -m).bit_length())
            m &= m - 1
        return tuple(out)

    def __contains__(self, element: int) -> bool:
        return 1 <= element <= self.ground.n and self.bits >> (element - 1) & 1 == 1

    def is_subset_of(self, other: "Subset") -> bool:
        _same_ground(self, other)
        return self.bits & ~other.bits == 0

    def __str__(self) -> str:
        return "{" + ",".join(str(e) for e in self.elements()) + "}"


@dataclass(frozen=True)
class RegionProfile:
    """The four pairwise-disjoint regions a pair of subsets cuts [n] into."""

    a_minus_b: Subset
    b_minus_a: Subset
    a_cap_b: Subset
    outside: Subset


@dataclass(frozen=True)
class Family:
    """A duplicate-free collection of subsets of one ground set.

    Members are kept in canonical (size, mask) order, so iteration order,
    member indices and serialized output are all deterministic.
    """

    ground: GroundSet
    members: tuple[Subset, ...]

    @classmethod
    def of(cls, ground: GroundSet, subsets: Iterable[Subset]) -> "Family":
        masks = set()
        for s in subsets:
            if s.ground != ground:
                raise GroundMismatchError(
                    f"subset on n={s.ground.n} added to family on n={ground.n}"
                )
            masks.add(s.bits)
        return cls.from_masks(ground, masks)

    @classmethod
    def from_masks(cls, ground: GroundSet, masks: Iterable[int]) -> "Family":
        ordered = sorted(set(masks), key=lambda m: (m.bit_count(), m))
        return cls(ground, tuple(Subset(ground, m) for m in ordered))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Subset]:
        return iter(self.members)

    def __getitem__(self, index: int) -> Subset:
        return self.members[index]


def _same_ground(a: Subset, b: Subset) -> None:
    if a.ground != b.ground:
        raise GroundMismatchError(
            f"subsets live on different ground sets (n={a.ground.n} vs n={b.ground.n})"
        )


def regions(a: Subset, b: Subset) -> RegionProfile:
    """Split the ground set into the four regions defined by a pair A, B."""
    _same_ground(a, b)
    g = a.ground
    return RegionProfile(
        a_minus_b=Subset(g, a.bits & ~b.bits),
        b_minus_a=Subset(g, b.bits & ~a.bits),
        a_cap_b=Subset(g, a.bits & b.bits),
        outside=Subset(g, g.full_mask & ~(a.bits | b.bits)),
    )


def is_weakly_crossing(a: Subset, b: Subset) -> bool:
    """True iff A\\B, B\\A and A&B are all non-empty."""
    _same_ground(a, b)
    return (
        a.bits & ~b.bits != 0
        and b.bits & ~a.bits != 0
        and a.bits & b.bits != 0
    )


def is_crossing(a: Subset, b: Subset) -> bool:
    """True iff all four regions of the pair are non-empty."""
    _same_ground(a, b)
    return (
        a.bits & ~b.bits != 0
        and b.bits & ~a.bits != 0
        and a.bits & b.bits != 0
        and (a.bits | b.bits) != a.ground.full_mask
    )


def complement(a: Subset) -> Subset:
    """The subset [n] \\ A; an involution."""
    return Subset(a.ground, a.bits ^ a.ground.full_mask)


def is_antichain(family: Family) -> bool:
    """True iff no member contains another (vacuously true for <= 1 member)."""
    ms = family.members
    for i, a in enumerate(ms):
        for b in ms[i + 1 :]:
            # canonical order sorts by size, so only a <= b is possible here
            if a.bits & ~b.bits == 0:
                return False
    return True


def is_chain(family: Family) -> bool:
    """True iff the members are totally ordered by inclusion."""
    ms = family.members
    return all(ms[i].bits & ~ms[i + 1].bits == 0 for i in range(len(ms) - 1))


_HEADER_RE = re.compile(r"n=(\d+)")
_SET_RE = re.compile(r"\{(\d+(?:,\d+)*)?\}")


def parse_family(text: str, strict: bool = True) -> Family:
    """Parse the family file format.

    Lines starting with '#' are comments and blank lines are skipped.  The
    first significant line must be ``n=<int>``; every following line is one
    set written ``{e1,e2,...}`` with strictly ascending elements in 1..n
    (``{}`` is the empty set).  Duplicate sets raise FamilyFormatError in
    strict mode and are dropped with a warning otherwise.
    """
    ground: GroundSet | None = None
    seen: dict[int, int] = {}
    masks: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ground is None:
            m = _HEADER_RE.fullmatch(line)
            if not m:
                raise FamilyFormatError(
                    f"line {lineno}: expected 'n=<int>' header, got {line!r}"
                )
            try:
                ground = GroundSet(int(m.group(1)))
            except ValueError as exc:
                raise FamilyFormatError(f"line {lineno}: {exc}") from exc
            continue
        m = _SET_RE.fullmatch(line)
        if not m:
            raise FamilyFormatError(f"line {lineno}: malformed set {line!r}")
        bits = 0
        prev = 0
        if m.group(1):
            for token in m.group(1).split(","):
                e = int(token)
                if not 1 <= e <= ground.n:
                    raise FamilyFormatError(
                        f"line {lineno}: element {e} outside 1..{ground.n}"
                    )
                if e <= prev:
                    raise FamilyFormatError(
                        f"line {lineno}: elements must be strictly ascending"
                    )
                bits |= 1 << (e - 1)
                prev = e
        if bits in seen:
            if strict:
                raise FamilyFormatError(
                    f"line {lineno}: duplicate set {line} (first seen on line {seen[bits]})"
                )
            warnings.warn(
                f"family file line {lineno}: duplicate set {line} ignored",
                stacklevel=2,
            )
            continue
        seen[bits] = lineno
        masks.append(bits)
    if ground is None:
        raise FamilyFormatError("missing 'n=<int>' header line")
    return Family.from_masks(ground, masks)


def serialize_family(family: Family) -> str:
    """Canonical, bit-exact serialization: header then members in canonical
    order, elements ascending, no spaces."""
    lines = [f"n={family.ground.n}"]
    lines.extend(str(s) for s in family.members)
    return "\n".join(lines) + "\n"
