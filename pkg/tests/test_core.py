"""family-core: regions, crossing predicates, order predicates, file format."""

from __future__ import annotations

import itertools
import random

import pytest

from crossfree.core import (
    MAX_GROUND_SIZE,
    Family,
    FamilyFormatError,
    GroundMismatchError,
    GroundSet,
    Subset,
    complement,
    is_antichain,
    is_chain,
    is_crossing,
    is_weakly_crossing,
    parse_family,
    regions,
    serialize_family,
)
from helpers import fam, rand_family


def sub(n, *elems):
    return Subset.from_elements(GroundSet(n), elems)


class TestRegions:
    def test_four_regions(self):
        r = regions(sub(4, 1, 2), sub(4, 2, 3))
        assert r.a_minus_b == sub(4, 1)
        assert r.b_minus_a == sub(4, 3)
        assert r.a_cap_b == sub(4, 2)
        assert r.outside == sub(4, 4)

    def test_identical_pair(self):
        r = regions(sub(4, 1, 2), sub(4, 1, 2))
        assert r.a_minus_b.size == 0 and r.b_minus_a.size == 0
        assert r.a_cap_b == sub(4, 1, 2)
        assert r.outside == sub(4, 3, 4)

    def test_no_outside(self):
        r = regions(sub(3, 1, 2), sub(3, 2, 3))
        assert (r.a_minus_b, r.b_minus_a, r.a_cap_b) == (sub(3, 1), sub(3, 3), sub(3, 2))
        assert r.outside.size == 0

    def test_partition_property(self):
        rng = random.Random(11)
        for _ in range(300):
            n = rng.randint(1, 12)
            g = GroundSet(n)
            a = Subset(g, rng.randrange(1 << n))
            b = Subset(g, rng.randrange(1 << n))
            r = regions(a, b)
            parts = [r.a_minus_b.bits, r.b_minus_a.bits, r.a_cap_b.bits, r.outside.bits]
            assert sum(p.bit_count() for p in parts) == n
            union = 0
            for p in parts:
                assert union & p == 0
                union |= p
            assert union == g.full_mask

    def test_ground_mismatch(self):
        with pytest.raises(GroundMismatchError):
            regions(sub(4, 1), sub(5, 1))


class TestCrossingPredicates:
    def test_crossing_example(self):
        assert is_crossing(sub(4, 1, 2), sub(4, 2, 3))

    def test_nested_pair_does_not_cross(self):
        assert not is_crossing(sub(4, 1, 2), sub(4, 1, 2, 3))

    def test_weakly_examples(self):
        assert is_weakly_crossing(sub(3, 1, 2), sub(3, 2, 3))
        assert not is_weakly_crossing(sub(4, 1, 2), sub(4, 3, 4))
        assert is_weakly_crossing(sub(4, 1, 2), sub(4, 2, 3))

    def test_no_crossing_pair_below_n4(self):
        for n in (1, 2, 3):
            g = GroundSet(n)
            for x in range(1 << n):
                for y in range(1 << n):
                    assert not is_crossing(Subset(g, x), Subset(g, y))

    def test_symmetry_and_implication(self):
        rng = random.Random(23)
        for _ in range(500):
            n = rng.randint(1, 10)
            g = GroundSet(n)
            a = Subset(g, rng.randrange(1 << n))
            b = Subset(g, rng.randrange(1 << n))
            assert is_crossing(a, b) == is_crossing(b, a)
            assert is_weakly_crossing(a, b) == is_weakly_crossing(b, a)
            if is_crossing(a, b):
                assert is_weakly_crossing(a, b)

    def test_crossing_invariant_under_complementing_one_side(self):
        rng = random.Random(37)
        for _ in range(500):
            n = rng.randint(1, 10)
            g = GroundSet(n)
            a = Subset(g, rng.randrange(1 << n))
            b = Subset(g, rng.randrange(1 << n))
            assert is_crossing(a, b) == is_crossing(a, complement(b))

    def test_trivial_sets_cross_nothing(self):
        # empty, full, singletons and co-singletons force one region empty
        for n in range(1, 7):
            g = GroundSet(n)
            trivial = [0, g.full_mask]
            trivial += [1 << i for i in range(n)]
            trivial += [g.full_mask ^ (1 << i) for i in range(n)]
            for t in trivial:
                a = Subset(g, t)
                for m in range(1 << n):
                    assert not is_crossing(a, Subset(g, m))


class TestComplement:
    def test_examples(self):
        assert complement(sub(4, 1, 2)) == sub(4, 3, 4)
        assert complement(Subset(GroundSet(4), 0)) == sub(4, 1, 2, 3, 4)

    def test_involution(self):
        rng = random.Random(5)
        for _ in range(100):
            n = rng.randint(1, 16)
            a = Subset(GroundSet(n), rng.randrange(1 << n))
            assert complement(complement(a)) == a


class TestOrderPredicates:
    def test_antichain_and_chain(self):
        f = fam(4, (1, 2), (2, 3))
        assert is_antichain(f)
        assert not is_chain(f)

    def test_chain(self):
        f = fam(4, (1,), (1, 2), (1, 2, 3))
        assert is_chain(f)
        assert not is_antichain(f)

    def test_empty_and_singleton_families(self):
        empty = Family.of(GroundSet(3), [])
        assert is_antichain(empty) and is_chain(empty)
        one = fam(3, (1, 2))
        assert is_antichain(one) and is_chain(one)


class TestFamilyContainer:
    def test_canonical_order(self):
        f = fam(4, (2, 3), (1,), (1, 2))
        assert [str(s) for s in f] == ["{1}", "{1,2}", "{2,3}"]

    def test_dedup(self):
        f = fam(4, (1, 2), (1, 2))
        assert len(f) == 1

    def test_ground_mismatch(self):
        with pytest.raises(GroundMismatchError):
            Family.of(GroundSet(4), [sub(5, 1)])

    def test_ground_limits(self):
        with pytest.raises(ValueError):
            GroundSet(0)
        with pytest.raises(ValueError):
            GroundSet(MAX_GROUND_SIZE + 1)
        GroundSet(MAX_GROUND_SIZE)  # at the boundary: fine


class TestFileFormat:
    def test_parse_basic(self):
        f = parse_family("n=4\n{1,2}\n{2,3}\n")
        assert f.ground.n == 4 and len(f) == 2

    def test_element_out_of_range(self):
        with pytest.raises(FamilyFormatError, match="outside 1..4"):
            parse_family("n=4\n{5}\n")

    def test_canonical_serialization(self):
        f = fam(4, (2, 3), (1,))
        assert serialize_family(f) == "n=4\n{1}\n{2,3}\n"

    def test_comments_and_blanks(self):
        f = parse_family("# header comment\n\nn=3\n# a set\n{1}\n\n{2,3}\n")
        assert [str(s) for s in f] == ["{1}", "{2,3}"]

    def test_empty_set_line(self):
        f = parse_family("n=3\n{}\n")
        assert len(f) == 1 and f[0].size == 0

    def test_malformed_lines(self):
        for text in ("n=3\n{1,}\n", "n=3\n1,2\n", "n=3\n{2,1}\n", "n=3\n{1,1}\n", "{1}\n"):
            with pytest.raises(FamilyFormatError):
                parse_family(text)

    def test_missing_header(self):
        with pytest.raises(FamilyFormatError):
            parse_family("# only comments\n")

    def test_duplicate_strict_vs_lenient(self):
        text = "n=4\n{1,2}\n{1,2}\n"
        with pytest.raises(FamilyFormatError, match="duplicate"):
            parse_family(text)
        with pytest.warns(UserWarning, match="duplicate"):
            f = parse_family(text, strict=False)
        assert len(f) == 1

    def test_round_trip_random(self):
        rng = random.Random(91)
        for _ in range(100):
            n = rng.randint(1, 14)
            f = rand_family(rng, n, rng.randint(0, 20))
            assert parse_family(serialize_family(f)) == f

    def test_round_trip_is_byte_exact(self):
        rng = random.Random(92)
        for _ in range(50):
            f = rand_family(rng, 9, 12)
            text = serialize_family(f)
            assert serialize_family(parse_family(text)) == text


class TestSubset:
    def test_elements_and_contains(self):
        s = sub(6, 2, 5)
        assert s.elements() == (2, 5)
        assert 2 in s and 5 in s and 3 not in s and 7 not in s

    def test_size_is_popcount(self):
        rng = random.Random(3)
        for _ in range(50):
            n = rng.randint(1, 20)
            m = rng.randrange(1 << n)
            assert Subset(GroundSet(n), m).size == bin(m).count("1")

    def test_mask_out_of_range(self):
        with pytest.raises(ValueError):
            Subset(GroundSet(3), 1 << 3)
