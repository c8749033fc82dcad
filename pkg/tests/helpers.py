"""Small shared helpers for the test suite."""

from __future__ import annotations

import json
import random

from crossfree.core import Family, GroundSet, Subset


def fam(n: int, *sets) -> Family:
    """Family on [n] from element tuples: fam(4, (1,2), (2,3))."""
    ground = GroundSet(n)
    return Family.of(ground, [Subset.from_elements(ground, s) for s in sets])


def rand_family(rng: random.Random, n: int, size: int) -> Family:
    """Uniformly random family of `size` distinct subsets of [n]."""
    masks = rng.sample(range(1 << n), min(size, 1 << n))
    return Family.from_masks(GroundSet(n), masks)


def strip_timing(obj):
    """Recursively drop the timing-only fields from a parsed JSON report."""
    if isinstance(obj, dict):
        return {
            key: strip_timing(value)
            for key, value in obj.items()
            if key not in ("elapsed_ms", "ms")
        }
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def normalize_json_report(text: str) -> str:
    return json.dumps(strip_timing(json.loads(text)), sort_keys=True)


def normalize_csv_report(text: str) -> str:
    """Blank the ms column (last) of a sweep CSV."""
    lines = text.strip().splitlines()
    out = [lines[0]]
    for line in lines[1:]:
        cells = line.split(",")
        cells[-1] = ""
        out.append(",".join(cells))
    return "\n".join(out)
