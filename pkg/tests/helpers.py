"""Seed-pinned random generators shared by the property and acceptance tests."""

from __future__ import annotations

import random

from koszulity.category import CategoryError, FiniteGradedCategory, QuiverPresentation, from_quiver
from koszulity.posets import FinitePoset


def _parallel_chains_poset(rng: random.Random, max_elements: int) -> FinitePoset:
    """Equal-length chains sharing a bottom and a top: graded, and
    non-Cohen-Macaulay as soon as the chains have interior length >= 2."""
    length = rng.randint(1, 3)
    max_chains = max(1, (max_elements - 2) // max(1, length - 1)) if length > 1 else 3
    chains = rng.randint(2, max(2, min(3, max_chains)))
    if length == 1:
        n = 2
    else:
        n = 2 + chains * (length - 1)
    if n > max_elements:
        length, chains, n = 2, 2, 4
    pairs = []
    next_id = 2
    for _ in range(chains):
        prev = 0
        for _ in range(length - 1):
            pairs.append((prev, next_id))
            prev = next_id
            next_id += 1
        pairs.append((prev, 1))
    return FinitePoset([str(i) for i in range(max(next_id, 2))], pairs)


def random_graded_poset(rng: random.Random, max_elements: int = 8) -> FinitePoset:
    """Layered poset: covers only join adjacent levels, so every interval is
    graded by construction.  A slice of the instances are parallel-chain
    posets, whose middle intervals disconnect (the non-CM side)."""
    if max_elements >= 4 and rng.random() < 0.2:
        return _parallel_chains_poset(rng, max_elements)
    n = rng.randint(1, max_elements)
    levels: list[list[int]] = []
    next_id = 0
    while next_id < n:
        size = rng.randint(1, min(3, n - next_id))
        levels.append(list(range(next_id, next_id + size)))
        next_id += size
    density = rng.choice((0.25, 0.4, 0.6, 0.9))
    pairs = []
    for lower, upper in zip(levels, levels[1:]):
        for b in upper:
            for a in lower:
                if rng.random() < density:
                    pairs.append((a, b))
    return FinitePoset([str(i) for i in range(n)], pairs)


def _wheel_quiver(rng: random.Random) -> QuiverPresentation:
    """Chains of equal length with shared endpoints and the two outermost
    chains identified; hexagon-style, usually not quadratic."""
    length = rng.randint(2, 3)
    chains = rng.randint(2, 3)
    vertices = ["s", "t"]
    arrows = []
    paths = []
    for c in range(chains):
        prev = "s"
        path = []
        for step in range(length - 1):
            v = f"m{c}_{step}"
            vertices.append(v)
            lab = f"a{c}_{step}"
            arrows.append((lab, prev, v))
            path.append(lab)
            prev = v
        lab = f"a{c}_{length - 1}"
        arrows.append((lab, prev, "t"))
        path.append(lab)
        paths.append(tuple(path))
    relations = [(paths[0], paths[1])]
    return QuiverPresentation.make(vertices, arrows, relations, max_length=length)


def _random_quiver(rng: random.Random) -> QuiverPresentation:
    if rng.random() < 0.2:
        return _wheel_quiver(rng)
    n_levels = rng.randint(2, 4)
    sizes = [rng.randint(1, 2) for _ in range(n_levels)]
    vertices = []
    levels: list[list[str]] = []
    for i, size in enumerate(sizes):
        level = [f"v{i}_{j}" for j in range(size)]
        levels.append(level)
        vertices.extend(level)
    arrows = []
    k = 0
    density = rng.choice((0.4, 0.6, 0.9))
    for lower, upper in zip(levels, levels[1:]):
        for src in lower:
            for tgt in upper:
                if rng.random() < density:
                    arrows.append((f"a{k}", src, tgt))
                    k += 1
    if not arrows:
        arrows.append(("a0", levels[0][0], levels[1][0]))
    # occasionally identify parallel paths of length 2 or 3; length-3
    # identifications inject non-quadratic (hence non-Koszul) examples
    relations = []
    by_src: dict[str, list[tuple[str, str, str]]] = {}
    for lab, src, tgt in arrows:
        by_src.setdefault(src, []).append((lab, src, tgt))
    parallel: dict[tuple[str, str], list[tuple[str, ...]]] = {}
    for lab1, src, mid in arrows:
        for lab2, _, tgt in by_src.get(mid, []):
            parallel.setdefault((src, tgt), []).append((lab1, lab2))
            for lab3, _, far in by_src.get(tgt, []):
                parallel.setdefault((src, far), []).append((lab1, lab2, lab3))
    for (src, tgt), ps in sorted(parallel.items()):
        same_len = {}
        for p in ps:
            same_len.setdefault(len(p), []).append(p)
        for group in same_len.values():
            if len(group) >= 2 and rng.random() < 0.5:
                p, q = rng.sample(group, 2)
                if p != q:
                    relations.append((p, q))
    max_length = n_levels - 1
    if rng.random() < 0.25:
        # a loop exercises the truncation path
        arrows.append((f"a{k}", levels[0][0], levels[0][0]))
        max_length = max(2, max_length)
    return QuiverPresentation.make(vertices, arrows, relations, max_length)


def random_category(
    rng: random.Random, max_objects: int = 6, max_morphisms: int = 25
) -> FiniteGradedCategory:
    while True:
        try:
            cat = from_quiver(_random_quiver(rng))
        except CategoryError:
            continue
        if cat.num_objects <= max_objects and cat.num_morphisms <= max_morphisms:
            return cat
