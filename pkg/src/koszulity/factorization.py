"""Factorization spaces and the reduced nerve of a finite graded category.

A dimension-n cell of the factorization space of p is a tuple
(f_0, ..., f_{n+1}) of non-identity morphisms, written in composition
order (rightmost applied first), whose composite is p; the i-th face
composes the adjacent factors at positions i, i+1.

The reduced nerve has the objects as 0-cells and composable k-tuples of
non-identity morphisms as k-cells, so that for k >= 2 its k-cells are in
bijection with the (k-2)-dimensional factorization cells over all p.
"""

from __future__ import annotations

from typing import Iterable

from .category import CategoryError, FiniteGradedCategory
from .homology import SemiSimplicialSet


class IdentityMorphism(CategoryError):
    """Factorization spaces are defined for non-identity morphisms only."""


def _factor_sequences(cat: FiniteGradedCategory, p: int) -> tuple[tuple[int, ...], ...]:
    """All tuples of non-identity morphisms composing to p, in composition order.

    Includes the singleton (p,).  Memoized on the category: faces of cells
    of p are again factor sequences of p, and splittings recurse through
    shorter morphisms shared across spaces.
    """
    cache = cat._cache.setdefault("factor_sequences", {})

    def rec(q: int) -> tuple[tuple[int, ...], ...]:
        got = cache.get(q)
        if got is not None:
            return got
        seqs = {(q,)}
        for f, g in cat.splittings(q):
            # q = g o f with f applied first; extend every factorization of g
            for seq in rec(g):
                seqs.add(seq + (f,))
        result = tuple(sorted(seqs))
        cache[q] = result
        return result

    return rec(p)


def factorization_space(cat: FiniteGradedCategory, p: int) -> SemiSimplicialSet:
    """The semi-simplicial set of nontrivial factorizations of p.

    Dimension-n cells are the (n+2)-factor sequences; d_i composes factors
    i and i+1.  Empty for indecomposable p.
    """
    if not 0 <= p < cat.num_morphisms:
        raise CategoryError(f"no morphism with id {p}")
    if cat.is_identity(p):
        raise IdentityMorphism(f"morphism {cat.label(p)!r} is an identity")
    seqs = [s for s in _factor_sequences(cat, p) if len(s) >= 2]
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for s in seqs:
        by_dim.setdefault(len(s) - 2, []).append(s)
    top = max(by_dim, default=-1)
    cells = [sorted(by_dim.get(n, [])) for n in range(top + 1)]
    faces = {}
    for n in range(1, top + 1):
        for s in cells[n]:
            fs = []
            for i in range(n + 1):
                h = cat.compose(s[i], s[i + 1])
                assert h is not None, "factor sequence with an undefined adjacent composite"
                fs.append(s[:i] + (h,) + s[i + 2 :])
            faces[s] = tuple(fs)
    return SemiSimplicialSet(cells, faces)


def nerve_cells(
    cat: FiniteGradedCategory, max_total_length: int
) -> dict[int, list[tuple[int, ...]]]:
    """Reduced-nerve cells of each dimension k >= 1 with total length <= the bound.

    A k-cell is a composable k-tuple of non-identity morphisms in
    composition order.  Cached per bound on the category.
    """
    cache = cat._cache.setdefault("nerve_cells", {})
    if max_total_length in cache:
        return cache[max_total_length]
    non_id = cat.non_identity_morphisms()
    by_source: dict[int, list[int]] = {}
    for f in non_id:
        by_source.setdefault(cat.source(f), []).append(f)
    cells: dict[int, list[tuple[int, ...]]] = {}
    # grow tuples rightward: appended morphism is applied before the current ones
    frontier = [(f,) for f in non_id if cat.length(f) <= max_total_length]
    k = 1
    while frontier:
        cells[k] = sorted(frontier)
        nxt = []
        for s in frontier:
            tail_source = cat.source(s[-1])
            total = sum(cat.length(f) for f in s)
            for g in non_id:
                if cat.target(g) != tail_source:
                    continue
                if total + cat.length(g) <= max_total_length:
                    nxt.append(s + (g,))
        frontier = nxt
        k += 1
    cache[max_total_length] = cells
    return cells


def reduced_nerve(cat: FiniteGradedCategory, max_total_length: int | None = None) -> SemiSimplicialSet:
    """Reduced nerve as a semi-simplicial set: objects in dimension 0,
    composable k-tuples of non-identity morphisms in dimension k.

    For a truncated category the nerve is restricted to tuples of total
    length within the table's bound, where all inner faces stay defined.
    """
    bound = max_total_length
    if bound is None:
        bound = cat.length_bound if cat.length_bound is not None else cat.max_length()
    tuples = nerve_cells(cat, bound)
    top = max(tuples, default=0)
    cells: list[list] = [[("ob", v) for v in range(cat.num_objects)]]
    for k in range(1, top + 1):
        cells.append(tuples.get(k, []))
    faces = {}
    for s in tuples.get(1, []):
        faces[s] = (("ob", cat.source(s[0])), ("ob", cat.target(s[0])))
    for k in range(2, top + 1):
        for s in tuples.get(k, []):
            fs: list = [s[1:]]
            for i in range(1, k):
                h = cat.compose(s[i - 1], s[i])
                assert h is not None, "nerve face fell out of the truncated range"
                fs.append(s[: i - 1] + (h,) + s[i + 1 :])
            fs.append(s[:-1])
            faces[s] = tuple(fs)
    return SemiSimplicialSet(cells, faces)


def tuple_length(cat: FiniteGradedCategory, s: Iterable[int]) -> int:
    return sum(cat.length(f) for f in s)


def verify_cells_bijection(cat: FiniteGradedCategory) -> bool:
    """Cell counts of the reduced nerve in dimension k >= 2 match the total
    count of (k-2)-dimensional factorization cells over all non-identity
    morphisms with a defined composite."""
    bound = cat.length_bound if cat.length_bound is not None else cat.max_length()
    tuples = nerve_cells(cat, bound)
    composable: dict[int, int] = {}
    for k, cells in tuples.items():
        if k < 2:
            continue
        count = 0
        for s in cells:
            h = s[0]
            ok = True
            for f in s[1:]:
                h = cat.compose(h, f)
                if h is None:
                    ok = False
                    break
            if ok:
                count += 1
        composable[k] = count
    fact_counts: dict[int, int] = {}
    for p in cat.non_identity_morphisms():
        X = factorization_space(cat, p)
        for n in range(X.top_dim + 1):
            k = n + 2
            fact_counts[k] = fact_counts.get(k, 0) + X.num_cells(n)
    ks = set(composable) | set(fact_counts)
    return all(composable.get(k, 0) == fact_counts.get(k, 0) for k in ks)
