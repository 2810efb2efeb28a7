"""Graded Ext between simples, Koszulity, and quadraticity checks.

Ext^i(S_w, S_v)_{-n} is computed for n >= 1 as the direct sum over
morphisms p of length n from v to w of the reduced cohomology of the
factorization space of p in degree i-2.  An independent resolution-based
oracle recomputes the same dimensions from the reduced nerve and must
agree entrywise.

Koszulity is the concentration of every factorization-space cohomology in
degree l(p)-2, which is checked morphism by morphism; the verdict records
the truncation bound when the category's table is incomplete.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .category import FiniteGradedCategory, UnknownObject
from .factorization import factorization_space, nerve_cells
from .homology import RATIONALS, BettiProfile, Field, rank_of_rows, reduced_cohomology


@dataclass(frozen=True)
class ExtQuery:
    """Ext^i(S_w, S_v)_{-n}: w is the resolved simple, morphisms run v -> w."""

    w: int
    v: int
    n: int


@dataclass(frozen=True)
class KoszulWitness:
    morphism: int
    label: str
    length: int
    degree: int
    betti: int


@dataclass(frozen=True)
class KoszulVerdict:
    koszul: bool
    checked_up_to: Union[int, str]  # length bound, or "complete"
    witnesses: tuple[KoszulWitness, ...]


def _betti_profile(cat: FiniteGradedCategory, p: int, k: Field) -> BettiProfile:
    cache = cat._cache.setdefault(("betti", k), {})
    prof = cache.get(p)
    if prof is None:
        prof = reduced_cohomology(factorization_space(cat, p), k)
        cache[p] = prof
    return prof


def _check_objects(cat: FiniteGradedCategory, *objs: int):
    for v in objs:
        if not 0 <= v < cat.num_objects:
            raise UnknownObject(f"object index {v} out of range")


def ext_simples(cat: FiniteGradedCategory, query: ExtQuery, k: Field = RATIONALS) -> dict[int, int]:
    """Dimensions i -> dim Ext^i(S_w, S_v)_{-n}; zero entries omitted.

    Exact for n within the category's length bound (factorization spaces of
    such morphisms only involve composites the truncated table represents).
    """
    _check_objects(cat, query.w, query.v)
    if query.n == 0:
        return {0: 1} if query.w == query.v else {}
    result: dict[int, int] = {}
    for p in range(cat.num_morphisms):
        m = cat.morphisms[p]
        if m.length != query.n or m.source != query.v or m.target != query.w:
            continue
        prof = _betti_profile(cat, p, k)
        for j, d in prof.reduced_betti.items():
            i = j + 2
            result[i] = result.get(i, 0) + d
    return {i: d for i, d in sorted(result.items()) if d}


def ext_oracle_resolution(cat: FiniteGradedCategory, query: ExtQuery, k: Field = RATIONALS) -> dict[int, int]:
    """Independent Ext computation from the reduced-nerve complex.

    The degree-r term has one generator per r-cell of the reduced nerve
    with total length n running v -> w; the differential keeps only the
    inner faces sum_{i=1}^{r-1} (-1)^i d_i (the end faces die after
    tensoring with S_w and applying Hom(-, S_v)).
    """
    _check_objects(cat, query.w, query.v)
    n = query.n
    if n == 0:
        return {0: 1} if query.w == query.v else {}
    tuples = nerve_cells(cat, n)
    terms: list[list[tuple[int, ...]]] = [[]]  # r = 0: objects carry length 0 < n
    r = 1
    while True:
        level = [
            s
            for s in tuples.get(r, [])
            if sum(cat.length(f) for f in s) == n
            and cat.source(s[-1]) == query.v
            and cat.target(s[0]) == query.w
        ]
        if not level and r > n:
            break
        terms.append(level)
        r += 1
    index = [{s: i for i, s in enumerate(level)} for level in terms]
    # ranks[r] = rank of the chain map C_r -> C_{r-1}
    ranks = [0] * (len(terms) + 1)
    for r in range(1, len(terms)):
        rows = []
        for s in terms[r]:
            row: dict[int, int] = {}
            for i in range(1, r):
                h = cat.compose(s[i - 1], s[i])
                face = s[: i - 1] + (h,) + s[i + 1 :]
                col = index[r - 1][face]
                row[col] = row.get(col, 0) + (-1) ** i
            rows.append({c: v for c, v in row.items() if v})
        ranks[r] = rank_of_rows(rows, k)
    result = {}
    for r in range(len(terms)):
        h = len(terms[r]) - ranks[r] - ranks[r + 1]
        if h:
            result[r] = h
    return result


def ext_table(cat: FiniteGradedCategory, k: Field = RATIONALS) -> dict[tuple[int, int, int, int], int]:
    """All nonzero entries (w, v, n, i) -> dim Ext^i(S_w, S_v)_{-n} up to the
    category's maximal length."""
    entries: dict[tuple[int, int, int, int], int] = {}
    for v in range(cat.num_objects):
        entries[(v, v, 0, 0)] = 1
    for n in range(1, cat.max_length() + 1):
        for w in range(cat.num_objects):
            for v in range(cat.num_objects):
                for i, d in ext_simples(cat, ExtQuery(w, v, n), k).items():
                    entries[(w, v, n, i)] = d
    return entries


def is_koszul(cat: FiniteGradedCategory, k: Field = RATIONALS, witness_limit: int = 10) -> KoszulVerdict:
    """Concentration of every factorization-space cohomology in degree l(p)-2.

    Witnesses list the first failing morphisms in (length, id) order, each
    with an offending cohomological degree and dimension.
    """
    witnesses: list[KoszulWitness] = []
    failing: set[int] = set()
    order = sorted(cat.non_identity_morphisms(), key=lambda p: (cat.length(p), p))
    for p in order:
        if len(failing) >= witness_limit:
            break
        n = cat.length(p)
        if cat.length_bound is not None and n > cat.length_bound:
            continue  # factorization data past the bound is incomplete
        prof = _betti_profile(cat, p, k)
        for j, d in sorted(prof.reduced_betti.items()):
            if j != n - 2:
                witnesses.append(KoszulWitness(p, cat.label(p), n, j, d))
                failing.add(p)
    checked: Union[int, str] = "complete" if cat.length_bound is None else cat.length_bound
    return KoszulVerdict(not witnesses, checked, tuple(witnesses))


def generated_in_degree_one(cat: FiniteGradedCategory) -> tuple[bool, list[int]]:
    """True iff every morphism of length >= 2 admits a nontrivial factorization;
    the witnesses are the indecomposables of length >= 2."""
    bad = [
        p
        for p in cat.non_identity_morphisms()
        if cat.length(p) >= 2 and not cat.splittings(p)
    ]
    return (not bad, sorted(bad, key=lambda p: (cat.length(p), p)))


def quadratic_sufficient(cat: FiniteGradedCategory, k: Field = RATIONALS) -> bool:
    """Sufficient condition: factorization spaces nonempty away from length 1
    and connected away from length 2.  True guarantees quadratic; False
    decides nothing by itself."""
    for p in cat.non_identity_morphisms():
        n = cat.length(p)
        prof = _betti_profile(cat, p, k)
        if n != 1 and prof.betti(-1) != 0:
            return False
        if n != 2 and prof.betti(0) != 0:
            return False
    return True


@dataclass(frozen=True)
class QuadraticityVerdict:
    verdict: str  # "quadratic" | "not_quadratic" | "unknown"
    witness: Optional[str] = None


def quadraticity_verdict(cat: FiniteGradedCategory, k: Field = RATIONALS) -> QuadraticityVerdict:
    """Three-valued quadraticity report.

    "quadratic" comes from the sufficient connectivity condition;
    "not_quadratic" either from failed generation in degree one or from a
    disconnected factorization space in length 3 (a degree-3 relation);
    anything else is "unknown".
    """
    gen, bad = generated_in_degree_one(cat)
    if not gen:
        return QuadraticityVerdict("not_quadratic", cat.label(bad[0]))
    if quadratic_sufficient(cat, k):
        return QuadraticityVerdict("quadratic")
    for p in sorted(cat.non_identity_morphisms(), key=lambda p: (cat.length(p), p)):
        if cat.length(p) == 3 and _betti_profile(cat, p, k).betti(0) != 0:
            return QuadraticityVerdict("not_quadratic", cat.label(p))
    return QuadraticityVerdict("unknown")
