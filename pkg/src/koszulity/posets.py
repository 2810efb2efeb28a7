"""Finite posets, order complexes, links, and local Cohen-Macaulayness.

Simplicial-complex homology reuses the semi-simplicial engine by ordering
each face along a fixed global vertex order, so there is a single exact
homology code path.  Over a field homology and cohomology dimensions
coincide and we compute cochain ranks throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .category import CategoryError, FiniteGradedCategory, Morphism, SchemaError
from .factorization import factorization_space
from .homology import RATIONALS, BettiProfile, Field, SemiSimplicialSet, reduced_cohomology


class NotGraded(CategoryError):
    """Interval chain lengths disagree, so there is no length functor."""


class FaceNotInComplex(CategoryError):
    pass


class FinitePoset:
    """Dense elements 0..n-1 with labels; the order as up-sets."""

    def __init__(self, labels: Sequence[str], leq_pairs: Iterable[tuple[int, int]]):
        self.labels = tuple(str(x) for x in labels)
        n = len(self.labels)
        up = [set() for _ in range(n)]
        for a, b in leq_pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise SchemaError(f"relation ({a}, {b}) references unknown element")
            up[a].add(b)
        for v in range(n):
            up[v].add(v)
        # transitive closure
        changed = True
        while changed:
            changed = False
            for a in range(n):
                extra = set()
                for b in up[a]:
                    extra |= up[b]
                if not extra <= up[a]:
                    up[a] |= extra
                    changed = True
        for a in range(n):
            for b in up[a]:
                if a != b and a in up[b]:
                    raise SchemaError(f"antisymmetry fails on ({self.labels[a]}, {self.labels[b]})")
        self.up = tuple(frozenset(s) for s in up)
        self._lengths_cache: dict[tuple[int, int], frozenset[int]] = {}

    @property
    def n(self) -> int:
        return len(self.labels)

    def leq(self, a: int, b: int) -> bool:
        return b in self.up[a]

    def lt(self, a: int, b: int) -> bool:
        return a != b and b in self.up[a]

    def elements(self) -> range:
        return range(self.n)

    def closed_interval(self, a: int, b: int) -> list[int]:
        return sorted(c for c in self.up[a] if self.leq(c, b))

    def open_interval(self, a: int, b: int) -> list[int]:
        return [c for c in self.closed_interval(a, b) if c != a and c != b]

    def covers(self) -> list[tuple[int, int]]:
        out = []
        for a in range(self.n):
            for b in self.up[a]:
                if a == b:
                    continue
                if not any(self.lt(a, c) and self.lt(c, b) for c in self.up[a]):
                    out.append((a, b))
        return out

    def intervals(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in sorted(self.up[a])]

    def chain_lengths(self, a: int, b: int) -> frozenset[int]:
        """Set of lengths of maximal chains from a to b (cover steps)."""
        key = (a, b)
        got = self._lengths_cache.get(key)
        if got is not None:
            return got
        if a == b:
            result = frozenset({0})
        else:
            lengths = set()
            for c in self.up[a]:
                if c != a and self.leq(c, b) and not any(self.lt(a, d) and self.lt(d, c) for d in self.up[a]):
                    lengths |= {1 + x for x in self.chain_lengths(c, b)}
            result = frozenset(lengths)
        self._lengths_cache[key] = result
        return result

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise SchemaError(f"no poset element labeled {label!r}") from None

    def __repr__(self):
        return f"FinitePoset({self.n} elements)"


def poset_from_json(doc: dict) -> FinitePoset:
    for key in ("elements", "relations"):
        if key not in doc:
            raise SchemaError(f"poset document missing key {key!r}")
    labels = [str(x) for x in doc["elements"]]
    if len(set(labels)) != len(labels):
        raise SchemaError("poset element labels must be unique")
    idx = {lab: i for i, lab in enumerate(labels)}

    def ref(x):
        if isinstance(x, int):
            if not 0 <= x < len(labels):
                raise SchemaError(f"element index {x} out of range")
            return x
        if str(x) in idx:
            return idx[str(x)]
        raise SchemaError(f"unknown element reference {x!r}")

    pairs = []
    for pair in doc["relations"]:
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise SchemaError("poset relations must be [a, b] pairs")
        pairs.append((ref(pair[0]), ref(pair[1])))
    return FinitePoset(labels, pairs)


def poset_to_json(P: FinitePoset) -> dict:
    return {
        "elements": list(P.labels),
        "relations": sorted([a, b] for a, b in P.covers()),
    }


def is_graded_poset(P: FinitePoset) -> bool:
    """True iff in every closed interval all maximal chains share one length."""
    return all(len(P.chain_lengths(a, b)) == 1 for a, b in P.intervals())


@dataclass(frozen=True)
class SimplicialComplex:
    """Stored by facets; faces are all subsets (the empty face included)."""

    vertices: frozenset
    facets: frozenset

    @staticmethod
    def from_facets(facets: Iterable[Iterable]) -> "SimplicialComplex":
        fs = {frozenset(f) for f in facets}
        fs = frozenset(f for f in fs if f and not any(f < g for g in fs))
        verts = frozenset().union(*fs) if fs else frozenset()
        return SimplicialComplex(verts, fs)

    def faces(self) -> set[frozenset]:
        """All faces including the empty face."""
        out: set[frozenset] = {frozenset()}
        for facet in self.facets:
            elems = sorted(facet)
            for mask in range(1, 1 << len(elems)):
                out.add(frozenset(e for i, e in enumerate(elems) if mask >> i & 1))
        return out

    def has_face(self, F: frozenset) -> bool:
        return any(F <= g for g in self.facets) or not F

    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1


def link(K: SimplicialComplex, F: Iterable) -> SimplicialComplex:
    """link(F) = {G : F u G in K, F n G empty}; facets are facet-minus-F."""
    F = frozenset(F)
    if not K.has_face(F):
        raise FaceNotInComplex(f"{sorted(F)} is not a face")
    return SimplicialComplex.from_facets(g - F for g in K.facets if F <= g)


def complex_to_semisimplicial(K: SimplicialComplex) -> SemiSimplicialSet:
    """Order each face by the global vertex order; d_i deletes the i-th vertex."""
    faces_by_dim: dict[int, set[tuple]] = {}
    for f in K.faces():
        if f:
            t = tuple(sorted(f))
            faces_by_dim.setdefault(len(t) - 1, set()).add(t)
    top = max(faces_by_dim, default=-1)
    cells = [sorted(faces_by_dim.get(n, ())) for n in range(top + 1)]
    face_map = {}
    for n in range(1, top + 1):
        for t in cells[n]:
            face_map[t] = tuple(t[:i] + t[i + 1 :] for i in range(n + 1))
    return SemiSimplicialSet(cells, face_map)


@lru_cache(maxsize=65536)
def _betti_of_facets(facets_key: tuple, k: Field) -> BettiProfile:
    K = SimplicialComplex.from_facets(facets_key)
    return reduced_cohomology(complex_to_semisimplicial(K), k)


def complex_betti(K: SimplicialComplex, k: Field = RATIONALS) -> BettiProfile:
    key = tuple(sorted(tuple(sorted(f)) for f in K.facets))
    return _betti_of_facets(key, k)


def order_complex(P: FinitePoset, interval: Optional[tuple[int, int]] = None) -> SimplicialComplex:
    """Chains of P, or of the open interval (x, y); empty intervals give the
    empty complex (not an error)."""
    if interval is None:
        elems = list(P.elements())
    else:
        x, y = interval
        if not P.lt(x, y):
            raise CategoryError(f"open interval requires {P.labels[x]} < {P.labels[y]}")
        elems = P.open_interval(x, y)
    # facets = maximal chains: repeatedly extend by a minimal remaining candidate,
    # which keeps chains saturated within the subposet
    facets = []

    def grow(chain: tuple, candidates: list[int]):
        minimals = [c for c in candidates if not any(P.lt(d, c) for d in candidates)]
        if not minimals:
            if chain:
                facets.append(chain)
            return
        for c in minimals:
            grow(chain + (c,), [d for d in candidates if P.lt(c, d)])

    grow((), list(elems))
    return SimplicialComplex.from_facets(facets)


@dataclass(frozen=True)
class CMWitness:
    face: tuple
    degree: int
    betti: int


def is_cohen_macaulay(K: SimplicialComplex, k: Field = RATIONALS) -> tuple[bool, Optional[CMWitness]]:
    """Reisner-style check: every link (the empty face included) has reduced
    (co)homology vanishing strictly below its dimension."""
    for F in sorted(K.faces(), key=lambda f: (len(f), tuple(sorted(f)))):
        L = link(K, F)
        if not L.facets:
            continue  # empty link, nothing below dimension -1
        prof = complex_betti(L, k)
        for j, d in sorted(prof.reduced_betti.items()):
            if j < prof.top_dim:
                return False, CMWitness(tuple(sorted(F)), j, d)
    return True, None


@dataclass(frozen=True)
class LocalCMWitness:
    interval: tuple[int, int]
    face: tuple
    degree: int
    betti: int


def is_locally_CM(P: FinitePoset, k: Field = RATIONALS) -> tuple[bool, Optional[LocalCMWitness]]:
    """Every open interval's order complex is Cohen-Macaulay over k."""
    for a in P.elements():
        for b in sorted(P.up[a]):
            if a == b:
                continue
            ok, w = is_cohen_macaulay(order_complex(P, (a, b)), k)
            if not ok:
                return False, LocalCMWitness((a, b), w.face, w.degree, w.betti)
    return True, None


def poset_to_category(P: FinitePoset) -> FiniteGradedCategory:
    """One morphism per related pair, graded by interval chain length."""
    if not is_graded_poset(P):
        raise NotGraded("poset is not graded; no length functor exists")
    pairs = P.intervals()
    mor_index = {pair: i for i, pair in enumerate(pairs)}
    morphisms = []
    for a, b in pairs:
        (length,) = P.chain_lengths(a, b)
        label = f"id_{P.labels[a]}" if a == b else f"[{P.labels[a]},{P.labels[b]}]"
        morphisms.append(Morphism(a, b, length, label))
    identities = [mor_index[(a, a)] for a in P.elements()]
    composition = {}
    for a, b in pairs:
        for c in sorted(P.up[b]):
            composition[(mor_index[(a, b)], mor_index[(b, c)])] = mor_index[(a, c)]
    return FiniteGradedCategory(P.labels, morphisms, identities, composition)


def verify_interval_equals_factorization(P: FinitePoset, x: int, y: int, k: Field = RATIONALS) -> bool:
    """Betti profiles of the open-interval order complex and of the
    factorization space of the corresponding category morphism agree."""
    if not P.lt(x, y):
        raise CategoryError("requires x < y")
    cat = getattr(P, "_category_cache", None)
    if cat is None:
        cat = poset_to_category(P)
        P._category_cache = cat
    p = next(i for i, m in enumerate(cat.morphisms) if m.source == x and m.target == y)
    left = complex_betti(order_complex(P, (x, y)), k)
    right = reduced_cohomology(factorization_space(cat, p), k)
    return left.reduced_betti == right.reduced_betti and left.top_dim == right.top_dim
