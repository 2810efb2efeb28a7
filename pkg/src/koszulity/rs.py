"""Reiner-Stamate equivalence relations, quotient categories, fibrations.

A relation is a partition of the closed intervals of a finite poset.  The
axioms are checked exhaustively: A1 by quadruple enumeration, A2 by
pointwise determination of the comparison map (its value at c is pinned
down by the pair of interval classes below and above c), A4 by direct
search for a composability witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .category import CategoryError, FiniteGradedCategory, Morphism, SchemaError
from .factorization import factorization_space
from .posets import FinitePoset, is_graded_poset


class NotAPartition(CategoryError):
    pass


class AxiomsNotVerified(CategoryError):
    pass


class LengthNotConstantOnClass(CategoryError):
    pass


class NotAFunctor(CategoryError):
    pass


class NotSurjectiveOnMorphisms(CategoryError):
    pass


class NotAlmostDiscrete(CategoryError):
    pass


class IllDefinedProduct(CategoryError):
    pass


Interval = tuple[int, int]


class IntervalRelation:
    """Partition of Int(P); intervals not listed in any class are singletons."""

    def __init__(self, P: FinitePoset, classes: Iterable[Iterable[Interval]]):
        self.P = P
        all_intervals = P.intervals()
        valid = set(all_intervals)
        assigned: dict[Interval, int] = {}
        groups: list[list[Interval]] = []
        for cls in classes:
            members = []
            for iv in cls:
                iv = (int(iv[0]), int(iv[1]))
                if iv not in valid:
                    raise NotAPartition(f"{iv} is not a closed interval of the poset")
                if iv in assigned:
                    raise NotAPartition(f"interval {iv} appears in two classes")
                assigned[iv] = len(groups)
                members.append(iv)
            if members:
                groups.append(members)
        for iv in all_intervals:
            if iv not in assigned:
                assigned[iv] = len(groups)
                groups.append([iv])
        # canonical order: classes by smallest member
        order = sorted(range(len(groups)), key=lambda g: min(groups[g]))
        relabel = {g: i for i, g in enumerate(order)}
        self.classes = tuple(tuple(sorted(groups[g])) for g in order)
        self.class_of = {iv: relabel[g] for iv, g in assigned.items()}

    def same(self, iv1: Interval, iv2: Interval) -> bool:
        return self.class_of[iv1] == self.class_of[iv2]

    @property
    def num_classes(self) -> int:
        return len(self.classes)


def identity_relation(P: FinitePoset) -> IntervalRelation:
    return IntervalRelation(P, [])


def relation_from_json(P: FinitePoset, doc: dict) -> IntervalRelation:
    if "classes" not in doc:
        raise SchemaError("relation document missing key 'classes'")
    classes = []
    for cls in doc["classes"]:
        members = []
        for iv in cls:
            if not (isinstance(iv, (list, tuple)) and len(iv) == 2):
                raise SchemaError("intervals must be [a, b] pairs")
            a = iv[0] if isinstance(iv[0], int) else P.index(iv[0])
            b = iv[1] if isinstance(iv[1], int) else P.index(iv[1])
            members.append((a, b))
        classes.append(members)
    return IntervalRelation(P, classes)


@dataclass
class AxiomReport:
    a1_failures: list[tuple] = field(default_factory=list)
    a2_failures: list[tuple] = field(default_factory=list)
    a4_failures: list[tuple] = field(default_factory=list)
    tau_non_monotone: list[tuple] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.a1_failures or self.a2_failures or self.a4_failures)


def verify_rs_axioms(P: FinitePoset, rel: IntervalRelation, witness_limit: int = 10) -> AxiomReport:
    """Exhaustive axiom check; each failure carries a witness tuple.

    The comparison maps tau are also tested for order preservation, which
    is reported separately and does not fail the axioms.
    """
    report = AxiomReport()
    classes = rel.classes
    # A1: [a,b] ~ [a',b'] and [b,c] ~ [b',c'] implies [a,c] ~ [a',c']
    for cls in classes:
        for a, b in cls:
            for a2, b2 in cls:
                for cls2 in classes:
                    for x, c in cls2:
                        if x != b:
                            continue
                        for x2, c2 in cls2:
                            if x2 != b2:
                                continue
                            if not rel.same((a, c), (a2, c2)):
                                if len(report.a1_failures) < witness_limit:
                                    report.a1_failures.append(((a, b), (a2, b2), (b, c), (b2, c2)))
    # A2: pointwise determination of tau
    for cls in classes:
        for iv1 in cls:
            for iv2 in cls:
                a, b = iv1
                a2, b2 = iv2
                tau: dict[int, int] = {}
                ok = True
                for c in P.closed_interval(a, b):
                    images = [
                        c2
                        for c2 in P.closed_interval(a2, b2)
                        if rel.same((a, c), (a2, c2)) and rel.same((c, b), (c2, b2))
                    ]
                    if len(images) != 1:
                        ok = False
                        if len(report.a2_failures) < witness_limit:
                            report.a2_failures.append((iv1, iv2, c, tuple(images)))
                    else:
                        tau[c] = images[0]
                if ok:
                    dom = sorted(tau)
                    for x in dom:
                        for y in dom:
                            if P.leq(x, y) and not P.leq(tau[x], tau[y]):
                                if len(report.tau_non_monotone) < witness_limit:
                                    report.tau_non_monotone.append((iv1, iv2, x, y))
    # A4: composability witnesses
    for a in P.elements():
        for b1 in sorted(P.up[a]):
            for b2 in P.elements():
                if not rel.same((b1, b1), (b2, b2)):
                    continue
                for c in sorted(P.up[b2]):
                    found = False
                    for a2 in P.elements():
                        for b in sorted(P.up[a2]):
                            if not rel.same((a, b1), (a2, b)):
                                continue
                            for c2 in sorted(P.up[b]):
                                if rel.same((b2, c), (b, c2)):
                                    found = True
                                    break
                            if found:
                                break
                        if found:
                            break
                    if not found and len(report.a4_failures) < witness_limit:
                        report.a4_failures.append(((a, b1), (b2, c)))
    return report


def rs_quotient(P: FinitePoset, rel: IntervalRelation) -> FiniteGradedCategory:
    """The quotient category: objects are classes of point intervals,
    morphisms are interval classes, composition via A4 witnesses.

    Axioms are re-verified, composition well-definedness is checked over
    all representative pairs, and the interval chain length must be
    constant on every class (graded poset required).
    """
    if not is_graded_poset(P):
        raise LengthNotConstantOnClass("quotient length needs a graded poset")
    report = verify_rs_axioms(P, rel)
    if not report.ok:
        raise AxiomsNotVerified(f"relation fails RS axioms: {report}")

    classes = rel.classes
    # length constant per class
    lengths = []
    for cls in classes:
        ls = {next(iter(P.chain_lengths(a, b))) for a, b in cls}
        if len(ls) > 1:
            raise LengthNotConstantOnClass(f"class {cls} mixes chain lengths {sorted(ls)}")
        lengths.append(ls.pop())
    # object classes and endpoint coherence
    point_class = {a: rel.class_of[(a, a)] for a in P.elements()}
    object_classes = sorted({point_class[a] for a in P.elements()})
    obj_index = {c: i for i, c in enumerate(object_classes)}
    for ci, cls in enumerate(classes):
        sources = {point_class[a] for a, b in cls}
        targets = {point_class[b] for a, b in cls}
        if len(sources) > 1 or len(targets) > 1:
            raise IllDefinedProduct(f"class {cls} has ambiguous endpoints")

    def rep(ci: int) -> Interval:
        return classes[ci][0]

    morphisms = []
    for ci, cls in enumerate(classes):
        a, b = rep(ci)
        src = obj_index[point_class[a]]
        tgt = obj_index[point_class[b]]
        if lengths[ci] == 0:
            label = f"[{P.labels[a]}]"
        else:
            label = f"[{P.labels[a]},{P.labels[b]}]"
        morphisms.append(Morphism(src, tgt, lengths[ci], label))
    identities = [0] * len(object_classes)
    for a in P.elements():
        identities[obj_index[point_class[a]]] = rel.class_of[(a, a)]

    composition: dict[tuple[int, int], int] = {}
    for c1, cls1 in enumerate(classes):
        for c2, cls2 in enumerate(classes):
            # compose f in cls1 first, then g in cls2: target class of f must
            # equal source class of g
            results = set()
            for a, b1 in cls1:
                for b2, c in cls2:
                    if rel.same((b1, b1), (b2, b2)):
                        # A4 search for a composability witness
                        for wa in P.elements():
                            for wb in sorted(P.up[wa]):
                                if not rel.same((a, b1), (wa, wb)):
                                    continue
                                for wc in sorted(P.up[wb]):
                                    if rel.same((b2, c), (wb, wc)):
                                        results.add(rel.class_of[(wa, wc)])
            if len(results) > 1:
                raise IllDefinedProduct(
                    f"composition of classes {cls1} and {cls2} is ambiguous: {sorted(results)}"
                )
            if results:
                composition[(c1, c2)] = results.pop()

    labels = [morphisms[identities[i]].label for i in range(len(object_classes))]
    cat = FiniteGradedCategory(labels, morphisms, identities, composition)
    from .category import validate

    rep = validate(cat)
    if not rep.ok:
        raise IllDefinedProduct(f"quotient category is not a valid graded category:\n{rep}")
    return cat


@dataclass(frozen=True)
class FunctorData:
    """A functor between finite graded categories, as index maps."""

    domain: FiniteGradedCategory
    codomain: FiniteGradedCategory
    object_map: tuple[int, ...]
    morphism_map: tuple[int, ...]

    def check(self) -> None:
        dom, cod = self.domain, self.codomain
        if len(self.object_map) != dom.num_objects or len(self.morphism_map) != dom.num_morphisms:
            raise NotAFunctor("map sizes do not match the domain")
        for v, w in enumerate(self.object_map):
            if not 0 <= w < cod.num_objects:
                raise NotAFunctor(f"object {v} maps out of range")
            if self.morphism_map[dom.identities[v]] != cod.identities[w]:
                raise NotAFunctor(f"identity of object {v} is not preserved")
        for f, g in enumerate(self.morphism_map):
            mf, mg = dom.morphisms[f], cod.morphisms[g]
            if self.object_map[mf.source] != mg.source or self.object_map[mf.target] != mg.target:
                raise NotAFunctor(f"morphism {mf.label!r} does not preserve endpoints")
            if mf.length != mg.length:
                raise NotAFunctor(f"morphism {mf.label!r} does not preserve length")
        for (f, g), h in dom.composition.items():
            image = cod.compose(self.morphism_map[g], self.morphism_map[f])
            if image != self.morphism_map[h]:
                raise NotAFunctor(f"composition not preserved on pair ({f}, {g})")

    def apply(self, f: int) -> int:
        return self.morphism_map[f]


def is_discrete_fibration(F: FunctorData) -> tuple[bool, Optional[tuple]]:
    """For each object E and each codomain morphism into F(E), exactly one lift
    ending at E.  Witness: (E, f, lifts)."""
    F.check()
    dom, cod = F.domain, F.codomain
    for E in range(dom.num_objects):
        for f in range(cod.num_morphisms):
            if cod.target(f) != F.object_map[E]:
                continue
            lifts = [g for g in range(dom.num_morphisms) if dom.target(g) == E and F.morphism_map[g] == f]
            if len(lifts) != 1:
                return False, (E, f, tuple(lifts))
    return True, None


def is_almost_discrete_fibration(F: FunctorData) -> tuple[bool, Optional[tuple]]:
    """Every nontrivial factorization of q downstairs lifts uniquely through
    each p in the fiber; checked cell by cell on factorization spaces.
    Witness: (p, q-cell, lifts)."""
    F.check()
    dom, cod = F.domain, F.codomain
    for p in dom.non_identity_morphisms():
        q = F.apply(p)
        down = factorization_space(cod, q)
        up = factorization_space(dom, p)
        for n in range(down.top_dim + 1):
            up_cells = up.cells[n] if n <= up.top_dim else ()
            for cell in down.cells[n]:
                lifts = [c for c in up_cells if tuple(F.apply(f) for f in c) == cell]
                if len(lifts) != 1:
                    return False, (p, cell, tuple(lifts))
        # no extra cells upstairs beyond what downstairs has
        for n in range(down.top_dim + 1, up.top_dim + 1):
            cell = up.cells[n][0]
            return False, (p, None, (cell,))
    return True, None


def relation_from_fibration(F: FunctorData) -> IntervalRelation:
    """The relation [a,b] ~ [a',b'] iff F maps both intervals to the same
    morphism; F must be an almost discrete fibration out of a poset
    category hitting every codomain morphism."""
    dom = F.domain
    # domain must be a poset category: at most one morphism per ordered pair
    seen: dict[tuple[int, int], int] = {}
    for i, m in enumerate(dom.morphisms):
        if (m.source, m.target) in seen:
            raise NotAFunctor("domain is not a poset category")
        seen[(m.source, m.target)] = i
    if set(F.morphism_map) != set(range(F.codomain.num_morphisms)):
        raise NotSurjectiveOnMorphisms("some codomain morphism has no lift")
    ok, witness = is_almost_discrete_fibration(F)
    if not ok:
        raise NotAlmostDiscrete(f"not an almost discrete fibration, witness {witness}")
    P = FinitePoset(dom.object_labels, [(m.source, m.target) for m in dom.morphisms])
    by_image: dict[int, list[Interval]] = {}
    for (a, b), f in seen.items():
        by_image.setdefault(F.apply(f), []).append((a, b))
    rel = IntervalRelation(P, list(by_image.values()))
    report = verify_rs_axioms(P, rel)
    if not report.ok:
        raise CategoryError("induced relation unexpectedly fails the RS axioms")
    return rel


@dataclass(frozen=True)
class ReducedIncidenceAlgebra:
    """Structure constants of k[P]_red: basis indexed by interval classes,
    xi_c . xi_d = xi_e via a composability witness, zero when none exists."""

    class_reps: tuple[Interval, ...]
    table: dict[tuple[int, int], Optional[int]]
    op_isomorphic_to_quotient: Optional[bool]


def reduced_incidence_algebra(P: FinitePoset, rel: IntervalRelation) -> ReducedIncidenceAlgebra:
    """Multiplication table of the reduced incidence algebra, plus a check
    that it is the opposite of the quotient category algebra when the
    relation satisfies the full axiom set.

    The caller is expected to supply a relation satisfying at least A1;
    an ambiguous product (two witnesses landing in different classes)
    raises IllDefinedProduct, which signals an A1 failure.
    """
    classes = rel.classes
    table: dict[tuple[int, int], Optional[int]] = {}
    for c1, cls1 in enumerate(classes):
        for c2, cls2 in enumerate(classes):
            results = set()
            for a2 in P.elements():
                for b in sorted(P.up[a2]):
                    if rel.class_of[(a2, b)] != c1:
                        continue
                    for c in sorted(P.up[b]):
                        if rel.class_of[(b, c)] == c2:
                            results.add(rel.class_of[(a2, c)])
            if len(results) > 1:
                raise IllDefinedProduct(
                    f"xi product of classes {c1} and {c2} is ambiguous: {sorted(results)}"
                )
            table[(c1, c2)] = results.pop() if results else None

    iso: Optional[bool] = None
    if is_graded_poset(P):
        try:
            Q = rs_quotient(P, rel)
        except CategoryError:
            Q = None
        if Q is not None:
            # phi: k(P/~) -> (k[P]_red)^op sends the class of [a,b] to
            # xi_{[a,b]}; multiplicativity means class(g o f) equals
            # xi_{class f} . xi_{class g}
            iso = True
            for c1 in range(len(classes)):
                for c2 in range(len(classes)):
                    composite = Q.compose(c2, c1)  # c2 o c1, c1 applied first
                    if composite != table[(c1, c2)]:
                        iso = False
    return ReducedIncidenceAlgebra(tuple(cls[0] for cls in classes), table, iso)


def path_poset(cat: FiniteGradedCategory, v: int) -> FinitePoset:
    """Morphisms out of v (the identity included), ordered by left
    divisibility: p <= q iff q = r o p for some r."""
    if not 0 <= v < cat.num_objects:
        raise CategoryError(f"object index {v} out of range")
    elems = [i for i, m in enumerate(cat.morphisms) if m.source == v]
    elems.sort(key=lambda i: (cat.length(i), i))
    pos = {p: i for i, p in enumerate(elems)}
    pairs = []
    for p in elems:
        for r in range(cat.num_morphisms):
            q = cat.compose(r, p)
            if q is not None:
                pairs.append((pos[p], pos[q]))
    labels = [cat.label(p) for p in elems]
    return FinitePoset(labels, pairs)
