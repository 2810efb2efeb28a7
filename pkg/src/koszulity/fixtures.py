"""Bundled example inputs used by the test suite and `emit-fixtures`.

Everything here is a small finite object: quiver categories for projective
spaces, the hexagon and diamond posets, interval relations, functors
between poset categories, and toric degree data for Hirzebruch surfaces,
products of projective lines and a weighted projective plane.
"""

from __future__ import annotations

from .category import FiniteGradedCategory, QuiverPresentation, from_quiver, product
from .posets import FinitePoset
from .rs import FunctorData, IntervalRelation
from .toric import ClassGroup, ToricCollectionSpec


def a2_chain() -> FiniteGradedCategory:
    """a -> b -> c with the composite; the smallest nontrivial valid category."""
    return from_quiver(
        QuiverPresentation.make(["a", "b", "c"], [("f", "a", "b"), ("g", "b", "c")], max_length=2)
    )


def beilinson_p1_quiver() -> QuiverPresentation:
    return QuiverPresentation.make(["v0", "v1"], [("x", "v0", "v1"), ("y", "v0", "v1")], max_length=1)


def beilinson_p1() -> FiniteGradedCategory:
    return from_quiver(beilinson_p1_quiver())


def beilinson_p2_quiver() -> QuiverPresentation:
    arrows = [(f"x{i}", "v1", "v2") for i in range(3)] + [(f"X{i}", "v2", "v3") for i in range(3)]
    relations = []
    for i in range(3):
        for j in range(i + 1, 3):
            relations.append(((f"x{j}", f"X{i}"), (f"x{i}", f"X{j}")))
    return QuiverPresentation.make(["v1", "v2", "v3"], arrows, relations, max_length=2)


def beilinson_p2() -> FiniteGradedCategory:
    return from_quiver(beilinson_p2_quiver())


def square_category() -> FiniteGradedCategory:
    """The 4-object category of a product of two projective-line quivers."""
    return product(beilinson_p1(), beilinson_p1())


def truncated_kx_quiver(bound: int) -> QuiverPresentation:
    return QuiverPresentation.make(["v"], [("x", "v", "v")], max_length=bound)


def truncated_kx(bound: int) -> FiniteGradedCategory:
    """One object, morphisms x^0..x^bound, composites past the bound cut off."""
    return from_quiver(truncated_kx_quiver(bound))


def hexagon_quiver() -> QuiverPresentation:
    arrows = [
        ("x", "a", "b"),
        ("y", "b", "d"),
        ("z", "d", "f"),
        ("u", "a", "c"),
        ("v", "c", "e"),
        ("w", "e", "f"),
    ]
    return QuiverPresentation.make(
        ["a", "b", "c", "d", "e", "f"], arrows, [(("x", "y", "z"), ("u", "v", "w"))], max_length=3
    )


def hexagon_category() -> FiniteGradedCategory:
    return from_quiver(hexagon_quiver())


def hexagon_poset() -> FinitePoset:
    labels = ["a", "b", "c", "d", "e", "f"]
    idx = {l: i for i, l in enumerate(labels)}
    covers = [("a", "b"), ("a", "c"), ("b", "d"), ("c", "e"), ("d", "f"), ("e", "f")]
    return FinitePoset(labels, [(idx[x], idx[y]) for x, y in covers])


def hexagon_relation(P: FinitePoset | None = None) -> IntervalRelation:
    """[a,b] ~ [a,c] together with the forced point identification b ~ c."""
    P = P or hexagon_poset()
    a, b, c = P.index("a"), P.index("b"), P.index("c")
    return IntervalRelation(P, [[(a, b), (a, c)], [(b, b), (c, c)]])


def diamond_poset() -> FinitePoset:
    return FinitePoset(["a", "b", "c", "d"], [(0, 1), (0, 2), (1, 3), (2, 3)])


def v_poset() -> FinitePoset:
    return FinitePoset(["a", "b", "c"], [(0, 1), (0, 2)])


def v_relation(P: FinitePoset | None = None) -> IntervalRelation:
    P = P or v_poset()
    b, c = P.index("b"), P.index("c")
    return IntervalRelation(P, [[(b, b), (c, c)]])


def chain_poset(n: int) -> FinitePoset:
    return FinitePoset([str(i) for i in range(n + 1)], [(i, i + 1) for i in range(n)])


def three_chain_category() -> FiniteGradedCategory:
    """The poset a' < b' < c' as a category."""
    from .posets import poset_to_category

    return poset_to_category(chain_poset(2))


def doubled_arrow_category() -> FiniteGradedCategory:
    """a' => b' -> d' with the two composites identified (the non-HPA quotient)."""
    pres = QuiverPresentation.make(
        ["a", "b", "d"],
        [("u1", "a", "b"), ("u2", "a", "b"), ("w", "b", "d")],
        [(("u1", "w"), ("u2", "w"))],
        max_length=2,
    )
    return from_quiver(pres)


def _functor_by_labels(
    dom: FiniteGradedCategory,
    cod: FiniteGradedCategory,
    objects: dict[str, str],
    morphisms: dict[str, str],
) -> FunctorData:
    omap = [cod.object_index(objects[lab]) for lab in dom.object_labels]
    mmap = []
    for f in range(dom.num_morphisms):
        lab = dom.label(f)
        if lab in morphisms:
            mmap.append(cod.morphism_index(morphisms[lab]))
        elif dom.is_identity(f):
            mmap.append(cod.identities[omap[dom.source(f)]])
        else:
            raise KeyError(f"no image given for morphism {lab!r}")
    return FunctorData(dom, cod, tuple(omap), tuple(mmap))


def diamond_to_3chain() -> FunctorData:
    """The projection collapsing the diamond onto a 3-chain; the two middle
    lifts make it fail almost-discreteness."""
    from .posets import poset_to_category

    dom = poset_to_category(diamond_poset())
    cod = three_chain_category()
    objects = {"a": "0", "b": "1", "c": "1", "d": "2"}
    morphisms = {
        "[a,b]": "[0,1]",
        "[a,c]": "[0,1]",
        "[b,d]": "[1,2]",
        "[c,d]": "[1,2]",
        "[a,d]": "[0,2]",
    }
    return _functor_by_labels(dom, cod, objects, morphisms)


def diamond_to_doubled() -> FunctorData:
    """Almost discrete but not discrete: the diamond onto the doubled arrow."""
    from .posets import poset_to_category

    dom = poset_to_category(diamond_poset())
    cod = doubled_arrow_category()
    objects = {"a": "a", "b": "b", "c": "b", "d": "d"}
    morphisms = {
        "[a,b]": "u1",
        "[a,c]": "u2",
        "[b,d]": "w",
        "[c,d]": "w",
        "[a,d]": "w∘u1",
    }
    return _functor_by_labels(dom, cod, objects, morphisms)


def two_chains_to_chain() -> FunctorData:
    """A genuine discrete fibration from a poset: two disjoint 2-chains onto one."""
    from .posets import poset_to_category

    dom = poset_to_category(
        FinitePoset(["a1", "b1", "a2", "b2"], [(0, 1), (2, 3)])
    )
    cod = poset_to_category(chain_poset(1))
    objects = {"a1": "0", "b1": "1", "a2": "0", "b2": "1"}
    morphisms = {"[a1,b1]": "[0,1]", "[a2,b2]": "[0,1]"}
    return _functor_by_labels(dom, cod, objects, morphisms)


# ---------- toric degree data ----------

def p2_collection() -> ToricCollectionSpec:
    group = ClassGroup(1)
    return ToricCollectionSpec(
        group,
        ("x0", "x1", "x2"),
        ((1,), (1,), (1,)),
        ((0,), (1,), (2,)),
        max_total_degree=8,
    )


def p1xp1_collection() -> ToricCollectionSpec:
    group = ClassGroup(2)
    return ToricCollectionSpec(
        group,
        ("x", "y", "z", "w"),
        ((1, 0), (1, 0), (0, 1), (0, 1)),
        ((0, 0), (1, 0), (0, 1), (1, 1)),
        max_total_degree=8,
    )


def hirzebruch_collection(n: int) -> ToricCollectionSpec:
    group = ClassGroup(2)
    return ToricCollectionSpec(
        group,
        ("x1", "x2", "x3", "x4"),
        ((1, 0), (-n, 1), (1, 0), (0, 1)),
        ((0, 0), (1, 0), (0, 1), (1, 1)),
        max_total_degree=max(10, n + 4),
    )


def weighted_p112_collection() -> ToricCollectionSpec:
    group = ClassGroup(1)
    return ToricCollectionSpec(
        group,
        ("x0", "x1", "x2"),
        ((1,), (1,), (2,)),
        ((0,), (1,), (2,), (3,)),
        max_total_degree=8,
    )
