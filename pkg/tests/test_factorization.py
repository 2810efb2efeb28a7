"""Factorization spaces, the reduced nerve, and the cell bijection."""

import random

import pytest

from koszulity import fixtures as fx
from koszulity.category import opposite
from koszulity.factorization import (
    IdentityMorphism,
    factorization_space,
    reduced_nerve,
    verify_cells_bijection,
)
from koszulity.homology import check_semisimplicial, reduced_cohomology
from helpers import random_category


def test_length_one_has_empty_space():
    cat = fx.a2_chain()
    f = cat.morphism_index("f")
    X = factorization_space(cat, f)
    assert X.top_dim == -1
    assert reduced_cohomology(X).reduced_betti == {-1: 1}


def test_identity_rejected():
    cat = fx.a2_chain()
    with pytest.raises(IdentityMorphism):
        factorization_space(cat, cat.identities[0])


def test_a2_composite_single_point():
    cat = fx.a2_chain()
    gf = cat.morphism_index("g∘f")
    X = factorization_space(cat, gf)
    assert X.num_cells(0) == 1
    assert X.top_dim == 0
    assert reduced_cohomology(X).reduced_betti == {}


def test_beilinson_p2_diagonal_vs_offdiagonal():
    cat = fx.beilinson_p2()
    # diagonal composites X_i o x_i have one factorization; off-diagonal two
    for i, m in enumerate(cat.morphisms):
        if m.length != 2:
            continue
        X = factorization_space(cat, i)
        prof = reduced_cohomology(X)
        labels = {cat.label(f) for cell in X.cells[0] for f in cell}
        if len(X.cells[0]) == 1:
            assert prof.reduced_betti == {}
        else:
            assert X.num_cells(0) == 2
            assert prof.reduced_betti == {0: 1}
    # exactly three off-diagonal classes contribute H^0 = k each
    total = sum(
        reduced_cohomology(factorization_space(cat, i)).betti(0)
        for i, m in enumerate(cat.morphisms)
        if m.length == 2
    )
    assert total == 3


def test_hexagon_long_morphism_two_segments():
    cat = fx.hexagon_category()
    a, f = cat.object_index("a"), cat.object_index("f")
    p = next(i for i, m in enumerate(cat.morphisms) if m.source == a and m.target == f)
    X = factorization_space(cat, p)
    assert X.num_cells(0) == 4
    assert X.num_cells(1) == 2
    assert reduced_cohomology(X).reduced_betti == {0: 1}


def test_factorization_cells_satisfy_semisimplicial_identity():
    rng = random.Random(20260102)
    cats = [fx.beilinson_p2(), fx.hexagon_category(), fx.truncated_kx(5)]
    cats += [random_category(rng) for _ in range(10)]
    for cat in cats:
        for p in cat.non_identity_morphisms():
            X = factorization_space(cat, p)
            assert check_semisimplicial(X).ok
            for n in range(X.top_dim + 1):
                for cell in X.cells[n]:
                    assert len(cell) == n + 2


def test_reduced_nerve_a2():
    cat = fx.a2_chain()
    N = reduced_nerve(cat)
    assert N.num_cells(0) == 3  # objects
    assert N.num_cells(1) == 3  # f, g, g o f
    assert N.num_cells(2) == 1  # (g, f)
    assert check_semisimplicial(N).ok


def test_reduced_nerve_identity_only():
    from koszulity.category import QuiverPresentation, from_quiver

    cat = from_quiver(QuiverPresentation.make(["a", "b"], [], max_length=1))
    N = reduced_nerve(cat)
    assert N.top_dim == 0
    assert N.num_cells(0) == 2


def test_cells_bijection():
    assert verify_cells_bijection(fx.a2_chain())
    assert verify_cells_bijection(fx.beilinson_p2())
    assert verify_cells_bijection(fx.hexagon_category())
    assert verify_cells_bijection(fx.truncated_kx(6))


def test_cells_bijection_random():
    rng = random.Random(20260103)
    for _ in range(15):
        assert verify_cells_bijection(random_category(rng))


def test_reduced_nerve_semisimplicial_identity_random():
    rng = random.Random(20260109)
    cats = [fx.beilinson_p2(), fx.square_category(), fx.truncated_kx(4)]
    cats += [random_category(rng) for _ in range(10)]
    for cat in cats:
        assert check_semisimplicial(reduced_nerve(cat)).ok


def test_opposite_symmetry_of_factorization_spaces():
    rng = random.Random(20260104)
    cats = [fx.beilinson_p2(), fx.hexagon_category()] + [random_category(rng) for _ in range(8)]
    for cat in cats:
        op = opposite(cat)
        for p in cat.non_identity_morphisms():
            X = factorization_space(cat, p)
            Y = factorization_space(op, p)
            assert [X.num_cells(n) for n in range(X.top_dim + 1)] == [
                Y.num_cells(n) for n in range(Y.top_dim + 1)
            ]
            assert reduced_cohomology(X).reduced_betti == reduced_cohomology(Y).reduced_betti


def test_top_dim_matches_length_when_generated_in_degree_one():
    for cat in (fx.beilinson_p2(), fx.square_category(), fx.truncated_kx(6)):
        for p in cat.non_identity_morphisms():
            X = factorization_space(cat, p)
            assert X.top_dim == cat.length(p) - 2
