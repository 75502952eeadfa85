import random

import pytest

from grouplab import fingroup as fg
from grouplab import table as tb
from grouplab import words as W
from grouplab.errors import EvaluationBlocked, NotSquareForm
from grouplab.table import (
    CellClopen,
    FinitePermutation,
    PartialTable,
    Tristate,
    WordClopen,
    apply_homeomorphism,
    homogeneity_witness,
    satisfies_cell_clopen,
    satisfies_word_clopen,
    supp,
    transport_clopen,
)


def random_permutation(rng, lo=2, hi=9, size=4):
    chosen = rng.sample(range(lo, hi + 1), size)
    image = chosen[:]
    rng.shuffle(image)
    return FinitePermutation(dict(zip(chosen, image)))


def random_subtable(rng, g, max_cells=6):
    cells = {}
    for _ in range(rng.randrange(max_cells + 1)):
        a = rng.randrange(1, g.order + 1)
        b = rng.randrange(1, g.order + 1)
        cells[(a, b)] = g.mul(a, b)
    return PartialTable(cells)


def random_clopen(rng, max_label=6, max_constraints=4):
    constraints = {}
    for _ in range(rng.randrange(max_constraints + 1)):
        i = rng.randrange(1, max_label + 1)
        j = rng.randrange(1, max_label + 1)
        constraints[(i, j)] = rng.randrange(1, max_label + 1)
    return CellClopen(constraints)


def block_clopen(g, k):
    return CellClopen({(i, j): g.mul(i, j) for i in range(1, k + 1) for j in range(1, k + 1)})


# ---------------------------------------------------------------- PartialTable


def test_table_identity_row_validation():
    PartialTable([(1, 5, 5), (5, 1, 5), (2, 3, 4)])
    with pytest.raises(ValueError, match="identity row"):
        PartialTable([(1, 5, 3)])
    with pytest.raises(ValueError, match="identity column"):
        PartialTable([(5, 1, 3)])


def test_table_conflict_rejected():
    with pytest.raises(ValueError, match="conflicting"):
        PartialTable([(2, 2, 1), (2, 2, 3)])


def test_table_labels_and_lookup():
    t = PartialTable([(2, 3, 7)])
    assert t.get(2, 3) == 7
    assert t.get(3, 2) is None
    assert t.labels() == [2, 3, 7]


def test_table_with_cells_write_once():
    t = PartialTable([(2, 2, 1)])
    t2 = t.with_cells([(2, 3, 4)])
    assert len(t2) == 2 and len(t) == 1
    t.with_cells([(2, 2, 1)])  # same value is harmless
    with pytest.raises(ValueError):
        t.with_cells([(2, 2, 4)])


def test_table_known_inverse_both_sides():
    t = PartialTable([(2, 3, 1)])
    assert t.known_inverse(2) == 3
    assert t.known_inverse(3) == 2
    assert t.known_inverse(1) == 1
    assert t.known_inverse(4) is None
    # smallest certified inverse wins
    t2 = PartialTable([(2, 5, 1), (2, 4, 1)])
    assert t2.known_inverse(2) == 4


def test_table_json_round_trip():
    t = PartialTable([(3, 2, 5), (2, 2, 1)])
    obj = t.to_json()
    assert obj == {"cells": [[2, 2, 1], [3, 2, 5]]}
    assert PartialTable.from_json(obj) == t


# ---------------------------------------------------------------- CellClopen / supp


def test_cell_clopen_membership_examples():
    b = CellClopen([(2, 2, 1)])
    assert satisfies_cell_clopen(PartialTable([(2, 2, 1)]), b) is Tristate.YES
    assert satisfies_cell_clopen(PartialTable([(2, 2, 3)]), b) is Tristate.NO
    assert satisfies_cell_clopen(PartialTable(), b) is Tristate.UNDETERMINED


def test_cell_clopen_no_beats_undetermined():
    b = CellClopen([(2, 2, 1), (3, 3, 1)])
    t = PartialTable([(2, 2, 4)])
    assert satisfies_cell_clopen(t, b) is Tristate.NO


def test_supp_examples():
    b1 = CellClopen([(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 1)])
    assert supp(b1) == frozenset({1, 2})
    b2 = CellClopen([(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 5)])
    assert supp(b2) == frozenset({1, 2, 5})
    with pytest.raises(NotSquareForm):
        supp(CellClopen([(3, 3, 1)]))


def test_supp_contains_one():
    for g in fg.catalog(6):
        for k in range(1, min(4, g.order) + 1):
            assert 1 in supp(block_clopen(g, k))


def test_square_form_empty():
    assert CellClopen().square_form() == 0


# ---------------------------------------------------------------- WordClopen


def test_word_clopen_yes_examples():
    c2 = fg.cyclic_group(2)
    u = WordClopen(params=(2,), equations=[(W.var(0) * W.var(0), 1)])
    assert satisfies_word_clopen(c2, u) is Tristate.YES
    v = WordClopen(params=(2,), inequations=[(W.var(0), 1)])
    assert satisfies_word_clopen(c2, v) is Tristate.YES


def test_word_clopen_no():
    c4 = fg.cyclic_group(4)
    generator = next(a for a in c4.elements() if c4.element_order(a) == 4)
    u = WordClopen(params=(generator,), equations=[(W.var(0) * W.var(0), 1)])
    assert satisfies_word_clopen(c4, u) is Tristate.NO


def test_word_clopen_blocked_via_inverse_rewriting():
    t = PartialTable([(2, 3, 1), (4, 4, 4)])
    u = WordClopen(params=(4, 3), equations=[(W.var(0) * W.var(1, -1), 4)])
    with pytest.raises(EvaluationBlocked):
        satisfies_word_clopen(t, u)


def test_word_clopen_undetermined_when_labels_missing():
    t = PartialTable([(2, 2, 1)])
    u = WordClopen(params=(5,), equations=[(W.var(0), 5)])
    assert satisfies_word_clopen(t, u) is Tristate.UNDETERMINED
    c2 = fg.cyclic_group(2)
    w = WordClopen(params=(7,), equations=[(W.var(0), 7)])
    assert satisfies_word_clopen(c2, w) is Tristate.UNDETERMINED


def test_word_clopen_validation():
    with pytest.raises(ValueError):
        WordClopen(params=(2,), equations=[(W.var(1), 1)])


def test_word_clopen_json_round_trip():
    u = WordClopen(
        params=(2, 3),
        equations=[(W.var(0) * W.var(1, -1), 2)],
        inequations=[(W.var(1), 1)],
    )
    v = WordClopen.from_json(u.to_json())
    assert v.params == u.params
    assert v.equations == u.equations
    assert v.inequations == u.inequations


# ---------------------------------------------------------------- FinitePermutation


def test_permutation_invariants():
    with pytest.raises(ValueError, match="fix label 1"):
        FinitePermutation({1: 2, 2: 1})
    with pytest.raises(ValueError, match="support"):
        FinitePermutation({2: 3})
    with pytest.raises(ValueError, match="injective"):
        FinitePermutation({2: 4, 3: 4, 4: 2})
    p = FinitePermutation({2: 3, 3: 2, 5: 5})
    assert p.support == (2, 3)  # fixed points pruned


def test_permutation_apply_compose_inverse():
    p = FinitePermutation.swap(2, 3)
    q = FinitePermutation.swap(3, 4)
    assert p.apply(2) == 3 and p.apply(7) == 7
    pq = p.compose(q)
    for x in range(1, 8):
        assert pq.apply(x) == p.apply(q.apply(x))
    assert p.compose(p.inverse()) == FinitePermutation.identity()


def test_permutation_json_round_trip():
    p = FinitePermutation({2: 4, 4: 5, 5: 2})
    assert FinitePermutation.from_json(p.to_json()) == p


# ---------------------------------------------------------------- homeomorphism action


def test_apply_homeomorphism_identity():
    t = PartialTable([(2, 2, 1), (3, 4, 2)])
    assert apply_homeomorphism(FinitePermutation.identity(), t) == t


def test_apply_homeomorphism_swap():
    t = PartialTable([(2, 2, 1)])
    out = apply_homeomorphism(FinitePermutation.swap(2, 3), t)
    assert out == PartialTable([(3, 3, 1)])


def test_apply_homeomorphism_composition_order():
    t = PartialTable([(2, 2, 1)])
    p = FinitePermutation.swap(2, 3)
    q = FinitePermutation.swap(3, 4)
    composed = q.compose(p)
    assert apply_homeomorphism(composed, t) == apply_homeomorphism(
        q, apply_homeomorphism(p, t)
    )


def test_functoriality_randomized():
    rng = random.Random(17)
    cat = fg.catalog(6)
    for _ in range(100):
        p = random_permutation(rng)
        q = random_permutation(rng)
        t = random_subtable(rng, rng.choice(cat))
        assert apply_homeomorphism(p.compose(q), t) == apply_homeomorphism(
            p, apply_homeomorphism(q, t)
        )


def test_apply_homeomorphism_preserves_invariants():
    rng = random.Random(19)
    cat = fg.catalog(6)
    for _ in range(50):
        t = random_subtable(rng, rng.choice(cat))
        out = apply_homeomorphism(random_permutation(rng), t)
        assert isinstance(out, PartialTable)
        assert len(out) == len(t)


def test_transport_clopen_examples():
    b = CellClopen([(2, 2, 1)])
    assert transport_clopen(FinitePermutation.identity(), b) == b
    assert transport_clopen(FinitePermutation.swap(2, 5), b) == CellClopen([(5, 5, 1)])


def test_membership_equivariance_randomized():
    rng = random.Random(29)
    cat = fg.catalog(6)
    for _ in range(100):
        phi = random_permutation(rng)
        t = random_subtable(rng, rng.choice(cat))
        b = random_clopen(rng)
        lhs = satisfies_cell_clopen(apply_homeomorphism(phi, t), transport_clopen(phi, b))
        rhs = satisfies_cell_clopen(t, b)
        assert lhs is rhs


# ---------------------------------------------------------------- homogeneity


def test_homogeneity_witness_c2_c3():
    c2, c3 = fg.cyclic_group(2), fg.cyclic_group(3)
    u = block_clopen(c2, 2)
    v = block_clopen(c3, 3)
    phi, t = homogeneity_witness(u, c2, v, c3)
    assert phi.apply(1) == 1
    assert satisfies_cell_clopen(t, transport_clopen(phi, u)) is Tristate.YES
    assert satisfies_cell_clopen(t, v) is Tristate.YES


def test_homogeneity_witness_randomized():
    rng = random.Random(37)
    cat = [g for g in fg.catalog(8) if g.order <= 8]
    for _ in range(20):
        g_u, g_v = rng.choice(cat), rng.choice(cat)
        u = block_clopen(g_u, rng.randrange(1, min(4, g_u.order) + 1))
        v = block_clopen(g_v, rng.randrange(1, min(4, g_v.order) + 1))
        phi, t = homogeneity_witness(u, g_u, v, g_v)
        assert satisfies_cell_clopen(t, transport_clopen(phi, u)) is Tristate.YES
        assert satisfies_cell_clopen(t, v) is Tristate.YES


def test_homogeneity_witness_rejects_non_witness():
    c2, c3 = fg.cyclic_group(2), fg.cyclic_group(3)
    not_c2 = CellClopen([(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 2)])
    with pytest.raises(ValueError):
        homogeneity_witness(not_c2, c2, block_clopen(c3, 2), c3)
