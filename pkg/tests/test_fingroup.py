import itertools
import random

import pytest

from grouplab import fingroup as fg
from grouplab.errors import (
    IdentityElement,
    LengthMismatch,
    LimitExceeded,
    NotInClosure,
    TrivialGroup,
)

# ---------------------------------------------------------------- oracles

# iso class counts for groups of order 1..6 (classical)
CLASS_COUNTS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2}


def oracle_element_order(g, a):
    cur, k = a, 1
    while cur != 1:
        cur = g.mul(cur, a)
        k += 1
    return k


def oracle_embed_exists(h, g):
    """Exhaustive over all generator-image tuples, no order filtering."""
    gens, order_list, parent = h.generating_data()
    for images in itertools.product(g.elements(), repeat=len(gens)):
        phi = {1: 1}
        for e in order_list[1:]:
            prev, gi = parent[e]
            phi[e] = g.mul(phi[prev], images[gi])
        if len(set(phi.values())) != h.order:
            continue
        if all(
            phi[h.mul(a, b)] == g.mul(phi[a], phi[b])
            for a in h.elements()
            for b in h.elements()
        ):
            return True
    return False


def oracle_is_normal_subgroup(g, members):
    s = set(members)
    if 1 not in s:
        return False
    for x in s:
        for y in s:
            if g.mul(x, y) not in s:
                return False
    for x in s:
        for c in g.elements():
            if g.mul(g.mul(g.inv(c), x), c) not in s:
                return False
    return True


def relabel(g, sigma):
    """Push the Cayley table through a permutation fixing 1 (dict label->label)."""
    n = g.order
    rows = [[0] * n for _ in range(n)]
    for a in g.elements():
        for b in g.elements():
            rows[sigma[a] - 1][sigma[b] - 1] = sigma[g.mul(a, b)]
    return fg.FinGroup(rows, name=f"{g.name}~")


# ---------------------------------------------------------------- validation


def test_rejects_non_square():
    with pytest.raises(ValueError):
        fg.FinGroup([[1, 2]])


def test_rejects_bad_labels():
    with pytest.raises(ValueError, match="cancellation"):
        fg.FinGroup([[1, 2], [2, 3]])


def test_rejects_broken_identity():
    with pytest.raises(ValueError, match="identity"):
        fg.FinGroup([[2, 1], [1, 2]])


def test_rejects_non_associative_latin_square():
    # a Latin square with identity that is not a group (order 5 loop)
    rows = [
        [1, 2, 3, 4, 5],
        [2, 1, 4, 5, 3],
        [3, 5, 1, 2, 4],
        [4, 3, 5, 1, 2],
        [5, 4, 2, 3, 1],
    ]
    with pytest.raises(ValueError, match="associativity"):
        fg.FinGroup(rows)


def test_fuzz_single_cell_mutations_all_rejected():
    rng = random.Random(5)
    for g in (fg.cyclic_group(4), fg.symmetric_group(3), fg.dihedral_group(4)):
        rows = g.cayley_rows()
        n = g.order
        for _ in range(60):
            i, j = rng.randrange(n), rng.randrange(n)
            wrong = rng.randrange(1, n + 1)
            if wrong == rows[i][j]:
                wrong = wrong % n + 1
            mutated = [row[:] for row in rows]
            mutated[i][j] = wrong
            with pytest.raises(ValueError, match="axiom"):
                fg.FinGroup(mutated)


# ---------------------------------------------------------------- basics


def test_cyclic_structure():
    g = fg.cyclic_group(6)
    assert g.order == 6
    assert g.is_abelian
    for a in g.elements():
        assert g.mul(1, a) == a and g.mul(a, 1) == a
        assert g.mul(a, g.inv(a)) == 1
        assert g.element_order(a) == oracle_element_order(g, a)


def test_dihedral_structure():
    # classical element-order multisets
    d3 = fg.dihedral_group(3)
    assert tuple(sorted(d3.element_orders())) == (1, 2, 2, 2, 3, 3)
    d4 = fg.dihedral_group(4)
    assert tuple(sorted(d4.element_orders())) == (1, 2, 2, 2, 2, 2, 4, 4)
    assert not d4.is_abelian
    assert d4.center_size() == 2


def test_symmetric_alternating_structure():
    s4 = fg.symmetric_group(4)
    assert s4.order == 24
    assert tuple(sorted(s4.element_orders())) == (1,) + (2,) * 9 + (3,) * 8 + (4,) * 6
    a4 = fg.alternating_group(4)
    assert a4.order == 12
    assert tuple(sorted(a4.element_orders())) == (1,) + (2,) * 3 + (3,) * 8


def test_power():
    g = fg.cyclic_group(5)
    assert g.power(2, 0) == 1
    assert g.power(2, 5) == 1
    assert g.power(2, -1) == g.inv(2)


def test_fingerprint_is_relabeling_invariant():
    rng = random.Random(13)
    for g in (fg.symmetric_group(3), fg.cyclic_group(6), fg.dihedral_group(4)):
        n = g.order
        for _ in range(10):
            rest = list(range(2, n + 1))
            rng.shuffle(rest)
            sigma = {1: 1}
            for a, b in zip(range(2, n + 1), rest):
                sigma[a] = b
            h = relabel(g, sigma)
            assert h.fingerprint() == g.fingerprint()
            iso = fg.find_isomorphism(g, h)
            assert iso is not None
            for a in g.elements():
                for b in g.elements():
                    assert iso[g.mul(a, b)] == h.mul(iso[a], iso[b])


# ---------------------------------------------------------------- closures


def test_subgroup_closure_examples():
    g = fg.cyclic_group(6)
    assert fg.subgroup_closure(g, []) == [1]
    involution = next(a for a in g.elements() if g.element_order(a) == 2)
    assert len(fg.subgroup_closure(g, [involution])) == 2
    s3 = fg.symmetric_group(3)
    two_cycle = next(a for a in s3.elements() if s3.element_order(a) == 2)
    three_cycle = next(a for a in s3.elements() if s3.element_order(a) == 3)
    assert fg.subgroup_closure(s3, [two_cycle, three_cycle]) == list(s3.elements())


def test_normal_closure_examples():
    c5 = fg.cyclic_group(5)
    for x in range(2, 6):
        assert len(fg.normal_closure(c5, x)) == 5
    c4 = fg.cyclic_group(4)
    involution = next(a for a in c4.elements() if c4.element_order(a) == 2)
    assert len(fg.normal_closure(c4, involution)) == 2
    a5 = fg.alternating_group(5)
    for x in (2, 17, 60):
        assert len(fg.normal_closure(a5, x)) == 60


def test_normal_closure_is_normal_subgroup():
    rng = random.Random(23)
    for g in fg.catalog(8):
        if g.order == 1:
            continue
        for _ in range(3):
            x = rng.randrange(2, g.order + 1)
            members = fg.normal_closure(g, x)
            assert x in members
            assert oracle_is_normal_subgroup(g, members)


def test_normal_closure_identity_raises():
    with pytest.raises(IdentityElement):
        fg.normal_closure(fg.cyclic_group(4), 1)


# ---------------------------------------------------------------- simplicity


def test_is_simple_examples():
    assert fg.is_simple(fg.cyclic_group(7)).simple
    cert = fg.is_simple(fg.cyclic_group(6))
    assert not cert.simple
    assert cert.witness is not None
    assert 1 < len(cert.closure) < 6
    assert oracle_is_normal_subgroup(fg.cyclic_group(6), cert.closure)
    assert fg.is_simple(fg.alternating_group(5)).simple


def test_is_simple_trivial_raises():
    with pytest.raises(TrivialGroup):
        fg.is_simple(fg.trivial_group())


# ---------------------------------------------------------------- conjugate words


def eval_conjugate_word(g, n, word):
    acc = 1
    for c, e in word:
        base = n if e == 1 else g.inv(n)
        acc = g.mul(acc, g.mul(g.mul(g.inv(c), base), c))
    return acc


def test_conjugate_word_k_equals_n():
    s3 = fg.symmetric_group(3)
    assert fg.conjugate_word_witness(s3, 2, 2) == ((1, 1),)


def test_conjugate_word_c5_square():
    c5 = fg.cyclic_group(5)
    k = c5.mul(2, 2)
    word = fg.conjugate_word_witness(c5, 2, k)
    assert len(word) == 2
    assert eval_conjugate_word(c5, 2, word) == k


def test_conjugate_word_s3_three_cycles():
    s3 = fg.symmetric_group(3)
    cycles = [a for a in s3.elements() if s3.element_order(a) == 3]
    n, k = cycles
    word = fg.conjugate_word_witness(s3, n, k)
    assert len(word) == 1
    assert eval_conjugate_word(s3, n, word) == k


def test_conjugate_word_randomized():
    rng = random.Random(31)
    for _ in range(30):
        g = rng.choice([m for m in fg.catalog(8) if m.order > 1])
        n = rng.randrange(2, g.order + 1)
        closure = fg.normal_closure(g, n)
        k = rng.choice(closure)
        word = fg.conjugate_word_witness(g, n, k)
        assert eval_conjugate_word(g, n, word) == k


def test_conjugate_word_errors():
    c4 = fg.cyclic_group(4)
    with pytest.raises(IdentityElement):
        fg.conjugate_word_witness(c4, 1, 2)
    involution = next(a for a in c4.elements() if c4.element_order(a) == 2)
    generator = next(a for a in c4.elements() if c4.element_order(a) == 4)
    with pytest.raises(NotInClosure):
        fg.conjugate_word_witness(c4, involution, generator)


# ---------------------------------------------------------------- embeddings


def test_embed_search_examples():
    s3 = fg.symmetric_group(3)
    emb = fg.embed_search(fg.cyclic_group(2), s3)
    assert emb is not None
    assert s3.element_order(emb.map[2]) == 2
    k4 = fg.direct_product(fg.cyclic_group(2), fg.cyclic_group(2)).group
    assert fg.embed_search(fg.cyclic_group(4), k4) is None
    ident = fg.embed_search(s3, s3)
    assert ident is not None
    assert len(set(ident.map.values())) == 6


def test_embed_search_matches_exhaustive_oracle():
    cat = fg.catalog(8)
    for h in cat:
        for g in cat:
            got = fg.embed_search(h, g) is not None
            assert got == oracle_embed_exists(h, g), f"{h.name} into {g.name}"


# ---------------------------------------------------------------- products


def test_direct_product_klein():
    k4 = fg.direct_product(fg.cyclic_group(2), fg.cyclic_group(2)).group
    assert k4.fingerprint() == (4, True, (1, 2, 2, 2), 4)


def test_direct_product_c2_c3_is_c6():
    p = fg.direct_product(fg.cyclic_group(2), fg.cyclic_group(3))
    assert fg.is_isomorphic(p.group, fg.cyclic_group(6))


def test_direct_product_projections_are_homomorphisms():
    rng = random.Random(41)
    cat = fg.catalog(6)
    for _ in range(20):
        g, h = rng.choice(cat), rng.choice(cat)
        p = fg.direct_product(g, h)
        assert p.group.order == g.order * h.order
        for _ in range(30):
            x = rng.randrange(1, p.group.order + 1)
            y = rng.randrange(1, p.group.order + 1)
            z = p.group.mul(x, y)
            assert p.proj1[z] == g.mul(p.proj1[x], p.proj1[y])
            assert p.proj2[z] == h.mul(p.proj2[x], p.proj2[y])
        assert p.inj1[1] == 1 and p.inj2[1] == 1
        for b in h.elements():
            assert p.proj2[p.inj2[b]] == b and p.proj1[p.inj2[b]] == 1


def test_direct_product_limit():
    with pytest.raises(LimitExceeded):
        fg.direct_product(fg.symmetric_group(4), fg.symmetric_group(4), limit=100)


# ---------------------------------------------------------------- presentation


def test_presentation_equiv_same_tuple():
    s3 = fg.symmetric_group(3)
    assert fg.presentation_equiv(s3, (2, 4), s3, (2, 4))


def test_presentation_equiv_order_mismatch():
    c4 = fg.cyclic_group(4)
    k4 = fg.direct_product(fg.cyclic_group(2), fg.cyclic_group(2)).group
    generator = next(a for a in c4.elements() if c4.element_order(a) == 4)
    assert not fg.presentation_equiv(c4, (generator,), k4, (2,))


def test_presentation_equiv_inner_automorphism():
    s3 = fg.symmetric_group(3)
    transpositions = [a for a in s3.elements() if s3.element_order(a) == 2]
    a = tuple(transpositions[:2])
    for c in s3.elements():
        b = tuple(s3.mul(s3.mul(s3.inv(c), x), c) for x in a)
        assert fg.presentation_equiv(s3, a, s3, b)


def test_presentation_equiv_length_mismatch():
    s3 = fg.symmetric_group(3)
    with pytest.raises(LengthMismatch):
        fg.presentation_equiv(s3, (2,), s3, (2, 3))


def test_presentation_equiv_rejects_non_homomorphism():
    s3 = fg.symmetric_group(3)
    three_cycle = next(a for a in s3.elements() if s3.element_order(a) == 3)
    two_cycle = next(a for a in s3.elements() if s3.element_order(a) == 2)
    assert not fg.presentation_equiv(s3, (three_cycle,), s3, (two_cycle,))


# ---------------------------------------------------------------- catalog


def test_catalog_order_one():
    cat = fg.catalog(1)
    assert len(cat) == 1 and cat[0].order == 1


def test_catalog_six_has_all_classes():
    cat = fg.catalog(6)
    assert len(cat) == sum(CLASS_COUNTS.values())
    by_order = {}
    for g in cat:
        by_order[g.order] = by_order.get(g.order, 0) + 1
    assert by_order == CLASS_COUNTS
    names = {g.name for g in cat}
    assert "S3" in names  # the one nonabelian class


def test_catalog_eight_has_nonabelian_of_order_eight():
    cat = fg.catalog(8)
    witnesses = [g for g in cat if g.order == 8 and not g.is_abelian]
    assert witnesses
    g = witnesses[0]
    pair = next(
        (a, b)
        for a in g.elements()
        for b in g.elements()
        if g.mul(a, b) != g.mul(b, a)
    )
    assert g.mul(*pair) != g.mul(pair[1], pair[0])


def test_catalog_members_pairwise_non_isomorphic():
    cat = fg.catalog(8)
    for i, g in enumerate(cat):
        for h in cat[i + 1:]:
            assert fg.find_isomorphism(g, h) is None


def test_catalog_limit():
    with pytest.raises(LimitExceeded):
        fg.catalog(17)
    assert len(fg.catalog(32, limit=32)) > len(fg.catalog(16))


def test_catalog_deterministic():
    a = [g.name for g in fg.catalog(12)]
    b = [g.name for g in fg.catalog(12)]
    assert a == b


# ---------------------------------------------------------------- serialization


def test_text_round_trip():
    g = fg.symmetric_group(3)
    h = fg.FinGroup.from_text(g.to_text(), name="S3")
    assert h.cayley_rows() == g.cayley_rows()


def test_json_round_trip():
    g = fg.dihedral_group(4)
    h = fg.FinGroup.from_json(g.to_json())
    assert h.cayley_rows() == g.cayley_rows()
    assert h.name == "D4"


def test_from_text_rejects_wrong_count():
    with pytest.raises(ValueError):
        fg.FinGroup.from_text("2\n1 2\n2")
