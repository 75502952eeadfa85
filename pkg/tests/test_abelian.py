"""Tests for exact Prüfer-coordinate arithmetic, enumeration, and stage monitors."""

import random

import pytest

from grouplab.abelian import (
    IDENTITY,
    AbelianElement,
    FinAbelian,
    PruferCoord,
    StageReport,
    a_prefix_table,
    abelian_type,
    abelian_types_up_to,
    add,
    divide,
    embed_fin_abelian,
    encode_element,
    enumerate_element,
    height,
    multiple,
    negate,
    order,
    span_map,
    stage_check,
)
from grouplab.errors import LimitExceeded
from grouplab.fingroup import symmetric_group
from grouplab.table import PartialTable

# ---------------------------------------------------------------- oracles


def oracle_order(x, bound=20000):
    # repeated addition until the identity shows up
    acc = x
    k = 1
    while not acc.is_identity():
        acc = add(acc, x)
        k += 1
        assert k <= bound, "oracle ran away"
    return k


def oracle_kfold(x, k):
    acc = IDENTITY
    for _ in range(k):
        acc = add(acc, x)
    return acc


def random_element(rng, max_support=3, primes=(2, 3, 5), max_copy=2, max_m=3):
    coords = {}
    for _ in range(rng.randrange(max_support + 1)):
        p = rng.choice(primes)
        i = rng.randrange(max_copy + 1)
        m = rng.randrange(1, max_m + 1)
        while p ** m > 16:
            m -= 1
        a = rng.choice([a for a in range(1, p ** m) if a % p])
        coords[(p, i)] = PruferCoord(p, a, m)
    return AbelianElement(coords)


def elem(*triples):
    # triples are (p, i, a, m)
    return AbelianElement({(p, i): PruferCoord(p, a, m) for p, i, a, m in triples})


# ---------------------------------------------------------------- coordinates


def test_coord_validation():
    PruferCoord(2, 1, 1)
    PruferCoord(3, 2, 2)
    PruferCoord(2, 0, 0)
    with pytest.raises(ValueError):
        PruferCoord(4, 1, 1)
    with pytest.raises(ValueError):
        PruferCoord(2, 4, 2)
    with pytest.raises(ValueError):
        PruferCoord(2, 2, 2)
    with pytest.raises(ValueError):
        PruferCoord(2, 0, 1)
    with pytest.raises(ValueError):
        PruferCoord(2, -1, 1)


def test_element_validation():
    with pytest.raises(ValueError):
        AbelianElement({(2, 0): PruferCoord(2, 0, 0)})
    with pytest.raises(ValueError):
        AbelianElement({(2, 0): PruferCoord(3, 1, 1)})
    with pytest.raises(ValueError):
        AbelianElement({(2, -1): PruferCoord(2, 1, 1)})
    with pytest.raises(ValueError):
        AbelianElement([((2, 0), PruferCoord(2, 1, 1)), ((2, 0), PruferCoord(2, 1, 2))])


def test_element_equality_and_hash():
    x = elem((2, 0, 1, 2))
    y = AbelianElement({(2, 0): PruferCoord(2, 1, 2)})
    assert x == y and hash(x) == hash(y)
    assert x != elem((2, 1, 1, 2))
    assert AbelianElement() == IDENTITY


def test_element_json_round_trip():
    x = elem((2, 0, 1, 2), (3, 1, 2, 1))
    obj = x.to_json()
    assert obj == {"coords": [{"p": 2, "i": 0, "a": 1, "m": 2}, {"p": 3, "i": 1, "a": 2, "m": 1}]}
    assert AbelianElement.from_json(obj) == x
    assert AbelianElement.from_json(IDENTITY.to_json()) == IDENTITY


def test_element_immutable():
    x = elem((2, 0, 1, 1))
    with pytest.raises(AttributeError):
        x._coords = {}
    with pytest.raises(TypeError):
        x.coords[(2, 0)] = PruferCoord(2, 1, 2)


# ---------------------------------------------------------------- arithmetic


def test_add_order_two_self_cancels():
    x = elem((2, 0, 1, 1))
    assert add(x, x).is_identity()


def test_add_quarter_plus_quarter():
    x = elem((2, 0, 1, 2))
    assert add(x, x) == elem((2, 0, 1, 1))


def test_add_then_negate_cancels():
    x = add(elem((2, 0, 3, 2)), elem((3, 1, 1, 1)))
    assert add(x, negate(x)).is_identity()


def test_add_identity_neutral():
    rng = random.Random(11)
    for _ in range(50):
        x = random_element(rng)
        assert add(x, IDENTITY) == x
        assert add(IDENTITY, x) == x


def test_add_commutative_and_associative():
    rng = random.Random(12)
    for _ in range(300):
        x, y, z = (random_element(rng) for _ in range(3))
        assert add(x, y) == add(y, x)
        assert add(add(x, y), z) == add(x, add(y, z))


def test_negate_inverse():
    rng = random.Random(13)
    for _ in range(100):
        x = random_element(rng)
        assert add(x, negate(x)).is_identity()
        assert negate(negate(x)) == x


def test_order_examples():
    assert order(IDENTITY) == 1
    assert order(elem((2, 0, 1, 3))) == 8
    x = elem((2, 0, 1, 3), (3, 1, 2, 2))
    assert order(x) == 72
    assert oracle_order(x) == 72


def test_order_matches_oracle_and_is_minimal():
    rng = random.Random(14)
    for _ in range(40):
        x = random_element(rng, max_m=2)
        n = order(x)
        assert oracle_order(x) == n
        assert multiple(x, n).is_identity()
        for k in range(1, n):
            if n % k == 0 and k < n:
                assert not multiple(x, k).is_identity()


def test_multiple_agrees_with_repeated_addition():
    rng = random.Random(15)
    for _ in range(60):
        x = random_element(rng)
        k = rng.randrange(0, 12)
        assert multiple(x, k) == oracle_kfold(x, k)
        assert multiple(x, -k) == negate(oracle_kfold(x, k))


# ---------------------------------------------------------------- division


def test_divide_identity():
    for k in (1, 2, 7, 12):
        assert divide(IDENTITY, k) == IDENTITY


def test_divide_quarter_by_three():
    y = divide(elem((2, 0, 1, 2)), 3)
    assert y == elem((2, 0, 3, 2))
    assert oracle_kfold(y, 3) == elem((2, 0, 1, 2))


def test_divide_half_by_two():
    assert divide(elem((2, 0, 1, 1)), 2) == elem((2, 0, 1, 2))


def test_divide_rejects_bad_k():
    with pytest.raises(ValueError):
        divide(IDENTITY, 0)


def test_divide_round_trip_random():
    rng = random.Random(16)
    for _ in range(200):
        x = random_element(rng)
        k = rng.randrange(1, 13)
        y = divide(x, k)
        assert multiple(y, k) == x
        assert oracle_kfold(y, k) == x


# ---------------------------------------------------------------- finite Abelian


def test_fin_abelian_validation():
    FinAbelian([2, 3, 4])
    FinAbelian([])
    with pytest.raises(ValueError):
        FinAbelian([6])
    with pytest.raises(ValueError):
        FinAbelian([1])


def test_fin_abelian_to_fingroup():
    h = FinAbelian([4])
    g = h.to_fingroup()
    assert g.order == 4 and g.is_abelian
    assert g.name == "C4"
    h2 = FinAbelian([2, 2])
    g2 = h2.to_fingroup()
    assert g2.order == 4 and all(g2.mul(x, x) == 1 for x in g2.elements())


def test_abelian_types_up_to_counts():
    types = abelian_types_up_to(16)
    assert len(types) == 25
    assert len({t.factors for t in types}) == 25
    assert sum(1 for t in types if t.order == 16) == 5
    assert sum(1 for t in types if t.order == 12) == 2


def test_abelian_type_round_trip():
    for h in abelian_types_up_to(16):
        back = abelian_type(h.to_fingroup())
        assert sorted(back.factors) == sorted(h.factors)


def test_abelian_type_rejects_nonabelian():
    with pytest.raises(ValueError):
        abelian_type(symmetric_group(3))


def test_abelian_type_is_relabel_invariant():
    g = FinAbelian([4, 2]).to_fingroup()
    rng = random.Random(17)
    perm = list(range(2, g.order + 1))
    rng.shuffle(perm)
    sigma = {1: 1}
    sigma.update({i + 2: p for i, p in enumerate(perm)})
    rows = [[0] * g.order for _ in range(g.order)]
    for a in g.elements():
        for b in g.elements():
            rows[sigma[a] - 1][sigma[b] - 1] = sigma[g.mul(a, b)]
    from grouplab.fingroup import FinGroup

    assert sorted(abelian_type(FinGroup(rows)).factors) == [2, 4]


# ---------------------------------------------------------------- embeddings into A


def test_embed_c2():
    images = embed_fin_abelian(FinAbelian([2]))
    assert images == [elem((2, 0, 1, 1))]


def test_embed_c6_generator_order():
    images = embed_fin_abelian(FinAbelian([2, 3]))
    assert order(add(images[0], images[1])) == 6


def test_embed_c2xc2_distinct_copies():
    images = embed_fin_abelian(FinAbelian([2, 2]))
    assert images[0].support() == ((2, 0),)
    assert images[1].support() == ((2, 1),)
    seen = {IDENTITY, images[0], images[1], add(images[0], images[1])}
    assert len(seen) == 4


def test_embed_all_types_verified_homomorphism():
    for h in abelian_types_up_to(16):
        images = embed_fin_abelian(h)
        span = span_map(h, images)
        assert len(set(span.values())) == h.order
        for s in h.elements():
            for t in h.elements():
                assert span[h.add(s, t)] == add(span[s], span[t])
        for s, img in span.items():
            expected = 1
            for r, f in zip(s, h.factors):
                if r:
                    import math

                    expected = math.lcm(expected, f // math.gcd(r, f))
            assert order(img) == expected


# ---------------------------------------------------------------- enumeration


def test_enumerate_first_elements():
    assert enumerate_element(1) == IDENTITY
    assert enumerate_element(2) == elem((2, 0, 1, 1))
    assert enumerate_element(3) == elem((2, 1, 1, 1))
    assert enumerate_element(4) == elem((2, 0, 1, 1), (2, 1, 1, 1))


def test_enumerate_rejects_zero():
    with pytest.raises(ValueError):
        enumerate_element(0)


def test_encode_round_trip():
    for n in range(1, 2001):
        assert encode_element(enumerate_element(n)) == n


def test_encode_random_elements():
    rng = random.Random(18)
    for _ in range(60):
        x = random_element(rng)
        assert enumerate_element(encode_element(x)) == x


def test_height_blocks_are_sorted():
    heights = [height(enumerate_element(n)) for n in range(1, 400)]
    assert heights == sorted(heights)


def brute_order_up_to_height(H):
    # independent materialization of the canonical order for small heights
    import itertools

    keys = [(p, i) for p in (2, 3, 5, 7) if p <= H for i in range(H)]
    pools = []
    for p, i in keys:
        opts = [None]
        m = 1
        while p ** m <= H:
            opts.extend((m, a) for a in range(1, p ** m) if a % p)
            m += 1
        pools.append(opts)
    out = []
    for picks in itertools.product(*pools):
        coords = {
            k: PruferCoord(k[0], a, m)
            for k, pick in zip(keys, picks)
            if pick is not None
            for m, a in [pick]
        }
        x = AbelianElement(coords)
        out.append(x)
    out.sort(key=lambda x: (height(x), len(x.coords), x.to_json()["coords"] and tuple(
        (c["p"], c["i"], c["m"], c["a"]) for c in x.to_json()["coords"]) or ()))
    return out


def test_enumeration_matches_brute_force_order():
    ordered = brute_order_up_to_height(3)
    assert len(ordered) == 216
    for n, x in enumerate(ordered, start=1):
        assert enumerate_element(n) == x
        assert encode_element(x) == n


def test_enumeration_matches_brute_force_height_four_prefix():
    ordered = brute_order_up_to_height(4)
    assert len(ordered) == 20736
    for n in range(1, 3001):
        assert enumerate_element(n) == ordered[n - 1]
        assert encode_element(ordered[n - 1]) == n


def test_encode_guard():
    with pytest.raises(LimitExceeded):
        encode_element(elem((2, 100, 1, 1)))


# ---------------------------------------------------------------- prefix tables


def test_prefix_table_one():
    t = a_prefix_table(1)
    assert dict(t.cells) == {(1, 1): 1}


def test_prefix_table_symmetric_and_cancellative():
    t = a_prefix_table(20)
    for i in range(1, 21):
        assert t.get(1, i) == i and t.get(i, 1) == i
        row = [t.get(i, j) for j in range(1, 21)]
        col = [t.get(j, i) for j in range(1, 21)]
        assert row == col
        assert len(set(row)) == 20


def test_prefix_table_partial_associativity():
    t = a_prefix_table(16)
    hits = 0
    for i in range(1, 17):
        for j in range(1, 17):
            for k in range(1, 17):
                ij = t.get(i, j)
                jk = t.get(j, k)
                if ij is not None and jk is not None and ij <= 16 and jk <= 16:
                    left = t.get(ij, k)
                    right = t.get(i, jk)
                    if left is not None and right is not None:
                        assert left == right
                        hits += 1
    assert hits > 0


def test_prefix_table_limit():
    with pytest.raises(LimitExceeded):
        a_prefix_table(65)


# ---------------------------------------------------------------- stage monitors


def test_stage_check_empty_table_all_pending():
    report = stage_check(PartialTable(), bound=3)
    assert all(v is None for v in report.divisibility.values())
    assert all(v is None for v in report.torsion.values())
    assert all(v is None for v in report.embeddings.values())


def test_stage_check_torsion_on_prefix():
    t = a_prefix_table(8)
    report = stage_check(t, bound=5)
    for n in range(1, 6):
        assert report.torsion[n] is not None
        k = report.torsion[n]
        cur = n
        for _ in range(k - 1):
            cur = t.get(cur, n)
        assert cur == 1


def test_stage_check_c4_block():
    g = FinAbelian([4]).to_fingroup()
    cells = {(i, j): g.mul(i, j) for i in g.elements() for j in g.elements()}
    report = stage_check(PartialTable(cells), bound=4)
    assert report.embeddings["C4"] is not None
    phi = report.embeddings["C4"]
    assert len(set(phi.values())) == 4 and phi[1] == 1
    assert report.embeddings["C2"] is not None
    assert report.embeddings["C3"] is None
    assert report.divisibility[(3, 2)] == 2
    assert report.divisibility[(2, 2)] is None
    assert report.torsion[2] == 4


def test_stage_check_divisibility_matches_brute_force():
    g = FinAbelian([2, 3]).to_fingroup()
    cells = {(i, j): g.mul(i, j) for i in g.elements() for j in g.elements()}
    t = PartialTable(cells)
    report = stage_check(t, bound=5)
    for n in range(1, 6):
        for k in range(1, 6):
            brute = None
            for m in range(1, 7):
                if g.power(m, k) == n:
                    brute = m
                    break
            got = report.divisibility[(n, k)]
            if n <= 6:
                assert (got is None) == (brute is None)
                if got is not None:
                    assert g.power(got, k) == n


def test_stage_check_embedding_found_in_sparse_relabeling():
    g = FinAbelian([2, 2]).to_fingroup()
    relabel = {1: 1, 2: 7, 3: 9, 4: 13}
    cells = {(relabel[i], relabel[j]): relabel[g.mul(i, j)] for i in g.elements() for j in g.elements()}
    report = stage_check(PartialTable(cells), bound=4)
    phi = report.embeddings["C2xC2"]
    assert phi is not None
    assert set(phi.values()) == {1, 7, 9, 13}


def test_stage_report_json_shape():
    report = stage_check(a_prefix_table(4), bound=2)
    obj = report.to_json()
    assert {"divisibility", "torsion", "embeddings"} == set(obj)
    assert all({"n", "k", "witness"} == set(e) for e in obj["divisibility"])
