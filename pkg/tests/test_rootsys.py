import pytest

from liepair.rootsys import (automorphism_order, build_root_system,
                             check_closed_symmetric, from_tag, sigma_weight)

COUNTS = {
    "A1": 2, "A2": 6, "A3": 12, "A4": 20, "B2": 8, "B3": 18, "B4": 32,
    "C2": 8, "C3": 18, "C4": 32, "D4": 24, "G2": 12, "F4": 48,
    "E6": 72, "E7": 126, "E8": 240,
}


@pytest.mark.parametrize("tag,count", sorted(COUNTS.items()))
def test_root_counts(tag, count):
    rs = from_tag(tag)
    assert len(rs.roots) == count
    # closed under negation, reduced
    for i, v in enumerate(rs.roots):
        assert rs.index_of([-x for x in v]) == rs.negative_of(i)
        assert not rs.is_root([2 * x for x in v])
    # all-positive or all-negative coefficients
    for v in rs.roots:
        assert all(x >= 0 for x in v) or all(x <= 0 for x in v)


def test_invalid_types_rejected():
    for fam, rank in (("B", 1), ("C", 1), ("D", 3), ("E", 5), ("E", 9),
                      ("F", 3), ("G", 3), ("X", 2), ("A", 0)):
        with pytest.raises(ValueError):
            build_root_system(fam, rank)
    with pytest.raises(ValueError):
        from_tag("Q7")


def test_cartan_integers_bounded():
    for tag in ("A3", "B3", "C3", "D4", "G2", "F4"):
        rs = from_tag(tag)
        for i in range(len(rs.roots)):
            for j in range(rs.rank):
                assert rs.cartan_pairing(i, j) in (-3, -2, -1, 0, 1, 2, 3)


def test_positive_order_by_height_then_lex():
    rs = from_tag("B3")
    keys = [(sum(v), v) for v in rs.positive_roots]
    assert keys == sorted(keys)


def test_highest_root_and_labels():
    assert from_tag("E7").labels == (2, 2, 3, 4, 3, 2, 1)
    assert from_tag("G2").labels == (3, 2)
    assert from_tag("F4").labels == (2, 3, 4, 2)
    assert from_tag("B2").lowest_root_coeffs == (-1, -2)


def test_triangles_brute_force():
    for tag in ("A1", "A2", "B2", "G2", "A3"):
        rs = from_tag(tag)
        brute = set()
        n = len(rs.roots)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if i < j < k:
                        s = [a + b + c for a, b, c in
                             zip(rs.roots[i], rs.roots[j], rs.roots[k])]
                        if not any(s):
                            brute.add((i, j, k))
        assert {t.indices for t in rs.triangles()} == brute
    assert len(from_tag("A1").triangles()) == 0
    assert len(from_tag("A2").triangles()) == 2
    assert len(from_tag("B2").triangles()) == 4


def test_chain_decomposition():
    for tag in ("A2", "B2", "B3", "G2", "F4"):
        rs = from_tag(tag)
        simples = set(rs.simple_indices())
        for idx in range(rs.n_pos):
            chain = rs.chain_decomposition(idx)
            assert all(c in simples for c in chain)
            acc = [0] * rs.rank
            for step, c in enumerate(chain):
                acc = [a + b for a, b in zip(acc, rs.roots[c])]
                assert rs.is_root(acc)
            assert tuple(acc) == rs.roots[idx]
    # simple root -> itself; B2 long chain has length 3
    rs = from_tag("B2")
    assert rs.chain_decomposition(0) == [0]
    eps12 = rs.index_of((1, 2))
    assert len(rs.chain_decomposition(eps12)) == 3


def test_levi_subsets():
    rs = from_tag("A3")
    empty = rs.levi_subset([])
    assert not empty.members and empty.closed and empty.symmetric
    a2 = from_tag("A2")
    one = a2.levi_subset([0])
    alpha1 = a2.index_of((1, 0))
    assert one.members == {alpha1, a2.negative_of(alpha1)}
    two = rs.levi_subset([0, 2])
    assert len(two.members) == 4
    assert two.closed and two.symmetric
    # every levi subset is closed and symmetric
    for tag in ("B3", "D4"):
        r = from_tag(tag)
        for b0 in ([0], [1], [0, 1], [0, 2]):
            sub = r.levi_subset(b0)
            assert check_closed_symmetric(sub) == (True, True)


def test_check_closed_symmetric_counterexamples():
    rs = from_tag("A2")
    only_pos = rs.subset({0})
    assert not only_pos.symmetric
    both_simple = rs.subset({0, 1, 3, 4})
    assert both_simple.symmetric and not both_simple.closed


def test_epsilon_coordinates():
    b2 = from_tag("B2")
    eps = sorted(b2.epsilon_of(i) for i in range(len(b2.roots)))
    want = sorted([(1, 0), (0, 1), (1, 1), (1, -1),
                   (-1, 0), (0, -1), (-1, -1), (-1, 1)])
    assert eps == want
    c2 = from_tag("C2")
    assert (2, 0) in {c2.epsilon_of(i) for i in range(len(c2.roots))}
    a2 = from_tag("A2")
    assert a2.epsilon_of(a2.index_of((1, 0))) == (1, -1, 0)
    with pytest.raises(ValueError):
        from_tag("G2").epsilon_of(0)


def test_automorphism_types():
    rs = from_tag("A2")
    assert automorphism_order(rs, (1, 1, 1)) == 3
    assert automorphism_order(rs, (1, 1, 0)) == 2
    g2 = from_tag("G2")
    assert automorphism_order(g2, (0, 1, 0)) == 3
    assert automorphism_order(g2, (0, 0, 1)) == 2
    with pytest.raises(ValueError):
        automorphism_order(rs, (2, 2, 2))
    with pytest.raises(ValueError):
        automorphism_order(rs, (1, 1))
    # weights are linear and vanish nowhere off support
    for r in range(len(rs.roots)):
        w = sigma_weight(rs, (1, 1, 1), r)
        assert w == sum(rs.roots[r])


@pytest.mark.parametrize("fam,formula", [
    ("A", lambda n: n * (n + 1)),
    ("B", lambda n: 2 * n * n),
    ("C", lambda n: 2 * n * n),
    ("D", lambda n: 2 * n * (n - 1)),
])
def test_root_counts_up_to_rank_8(fam, formula):
    lo = {"A": 1, "B": 2, "C": 2, "D": 4}[fam]
    for n in range(lo, 9):
        rs = build_root_system(fam, n)
        assert len(rs.roots) == formula(n), (fam, n)


def test_automorphism_type_negative_entries_rejected():
    rs = from_tag("A2")
    with pytest.raises(ValueError):
        automorphism_order(rs, (1, -1, 1))


def test_chain_decomposition_rejects_negative_roots():
    rs = from_tag("A2")
    with pytest.raises(ValueError):
        rs.chain_decomposition(rs.negative_of(0))
