import pytest

from liepair.bilie import (BuildError, Operator, root_grading_data,
                           times)
from liepair.class2 import (AutomorphismType, toral_grading,
                            compare_under_automorphism, e7_example,
                            e7_kappa_check, e7_root_subset, labels_of_structure,
                            make_split, parabolic_wno, reconstruct_labels,
                            simple_factors, validate_admissible,
                            verify_class2, wno_class2, zm_wno, e7_gamma_check)
from liepair.diagrams import (classify, extract_admissible_pair,
                              standard_labels, triangle_rule_check)
from liepair.scalars import Q, ZERO, half

from conftest import algebra


def test_toral_grading_extremes(a2):
    rs = a2.root_system
    g_full = toral_grading(a2, rs.subset(range(len(rs.roots))))
    assert not g_full.components                 # single zero component
    g_empty = toral_grading(a2, rs.subset([]))
    assert g_empty.free_rank == rs.rank and not g_empty.torsion
    assert len(g_empty.components) == len(rs.roots)


def test_toral_grading_a2_one_factor(a2):
    rs = a2.root_system
    alpha1 = rs.index_of((1, 0))
    sub = rs.subset({alpha1, rs.negative_of(alpha1)})
    g = toral_grading(a2, sub)
    # three cosets counting the zero one: two nonzero irreducible components
    assert len(g.components) == 2
    for roots in g.components.values():
        assert len(roots) == 2


def test_toral_grading_requires_saturation(g2):
    rs = g2.root_system
    # the long-root A2 inside G2 is saturated; dropping one pair is not closed
    at = AutomorphismType(rs, (0, 1, 0))
    sub = rs.subset(at.fixed_roots())
    g = toral_grading(g2, sub)
    assert g.torsion == [3]                       # Z3 quotient (long A2)


def test_simple_factors(a3):
    rs = a3.root_system
    r0 = rs.levi_subset([0, 2])
    fs = simple_factors(rs, r0.members)
    assert sorted(len(f) for f in fs) == [2, 2]


def test_validate_admissible(a2, a3, b2):
    # A2 with R0 empty: the basic triangle exists
    split = make_split(a2, a2.root_system.subset([]))
    assert validate_admissible(split).passed
    # so(5) = B2: the long-root subsystem is an order-2 fixed-point set
    rs = b2.root_system
    longs = {r for r in range(len(rs.roots)) if rs.norm2(r) == 2}
    split_b = make_split(b2, rs.subset(longs), side1_factors=(0,))
    res = validate_admissible(split_b)
    assert not res.passed and "order-2" in res.witness
    # A3 Levi {alpha_1, alpha_3} is the order-2 fixed-point set as well
    r0 = a3.root_system.levi_subset([0, 2])
    split3 = make_split(a3, r0, side1_factors=(0,))
    assert not validate_admissible(split3).passed
    # e7 subset passes
    e7 = algebra("E7")
    split_e = make_split(e7, e7_root_subset(e7), side1_factors=(0,))
    assert validate_admissible(split_e).passed


def test_reconstruct_labels_zero(a2):
    rs = a2.root_system
    subject = rs.subset([])
    labels = standard_labels(rs, subject, ZERO)
    labels.labels = {k: 0 for k in labels.labels}
    op = reconstruct_labels(a2, ZERO, labels, {0: ZERO, 1: ZERO})
    assert op.is_zero()


def test_reconstruct_labels_a2_sum_rule(a2):
    rs = a2.root_system
    subject = rs.subset([])
    a = Q(3)
    labels = standard_labels(rs, subject, a, positive_label=1)
    seeds = {0: a / Q(3), 1: a / Q(3)}
    op = reconstruct_labels(a2, a, labels, seeds)
    from liepair.diagrams import kappa_of_operator
    kappa = kappa_of_operator(op)
    hi = rs.index_of((1, 1))
    # the triangle sum rule holds with value +a
    assert kappa[rs.index_of((1, 0))] + kappa[rs.index_of((0, 1))] + \
        kappa[rs.negative_of(hi)] == a
    res, _ = triangle_rule_check(op, a, subject)
    assert res.passed


def test_reconstruct_labels_inconsistent(b2):
    rs = b2.root_system
    subject = rs.subset([])
    labels = standard_labels(rs, subject, Q(1))
    # corrupt one label: flips consistency for a root with two decompositions
    bad = dict(labels.labels)
    key = next(k for k, v in sorted(bad.items()) if v != 0)
    bad[key] = -bad[key]
    labels.labels = bad
    with pytest.raises(BuildError):
        reconstruct_labels(b2, Q(1), labels, {0: Q(1), 1: Q(-1)})


def test_wno_class2_rejects_zero_wa(a2):
    split = make_split(a2, a2.root_system.subset([]))
    with pytest.raises(BuildError):
        wno_class2(Q(0), Q(2), split, Operator.zero(a2))
    with pytest.raises(BuildError):
        wno_class2(Q(1), Q(1), split, Operator.zero(a2))


def test_parabolic_a2_and_a3():
    a2 = algebra("A2")
    split = make_split(a2, a2.root_system.subset([]))
    s, pre = parabolic_wno(Q(0), Q(1), split, [])
    assert all(c.passed for c in pre)
    rep = verify_class2(s, split, Q(0), Q(1))
    assert all(c.passed for c in rep), [(c.name, c.witness) for c in rep]
    _, d = extract_admissible_pair(s)
    assert classify(d) == "II" and len(d.time_set()) == 2
    a3 = algebra("A3")
    r0 = a3.root_system.levi_subset([0])
    split3 = make_split(a3, r0, side1_factors=(0,))
    s3, _ = parabolic_wno(Q(0), Q(1), split3, [0])
    rep3 = verify_class2(s3, split3, Q(0), Q(1))
    assert all(c.passed for c in rep3)
    # wrong times rejected
    with pytest.raises(BuildError):
        parabolic_wno(Q(1), Q(1), split3, [0])
    # R0 mismatch rejected
    with pytest.raises(BuildError):
        parabolic_wno(Q(0), Q(1), split3, [1])


def test_parabolic_unprojected_torsion_zero(b2):
    r0 = b2.root_system.levi_subset([0])
    split = make_split(b2, r0, side1_factors=(0,))
    if not validate_admissible(split).passed:
        pytest.skip("inadmissible Levi in B2 for b0={0}")
    s, pre = parabolic_wno(Q(2), Q(-1), split, [0])
    assert pre[0].name == "unprojected_torsion_zero" and pre[0].passed


def test_zm_a2_values_and_coherence():
    a2 = algebra("A2")
    at = AutomorphismType(a2.root_system, (1, 1, 1))
    assert at.m == 3
    r0 = a2.root_system.subset(at.fixed_roots())
    split = make_split(a2, r0)
    sz, pre = zm_wno(Q(0), Q(3), at, split)
    assert all(c.passed for c in pre)
    lam, _ = root_grading_data(sz.wno)
    for r in range(6):
        j = at.weight(r)
        assert lam[r] == Q(j)     # ((3-j)*0 + j*3)/3 = j
    # m = 2 rejected
    at2 = AutomorphismType(a2.root_system, (1, 1, 0))
    r02 = a2.root_system.subset(at2.fixed_roots())
    with pytest.raises(BuildError):
        zm_wno(Q(0), Q(1), at2, make_split(a2, r02))
    # coherence with the parabolic builder: same diagram, basic subalgebra,
    # labels; in fact the projected structures coincide
    sp, _ = parabolic_wno(Q(0), Q(3), split, [])
    assert sz.wno.equals(sp.wno)
    assert sz.second_bracket.equals(sp.second_bracket)
    lz = labels_of_structure(sz, split, Q(0), Q(3))
    lp = labels_of_structure(sp, split, Q(0), Q(3))
    assert lz.labels == lp.labels
    _, dz = extract_admissible_pair(sz)
    _, dp = extract_admissible_pair(sp)
    assert dz.assignment == dp.assignment


def test_zm_g2():
    g2 = algebra("G2")
    at = AutomorphismType(g2.root_system, (0, 1, 0))
    assert at.m == 3
    r0 = g2.root_system.subset(at.fixed_roots())
    split = make_split(g2, r0, side1_factors=(0,))
    s, pre = zm_wno(Q(0), Q(3), at, split)
    rep = verify_class2(s, split, Q(0), Q(3))
    assert all(c.passed for c in rep), [(c.name, c.witness) for c in rep]


def test_label_dichotomy_of_builders():
    # every nonzero-labeled triangle with two positive roots has label +
    a2 = algebra("A2")
    split = make_split(a2, a2.root_system.subset([]))
    s, _ = parabolic_wno(Q(0), Q(1), split, [])
    labels = labels_of_structure(s, split, Q(0), Q(1))
    rs = a2.root_system
    for tri, lab in labels.labels.items():
        if lab:
            pos = sum(1 for x in tri if rs.is_positive(x))
            assert lab == (1 if pos == 2 else -1)


def test_reconstruction_chain_independence(b2):
    # reconstruct twice with decompositions enumerated in opposite order;
    # the result must be identical (all decompositions are checked anyway)
    rs = b2.root_system
    subject = rs.subset([])
    a = Q(2)
    labels = standard_labels(rs, subject, a)
    seeds = {0: a, 1: -a}
    op1 = reconstruct_labels(b2, a, labels, seeds)
    op2 = reconstruct_labels(b2, a, labels, dict(seeds))
    assert op1.equals(op2)


def test_compare_under_automorphism_identity(a2):
    split = make_split(a2, a2.root_system.subset([]))
    s, _ = parabolic_wno(Q(0), Q(1), split, [])
    ident = Operator.identity(a2)
    assert compare_under_automorphism(s, s, ident).passed
    # a non-automorphism fails
    bad = Operator.identity(a2, Q(2))
    assert not compare_under_automorphism(s, s, bad).passed


# -- e7 ------------------------------------------------------------------------


def test_e7_subset_and_factors():
    e7 = algebra("E7")
    r0 = e7_root_subset(e7)
    assert len(r0.members) == 18
    assert r0.closed and r0.symmetric
    fs = simple_factors(e7.root_system, r0.members)
    assert sorted(len(f) for f in fs) == [6, 6, 6]   # three A2 factors
    g = toral_grading(e7, r0)
    assert e7_gamma_check(g).passed
    assert len(g.components) == 8


def test_e7_kappa_table_symbolic():
    # kappa is linear in (x, a); equality at three affinely independent
    # sample points proves the symbolic identity
    e7 = algebra("E7")
    r0 = e7_root_subset(e7)
    for (xv, av) in ((Q(0), Q(1)), (Q(1), Q(0)), (Q(1), Q(1))):
        labels = standard_labels(e7.root_system, r0, av, positive_label=-1)
        seeds = {i: ZERO for i in range(7)}
        seeds[2] = xv
        seeds[4] = -xv - Q("4/3") * av
        wa = reconstruct_labels(e7, av, labels, seeds)
        chk = e7_kappa_check(e7, wa, xv, av)
        assert chk.passed, chk.witness


def test_e7_table_values_at_samples():
    # x = 0, (t1,t2) = (2,-2) gives a = 2 and kappa_{(1,1)} = -a/3 = -2/3;
    # x = a/3 gives kappa_{(2,1)} = a
    e7 = algebra("E7")
    r0 = e7_root_subset(e7)
    a = Q(2)
    for (xv, key, want) in ((ZERO, (1, 1), -a / Q(3)),
                            (a / Q(3), (2, 1), a)):
        labels = standard_labels(e7.root_system, r0, a, positive_label=-1)
        seeds = {i: ZERO for i in range(7)}
        seeds[2] = xv
        seeds[4] = -xv - Q("4/3") * a
        wa = reconstruct_labels(e7, a, labels, seeds)
        from liepair.diagrams import kappa_of_operator
        kappa = kappa_of_operator(wa)
        rs = e7.root_system
        val = next(kappa[r] for r in range(len(rs.roots))
                   if (rs.roots[r][2] % 3, rs.roots[r][4] % 3) == key
                   and rs.is_positive(r))
        assert val == want


def test_e7_degenerate_times_rejected():
    with pytest.raises(BuildError):
        e7_example(Q(0), Q(1), Q(1), algebra=algebra("E7"))


@pytest.mark.slow
def test_e7_full_pipeline():
    out = e7_example(Q(0), Q(2), Q(-2), algebra=algebra("E7"))
    assert all(c.passed for c in out["checks"])
    s = out["structure"]
    rep = times(s)
    assert rep.times == [Q(-2), Q(2)]
    _, d = extract_admissible_pair(s)
    assert classify(d) == "II"


def _chevalley_involution(L):
    """The automorphism with h -> -h, E_simple -> -E_-simple, extended

    through the bracket; a nontrivial explicit witness for the
    automorphism-comparison interface."""
    rs = L.root_system
    images = {}
    for i in range(rs.rank):
        images[i] = {i: Q(-1)}                     # Cartan part: -Id
    omega_root = {}
    for s_idx in rs.simple_indices():
        omega_root[s_idx] = {L.root_basis(rs.negative_of(s_idx)): Q(-1)}
        omega_root[rs.negative_of(s_idx)] = {L.root_basis(s_idx): Q(-1)}
    for idx in range(rs.n_pos):
        for sign in (0, rs.n_pos):
            g = idx if not sign else idx + rs.n_pos
            if g in omega_root:
                continue
            vg = rs.roots[g]
            done = False
            for b in list(omega_root):
                if done:
                    break
                rest = tuple(x - y for x, y in zip(vg, rs.roots[b]))
                if rs.is_root(rest):
                    c = rs.index_of(rest)
                    if c in omega_root:
                        coeff = L.table.get(L.root_basis(b),
                                            L.root_basis(c)).get(L.root_basis(g))
                        if coeff:
                            img = L.bracket(omega_root[b], omega_root[c])
                            omega_root[g] = {k: v / coeff for k, v in img.items()}
                            done = True
            assert done, f"no decomposition found for root {g}"
    cols = [images[i] for i in range(rs.rank)]
    cols += [omega_root[r] for r in range(len(rs.roots))]
    return Operator.from_columns(L, cols)


def test_chevalley_involution_transports_structures():
    a2 = algebra("A2")
    omega = _chevalley_involution(a2)
    # omega is an automorphism of the first bracket and it is an involution
    assert omega.compose(omega).equals(Operator.identity(a2))
    # it fixes any Class I structure (symmetric eigenvalues) ...
    from liepair.class1 import catalog, wno_class1
    s1 = wno_class1(catalog("12.12", a2, [Q(0), Q(1)]))
    assert compare_under_automorphism(s1, s1, omega).passed
    # ... and swaps the two times AND the two sides of a parabolic split
    split = make_split(a2, a2.root_system.subset([]))
    s01, _ = parabolic_wno(Q(0), Q(1), split, [])
    split_flipped = make_split(a2, a2.root_system.subset([]),
                               centre_sides=[2, 2])
    s10, _ = parabolic_wno(Q(1), Q(0), split_flipped, [])
    assert compare_under_automorphism(s01, s10, omega).passed
    assert not compare_under_automorphism(s01, s01, omega).passed


def test_a3_levi_coherence_zm_vs_parabolic():
    # an order-3 automorphism with a nontrivial Levi fixed-point set on A3;
    # the projected structure coincides with the parabolic one, which is the
    # A_n consistency evidence at a nontrivial Levi
    a3 = algebra("A3")
    at = AutomorphismType(a3.root_system, (1, 0, 1, 1))
    assert at.m == 3
    r0 = a3.root_system.subset(at.fixed_roots())
    levi = a3.root_system.levi_subset([0])
    assert r0.members == levi.members
    split = make_split(a3, r0, side1_factors=(0,))
    sz, _ = zm_wno(Q(0), Q(3), at, split)
    sp, _ = parabolic_wno(Q(0), Q(3), split, [0])
    assert sz.wno.equals(sp.wno)
    assert sz.second_bracket.equals(sp.second_bracket)


def test_seed_gauge_freedom_projects_to_one_structure():
    # label-consistent seed choices differ by ad H with H killed by R0; the
    # principal projection removes that gauge freedom, so every choice must
    # give the same verified structure as the parabolic pattern
    a3 = algebra("A3")
    rs = a3.root_system
    r0 = rs.levi_subset([0])
    split = make_split(a3, r0, side1_factors=(0,))
    t1, t2 = Q(0), Q(3)
    a = half(t1 - t2)
    labels = standard_labels(rs, r0, a)
    built = []
    simples = rs.simple_indices()
    alpha1_pos = next(i for i, s_idx in enumerate(simples)
                      if rs.roots[s_idx] == (1, 0, 0))
    for seed_tail in ((a, a), (Q(1), Q(7)), (Q(-2), Q("1/3"))):
        seeds = {i: ZERO for i in range(3)}
        k = 0
        for i in range(3):
            if i == alpha1_pos:
                continue
            seeds[i] = seed_tail[k]
            k += 1
        wa = reconstruct_labels(a3, a, labels, seeds)
        s = wno_class2(t1, t2, split, wa)
        built.append(s)
    for s in built[1:]:
        assert s.wno.equals(built[0].wno)
        assert s.second_bracket.equals(built[0].second_bracket)
    sp, _ = parabolic_wno(t1, t2, split, [0])
    assert built[0].wno.equals(sp.wno)


@pytest.mark.slow
def test_e7_alternative_split_and_nonzero_x():
    # a different admissible pairing of the three simple factors, with a
    # nonzero antisymmetric parameter
    out = e7_example(Q("1/3"), Q(0), Q(3), side1_factors=(0, 1),
                     algebra=algebra("E7"))
    assert all(c.passed for c in out["checks"])
    s = out["structure"]
    rep = times(s)
    assert rep.times == [Q(0), Q(3)]


def test_zm_b3_non_levi_order_three():
    # s_0 = 0 with order 3: the fixed-point subalgebra is a regular
    # non-Levi reductive subalgebra; the builder must still pass
    b3 = algebra("B3")
    at = AutomorphismType(b3.root_system, (0, 1, 1, 0))
    assert at.m == 3
    r0 = b3.root_system.subset(at.fixed_roots())
    split = make_split(b3, r0, side1_factors=(0,))
    assert validate_admissible(split).passed
    s, _ = zm_wno(Q(0), Q(3), at, split)
    rep = verify_class2(s, split, Q(0), Q(3))
    assert all(c.passed for c in rep), [(c.name, c.witness) for c in rep]


def test_toral_grading_requires_closed_symmetric(a2):
    rs = a2.root_system
    only_pos = rs.subset({0})
    with pytest.raises(BuildError):
        toral_grading(a2, only_pos)
