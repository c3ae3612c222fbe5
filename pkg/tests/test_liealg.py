import json

import pytest

from liepair.liealg import (chevalley_algebra, jacobi_check,
                            killing_invariance, matrix_model)
from liepair.rootsys import build_root_system, from_tag
from liepair.scalars import ONE, Q, ZERO

from conftest import algebra


@pytest.mark.parametrize("tag", ["A1", "A2", "B2", "C2", "G2", "A3", "B3",
                                 "C3", "D4", "F4"])
def test_chevalley_jacobi_and_killing(tag):
    L = algebra(tag)
    ok, w = jacobi_check(L.table)
    assert ok, w
    ok, w = killing_invariance(L)
    assert ok, w


def test_sl2_relations(a1):
    rs = a1.root_system
    e, f = a1.root_basis(0), a1.root_basis(1)
    h = a1.table.get(e, f)            # H_alpha
    assert a1.killing[e][f] == ONE
    # [H_a, E_a] = (a,a) E_a in the B-normalization
    he = a1.bracket(h, {e: ONE})
    aa = a1.killing_form(h, h)
    assert he == {e: aa}


def test_antisymmetry_and_bracket_self(a2):
    x = {0: Q(2), 3: Q("1/3"), 5: Q(1, 1)}
    assert a2.bracket(x, x) == {}
    for i in range(a2.dim):
        for j in range(a2.dim):
            vij = a2.table.get(i, j)
            vji = a2.table.get(j, i)
            assert vij == {k: -c for k, c in vji.items()}


def test_normalization_and_duality(b2):
    rs = b2.root_system
    for a in range(rs.n_pos):
        ea = b2.root_basis(a)
        ena = b2.root_basis(rs.negative_of(a))
        assert b2.killing[ea][ena] == ONE
        ha = b2.h_dual(a)
        assert b2.table.get(ea, ena) == ha
        for i in range(rs.rank):
            assert b2.killing_form(ha, {i: ONE}) == b2.root_action(a, {i: ONE})
    # killing(H_a, H) = a(H) quoted for A2 as well
    a2 = algebra("A2")
    for a in range(3):
        ha = a2.h_dual(a)
        for i in range(2):
            assert a2.killing_form(ha, {i: ONE}) == a2.root_action(a, {i: ONE})


@pytest.mark.parametrize("tag", ["A2", "B2", "G2", "C3"])
def test_unnormalized_integral_constants_with_string_lengths(tag):
    rs = from_tag(tag)
    L = chevalley_algebra(rs, normalized=False)
    for i, j, v in L.table.entries():
        ri, rj = L.basis_root(i), L.basis_root(j)
        if ri is None or rj is None:
            continue
        s = rs.root_sum(ri, rj)
        if s is None:
            continue
        (k, c), = v.items()
        assert c.im == 0 and c.re.denominator == 1
        # |N| = p + 1 where p is the string-down length
        p = 0
        cur = list(rs.roots[rj])
        while True:
            cur = [x - y for x, y in zip(cur, rs.roots[ri])]
            if rs.is_root(cur):
                p += 1
            else:
                break
        assert abs(int(c.re.numerator)) == p + 1
    if tag == "G2":
        vals = {abs(int(c.re.numerator)) for i, j, v in L.table.entries()
                for c in v.values()
                if L.basis_root(i) is not None and L.basis_root(j) is not None
                and rs.root_sum(L.basis_root(i), L.basis_root(j)) is not None}
        assert vals == {1, 2, 3}


def test_killing_nondegenerate(a2, g2):
    from liepair import linalg
    for L in (a2, g2):
        d = linalg.det(L.killing)
        assert d and d.im == 0


def test_jacobi_fail_witness(a2):
    t = a2.table.copy()
    # flip one nonzero constant
    i, j, v = next(iter(t.entries()))
    k = next(iter(v))
    v[k] = -v[k]
    ok, w = jacobi_check(t)
    assert not ok and w is not None


def test_matrix_models_dims():
    assert len(matrix_model("so", 3).basis) == 3
    assert len(matrix_model("sp", 2).basis) == 10
    assert len(matrix_model("sl", 4).basis) == 15
    assert len(matrix_model("gl", 3).basis) == 9
    with pytest.raises(ValueError):
        matrix_model("su", 3)
    with pytest.raises(ValueError):
        matrix_model("so", 9)


def test_matrix_model_defining_conditions():
    sp = matrix_model("sp", 2)
    n = sp.n
    J = [[ZERO] * 4 for _ in range(4)]
    for i in range(2):
        J[i][n + i] = ONE
        J[n + i][i] = -ONE
    for b in sp.basis:
        # X J + J X^T = 0
        for i in range(4):
            for j in range(4):
                s = ZERO
                for k in range(4):
                    s = s + b[i][k] * J[k][j] + J[i][k] * b[j][k]
                assert not s
    so = matrix_model("so", 4)
    for b in so.basis:
        for i in range(4):
            for j in range(4):
                assert b[i][j] + b[j][i] == ZERO


def test_so3_killing_proportional_to_trace():
    m = matrix_model("so", 3)
    for i in range(3):
        for j in range(3):
            assert m.algebra.killing[i][j] == m.trace_form[i][j] * Q(1)
    m4 = matrix_model("so", 4)
    for i in range(6):
        for j in range(6):
            assert m4.algebra.killing[i][j] == m4.trace_form[i][j] * Q(2)


def test_bracket_a_jacobi_so4_general_symmetric():
    from liepair.class1 import bracket_a_table
    m = matrix_model("so", 4)
    a = [[Q(1), Q(2), ZERO, Q(1)],
         [Q(2), Q(0), Q(3), ZERO],
         [ZERO, Q(3), Q(5), Q(1)],
         [Q(1), ZERO, Q(1), Q(-2)]]
    t = bracket_a_table(m, a)
    ok, w = jacobi_check(t)
    assert ok, w
    from liepair.bilie import compatibility_check
    assert compatibility_check(m.algebra, m.algebra.table, t).passed


def test_structure_dump_deterministic(a2):
    d1 = a2.structure_json()
    L2 = chevalley_algebra(build_root_system("A", 2))
    assert d1 == L2.structure_json()
    data = json.loads(d1)
    assert data["convention"] == "extraspecial-v1"
    assert data["dim"] == 8


@pytest.mark.parametrize("tag", ["A2", "B2", "G2"])
def test_structure_dump_matches_committed_golden(tag):
    # pins the sign convention: any change to the positive-root order or to
    # the extraspecial-pair algorithm must bump the convention string
    import os
    path = os.path.join(os.path.dirname(__file__), "..", "configs",
                        "golden", f"{tag}_structure.json")
    with open(path) as f:
        want = json.load(f)
    assert algebra(tag).structure_dump() == want


@pytest.mark.slow
def test_e8_chevalley_verifies():
    L = chevalley_algebra("E8")
    assert L.dim == 248
    ok, w = jacobi_check(L.table)
    assert ok, w
    ok, w = killing_invariance(L)
    assert ok, w
