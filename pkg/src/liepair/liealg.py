"""Semisimple Lie algebras with exact structure constants.

Two sources of algebras:

* chevalley_algebra(R): the algebra of a root system in a Chevalley basis,
  normalized so that B(E_a, E_-a) = 1 and [E_a, E_-a] = H_a with
  B(H_a, H) = a(H).  Signs are fixed by the extraspecial-pair algorithm
  under the canonical (height, lex) positive-root order.
* matrix_model(model, n): explicit gl/sl/so/sp matrix algebras used as
  independent cross-checks.

Brackets are sparse tables; the Jacobi checker is the oracle every builder
in this package must pass.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    from fractions import Fraction as _mpq

from . import linalg
from .linalg import Vec, vec_add
from .rootsys import RootSystem, build_root_system
from .scalars import ONE, ZERO, Q

Label = Tuple


def _q(r) -> Q:
    return Q._raw(_mpq(r), _mpq(0))


class BracketTable:
    """Sparse antisymmetric bilinear table over a fixed basis."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: List[Dict[int, Vec]] = [dict() for _ in range(dim)]

    def set(self, i: int, j: int, vec: Vec) -> None:
        if i == j:
            raise ValueError("diagonal entries are zero by antisymmetry")
        if i > j:
            i, j = j, i
            vec = {k: -v for k, v in vec.items()}
        vec = {k: v for k, v in vec.items() if v}
        if vec:
            self.rows[i][j] = vec
        else:
            self.rows[i].pop(j, None)

    def get(self, i: int, j: int) -> Vec:
        """Bracket of basis elements i and j as a fresh sparse vector."""
        if i < j:
            return dict(self.rows[i].get(j, ()))
        if i > j:
            v = self.rows[j].get(i)
            return {k: -c for k, c in v.items()} if v else {}
        return {}

    def add_into(self, acc: Vec, i: int, j: int, coeff: Q) -> None:
        """acc += coeff * [e_i, e_j]."""
        if i < j:
            v = self.rows[i].get(j)
            if v:
                vec_add(acc, v, coeff)
        elif i > j:
            v = self.rows[j].get(i)
            if v:
                vec_add(acc, v, -coeff)

    def apply(self, x: Vec, y: Vec) -> Vec:
        """Bilinear extension to sparse vectors."""
        acc: Vec = {}
        for i, cx in x.items():
            for j, cy in y.items():
                self.add_into(acc, i, j, cx * cy)
        return acc

    def apply_vec_basis(self, v: Vec, k: int) -> Vec:
        acc: Vec = {}
        for m, c in v.items():
            self.add_into(acc, m, k, c)
        return acc

    def entries(self):
        for i in range(self.dim):
            for j, v in self.rows[i].items():
                yield i, j, v

    def copy(self) -> "BracketTable":
        out = BracketTable(self.dim)
        for i, j, v in self.entries():
            out.rows[i][j] = dict(v)
        return out

    def scale(self, c: Q) -> "BracketTable":
        out = BracketTable(self.dim)
        if c:
            for i, j, v in self.entries():
                out.rows[i][j] = {k: c * x for k, x in v.items()}
        return out

    def add(self, other: "BracketTable") -> "BracketTable":
        out = self.copy()
        for i, j, v in other.entries():
            acc = out.rows[i].get(j, {})
            acc = dict(acc)
            vec_add(acc, v)
            if acc:
                out.rows[i][j] = acc
            else:
                out.rows[i].pop(j, None)
        return out

    def equals(self, other: "BracketTable") -> bool:
        if self.dim != other.dim:
            return False
        for i in range(self.dim):
            if self.rows[i].keys() != other.rows[i].keys():
                return False
            for j, v in self.rows[i].items():
                if v != other.rows[i][j]:
                    return False
        return True

    def is_zero(self) -> bool:
        return all(not r for r in self.rows)

    def first_difference(self, other: "BracketTable"):
        for i in range(self.dim):
            keys = set(self.rows[i]) | set(other.rows[i])
            for j in sorted(keys):
                if self.rows[i].get(j, {}) != other.rows[i].get(j, {}):
                    return (i, j)
        return None

    def jacobi_witness(self) -> Optional[Tuple[int, int, int]]:
        """First basis triple violating the Jacobi identity, or None."""
        n = self.dim
        rows = self.rows
        for i in range(n):
            ri = rows[i]
            for j in range(i + 1, n):
                vij = ri.get(j)
                rj = rows[j]
                for k in range(j + 1, n):
                    vjk = rj.get(k)
                    vik = ri.get(k)
                    if vij is None and vjk is None and vik is None:
                        continue
                    acc: Vec = {}
                    if vij:
                        for m, c in vij.items():
                            self.add_into(acc, m, k, c)
                    if vjk:
                        for m, c in vjk.items():
                            self.add_into(acc, m, i, c)
                    if vik:  # [e_k, e_i] = -[e_i, e_k]
                        for m, c in vik.items():
                            self.add_into(acc, m, j, -c)
                    if acc:
                        return (i, j, k)
        return None


def jacobi_check(table: BracketTable):
    """(passed, witness_triple_or_None) for the Jacobi identity."""
    w = table.jacobi_witness()
    return (w is None, w)


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q(i) given by a bracket table."""

    def __init__(
        self,
        basis_labels: Sequence[Label],
        table: BracketTable,
        root_system: Optional[RootSystem] = None,
        weights: Optional[List[Tuple[int, ...]]] = None,
    ):
        self.basis_labels = list(basis_labels)
        self.dim = len(self.basis_labels)
        self.table = table
        self.root_system = root_system
        self.weights = weights
        self.killing = compute_killing(table, weights)
        self._killing_inv: Optional[linalg.Mat] = None

    # -- indexing ------------------------------------------------------------

    @property
    def rank(self) -> int:
        if self.root_system is None:
            raise ValueError("not a root-system algebra")
        return self.root_system.rank

    def root_basis(self, root_idx: int) -> int:
        return self.rank + root_idx

    def basis_root(self, basis_idx: int) -> Optional[int]:
        if self.root_system is None or basis_idx < self.rank:
            return None
        return basis_idx - self.rank

    def cartan_indices(self) -> range:
        return range(self.rank)

    # -- algebra operations ----------------------------------------------------

    def bracket(self, x: Vec, y: Vec) -> Vec:
        return self.table.apply(x, y)

    def ad_columns(self, x: Vec) -> List[Vec]:
        """Columns of ad x: column j equals [x, e_j]."""
        out = []
        for j in range(self.dim):
            acc: Vec = {}
            for m, c in x.items():
                self.table.add_into(acc, m, j, c)
            out.append(acc)
        return out

    def killing_form(self, x: Vec, y: Vec) -> Q:
        s = ZERO
        for i, cx in x.items():
            row = self.killing[i]
            for j, cy in y.items():
                if row[j]:
                    s = s + cx * cy * row[j]
        return s

    def killing_inverse(self) -> linalg.Mat:
        if self._killing_inv is None:
            self._killing_inv = linalg.inverse(self.killing)
        return self._killing_inv

    def h_dual(self, root_idx: int) -> Vec:
        """H_a with B(H_a, H) = a(H); equals [E_a, E_-a]."""
        rs = self.root_system
        if rs is None:
            raise ValueError("not a root-system algebra")
        pos = rs.pos_class(root_idx)
        v = self.table.get(self.root_basis(pos), self.root_basis(rs.negative_of(pos)))
        if rs.is_positive(root_idx):
            return v
        return {k: -c for k, c in v.items()}

    def root_action(self, root_idx: int, h: Vec) -> Q:
        """a(H) for H supported on the Cartan part of the basis."""
        rs = self.root_system
        s = ZERO
        for i, c in h.items():
            if i >= self.rank:
                raise ValueError("element not in the Cartan subalgebra")
            p = rs.cartan_pairing(root_idx, i)
            if p:
                s = s + c * p
        return s

    # -- serialization -----------------------------------------------------------

    def structure_dump(self) -> dict:
        """Deterministic JSON-ready dump of the structure constants."""
        entries = {}
        for i, j, v in self.table.entries():
            entries[f"{i},{j}"] = {
                str(k): v[k].to_str() for k in sorted(v)
            }
        return {
            "schema": "algebra-v1",
            "convention": "extraspecial-v1",
            "type": self.root_system.tag if self.root_system else "matrix",
            "dim": self.dim,
            "basis": [str(lbl) for lbl in self.basis_labels],
            "structure": {k: entries[k] for k in sorted(entries)},
        }

    def structure_json(self) -> str:
        return json.dumps(self.structure_dump(), indent=0, sort_keys=True)


def compute_killing(
    table: BracketTable, weights: Optional[List[Tuple[int, ...]]]
) -> linalg.Mat:
    """Killing matrix B_ij = Tr(ad e_i ad e_j).

    When grading weights are supplied only pairs with w_i + w_j = 0 are
    computed; the rest vanish by grading orthogonality (which the Jacobi
    oracle independently validates through killing_invariance_check).
    """
    n = table.dim
    out = [[ZERO] * n for _ in range(n)]
    if weights is not None:
        by_weight: Dict[Tuple[int, ...], List[int]] = {}
        for i, w in enumerate(weights):
            by_weight.setdefault(w, []).append(i)
        pairs = []
        for w, idxs in by_weight.items():
            neg = tuple(-x for x in w)
            if neg in by_weight:
                for i in idxs:
                    for j in by_weight[neg]:
                        if i <= j:
                            pairs.append((i, j))
    else:
        pairs = [(i, j) for i in range(n) for j in range(i, n)]
    for i, j in pairs:
        s = ZERO
        for k in range(n):
            vjk = table.get(j, k)
            if not vjk:
                continue
            for m, c in vjk.items():
                w = table.get(i, m).get(k)
                if w:
                    s = s + c * w
        out[i][j] = s
        out[j][i] = s
    return out


def killing_invariance(algebra: LieAlgebra):
    """Check B([x,y],z) + B(y,[x,z]) = 0 on all basis triples."""
    table = algebra.table
    kil = algebra.killing
    n = algebra.dim

    def b_vec_basis(v: Vec, k: int) -> Q:
        s = ZERO
        for m, c in v.items():
            if kil[m][k]:
                s = s + c * kil[m][k]
        return s

    for x in range(n):
        for y in range(n):
            vxy = table.get(x, y)
            for z in range(y, n):
                lhs = b_vec_basis(vxy, z) if vxy else ZERO
                vxz = table.get(x, z)
                rhs = b_vec_basis(vxz, y) if vxz else ZERO
                if lhs + rhs:
                    return False, (x, y, z)
    return True, None


# -- Chevalley construction ----------------------------------------------------


class _ChevalleyConstants:
    """Structure constants N_{a,b} from extraspecial pairs.

    All N values are exact rationals that come out integral; the signs are
    propagated with the triangle identity
        N_{x,y}/(z,z) = N_{y,z}/(x,x) = N_{z,x}/(y,y)   (x+y+z = 0)
    and the four-root Jacobi identity.  The Jacobi oracle downstream would
    catch any inconsistency loudly.
    """

    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.norm2 = [rs.norm2(i) for i in range(len(rs.roots))]
        self._memo: Dict[Tuple[int, int], object] = {}
        self._extra: Dict[int, Tuple[int, int]] = {}

    def string_down(self, a: int, b: int) -> int:
        """p = max k >= 0 with b - k*a a root."""
        rs = self.rs
        va, vb = rs.roots[a], rs.roots[b]
        p = 0
        cur = list(vb)
        while True:
            cur = [x - y for x, y in zip(cur, va)]
            if rs.is_root(cur):
                p += 1
            else:
                return p

    def extraspecial(self, c: int) -> Tuple[int, int]:
        """The extraspecial pair of a positive non-simple root index."""
        got = self._extra.get(c)
        if got is not None:
            return got
        rs = self.rs
        vc = rs.roots[c]
        for a in range(rs.n_pos):
            va = rs.roots[a]
            rest = tuple(x - y for x, y in zip(vc, va))
            if rs.is_root(rest):
                b = rs.index_of(rest)
                if b < rs.n_pos and a <= b:
                    self._extra[c] = (a, b)
                    return (a, b)
        raise AssertionError("positive root with no special pair")

    def n(self, a: int, b: int):
        """N_{a,b} (rational, integral in value); 0 if a+b is not a root."""
        rs = self.rs
        key = (a, b)
        got = self._memo.get(key)
        if got is not None:
            return got
        c = rs.root_sum(a, b)
        if c is None:
            self._memo[key] = _mpq(0)
            return self._memo[key]
        apos, bpos = rs.is_positive(a), rs.is_positive(b)
        if not apos and bpos:
            val = -self.n(b, a)
        elif not apos and not bpos:
            val = -self.n(rs.negative_of(a), rs.negative_of(b))
        elif apos and not bpos:
            na, nb, nc = self.norm2[a], self.norm2[b], self.norm2[c]
            if rs.is_positive(c):
                # triangle (a, b, -c): reduce to the positive pair (-b, c)
                val = -(nc / na) * self.n(rs.negative_of(b), c)
            else:
                # reduce to the positive pair (-c, a)
                val = (nc / nb) * self.n(rs.negative_of(c), a)
        else:
            val = self._n_positive(a, b, c)
        self._memo[key] = val
        return val

    def _n_positive(self, a: int, b: int, c: int):
        rs = self.rs
        if a > b:
            return -self.n(b, a)
        a1, b1 = self.extraspecial(c)
        if (a, b) == (a1, b1):
            return _mpq(self.string_down(a, b) + 1)
        # Jacobi on (a1, b1, -a) transported through the triangle identity:
        # N(a,b) = (c,c) / ((b,b) N(a1,b1)) *
        #          [ N(b1,-a) N(b1-a, a1) + N(-a,a1) N(a1-a, b1) ]
        t = _mpq(0)
        diff1 = tuple(x - y for x, y in zip(rs.roots[b1], rs.roots[a]))
        if rs.is_root(diff1):
            d1 = rs.index_of(diff1)
            t += self.n(b1, rs.negative_of(a)) * self.n(d1, a1)
        diff2 = tuple(x - y for x, y in zip(rs.roots[a1], rs.roots[a]))
        if rs.is_root(diff2):
            d2 = rs.index_of(diff2)
            t += self.n(rs.negative_of(a), a1) * self.n(d2, b1)
        n_extra = self.n(a1, b1)
        assert n_extra != 0
        return self.norm2[c] / (self.norm2[b] * n_extra) * t


def _chevalley_raw(rs: RootSystem) -> Tuple[BracketTable, List[Label], _ChevalleyConstants]:
    """Unnormalized Chevalley basis: coroots h_i plus root vectors e_a."""
    rank = rs.rank
    nroots = len(rs.roots)
    dim = rank + nroots
    cc = _ChevalleyConstants(rs)
    table = BracketTable(dim)
    # [h_i, e_b]
    for b in range(nroots):
        for i in range(rank):
            p = rs.cartan_pairing(b, i)
            if p:
                table.set(i, rank + b, {rank + b: _q(p)})
    # [e_a, e_b]
    for a in range(nroots):
        for b in range(a + 1, nroots):
            if rs.negative_of(a) == b:
                # coroot of the positive member
                pos = rs.pos_class(a)
                vpos = rs.roots[pos]
                npos = rs.norm2(pos) / 2
                coroot: Vec = {}
                for i in range(rank):
                    if vpos[i]:
                        ci = vpos[i] * (rs.inner_product[i][i] / 2) / npos
                        assert ci.denominator == 1
                        coroot[i] = _q(ci)
                sgn = 1 if rs.is_positive(a) else -1
                table.set(rank + a, rank + b,
                          {k: v if sgn > 0 else -v for k, v in coroot.items()})
                continue
            val = cc.n(a, b)
            if val:
                assert val.denominator == 1, "nonintegral Chevalley constant"
                c = rs.root_sum(a, b)
                table.set(rank + a, rank + b, {rank + c: _q(val)})
    labels: List[Label] = [("H", i) for i in range(rank)]
    labels += [("E", rs.roots[a]) for a in range(nroots)]
    return table, labels, cc


def chevalley_algebra(rs_or_tag, normalized: bool = True) -> LieAlgebra:
    """Chevalley-basis Lie algebra of a root system.

    With normalized=True (default) the negative root vectors are rescaled so
    that B(E_a, E_-a) = 1; then [E_a, E_-a] = H_a is the Killing dual of a.
    With normalized=False the raw integral Chevalley table is returned.
    """
    rs = rs_or_tag if isinstance(rs_or_tag, RootSystem) else build_root_system(
        rs_or_tag[0], int(rs_or_tag[1:]))
    table, labels, _ = _chevalley_raw(rs)
    rank = rs.rank
    weights = [tuple([0] * rank) for _ in range(rank)] + list(rs.roots)
    if not normalized:
        return LieAlgebra(labels, table, rs, weights)
    kil = compute_killing(table, weights)
    scale: List[Q] = [ONE] * (rank + len(rs.roots))
    for a in range(rs.n_pos):
        c = kil[rank + a][rank + rs.negative_of(a)]
        assert c, "Killing pairing of a root pair vanished"
        scale[rank + rs.negative_of(a)] = ONE / c
    new = BracketTable(table.dim)
    for i, j, v in table.entries():
        f = scale[i] * scale[j]
        new.rows[i][j] = {k: f * x / scale[k] for k, x in v.items()}
    return LieAlgebra(labels, new, rs, weights)


# -- matrix models ---------------------------------------------------------------

Matrix = Tuple[Tuple[Q, ...], ...]


def mat_commutator(x: Matrix, y: Matrix) -> Matrix:
    n = len(x)
    return tuple(
        tuple(
            sum((x[i][k] * y[k][j] - y[i][k] * x[k][j] for k in range(n)), ZERO)
            for j in range(n)
        )
        for i in range(n)
    )


def mat_trace_pair(x: Matrix, y: Matrix) -> Q:
    n = len(x)
    s = ZERO
    for i in range(n):
        for k in range(n):
            if x[i][k] and y[k][i]:
                s = s + x[i][k] * y[k][i]
    return s


def _unit(n: int, i: int, j: int, c: Q = ONE) -> List[List[Q]]:
    m = [[ZERO] * n for _ in range(n)]
    m[i][j] = c
    return m


def _freeze(m: List[List[Q]]) -> Matrix:
    return tuple(tuple(row) for row in m)


@dataclass
class MatrixAlgebra:
    """Matrix Lie algebra with its induced abstract structure constants."""

    model: str
    n: int
    size: int
    basis: List[Matrix]
    algebra: LieAlgebra
    trace_form: linalg.Mat
    _solver: linalg.LinSolver

    def coords_of(self, m: Matrix) -> Optional[List[Q]]:
        flat = [m[i][j] for i in range(self.size) for j in range(self.size)]
        return self._solver.solve(flat)

    def matrix_of(self, x: Vec) -> Matrix:
        out = [[ZERO] * self.size for _ in range(self.size)]
        for k, c in x.items():
            b = self.basis[k]
            for i in range(self.size):
                for j in range(self.size):
                    if b[i][j]:
                        out[i][j] = out[i][j] + c * b[i][j]
        return _freeze(out)


def _model_basis(model: str, n: int) -> Tuple[List[Matrix], int]:
    if model == "gl":
        size = n
        basis = [_freeze(_unit(n, i, j)) for i in range(n) for j in range(n)]
    elif model == "sl":
        size = n
        basis = [_freeze(_unit(n, i, j)) for i in range(n) for j in range(n)
                 if i != j]
        for i in range(n - 1):
            m = _unit(n, i, i)
            m[i + 1][i + 1] = -ONE
            basis.append(_freeze(m))
    elif model == "so":
        size = n
        basis = []
        for i in range(n):
            for j in range(i + 1, n):
                m = _unit(n, i, j)
                m[j][i] = -ONE
                basis.append(_freeze(m))
    elif model == "sp":
        size = 2 * n
        basis = []
        for i in range(n):          # block [[A,0],[0,-A^T]]
            for j in range(n):
                m = _unit(size, i, j)
                m[n + j][n + i] = -ONE
                basis.append(_freeze(m))
        for i in range(n):          # block [[0,B],[0,0]], B symmetric
            for j in range(i, n):
                m = _unit(size, i, n + j)
                m[j][n + i] = ONE
                basis.append(_freeze(m))
        for i in range(n):          # block [[0,0],[C,0]], C symmetric
            for j in range(i, n):
                m = _unit(size, n + i, j)
                m[n + j][i] = ONE
                basis.append(_freeze(m))
    else:
        raise ValueError(f"unknown matrix model {model!r}")
    return basis, size


def algebra_from_matrices(
    basis: Sequence[Matrix], labels: Sequence[Label]
) -> Tuple[LieAlgebra, linalg.LinSolver]:
    """Abstract Lie algebra of a list of matrices closed under commutator."""
    size = len(basis[0])
    cols = [
        [b[i][j] for i in range(size) for j in range(size)] for b in basis
    ]
    solver = linalg.LinSolver(cols)
    dim = len(basis)
    table = BracketTable(dim)
    for i in range(dim):
        for j in range(i + 1, dim):
            com = mat_commutator(basis[i], basis[j])
            flat = [com[r][c] for r in range(size) for c in range(size)]
            coeffs = solver.solve(flat)
            if coeffs is None:
                raise ValueError("matrix set not closed under commutator")
            table.set(i, j, linalg.sparse_of(coeffs))
    return LieAlgebra(labels, table), solver


def matrix_model(model: str, n: int) -> MatrixAlgebra:
    """Explicit gl(n), sl(n), so(n) or sp(n) built from matrix units."""
    if n < 1 or n > 8:
        raise ValueError("matrix models are desk scale: 1 <= n <= 8")
    basis, size = _model_basis(model, n)
    labels = [(model, k) for k in range(len(basis))]
    algebra, solver = algebra_from_matrices(basis, labels)
    tf = [[mat_trace_pair(x, y) for y in basis] for x in basis]
    return MatrixAlgebra(model, n, size, list(basis), algebra, tf, solver)
