"""Exact dense linear algebra over the Gaussian rationals.

Matrices are lists of rows of Q scalars; vectors appear either dense
(list[Q]) or sparse (dict index -> Q, zero entries absent).  Everything is
exact; there is no pivot-size heuristics beyond "first nonzero".

Also hosts the small integer Smith-normal-form needed for root-lattice
quotients.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .scalars import ONE, ZERO, Q

Vec = Dict[int, Q]
Mat = List[List[Q]]


# -- sparse vectors ----------------------------------------------------------

def vec_add(dst: Vec, src: Vec, coeff: Q = ONE) -> None:
    """In place: dst += coeff * src, dropping exact zeros."""
    if not coeff:
        return
    for k, v in src.items():
        w = dst.get(k)
        if w is None:
            dst[k] = coeff * v
        else:
            w = w + coeff * v
            if w:
                dst[k] = w
            else:
                del dst[k]


def vec_scale(v: Vec, c: Q) -> Vec:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vec_is_zero(v: Vec) -> bool:
    return not v


def dense_of(v: Vec, n: int) -> List[Q]:
    out = [ZERO] * n
    for k, x in v.items():
        out[k] = x
    return out


def sparse_of(v: Sequence[Q]) -> Vec:
    return {i: x for i, x in enumerate(v) if x}


# -- dense matrices ----------------------------------------------------------

def zeros(n: int, m: int) -> Mat:
    return [[ZERO] * m for _ in range(n)]


def identity(n: int) -> Mat:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = ONE
    return out


def mat_add(a: Mat, b: Mat, ca: Q = ONE, cb: Q = ONE) -> Mat:
    return [[ca * x + cb * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Mat, c: Q) -> Mat:
    return [[c * x for x in row] for row in a]


def mat_mul(a: Mat, b: Mat) -> Mat:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    bt = list(zip(*b))
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        row = out[i]
        nz = [(j, ai[j]) for j in range(k) if ai[j]]
        for jj in range(m):
            col = bt[jj]
            s = ZERO
            for j, x in nz:
                if col[j]:
                    s = s + x * col[j]
            row[jj] = s
    return out


def mat_vec(a: Mat, v: Sequence[Q]) -> List[Q]:
    return [
        sum((row[j] * v[j] for j in range(len(v)) if v[j]), ZERO)
        for row in a
    ]


def transpose(a: Mat) -> Mat:
    return [list(r) for r in zip(*a)]


def mat_eq(a: Mat, b: Mat) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def rref(mat: Mat) -> Tuple[Mat, List[int]]:
    """Reduced row echelon form; returns (rref, pivot column list)."""
    m = [row[:] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(mat: Mat) -> int:
    return len(rref(mat)[1])


def kernel(mat: Mat) -> List[List[Q]]:
    """Basis of the right kernel {x : mat @ x = 0}."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    red, pivots = rref(mat)
    piv_set = set(pivots)
    free = [c for c in range(cols) if c not in piv_set]
    basis = []
    for fc in free:
        x = [ZERO] * cols
        x[fc] = ONE
        for r, pc in enumerate(pivots):
            if red[r][fc]:
                x[pc] = -red[r][fc]
        basis.append(x)
    return basis


def solve(mat: Mat, rhs: Sequence[Q]) -> Optional[List[Q]]:
    """One solution of mat @ x = rhs, or None if inconsistent."""
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    aug = [mat[i][:] + [rhs[i]] for i in range(rows)]
    red, pivots = rref(aug)
    for r in range(len(pivots), rows):
        if red[r][cols]:
            return None
    if pivots and pivots[-1] == cols:
        return None
    x = [ZERO] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def inverse(mat: Mat) -> Mat:
    n = len(mat)
    aug = [mat[i][:] + identity(n)[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def det(mat: Mat) -> Q:
    n = len(mat)
    m = [row[:] for row in mat]
    out = ONE
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c]), None)
        if pr is None:
            return ZERO
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            out = -out
        out = out * m[c][c]
        inv = ONE / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


class LinSolver:
    """Repeated exact solves M @ x = b against a fixed column set M.

    Precomputes the rref of [M | I]; each solve is then a single matrix-vector
    product plus a consistency scan.  Free coordinates are pinned to zero, so
    solutions are deterministic.
    """

    def __init__(self, columns: Sequence[Sequence[Q]]):
        self.ncols = len(columns)
        self.length = len(columns[0]) if columns else 0
        aug = [[columns[j][i] for j in range(self.ncols)]
               + identity(self.length)[i]
               for i in range(self.length)]
        self._red, piv = rref(aug)
        self._pivots = [p for p in piv if p < self.ncols]

    def solve(self, vec: Sequence[Q]) -> Optional[List[Q]]:
        eb: List[Q] = []
        for r in range(self.length):
            row = self._red[r]
            s = ZERO
            for i in range(self.length):
                c = row[self.ncols + i]
                if c and vec[i]:
                    s = s + c * vec[i]
            eb.append(s)
        for r in range(len(self._pivots), self.length):
            if eb[r]:
                return None
        x = [ZERO] * self.ncols
        for r, pc in enumerate(self._pivots):
            x[pc] = eb[r]
        return x


class Subspace:
    """Subspace of Q^n given by a canonical (rref) basis."""

    def __init__(self, n: int, vectors: Sequence[Sequence[Q]]):
        self.n = n
        rows = [list(v) for v in vectors if any(v)]
        if rows:
            red, pivots = rref(rows)
            self.basis = [red[i] for i in range(len(pivots))]
            self.pivots = pivots
        else:
            self.basis = []
            self.pivots = []

    @classmethod
    def from_sparse(cls, n: int, vectors: Sequence[Vec]) -> "Subspace":
        return cls(n, [dense_of(v, n) for v in vectors])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Q]) -> bool:
        w = list(v)
        for row, pc in zip(self.basis, self.pivots):
            if w[pc]:
                f = w[pc]
                w = [x - f * y for x, y in zip(w, row)]
        return not any(w)

    def contains_sparse(self, v: Vec) -> bool:
        return self.contains(dense_of(v, self.n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.n, [])
        mat = [[self.basis[j][i] for j in range(self.dim)]
               + [-other.basis[j][i] for j in range(other.dim)]
               for i in range(self.n)]
        out = []
        for coeffs in kernel(mat):
            v = [ZERO] * self.n
            for j in range(self.dim):
                if coeffs[j]:
                    for i in range(self.n):
                        v[i] = v[i] + coeffs[j] * self.basis[j][i]
            out.append(v)
        return Subspace(self.n, out)

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace(self.n, self.basis + other.basis)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)


# -- integer Smith normal form ------------------------------------------------

IntMat = List[List[int]]


def smith_normal_form(mat: IntMat) -> Tuple[IntMat, IntMat, IntMat]:
    """Return (S, U, V) with U @ mat @ V = S diagonal, U, V unimodular.

    Diagonal entries satisfy the divisibility chain d1 | d2 | ...; matrices
    here are tiny (root-lattice sized), so the plain minimal-pivot algorithm
    is plenty.
    """
    a = [[int(x) for x in row] for row in mat]
    n = len(a)
    m = len(a[0]) if n else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(m)] for i in range(m)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def diagonalize_from(t0: int) -> None:
        t = t0
        while t < min(n, m):
            best = None
            for i in range(t, n):
                for j in range(t, m):
                    if a[i][j] and (best is None
                                    or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            done = False
            while not done:
                done = True
                for i in range(t + 1, n):
                    if a[i][t]:
                        add_row(t, i, -(a[i][t] // a[t][t]))
                        if a[i][t]:
                            swap_rows(t, i)
                            done = False
                for j in range(t + 1, m):
                    if a[t][j]:
                        add_col(t, j, -(a[t][j] // a[t][t]))
                        if a[t][j]:
                            swap_cols(t, j)
                            done = False
            if a[t][t] < 0:
                a[t] = [-x for x in a[t]]
                u[t] = [-x for x in u[t]]
            t += 1

    diagonalize_from(0)
    while True:
        bad = None
        for i in range(min(n, m) - 1):
            d1, d2 = a[i][i], a[i + 1][i + 1]
            if d1 and d2 and d2 % d1 != 0:
                bad = i
                break
        if bad is None:
            break
        add_row(bad + 1, bad, 1)
        diagonalize_from(bad)
    return a, u, v


class IntegerLattice:
    """The lattice generated over Z by a list of integer row vectors."""

    def __init__(self, rows: IntMat, ambient_dim: int):
        self.dim = ambient_dim
        rows = [list(r) for r in rows] or [[0] * ambient_dim]
        self.s, self.u, self.v = smith_normal_form(rows)
        self.nrows = len(rows)
        self.diag = [self.s[i][i] for i in range(min(self.nrows, ambient_dim))]

    def _transform(self, vec: Sequence[int]) -> List[int]:
        return [sum(vec[k] * self.v[k][j] for k in range(self.dim))
                for j in range(self.dim)]

    def contains(self, vec: Sequence[int]) -> bool:
        w = self._transform(vec)
        for j in range(self.dim):
            d = self.diag[j] if j < len(self.diag) else 0
            if d == 0:
                if w[j] != 0:
                    return False
            elif w[j] % d != 0:
                return False
        return True

    def coset_key(self, vec: Sequence[int]) -> Tuple[int, ...]:
        """Canonical label of vec + L inside Z^n / L."""
        w = self._transform(vec)
        out = []
        for j in range(self.dim):
            d = self.diag[j] if j < len(self.diag) else 0
            out.append(w[j] % d if d else w[j])
        return tuple(out)

    def quotient_invariants(self) -> Tuple[int, List[int]]:
        """(free rank, nontrivial torsion factors) of Z^n / L."""
        torsion = [d for d in self.diag if d > 1]
        free = self.dim - sum(1 for d in self.diag if d != 0)
        return free, sorted(torsion)
