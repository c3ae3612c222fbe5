"""Irreducible reduced root systems of types A-G and their combinatorics.

Roots are stored as integer coefficient vectors in the simple-root basis;
that single representation feeds every downstream module.  Epsilon
coordinates for the classical families are provided purely as an aliasing
layer.  Positive roots are ordered by (height, lexicographic coefficients),
which pins down the structure-constant signs chosen later.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover
    from fractions import Fraction as _mpq

Coeffs = Tuple[int, ...]

_CLASSICAL_COUNTS = {
    "A": lambda n: n * (n + 1),
    "B": lambda n: 2 * n * n,
    "C": lambda n: 2 * n * n,
    "D": lambda n: 2 * n * (n - 1),
    "E": lambda n: {6: 72, 7: 126, 8: 240}[n],
    "F": lambda n: 48,
    "G": lambda n: 12,
}


def _valid_type(family: str, rank: int) -> bool:
    return (
        (family == "A" and rank >= 1)
        or (family in ("B", "C") and rank >= 2)
        or (family == "D" and rank >= 4)
        or (family == "E" and rank in (6, 7, 8))
        or (family == "F" and rank == 4)
        or (family == "G" and rank == 2)
    )


def cartan_matrix(family: str, rank: int) -> List[List[int]]:
    """Cartan matrix A[i][j] = <alpha_i, alpha_j^vee>, Bourbaki numbering."""
    if not _valid_type(family, rank):
        raise ValueError(f"invalid simple type {family}{rank}")
    n = rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if family in ("A", "B", "C"):
        for i in range(n - 1):
            link(i, i + 1)
        if family == "B" and n >= 2:
            link(n - 2, n - 1, -2, -1)  # alpha_n short
        if family == "C" and n >= 2:
            link(n - 2, n - 1, -1, -2)  # alpha_n long
    elif family == "D":
        for i in range(n - 3):
            link(i, i + 1)
        link(n - 3, n - 2)
        link(n - 3, n - 1)
    elif family == "E":
        # chain 1-3-4-5-6(-7-8), node 2 hangs off 4
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        for x, y in zip(chain, chain[1:]):
            link(x, y)
        link(1, 3)
    elif family == "F":
        link(0, 1)
        link(1, 2, -2, -1)  # alpha_1, alpha_2 long; alpha_3, alpha_4 short
        link(2, 3)
    elif family == "G":
        link(0, 1, -1, -3)  # alpha_1 short, alpha_2 long
    return a


@dataclass(frozen=True)
class Triangle:
    """Unordered triple of root indices with zero coordinate sum."""

    indices: Tuple[int, int, int]

    def __iter__(self):
        return iter(self.indices)


@dataclass(frozen=True)
class RootSubset:
    """Subset of the roots of a parent system, with closure flags."""

    parent: "RootSystem"
    members: FrozenSet[int]
    closed: bool
    symmetric: bool


class RootSystem:
    """Immutable root-system data for one simple type."""

    def __init__(self, family: str, rank: int):
        if not _valid_type(family, rank):
            raise ValueError(f"invalid simple type {family}{rank}")
        self.family = family
        self.rank = rank
        self.cartan_matrix = cartan_matrix(family, rank)
        self.simple_roots: List[Coeffs] = [
            tuple(1 if j == i else 0 for j in range(rank)) for i in range(rank)
        ]
        self._norms = self._compute_norms()
        pos = self._generate_positive()
        pos.sort(key=lambda v: (sum(v), v))
        self.positive_roots: List[Coeffs] = pos
        self.n_pos = len(pos)
        self.roots: List[Coeffs] = pos + [tuple(-x for x in v) for v in pos]
        self._index: Dict[Coeffs, int] = {v: i for i, v in enumerate(self.roots)}
        self.positive_set = frozenset(range(self.n_pos))
        expected = _CLASSICAL_COUNTS[family](rank)
        if len(self.roots) != expected:
            raise AssertionError(
                f"{family}{rank}: generated {len(self.roots)} roots, "
                f"expected {expected}"
            )
        # highest root is the unique positive root of maximal height
        self.highest_root: Coeffs = pos[-1]
        self.lowest_root_coeffs: Coeffs = tuple(-x for x in self.highest_root)
        # Dynkin labels a_1..a_n (a_0 = 1 for the lowest root itself)
        self.labels: Coeffs = self.highest_root
        self.inner_product = [
            [self._norms[j] * self.cartan_matrix[i][j] for j in range(rank)]
            for i in range(rank)
        ]
        self._triangles: Optional[List[Triangle]] = None

    # -- construction internals ---------------------------------------------

    def _compute_norms(self):
        """norms[i] = (alpha_i, alpha_i)/2, normalized so long roots have 2."""
        n = self.rank
        a = self.cartan_matrix
        norms = [None] * n
        norms[0] = _mpq(1)
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and a[i][j] != 0 and norms[j] is None:
                    norms[j] = norms[i] * a[j][i] / a[i][j]
                    stack.append(j)
        top = max(norms)
        return [x / top for x in norms]

    def _pairing(self, v: Coeffs, i: int) -> int:
        """<v, alpha_i^vee> for v in root coordinates."""
        a = self.cartan_matrix
        return sum(v[k] * a[k][i] for k in range(self.rank) if v[k])

    def _generate_positive(self) -> List[Coeffs]:
        seen = set(self.simple_roots)
        frontier = list(self.simple_roots)
        while frontier:
            new: List[Coeffs] = []
            for beta in frontier:
                for i in range(self.rank):
                    c = self._pairing(beta, i)
                    p = 0
                    down = list(beta)
                    while True:
                        down[i] -= 1
                        t = tuple(down)
                        if t in seen or tuple(-x for x in t) in seen:
                            p += 1
                        else:
                            break
                    if p - c > 0:
                        up = list(beta)
                        up[i] += 1
                        t = tuple(up)
                        if t not in seen:
                            seen.add(t)
                            new.append(t)
            frontier = new
        return list(seen)

    # -- basic queries --------------------------------------------------------

    def __repr__(self) -> str:
        return f"RootSystem({self.family}{self.rank})"

    @property
    def tag(self) -> str:
        return f"{self.family}{self.rank}"

    def index_of(self, coeffs: Sequence[int]) -> int:
        return self._index[tuple(coeffs)]

    def is_root(self, coeffs: Sequence[int]) -> bool:
        return tuple(coeffs) in self._index

    def negative_of(self, idx: int) -> int:
        return idx + self.n_pos if idx < self.n_pos else idx - self.n_pos

    def is_positive(self, idx: int) -> bool:
        return idx < self.n_pos

    def pos_class(self, idx: int) -> int:
        """Positive representative index of the +/- class of a root."""
        return idx if idx < self.n_pos else idx - self.n_pos

    def height(self, idx: int) -> int:
        return sum(self.roots[idx])

    def inner(self, u: Sequence[int], v: Sequence[int]):
        s = _mpq(0)
        ip = self.inner_product
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    if vj:
                        s += ui * vj * ip[i][j]
        return s

    def norm2(self, idx: int):
        v = self.roots[idx]
        return self.inner(v, v)

    def cartan_pairing(self, idx: int, i: int) -> int:
        """<root_idx, alpha_i^vee>; always one of 0, +-1, +-2, +-3."""
        return self._pairing(self.roots[idx], i)

    def root_sum(self, i: int, j: int) -> Optional[int]:
        """Index of roots[i] + roots[j] if that is a root, else None."""
        s = tuple(x + y for x, y in zip(self.roots[i], self.roots[j]))
        return self._index.get(s)

    def simple_indices(self) -> List[int]:
        return [self._index[v] for v in self.simple_roots]

    # -- combinatorics ----------------------------------------------------------

    def triangles(self) -> List[Triangle]:
        """All unordered root triples summing to zero, deduplicated."""
        if self._triangles is None:
            out = []
            n = len(self.roots)
            for i in range(n):
                vi = self.roots[i]
                for j in range(i + 1, n):
                    vj = self.roots[j]
                    s = tuple(-x - y for x, y in zip(vi, vj))
                    k = self._index.get(s)
                    if k is not None and k > j:
                        out.append(Triangle((i, j, k)))
            self._triangles = out
        return self._triangles

    def chain_decomposition(self, idx: int) -> List[int]:
        """Write a positive root as an ordered sum of simple roots with every
        partial sum a root; returns the list of simple-root indices."""
        if not self.is_positive(idx):
            raise ValueError("chain decomposition expects a positive root")
        beta = self.roots[idx]
        if sum(beta) == 1:
            return [idx]
        for i in range(self.rank):
            if beta[i] == 0:
                continue
            if self.inner(beta, self.simple_roots[i]) <= 0:
                continue
            down = list(beta)
            down[i] -= 1
            t = tuple(down)
            if t in self._index and sum(t) > 0:
                return self.chain_decomposition(self._index[t]) + [
                    self._index[self.simple_roots[i]]
                ]
        raise AssertionError("no descent found; root system corrupt")

    def subset(self, members) -> RootSubset:
        mem = frozenset(int(m) for m in members)
        return RootSubset(self, mem, *self._closure_flags(mem))

    def _closure_flags(self, members: FrozenSet[int]) -> Tuple[bool, bool]:
        symmetric = all(self.negative_of(m) in members for m in members)
        closed = True
        for i in members:
            for j in members:
                if i < j:
                    k = self.root_sum(i, j)
                    if k is not None and k not in members:
                        closed = False
                        break
            if not closed:
                break
        return closed, symmetric

    def levi_subset(self, b0: Sequence[int]) -> RootSubset:
        """All roots supported on the simple-root subset b0 (0-based)."""
        b0s = set(b0)
        if not b0s.issubset(range(self.rank)):
            raise ValueError("b0 must be a set of simple-root positions")
        members = frozenset(
            i for i, v in enumerate(self.roots)
            if all(c == 0 or k in b0s for k, c in enumerate(v))
        )
        return self.subset(members)

    # -- epsilon coordinates (classical families, display/aliasing only) -------

    def epsilon_dim(self) -> int:
        if self.family == "A":
            return self.rank + 1
        if self.family in ("B", "C", "D"):
            return self.rank
        raise ValueError(f"no epsilon coordinates for {self.tag}")

    def epsilon_of(self, idx: int) -> Tuple[int, ...]:
        """Integer epsilon-coordinates of a root (2*eps_i shows as a 2)."""
        n = self.rank
        dim = self.epsilon_dim()
        basis = []
        for i in range(n):
            e = [0] * dim
            if self.family == "A":
                e[i], e[i + 1] = 1, -1
            elif self.family == "B":
                if i < n - 1:
                    e[i], e[i + 1] = 1, -1
                else:
                    e[i] = 1
            elif self.family == "C":
                if i < n - 1:
                    e[i], e[i + 1] = 1, -1
                else:
                    e[i] = 2
            elif self.family == "D":
                if i < n - 1:
                    e[i], e[i + 1] = 1, -1
                else:
                    e[n - 2], e[n - 1] = 1, 1
            basis.append(e)
        v = self.roots[idx]
        out = [0] * dim
        for i, c in enumerate(v):
            if c:
                for k in range(dim):
                    out[k] += c * basis[i][k]
        return tuple(out)


def check_closed_symmetric(subset: RootSubset) -> Tuple[bool, bool]:
    """Recompute (closed, symmetric) for a subset by exhaustive check."""
    return subset.parent._closure_flags(subset.members)


def automorphism_order(rs: RootSystem, s: Sequence[int]) -> int:
    """Order m = sum a_k s_k of the inner automorphism of type (s_0..s_n; 1);
    a_0 = 1 and a_1..a_n are the coefficients of the highest root."""
    if len(s) != rs.rank + 1:
        raise ValueError("type vector must have rank+1 entries (s_0..s_n)")
    if any(x < 0 for x in s):
        raise ValueError("type entries must be nonnegative")
    from math import gcd
    g = 0
    for x in s:
        g = gcd(g, x)
    if g != 1:
        raise ValueError("type entries must have gcd 1")
    return s[0] + sum(rs.labels[l] * s[l + 1] for l in range(rs.rank))


def sigma_weight(rs: RootSystem, s: Sequence[int], root_idx: int) -> int:
    """Integer weight sum_l b_l s_l of a root under the model automorphism of
    type (s_0..s_n; 1); the eigenvalue on g_root is exp(2 pi i w / m)."""
    v = rs.roots[root_idx]
    return sum(v[l] * s[l + 1] for l in range(rs.rank) if v[l])


@lru_cache(maxsize=None)
def build_root_system(family: str, rank: int) -> RootSystem:
    """Construct (and cache) the root system of a valid simple type."""
    return RootSystem(family, rank)


def from_tag(tag: str) -> RootSystem:
    """Parse string tags like "A2", "B3", "E7"."""
    tag = tag.strip().upper()
    if len(tag) < 2 or tag[0] not in "ABCDEFG" or not tag[1:].isdigit():
        raise ValueError(f"bad root-system tag {tag!r}")
    return build_root_system(tag[0], int(tag[1:]))
