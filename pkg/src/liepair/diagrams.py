"""Pairs diagrams, admissible operators, times-selection rules and labels.

A pairs diagram assigns an unordered pair of times {t1,t2} to every +/- class
of roots; valid diagrams obey the two times-selection rules (TSR) on every
zero-sum root triangle.  Class II diagrams carry some triangle whose three
pairs coincide and are two-element; everything else is Class I.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .bilie import (BiLieStructure, CheckResult, NotRegularError, Operator,
                    eigen_h_spaces, root_grading_data, root_pair_times)
from .linalg import Vec
from .rootsys import RootSubset, RootSystem
from .scalars import ZERO, Q

Pair = Tuple[Q, Q]  # canonically sorted by sort_key


def make_pair(t1: Q, t2: Q) -> Pair:
    return (t1, t2) if t1.sort_key() <= t2.sort_key() else (t2, t1)


@dataclass
class PairsDiagram:
    """Assignment of unordered time pairs to +/- classes of roots.

    virtual[c] marks per class which pair elements cannot be read off the
    admissible operator (0, 1 or both positions of the sorted pair).
    """

    root_system: RootSystem
    assignment: Dict[int, Pair]
    virtual: Dict[int, Tuple[bool, bool]] = field(default_factory=dict)

    def __post_init__(self):
        want = set(range(self.root_system.n_pos))
        if set(self.assignment) != want:
            raise ValueError("diagram must assign a pair to every +/- class")
        self.assignment = {c: make_pair(*p) for c, p in self.assignment.items()}

    def pair(self, root_idx: int) -> Pair:
        return self.assignment[self.root_system.pos_class(root_idx)]

    def time_set(self) -> List[Q]:
        out: List[Q] = []
        for p in self.assignment.values():
            for t in p:
                if t not in out:
                    out.append(t)
        return sorted(out, key=lambda q: q.sort_key())

    def to_json(self) -> dict:
        rs = self.root_system
        out = {}
        for c in sorted(self.assignment):
            t1, t2 = self.assignment[c]
            v = self.virtual.get(c, (False, False))
            key = ",".join(str(x) for x in rs.roots[c])
            out[key] = [t1.to_str(), t2.to_str(), [v[0], v[1]]]
        return out


def _tsr_triangle(pa: Pair, pb: Pair, pc: Pair) -> Optional[int]:
    """None if the triple violates both rules, else 1 or 2 for the rule."""
    if pa == pb == pc and pa[0] != pa[1]:
        return 2
    # TSR 1: orient each pair so that consecutive entries chain up
    for x, y in (pa, pa[::-1]):
        for u, v in (pb, pb[::-1]):
            if y != u:
                continue
            for p, q in (pc, pc[::-1]):
                if v == p and q == x:
                    return 1
    return None


def validate_tsr(d: PairsDiagram) -> CheckResult:
    """Every triangle must satisfy TSR 1 or TSR 2."""
    rs = d.root_system
    for tri in rs.triangles():
        i, j, k = tri.indices
        rule = _tsr_triangle(d.pair(i), d.pair(j), d.pair(k))
        if rule is None:
            return CheckResult("tsr", False, f"triangle {tri.indices}")
    return CheckResult("tsr", True)


def classify(d: PairsDiagram) -> str:
    """"II" iff some triangle carries three equal two-element pairs."""
    rs = d.root_system
    for tri in rs.triangles():
        i, j, k = tri.indices
        pa, pb, pc = d.pair(i), d.pair(j), d.pair(k)
        if pa == pb == pc and pa[0] != pa[1]:
            return "II"
    return "I"


def dichotomy_check(d: PairsDiagram) -> CheckResult:
    """Class II forces exactly two times in the whole diagram."""
    if classify(d) == "II" and len(d.time_set()) != 2:
        return CheckResult("dichotomy", False,
                           f"Class II with {len(d.time_set())} times")
    return CheckResult("dichotomy", True)


def enumerate_diagrams(rs: RootSystem, candidate_times: Sequence[Q]
                       ) -> List[PairsDiagram]:
    """All TSR-valid diagrams over the candidate times (exhaustive, with a
    combinatorial guard).  Backtracks on triangles as soon as their three
    classes are assigned."""
    if len(candidate_times) > 4 or rs.rank > 3:
        raise ValueError("enumeration guard: need <= 4 times and rank <= 3")
    times = []
    for t in candidate_times:
        if t not in times:
            times.append(t)
    pairs = [make_pair(a, b) for a, b in
             combinations_with_replacement(times, 2)]
    classes = list(range(rs.n_pos))
    tri_by_last: Dict[int, List[Tuple[int, int, int]]] = {c: [] for c in classes}
    for tri in rs.triangles():
        cls = tuple(sorted(rs.pos_class(i) for i in tri.indices))
        tri_by_last[cls[2]].append(cls)
    out: List[PairsDiagram] = []
    chosen: Dict[int, Pair] = {}

    def backtrack(pos: int):
        if pos == len(classes):
            out.append(PairsDiagram(rs, dict(chosen)))
            return
        c = classes[pos]
        for p in pairs:
            chosen[c] = p
            if all(_tsr_triangle(chosen[a], chosen[b], chosen[cc]) is not None
                   for a, b, cc in tri_by_last[c]):
                backtrack(pos + 1)
        del chosen[c]

    backtrack(0)
    return out


# -- admissible operators --------------------------------------------------------


@dataclass
class AdmissibleOperator:
    """Diagonalizable operator on the Cartan subalgebra with eigen data.

    eigen_data maps eigenvalue -> basis of its eigenspace (vectors over the
    Cartan coordinates).
    """

    root_system: RootSystem
    matrix: linalg.Mat                      # rank x rank, Cartan coordinates
    eigen_data: Dict[Q, List[Vec]]

    def eigenvalues(self) -> List[Q]:
        return sorted(self.eigen_data, key=lambda q: q.sort_key())


def admissibility_check(u: AdmissibleOperator, algebra) -> CheckResult:
    """Def of R-admissibility: every H_a is an eigenvector or a sum of two
    eigenvectors with distinct eigenvalues."""
    rs = u.root_system
    rank = rs.rank
    spaces = {t: linalg.Subspace(rank, [linalg.dense_of(v, rank) for v in vs])
              for t, vs in u.eigen_data.items()}
    if sum(sp.dim for sp in spaces.values()) != rank:
        return CheckResult("admissible", False, "operator not diagonalizable")
    for a in range(rs.n_pos):
        h = linalg.dense_of(algebra.h_dual(a), rank)
        # project h onto each eigenspace by solving in the eigenbasis
        comps = _eigen_components(u, h)
        nonzero = [t for t, v in comps.items() if any(v)]
        if len(nonzero) > 2:
            return CheckResult("admissible", False, f"root {a} splits into "
                               f"{len(nonzero)} eigenvectors")
    return CheckResult("admissible", True)


def _eigen_components(u: AdmissibleOperator, h: List[Q]) -> Dict[Q, List[Q]]:
    """Decompose a Cartan vector along the eigenspaces of U."""
    rank = len(h)
    basis: List[List[Q]] = []
    owners: List[Q] = []
    for t in u.eigenvalues():
        for v in u.eigen_data[t]:
            basis.append(linalg.dense_of(v, rank))
            owners.append(t)
    mat = [[basis[j][i] for j in range(len(basis))] for i in range(rank)]
    sol = linalg.solve(mat, h)
    if sol is None:
        raise ValueError("eigenbasis does not span; operator data corrupt")
    comps: Dict[Q, List[Q]] = {t: [ZERO] * rank for t in u.eigen_data}
    for j, c in enumerate(sol):
        if c:
            t = owners[j]
            comps[t] = [x + c * y for x, y in zip(comps[t], basis[j])]
    return comps


def extract_admissible_pair(s: BiLieStructure
                            ) -> Tuple[AdmissibleOperator, PairsDiagram]:
    """Read (U, diagram) off a regular structure: U = W|h, pairs from the
    per-root quadratics, virtual flags for eigenvalues invisible in U."""
    data = root_grading_data(s.wno)
    if data is None:
        raise NotRegularError("structure is not regular")
    _, wh = data
    pairs = root_pair_times(s)
    candidates: List[Q] = []
    for p in pairs.values():
        for t in p:
            if t not in candidates:
                candidates.append(t)
    eigen = eigen_h_spaces(s, candidates)
    rs = s.algebra.root_system
    u = AdmissibleOperator(rs, wh, eigen)
    adm = admissibility_check(u, s.algebra)
    if not adm.passed:
        raise NotRegularError(f"W|h is not R-admissible: {adm.witness}")
    assignment: Dict[int, Pair] = {}
    virtual: Dict[int, Tuple[bool, bool]] = {}
    for a in range(rs.n_pos):
        p = make_pair(*pairs[a])
        assignment[a] = p
        h = linalg.dense_of(s.algebra.h_dual(a), rs.rank)
        comps = _eigen_components(u, h)
        visible = {t for t, v in comps.items() if any(v)}
        if not visible.issubset(set(p)):
            raise NotRegularError(
                f"eigenvalues of U at root {a} escape its time pair")
        if len(visible) == 2:
            virtual[a] = (False, False)
        else:
            # one eigenvalue visible; the other pair element is virtual
            t = next(iter(visible))
            if p[0] == p[1]:
                virtual[a] = (False, False)
            elif p[0] == t:
                virtual[a] = (False, True)
            else:
                virtual[a] = (True, False)
    d = PairsDiagram(rs, assignment, virtual)
    tsr = validate_tsr(d)
    if not tsr.passed:
        raise NotRegularError(f"extracted diagram violates TSR: {tsr.witness}")
    return u, d


def lemma_10_10_check(s: BiLieStructure) -> CheckResult:
    """The three quadratic time identities on every triangle."""
    pairs = root_pair_times(s)
    rs = s.algebra.root_system
    for tri in rs.triangles():
        i, j, k = tri.indices
        t1, t2 = pairs[rs.pos_class(i)]
        t3, t4 = pairs[rs.pos_class(j)]
        t5, t6 = pairs[rs.pos_class(k)]
        e1 = (t5 + t6) * (t1 + t2 - t3 - t4) + (
            t3 * t3 + t4 * t4 - t1 * t1 - t2 * t2)
        e2 = (t1 + t2) * (t3 + t4 - t5 - t6) + (
            t5 * t5 + t6 * t6 - t3 * t3 - t4 * t4)
        e3 = (t3 + t4) * (t5 + t6 - t1 - t2) + (
            t1 * t1 + t2 * t2 - t5 * t5 - t6 * t6)
        if e1 or e2 or e3:
            return CheckResult("lemma_10_10", False,
                               f"triangle {tri.indices}")
    return CheckResult("lemma_10_10", True)


def lemma_10_10_values(pa: Pair, pb: Pair, pc: Pair) -> bool:
    """The same identities on raw sextuples (for counterexample tests)."""
    t1, t2 = pa
    t3, t4 = pb
    t5, t6 = pc
    e1 = (t5 + t6) * (t1 + t2 - t3 - t4) + (
        t3 * t3 + t4 * t4 - t1 * t1 - t2 * t2)
    e2 = (t1 + t2) * (t3 + t4 - t5 - t6) + (
        t5 * t5 + t6 * t6 - t3 * t3 - t4 * t4)
    e3 = (t3 + t4) * (t5 + t6 - t1 - t2) + (
        t1 * t1 + t2 * t2 - t5 * t5 - t6 * t6)
    return not (e1 or e2 or e3)


# -- triangle rules and label systems ----------------------------------------------


@dataclass
class LabelSystem:
    """Labels 0/+1/-1 per triangle for an antisymmetric diagonal operator."""

    a: Q
    labels: Dict[Tuple[int, int, int], int]
    subject: RootSubset

    def opposite(self) -> "LabelSystem":
        return LabelSystem(self.a, {k: -v for k, v in self.labels.items()},
                           self.subject)

    def to_json(self) -> dict:
        return {
            "a": self.a.to_str(),
            "labels": {
                ",".join(map(str, k)): v for k, v in sorted(self.labels.items())
            },
        }


def kappa_of_operator(s_op: Operator) -> Dict[int, Q]:
    """Per-root scalars of an operator preserving root spaces; requires the
    Cartan block to vanish (operator 'on h-perp')."""
    data = root_grading_data(s_op)
    if data is None:
        raise ValueError("operator does not preserve the root grading")
    kappa, hblock = data
    if any(any(row) for row in hblock):
        raise ValueError("operator must vanish on the Cartan subalgebra")
    return kappa


def triangle_rule_check(s_op: Operator, a: Q,
                        subject: RootSubset) -> Tuple[CheckResult, Optional[LabelSystem]]:
    """Def of the a-triangle rule subject to a closed symmetric root set:
    kappa vanishes on the subject set, is odd under negation, sums to 0 on
    triangles meeting the subject set and to +-a on triangles outside it."""
    rs = s_op.algebra.root_system
    if not (subject.closed and subject.symmetric):
        return CheckResult("triangle_rule", False,
                           "subject set is not closed symmetric"), None
    kappa = kappa_of_operator(s_op)
    for r in range(rs.n_pos):
        if kappa[r] + kappa[rs.negative_of(r)]:
            return CheckResult("triangle_rule", False,
                               f"kappa not antisymmetric at root {r}"), None
    for r in subject.members:
        if kappa[r]:
            return CheckResult("triangle_rule", False,
                               f"kappa nonzero on subject root {r}"), None
    labels: Dict[Tuple[int, int, int], int] = {}
    for tri in rs.triangles():
        i, j, k = tri.indices
        total = kappa[i] + kappa[j] + kappa[k]
        outside = sum(1 for x in (i, j, k) if x not in subject.members)
        if outside < 3:
            if total:
                return CheckResult("triangle_rule", False,
                                   f"nonzero sum on subject triangle "
                                   f"{tri.indices}"), None
            labels[tri.indices] = 0
        else:
            if total == a and a:
                labels[tri.indices] = 1
            elif total == -a and a:
                labels[tri.indices] = -1
            elif not total and not a:
                labels[tri.indices] = 0
            else:
                return CheckResult(
                    "triangle_rule", False,
                    f"sum {total} not in {{0,+a,-a}} on {tri.indices}"), None
    return CheckResult("triangle_rule", True), LabelSystem(a, labels, subject)


def standard_labels(rs: RootSystem, subject: RootSubset, a: Q,
                    positive_label: int = 1) -> LabelSystem:
    """The label system constant on positivity classes: outside triangles
    with two positive roots get positive_label, their mirrors the opposite,
    triangles meeting the subject set 0.  Both orientations produce valid
    operators (they amount to swapping the two times)."""
    if positive_label not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    labels: Dict[Tuple[int, int, int], int] = {}
    for tri in rs.triangles():
        i, j, k = tri.indices
        if any(x in subject.members for x in (i, j, k)):
            labels[tri.indices] = 0
        else:
            pos = sum(1 for x in (i, j, k) if rs.is_positive(x))
            labels[tri.indices] = positive_label if pos == 2 else -positive_label
    return LabelSystem(a, labels, subject)
