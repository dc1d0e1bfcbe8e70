"""(m+1)-term silting complexes over A_n and their s-torsion pairs."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .derived import PerfectComplex, ShiftedInterval, hom_shift_dim, parse_label, stalk
from .errors import InputError, PreconditionError
from .excat import Presentation, build_extended_category, parse_expr
from .repkernel import all_intervals, projective
from .torsion import SubcatPair, verify_s_torsion


@dataclass(frozen=True)
class SiltingCandidate:
    """Sum of shifted indecomposables, read as perfect complexes in degrees -m..0."""

    n: int
    m: int
    summands: Tuple[ShiftedInterval, ...]

    def __post_init__(self):
        for o in self.summands:
            c = self.complex_of(o)
            if c.degrees and (min(c.degrees) < -self.m or max(c.degrees) > 0):
                raise InputError(f"{o.label(self.n)} is not an {self.m + 1}-term complex")

    def complex_of(self, o: ShiftedInterval) -> PerfectComplex:
        return stalk(o.interval, o.shift, self.n)

    def complexes(self) -> List[PerfectComplex]:
        return [self.complex_of(o) for o in self.summands]

    def labels(self) -> List[str]:
        return [o.label(self.n) for o in self.summands]


def parse_candidate(text, n: int, m: int) -> SiltingCandidate:
    """'P3[1]+P1[1]+I1[1]' (or a label list) as a candidate."""
    return SiltingCandidate(n, m, tuple(parse_label(l, n) for l in parse_expr(text)))


def presilting_witness(c: SiltingCandidate) -> Optional[Tuple[str, str, int]]:
    """First (X, Y, i) with Hom(X, Y[i]) != 0 and 1 <= i <= m + 1, or None."""
    for x in c.summands:
        for y in c.summands:
            for i in range(1, c.m + 2):
                if hom_shift_dim(x, y, i):
                    return (x.label(c.n), y.label(c.n), i)
    return None


def is_presilting(c: SiltingCandidate) -> bool:
    return presilting_witness(c) is None


def is_silting(c: SiltingCandidate) -> bool:
    # generation is equivalent to having n non-isomorphic summands here
    return is_presilting(c) and len(set(c.summands)) == c.n


def _vanishes(c: SiltingCandidate, x: ShiftedInterval, shifts) -> bool:
    return all(hom_shift_dim(s, x, i) == 0 for s in c.summands for i in shifts)


def silted_pair(c: SiltingCandidate, p: Optional[Presentation] = None, check: bool = True) -> SubcatPair:
    """T = {X : Hom(P, X[i]) = 0, i > 0}, F = {X : Hom(P, X[1][i]) = 0, i < 0}.

    Hom between shifted intervals vanishes once the shift difference exceeds
    one, so the ranges 1..m+3 and -(m+3)..-1 already cover every i.
    """
    if not is_silting(c):
        raise PreconditionError("the candidate is not silting")
    if p is None:
        p = build_extended_category(c.n, c.m)
    model = p.require_model("silted_pair")
    reach = c.m + 3
    t_set, f_set = [], []
    for label in p.labels:
        x = model.obj(label)
        if _vanishes(c, x, range(1, reach + 1)):
            t_set.append(label)
        if _vanishes(c, x.shifted(1), range(-reach, 0)):
            f_set.append(label)
    pair = SubcatPair.of(t_set, f_set)
    if check and not verify_s_torsion(p, pair)["ok"]:
        raise RuntimeError("silted pair does not verify as an s-torsion pair")
    return pair


def candidate_objects(n: int, m: int) -> List[ShiftedInterval]:
    """Indecomposables of K^b(proj) living in degrees -m..0."""
    objs = [ShiftedInterval(iv, s) for s in range(m) for iv in all_intervals(n)]
    objs += [ShiftedInterval(projective(i, n), m) for i in range(1, n + 1)]
    return sorted(objs)


def enumerate_silting(n: int, m: int) -> List[SiltingCandidate]:
    """All basic (m+1)-term silting complexes, by exhaustive search."""
    out = []
    for combo in itertools.combinations(candidate_objects(n, m), n):
        c = SiltingCandidate(n, m, combo)
        if is_presilting(c):
            out.append(c)
    return out
