"""s-torsion pairs: verification, torsion triangles and enumeration."""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InputError, PreconditionError
from .excat import ExtTriangle, Morphism, Presentation, format_expr, identity_morphism


@dataclass(frozen=True)
class SubcatPair:
    """(T, F) given by sets of indecomposable labels; add-closure implied."""

    t_set: FrozenSet[str]
    f_set: FrozenSet[str]

    @classmethod
    def of(cls, t: Iterable[str], f: Iterable[str]) -> "SubcatPair":
        return cls(frozenset(t), frozenset(f))

    def swapped(self) -> "SubcatPair":
        return SubcatPair(self.f_set, self.t_set)

    def to_json(self, p: Optional[Presentation] = None) -> dict:
        order = p.sort_labels if p is not None else sorted
        return {"T": list(order(self.t_set)), "F": list(order(self.f_set))}


def pair_from_json(p: Presentation, doc) -> SubcatPair:
    if not isinstance(doc, dict) or set(doc) - {"T", "F", "schema"} or "T" not in doc or "F" not in doc:
        raise InputError('a pair document looks like {"T": [...], "F": [...]}')
    return SubcatPair.of(p.resolve_all(doc["T"]), p.resolve_all(doc["F"]))


def check_pair(p: Presentation, pair: SubcatPair) -> SubcatPair:
    return SubcatPair.of(p.resolve_all(pair.t_set), p.resolve_all(pair.f_set))


# ---------------------------------------------------------------- decompositions


def _multisets(labels: Sequence[str], dims: Dict[str, int], budget: int):
    """Multisets over labels (as sorted tuples) with total dimension <= budget."""
    out = [()]

    def rec(start, cur, left):
        for i in range(start, len(labels)):
            d = dims[labels[i]]
            if d <= left:
                nxt = cur + (labels[i],)
                out.append(nxt)
                rec(i, nxt, left - d)

    rec(0, (), budget)
    return out


def _k0(p: Presentation, expr: Sequence[str]):
    model = p.model
    tot = None
    for l in expr:
        v = np.array(model.k0(l), dtype=np.int64)
        tot = v if tot is None else tot + v
    return tot


def _projective_vectors(k: int, q: int):
    """Nonzero vectors of F_q^k up to scalars (first nonzero entry 1), in lex order."""
    for lead in range(k):
        for rest in itertools.product(range(q), repeat=k - lead - 1):
            v = [0] * lead + [1] + list(rest)
            yield v


@dataclass(frozen=True)
class Decomposition:
    t: Tuple[str, ...]
    f: Tuple[str, ...]
    delta: Tuple[int, ...]


class StarIndex:
    """All triangles U -> x -> V with x indecomposable, in canonical order.

    Any triangle T -> x -> F can be cut down (by splitting off summands that
    map to zero) to one where T -> x is right minimal and x -> F is left
    minimal, with the discarded pieces still in add T and add F.  Hom spaces
    between indecomposables here are at most one-dimensional, so such a T is
    multiplicity free with every summand mapping nonzero to x, and dually
    for F.  The default "exact" search therefore ranges over subsets of
    {t : Hom(t, x) != 0} and {f : Hom(x, f) != 0} and is complete.

    The "cap" search instead ranges over multisets of total dimension at
    most dim(x) + cap_extra; it is kept for comparison only.
    """

    def __init__(self, p: Presentation, mode: str = "exact", cap_extra: int = 0):
        if mode not in ("exact", "cap"):
            raise InputError(f"unknown search mode {mode!r}")
        self.p = p
        self.model = p.require_model("T * F membership")
        self.mode = mode
        self.cap_extra = cap_extra
        self._entries: Dict[str, List[Decomposition]] = {}
        self._triangles: Dict[Tuple[str, Decomposition], ExtTriangle] = {}

    def _pieces(self, x: str):
        p, model = self.p, self.model
        labels = list(p.labels)
        if self.mode == "exact":
            hx = [l for l in labels if model.hom(l, x) > 0]
            xh = [l for l in labels if model.hom(x, l) > 0]
            subsets = lambda ls: [c for r in range(len(ls) + 1) for c in itertools.combinations(ls, r)]
            return subsets(hx), subsets(xh), None
        dims = {l: model.dim(l) for l in labels}
        ms = _multisets(labels, dims, model.dim(x) + self.cap_extra)
        return ms, ms, (dims, model.dim(x) + self.cap_extra)

    def entries(self, x: str) -> List[Decomposition]:
        hit = self._entries.get(x)
        if hit is not None:
            return hit
        p = self.p
        target = np.array(self.model.k0(x), dtype=np.int64)
        us, vs, budget = self._pieces(x)
        k0s = {}
        for m in set(us) | set(vs):
            k0s[m] = _k0(p, m) if m else np.zeros_like(target)
        found: List[Tuple[tuple, Decomposition]] = []
        for u in us:
            for v in vs:
                if budget is not None:
                    dims, cap = budget
                    if sum(dims[l] for l in u) + sum(dims[l] for l in v) > cap:
                        continue
                if not np.array_equal(k0s[u] + k0s[v], target):
                    continue
                if not u or not v:
                    if (u or v) == (x,):
                        found.append(((0,), Decomposition(u, v, ())))
                    continue
                slots = [(j, k) for j, a in enumerate(u) for k, c in enumerate(v) if p.E[(c, a)]]
                if not slots:
                    continue
                for vec in _projective_vectors(len(slots), p.field_char):
                    delta = np.zeros((len(u), len(v)), dtype=np.int64)
                    for (j, k), val in zip(slots, vec):
                        delta[j, k] = val
                    t = self.model.realize(v, u, delta)
                    if tuple(t.b) == (x,):
                        d = Decomposition(u, v, tuple(delta.reshape(-1).tolist()))
                        self._triangles[(x, d)] = t
                        found.append(((1,), d))
        order = {l: i for i, l in enumerate(p.labels)}
        found.sort(key=lambda e: (e[0], len(e[1].t) + len(e[1].f), [order[l] for l in e[1].t], [order[l] for l in e[1].f], e[1].delta))
        hit = self._entries[x] = [d for _, d in found]
        return hit

    def triangle(self, x: str, d: Decomposition) -> ExtTriangle:
        t = self._triangles.get((x, d))
        if t is not None:
            return t
        if not d.t:
            return ExtTriangle((), (x,), (x,), Morphism((), (x,), np.zeros((1, 0), dtype=np.int64)), identity_morphism((x,)), np.zeros((0, 1), dtype=np.int64))
        return ExtTriangle((x,), (x,), (), identity_morphism((x,)), Morphism((x,), (), np.zeros((0, 1), dtype=np.int64)), np.zeros((1, 0), dtype=np.int64))

    def first(self, x: str, t_set, f_set) -> Optional[Decomposition]:
        for d in self.entries(x):
            if all(l in t_set for l in d.t) and all(l in f_set for l in d.f):
                return d
        return None

    def all_matching(self, x: str, t_set, f_set) -> List[Decomposition]:
        return [d for d in self.entries(x) if all(l in t_set for l in d.t) and all(l in f_set for l in d.f)]


_INDEX: Dict[tuple, StarIndex] = {}


def star_index(p: Presentation, mode: str = "exact", cap_extra: int = 0) -> StarIndex:
    key = (id(p), mode, cap_extra)
    idx = _INDEX.get(key)
    if idx is None or idx.p is not p:
        idx = _INDEX[key] = StarIndex(p, mode, cap_extra)
    return idx


def in_star(p: Presentation, x: str, pair: SubcatPair, mode: str = "exact", cap_extra: int = 0) -> Optional[ExtTriangle]:
    """First triangle T -> x -> F with T in add(t_set), F in add(f_set), or None."""
    x = p.resolve(x)
    pair = check_pair(p, pair)
    idx = star_index(p, mode, cap_extra)
    d = idx.first(x, pair.t_set, pair.f_set)
    return None if d is None else idx.triangle(x, d)


def torsion_triangle(p: Presentation, x: str, pair: SubcatPair) -> ExtTriangle:
    t = in_star(p, x, pair)
    if t is None:
        raise PreconditionError(f"{x} is not in T * F: not a torsion object for this pair")
    return t


# ---------------------------------------------------------------- verification


def _vanishing_witness(table, t_set, f_set, labels):
    for x in labels:
        if x not in t_set:
            continue
        for y in labels:
            if y in f_set and table[(x, y)]:
                return [x, y]
    return None


def verify_s_torsion(p: Presentation, pair: SubcatPair, triangles: bool = False, mode: str = "exact", cap_extra: int = 0) -> dict:
    """The three s-torsion conditions.

    cond1: every indecomposable lies in T * F (needs a realization model),
    cond2: Hom(T, F) = 0, cond3: E^-1(T, F) = 0.  Each condition is
    "pass", "fail" or "unchecked"; failures carry a witness.
    """
    pair = check_pair(p, pair)
    rep: dict = {"pair": pair.to_json(p)}
    w2 = _vanishing_witness(p.hom, pair.t_set, pair.f_set, p.labels)
    w3 = _vanishing_witness(p.Eneg, pair.t_set, pair.f_set, p.labels)
    rep["cond2"] = {"outcome": "fail" if w2 else "pass", "witness": w2}
    rep["cond3"] = {"outcome": "fail" if w3 else "pass", "witness": w3}
    if not p.full:
        rep["cond1"] = {"outcome": "unchecked", "witness": None, "reason": "dims-only presentation"}
    else:
        idx = star_index(p, mode, cap_extra)
        missing = []
        tris = {}
        for x in p.labels:
            d = idx.first(x, pair.t_set, pair.f_set)
            if d is None:
                missing.append(x)
            elif triangles:
                t = idx.triangle(x, d)
                tris[x] = {"T": list(d.t), "F": list(d.f), "delta": list(d.delta), "middle": list(t.b)}
        c1 = {"outcome": "fail" if missing else "pass", "witness": missing[0] if missing else None}
        if missing:
            c1["missing"] = missing
            if mode == "cap":
                c1["unchecked_at_cap"] = f"dim(x) + {cap_extra}"
        if triangles:
            c1["triangles"] = tris
        rep["cond1"] = c1
    rep["ok"] = all(rep[k]["outcome"] == "pass" for k in ("cond1", "cond2", "cond3"))
    return rep


def is_s_torsion(p: Presentation, pair: SubcatPair) -> bool:
    return verify_s_torsion(p, pair)["ok"]


# ---------------------------------------------------------------- enumeration


def _candidates(p: Presentation, t_set) -> FrozenSet[str]:
    return frozenset(y for y in p.labels if all(p.hom[(x, y)] == 0 and p.Eneg[(x, y)] == 0 for x in t_set))


def _cond1(p, idx, t_set, f_set) -> bool:
    if not p.full:
        return True
    return all(idx.first(x, t_set, f_set) is not None for x in p.labels)


def _pairs_for_t(p, idx, t_set) -> List[FrozenSet[str]]:
    """All F inside the candidate set for which (T, F) is an s-torsion pair.

    cond1 is monotone in F, so the valid sets form an up-set inside the
    candidate set; search downwards from it by single removals.
    """
    cand = _candidates(p, t_set)
    if not _cond1(p, idx, t_set, cand):
        return []
    seen = {cand}
    stack = [cand]
    out = []
    while stack:
        f = stack.pop()
        out.append(f)
        for y in f:
            g = f - {y}
            if g not in seen:
                seen.add(g)
                if _cond1(p, idx, t_set, g):
                    stack.append(g)
    return out


_WORKER_P: Optional[Presentation] = None


def _worker_init(doc, mode, cap_extra):
    global _WORKER_P
    from .excat import load_presentation

    _WORKER_P = load_presentation(doc)
    _WORKER_P._search = (mode, cap_extra)


def _worker_chunk(masks):
    p = _WORKER_P
    idx = star_index(p, *p._search)
    labels = p.labels
    out = []
    for mask in masks:
        t = frozenset(labels[i] for i in range(len(labels)) if mask >> i & 1)
        for f in _pairs_for_t(p, idx, t):
            out.append((sorted(t, key=p.index), sorted(f, key=p.index)))
    return out


def enumerate_s_torsion(p: Presentation, jobs: int = 1, mode: str = "exact", cap_extra: int = 0) -> List[SubcatPair]:
    """Every pair of label subsets satisfying the three conditions.

    Ordered lexicographically by the sorted index tuple of T, then of F.
    """
    labels = p.labels
    masks = list(range(1 << len(labels)))
    found = []
    if jobs > 1 and p.full and len(labels) > 6:
        from .excat import serialize_presentation

        doc = serialize_presentation(p)
        chunks = [masks[i::jobs * 4] for i in range(jobs * 4)]
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init, initargs=(doc, mode, cap_extra)) as ex:
            for part in ex.map(_worker_chunk, chunks):
                found.extend(part)
    else:
        idx = star_index(p, mode, cap_extra) if p.full else None
        for mask in masks:
            t = frozenset(labels[i] for i in range(len(labels)) if mask >> i & 1)
            for f in _pairs_for_t(p, idx, t):
                found.append((sorted(t, key=p.index), sorted(f, key=p.index)))
    key = lambda tf: ([p.index(l) for l in tf[0]], [p.index(l) for l in tf[1]])
    found.sort(key=key)
    return [SubcatPair.of(t, f) for t, f in found]


def describe_pair(p: Presentation, pair: SubcatPair) -> str:
    return f"T={{{', '.join(p.sort_labels(pair.t_set))}}} F={{{', '.join(p.sort_labels(pair.f_set))}}}"
