"""Perfect complexes over the path algebra of 1 -> 2 -> ... -> n.

A term of a complex is a tuple of projective indices (i stands for
P_i = Interval(i, n)).  Hom(P_i, P_j) is one-dimensional when j <= i and zero
otherwise, and every nonzero map is the inclusion P_i -> P_j, so maps between
sums of projectives are plain scalar matrices whose support respects that
mask, and composition is matrix multiplication.

Differentials are cohomological: d^k maps degree k to degree k + 1.  The
stalk of a module M with shift s has its homology in degree -s, so X[1] in
the usual notation is shift +1 here.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .errors import InputError
from .repkernel import (
    Interval,
    QuiverRep,
    decompose_with_generators,
    ext_dim,
    hom_dim,
    parse_interval,
)


# ---------------------------------------------------------------- labels


@total_ordering
@dataclass(frozen=True)
class ShiftedInterval:
    interval: Interval
    shift: int = 0

    def sort_key(self):
        return (self.shift, self.interval.a, self.interval.b)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def shifted(self, k: int) -> "ShiftedInterval":
        return ShiftedInterval(self.interval, self.shift + k)

    def label(self, n: int) -> str:
        base = self.interval.name(n)
        return base if self.shift == 0 else f"{base}[{self.shift}]"

    def k0(self, n: int) -> Tuple[int, ...]:
        sign = -1 if self.shift % 2 else 1
        return tuple(sign * d for d in self.interval.dim_vector(n))


_LABEL_RE = re.compile(r"^\s*([A-Za-z][A-Za-z0-9_]*)\s*(?:\[\s*(-?\d+)\s*\])?\s*$")


def parse_label(label: str, n: int) -> ShiftedInterval:
    m = _LABEL_RE.match(label)
    if not m:
        raise InputError(f"cannot parse label {label!r}")
    shift = int(m.group(2)) if m.group(2) is not None else 0
    return ShiftedInterval(parse_interval(m.group(1), n), shift)


def hom_shift_dim(x: ShiftedInterval, y: ShiftedInterval, t: int = 0) -> int:
    """dim Hom(x, y[t]) in the bounded derived category (hereditary case)."""
    k = y.shift + t - x.shift
    if k == 0:
        return hom_dim(x.interval, y.interval)
    if k == 1:
        return ext_dim(x.interval, y.interval)
    return 0


# ---------------------------------------------------------------- complexes


def _mask(src: Sequence[int], tgt: Sequence[int]) -> np.ndarray:
    return np.array([[t <= s for s in src] for t in tgt], dtype=bool).reshape(len(tgt), len(src))


@dataclass
class PerfectComplex:
    n: int
    terms: Dict[int, Tuple[int, ...]] = field(default_factory=dict)
    diffs: Dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {int(d): tuple(t) for d, t in self.terms.items() if len(t)}
        clean = {}
        for d, m in self.diffs.items():
            m = np.asarray(m, dtype=np.int64).reshape(len(self.term(d + 1)), len(self.term(d)))
            if m.size and m.any():
                clean[int(d)] = m
        self.diffs = clean

    def term(self, d: int) -> Tuple[int, ...]:
        return self.terms.get(d, ())

    def diff(self, d: int) -> np.ndarray:
        m = self.diffs.get(d)
        if m is None:
            return el.zeros(len(self.term(d + 1)), len(self.term(d)))
        return m

    @property
    def degrees(self) -> List[int]:
        return sorted(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def rank_total(self) -> int:
        return sum(len(t) for t in self.terms.values())

    def check(self, p: Optional[int] = None) -> None:
        for d, m in self.diffs.items():
            if (m[~_mask(self.term(d), self.term(d + 1))] != 0).any():
                raise InputError(f"differential in degree {d} has entries outside Hom(P_i, P_j)")
        for d in self.degrees:
            if el.matmul(self.diff(d + 1), self.diff(d), p).any():
                raise InputError(f"d o d != 0 at degree {d}")

    def shift(self, k: int, p: Optional[int] = None) -> "PerfectComplex":
        """X[k]: degree d of the result is degree d + k of X; differential times (-1)^k."""
        p = el._p(p)
        sign = -1 if k % 2 else 1
        return PerfectComplex(
            self.n,
            {d - k: t for d, t in self.terms.items()},
            {d - k: np.mod(sign * m, p) for d, m in self.diffs.items()},
        )

    def identity(self) -> "ChainMap":
        return ChainMap(self, self, {d: el.identity(len(t)) for d, t in self.terms.items()})

    def equals(self, other: "PerfectComplex") -> bool:
        if self.terms != other.terms:
            return False
        return all(np.array_equal(self.diff(d), other.diff(d)) for d in self.degrees)


def zero_complex(n: int) -> PerfectComplex:
    return PerfectComplex(n)


def direct_sum_complexes(parts: Sequence[PerfectComplex], n: int):
    """Direct sum plus, for each part, a map degree -> list of positions in the sum."""
    degrees = sorted({d for c in parts for d in c.terms})
    terms: Dict[int, List[int]] = {d: [] for d in degrees}
    positions: List[Dict[int, List[int]]] = []
    for c in parts:
        pos = {}
        for d in degrees:
            start = len(terms[d])
            terms[d].extend(c.term(d))
            pos[d] = list(range(start, len(terms[d])))
        positions.append(pos)
    diffs = {}
    for d in degrees:
        m = el.zeros(len(terms.get(d + 1, [])), len(terms[d]))
        for c, pos in zip(parts, positions):
            if pos.get(d) and pos.get(d + 1):
                m[np.ix_(pos[d + 1], pos[d])] = c.diff(d)
        diffs[d] = m
    total = PerfectComplex(n, {d: tuple(t) for d, t in terms.items()}, diffs)
    return total, positions


@dataclass
class ChainMap:
    source: PerfectComplex
    target: PerfectComplex
    comps: Dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for d, m in self.comps.items():
            m = np.asarray(m, dtype=np.int64).reshape(len(self.target.term(d)), len(self.source.term(d)))
            if m.size and m.any():
                clean[int(d)] = m
        self.comps = clean

    def comp(self, d: int) -> np.ndarray:
        m = self.comps.get(d)
        if m is None:
            return el.zeros(len(self.target.term(d)), len(self.source.term(d)))
        return m

    def degrees(self) -> List[int]:
        return sorted(set(self.source.terms) | set(self.target.terms))

    def is_chain_map(self, p: Optional[int] = None) -> bool:
        for d in self.degrees():
            if (self.comp(d)[~_mask(self.source.term(d), self.target.term(d))] != 0).any():
                return False
            lhs = el.matmul(self.target.diff(d), self.comp(d), p)
            rhs = el.matmul(self.comp(d + 1), self.source.diff(d), p)
            if not np.array_equal(np.mod(lhs - rhs, el._p(p)), el.zeros(*lhs.shape)):
                return False
        return True

    def compose(self, before: "ChainMap", p: Optional[int] = None) -> "ChainMap":
        """self o before."""
        degs = sorted(set(before.source.terms) & set(self.target.terms))
        return ChainMap(before.source, self.target,
                        {d: el.matmul(self.comp(d), before.comp(d), p) for d in degs})

    def scaled(self, c: int, p: Optional[int] = None) -> "ChainMap":
        p = el._p(p)
        return ChainMap(self.source, self.target, {d: np.mod(c * m, p) for d, m in self.comps.items()})

    def plus(self, other: "ChainMap", p: Optional[int] = None) -> "ChainMap":
        p = el._p(p)
        out = {}
        for d in set(self.comps) | set(other.comps):
            out[d] = np.mod(self.comp(d) + other.comp(d), p)
        return ChainMap(self.source, self.target, out)


def zero_map(source: PerfectComplex, target: PerfectComplex) -> ChainMap:
    return ChainMap(source, target, {})


# ---------------------------------------------------------------- constructions


def stalk(x: Interval, shift: int, n: int) -> PerfectComplex:
    """Minimal projective resolution of x with homology in degree -shift."""
    top = -shift
    if x.b == n:
        return PerfectComplex(n, {top: (x.a,)})
    return PerfectComplex(n, {top - 1: (x.b + 1,), top: (x.a,)}, {top - 1: [[1]]})


def cone(f: ChainMap, p: Optional[int] = None) -> PerfectComplex:
    """Mapping cone: degree d holds X^{d+1} (+) Y^d, differential [[-d_X, 0], [f, d_Y]]."""
    p = el._p(p)
    X, Y = f.source, f.target
    degs = sorted({d - 1 for d in X.terms} | set(Y.terms))
    terms, diffs = {}, {}
    for d in degs:
        terms[d] = X.term(d + 1) + Y.term(d)
    for d in degs:
        xs, ys = len(X.term(d + 1)), len(Y.term(d))
        xt, yt = len(X.term(d + 2)), len(Y.term(d + 1))
        m = el.zeros(xt + yt, xs + ys)
        m[:xt, :xs] = np.mod(-X.diff(d + 1), p)
        m[xt:, :xs] = f.comp(d + 1)
        m[xt:, xs:] = Y.diff(d)
        diffs[d] = m
    return PerfectComplex(X.n, terms, diffs)


def cone_inclusion(f: ChainMap, c: PerfectComplex) -> ChainMap:
    """Y -> cone(f)."""
    X, Y = f.source, f.target
    comps = {}
    for d in Y.terms:
        xs = len(X.term(d + 1))
        m = el.zeros(len(c.term(d)), len(Y.term(d)))
        m[xs:, :] = el.identity(len(Y.term(d)))
        comps[d] = m
    return ChainMap(Y, c, comps)


def cone_homotopy(f: ChainMap, c: PerfectComplex) -> Dict[int, np.ndarray]:
    """h with (Y -> cone f) o f = d h + h d; h^d maps X^d into cone degree d - 1."""
    X = f.source
    out = {}
    for d in X.terms:
        m = el.zeros(len(c.term(d - 1)), len(X.term(d)))
        m[:len(X.term(d)), :] = el.identity(len(X.term(d)))
        out[d] = m
    return out


def cocone(g: ChainMap, p: Optional[int] = None) -> PerfectComplex:
    """Degree d holds C^d (+) D^{d-1}, differential [[d_C, 0], [g, -d_D]]."""
    p = el._p(p)
    C, D = g.source, g.target
    degs = sorted(set(C.terms) | {d + 1 for d in D.terms})
    terms, diffs = {}, {}
    for d in degs:
        terms[d] = C.term(d) + D.term(d - 1)
    for d in degs:
        cs, ds = len(C.term(d)), len(D.term(d - 1))
        ct, dt = len(C.term(d + 1)), len(D.term(d))
        m = el.zeros(ct + dt, cs + ds)
        m[:ct, :cs] = C.diff(d)
        m[ct:, :cs] = g.comp(d)
        m[ct:, cs:] = np.mod(-D.diff(d - 1), p)
        diffs[d] = m
    return PerfectComplex(C.n, terms, diffs)


def cocone_projection(g: ChainMap, k: PerfectComplex) -> ChainMap:
    """cocone(g) -> C."""
    C = g.source
    comps = {}
    for d in C.terms:
        m = el.zeros(len(C.term(d)), len(k.term(d)))
        m[:, :len(C.term(d))] = el.identity(len(C.term(d)))
        comps[d] = m
    return ChainMap(k, C, comps)


def cocone_homotopy(g: ChainMap, k: PerfectComplex) -> Dict[int, np.ndarray]:
    """h with g o (cocone g -> C) = d h + h d; h^d maps cocone degree d into D^{d-1}."""
    C, D = g.source, g.target
    out = {}
    for d in k.terms:
        cs, ds = len(C.term(d)), len(D.term(d - 1))
        if ds == 0:
            continue
        m = el.zeros(ds, cs + ds)
        m[:, cs:] = el.identity(ds)
        out[d] = m
    return out


# ---------------------------------------------------------------- minimization


def _find_unit(c: PerfectComplex):
    for d in c.degrees:
        m = c.diff(d)
        src, tgt = c.term(d), c.term(d + 1)
        for i, si in enumerate(src):
            for j, tj in enumerate(tgt):
                if si == tj and m[j, i] != 0:
                    return d, i, j
    return None


def _eliminate(c: PerfectComplex, d: int, i: int, j: int, p: int):
    """Gaussian elimination of the unit entry d^d[j, i].

    Returns the reduced complex and the homotopy equivalences
    f: c -> reduced and g: reduced -> c.
    """
    src, tgt = c.term(d), c.term(d + 1)
    B = [k for k in range(len(src)) if k != i]
    C = [k for k in range(len(tgt)) if k != j]
    D = c.diff(d)
    phi_inv = el.inv_scalar(D[j, i], p)
    delta = D[np.ix_([j], B)]
    gamma = D[np.ix_(C, [i])]
    eps = D[np.ix_(C, B)]
    new_terms = dict(c.terms)
    new_terms[d] = tuple(src[k] for k in B)
    new_terms[d + 1] = tuple(tgt[k] for k in C)
    new_diffs = {e: m for e, m in c.diffs.items() if e not in (d - 1, d, d + 1)}
    new_diffs[d] = np.mod(eps - phi_inv * (gamma @ delta), p)
    new_diffs[d - 1] = c.diff(d - 1)[B, :]
    new_diffs[d + 1] = c.diff(d + 1)[:, C]
    red = PerfectComplex(c.n, new_terms, new_diffs)

    f_comps, g_comps = {}, {}
    for e, t in c.terms.items():
        if e not in (d, d + 1):
            f_comps[e] = el.identity(len(t))
            g_comps[e] = el.identity(len(t))
    fd = el.zeros(len(B), len(src))
    fd[:, B] = el.identity(len(B))
    f_comps[d] = fd
    fd1 = el.zeros(len(C), len(tgt))
    fd1[:, C] = el.identity(len(C))
    fd1[:, j] = np.mod(-phi_inv * gamma[:, 0], p)
    f_comps[d + 1] = fd1
    gd = el.zeros(len(src), len(B))
    gd[B, :] = el.identity(len(B))
    gd[i, :] = np.mod(-phi_inv * delta[0, :], p)
    g_comps[d] = gd
    gd1 = el.zeros(len(tgt), len(C))
    gd1[C, :] = el.identity(len(C))
    g_comps[d + 1] = gd1
    return red, ChainMap(c, red, f_comps), ChainMap(red, c, g_comps)


def minimize_tracked(c: PerfectComplex, p: Optional[int] = None):
    """Minimal model of c with homotopy equivalences f: c -> min, g: min -> c."""
    p = el._p(p)
    cur = c
    f = c.identity()
    g = c.identity()
    while True:
        hit = _find_unit(cur)
        if hit is None:
            return cur, f, g
        red, f1, g1 = _eliminate(cur, *hit, p)
        f = f1.compose(f, p)
        g = g.compose(g1, p)
        cur = red


def minimize(c: PerfectComplex, p: Optional[int] = None) -> PerfectComplex:
    return minimize_tracked(c, p)[0]


# ---------------------------------------------------------------- homology


def _vertex_cols(term: Sequence[int], v: int) -> List[int]:
    return [k for k, t in enumerate(term) if t <= v]


def homology_rep(c: PerfectComplex, d: int, p: Optional[int] = None):
    """H^d(c) as a representation, plus per-vertex cycle bases lifting it.

    Evaluating a sum of projectives at vertex v keeps the summands P_i with
    i <= v, and the arrow v -> v + 1 acts as the coordinate inclusion.
    """
    p = el._p(p)
    n = c.n
    term = c.term(d)
    size = len(term)
    bases = []
    for v in range(1, n + 1):
        cols = _vertex_cols(term, v)
        dv = c.diff(d)[:, cols] if cols else el.zeros(len(c.term(d + 1)), 0)
        cyc = []
        for vec in el.kernel_basis(dv, p):
            full = np.zeros(size, dtype=np.int64)
            full[cols] = vec
            cyc.append(full)
        prev_cols = _vertex_cols(c.term(d - 1), v)
        bnd = c.diff(d - 1)[:, prev_cols] if prev_cols else el.zeros(size, 0)
        cycm = np.stack(cyc, axis=1) if cyc else el.zeros(size, 0)
        keep = el.column_space_complement(bnd, cycm, p)
        bases.append((cycm[:, keep], bnd))
    dims = tuple(b[0].shape[1] for b in bases)
    maps = []
    for v in range(n - 1):
        hb, _ = bases[v]
        hb1, bnd1 = bases[v + 1]
        full = np.concatenate([hb1, bnd1], axis=1)
        m = el.zeros(dims[v + 1], dims[v])
        for k in range(dims[v]):
            x = el.solve(full, hb[:, k], p)
            m[:, k] = x[:dims[v + 1]]
        maps.append(m)
    return QuiverRep(n, dims, maps), [b[0] for b in bases]


def homology_dims(c: PerfectComplex, p: Optional[int] = None) -> Dict[int, Tuple[int, ...]]:
    out = {}
    for d in c.degrees:
        rep, _ = homology_rep(c, d, p)
        if any(rep.dims):
            out[d] = rep.dims
    return out


def decompose_perfect(c: PerfectComplex, p: Optional[int] = None) -> List[ShiftedInterval]:
    """Shifted homology summands; hereditary algebras split every complex this way."""
    out = []
    for d in c.degrees:
        rep, _ = homology_rep(c, d, p)
        for iv, _, _ in decompose_with_generators(rep, p):
            out.append(ShiftedInterval(iv, -d))
    return sorted(out)


def canonical_complex(objs: Sequence[ShiftedInterval], n: int):
    return direct_sum_complexes([stalk(o.interval, o.shift, n) for o in objs], n)


@dataclass
class NormalForm:
    """Explicit homotopy equivalence between a complex and a sum of stalks."""

    objects: List[ShiftedInterval]
    canonical: PerfectComplex
    alpha: ChainMap  # canonical -> complex
    beta: ChainMap  # complex -> canonical


def normalize(c: PerfectComplex, p: Optional[int] = None) -> NormalForm:
    p = el._p(p)
    n = c.n
    cm, f, g = minimize_tracked(c, p)
    gens = []
    for d in cm.degrees:
        rep, hbases = homology_rep(cm, d, p)
        for iv, birth, vec in decompose_with_generators(rep, p):
            z = np.mod(hbases[birth - 1] @ vec, p) if vec.size else np.zeros(len(cm.term(d)), dtype=np.int64)
            gens.append((ShiftedInterval(iv, -d), z))
    gens.sort(key=lambda t: t[0].sort_key())
    objs = [o for o, _ in gens]
    canon, positions = canonical_complex(objs, n)
    comps = {d: el.zeros(len(cm.term(d)), len(canon.term(d))) for d in canon.terms}
    for (o, z), pos in zip(gens, positions):
        top = -o.shift
        comps[top][:, pos[top][0]] = z
        if o.interval.b < n:
            cols = _vertex_cols(cm.term(top - 1), o.interval.b + 1)
            w = el.solve(cm.diff(top - 1)[:, cols], z, p)
            if w is None:
                raise RuntimeError("homology generator does not die where its interval ends")
            comps[top - 1][cols, pos[top - 1][0]] = w
    alpha_m = ChainMap(canon, cm, comps)
    beta_comps = {}
    for d in set(canon.terms) | set(cm.terms):
        a = alpha_m.comp(d)
        if a.shape[0] != a.shape[1]:
            raise RuntimeError(f"minimal model and stalk sum differ in degree {d}")
        beta_comps[d] = el.inverse(a, p)
    beta_m = ChainMap(cm, canon, beta_comps)
    return NormalForm(objs, canon, g.compose(alpha_m, p), beta_m.compose(f, p))


# ---------------------------------------------------------------- Hom spaces


class HomSpace:
    """Chain maps x -> y modulo null-homotopic ones, with a fixed echelon basis."""

    def __init__(self, x: PerfectComplex, y: PerfectComplex, p: Optional[int] = None):
        self.p = p = el._p(p)
        self.x, self.y = x, y
        self.vars: List[Tuple[int, int, int]] = []
        for d in x.degrees:
            for i, si in enumerate(x.term(d)):
                for j, tj in enumerate(y.term(d)):
                    if tj <= si:
                        self.vars.append((d, j, i))
        self.index = {v: k for k, v in enumerate(self.vars)}
        nv = len(self.vars)

        rows = []
        for d in sorted(set(x.terms) | {e - 1 for e in y.terms}):
            tgt, src = len(y.term(d + 1)), len(x.term(d))
            if tgt and src:
                rows.append((d, tgt, src))
        nrows = sum(t * s for _, t, s in rows)
        cons = el.zeros(nrows, nv)
        for col, (d, j, i) in enumerate(self.vars):
            e = el.zeros(len(y.term(d)), len(x.term(d)))
            e[j, i] = 1
            r0 = 0
            for (dd, t, s) in rows:
                blk = el.zeros(t, s)
                if dd == d:
                    blk = blk + y.diff(d) @ e
                if dd == d - 1:
                    blk = blk - e @ x.diff(d - 1)
                cons[r0:r0 + t * s, col] = np.mod(blk.reshape(-1), p)
                r0 += t * s
        self.cycles = el.kernel_matrix(cons, p) if nv else el.zeros(0, 0)

        hcols = []
        for d in x.degrees:
            for i, si in enumerate(x.term(d)):
                for j, tj in enumerate(y.term(d - 1)):
                    if tj <= si:
                        vec = np.zeros(nv, dtype=np.int64)
                        # d_Y h^d lands in degree d, h^d d_X lands in degree d - 1
                        e = el.zeros(len(y.term(d - 1)), len(x.term(d)))
                        e[j, i] = 1
                        a = y.diff(d - 1) @ e
                        b = e @ x.diff(d - 1)
                        for (r, c_), val in np.ndenumerate(a):
                            if val % p:
                                vec[self.index[(d, r, c_)]] += val
                        for (r, c_), val in np.ndenumerate(b):
                            if val % p:
                                vec[self.index[(d - 1, r, c_)]] += val
                        hcols.append(np.mod(vec, p))
        self.homotopies = np.stack(hcols, axis=1) if hcols else el.zeros(nv, 0)
        keep = el.column_space_complement(self.homotopies, self.cycles, p) if nv else []
        self.basis_vectors = self.cycles[:, keep] if nv else el.zeros(0, 0)
        self._solver = np.concatenate([self.basis_vectors, self.homotopies], axis=1) if nv else None

    @property
    def dim(self) -> int:
        return self.basis_vectors.shape[1] if self.vars else 0

    def to_map(self, vec) -> ChainMap:
        comps: Dict[int, np.ndarray] = {}
        for k, (d, j, i) in enumerate(self.vars):
            if vec[k] % self.p:
                if d not in comps:
                    comps[d] = el.zeros(len(self.y.term(d)), len(self.x.term(d)))
                comps[d][j, i] = vec[k] % self.p
        return ChainMap(self.x, self.y, comps)

    def basis(self) -> List[ChainMap]:
        return [self.to_map(self.basis_vectors[:, k]) for k in range(self.dim)]

    def vectorize(self, f: ChainMap) -> np.ndarray:
        vec = np.zeros(len(self.vars), dtype=np.int64)
        for d in f.comps:
            m = f.comp(d)
            for (j, i), val in np.ndenumerate(m):
                if val % self.p:
                    k = self.index.get((d, j, i))
                    if k is None:
                        raise InputError("map has a component outside Hom(P_i, P_j)")
                    vec[k] = val % self.p
        return vec

    def coords(self, f: ChainMap) -> np.ndarray:
        """Coordinates of the homotopy class of f in the fixed basis."""
        if not self.vars:
            return np.zeros(0, dtype=np.int64)
        x = el.solve(self._solver, self.vectorize(f), self.p)
        if x is None:
            raise InputError("not a chain map")
        return x[:self.dim]

    def is_null_homotopic(self, f: ChainMap) -> bool:
        return not self.coords(f).any()


def chain_hom_space(x: PerfectComplex, y: PerfectComplex, p: Optional[int] = None) -> List[ChainMap]:
    """Representatives of a basis of Hom_K(x, y)."""
    return HomSpace(x, y, p).basis()


def homotopic(f: ChainMap, g: ChainMap, p: Optional[int] = None) -> bool:
    hs = HomSpace(f.source, f.target, p)
    return hs.is_null_homotopic(f.plus(g.scaled(-1, p), p))


# ---------------------------------------------------------------- coefficient engine


class DerivedCategory:
    """Bounded derived category of the A_n path algebra in coefficient form.

    Objects are sequences of ShiftedInterval; a morphism between two such
    sums is a matrix whose (j, i) entry is the coefficient of the fixed basis
    map from summand i to summand j (all these Hom spaces are at most
    one-dimensional).  Basis maps are the echelon representatives of
    `HomSpace`, except that the basis endomorphism of an indecomposable is
    its identity.  Shifting a pair of objects does not change the echelon
    basis, so coefficient matrices and composition constants are invariant
    under the shift functor.
    """

    def __init__(self, n: int, p: Optional[int] = None):
        if n < 1:
            raise InputError("n must be at least 1")
        self.n = n
        self.p = el._p(p)
        self._stalks: Dict[ShiftedInterval, PerfectComplex] = {}
        self._spaces: Dict[Tuple[ShiftedInterval, ShiftedInterval], HomSpace] = {}
        self._basis: Dict[Tuple[ShiftedInterval, ShiftedInterval], Optional[ChainMap]] = {}
        self._consts: Dict[tuple, int] = {}
        self._canon: Dict[tuple, tuple] = {}

    # -- objects and basis maps

    def stalk(self, o: ShiftedInterval) -> PerfectComplex:
        c = self._stalks.get(o)
        if c is None:
            c = self._stalks[o] = stalk(o.interval, o.shift, self.n)
        return c

    def hom_dim(self, x: ShiftedInterval, y: ShiftedInterval, t: int = 0) -> int:
        return hom_shift_dim(x, y, t)

    def space(self, x: ShiftedInterval, y: ShiftedInterval) -> HomSpace:
        key = (x, y)
        hs = self._spaces.get(key)
        if hs is None:
            hs = self._spaces[key] = HomSpace(self.stalk(x), self.stalk(y), self.p)
        return hs

    def basis_map(self, x: ShiftedInterval, y: ShiftedInterval) -> Optional[ChainMap]:
        key = (x, y)
        if key in self._basis:
            return self._basis[key]
        if x == y:
            b = self.stalk(x).identity()
        else:
            hs = self.space(x, y)
            if hs.dim > 1:
                raise RuntimeError(f"Hom({x}, {y}) has dimension {hs.dim}")
            b = hs.basis()[0] if hs.dim else None
        self._basis[key] = b
        return b

    def coord(self, x: ShiftedInterval, y: ShiftedInterval, f: ChainMap) -> int:
        """Coefficient of f with respect to basis_map(x, y)."""
        hs = self.space(x, y)
        if hs.dim == 0:
            return 0
        ref = hs.coords(self.basis_map(x, y))[0]
        return int(hs.coords(f)[0] * el.inv_scalar(ref, self.p) % self.p)

    def const(self, x: ShiftedInterval, y: ShiftedInterval, z: ShiftedInterval) -> int:
        """basis(y, z) o basis(x, y) = const * basis(x, z)."""
        if not (hom_shift_dim(x, y) and hom_shift_dim(y, z) and hom_shift_dim(x, z)):
            return 0
        s = x.shift
        key = (x.interval, y.interval, z.interval, y.shift - s, z.shift - s)
        c = self._consts.get(key)
        if c is None:
            x0, y0, z0 = x.shifted(-s), y.shifted(-s), z.shifted(-s)
            comp = self.basis_map(y0, z0).compose(self.basis_map(x0, y0), self.p)
            c = self._consts[key] = self.coord(x0, z0, comp)
        return c

    # -- sums of stalks

    def canonical(self, objs: Sequence[ShiftedInterval]):
        key = tuple(objs)
        hit = self._canon.get(key)
        if hit is None:
            hit = self._canon[key] = canonical_complex(list(objs), self.n)
        return hit

    def embed(self, src: Sequence[ShiftedInterval], tgt: Sequence[ShiftedInterval], coeffs) -> ChainMap:
        """Chain map between canonical sums with the given coefficient matrix."""
        cs, ps = self.canonical(src)
        ct, pt = self.canonical(tgt)
        coeffs = np.asarray(coeffs, dtype=np.int64).reshape(len(tgt), len(src))
        comps = {d: el.zeros(len(ct.term(d)), len(cs.term(d))) for d in cs.terms}
        for j, y in enumerate(tgt):
            for i, x in enumerate(src):
                c = int(coeffs[j, i]) % self.p
                if not c:
                    continue
                b = self.basis_map(x, y)
                if b is None:
                    raise InputError(f"nonzero coefficient on zero Hom space {x} -> {y}")
                for d, m in b.comps.items():
                    comps[d][np.ix_(pt[j][d], ps[i][d])] += c * m
        return ChainMap(cs, ct, {d: np.mod(m, self.p) for d, m in comps.items()})

    def coefficients(self, src: Sequence[ShiftedInterval], tgt: Sequence[ShiftedInterval], f: ChainMap) -> np.ndarray:
        _, ps = self.canonical(src)
        _, pt = self.canonical(tgt)
        out = el.zeros(len(tgt), len(src))
        for j, y in enumerate(tgt):
            for i, x in enumerate(src):
                if not hom_shift_dim(x, y):
                    continue
                sx, sy = self.stalk(x), self.stalk(y)
                block = {d: f.comp(d)[np.ix_(pt[j][d], ps[i][d])] for d in sx.terms if d in sy.terms}
                out[j, i] = self.coord(x, y, ChainMap(sx, sy, block))
        return out

    def compose(self, g, f, src, mid, tgt) -> np.ndarray:
        """Coefficients of g o f for f: src -> mid and g: mid -> tgt."""
        f = np.asarray(f, dtype=np.int64).reshape(len(mid), len(src))
        g = np.asarray(g, dtype=np.int64).reshape(len(tgt), len(mid))
        out = el.zeros(len(tgt), len(src))
        for k, z in enumerate(tgt):
            for i, x in enumerate(src):
                acc = 0
                for j, y in enumerate(mid):
                    if g[k, j] and f[j, i]:
                        acc += int(g[k, j]) * int(f[j, i]) * self.const(x, y, z)
                out[k, i] = acc % self.p
        return out

    # -- triangles

    def cone_objects(self, src, tgt, coeffs) -> List[ShiftedInterval]:
        return decompose_perfect(cone(self.embed(src, tgt, coeffs), self.p), self.p)

    def cocone_objects(self, src, tgt, coeffs) -> List[ShiftedInterval]:
        return decompose_perfect(cocone(self.embed(src, tgt, coeffs), self.p), self.p)

    def cone_triangle(self, src, tgt, coeffs):
        """(C, g) with src -> tgt -> C the cone triangle and g: tgt -> C."""
        f = self.embed(src, tgt, coeffs)
        c = cone(f, self.p)
        nf = normalize(c, self.p)
        g = nf.beta.compose(cone_inclusion(f, c), self.p)
        return nf.objects, self.coefficients(tgt, nf.objects, g)

    def cocone_triangle(self, src, tgt, coeffs):
        """(A, h) with A -> src -> tgt the cocone triangle and h: A -> src."""
        f = self.embed(src, tgt, coeffs)
        k = cocone(f, self.p)
        nf = normalize(k, self.p)
        h = cocone_projection(f, k).compose(nf.alpha, self.p)
        return nf.objects, self.coefficients(nf.objects, src, h)

    def realize_extension(self, c_objs, a_objs, delta):
        """Realize delta in Hom(c, a[1]) as a triangle a -x-> b -y-> c -delta-> a[1].

        Returns (b, x, y) with b a sorted object list and x, y coefficient
        matrices.
        """
        a1 = [o.shifted(1) for o in a_objs]
        dch = self.embed(c_objs, a1, delta)
        k = cocone(dch, self.p)
        nf = normalize(k, self.p)
        sa, _ = self.canonical(a_objs)
        csz = {d: len(dch.source.term(d)) for d in k.terms}
        comps = {}
        for d, t in sa.terms.items():
            m = el.zeros(len(k.term(d)), len(t))
            sign = -1 if d % 2 else 1
            m[csz[d]:, :] = np.mod(sign * el.identity(len(t)), self.p)
            comps[d] = m
        x_ch = ChainMap(sa, k, comps)
        y_ch = cocone_projection(dch, k)
        x = self.coefficients(a_objs, nf.objects, nf.beta.compose(x_ch, self.p))
        y = self.coefficients(nf.objects, c_objs, y_ch.compose(nf.alpha, self.p))
        return nf.objects, x, y

    def factor_inflation(self, src, tgt, coeffs, torsion_part):
        """Factor f: src -> tgt through K using torsion triangles of cone(f).

        `torsion_part(o)` returns (F_objs, y) where T -> o -y-> F is the
        torsion triangle of the indecomposable o.  Returns (K, l, r) with
        r o l = f exactly on coefficients.
        """
        p = self.p
        f = self.embed(src, tgt, coeffs)
        c = cone(f, p)
        nf = normalize(c, p)
        f_objs, blocks = [], []
        for o in nf.objects:
            fo, y = torsion_part(o)
            blocks.append((len(f_objs), fo, y))
            f_objs.extend(fo)
        pi = el.zeros(len(f_objs), len(nf.objects))
        for k, (start, fo, y) in enumerate(blocks):
            pi[start:start + len(fo), k] = np.asarray(y, dtype=np.int64).reshape(len(fo), 1)[:, 0]
        pi_ch = self.embed(nf.objects, f_objs, pi)
        pb = pi_ch.compose(nf.beta, p)
        h = pb.compose(cone_inclusion(f, c), p)
        hom = cone_homotopy(f, c)
        kk = cocone(h, p)
        X = f.source
        l_comps = {}
        for d in X.terms:
            ys = len(f.target.term(d))
            m = el.zeros(len(kk.term(d)), len(X.term(d)))
            m[:ys, :] = f.comp(d)
            if d in hom:
                s = el.matmul(pb.comp(d - 1), hom[d], p)
                m[ys:, :] = s
            l_comps[d] = m
        l_ch = ChainMap(X, kk, l_comps)
        if not l_ch.is_chain_map(p):
            raise RuntimeError("lifted map is not a chain map")
        r_ch = cocone_projection(h, kk)
        nk = normalize(kk, p)
        l = self.coefficients(src, nk.objects, nk.beta.compose(l_ch, p))
        r = self.coefficients(nk.objects, tgt, r_ch.compose(nk.alpha, p))
        return nk.objects, l, r

    def factor_deflation(self, src, tgt, coeffs, torsion_part):
        """Factor f: src -> tgt as g2 o g1 using torsion triangles of cocone(f).

        `torsion_part(o)` returns (T_objs, x) where T -x-> o -> F is the
        torsion triangle of the indecomposable o.  Returns (K, g1, g2) with
        cocone(g1) built from the T parts and cocone(g2) from the F parts.
        """
        p = self.p
        f = self.embed(src, tgt, coeffs)
        a = cocone(f, p)
        na = normalize(a, p)
        t_objs, blocks = [], []
        for o in na.objects:
            to, x = torsion_part(o)
            blocks.append((len(t_objs), to, x))
            t_objs.extend(to)
        inc = el.zeros(len(na.objects), len(t_objs))
        for k, (start, to, x) in enumerate(blocks):
            inc[k, start:start + len(to)] = np.asarray(x, dtype=np.int64).reshape(1, len(to))[0]
        inc_ch = self.embed(t_objs, na.objects, inc)
        ai = na.alpha.compose(inc_ch, p)
        u = cocone_projection(f, a).compose(ai, p)
        hom = cocone_homotopy(f, a)
        kk = cone(u, p)
        g1_ch = cone_inclusion(u, kk)
        st = u.source
        Y = f.target
        g2_comps = {}
        for d in kk.terms:
            ts = len(st.term(d + 1))
            m = el.zeros(len(Y.term(d)), len(kk.term(d)))
            if ts and (d + 1) in hom:
                m[:, :ts] = el.matmul(hom[d + 1], ai.comp(d + 1), p)
            m[:, ts:] = f.comp(d)
            g2_comps[d] = m
        g2_ch = ChainMap(kk, Y, g2_comps)
        if not g2_ch.is_chain_map(p):
            raise RuntimeError("induced map out of the cone is not a chain map")
        nk = normalize(kk, p)
        g1 = self.coefficients(src, nk.objects, nk.beta.compose(g1_ch, p))
        g2 = self.coefficients(nk.objects, tgt, g2_ch.compose(nk.alpha, p))
        return nk.objects, g1, g2
