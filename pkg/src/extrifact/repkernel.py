"""Interval modules over the linearly oriented quiver 1 -> 2 -> ... -> n.

Closed-form Hom/Ext dimensions live next to explicit matrix models of the
same modules, so every formula here has a brute-force counterpart
(`rep_hom_oracle`, `rep_ext_oracle`) that shares no code with it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import total_ordering
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .errors import InputError


@total_ordering
@dataclass(frozen=True)
class Interval:
    """Indecomposable supported on vertices a..b with identity structure maps."""

    a: int
    b: int

    def __post_init__(self):
        if not (1 <= self.a <= self.b):
            raise InputError(f"invalid interval [{self.a},{self.b}]")

    def __lt__(self, other):
        return (self.a, self.b) < (other.a, other.b)

    @property
    def dim(self) -> int:
        return self.b - self.a + 1

    def dim_vector(self, n: int) -> Tuple[int, ...]:
        return tuple(1 if self.a <= v <= self.b else 0 for v in range(1, n + 1))

    def name(self, n: int) -> str:
        # priority P > I > S keeps the AR-quiver names P3, P2, P1, S2, I2, I1 for n = 3
        if self.b == n:
            return f"P{self.a}"
        if self.a == 1:
            return f"I{self.b}"
        if self.a == self.b:
            return f"S{self.a}"
        return f"M{self.a}_{self.b}"


def projective(i: int, n: int) -> Interval:
    return Interval(i, n)


def injective(i: int) -> Interval:
    return Interval(1, i)


def simple(i: int) -> Interval:
    return Interval(i, i)


def all_intervals(n: int) -> List[Interval]:
    return [Interval(a, b) for a in range(1, n + 1) for b in range(a, n + 1)]


def parse_interval(name: str, n: int) -> Interval:
    """Inverse of `Interval.name`; also accepts the aliases S_i, I_i, P_i for any i."""
    s = name.strip()
    try:
        if s.startswith("M"):
            a, b = s[1:].split("_")
            iv = Interval(int(a), int(b))
        elif s[0] == "P":
            iv = Interval(int(s[1:]), n)
        elif s[0] == "I":
            iv = Interval(1, int(s[1:]))
        elif s[0] == "S":
            iv = Interval(int(s[1:]), int(s[1:]))
        else:
            raise ValueError
    except (ValueError, IndexError):
        raise InputError(f"cannot parse module name {name!r}")
    if iv.b > n:
        raise InputError(f"module {name!r} does not exist for n={n}")
    return iv


# ---------------------------------------------------------------- closed forms


def hom_dim(x: Interval, y: Interval) -> int:
    return 1 if y.a <= x.a <= y.b <= x.b else 0


def ext_dim(x: Interval, y: Interval) -> int:
    """dim Ext^1(x, y).

    From the resolution 0 -> P_{b+1} -> P_a -> x -> 0, Ext^1(x, y) is the
    cokernel of y_a -> y_{b+1}; it is one-dimensional exactly when
    x.a < y.a <= x.b + 1 <= y.b.
    """
    return 1 if x.a < y.a <= x.b + 1 <= y.b else 0


def ext_middle(x: Interval, y: Interval) -> List[Interval]:
    """Middle term of the nonsplit extension 0 -> y -> E -> x -> 0."""
    if not ext_dim(x, y):
        raise InputError(f"Ext^1({x}, {y}) vanishes")
    mid = [Interval(x.a, y.b)]
    if y.a <= x.b:
        mid.append(Interval(y.a, x.b))
    return sorted(mid)


def euler_form(dx: Sequence[int], dy: Sequence[int]) -> int:
    n = len(dx)
    return sum(dx[i] * dy[i] for i in range(n)) - sum(dx[i] * dy[i + 1] for i in range(n - 1))


# ---------------------------------------------------------------- explicit reps


@dataclass
class QuiverRep:
    n: int
    dims: Tuple[int, ...]
    maps: List[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        self.dims = tuple(int(d) for d in self.dims)
        if len(self.dims) != self.n:
            raise InputError(f"need {self.n} dimensions, got {len(self.dims)}")
        if not self.maps:
            self.maps = [el.zeros(self.dims[i + 1], self.dims[i]) for i in range(self.n - 1)]
        if len(self.maps) != self.n - 1:
            raise InputError(f"need {self.n - 1} arrow maps, got {len(self.maps)}")
        fixed = []
        for i, m in enumerate(self.maps):
            m = np.asarray(m, dtype=np.int64).reshape(self.dims[i + 1], self.dims[i])
            fixed.append(m)
        self.maps = fixed

    @classmethod
    def from_interval(cls, iv: Interval, n: int, p: Optional[int] = None) -> "QuiverRep":
        dims = iv.dim_vector(n)
        maps = [el.as_matrix(np.ones((dims[i + 1], dims[i])), p) for i in range(n - 1)]
        return cls(n, dims, maps)

    @classmethod
    def zero(cls, n: int) -> "QuiverRep":
        return cls(n, (0,) * n)

    def path_map(self, a: int, c: int, p: Optional[int] = None) -> np.ndarray:
        """Composite structure map from vertex a to vertex c (1-based, a <= c)."""
        m = el.identity(self.dims[a - 1])
        for v in range(a, c):
            m = el.matmul(self.maps[v - 1], m, p)
        return m


def direct_sum(reps: Sequence[QuiverRep]) -> QuiverRep:
    if not reps:
        raise InputError("empty direct sum needs an explicit n")
    n = reps[0].n
    dims = tuple(sum(r.dims[v] for r in reps) for v in range(n))
    maps = []
    for i in range(n - 1):
        m = el.zeros(dims[i + 1], dims[i])
        r0 = c0 = 0
        for r in reps:
            m[r0:r0 + r.dims[i + 1], c0:c0 + r.dims[i]] = r.maps[i]
            r0 += r.dims[i + 1]
            c0 += r.dims[i]
        maps.append(m)
    return QuiverRep(n, dims, maps)


def _hom_system(x: QuiverRep, y: QuiverRep, p: Optional[int] = None):
    """Linear map sending (phi_v)_v to (y_alpha phi_v - phi_{v+1} x_alpha)_alpha.

    Variables are the entries of each phi_v (row-major, vertex order).
    """
    offsets = []
    total = 0
    for v in range(x.n):
        offsets.append(total)
        total += y.dims[v] * x.dims[v]
    rows = sum(y.dims[v + 1] * x.dims[v] for v in range(x.n - 1))
    sysm = el.zeros(rows, total)
    r0 = 0
    for v in range(x.n - 1):
        xv, yv, yw = x.dims[v], y.dims[v], y.dims[v + 1]
        xw = x.dims[v + 1]
        for var in range(yv * xv):
            i, j = divmod(var, xv)
            e = el.zeros(yv, xv)
            e[i, j] = 1
            img = el.matmul(y.maps[v], e, p)
            sysm[r0:r0 + yw * xv, offsets[v] + var] = img.reshape(-1)
        for var in range(yw * xw):
            i, j = divmod(var, xw)
            e = el.zeros(yw, xw)
            e[i, j] = 1
            img = el.matmul(e, x.maps[v], p)
            sysm[r0:r0 + yw * xv, offsets[v + 1] + var] -= img.reshape(-1)
        r0 += yw * xv
    return np.mod(sysm, el._p(p)), offsets


def rep_hom_oracle(x: QuiverRep, y: QuiverRep, p: Optional[int] = None) -> int:
    """dim Hom(x, y) from the commuting-square linear system."""
    if x.n != y.n:
        raise InputError("representations over different quivers")
    sysm, _ = _hom_system(x, y, p)
    return sysm.shape[1] - el.rank(sysm, p)


def rep_hom_basis(x: QuiverRep, y: QuiverRep, p: Optional[int] = None) -> List[List[np.ndarray]]:
    """Basis of Hom(x, y), each element a list of per-vertex matrices."""
    sysm, offsets = _hom_system(x, y, p)
    out = []
    for vec in el.kernel_basis(sysm, p):
        comps = []
        for v in range(x.n):
            k = y.dims[v] * x.dims[v]
            comps.append(vec[offsets[v]:offsets[v] + k].reshape(y.dims[v], x.dims[v]))
        out.append(comps)
    return out


def rep_ext_oracle(x: QuiverRep, y: QuiverRep, p: Optional[int] = None) -> int:
    """dim Ext^1(x, y) as the cokernel dimension of the same system."""
    if x.n != y.n:
        raise InputError("representations over different quivers")
    sysm, _ = _hom_system(x, y, p)
    return sysm.shape[0] - el.rank(sysm, p)


def rep_ext_cocycles(x: QuiverRep, y: QuiverRep, p: Optional[int] = None) -> List[List[np.ndarray]]:
    """Arrow data (xi_alpha: x_v -> y_{v+1}) representing a basis of Ext^1(x, y)."""
    sysm, _ = _hom_system(x, y, p)
    pick = el.column_space_complement(sysm, el.identity(sysm.shape[0]), p)
    out = []
    for idx in pick:
        vec = np.zeros(sysm.shape[0], dtype=np.int64)
        vec[idx] = 1
        arrows, r0 = [], 0
        for v in range(x.n - 1):
            k = y.dims[v + 1] * x.dims[v]
            arrows.append(vec[r0:r0 + k].reshape(y.dims[v + 1], x.dims[v]))
            r0 += k
        out.append(arrows)
    return out


def extension_rep(x: QuiverRep, y: QuiverRep, cocycle: List[np.ndarray]) -> QuiverRep:
    """Middle term of 0 -> y -> E -> x -> 0 built from an arrow cocycle."""
    n = x.n
    dims = tuple(y.dims[v] + x.dims[v] for v in range(n))
    maps = []
    for v in range(n - 1):
        m = el.zeros(dims[v + 1], dims[v])
        m[:y.dims[v + 1], :y.dims[v]] = y.maps[v]
        m[:y.dims[v + 1], y.dims[v]:] = cocycle[v]
        m[y.dims[v + 1]:, y.dims[v]:] = x.maps[v]
        maps.append(m)
    return QuiverRep(n, dims, maps)


def is_injective_map(phi: List[np.ndarray], x: QuiverRep, p: Optional[int] = None) -> bool:
    return all(el.rank(phi[v], p) == x.dims[v] for v in range(x.n))


def cokernel_rep(phi: List[np.ndarray], x: QuiverRep, y: QuiverRep, p: Optional[int] = None) -> QuiverRep:
    """Cokernel of phi: x -> y, with bases chosen as complements of the image."""
    n = y.n
    comp, proj = [], []
    for v in range(n):
        img = phi[v] if phi[v].size else el.zeros(y.dims[v], 0)
        cols = el.column_space_complement(img, el.identity(y.dims[v]), p)
        comp.append(cols)
        basis = np.concatenate([img, el.identity(y.dims[v])[:, cols]], axis=1)
        proj.append((basis, img.shape[1]))
    maps = []
    for v in range(n - 1):
        basis, k = proj[v + 1]
        m = el.zeros(len(comp[v + 1]), len(comp[v]))
        for c, col in enumerate(comp[v]):
            e = np.zeros(y.dims[v], dtype=np.int64)
            e[col] = 1
            img = el.matmul(y.maps[v], e.reshape(-1, 1), p).reshape(-1)
            coords = el.solve(basis, img, p)
            m[:, c] = coords[k:]
        maps.append(m)
    return QuiverRep(n, tuple(len(c) for c in comp), maps)


# ---------------------------------------------------------------- decomposition


def decompose_with_generators(r: QuiverRep, p: Optional[int] = None) -> List[Tuple[Interval, int, np.ndarray]]:
    """Interval decomposition with explicit generators.

    Returns (interval, birth vertex, generator vector in r_birth).  The
    generators are chosen by the elder rule: whenever images of live
    generators become dependent, the youngest generator in the relation is
    rewritten so that it dies.  The resulting summands give a direct-sum
    decomposition of r.
    """
    p = el._p(p)
    n = r.n
    alive = []  # entries: [birth, birth_vector, current_image]
    done = []
    for c in range(1, n + 1):
        dim_c = r.dims[c - 1]
        if alive:
            span = np.stack([g[2] for g in alive], axis=1)
        else:
            span = el.zeros(dim_c, 0)
        for col in el.column_space_complement(span, el.identity(dim_c), p):
            v = np.zeros(dim_c, dtype=np.int64)
            v[col] = 1
            alive.append([c, v, v.copy()])
        if c == n:
            break
        images = [el.matmul(r.maps[c - 1], g[2].reshape(-1, 1), p).reshape(-1) for g in alive]
        if not images:
            continue
        # youngest generator first so the pivot of each relation is its youngest member
        order = sorted(range(len(alive)), key=lambda k: (-alive[k][0], -k))
        mat = np.stack([images[k] for k in order], axis=1)
        rels = el.kernel_basis(mat, p)
        dead = set()
        if rels:
            relm, pivots = el.rref(np.stack(rels, axis=0), p)
            for row, pc in zip(relm, pivots):
                k = order[pc]
                g = alive[k]
                new_birth = g[1].copy()
                new_image = g[2].copy()
                for q in range(len(order)):
                    if q == pc or row[q] == 0:
                        continue
                    j = order[q]
                    older = alive[j]
                    push = el.matmul(r.path_map(older[0], g[0], p), older[1].reshape(-1, 1), p).reshape(-1)
                    new_birth = np.mod(new_birth + row[q] * push, p)
                    new_image = np.mod(new_image + row[q] * older[2], p)
                g[1], g[2] = new_birth, new_image
                done.append((Interval(g[0], c), g[0], g[1]))
                dead.add(k)
        survivors = []
        for k, g in enumerate(alive):
            if k in dead:
                continue
            g[2] = images[k]
            survivors.append(g)
        alive = survivors
    for g in alive:
        done.append((Interval(g[0], n), g[0], g[1]))
    done.sort(key=lambda t: (t[0].a, t[0].b))
    return done


def decompose_rep(r: QuiverRep, p: Optional[int] = None) -> List[Interval]:
    """Multiset of interval summands of r, sorted."""
    return sorted(t[0] for t in decompose_with_generators(r, p))
