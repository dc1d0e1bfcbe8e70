"""Finite extriangulated categories with negative first extensions.

A `Presentation` carries the label set, the Hom / E / E^-1 dimension tables
and, for built-in instances, a realization model that can compose
morphisms, compute cones and realize extensions.  Three models exist:

* `WindowModel`: modules over A_n shifted by 0..m-1 inside the bounded
  derived category (m = 1 is the module category itself),
* `ProductModel`: a finite product of models, labels prefixed by factor,
* `OppositeModel`: the opposite category of another model.

Morphisms are coefficient matrices over the fixed basis morphisms between
indecomposables, with rows indexed by target summands.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .derived import DerivedCategory, ShiftedInterval, hom_shift_dim, parse_label
from .errors import CapabilityError, InputError
from .repkernel import all_intervals

SCHEMA_TAG = "extrifact/1"

Expr = Tuple[str, ...]


# ---------------------------------------------------------------- objects and maps


def parse_expr(text) -> Expr:
    """'P3[1]+P1[1]', 'P3[1], P1[1]', '0' or a list of labels -> tuple of labels."""
    if isinstance(text, (list, tuple)):
        return tuple(str(t).strip() for t in text)
    text = str(text).strip()
    if text in ("", "0"):
        return ()
    parts = [t.strip() for t in text.replace("⊕", "+").replace(",", "+").split("+")]
    if any(not t for t in parts):
        raise InputError(f"malformed object expression {text!r}")
    return tuple(parts)


def format_expr(expr: Sequence[str]) -> str:
    return "+".join(expr) if expr else "0"


@dataclass(frozen=True)
class Morphism:
    source: Expr
    target: Expr
    coeffs: np.ndarray = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        c = np.asarray(self.coeffs, dtype=np.int64).reshape(len(self.target), len(self.source))
        object.__setattr__(self, "coeffs", c)

    def key(self):
        return (self.source, self.target, tuple(self.coeffs.reshape(-1).tolist()))

    def __eq__(self, other):
        return isinstance(other, Morphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def describe(self) -> str:
        return f"{format_expr(self.source)} -> {format_expr(self.target)}"

    def to_json(self) -> dict:
        return {"source": list(self.source), "target": list(self.target), "coeffs": self.coeffs.tolist()}

    def op(self) -> "Morphism":
        return Morphism(self.target, self.source, self.coeffs.T.copy())

    def shifted(self, model, k: int) -> "Morphism":
        return Morphism(
            tuple(model.shift_label(l, k) for l in self.source),
            tuple(model.shift_label(l, k) for l in self.target),
            self.coeffs,
        )

    def is_zero(self) -> bool:
        return not self.coeffs.any()


def identity_morphism(expr: Sequence[str]) -> Morphism:
    return Morphism(tuple(expr), tuple(expr), el.identity(len(expr)))


def zero_morphism(src: Sequence[str], tgt: Sequence[str]) -> Morphism:
    return Morphism(tuple(src), tuple(tgt), el.zeros(len(tgt), len(src)))


@dataclass(frozen=True)
class ExtTriangle:
    """a -x-> b -y-> c with delta in E(c, a); delta[j, k] pairs a_j with c_k."""

    a: Expr
    b: Expr
    c: Expr
    x: Morphism
    y: Morphism
    delta: np.ndarray = field(compare=False)

    def op(self) -> "ExtTriangle":
        return ExtTriangle(self.c, self.b, self.a, self.y.op(), self.x.op(), np.asarray(self.delta).T.copy())

    def to_json(self) -> dict:
        return {
            "a": list(self.a),
            "b": list(self.b),
            "c": list(self.c),
            "x": self.x.coeffs.tolist(),
            "y": self.y.coeffs.tolist(),
            "delta": np.asarray(self.delta).tolist(),
        }


# ---------------------------------------------------------------- models


class WindowModel:
    """Modules over A_n shifted by 0..m-1 in the bounded derived category."""

    def __init__(self, n: int, m: int, p: Optional[int] = None):
        if n < 1 or m < 1:
            raise InputError("need n >= 1 and m >= 1")
        self.n, self.m = n, m
        self.dc = DerivedCategory(n, p)
        self.p = self.dc.p
        objs = sorted(ShiftedInterval(iv, s) for s in range(m) for iv in all_intervals(n))
        self.labels: Tuple[str, ...] = tuple(o.label(n) for o in objs)
        self._objs: Dict[str, ShiftedInterval] = {}
        self._cones: Dict[tuple, Expr] = {}
        self._cocones: Dict[tuple, Expr] = {}

    def ambient(self) -> dict:
        return {"n": self.n, "m": self.m}

    def obj(self, label: str) -> ShiftedInterval:
        o = self._objs.get(label)
        if o is None:
            o = self._objs[label] = parse_label(label, self.n)
        return o

    def lab(self, o: ShiftedInterval) -> str:
        return o.label(self.n)

    def objs(self, expr: Sequence[str]) -> List[ShiftedInterval]:
        return [self.obj(l) for l in expr]

    def labs(self, objs: Iterable[ShiftedInterval]) -> Expr:
        return tuple(self.lab(o) for o in objs)

    def canonical_label(self, label: str) -> str:
        return self.lab(self.obj(label))

    def sort_key(self, label: str):
        return self.obj(label).sort_key()

    def in_window(self, label: str) -> bool:
        return 0 <= self.obj(label).shift < self.m

    def shift_label(self, label: str, k: int) -> str:
        return self.lab(self.obj(label).shifted(k))

    def hom(self, x: str, y: str, t: int = 0) -> int:
        return hom_shift_dim(self.obj(x), self.obj(y), t)

    def dim(self, label: str) -> int:
        return self.obj(label).interval.dim

    def k0(self, label: str) -> Tuple[int, ...]:
        return self.obj(label).k0(self.n)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if tuple(g.source) != tuple(f.target):
            raise InputError(f"cannot compose {g.describe()} after {f.describe()}")
        c = self.dc.compose(g.coeffs, f.coeffs, self.objs(f.source), self.objs(f.target), self.objs(g.target))
        return Morphism(f.source, g.target, c)

    def cone(self, f: Morphism) -> Expr:
        key = f.key()
        hit = self._cones.get(key)
        if hit is None:
            hit = self._cones[key] = self.labs(self.dc.cone_objects(self.objs(f.source), self.objs(f.target), f.coeffs))
        return hit

    def cocone(self, f: Morphism) -> Expr:
        key = f.key()
        hit = self._cocones.get(key)
        if hit is None:
            hit = self._cocones[key] = self.labs(self.dc.cocone_objects(self.objs(f.source), self.objs(f.target), f.coeffs))
        return hit

    def cone_map(self, f: Morphism) -> Morphism:
        """The map target(f) -> cone(f) of the cone triangle."""
        c, g = self.dc.cone_triangle(self.objs(f.source), self.objs(f.target), f.coeffs)
        return Morphism(f.target, self.labs(c), g)

    def cocone_map(self, f: Morphism) -> Morphism:
        """The map cocone(f) -> source(f) of the cocone triangle."""
        a, h = self.dc.cocone_triangle(self.objs(f.source), self.objs(f.target), f.coeffs)
        return Morphism(self.labs(a), f.source, h)

    def realize(self, c: Sequence[str], a: Sequence[str], delta) -> ExtTriangle:
        c, a = tuple(c), tuple(a)
        delta = np.asarray(delta, dtype=np.int64).reshape(len(a), len(c))
        b, x, y = self.dc.realize_extension(self.objs(c), self.objs(a), delta)
        b = self.labs(b)
        return ExtTriangle(a, b, c, Morphism(a, b, x), Morphism(b, c, y), delta)

    def factor_inflation(self, f: Morphism, triangle_of: Callable[[str], ExtTriangle]):
        def part(o):
            t = triangle_of(self.lab(o))
            return self.objs(t.c), t.y.coeffs

        k, l, r = self.dc.factor_inflation(self.objs(f.source), self.objs(f.target), f.coeffs, part)
        k = self.labs(k)
        return k, Morphism(f.source, k, l), Morphism(k, f.target, r)

    def factor_deflation(self, f: Morphism, triangle_of: Callable[[str], ExtTriangle]):
        def part(o):
            t = triangle_of(self.lab(o))
            return self.objs(t.a), t.x.coeffs

        k, g1, g2 = self.dc.factor_deflation(self.objs(f.source), self.objs(f.target), f.coeffs, part)
        k = self.labs(k)
        return k, Morphism(f.source, k, g1), Morphism(k, f.target, g2)


class ProductModel:
    """Product of models; a label is 'PREFIX:inner'."""

    def __init__(self, factors: Sequence[Tuple[str, object]]):
        self.factors = list(factors)
        self.by_prefix = dict(self.factors)
        if len(self.by_prefix) != len(self.factors):
            raise InputError("duplicate factor prefixes")
        self.labels: Tuple[str, ...] = tuple(f"{pre}:{l}" for pre, mod in self.factors for l in mod.labels)
        self._order = {pre: i for i, (pre, _) in enumerate(self.factors)}
        self.p = self.factors[0][1].p if self.factors else el.characteristic()

    def ambient(self) -> dict:
        return {"product": [{"prefix": pre, **_model_ambient(mod)} for pre, mod in self.factors]}

    def split(self, label: str):
        pre, sep, inner = label.partition(":")
        if not sep or pre not in self.by_prefix:
            raise InputError(f"label {label!r} does not name a product factor")
        return pre, inner

    def canonical_label(self, label: str) -> str:
        pre, inner = self.split(label)
        return f"{pre}:{self.by_prefix[pre].canonical_label(inner)}"

    def sort_key(self, label: str):
        pre, inner = self.split(label)
        return (self._order[pre], self.by_prefix[pre].sort_key(inner))

    def in_window(self, label: str) -> bool:
        pre, inner = self.split(label)
        return self.by_prefix[pre].in_window(inner)

    def shift_label(self, label: str, k: int) -> str:
        pre, inner = self.split(label)
        return f"{pre}:{self.by_prefix[pre].shift_label(inner, k)}"

    def hom(self, x: str, y: str, t: int = 0) -> int:
        px, ix = self.split(x)
        py, iy = self.split(y)
        return self.by_prefix[px].hom(ix, iy, t) if px == py else 0

    def dim(self, label: str) -> int:
        pre, inner = self.split(label)
        return self.by_prefix[pre].dim(inner)

    def k0(self, label: str) -> Tuple[int, ...]:
        pre, inner = self.split(label)
        out = []
        for q, mod in self.factors:
            size = len(mod.k0(mod.labels[0])) if mod.labels else 0
            out.extend(mod.k0(inner) if q == pre else (0,) * size)
        return tuple(out)

    def _parts(self, expr: Sequence[str]):
        parts: Dict[str, List[int]] = {pre: [] for pre, _ in self.factors}
        for i, l in enumerate(expr):
            parts[self.split(l)[0]].append(i)
        return parts

    def _inner(self, expr, idx):
        return tuple(self.split(expr[i])[1] for i in idx)

    def restrict(self, f: Morphism, pre: str) -> Morphism:
        s, t = self._parts(f.source)[pre], self._parts(f.target)[pre]
        return Morphism(self._inner(f.source, s), self._inner(f.target, t), f.coeffs[np.ix_(t, s)])

    def _check_block_diagonal(self, f: Morphism):
        s, t = self._parts(f.source), self._parts(f.target)
        for pa in s:
            for pb in t:
                if pa != pb and f.coeffs[np.ix_(t[pb], s[pa])].any():
                    raise InputError(f"{f.describe()} has a nonzero entry between different factors")

    def _prefix(self, pre, expr):
        return tuple(f"{pre}:{l}" for l in expr)

    def _assemble(self, src, tgt, pieces) -> Morphism:
        """Place per-factor morphisms (in factor order) into one matrix."""
        out = el.zeros(len(tgt), len(src))
        sp, tp = self._parts(src), self._parts(tgt)
        for pre, m in pieces.items():
            out[np.ix_(tp[pre], sp[pre])] = m.coeffs
        return Morphism(src, tgt, out)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        if tuple(g.source) != tuple(f.target):
            raise InputError(f"cannot compose {g.describe()} after {f.describe()}")
        self._check_block_diagonal(f)
        self._check_block_diagonal(g)
        pieces = {pre: mod.compose(self.restrict(g, pre), self.restrict(f, pre)) for pre, mod in self.factors}
        return self._assemble(f.source, g.target, pieces)

    def cone(self, f: Morphism) -> Expr:
        self._check_block_diagonal(f)
        return tuple(l for pre, mod in self.factors for l in self._prefix(pre, mod.cone(self.restrict(f, pre))))

    def cocone(self, f: Morphism) -> Expr:
        self._check_block_diagonal(f)
        return tuple(l for pre, mod in self.factors for l in self._prefix(pre, mod.cocone(self.restrict(f, pre))))

    def cone_map(self, f: Morphism) -> Morphism:
        self._check_block_diagonal(f)
        pieces = {pre: mod.cone_map(self.restrict(f, pre)) for pre, mod in self.factors}
        c = tuple(l for pre, _ in self.factors for l in self._prefix(pre, pieces[pre].target))
        return self._assemble(f.target, c, pieces)

    def cocone_map(self, f: Morphism) -> Morphism:
        self._check_block_diagonal(f)
        pieces = {pre: mod.cocone_map(self.restrict(f, pre)) for pre, mod in self.factors}
        a = tuple(l for pre, _ in self.factors for l in self._prefix(pre, pieces[pre].source))
        return self._assemble(a, f.source, pieces)

    def realize(self, c, a, delta) -> ExtTriangle:
        c, a = tuple(c), tuple(a)
        delta = np.asarray(delta, dtype=np.int64).reshape(len(a), len(c))
        self._check_block_diagonal(Morphism(c, a, delta))
        cp, ap = self._parts(c), self._parts(a)
        b: List[str] = []
        tris = {}
        for pre, mod in self.factors:
            t = mod.realize(self._inner(c, cp[pre]), self._inner(a, ap[pre]), delta[np.ix_(ap[pre], cp[pre])])
            tris[pre] = t
            b.extend(self._prefix(pre, t.b))
        b = tuple(b)
        x = self._assemble(a, b, {pre: t.x for pre, t in tris.items()})
        y = self._assemble(b, c, {pre: t.y for pre, t in tris.items()})
        return ExtTriangle(a, b, c, x, y, delta)

    def _lift_triangle(self, pre, triangle_of):
        def inner(label):
            t = triangle_of(f"{pre}:{label}")
            # a torsion triangle of a factor object lives in that factor
            return ExtTriangle(
                tuple(self.split(l)[1] for l in t.a),
                tuple(self.split(l)[1] for l in t.b),
                tuple(self.split(l)[1] for l in t.c),
                Morphism(tuple(self.split(l)[1] for l in t.x.source), tuple(self.split(l)[1] for l in t.x.target), t.x.coeffs),
                Morphism(tuple(self.split(l)[1] for l in t.y.source), tuple(self.split(l)[1] for l in t.y.target), t.y.coeffs),
                t.delta,
            )

        return inner

    def _factor(self, f, triangle_of, which):
        self._check_block_diagonal(f)
        k: List[str] = []
        firsts, seconds = {}, {}
        for pre, mod in self.factors:
            fn = getattr(mod, which)
            kk, a, b = fn(self.restrict(f, pre), self._lift_triangle(pre, triangle_of))
            k.extend(self._prefix(pre, kk))
            firsts[pre], seconds[pre] = a, b
        k = tuple(k)
        return k, self._assemble(f.source, k, firsts), self._assemble(k, f.target, seconds)

    def factor_inflation(self, f, triangle_of):
        return self._factor(f, triangle_of, "factor_inflation")

    def factor_deflation(self, f, triangle_of):
        return self._factor(f, triangle_of, "factor_deflation")


class OppositeModel:
    """The opposite category: every query is answered by the base model."""

    def __init__(self, base):
        self.base = base
        self.labels = base.labels
        self.p = base.p

    def ambient(self) -> dict:
        return {"opposite": _model_ambient(self.base)}

    def canonical_label(self, label):
        return self.base.canonical_label(label)

    def sort_key(self, label):
        return self.base.sort_key(label)

    def in_window(self, label):
        return self.base.in_window(label)

    def shift_label(self, label, k):
        # Hom_op(W, X<k>) = Hom(X<k>, W) = Hom(X, W[-k]) forces <k> = [-k]
        return self.base.shift_label(label, -k)

    def hom(self, x, y, t=0):
        return self.base.hom(y, x, t)

    def dim(self, label):
        return self.base.dim(label)

    def k0(self, label):
        return self.base.k0(label)

    def compose(self, g, f):
        return self.base.compose(f.op(), g.op()).op()

    def cone(self, f):
        return self.base.cocone(f.op())

    def cocone(self, f):
        return self.base.cone(f.op())

    def cone_map(self, f):
        return self.base.cocone_map(f.op()).op()

    def cocone_map(self, f):
        return self.base.cone_map(f.op()).op()

    def realize(self, c, a, delta):
        delta = np.asarray(delta, dtype=np.int64).reshape(len(a), len(c))
        return self.base.realize(a, c, delta.T).op()

    def factor_inflation(self, f, triangle_of):
        k, g1, g2 = self.base.factor_deflation(f.op(), lambda l: triangle_of(l).op())
        return k, g2.op(), g1.op()

    def factor_deflation(self, f, triangle_of):
        k, l, r = self.base.factor_inflation(f.op(), lambda l_: triangle_of(l_).op())
        return k, r.op(), l.op()


def _model_ambient(model) -> dict:
    return model.ambient()


def model_from_ambient(amb: dict, p: int):
    if "product" in amb:
        parts = []
        for item in amb["product"]:
            item = dict(item)
            pre = item.pop("prefix")
            parts.append((pre, model_from_ambient(item, p)))
        return ProductModel(parts)
    if "opposite" in amb:
        return OppositeModel(model_from_ambient(amb["opposite"], p))
    if "n" in amb:
        return WindowModel(int(amb["n"]), int(amb.get("m", 1)), p)
    raise InputError(f"unrecognized ambient description {amb!r}")


# ---------------------------------------------------------------- presentations


@dataclass
class Presentation:
    labels: Tuple[str, ...]
    hom: Dict[Tuple[str, str], int]
    E: Dict[Tuple[str, str], int]
    Eneg: Dict[Tuple[str, str], int]
    kind: str = "dims"
    field_char: int = 2
    model: object = None
    name: str = ""

    def __post_init__(self):
        self.labels = tuple(self.labels)
        self._index = {l: i for i, l in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise InputError("duplicate labels")

    # -- labels

    def index(self, label: str) -> int:
        return self._index[self.resolve(label)]

    def resolve(self, label: str) -> str:
        """Canonical spelling of a label of this presentation (aliases allowed)."""
        if label in self._index:
            return label
        if self.model is not None:
            try:
                c = self.model.canonical_label(label)
            except InputError:
                c = None
            if c in self._index:
                return c
        raise InputError(f"unknown label {label!r}")

    def resolve_all(self, labels: Iterable[str]) -> Tuple[str, ...]:
        return tuple(self.resolve(l) for l in labels)

    def sort_labels(self, labels: Iterable[str]) -> List[str]:
        return sorted(set(labels), key=self.index)

    # -- tables

    def hom_dim(self, x: str, y: str) -> int:
        return self.hom[(x, y)]

    def e_dim(self, c: str, a: str) -> int:
        return self.E[(c, a)]

    def eneg_dim(self, c: str, a: str) -> int:
        return self.Eneg[(c, a)]

    def is_projective(self, x: str) -> bool:
        return all(self.E[(x, y)] == 0 for y in self.labels)

    def is_injective(self, x: str) -> bool:
        return all(self.E[(y, x)] == 0 for y in self.labels)

    def projectives(self) -> List[str]:
        return [x for x in self.labels if self.is_projective(x)]

    @property
    def full(self) -> bool:
        return self.kind == "full" and self.model is not None

    def require_model(self, what: str = "this operation"):
        if not self.full:
            raise CapabilityError(f"{what} needs a realization model; the presentation is dims-only")
        return self.model

    def same_tables(self, other: "Presentation") -> bool:
        return (
            self.labels == other.labels
            and self.hom == other.hom
            and self.E == other.E
            and self.Eneg == other.Eneg
        )

    # -- morphism helpers

    def basis_morphism(self, x: str, y: str) -> Morphism:
        x, y = self.resolve(x), self.resolve(y)
        if self.hom[(x, y)] != 1:
            raise InputError(f"Hom({x}, {y}) is not one-dimensional")
        return Morphism((x,), (y,), [[1]])

    def auto_morphism(self, src: Sequence[str], tgt: Sequence[str]) -> Morphism:
        """Coefficient 1 on every nonzero basis Hom between summands."""
        src, tgt = self.resolve_all(src), self.resolve_all(tgt)
        c = el.zeros(len(tgt), len(src))
        for j, y in enumerate(tgt):
            for i, x in enumerate(src):
                d = self.hom[(x, y)]
                if d > 1:
                    raise InputError(f"Hom({x}, {y}) has dimension {d}; supply coefficients")
                c[j, i] = d
        return Morphism(src, tgt, c)

    def check_morphism(self, f: Morphism) -> Morphism:
        src, tgt = self.resolve_all(f.source), self.resolve_all(f.target)
        c = np.mod(f.coeffs, self.field_char)
        for j, y in enumerate(tgt):
            for i, x in enumerate(src):
                if c[j, i] and self.hom[(x, y)] == 0:
                    raise InputError(f"nonzero coefficient on Hom({x}, {y}) = 0")
        return Morphism(src, tgt, c)


def _tables_from_model(model, labels):
    hom, E, Eneg = {}, {}, {}
    for x in labels:
        for y in labels:
            hom[(x, y)] = model.hom(x, y, 0)
            E[(x, y)] = model.hom(x, y, 1)
            Eneg[(x, y)] = model.hom(x, y, -1)
    return hom, E, Eneg


def presentation_from_model(model, name: str = "") -> Presentation:
    labels = tuple(model.labels)
    hom, E, Eneg = _tables_from_model(model, labels)
    return Presentation(labels, hom, E, Eneg, "full", model.p, model, name)


def build_module_category(n: int, p: Optional[int] = None) -> Presentation:
    """mod A_n with E = Ext^1 and E^-1 = 0."""
    if n < 1:
        raise InputError("n must be at least 1")
    return presentation_from_model(WindowModel(n, 1, p), f"mod A_{n}")


def build_extended_category(n: int, m: int, p: Optional[int] = None) -> Presentation:
    """Modules shifted by 0..m-1 inside D^b(mod A_n)."""
    if n < 1 or m < 1:
        raise InputError("need n >= 1 and m >= 1")
    return presentation_from_model(WindowModel(n, m, p), f"{m}-mod A_{n}")


def build_product(parts: Sequence[Tuple[str, Presentation]]) -> Presentation:
    """Product category; labels are 'PREFIX:label'."""
    chars = {pr.field_char for _, pr in parts}
    if len(chars) > 1:
        raise InputError("product factors use different fields")
    p = chars.pop() if chars else el.characteristic()
    if all(pr.full for _, pr in parts):
        return presentation_from_model(ProductModel([(pre, pr.model) for pre, pr in parts]), "product")
    labels = tuple(f"{pre}:{l}" for pre, pr in parts for l in pr.labels)
    owner = {f"{pre}:{l}": (pre, l) for pre, pr in parts for l in pr.labels}
    tables = []
    for attr in ("hom", "E", "Eneg"):
        t = {}
        for x in labels:
            for y in labels:
                (px, lx), (py, ly) = owner[x], owner[y]
                t[(x, y)] = getattr(dict(parts)[px], attr)[(lx, ly)] if px == py else 0
        tables.append(t)
    return Presentation(labels, *tables, "dims", p, None, "product")


def zero_category(p: Optional[int] = None) -> Presentation:
    """The zero category (no indecomposables), as an empty product."""
    model = ProductModel([])
    if p is not None:
        if not el._is_prime(int(p)):
            raise InputError(f"field characteristic must be prime, got {p}")
        model.p = int(p)
    return presentation_from_model(model, "zero")


def dualize(p: Presentation) -> Presentation:
    """Opposite presentation: every table is transposed."""

    def tr(t):
        return {(y, x): v for (x, y), v in t.items()}

    model = None
    if p.model is not None:
        model = p.model.base if isinstance(p.model, OppositeModel) else OppositeModel(p.model)
    name = p.name[:-3] if p.name.endswith("^op") else (p.name + "^op" if p.name else "")
    return Presentation(p.labels, tr(p.hom), tr(p.E), tr(p.Eneg), p.kind, p.field_char, model, name)


# ---------------------------------------------------------------- documents


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    with resources.files("extrifact").joinpath("schemas", name).open() as fh:
        return json.load(fh)


def _validate(doc, schema_name: str):
    import jsonschema

    try:
        jsonschema.validate(doc, load_schema(schema_name))
    except jsonschema.ValidationError as exc:
        path = "/".join(str(x) for x in exc.absolute_path)
        raise InputError(f"schema violation at '{path}': {exc.message}") from None


def _key(x, y):
    return f"{x}|{y}"


def serialize_presentation(p: Presentation) -> dict:
    doc = {
        "schema": SCHEMA_TAG,
        "field_char": p.field_char,
        "kind": "full" if p.full else "dims",
        "objects": list(p.labels),
    }
    for attr in ("hom", "E", "Eneg"):
        t = getattr(p, attr)
        doc[attr] = {_key(x, y): t[(x, y)] for x in p.labels for y in p.labels}
    if p.full:
        doc["ambient"] = p.model.ambient()
    if p.name:
        doc["name"] = p.name
    return doc


def load_presentation(doc) -> Presentation:
    """Presentation from a parsed JSON document (or a path / JSON string)."""
    if isinstance(doc, str):
        text = doc
        if not text.lstrip().startswith("{"):
            with open(text) as fh:
                text = fh.read()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
    _validate(doc, "presentation.schema.json")
    labels = tuple(doc["objects"])
    if len(set(labels)) != len(labels):
        raise InputError("duplicate object labels")
    if any("|" in l for l in labels):
        raise InputError("labels may not contain '|'")
    tables = []
    for attr in ("hom", "E", "Eneg"):
        raw = doc[attr]
        t = {}
        for x in labels:
            for y in labels:
                k = _key(x, y)
                if k not in raw:
                    raise InputError(f"table {attr} is missing the entry {k!r}")
                t[(x, y)] = int(raw[k])
        extra = set(raw) - {_key(x, y) for x in labels for y in labels}
        if extra:
            raise InputError(f"table {attr} has entries for unknown pairs: {sorted(extra)[:3]}")
        tables.append(t)
    p = int(doc["field_char"])
    if not el._is_prime(p):
        raise InputError(f"field_char must be prime, got {p}")
    kind = doc["kind"]
    model = None
    if kind == "full":
        if "ambient" not in doc:
            raise InputError("a full presentation needs an 'ambient' block")
        model = model_from_ambient(doc["ambient"], p)
        if tuple(model.labels) != labels:
            raise InputError("objects do not match the labels of the ambient model")
        expect = _tables_from_model(model, labels)
        for attr, got, want in zip(("hom", "E", "Eneg"), tables, expect):
            if got != want:
                bad = next(k for k in want if got[k] != want[k])
                raise InputError(f"table {attr} disagrees with the ambient model at {_key(*bad)}")
    return Presentation(labels, *tables, kind, p, model, doc.get("name", ""))


# ---------------------------------------------------------------- inflations


def is_inflation(p: Presentation, f: Morphism) -> Tuple[bool, Expr]:
    model = p.require_model("is_inflation")
    f = p.check_morphism(f)
    c = model.cone(f)
    return all(model.in_window(l) for l in c), c


def is_deflation(p: Presentation, f: Morphism) -> Tuple[bool, Expr]:
    model = p.require_model("is_deflation")
    f = p.check_morphism(f)
    c = model.cocone(f)
    return all(model.in_window(l) for l in c), c


def compose(p: Presentation, g: Morphism, f: Morphism) -> Morphism:
    m = p.require_model("compose").compose(g, f)
    return Morphism(m.source, m.target, np.mod(m.coeffs, p.field_char))


def realize(p: Presentation, c: Sequence[str], a: Sequence[str], delta) -> ExtTriangle:
    model = p.require_model("realize")
    c, a = p.resolve_all(c), p.resolve_all(a)
    delta = np.mod(np.asarray(delta, dtype=np.int64).reshape(len(a), len(c)), p.field_char)
    for j, x in enumerate(a):
        for k, z in enumerate(c):
            if delta[j, k] and not p.E[(z, x)]:
                raise InputError(f"nonzero delta entry on E({z}, {x}) = 0")
    return model.realize(c, a, delta)


def basis_triangles(p: Presentation, include_split: bool = True) -> List[ExtTriangle]:
    """One realized triangle per nonzero basis extension between indecomposables.

    With include_split the split triangles a -> a+c -> c are added for every
    ordered pair of labels.
    """
    out = []
    for c in p.labels:
        for a in p.labels:
            if p.E[(c, a)]:
                out.append(realize(p, (c,), (a,), [[1]]))
            if include_split:
                out.append(realize(p, (c,), (a,), [[0]]))
    return out


# ---------------------------------------------------------------- negative structure


def _hom_basis(p: Presentation, model, src: Expr, tgt: Expr):
    basis = []
    for j, y in enumerate(tgt):
        for i, x in enumerate(src):
            d = model.hom(x, y, 0)
            if d > 1:
                raise CapabilityError("negative-structure check needs Hom dimensions <= 1")
            if d:
                basis.append((j, i))
    return basis


def _linear_map(p, model, src_space, tgt_space, fn):
    """Matrix of fn: Hom(src_space) -> Hom(tgt_space) on the coefficient bases."""
    (us, ut), (vs, vt) = src_space, tgt_space
    db = _hom_basis(p, model, us, ut)
    cb = _hom_basis(p, model, vs, vt)
    pos = {ji: k for k, ji in enumerate(cb)}
    mat = el.zeros(len(cb), len(db))
    for col, (j, i) in enumerate(db):
        e = el.zeros(len(ut), len(us))
        e[j, i] = 1
        img = fn(Morphism(us, ut, e))
        c = np.mod(img.coeffs, p.field_char)
        for (jj, ii) in zip(*np.nonzero(c)):
            if (jj, ii) not in pos:
                raise RuntimeError("image has support outside the Hom basis")
            mat[pos[(jj, ii)], col] = c[jj, ii]
    return mat


def _exact_at(a: np.ndarray, b: np.ndarray, mid_dim: int, q: int) -> bool:
    """im a = ker b for V1 -a-> V2 -b-> V3."""
    if el.matmul(b, a, q).any():
        return False
    return el.rank(a, q) + el.rank(b, q) == mid_dim


def five_term_sequences(p: Presentation, t: ExtTriangle, w: str):
    """The two five-term sequences of a triangle at test object w.

    Returns [(spaces, maps)] for the covariant sequence
      Hom(w, a<-1>) -> Hom(w, b<-1>) -> Hom(w, c<-1>) -> Hom(w, a) -> Hom(w, b)
    and the contravariant one
      Hom(c, w<-1>) -> Hom(b, w<-1>) -> Hom(a, w<-1>) -> Hom(c, w) -> Hom(b, w),
    where <k> is the shift realizing E^-1 = Hom(-, -<-1>).
    """
    model = p.require_model("check_negative_structure")
    sh = model.shift_label
    a1 = tuple(sh(l, -1) for l in t.a)
    b1 = tuple(sh(l, -1) for l in t.b)
    c1 = tuple(sh(l, -1) for l in t.c)
    x1, y1 = t.x.shifted(model, -1), t.y.shifted(model, -1)
    d1 = Morphism(c1, t.a, t.delta)  # delta: c -> a<1>, shifted down
    W = (w,)
    w1 = (sh(w, -1),)
    post = lambda g: (lambda h: model.compose(g, h))
    cov_spaces = [(W, a1), (W, b1), (W, c1), (W, t.a), (W, t.b)]
    cov_maps = [post(x1), post(y1), post(d1), post(t.x)]
    pre = lambda g: (lambda h: model.compose(h, g))

    def conn(h):
        # h: a -> w<-1>; h<1> o delta : c -> w
        hs = h.shifted(model, 1)
        return model.compose(hs, Morphism(t.c, hs.source, t.delta))

    con_spaces = [(t.c, w1), (t.b, w1), (t.a, w1), (t.c, W), (t.b, W)]
    con_maps = [pre(t.y), pre(t.x), conn, pre(t.y)]
    out = []
    for spaces, maps in ((cov_spaces, cov_maps), (con_spaces, con_maps)):
        mats = [_linear_map(p, model, spaces[k], spaces[k + 1], maps[k]) for k in range(4)]
        dims = [len(_hom_basis(p, model, *s)) for s in spaces]
        out.append((dims, mats))
    return out


def check_negative_structure(p: Presentation, sample: Optional[Sequence[ExtTriangle]] = None, objects=None) -> dict:
    """Exactness of both five-term sequences for each triangle and test object.

    Joints checked: the three interior positions of each sequence.  The
    report lists every failure as (triangle, W, sequence, joint).
    """
    p.require_model("check_negative_structure")
    if sample is None:
        sample = basis_triangles(p)
    objects = p.labels if objects is None else p.resolve_all(objects)
    q = p.field_char
    failures = []
    checks = 0
    for t in sample:
        for w in objects:
            for seq, (dims, mats) in zip(("covariant", "contravariant"), five_term_sequences(p, t, w)):
                for j in range(3):
                    checks += 1
                    if not _exact_at(mats[j], mats[j + 1], dims[j + 1], q):
                        failures.append({
                            "triangle": f"{format_expr(t.a)} -> {format_expr(t.b)} -> {format_expr(t.c)}",
                            "W": w,
                            "sequence": seq,
                            "joint": j + 2,
                        })
    return {"ok": not failures, "triangles": len(sample), "objects": len(objects), "checks": checks, "failures": failures}
