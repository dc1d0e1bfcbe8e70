"""Orthogonality, Infl/Defl classes and factorization systems from s-torsion pairs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, PreconditionError
from .excat import (
    Morphism,
    Presentation,
    compose,
    format_expr,
    identity_morphism,
    is_deflation,
    is_inflation,
    zero_morphism,
)
from .torsion import SubcatPair, check_pair, torsion_triangle, verify_s_torsion

SIDES = ("inflation", "deflation")


@dataclass(frozen=True)
class FactSystem:
    """(Infl T, Infl F) or (Defl T, Defl F), stored by its defining pair."""

    side: str
    t_set: FrozenSet[str]
    f_set: FrozenSet[str]

    @property
    def pair(self) -> SubcatPair:
        return SubcatPair(self.t_set, self.f_set)

    def to_json(self, p: Optional[Presentation] = None) -> dict:
        return {"side": self.side, **self.pair.to_json(p)}


@dataclass(frozen=True)
class Factorization:
    """f = second o first with first: source -> k and second: k -> target."""

    first: Morphism
    second: Morphism
    k: Tuple[str, ...]

    def to_json(self) -> dict:
        return {"first": self.first.to_json(), "second": self.second.to_json(), "K": list(self.k)}


_VERIFIED: Dict[Tuple[int, SubcatPair], bool] = {}


def _require_verified(p: Presentation, pair: SubcatPair) -> SubcatPair:
    pair = check_pair(p, pair)
    key = (id(p), pair)
    ok = _VERIFIED.get(key)
    if ok is None:
        ok = _VERIFIED[key] = verify_s_torsion(p, pair)["ok"]
    if not ok:
        raise PreconditionError("the pair does not verify as an s-torsion pair")
    return pair


def _class_test(p: Presentation, side: str):
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    return is_inflation if side == "inflation" else is_deflation


def third_term(p: Presentation, f: Morphism, side: str = "inflation"):
    """cone(f) for inflations, cocone(f) for deflations; DomainError otherwise."""
    ok, c = _class_test(p, side)(p, f)
    if not ok:
        raise DomainError(f"{f.describe()} is not an {side}")
    return c


def orthogonal(p: Presentation, f: Morphism, g: Morphism, side: str = "inflation") -> bool:
    """f is left orthogonal to g: Hom and E^-1 vanish from cone(f) to cone(g)."""
    cf = third_term(p, f, side)
    cg = third_term(p, g, side)
    return all(p.hom[(x, y)] == 0 and p.Eneg[(x, y)] == 0 for x in cf for y in cg)


def in_infl_class(p: Presentation, f: Morphism, u_set: Iterable[str]) -> bool:
    u = set(p.resolve_all(u_set))
    ok, c = is_inflation(p, f)
    return ok and all(l in u for l in c)


def in_defl_class(p: Presentation, f: Morphism, u_set: Iterable[str]) -> bool:
    u = set(p.resolve_all(u_set))
    ok, c = is_deflation(p, f)
    return ok and all(l in u for l in c)


def in_class(p: Presentation, f: Morphism, u_set, side: str = "inflation") -> bool:
    return in_infl_class(p, f, u_set) if side == "inflation" else in_defl_class(p, f, u_set)


def _check_factorization(p, f, fact: Factorization, pair: SubcatPair, side: str):
    comp = compose(p, fact.second, fact.first)
    if not np.array_equal(comp.coeffs, np.mod(f.coeffs, p.field_char)):
        raise RuntimeError(f"factorization of {f.describe()} does not compose back to f")
    if not in_class(p, fact.first, pair.t_set, side) or not in_class(p, fact.second, pair.f_set, side):
        raise RuntimeError(f"factorization of {f.describe()} has pieces outside the classes")


def factorize_inflation(p: Presentation, f: Morphism, pair: SubcatPair, check: bool = True) -> Factorization:
    """f = r o l with cone(l) in add T and cone(r) in add F."""
    f = p.check_morphism(f)
    cone = third_term(p, f, "inflation")
    pair = _require_verified(p, pair)
    if all(l in pair.t_set for l in cone):
        fact = Factorization(f, identity_morphism(f.target), f.target)
    elif all(l in pair.f_set for l in cone):
        fact = Factorization(identity_morphism(f.source), f, f.source)
    else:
        k, l, r = p.model.factor_inflation(f, lambda x: torsion_triangle(p, x, pair))
        q = p.field_char
        fact = Factorization(Morphism(l.source, l.target, np.mod(l.coeffs, q)), Morphism(r.source, r.target, np.mod(r.coeffs, q)), k)
    if check:
        _check_factorization(p, f, fact, pair, "inflation")
    return fact


def factorize_deflation(p: Presentation, f: Morphism, pair: SubcatPair, check: bool = True) -> Factorization:
    """f = g2 o g1 with cocone(g1) in add T and cocone(g2) in add F."""
    f = p.check_morphism(f)
    cocone = third_term(p, f, "deflation")
    pair = _require_verified(p, pair)
    if all(l in pair.t_set for l in cocone):
        fact = Factorization(f, identity_morphism(f.target), f.target)
    elif all(l in pair.f_set for l in cocone):
        fact = Factorization(identity_morphism(f.source), f, f.source)
    else:
        k, g1, g2 = p.model.factor_deflation(f, lambda x: torsion_triangle(p, x, pair))
        q = p.field_char
        fact = Factorization(Morphism(g1.source, g1.target, np.mod(g1.coeffs, q)), Morphism(g2.source, g2.target, np.mod(g2.coeffs, q)), k)
    if check:
        _check_factorization(p, f, fact, pair, "deflation")
    return fact


def factorize(p: Presentation, f: Morphism, fs: FactSystem) -> Factorization:
    if fs.side == "inflation":
        return factorize_inflation(p, f, fs.pair)
    return factorize_deflation(p, f, fs.pair)


def torsion_to_fs(p: Presentation, pair: SubcatPair, side: str = "inflation") -> FactSystem:
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    pair = _require_verified(p, pair)
    return FactSystem(side, pair.t_set, pair.f_set)


def fs_to_torsion(fs: FactSystem) -> SubcatPair:
    return fs.pair


# ---------------------------------------------------------------- samples


def morphism_sample(p: Presentation) -> List[Morphism]:
    """Basis morphisms between indecomposables, identities included, and zero maps 0 -> X, X -> 0."""
    out = []
    for x in p.labels:
        out.append(zero_morphism((), (x,)))
        out.append(zero_morphism((x,), ()))
    for x in p.labels:
        for y in p.labels:
            if p.hom[(x, y)] == 1:
                out.append(Morphism((x,), (y,), [[1]]))
    return out


def verify_fs(p: Presentation, fs: FactSystem, sample: Optional[Sequence[Morphism]] = None) -> dict:
    """Check the three axioms of a factorization system on a morphism sample.

    (0) Hom(T, F) = 0 = E^-1(T, F) on the defining sets,
    (1) every sampled inflation (deflation) factors as second o first with
        first in L and second in R,
    (2) membership in L agrees with orthogonality against {0 -> F} (resp.
        {F -> 0} on the deflation side) for F in the f_set,
    (3) membership in R agrees with orthogonality from {0 -> T} (resp. {T -> 0}).
    """
    p.require_model("verify_fs")
    side = fs.side
    t_set = set(p.resolve_all(fs.t_set))
    f_set = set(p.resolve_all(fs.f_set))
    sample = morphism_sample(p) if sample is None else [p.check_morphism(g) for g in sample]
    findings = []
    vanishing = [
        [x, y] for x in p.labels for y in p.labels
        if x in t_set and y in f_set and (p.hom[(x, y)] or p.Eneg[(x, y)])
    ]
    if vanishing:
        findings.append({"check": "vanishing", "outcome": "fail", "witness": vanishing[0]})
    test = _class_test(p, side)
    members = []
    for g in sample:
        ok, third = test(p, g)
        if ok:
            members.append((g, third))

    def gen(label):
        return zero_morphism((), (label,)) if side == "inflation" else zero_morphism((label,), ())

    pair = SubcatPair.of(t_set, f_set)
    verified = not vanishing and verify_s_torsion(p, pair)["ok"]
    if not verified:
        findings.append({"check": "s-torsion", "outcome": "fail", "witness": None})
    counts = {"axiom1": 0, "axiom2": 0, "axiom3": 0}
    for g, third in members:
        if verified:
            try:
                fact = factorize_inflation(p, g, pair) if side == "inflation" else factorize_deflation(p, g, pair)
                counts["axiom1"] += 1
            except (RuntimeError, PreconditionError) as exc:
                findings.append({"check": "axiom1", "outcome": "fail", "witness": g.describe(), "detail": str(exc)})
        in_l = all(l in t_set for l in third)
        in_r = all(l in f_set for l in third)
        left = all(_orth_terms(p, third, (y,)) for y in sorted(f_set, key=p.index))
        right = all(_orth_terms(p, (x,), third) for x in sorted(t_set, key=p.index))
        counts["axiom2"] += 1
        counts["axiom3"] += 1
        if in_l != left:
            findings.append({"check": "axiom2", "outcome": "fail", "witness": g.describe()})
        if in_r != right:
            findings.append({"check": "axiom3", "outcome": "fail", "witness": g.describe()})
    return {
        "ok": not findings,
        "side": side,
        "sample_size": len(sample),
        "members": len(members),
        "checked": counts,
        "findings": findings,
    }


def _orth_terms(p, a, b) -> bool:
    return all(p.hom[(x, y)] == 0 and p.Eneg[(x, y)] == 0 for x in a for y in b)


def roundtrip_extensional(p: Presentation, pair: SubcatPair, sample: Optional[Sequence[Morphism]] = None, side: str = "inflation") -> bool:
    """Cone(Infl T) = T and Cone(Infl F) = F, evaluated on a morphism sample.

    The sample always contains the zero maps 0 -> X, whose cones give the
    inclusion T <= Cone(Infl T); every other sampled member contributes its
    cone summands, which must stay inside the set.
    """
    pair = _require_verified(p, pair)
    sample = morphism_sample(p) if sample is None else list(sample) + morphism_sample(p)
    test = _class_test(p, side)
    for u_set in (pair.t_set, pair.f_set):
        cones = set()
        for g in sample:
            ok, third = test(p, g)
            if ok and all(l in u_set for l in third):
                cones.update(third)
        if cones != set(u_set):
            return False
    return True


def generator(p: Presentation, text: str) -> Morphism:
    """Morphism from 'SRC -> TGT' with coefficient 1 on every nonzero basis Hom."""
    from .excat import parse_expr

    src, sep, tgt = text.partition("->")
    if not sep:
        raise ValueError(f"morphism literal needs '->': {text!r}")
    return p.auto_morphism(parse_expr(src), parse_expr(tgt))
