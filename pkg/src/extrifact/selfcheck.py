"""End-to-end checks on the shipped instances, one finding per check."""
from __future__ import annotations

from typing import Callable, List, Tuple

from . import fixtures as fx
from .excat import build_extended_category, build_module_category, check_negative_structure, dualize
from .factsys import (
    factorize_deflation,
    factorize_inflation,
    generator,
    in_infl_class,
    roundtrip_extensional,
    torsion_to_fs,
    verify_fs,
)
from .recoll import (
    build_product_recollement,
    check_exactness_hypotheses,
    check_recollement,
    glue_fs,
    glue_torsion,
    triangular_fixture,
)
from .repkernel import all_intervals, euler_form, ext_dim, hom_dim
from .silting import is_silting, parse_candidate, silted_pair
from .torsion import SubcatPair, enumerate_s_torsion, verify_s_torsion


def _f(check, ok, witness=None):
    return {"check": check, "outcome": "pass" if ok else "fail", "witness": witness}


def _example():
    p = build_extended_category(fx.N, fx.M)
    return p, SubcatPair.of(fx.T_LABELS, fx.F_LABELS)


def silting_example(jobs=1):
    p, pair = _example()
    c = parse_candidate(fx.SILTING, fx.N, fx.M)
    got = silted_pair(c, p)
    return _f("silted pair of the example complex", is_silting(c) and got == pair, got.to_json(p))


def example_verifies(jobs=1):
    p, pair = _example()
    rep = verify_s_torsion(p, pair, triangles=True)
    n = len(rep["cond1"].get("triangles", {}))
    return _f("example pair is s-torsion", rep["ok"] and n == len(p.labels), {"triangles": n})


def example_factorization(jobs=1):
    p, pair = _example()
    f = p.auto_morphism([fx.FACTOR_FROM], [fx.FACTOR_TO])
    fact = factorize_inflation(p, f, pair)
    ok = fact.k == (fx.FACTOR_MID,) and not in_infl_class(p, f, pair.t_set) and not in_infl_class(p, f, pair.f_set)
    return _f("factorization of P1 -> I1", ok, fact.to_json())


def generator_census(jobs=1):
    p, pair = _example()
    bad = [g for g in fx.T_GENERATORS if not in_infl_class(p, generator(p, g), pair.t_set)]
    bad += [g for g in fx.F_GENERATORS if not in_infl_class(p, generator(p, g), pair.f_set)]
    return _f("generators lie in their classes", not bad, bad[0] if bad else None)


def enumeration(jobs=1):
    p = build_extended_category(fx.N, fx.M)
    pairs = enumerate_s_torsion(p, jobs=jobs)
    bad = None
    for pr in pairs:
        if not (roundtrip_extensional(p, pr) and verify_fs(p, torsion_to_fs(p, pr))["ok"]):
            bad = pr.to_json(p)
            break
    return _f("enumerated pairs give factorization systems", bad is None, bad or {"pairs": len(pairs)})


def negative_structure(jobs=1):
    p = build_extended_category(fx.N, fx.M)
    rep = check_negative_structure(p)
    return _f("negative extension sequences exact", rep["ok"], rep["failures"][0] if rep["failures"] else {"checks": rep["checks"]})


def euler(jobs=1):
    bad = None
    for n in range(1, 6):
        for x in all_intervals(n):
            for y in all_intervals(n):
                if hom_dim(x, y) - ext_dim(x, y) != euler_form(x.dim_vector(n), y.dim_vector(n)):
                    bad = [n, x.name(n), y.name(n)]
    return _f("Euler form identity, n <= 5", bad is None, bad)


def gluing(jobs=1):
    m2 = build_module_category(2)
    r = build_product_recollement(m2, m2)
    pairs = enumerate_s_torsion(m2)
    ok = check_recollement(r)["ok"] and check_exactness_hypotheses(r)["ok"]
    bad = None
    for a in pairs:
        for c in pairs:
            g = glue_torsion(r, a, c)
            fs = glue_fs(r, torsion_to_fs(m2, a), torsion_to_fs(m2, c))
            if not (g["verification"]["ok"] and verify_fs(r.B, fs["fs"])["ok"] and not fs["disagreements"]):
                bad = [a.to_json(m2), c.to_json(m2)]
                break
        if bad:
            break
    rejected = not check_exactness_hypotheses(triangular_fixture())["ok"]
    return _f("gluing on product recollements", ok and bad is None and rejected, bad)


def duality(jobs=1):
    p, pair = _example()
    d = dualize(p)
    bad = None
    for pr in enumerate_s_torsion(p, jobs=jobs):
        if not verify_s_torsion(d, pr.swapped())["ok"]:
            bad = pr.to_json(p)
            break
    f = d.auto_morphism([fx.FACTOR_TO], [fx.FACTOR_FROM])
    fact = factorize_deflation(d, f, pair.swapped())
    ok = bad is None and fact.k == (fx.FACTOR_MID,)
    return _f("duality", ok, bad or fact.to_json())


CHECKS: List[Tuple[str, Callable]] = [
    ("silting", silting_example),
    ("verify", example_verifies),
    ("factorize", example_factorization),
    ("generators", generator_census),
    ("enumerate", enumeration),
    ("negative", negative_structure),
    ("euler", euler),
    ("glue", gluing),
    ("duality", duality),
]


def run_all(jobs: int = 1) -> List[dict]:
    return [fn(jobs) for _, fn in CHECKS]
