"""Command-line entry point.

Every command prints one report: {"schema", "command", "status",
"findings", "result"}.  Exit code 0 when no finding failed, 1 when some
check failed, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional

import numpy as np

from . import exactlin as el
from .config import RunConfig, SearchConfig
from .errors import ExtrifactError, InputError
from .excat import (
    SCHEMA_TAG,
    Morphism,
    Presentation,
    _validate,
    build_extended_category,
    build_module_category,
    dualize,
    load_presentation,
    parse_expr,
    serialize_presentation,
)
from .factsys import (
    SIDES,
    FactSystem,
    factorize,
    orthogonal,
    torsion_to_fs,
    verify_fs,
)
from .recoll import (
    build_product_recollement,
    check_exactness_hypotheses,
    check_neg_ext_adjoint_iso,
    check_recollement,
    glue_fs,
    glue_torsion,
    load_recollement,
    load_triangular_fixture,
    serialize_recollement,
    triangular_fixture,
)
from .silting import is_silting, parse_candidate, presilting_witness, silted_pair
from .torsion import enumerate_s_torsion, pair_from_json, torsion_triangle, verify_s_torsion


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise _Usage(f"{self.prog}: {message}")


# ---------------------------------------------------------------- input helpers


def _read_json(arg: str):
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        try:
            with open(arg) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {arg[:40]!r}: {exc}") from None


def _cat(arg: str) -> Presentation:
    return load_presentation(_read_json(arg))


def _pair(p: Presentation, arg: str):
    return pair_from_json(p, _read_json(arg))


def _recollement(arg: str):
    if arg == "triangular":
        return load_triangular_fixture()
    return load_recollement(_read_json(arg))


def _morphism(p: Presentation, src: str, tgt: str, mapping: str) -> Morphism:
    s, t = p.resolve_all(parse_expr(src)), p.resolve_all(parse_expr(tgt))
    if mapping == "auto":
        return p.auto_morphism(s, t)
    try:
        c = np.array(json.loads(mapping), dtype=np.int64)
    except (json.JSONDecodeError, ValueError, TypeError):
        raise InputError(f"--map must be 'auto' or a JSON matrix, got {mapping!r}") from None
    if c.size == 0:
        c = c.reshape(len(t), len(s))
    if c.shape != (len(t), len(s)):
        raise InputError(f"coefficient matrix has shape {c.shape}, expected {(len(t), len(s))}")
    return p.check_morphism(Morphism(s, t, c))


def _literal(p: Presentation, text: str, mapping: str = "auto") -> Morphism:
    src, sep, tgt = text.partition("->")
    if not sep:
        raise InputError(f"morphism literal needs '->': {text!r}")
    return _morphism(p, src, tgt, mapping)


def _write(path: Optional[str], doc) -> None:
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=False)
        fh.write("\n")


def _finding(check, ok, witness=None):
    return {"check": check, "outcome": "pass" if ok else "fail", "witness": witness}


def _cond_findings(rep: dict) -> List[dict]:
    return [{"check": k, "outcome": rep[k]["outcome"], "witness": rep[k]["witness"]} for k in ("cond1", "cond2", "cond3")]


# ---------------------------------------------------------------- commands


def cmd_build(a):
    if a.type == "a_n":
        p = build_module_category(a.n, a.field_char) if a.m == 1 else build_extended_category(a.n, a.m, a.field_char)
    else:
        raise InputError(f"unknown category type {a.type!r}")
    doc = serialize_presentation(p)
    if a.dims_only:
        doc["kind"] = "dims"
        doc.pop("ambient", None)
    result = {"objects": list(p.labels)}
    if a.output:
        _write(a.output, doc)
        result["written"] = a.output
    else:
        result["presentation"] = doc
    return [_finding("build", True, {"objects": len(p.labels)})], result


def cmd_dualize(a):
    d = dualize(_cat(a.category))
    doc = serialize_presentation(d)
    result = {"objects": list(d.labels)}
    if a.output:
        _write(a.output, doc)
        result["written"] = a.output
    else:
        result["presentation"] = doc
    return [_finding("dualize", True, None)], result


def cmd_torsion_verify(a):
    p = _cat(a.category)
    sc = a.cfg.search
    rep = verify_s_torsion(p, _pair(p, a.pair), triangles=a.triangles, mode=sc.mode, cap_extra=sc.cap_extra)
    result = {"pair": rep["pair"]}
    if a.triangles and "triangles" in rep["cond1"]:
        result["triangles"] = rep["cond1"]["triangles"]
    return _cond_findings(rep), result


def cmd_torsion_enumerate(a):
    p = _cat(a.category)
    sc = a.cfg.search
    pairs = enumerate_s_torsion(p, jobs=sc.jobs, mode=sc.mode, cap_extra=sc.cap_extra)
    out = [pr.to_json(p) for pr in pairs]
    return [_finding("enumerate", True, {"pairs": len(out)})], {"count": len(out), "pairs": out}


def cmd_torsion_triangle(a):
    p = _cat(a.category)
    pair = _pair(p, a.pair)
    x = p.resolve(a.object)
    rep = verify_s_torsion(p, pair)
    if not rep["ok"]:
        return _cond_findings(rep), None
    t = torsion_triangle(p, x, pair)
    return [_finding(f"{x} in T*F", True, None)], {"triangle": t.to_json()}


def _fs(p, a) -> FactSystem:
    return torsion_to_fs(p, _pair(p, a.pair), a.side)


def cmd_fs_from_torsion(a):
    p = _cat(a.category)
    pair = _pair(p, a.pair)
    rep = verify_s_torsion(p, pair)
    if not rep["ok"]:
        return _cond_findings(rep), None
    return _cond_findings(rep), {"system": torsion_to_fs(p, pair, a.side).to_json(p)}


def cmd_fs_verify(a):
    p = _cat(a.category)
    pair = _pair(p, a.pair)
    rep = verify_fs(p, FactSystem(a.side, pair.t_set, pair.f_set))
    findings = [{"check": f["check"], "outcome": f["outcome"], "witness": f["witness"]} for f in rep["findings"]]
    if not findings:
        findings = [_finding("factorization system axioms", True, rep["checked"])]
    return findings, {"sample_size": rep["sample_size"], "members": rep["members"]}


def cmd_factorize(a):
    p = _cat(a.category)
    fs = _fs(p, a)
    f = _morphism(p, getattr(a, "from"), a.to, a.map)
    fact = factorize(p, f, fs)
    return [_finding("factorize", True, None)], {"morphism": f.to_json(), "side": fs.side, **fact.to_json()}


def cmd_fs_orthogonal(a):
    p = _cat(a.category)
    f = _literal(p, a.f, a.f_map)
    g = _literal(p, a.g, a.g_map)
    ok = orthogonal(p, f, g, a.side)
    return [_finding(f"{f.describe()} orthogonal to {g.describe()}", ok, None)], {"orthogonal": ok}


def cmd_silting_check(a):
    c = parse_candidate(a.complex, a.n, a.m)
    w = presilting_witness(c)
    ok = is_silting(c)
    wit = list(w) if w else (None if ok else {"summands": len(set(c.summands)), "needed": a.n})
    return [_finding("silting", ok, wit)], {"complex": c.labels()}


def cmd_silting_pair(a):
    c = parse_candidate(a.complex, a.n, a.m)
    if not is_silting(c):
        return [_finding("silting", False, presilting_witness(c))], None
    p = build_extended_category(a.n, a.m, a.field_char)
    pair = silted_pair(c, p)
    doc = pair.to_json(p)
    if a.output:
        _write(a.output, doc)
    return [_finding("silting", True, None), _finding("pair verifies", True, None)], {"pair": doc}


def _report_findings(rep):
    return [{"check": f["check"], "outcome": f["outcome"], "witness": f.get("witness")} for f in rep["findings"]]


def cmd_rec_build(a):
    if a.kind == "triangular":
        r = triangular_fixture()
    else:
        if not (a.a and a.c):
            raise InputError("a product recollement needs --a and --c")
        r = build_product_recollement(_cat(a.a), _cat(a.c))
    doc = serialize_recollement(r)
    result = {"B": list(r.B.labels)}
    if a.output:
        _write(a.output, doc)
        result["written"] = a.output
    else:
        result["recollement"] = doc
    return [_finding("build", True, None)], result


def cmd_rec_check(a):
    return _report_findings(check_recollement(_recollement(a.recollement))), None


def cmd_rec_hypotheses(a):
    return _report_findings(check_exactness_hypotheses(_recollement(a.recollement))), None


def cmd_rec_lemma(a):
    return _report_findings(check_neg_ext_adjoint_iso(_recollement(a.recollement))), None


def cmd_rec_glue(a):
    r = _recollement(a.recollement)
    p1 = pair_from_json(r.A, _read_json(a.pair1))
    p2 = pair_from_json(r.C, _read_json(a.pair2))
    g = glue_torsion(r, p1, p2)
    findings = _report_findings(g["hypotheses"])
    findings += _cond_findings(g["verification"])
    result = {"pair": g["pair"].to_json(r.B)}
    if a.side:
        fs = glue_fs(r, torsion_to_fs(r.A, p1, a.side), torsion_to_fs(r.C, p2, a.side), a.side)
        findings.append(_finding("membership agrees with glued classes", not fs["disagreements"], fs["disagreements"][:1] or None))
        rep = verify_fs(r.B, fs["fs"])
        findings.append(_finding("glued factorization system", rep["ok"], rep["findings"][:1] or None))
        result["system"] = fs["fs"].to_json(r.B)
    return findings, result


def cmd_selfcheck(a):
    from .selfcheck import run_all

    return run_all(a.cfg.search.jobs), None


# ---------------------------------------------------------------- parser


def _add_cap(sp):
    sp.add_argument("--mode", choices=["exact", "cap"], default="exact", help="T*F search mode")
    sp.add_argument("--cap-extra", type=int, default=0, help="extra dimension budget in cap mode")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="extrifact", description="Verify s-torsion pairs, factorization systems and recollements.")
    ap.add_argument("--format", choices=["json", "markdown"], default="json")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    ap.add_argument("--timing", action="store_true", help="add wall-clock timing to the report")
    ap.add_argument("--field-char", type=int, default=None, help="prime field characteristic (default: $EXTRIFACT_FIELD_CHAR or 2)")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    b = sub.add_parser("build", help="write a presentation document")
    b.add_argument("--type", default="a_n", choices=["a_n"])
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--m", type=int, default=1)
    b.add_argument("--dims-only", action="store_true")
    b.add_argument("-o", "--output")
    b.set_defaults(fn=cmd_build)

    d = sub.add_parser("dualize", help="opposite presentation")
    d.add_argument("category")
    d.add_argument("-o", "--output")
    d.set_defaults(fn=cmd_dualize)

    t = sub.add_parser("torsion").add_subparsers(dest="sub", parser_class=_Parser)
    t.required = True
    s = t.add_parser("verify")
    s.add_argument("category")
    s.add_argument("--pair", required=True)
    s.add_argument("--triangles", action="store_true", help="include a witness triangle per object")
    _add_cap(s)
    s.set_defaults(fn=cmd_torsion_verify)
    s = t.add_parser("enumerate")
    s.add_argument("category")
    _add_cap(s)
    s.set_defaults(fn=cmd_torsion_enumerate)
    s = t.add_parser("triangle")
    s.add_argument("category")
    s.add_argument("--pair", required=True)
    s.add_argument("--object", required=True)
    s.set_defaults(fn=cmd_torsion_triangle)

    f = sub.add_parser("fs").add_subparsers(dest="sub", parser_class=_Parser)
    f.required = True
    for name, fn in (("from-torsion", cmd_fs_from_torsion), ("verify", cmd_fs_verify), ("factorize", cmd_factorize)):
        s = f.add_parser(name)
        s.add_argument("category")
        s.add_argument("--pair", required=True)
        s.add_argument("--side", choices=SIDES, default="inflation")
        if name == "factorize":
            s.add_argument("--from", required=True)
            s.add_argument("--to", required=True)
            s.add_argument("--map", default="auto", help="'auto' or a JSON coefficient matrix")
        s.set_defaults(fn=fn)
    s = f.add_parser("orthogonal")
    s.add_argument("category")
    s.add_argument("--f", required=True, help="'SRC -> TGT'")
    s.add_argument("--g", required=True, help="'SRC -> TGT'")
    s.add_argument("--f-map", default="auto")
    s.add_argument("--g-map", default="auto")
    s.add_argument("--side", choices=SIDES, default="inflation")
    s.set_defaults(fn=cmd_fs_orthogonal)

    s = sub.add_parser("factorize", help="alias of 'fs factorize'")
    s.add_argument("category")
    s.add_argument("--pair", required=True)
    s.add_argument("--side", choices=SIDES, default="inflation")
    s.add_argument("--from", required=True)
    s.add_argument("--to", required=True)
    s.add_argument("--map", default="auto")
    s.set_defaults(fn=cmd_factorize)

    g = sub.add_parser("silting").add_subparsers(dest="sub", parser_class=_Parser)
    g.required = True
    for name, fn in (("check", cmd_silting_check), ("pair", cmd_silting_pair)):
        s = g.add_parser(name)
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--m", type=int, required=True)
        s.add_argument("--complex", required=True, help="e.g. 'P3[1]+P1[1]+I1[1]'")
        if name == "pair":
            s.add_argument("-o", "--output")
        s.set_defaults(fn=fn)

    r = sub.add_parser("recollement").add_subparsers(dest="sub", parser_class=_Parser)
    r.required = True
    s = r.add_parser("build")
    s.add_argument("kind", choices=["product", "triangular"])
    s.add_argument("--a")
    s.add_argument("--c")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_rec_build)
    for name, fn in (("check", cmd_rec_check), ("hypotheses", cmd_rec_hypotheses), ("lemma-iso", cmd_rec_lemma)):
        s = r.add_parser(name)
        s.add_argument("recollement", help="document path, JSON, or 'triangular'")
        s.set_defaults(fn=fn)
    s = r.add_parser("glue")
    s.add_argument("recollement")
    s.add_argument("--pair1", required=True)
    s.add_argument("--pair2", required=True)
    s.add_argument("--side", choices=SIDES, default=None, help="also glue the factorization systems")
    s.set_defaults(fn=cmd_rec_glue)

    s = sub.add_parser("selfcheck", help="run the shipped end-to-end checks")
    s.set_defaults(fn=cmd_selfcheck)
    return ap


# ---------------------------------------------------------------- output


def _status(findings) -> str:
    return "fail" if any(f["outcome"] == "fail" for f in findings) else "pass"


def _md_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return json.dumps(v, ensure_ascii=False)


def render_markdown(report: dict) -> str:
    lines = [f"# extrifact {' '.join(report['command'])}", "", f"status: **{report['status']}**", ""]
    if "error" in report:
        lines += [f"error: {report['error']}", ""]
    if report["findings"]:
        lines += ["| check | outcome | witness |", "|---|---|---|"]
        for f in report["findings"]:
            lines.append(f"| {f['check']} | {f['outcome']} | {_md_value(f['witness']).replace('|', '/')} |")
        lines.append("")
    res = report.get("result")
    if isinstance(res, dict):
        pairs = res.get("pairs") or ([res["pair"]] if "pair" in res else [])
        for i, pr in enumerate(pairs, 1):
            tag = f"{i}." if len(pairs) > 1 else "-"
            lines.append(f"{tag} T = add{{{', '.join(pr['T'])}}}; F = add{{{', '.join(pr['F'])}}}")
        if "first" in res:
            lines.append(f"- first: {' + '.join(res['first']['source']) or '0'} -> {' + '.join(res['first']['target']) or '0'}")
            lines.append(f"- second: {' + '.join(res['second']['source']) or '0'} -> {' + '.join(res['second']['target']) or '0'}")
        rest = {k: v for k, v in res.items() if k not in ("pairs", "pair", "first", "second")}
        if rest:
            lines += ["", "```json", json.dumps(rest, indent=1), "```"]
    return "\n".join(lines).rstrip() + "\n"


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    argv = list(sys.argv[1:] if argv is None else argv)
    report = {"schema": SCHEMA_TAG, "command": argv, "status": "error", "findings": []}
    fmt = "json"
    code = 2
    start = time.perf_counter()
    timing = False
    prev_p = el.characteristic()
    try:
        a = build_parser().parse_args(argv)
        fmt, timing = a.format, a.timing
        a.cfg = RunConfig.resolve(
            a.field_char,
            fmt=a.format,
            timing=a.timing,
            search=SearchConfig(getattr(a, "mode", "exact"), getattr(a, "cap_extra", 0), a.jobs),
        )
        a.field_char = a.cfg.field_char
        el.set_characteristic(a.field_char)
        findings, result = a.fn(a)
        report["findings"] = findings
        report["status"] = _status(findings)
        if result is not None:
            report["result"] = result
        code = 0 if report["status"] == "pass" else 1
    except _Usage as exc:
        report["error"] = str(exc)
    except (ExtrifactError, ValueError) as exc:
        report["error"] = f"{type(exc).__name__}: {exc}"
    finally:
        el.set_characteristic(prev_p)
    if timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    _validate(report, "report.schema.json")
    if fmt == "markdown":
        out.write(render_markdown(report))
    else:
        out.write(json.dumps(report, indent=1, ensure_ascii=False) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
