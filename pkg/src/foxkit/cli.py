"""Command-line front end: ``foxkit <command> ...`` writes one JSON report per run.

Exit status is 0 when the report says ok, 1 when a check came out negative,
2 for usage or input errors and 3 when a computation is refused.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import bstorsion, cup, fox, gamma, hermitian
from .errors import FoxkitError, InputError
from .fox import Presentation
from .presfile import CORPUS, corpus_text, format_presentation, parse_presentation, resolve_path

SCHEMA = 1


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


# ----------------------------------------------------------------------------
# inputs


class _Inputs:
    """Collects every input byte string so the report digest covers all of them."""

    def __init__(self, argv: list[str]):
        self.h = hashlib.sha256("\0".join(argv).encode("utf-8"))

    def text(self, path: str) -> str:
        data = resolve_path(path).read_bytes()
        self.h.update(b"\0" + data)
        return data.decode("utf-8")

    def presentation(self, path: str) -> Presentation:
        return parse_presentation(self.text(path))

    def json(self, arg: str):
        raw = arg if arg.lstrip().startswith(("{", "[")) else self.text(arg)
        try:
            return json.loads(raw)
        except json.JSONDecodeError as e:
            raise InputError(f"invalid JSON: {e}") from None

    def digest(self) -> str:
        return self.h.hexdigest()


def _pres_json(p: Presentation) -> dict:
    return {
        "name": p.name,
        "class": p.group.label(),
        "generators": list(p.generators),
        "relators": [p.format_relator(r) for r in p.relators],
        "deficiency": p.deficiency,
    }


# ----------------------------------------------------------------------------
# commands; each returns (results, ok)


def cmd_fox(args, inp: _Inputs):
    p = inp.presentation(args.file)
    F = p.free_group
    cols = range(p.ngens) if args.generator is None else [_gen_index(p, args.generator)]
    rows = []
    for r in p.relators:
        rows.append({p.generators[i]: fox.fox_derivative(r, i, F).to_text() for i in cols})
    return {"presentation": _pres_json(p), "derivatives": rows}, True


def _gen_index(p: Presentation, name: str) -> int:
    if name not in p.generators:
        raise InputError(f"unknown generator {name!r}")
    return p.generators.index(name)


def cmd_normalize(args, inp: _Inputs):
    p = inp.presentation(args.file)
    q = fox.normalize_presentation(p)
    ok = q.deficiency == p.deficiency and q.is_normalized()
    if q.group.decidable:
        ok = ok and all(q.relator_is_trivial(r) for r in q.relators)
    return {
        "input": _pres_json(p),
        "normalized": _pres_json(q),
        "text": format_presentation(q),
    }, ok


def cmd_complex(args, inp: _Inputs):
    p = inp.presentation(args.file)
    c = fox.fox_lyndon_complex(p)
    out = {"presentation": _pres_json(p), "d1": c.d1.to_text(), "d2": c.d2.to_text(), "verified": c.verified}
    if not c.verified:
        return out, True
    rep = fox.verify_boundary_squared(c)
    out["composite"] = rep.composite.to_text()
    return out, rep.ok


def cmd_dualize(args, inp: _Inputs):
    p = inp.presentation(args.file)
    c = fox.fox_lyndon_complex(p)
    m = fox.dualizing_presentation(c)
    return {"presentation": _pres_json(p), "w": list(p.w.signs), "matrix": m.to_text()}, True


def cmd_verify_cup(args, inp: _Inputs):
    p = inp.presentation(args.file)
    return _verify_cup(p), None


def _verify_cup(p: Presentation) -> dict:
    q = fox.normalize_presentation(p)
    j = cup.build_j(q)
    rep = cup.verify_chain_map(j)
    deg1 = [t for x in rep.degree1 for t in cup.render(q, x)]
    return {
        "presentation": q.name or "",
        "degree1_residual": deg1,
        "degree2_residual": cup.render(q, rep.degree2),
        "relator_summands_zero": rep.summands_ok,
        "ok": rep.ok,
    }


def _gamma_input(args, inp: _Inputs):
    p = inp.presentation(args.file)
    return p, gamma.from_json(p.group, inp.json(args.element), p.w)


def cmd_gamma_nf(args, inp: _Inputs):
    p, x = _gamma_input(args, inp)
    nf = gamma.gamma_normal_form(x)
    deltas, offd = gamma.gamma_coordinates(x)
    return {
        "normal_form": gamma.to_json(nf),
        "eta": list(deltas),
        "odot": {f"{i},{j}": r.to_text() for (i, j), r in sorted(offd.items())},
        "mod2": list(gamma.reduce_mod2(x).bits),
        "zero": nf.is_empty(),
    }, True


def cmd_bm_eval(args, inp: _Inputs):
    p, x = _gamma_input(args, inp)
    form = hermitian.bm_evaluate(x)
    return {"form": form.to_json(), "even": hermitian.is_even(form)}, True


def cmd_bm_preimage(args, inp: _Inputs):
    p = inp.presentation(args.file)
    form = hermitian.HermitianForm.from_json(p.group, inp.json(args.form), p.w)
    x = hermitian.bm_preimage(form)
    back = hermitian.bm_evaluate(x)
    return {"preimage": gamma.to_json(x), "roundtrip": back == form}, back == form


def cmd_bs_torsion(args, inp: _Inputs):
    rep = bstorsion.torsion_report(args.m, args.depth)
    return rep.to_json(), rep.torsion_free


def selftest_item(name: str) -> dict:
    p = parse_presentation(corpus_text(name))
    boundary = fox.verify_boundary_squared(fox.fox_lyndon_complex(p)).ok
    q = fox.normalize_presentation(p)
    normal = q.deficiency == p.deficiency and q.is_normalized() and all(q.relator_is_trivial(r) for r in q.relators)
    rep = cup.verify_chain_map(cup.build_j(q))
    return {
        "name": name,
        "boundary_squared_zero": boundary,
        "normalization": normal,
        "chain_map": rep.ok,
        "ok": boundary and normal and rep.ok,
    }


def cmd_selftest(args, inp: _Inputs):
    items = [selftest_item(n) for n in CORPUS]
    tors = bstorsion.torsion_report(2).to_json()
    ok = all(i["ok"] for i in items) and tors["torsion_free"]
    return {"corpus": items, "bs_torsion": tors}, ok


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="foxkit", description="Exact Fox calculus and group ring computations.")
    ap.add_argument("--out", help="write the JSON report here instead of standard output")
    ap.add_argument("--quiet", action="store_true", help="do not print the report; use the exit status")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_, file=True):
        sp = sub.add_parser(name, help=help_)
        if file:
            sp.add_argument("file", help="presentation file (bundled corpus/<name>.pres also accepted)")
        sp.set_defaults(fn=fn)
        return sp

    add("fox", cmd_fox, "Fox derivatives of every relator").add_argument("--generator")
    add("normalize", cmd_normalize, "rewrite relators as products of distinct generators")
    add("complex", cmd_complex, "the boundary matrices and the check that their composite vanishes")
    add("dualize", cmd_dualize, "presentation matrix of the dualizing module")
    add("verify-cup", cmd_verify_cup, "verify the chain maps j_0, j_1, j_2 on the normalized presentation")
    for name, fn, h in (
        ("gamma-nf", cmd_gamma_nf, "normal form of a Gamma element"),
        ("bm-eval", cmd_bm_eval, "evaluate B_M on a Gamma element"),
    ):
        add(name, fn, h).add_argument("element", help="JSON file or inline JSON")
    add("bm-preimage", cmd_bm_preimage, "a Gamma preimage of a hermitean form").add_argument(
        "form", help="JSON file or inline JSON with 'entries'"
    )
    sp = add("bs-torsion", cmd_bs_torsion, "Smith normal form of the truncated relation lattice", file=False)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--depth", type=int)
    add("selftest", cmd_selftest, "run the bundled corpus checks", file=False)
    return ap


def run_command(argv: list[str]) -> tuple[dict, int]:
    """Run one command; returns the report and the exit status."""
    start = time.perf_counter()
    report: dict = {"schema": SCHEMA, "command": argv[0] if argv else None}
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as e:
        report.update(input_digest=None, results=None, ok=False, error={"code": "usage", "message": str(e)})
        return _finish(report, start), 2
    report["command"] = args.command
    inp = _Inputs(argv[argv.index(args.command) + 1:])
    try:
        results, ok = args.fn(args, inp)
        if ok is None:
            ok = bool(results.get("ok"))
        report.update(input_digest=inp.digest(), results=results, ok=ok)
        code = 0 if ok else 1
    except InputError as e:
        report.update(input_digest=inp.digest(), results=None, ok=False, error={"code": e.code, "message": str(e)})
        code = 2
    except FoxkitError as e:
        report.update(input_digest=inp.digest(), results=None, ok=False, error={"code": e.code, "message": str(e)})
        code = 3
    return _finish(report, start), code


def _finish(report: dict, start: float) -> dict:
    report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    # global flags may appear anywhere
    out, quiet, rest = None, False, []
    it = iter(argv)
    for a in it:
        if a == "--quiet":
            quiet = True
        elif a == "--out":
            out = next(it, None)
            if out is None:
                rest.append(a)
        elif a.startswith("--out="):
            out = a.split("=", 1)[1]
        else:
            rest.append(a)
    if "-h" in rest or "--help" in rest or not rest:
        build_parser().print_help()
        return 0 if rest else 2
    report, code = run_command(rest)
    text = dumps(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    elif not quiet:
        sys.stdout.write(text)
    if code == 2 and report.get("error", {}).get("code") == "usage" and not quiet:
        sys.stderr.write(f"foxkit: {report['error']['message']}\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
