"""Command-line front end: ``ordlab <command> ...``.

Exit status is 0 on success, 1 on domain errors (bad terms, bad instances,
failed preconditions) and 2 when a budget runs out or a value is out of the
supported range.  JSON reports carry ``schema: 1`` and sorted keys, so the
same input always produces the same bytes.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import cnf as C
from . import embeddings as E
from . import hausdorff as H
from . import refutation as R
from . import sigma2 as S
from .errors import BudgetError, DomainError, OrdlabError, OutOfRangeError
from .presentation import denote
from .terms import classify, depth, is_well_order, parse, show, to_json

SCHEMA = 1


def _cnf_report(t, prefix):
    out = {"term": show(t)}
    try:
        r = H.rank(t, prefix)
    except OutOfRangeError as e:
        out.update(method="structural", rankNote=str(e))
        out["cnf"] = C.simplify_base(C.structural_cnf(t)).to_json()
        return out
    out.update(r.to_json())
    out["method"] = "hausdorff"
    out["cnf"] = C.simplify_base(H.cnf_via_hausdorff(t)).to_json()
    return out


def cmd_parse(a):
    t = parse(a.term)
    return {"term": show(t), "tree": to_json(t), "depth": depth(t)}


def cmd_classify(a):
    t = parse(a.term)
    c = classify(t)
    return {"term": show(t), "wellOrder": c.is_well_order,
            "weakWellOrder": c.is_weak_well_order, "scattered": c.is_scattered}


def cmd_cnf(a):
    return _cnf_report(parse(a.term), a.prefix)


def cmd_rank(a):
    t = parse(a.term)
    out = _cnf_report(t, a.prefix)
    if "rank" not in out:
        raise OutOfRangeError(out["rankNote"])
    return out


def cmd_add(a):
    base = parse(a.base)
    s, t = C.parse_seq(a.sigma, base), C.parse_seq(a.tau, base)
    return {"sigma": s.to_json(), "tau": t.to_json(), "sum": C.cnf_add(s, t).to_json()}


def cmd_derive(a):
    t = parse(a.term)
    rels = H.stages(t, a.prefix, a.stages)
    return {"term": show(t), "prefix": a.prefix,
            "stages": [{"stage": r.stage, "classes": r.count,
                        "partition": [[E.jsonable(x) for x in c] for c in r.classes]}
                       for r in rels]}


def cmd_embed(a):
    dom, cod = parse(a.dom), parse(a.cod)
    res = E.search_embedding(denote(dom), denote(cod), a.prefix)
    return {"dom": show(dom), "cod": show(cod), **res.to_json()}


def cmd_self_embed(a):
    t = parse(a.term)
    if is_well_order(t):
        raise DomainError(f"{show(t)} is a well order: no initial segment embeds "
                          "into a proper initial segment")
    w = E.wwo_witness(t)
    v = E.verify_embedding(w, sample_size=a.prefix)
    return {"term": show(t), "witness": w.to_json(), "verification": v.to_json()}


def cmd_wwo_check(a):
    t = parse(a.term)
    out = cmd_classify(a)
    if is_well_order(t):
        out["reason"] = "well order"
        return out
    w = E.wwo_witness(t)
    out["reason"] = "embeds into a proper initial segment"
    out["witness"] = w.to_json()
    out["verification"] = E.verify_embedding(w, sample_size=a.prefix).to_json()
    return out


def cmd_refute(a):
    sigma = C.parse_seq(a.sigma, parse(a.base))
    cand = R.candidate(sigma, a.candidate, a.seed)
    res = R.check_no_segment_self_embedding(sigma, cand.fn, cand.target, a.budget)
    return {"sigma": sigma.to_json(), "candidate": cand.to_json(), "result": res.to_json()}


def cmd_sigma2(a):
    try:
        with open(a.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DomainError(f"cannot read {a.file}: {e.strerror}") from None
    inst = S.Sigma2Instance.loads(text)
    rep = S.demo(inst, a.i, a.j, a.primed)
    return {"instance": inst.to_json(), "report": rep.to_json(), "_table": rep.table()}


COMMANDS = {
    "parse": cmd_parse, "classify": cmd_classify, "cnf": cmd_cnf, "add": cmd_add,
    "rank": cmd_rank, "derive": cmd_derive, "embed": cmd_embed,
    "wwo-check": cmd_wwo_check, "self-embed": cmd_self_embed, "refute": cmd_refute,
    "sigma2": cmd_sigma2,
}


class _Parser(argparse.ArgumentParser):
    # usage errors are domain errors; status 2 is reserved for budgets
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--prefix", type=int, default=40, help="points examined (default 40)")
    common.add_argument("--budget", type=int, default=R.DEFAULT_BUDGET,
                        help="evaluation budget (default 10000)")

    p = _Parser(prog="ordlab", description="Linear orders, CNF and embeddings.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("parse", "classify", "cnf", "rank", "wwo-check", "self-embed"):
        sub.add_parser(name, parents=[common]).add_argument("term")
    sp = sub.add_parser("add", parents=[common])
    sp.add_argument("sigma")
    sp.add_argument("tau")
    sp.add_argument("--base", default="w")
    sp = sub.add_parser("derive", parents=[common])
    sp.add_argument("term")
    sp.add_argument("--stages", type=int, default=3)
    sp = sub.add_parser("embed", parents=[common])
    sp.add_argument("dom")
    sp.add_argument("cod")
    sp = sub.add_parser("refute", parents=[common])
    sp.add_argument("sigma", help="segment bound, e.g. [1,0]")
    sp.add_argument("--base", default="w")
    sp.add_argument("--candidate", default="collapse", choices=sorted(R.FAMILIES))
    sp.add_argument("--seed", type=int, default=0)
    sp = sub.add_parser("sigma2", parents=[common])
    sp.add_argument("action", choices=("demo",))
    sp.add_argument("file")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--primed", action="store_true")
    return p


def _text(report) -> str:
    lines = []
    for k, v in report.items():
        if k.startswith("_"):
            continue
        lines.append(f"{k}: {v if isinstance(v, str) else json.dumps(v, sort_keys=True)}")
    if "_table" in report:
        lines += ["", report["_table"]]
    return "\n".join(lines)


def render(report, fmt: str) -> str:
    if fmt == "json":
        body = {k: v for k, v in report.items() if not k.startswith("_")}
        return json.dumps({"schema": SCHEMA, **body}, sort_keys=True)
    return _text(report)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code
    try:
        report = COMMANDS[args.command](args)
    except (BudgetError, OutOfRangeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OrdlabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(render(report, args.format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
