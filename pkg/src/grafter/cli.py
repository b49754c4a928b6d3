"""Command-line front end.

Exit status: 0 on success (Holds, Equal, Related), 1 when a check fails
(Counterexample, NotEstablished), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import congruence as cg
from . import twocell as tc
from .alphabet import Alphabet
from .errors import GrafterError
from .garden import GardenStore, generate
from .grafting import graft_all
from .model import FiniteModel, Holds
from .render import plant_term, render

OK, FAILED, USAGE = 0, 1, 2


def _arg(text: str) -> str:
    """Resolve ``@path`` indirection for term arguments."""
    if text.startswith("@"):
        return Path(text[1:]).read_text(encoding="utf-8").strip()
    return text


def _emit(out, record: dict, as_json: bool, human: str):
    if as_json:
        out.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        out.write(human + "\n")


def _plant_record(p, letters=None) -> dict:
    rec = {"code": p.code.decode("ascii"), "arity": str(p.arity), "graftings": p.graftings,
           "vertices": p.letters}
    if letters is not None:
        rec["letters"] = letters
    try:
        rec["term"] = plant_term(p)
    except GrafterError:
        pass
    return rec


def _plant_line(rec: dict) -> str:
    extra = f"  letters={rec['letters']}" if "letters" in rec else ""
    return f"{rec['arity']:>6}  graftings={rec['graftings']}{extra}  {rec.get('term', rec['code'])}"


# -- subcommands -------------------------------------------------------------------

def cmd_graft(args, out) -> int:
    alpha = Alphabet.load(args.alphabet)
    p, q = alpha.plant(_arg(args.term1)), alpha.plant(_arg(args.term2))
    results = graft_all(p, q)
    for r in results:
        rec = _plant_record(r)
        _emit(out, rec, args.json, _plant_line(rec))
    if not args.json:
        out.write(f"{len(results)} plants\n")
    return OK


def _parse_arity(text: str) -> tuple[int, int]:
    try:
        m, n = text.split("->")
        return int(m), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"arity must look like m->n, got {text!r}")


def cmd_garden(args, out) -> int:
    alpha = Alphabet.load(args.alphabet)
    if args.load:
        store = GardenStore.load(args.load, alpha)
    else:
        store = generate(alpha, args.max_letters, threads=args.threads)
    if args.save:
        store.save(args.save)
    entries = store.sorted_entries()
    if args.arity:
        entries = [e for e in entries if tuple(e.arity) == args.arity]
    for e in entries:
        rec = _plant_record(e.plant, e.letters)
        _emit(out, rec, args.json, _plant_line(rec))
    stats = store.stats()
    if args.json:
        out.write(json.dumps({"census": stats, "listed": len(entries)}, sort_keys=True) + "\n")
    else:
        out.write(f"{len(entries)} plants listed, {stats['total']} in garden\n")
        for key, n in stats["by_letters_arity"].items():
            letters, arity = key.split(":")
            out.write(f"  letters={letters} arity={arity}: {n}\n")
    if args.figure:
        from .plotting import census_figure
        census_figure(store, args.figure, title=f"{Path(args.alphabet).stem} garden")
    return OK


def cmd_paths(args, out) -> int:
    alpha = Alphabet.load(args.alphabet)
    src, tgt = alpha.plant(_arg(args.source)), alpha.plant(_arg(args.target))
    paths = cg.enumerate_paths(alpha, src, tgt, args.max_len)
    for p in paths:
        term = tc.format_pasting(p)
        _emit(out, {"steps": len(p.steps), "term": term}, args.json, f"{len(p.steps)}  {term}")
    if not args.json:
        out.write(f"{len(paths)} paths\n")
    return OK


def _session(args) -> cg.Session:
    alpha = Alphabet.load(args.alphabet)
    if args.relations:
        alpha.extend(Path(args.relations).read_text(encoding="utf-8"), args.relations)
    budget = cg.Budget.parse(args.budget) if args.budget else None
    if args.no_relations:
        return cg.Session(alpha, plant_relations=[], cell_relations=[], budget=budget)
    return cg.Session(alpha, budget=budget)


def _verdict_record(session: cg.Session, result) -> dict:
    if isinstance(result, cg.Equal):
        cert = []
        for coef, inst in result.certificate:
            cert.append({"coefficient": coef, "relation": inst.relation,
                         "instance": tc.format_sum(tc.TwoCellSum.of(session.instance_terms(inst),
                                                                    session.alphabet))})
        return {"verdict": "Equal", "certificate": cert}
    return {"verdict": "NotEstablished", "reason": result.reason, "exhausted": result.exhausted}


def _verdict_lines(rec: dict) -> str:
    if rec["verdict"] == "Equal":
        lines = [f"Equal ({len(rec['certificate'])} relation instances)"]
        for c in rec["certificate"]:
            lines.append(f"  {c['coefficient']:+d} x {c['relation']}: {c['instance']}")
        return "\n".join(lines)
    return f"NotEstablished: {rec['reason']}"


def _read_cells(path: str) -> list[str]:
    lines = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def cmd_check(args, out) -> int:
    session = _session(args)
    alpha = session.alphabet
    if args.equal:
        a = tc.TwoCellSum.parse(_arg(args.equal[0]), alpha)
        b = tc.TwoCellSum.parse(_arg(args.equal[1]), alpha)
        result = session.equal(a, b)
        rec = _verdict_record(session, result)
        if isinstance(result, cg.Equal):
            rec["replay"] = session.replay(result, a, b)
        _emit(out, rec, args.json, _verdict_lines(rec))
        return OK if result else FAILED
    cells = [tc.TwoCellSum.parse(text, alpha) for text in _read_cells(args.diagram)]
    if len(cells) < 2:
        raise GrafterError("a diagram file needs at least two 2-cell terms")
    status = OK
    for i, j, result in session.check_diagram(cells):
        rec = {"pair": [i, j], **_verdict_record(session, result)}
        _emit(out, rec, args.json, f"cells {i} and {j}: " + _verdict_lines(rec))
        if not result:
            status = FAILED
    return status


def cmd_model(args, out) -> int:
    model = FiniteModel.load(args.modelfile)
    status = OK
    if args.relation:
        objects = [args.object] if args.object else model.objects
        for S in objects:
            result = model.check_relation(args.relation, S)
            rec = {"relation": args.relation, "object": S}
            if isinstance(result, Holds):
                rec.update(verdict="Holds", checked=result.checked)
                human = f"{args.relation} on {S}: Holds ({result.checked} elements)"
            else:
                rec.update(verdict="Counterexample", **result.detail)
                human = f"{args.relation} on {S}: Counterexample " + json.dumps(result.detail, sort_keys=True)
                status = FAILED
            _emit(out, rec, args.json, human)
    else:
        morphisms = model.morphisms(args.morphisms)
        result = model.check_naturality(args.naturality, morphisms)
        rec = {"footpath": args.naturality, "morphisms": args.morphisms, "count": len(morphisms)}
        if isinstance(result, Holds):
            rec.update(verdict="Natural", checked=result.checked)
            human = f"{args.naturality}: Natural over {len(morphisms)} {args.morphisms}"
        else:
            rec.update(verdict="Counterexample", **result.detail)
            human = f"{args.naturality}: Counterexample " + json.dumps(result.detail, sort_keys=True)
            status = FAILED
        _emit(out, rec, args.json, human)
    return status


def cmd_render(args, out) -> int:
    alpha = Alphabet.load(args.alphabet)
    p = alpha.plant(_arg(args.term))
    text = plant_term(p) if args.format == "term" else render(p, args.format)
    if args.json:
        out.write(json.dumps({"format": args.format, "code": p.code.decode("ascii"), "text": text},
                             sort_keys=True) + "\n")
    else:
        out.write(text if text.endswith("\n") else text + "\n")
    if args.figure:
        from .plotting import plant_figure
        plant_figure(p, args.figure, title=_arg(args.term))
    return OK


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grafter", description="Plants, grafting and footpath checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, alphabet_positional=False):
        if alphabet_positional:
            p.add_argument("alphabet", help="alphabet file (or name of a shipped one)")
        else:
            p.add_argument("--alphabet", default="leibniz.alpha", help="alphabet file (default: leibniz.alpha)")
        p.add_argument("--json", action="store_true", help="line-delimited JSON records")

    p = sub.add_parser("graft", help="all graftings of two plants")
    p.add_argument("term1")
    p.add_argument("term2")
    common(p)
    p.set_defaults(func=cmd_graft)

    p = sub.add_parser("garden", help="enumerate the garden up to a word length")
    common(p, True)
    p.add_argument("--max-letters", type=int, default=3)
    p.add_argument("--arity", type=_parse_arity, help="only list plants of this arity (m->n)")
    p.add_argument("--save", help="write the garden cache file here")
    p.add_argument("--load", help="read a garden cache file instead of generating")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--figure", help="write a census bar chart (png, pdf, svg)")
    p.set_defaults(func=cmd_garden)

    p = sub.add_parser("paths", help="enumerate footpath composites between two plants")
    common(p, True)
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--max-len", type=int, default=3)
    p.set_defaults(func=cmd_paths)

    p = sub.add_parser("check", help="decide equalities of 2-cells modulo the relations")
    common(p, True)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--equal", nargs=2, metavar="SUM")
    mode.add_argument("--diagram", metavar="FILE", help="one 2-cell term per line")
    p.add_argument("--budget", help="saturation budget: steps or size,steps")
    p.add_argument("--relations", metavar="FILE", help="extra declarations in alphabet format")
    p.add_argument("--no-relations", action="store_true", help="ignore every relation")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("model", help="check relations or naturality in a finite model")
    p.add_argument("modelfile")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--relation")
    mode.add_argument("--naturality", metavar="FOOTPATH")
    p.add_argument("--object", help="test object (default: all)")
    p.add_argument("--morphisms", choices=["homomorphisms", "functions"], default="homomorphisms")
    p.add_argument("--threads", type=int, default=1, help="accepted for symmetry; checks run serially")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_model)

    p = sub.add_parser("render", help="draw a plant")
    p.add_argument("term")
    common(p)
    p.add_argument("--format", choices=["ascii", "dot", "term"], default="ascii")
    p.add_argument("--figure", help="also draw it with matplotlib to this file")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except (GrafterError, OSError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"grafter {args.command}: {msg}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
