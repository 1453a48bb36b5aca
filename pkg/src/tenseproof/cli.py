"""Command-line front end.

Exit status is 0 when a proof is accepted, found or a query holds, 1 when it
is rejected, not found or does not hold, and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path
from typing import Callable, Sequence

from .axioms import AxiomError, AxiomSyntaxError, PathGrammar, completion_member, parse_axiom, parse_axiom_file, parse_tree
from .dot import polytree_dot, proof_dot, propagation_dot
from .formula import FormulaSyntaxError, parse_formula
from .generate import proof_corpus
from .polytree import PolytreeError, graph_of, labeled_sequent_of, to_nested, to_polytree
from .proof import Calculus, CheckReport, Proof, check, dkt, lkt_pr, lkt_st, skt
from .proofio import ProofSyntaxError, is_labeled_text, proof_from_text, proof_to_text
from .propagation import pg_of_labeled, pg_of_nested
from .prover import Budget, prove_deep, prove_labeled
from .sequent import LabelGen, LabeledSequent, SequentSyntaxError, parse_labeled, parse_nested, show_labeled, show_nested
from .translate import (
    TranslationError,
    deep_to_shallow,
    eliminate_structural,
    labeled_to_deep,
    pipeline_reverse,
    shallow_to_labeled,
)

EXIT_OK, EXIT_NO, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    """Bad input; the message already names the file and position."""


# -- input helpers --------------------------------------------------------------

def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None


def load_axioms(path: str | None) -> list:
    if path is None:
        return []
    try:
        return parse_axiom_file(_read(path))
    except AxiomSyntaxError as e:
        if e.line is None:
            raise InputError(f"{path}: {e}") from None
        where = f"{path}:{e.line}" + (f":{e.column}" if e.column is not None else "")
        raise InputError(f"{where}: {str(e).rsplit(' (line', 1)[0]}") from None
    except AxiomError as e:
        raise InputError(f"{path}: {e}") from None


def load_proof(path: str) -> Proof:
    text = _read(path)
    try:
        return proof_from_text(text, labeled=is_labeled_text(text))
    except ProofSyntaxError as e:
        raise InputError(f"{path}:{e.line}:{e.column}: {str(e).rsplit(' (line', 1)[0]}") from None


def _formula(text: str):
    try:
        return parse_formula(text)
    except FormulaSyntaxError as e:
        raise InputError(f"formula: {e}") from None


def looks_labeled(text: str) -> bool:
    return bool(re.search(r"R\s*\(|[A-Za-z_][A-Za-z0-9_]*\s*:", text))


def _sequent(text: str, labeled: bool | None = None):
    labeled = looks_labeled(text) if labeled is None else labeled
    try:
        return parse_labeled(text) if labeled else parse_nested(text)
    except (SequentSyntaxError, FormulaSyntaxError) as e:
        raise InputError(f"sequent: {e}") from None


def _show(s) -> str:
    return show_labeled(s) if isinstance(s, LabeledSequent) else show_nested(s)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _print_json(obj: object) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False))


# -- calculi ----------------------------------------------------------------------

def calculus_for(name: str, axioms: list, proof: Proof | None, modal_only: bool, allow_open: bool = False) -> Calculus:
    """``lkt`` picks the propagation variant when the proof uses ``l_prop``."""
    if name == "lkt":
        uses_prop = proof is not None and any(n.rule == "l_prop" for _, n in proof.walk())
        name = "lkt-pr" if uses_prop else "lkt-st"
    make = {"skt": skt, "dkt": dkt, "lkt-st": lkt_st, "lkt-pr": lkt_pr}[name]
    try:
        return make(axioms, modal_only=modal_only, allow_open=allow_open)
    except AxiomError as e:
        raise InputError(str(e)) from None


# -- check ------------------------------------------------------------------------

def cmd_check(args: argparse.Namespace) -> int:
    axioms = load_axioms(args.axioms)
    reports: list[tuple[str, CheckReport]] = []
    for path in args.proof:
        p = load_proof(path)
        calc = calculus_for(args.calculus, axioms, p, args.modal_fragment, args.allow_open)
        reports.append((path, check(p, calc)))
    if args.json:
        dicts = [dict(file=path, **r.to_dict()) for path, r in reports]
        _print_json(dicts[0] if len(dicts) == 1 else dicts)
    else:
        for path, r in reports:
            lines = r.lines()
            print(f"{path}: {lines[0]}")
            for line in lines[1:]:
                print(f"  {line}")
    return EXIT_OK if all(r.accepted for _, r in reports) else EXIT_NO


# -- translate ----------------------------------------------------------------------

def _route(src: str, dst: str, axioms: list, modal: bool, start: str | None) -> list[tuple[str, Callable[[Proof], Proof]]]:
    c_skt = skt(axioms, modal_only=modal)
    c_lst = lkt_st(axioms, modal_only=modal)
    to_lab = ("shallow_to_labeled", lambda p: shallow_to_labeled(p, c_skt, start=start or "x"))
    elim = ("eliminate_structural", lambda p: eliminate_structural(p, c_lst))
    to_deep = ("labeled_to_deep", lambda p: labeled_to_deep(p, start))
    to_shallow = ("deep_to_shallow", lambda p: deep_to_shallow(p, c_skt))
    routes = {
        ("skt", "lkt"): [to_lab],
        ("skt", "dkt"): [to_lab, elim, to_deep],
        ("lkt", "lkt"): [elim],
        ("lkt", "dkt"): [elim, to_deep],
        ("lkt", "skt"): [("pipeline_reverse", lambda p: pipeline_reverse(p, c_skt, start))],
        ("dkt", "skt"): [to_shallow],
        ("dkt", "lkt"): [to_shallow, to_lab],
    }
    if (src, dst) not in routes:
        raise InputError(f"no translation from {src} to {dst}")
    return routes[(src, dst)]


def cmd_translate(args: argparse.Namespace) -> int:
    axioms = load_axioms(args.axioms)
    p = load_proof(args.proof)
    stages = _route(args.src, args.dst, axioms, args.modal_fragment, args.start)
    calc_in = calculus_for(args.src, axioms, p, args.modal_fragment)
    report_in = check(p, calc_in)
    if not report_in.accepted:
        if args.json:
            _print_json({"input": report_in.to_dict(), "accepted": False})
        else:
            print("input proof is rejected; nothing translated")
            print("\n".join(report_in.lines()))
        return EXIT_NO
    timings = []
    out = p
    for name, fn in stages:
        t0 = time.perf_counter()
        try:
            out = fn(out)
        except (TranslationError, AxiomError) as e:
            raise InputError(f"{name}: {e}") from None
        timings.append({"stage": name, "seconds": round(time.perf_counter() - t0, 6), "nodes": out.size()})
    calc_out = calculus_for(args.dst, axioms, out, args.modal_fragment)
    report_out = check(out, calc_out)
    text = proof_to_text(out)
    if args.out:
        _emit(text, args.out)
    summary = {
        "from": args.src,
        "to": args.dst,
        "calculus_in": str(calc_in),
        "calculus_out": str(calc_out),
        "accepted": report_out.accepted,
        "rule_counts_in": p.rule_counts(),
        "rule_counts_out": out.rule_counts(),
        "stages": timings,
        "conclusion": _show(out.conclusion),
    }
    if args.json:
        if not args.out:
            summary["proof"] = text
        if not report_out.accepted:
            summary["diagnostics"] = report_out.to_dict()["diagnostics"]
        _print_json(summary)
    else:
        if not args.out:
            sys.stdout.write(text)
        log = sys.stderr if not args.out else sys.stdout
        print(f"{args.src} -> {args.dst}: {p.size()} rules in, {out.size()} rules out", file=log)
        for t in timings:
            print(f"  {t['stage']}: {t['nodes']} rules, {t['seconds']:.4f}s", file=log)
        print(f"  output {'accepted' if report_out.accepted else 'REJECTED'} by {calc_out}", file=log)
        if not report_out.accepted:
            print("\n".join(report_out.lines()), file=log)
    return EXIT_OK if report_out.accepted else EXIT_NO


# -- prove --------------------------------------------------------------------------

def cmd_prove(args: argparse.Namespace) -> int:
    axioms = load_axioms(args.axioms)
    goal = _formula(args.formula)
    budget = Budget(depth=args.depth, steps=args.steps, structural=args.structural)
    t0 = time.perf_counter()
    try:
        if args.calculus == "lkt":
            found = prove_labeled(goal, axioms, budget)
        else:
            found = prove_deep(goal, axioms, budget)
            if found is not None and args.calculus == "skt":
                found = deep_to_shallow(found, skt(axioms))
    except AxiomError as e:
        raise InputError(str(e)) from None
    seconds = round(time.perf_counter() - t0, 6)
    text = proof_to_text(found) if found is not None else None
    if found is not None and args.out:
        _emit(text, args.out)
    if args.json:
        obj: dict = {"calculus": args.calculus, "goal": str(goal), "found": found is not None, "seconds": seconds}
        if found is not None:
            obj.update(nodes=found.size(), height=found.height(), rule_counts=found.rule_counts())
            if not args.out:
                obj["proof"] = text
        _print_json(obj)
    elif found is None:
        print(f"no proof of {goal} within depth {args.depth}")
    else:
        if not args.out:
            sys.stdout.write(text)
        else:
            print(f"proof of {goal}: {found.size()} rules, written to {args.out}")
    return EXIT_OK if found is not None else EXIT_NO


# -- complete -----------------------------------------------------------------------

def _tree_lines(node, depth: int = 0) -> list[str]:
    pad = "  " * depth
    if node.is_identity:
        return [f"{pad}{node.symbol.value}  [{node.start},{node.end})"]
    prod = node.production()
    tag = " (inverse)" if node.inverted else ""
    out = [f"{pad}{node.symbol.value} <- {prod}{tag}  [{node.start},{node.end})"]
    for c in node.children:
        out += _tree_lines(c, depth + 1)
    return out


def _tree_dict(node) -> dict:
    return {
        "symbol": node.symbol.value,
        "production": None if node.is_identity else str(node.production()),
        "inverted": node.inverted,
        "span": [node.start, node.end],
        "children": [_tree_dict(c) for c in node.children],
    }


def cmd_complete(args: argparse.Namespace) -> int:
    axioms = load_axioms(args.axioms)
    try:
        query = parse_axiom(args.query)
        path = query.as_path()
    except AxiomError as e:
        raise InputError(f"query: {e}") from None
    grammar = PathGrammar(axioms)
    member = completion_member(grammar, path.antecedent, path.consequent)
    tree = parse_tree(grammar, path.antecedent, path.consequent) if member and args.tree else None
    if args.json:
        obj: dict = {"query": str(path), "member": member}
        if tree is not None:
            obj["parse_tree"] = _tree_dict(tree)
        _print_json(obj)
    else:
        print("member" if member else "not a member")
        if tree is not None:
            print("\n".join(_tree_lines(tree)))
    return EXIT_OK if member else EXIT_NO


# -- poly -----------------------------------------------------------------------------

def cmd_poly(args: argparse.Namespace) -> int:
    if args.to_labeled is not None:
        x = _sequent(args.to_labeled, labeled=False)
        g = to_polytree(args.start, x, LabelGen.letters([args.start]))
        result = show_labeled(labeled_sequent_of(g))
    else:
        s = _sequent(args.to_nested, labeled=True)
        g = graph_of(s)
        if not g.is_polytree():
            raise InputError("sequent: the relational atoms do not form a polytree")
        start = args.start if args.start in s.labels() else None
        if start is None:
            raise InputError(f"start label {args.start} does not occur in the sequent")
        try:
            result = show_nested(to_nested(start, g))
        except PolytreeError as e:
            raise InputError(f"sequent: {e}") from None
    if args.emit == "dot":
        sys.stdout.write(polytree_dot(g))
    elif args.json:
        _print_json({"result": result, "vertices": list(g.vertices), "edges": [list(e) for e in g.edges]})
    else:
        print(result)
    return EXIT_OK


# -- pg -------------------------------------------------------------------------------

def cmd_pg(args: argparse.Namespace) -> int:
    s = _sequent(args.sequent)
    if isinstance(s, LabeledSequent):
        g = pg_of_labeled(s)
        contents = {v: s.formulas_at(v) for v in s.labels()}
    else:
        g = pg_of_nested(s)
        contents = {a: s.node(a).formulas for a in s.addresses()}
    if args.json:
        def name(n: object) -> object:
            return list(n) if isinstance(n, tuple) else n

        _print_json({
            "nodes": [name(n) for n in sorted(g.nodes, key=repr)],
            "edges": [[name(a), name(b), d.value] for a, b, d in sorted(g.edges, key=repr)],
        })
    else:
        sys.stdout.write(propagation_dot(g, contents))
    return EXIT_OK


# -- dot ------------------------------------------------------------------------------

def cmd_dot(args: argparse.Namespace) -> int:
    sys.stdout.write(proof_dot(load_proof(args.proof)))
    return EXIT_OK


# -- sample ---------------------------------------------------------------------------

def cmd_sample(args: argparse.Namespace) -> int:
    """Write a seeded corpus of prover-generated proofs."""
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for k, item in enumerate(proof_corpus(args.seed, args.count, Budget(depth=args.depth))):
        p = item.proof if args.calculus == "dkt" else deep_to_shallow(item.proof, skt(item.axioms))
        stem = out / f"{k:03d}"
        stem.with_suffix(".ax").write_text("".join(f"{a}\n" for a in item.axioms), encoding="utf-8")
        stem.with_suffix(".prf").write_text(proof_to_text(p), encoding="utf-8")
        written.append({"proof": str(stem.with_suffix(".prf")), "axioms": [str(a) for a in item.axioms], "goal": str(item.goal)})
    if args.json:
        _print_json({"seed": args.seed, "files": written})
    else:
        for w in written:
            print(f"{w['proof']}: {w['goal']}   [{'; '.join(w['axioms']) or 'no axioms'}]")
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tenseproof", description="Check, translate and search for tense-logic proofs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, axioms: bool = True) -> None:
        if axioms:
            p.add_argument("--axioms", metavar="FILE", help="axiom file, one 'WORD -> WORD' per line")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("check", help="check proof files")
    p.add_argument("--calculus", required=True, choices=["skt", "dkt", "lkt", "lkt-st", "lkt-pr"])
    p.add_argument("--proof", required=True, nargs="+", metavar="FILE")
    p.add_argument("--modal-fragment", action="store_true", help="disable past-modality rules")
    p.add_argument("--allow-open", action="store_true", help="accept 'open' leaves")
    common(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("translate", help="translate a proof between calculi")
    p.add_argument("--from", dest="src", required=True, choices=["skt", "lkt", "dkt"])
    p.add_argument("--to", dest="dst", required=True, choices=["lkt", "dkt", "skt"])
    p.add_argument("--proof", required=True, metavar="FILE")
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--modal-fragment", action="store_true")
    p.add_argument("--start", metavar="LABEL", help="root label for labeled <-> nested conversion")
    common(p)
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("prove", help="bounded proof search")
    p.add_argument("--calculus", required=True, choices=["dkt", "lkt", "skt"])
    p.add_argument("--formula", required=True)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--structural", type=int, default=3, help="structural steps per branch (lkt)")
    p.add_argument("--out", metavar="FILE")
    common(p)
    p.set_defaults(run=cmd_prove)

    p = sub.add_parser("complete", help="is 'WORD -> DIAMOND' in the completion of the axioms?")
    p.add_argument("query")
    p.add_argument("--tree", action="store_true", help="print a parse tree for members")
    common(p)
    p.set_defaults(run=cmd_complete)

    p = sub.add_parser("poly", help="convert between nested and labeled polytree sequents")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--to-labeled", metavar="NESTED")
    g.add_argument("--to-nested", metavar="LABELED")
    p.add_argument("--start", default="x", metavar="LABEL")
    p.add_argument("--emit", choices=["text", "dot"], default="text")
    common(p, axioms=False)
    p.set_defaults(run=cmd_poly)

    p = sub.add_parser("pg", help="propagation graph of a sequent as DOT")
    p.add_argument("sequent")
    common(p, axioms=False)
    p.set_defaults(run=cmd_pg)

    p = sub.add_parser("dot", help="proof tree as DOT")
    p.add_argument("--proof", required=True, metavar="FILE")
    p.set_defaults(run=cmd_dot)

    p = sub.add_parser("sample", help="write a seeded corpus of prover-generated proofs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--calculus", choices=["dkt", "skt"], default="skt")
    p.add_argument("--out", required=True, metavar="DIR")
    common(p, axioms=False)
    p.set_defaults(run=cmd_sample)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "depth", 1) <= 0 or getattr(args, "steps", 1) <= 0:
        parser.error("budgets must be positive")
    try:
        return args.run(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
