"""Reading and writing proof files.

A proof is an s-expression::

    (infer RULE :concl "SEQUENT" :params (KEY VALUE ...) PREMISE ...)

Values are strings, integers or parenthesised lists of values.  Nested and
labeled sequents share the format; the reader is told which kind to expect.
"""

from __future__ import annotations

import json
import re
from typing import Callable

from .proof import Proof
from .recursion import call_with_deep_stack
from .sequent import (
    LabeledSequent,
    NestedSequent,
    SequentSyntaxError,
    parse_labeled,
    parse_nested,
    show_labeled,
    show_nested,
)
from .formula import FormulaSyntaxError


class ProofSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


_TOKEN = re.compile(r'\s*(?:(;[^\n]*)|(\()|(\))|("(?:[^"\\]|\\.)*")|(:[A-Za-z_][A-Za-z0-9_-]*)|(-?\d+)(?![A-Za-z_])|([^\s()";]+))')


def _tokens(text: str) -> list[tuple[str, object, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise _error(text, pos, "unreadable input")
        pos = m.end()
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            continue
        if m.group(2):
            out.append(("(", "(", start))
        elif m.group(3):
            out.append((")", ")", start))
        elif m.group(4) is not None:
            out.append(("str", json.loads(m.group(4)), start))
        elif m.group(5):
            out.append(("key", m.group(5)[1:], start))
        elif m.group(6):
            out.append(("int", int(m.group(6)), start))
        elif m.group(7):
            out.append(("sym", m.group(7), start))
    return out


def _error(text: str, pos: int, msg: str) -> ProofSyntaxError:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return ProofSyntaxError(msg, line, col)


def read_sexp(text: str) -> list:
    """All top-level s-expressions; atoms keep their token kind."""
    toks = _tokens(text)
    k = 0

    def one() -> object:
        nonlocal k
        if k >= len(toks):
            raise _error(text, len(text), "unexpected end of input")
        kind, val, pos = toks[k]
        k += 1
        if kind == ")":
            raise _error(text, pos, "unbalanced ')'")
        if kind != "(":
            return (kind, val, pos)
        items = []
        while True:
            if k >= len(toks):
                raise _error(text, pos, "unclosed '('")
            if toks[k][0] == ")":
                k += 1
                return ("list", items, pos)
            items.append(one())

    out = []
    while k < len(toks):
        out.append(one())
    return out


def _value(node) -> object:
    kind, val, _ = node
    if kind == "list":
        return [_value(v) for v in val]
    return val


def proof_from_text(text: str, labeled: bool) -> Proof:
    parse = parse_labeled if labeled else parse_nested
    forms = call_with_deep_stack(read_sexp, text)
    if len(forms) != 1:
        raise _error(text, 0, f"expected one proof, found {len(forms)}")

    def build(node) -> Proof:
        kind, items, pos = node
        if kind != "list" or not items or items[0][:2] != ("sym", "infer"):
            raise _error(text, pos, "expected (infer RULE ...)")
        if len(items) < 2 or items[1][0] != "sym":
            raise _error(text, pos, "missing rule name")
        rule = items[1][1]
        concl = None
        params: dict = {}
        premises = []
        k = 2
        while k < len(items):
            kind2, val, p2 = items[k]
            if kind2 == "key":
                if k + 1 >= len(items):
                    raise _error(text, p2, f"missing value for :{val}")
                arg = items[k + 1]
                if val == "concl":
                    if arg[0] != "str":
                        raise _error(text, arg[2], ":concl takes a string")
                    try:
                        concl = parse(arg[1])
                    except (SequentSyntaxError, FormulaSyntaxError) as e:
                        raise _error(text, arg[2], f"bad sequent: {e}") from None
                elif val == "params":
                    if arg[0] != "list" or len(arg[1]) % 2:
                        raise _error(text, arg[2], ":params takes (KEY VALUE ...)")
                    for kk, vv in zip(arg[1][::2], arg[1][1::2]):
                        if kk[0] not in ("sym", "key", "str"):
                            raise _error(text, kk[2], "parameter names are symbols")
                        params[str(kk[1])] = _value(vv)
                else:
                    raise _error(text, p2, f"unknown keyword :{val}")
                k += 2
                continue
            premises.append(build(items[k]))
            k += 1
        if concl is None:
            raise _error(text, pos, "missing :concl")
        return Proof(concl, rule, params, tuple(premises))

    return call_with_deep_stack(build, forms[0])


def _atom(v: object) -> str:
    if isinstance(v, bool):
        return json.dumps(str(v).lower())
    if isinstance(v, int):
        return str(v)
    if isinstance(v, (list, tuple)):
        return "(" + " ".join(_atom(x) for x in v) + ")"
    return json.dumps(str(v), ensure_ascii=False)


def proof_to_text(p: Proof) -> str:
    show: Callable = show_labeled if isinstance(p.conclusion, LabeledSequent) else show_nested
    lines: list[str] = []

    def emit(node: Proof, indent: int) -> None:
        pad = "  " * indent
        head = f"{pad}(infer {node.rule} :concl {json.dumps(show(node.conclusion), ensure_ascii=False)}"
        if node.params:
            head += " :params (" + " ".join(f"{k} {_atom(v)}" for k, v in node.params.items()) + ")"
        if not node.premises:
            lines.append(head + ")")
            return
        lines.append(head)
        for q in node.premises:
            emit(q, indent + 1)
        lines[-1] += ")"

    call_with_deep_stack(emit, p, 0)
    return "\n".join(lines) + "\n"


def is_labeled_text(text: str) -> bool:
    """Guess the sequent kind from the first conclusion in a proof file."""
    m = re.search(r':concl\s+"((?:[^"\\]|\\.)*)"', text)
    if m is None:
        return False
    concl = json.loads(f'"{m.group(1)}"')
    return bool(re.search(r"R\s*\(|[A-Za-z_][A-Za-z0-9_]*\s*:", concl))


def sequent_kind(p: Proof) -> type:
    return LabeledSequent if isinstance(p.conclusion, LabeledSequent) else NestedSequent
