"""Proof trees and an independent checker for four tense-logic calculi.

Calculi (see :class:`Calculus`):

``skt``
    shallow nested calculus with display rules and the structural rules of a
    set of general path axioms;
``dkt``
    deep nested calculus with propagation rules for a set of path axioms;
``lkt_st``
    labeled calculus with structural rules for general path axioms;
``lkt_pr``
    labeled calculus with propagation rules for path axioms.

Every node is checked on its own: a rule instance is accepted when the
premises match one of the ways the rule can apply to the conclusion.
Parameters stored on a node are hints, except propagation witnesses which
are required and always re-verified.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence, Union

from .axioms import (
    AnyAxiom,
    AxiomError,
    GeneralPathAxiom,
    PathGrammar,
    as_general,
    check_scope,
    completion_member,
    relational_chain,
)
from .formula import (
    And,
    BlackBox,
    BlackDia,
    Box,
    Dia,
    Diamond,
    Formula,
    NegLiteral,
    Or,
    PosLiteral,
    as_diamond,
    box_of,
    diamond_of,
    parse_formula,
    uses_past,
)
from .polytree import embed, graph_of, is_polytree_sequent, to_polytree
from .propagation import PropPath, is_path_in, pg_of_labeled, pg_of_nested
from .sequent import Address, LabeledSequent, LabelGen, NestedSequent

Sequent = Union[NestedSequent, LabeledSequent]


class RuleError(ValueError):
    """A rule does not apply with the given parameters."""


@dataclass
class Proof:
    conclusion: Sequent
    rule: str
    params: dict = field(default_factory=dict)
    premises: tuple["Proof", ...] = ()

    def __post_init__(self) -> None:
        self.premises = tuple(self.premises)

    def walk(self) -> Iterator[tuple[tuple[int, ...], "Proof"]]:
        """Preorder ``(path, node)`` pairs; a path lists premise indices."""
        stack: list[tuple[tuple[int, ...], Proof]] = [((), self)]
        while stack:
            path, node = stack.pop()
            yield path, node
            for i in reversed(range(len(node.premises))):
                stack.append((path + (i,), node.premises[i]))

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def height(self) -> int:
        best = 0
        stack = [(self, 1)]
        while stack:
            node, h = stack.pop()
            best = max(best, h)
            stack.extend((p, h + 1) for p in node.premises)
        return best

    def rule_counts(self) -> Counter:
        return Counter(n.rule for _, n in self.walk())

    def spine(self) -> list[str]:
        """Rules from the conclusion upward along first premises."""
        out = []
        node: Proof | None = self
        while node is not None:
            out.append(node.rule)
            node = node.premises[0] if node.premises else None
        return out

    def leaves(self) -> list["Proof"]:
        return [n for _, n in self.walk() if not n.premises]

    def map_sequents(self, f: Callable[[Sequent], Sequent], g: Callable[[dict], dict] | None = None) -> "Proof":
        return Proof(
            f(self.conclusion),
            self.rule,
            g(self.params) if g else dict(self.params),
            tuple(p.map_sequents(f, g) for p in self.premises),
        )


# -- calculi ----------------------------------------------------------------

NESTED_LOGICAL = {"id", "or", "and", "wbox", "bbox"}
SKT_RULES = NESTED_LOGICAL | {"c", "w", "rf", "rp", "wdia", "bdia", "gp", "path"}
DKT_RULES = NESTED_LOGICAL | {"dia1", "dia2", "bdia1", "bdia2", "dp", "w", "c"}
LKT_RULES = {"id", "l_or", "l_and", "l_box", "l_bbox", "l_dia", "l_bdia", "l_w", "l_c"}
PAST_RULES = {"bbox", "bdia", "bdia1", "bdia2", "l_bbox", "l_bdia"}
FAMILIES = ("skt", "dkt", "lkt_st", "lkt_pr")


@dataclass(frozen=True)
class Calculus:
    """A base calculus together with its axiom set.

    ``modal_only`` drops the past-modality rules.  ``allow_open`` accepts
    ``open`` leaves (unproved assumptions), for checking derivation
    fragments such as display sequences.
    """

    family: str
    axioms: tuple[GeneralPathAxiom, ...] = ()
    modal_only: bool = False
    allow_open: bool = False

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown calculus {self.family!r}")
        object.__setattr__(self, "axioms", tuple(dict.fromkeys(as_general(a) for a in self.axioms)))
        for a in self.axioms:
            check_scope(a)
            if self.family in ("dkt", "lkt_pr") and not a.is_path:
                raise AxiomError(f"{a} is not a path axiom; {self.family} takes path axioms only")
            if self.modal_only and (Diamond.BLACK in a.antecedent or Diamond.BLACK in a.consequent):
                raise AxiomError(f"{a} mentions a past diamond; not a modal-fragment axiom")

    @property
    def rules(self) -> set[str]:
        base = {
            "skt": SKT_RULES,
            "dkt": DKT_RULES,
            "lkt_st": LKT_RULES | {"l_gp", "l_path", "l_s"},
            "lkt_pr": LKT_RULES | {"l_prop"},
        }[self.family]
        if self.modal_only:
            base = base - PAST_RULES
        if self.allow_open:
            base = base | {"open"}
        return set(base)

    @property
    def nested(self) -> bool:
        return self.family in ("skt", "dkt")

    def grammar(self) -> PathGrammar:
        cached = _GRAMMARS.get(self.axioms)
        if cached is None:
            cached = PathGrammar([a.as_path() for a in self.axioms if a.is_path])
            _GRAMMARS[self.axioms] = cached
        return cached

    def __str__(self) -> str:
        axs = "; ".join(str(a) for a in self.axioms) or "none"
        extra = ", modal fragment" if self.modal_only else ""
        return f"{self.family} [{axs}{extra}]"


_GRAMMARS: dict[tuple, PathGrammar] = {}


def skt(axioms: Iterable[AnyAxiom] = (), **kw) -> Calculus:
    return Calculus("skt", tuple(axioms), **kw)


def dkt(axioms: Iterable[AnyAxiom] = (), **kw) -> Calculus:
    return Calculus("dkt", tuple(axioms), **kw)


def lkt_st(axioms: Iterable[AnyAxiom] = (), **kw) -> Calculus:
    return Calculus("lkt_st", tuple(axioms), **kw)


def lkt_pr(axioms: Iterable[AnyAxiom] = (), **kw) -> Calculus:
    return Calculus("lkt_pr", tuple(axioms), **kw)


# -- reports ----------------------------------------------------------------

@dataclass(frozen=True)
class Diagnostic:
    path: tuple[int, ...]
    rule: str
    kind: str
    message: str

    def where(self) -> str:
        return "root" if not self.path else "root." + ".".join(map(str, self.path))

    def to_dict(self) -> dict:
        return {"node": self.where(), "rule": self.rule, "kind": self.kind, "message": self.message}


@dataclass
class CheckReport:
    calculus: str
    accepted: bool
    nodes: int
    diagnostics: list[Diagnostic]
    rule_counts: dict[str, int]

    def to_dict(self) -> dict:
        return {
            "calculus": self.calculus,
            "accepted": self.accepted,
            "nodes": self.nodes,
            "rule_counts": dict(sorted(self.rule_counts.items())),
            "diagnostics": [d.to_dict() for d in self.diagnostics],
        }

    def lines(self) -> list[str]:
        head = "ACCEPTED" if self.accepted else "REJECTED"
        out = [f"{head}: {self.nodes} nodes checked in {self.calculus}"]
        out += [f"  {d.where()} ({d.rule}) {d.kind}: {d.message}" for d in self.diagnostics]
        return out


Problem = tuple[str, str]  # (kind, message)

ARITY = {
    "id": 0, "open": 0, "and": 2, "l_and": 2,
}


def check(p: Proof, c: Calculus) -> CheckReport:
    diags: list[Diagnostic] = []
    count = 0
    want_polytrees = c.family == "lkt_pr" or (c.family == "lkt_st" and not c.axioms)
    root_poly = (
        want_polytrees
        and isinstance(p.conclusion, LabeledSequent)
        and is_polytree_sequent(p.conclusion)
    )
    for path, node in p.walk():
        count += 1
        problem = check_node(node, c)
        if problem is not None:
            diags.append(Diagnostic(path, node.rule, *problem))
        elif root_poly and not is_polytree_sequent(node.conclusion):  # type: ignore[arg-type]
            diags.append(
                Diagnostic(path, node.rule, "polytree", "internal consistency: sequent is not a labeled polytree")
            )
    return CheckReport(str(c), not diags, count, diags, dict(p.rule_counts()))


def check_node(node: Proof, c: Calculus) -> Problem | None:
    rule = node.rule
    if rule not in c.rules:
        return "unknown-rule", f"rule {rule!r} is not a rule of {c.family}" + (
            " (modal fragment)" if c.modal_only and rule in PAST_RULES else ""
        )
    want = ARITY.get(rule, 1)
    if len(node.premises) != want:
        return "arity", f"{rule} takes {want} premise(s), got {len(node.premises)}"
    expected_type = NestedSequent if c.nested else LabeledSequent
    for s in [node.conclusion] + [q.conclusion for q in node.premises]:
        if not isinstance(s, expected_type):
            return "shape", f"{c.family} proofs contain {expected_type.__name__} values"
    if rule == "open":
        return None
    prem = [q.conclusion for q in node.premises]
    try:
        if c.family == "skt":
            return _SKT[rule](node.conclusion, prem, node.params, c)
        if c.family == "dkt":
            return _DKT[rule](node.conclusion, prem, node.params, c)
        return _LKT[rule](node.conclusion, prem, node.params, c)
    except (ValueError, KeyError, IndexError, TypeError) as e:
        return "params", f"malformed parameters: {e}"


# -- shared formula helpers -------------------------------------------------

def has_dual_literals(fs: Sequence[Formula]) -> bool:
    pos = {f.name for f in fs if isinstance(f, PosLiteral)}
    return any(isinstance(f, NegLiteral) and f.name in pos for f in fs)


def drop_one(fs: Sequence[Formula], f: Formula) -> tuple[Formula, ...] | None:
    out = list(fs)
    for i, g in enumerate(out):
        if g == f:
            del out[i]
            return tuple(out)
    return None


def distinct(fs: Iterable[Formula]) -> list[Formula]:
    return list(dict.fromkeys(fs))


def _hint(params: dict, key: str) -> Formula | None:
    v = params.get(key)
    return parse_formula(v) if isinstance(v, str) else None


def _filter(fs: Iterable[Formula], hint: Formula | None) -> list[Formula]:
    return [f for f in distinct(fs) if hint is None or f == hint]


def _mismatch(rule: str) -> Problem:
    return "shape", f"premises do not match any instance of {rule}"


# -- shallow (SKT) kernel ---------------------------------------------------

def root_counter(x: NestedSequent) -> Counter:
    c = Counter(str(f) for f in x.formulas)
    c.update(f"{d.nesting}{{{k.key()}}}" for d, k in x.children)
    return c


def _root_minus_child(x: NestedSequent, i: int) -> NestedSequent:
    return NestedSequent(x.formulas, x.children[:i] + x.children[i + 1 :])


def _skt_id(x, prem, params, c) -> Problem | None:
    return None if has_dual_literals(x.formulas) else ("shape", "no dual literal pair at the top level")


def _skt_or(x, prem, params, c) -> Problem | None:
    for f in _filter(x.formulas, _hint(params, "formula")):
        if isinstance(f, Or):
            rest = drop_one(x.formulas, f)
            if prem[0] == NestedSequent(rest + (f.left, f.right), x.children):  # type: ignore[operator]
                return None
    return _mismatch("or")


def _skt_and(x, prem, params, c) -> Problem | None:
    for f in _filter(x.formulas, _hint(params, "formula")):
        if isinstance(f, And):
            rest = drop_one(x.formulas, f)
            left = NestedSequent(rest + (f.left,), x.children)  # type: ignore[operator]
            right = NestedSequent(rest + (f.right,), x.children)  # type: ignore[operator]
            if prem[0] == left and prem[1] == right:
                return None
    return _mismatch("and")


def _skt_box(kind: Diamond, name: str):
    cls = Box if kind is Diamond.WHITE else BlackBox

    def rule(x, prem, params, c) -> Problem | None:
        for f in _filter(x.formulas, _hint(params, "formula")):
            if isinstance(f, cls):
                rest = drop_one(x.formulas, f)
                if prem[0] == NestedSequent(rest, x.children + ((kind, NestedSequent([f.body])),)):  # type: ignore[arg-type]
                    return None
        return _mismatch(name)

    return rule


def _skt_dia(kind: Diamond, name: str):
    def rule(x, prem, params, c) -> Problem | None:
        for f in _filter(x.formulas, _hint(params, "formula")):
            split = as_diamond(f)
            if split is None or split[0] is not kind:
                continue
            for i, (d, child) in enumerate(x.children):
                if d is kind and prem[0] == x.add_formulas((i,), [split[1]]):
                    return None
        return _mismatch(name)

    return rule


def _skt_display(kind: Diamond, name: str):
    # rf: conclusion b{X}, Y from premise X, o{Y}; rp swaps the nestings
    def rule(x, prem, params, c) -> Problem | None:
        for i, (d, child) in enumerate(x.children):
            if d is not kind:
                continue
            rest = _root_minus_child(x, i)
            if prem[0] == child.union(NestedSequent((), [(kind.dual, rest)])):
                return None
        return _mismatch(name)

    return rule


def _skt_w(x, prem, params, c) -> Problem | None:
    small, big = root_counter(prem[0]), root_counter(x)
    if all(big[k] >= n for k, n in small.items()):
        return None
    return "shape", "premise is not a sub-multiset of the conclusion's top level"


def _skt_c(x, prem, params, c) -> Problem | None:
    big, small = root_counter(prem[0]), root_counter(x)
    if any(big[k] < n for k, n in small.items()):
        return "shape", "premise lacks part of the conclusion"
    extra = big - small
    if not extra:
        return "shape", "nothing is contracted"
    if any(small[k] < n for k, n in extra.items()):
        return "shape", "contracted structure does not occur in the conclusion"
    return None


def chain_splits(x: NestedSequent, word: Sequence[Diamond]) -> list[tuple[NestedSequent, NestedSequent]]:
    """All ways to read ``x`` as ``X, *1{...*n{Y}...}`` for the nonempty ``word``."""
    out = []
    for i, (d, child) in enumerate(x.children):
        if d is not word[0]:
            continue
        inner = child
        ok = True
        for k in word[1:]:
            if inner.formulas or len(inner.children) != 1 or inner.children[0][0] is not k:
                ok = False
                break
            inner = inner.children[0][1]
        if ok:
            out.append((_root_minus_child(x, i), inner))
    return out


def nested_structural_match(
    concl: NestedSequent, prem: NestedSequent, ax: GeneralPathAxiom
) -> bool:
    pi, sigma = ax.antecedent, ax.consequent
    if not pi and not sigma:
        return concl == prem
    if not pi:
        return any(concl == xp.union(yp) for xp, yp in chain_splits(prem, sigma))
    ps = chain_splits(prem, sigma)
    return any(xc == xp and yc == yp for xc, yc in chain_splits(concl, pi) for xp, yp in ps)


def _declared(params: dict, c: Calculus, paths_only: bool) -> list[GeneralPathAxiom]:
    axs = [a for a in c.axioms if a.is_path or not paths_only]
    hint = params.get("axiom")
    if isinstance(hint, str):
        from .axioms import parse_axiom

        want = parse_axiom(hint)
        axs = [a for a in axs if a == want]
    return axs


def _skt_structural(name: str):
    def rule(x, prem, params, c) -> Problem | None:
        axs = _declared(params, c, name == "path")
        if not axs:
            return "axiom", f"no declared axiom available for {name}"
        if any(nested_structural_match(x, prem[0], a) for a in axs):
            return None
        return "axiom", f"premise is not obtained by the {name} rule of a declared axiom"

    return rule


_SKT: dict[str, Callable] = {
    "id": _skt_id,
    "or": _skt_or,
    "and": _skt_and,
    "wbox": _skt_box(Diamond.WHITE, "wbox"),
    "bbox": _skt_box(Diamond.BLACK, "bbox"),
    "wdia": _skt_dia(Diamond.WHITE, "wdia"),
    "bdia": _skt_dia(Diamond.BLACK, "bdia"),
    "rf": _skt_display(Diamond.BLACK, "rf"),
    "rp": _skt_display(Diamond.WHITE, "rp"),
    "w": _skt_w,
    "c": _skt_c,
    "gp": _skt_structural("gp"),
    "path": _skt_structural("path"),
}


# -- deep (DKT) kernel ------------------------------------------------------

def _addr_param(params: dict, key: str) -> Address | None:
    v = params.get(key)
    if v is None:
        return None
    return tuple(int(i) for i in v)


def _nodes(x: NestedSequent, params: dict) -> list[Address]:
    hint = _addr_param(params, "node")
    if hint is not None:
        return [hint] if _valid_address(x, hint) else []
    return list(x.addresses())


def _valid_address(x: NestedSequent, a: Address) -> bool:
    try:
        x.node(a)
        return True
    except IndexError:
        return False


def _dkt_id(x, prem, params, c) -> Problem | None:
    if any(has_dual_literals(x.node(a).formulas) for a in _nodes(x, params)):
        return None
    return "shape", "no node holds a dual literal pair"


def _replace_formulas(x: NestedSequent, a: Address, fs: Sequence[Formula]) -> NestedSequent:
    node = x.node(a)
    return x.replace(a, NestedSequent(fs, node.children))


def _dkt_or(x, prem, params, c) -> Problem | None:
    for a in _nodes(x, params):
        node = x.node(a)
        for f in _filter(node.formulas, _hint(params, "formula")):
            if isinstance(f, Or):
                rest = drop_one(node.formulas, f)
                if prem[0] == _replace_formulas(x, a, rest + (f.left, f.right)):  # type: ignore[operator]
                    return None
    return _mismatch("or")


def _dkt_and(x, prem, params, c) -> Problem | None:
    for a in _nodes(x, params):
        node = x.node(a)
        for f in _filter(node.formulas, _hint(params, "formula")):
            if isinstance(f, And):
                rest = drop_one(node.formulas, f)
                if prem[0] == _replace_formulas(x, a, rest + (f.left,)) and prem[1] == _replace_formulas(  # type: ignore[operator]
                    x, a, rest + (f.right,)  # type: ignore[operator]
                ):
                    return None
    return _mismatch("and")


def _dkt_box(kind: Diamond, name: str):
    cls = Box if kind is Diamond.WHITE else BlackBox

    def rule(x, prem, params, c) -> Problem | None:
        for a in _nodes(x, params):
            for f in _filter(x.node(a).formulas, _hint(params, "formula")):
                if isinstance(f, cls) and prem[0] == x.add_child(a, kind, NestedSequent([f.body])):
                    return None
        return _mismatch(name)

    return rule


def _dkt_dia_down(kind: Diamond, name: str):
    # dia1 / bdia1: the diamond's node passes A to a child of the same nesting
    def rule(x, prem, params, c) -> Problem | None:
        for a in _nodes(x, params):
            node = x.node(a)
            for f in _filter(node.formulas, _hint(params, "formula")):
                split = as_diamond(f)
                if split is None or split[0] is not kind:
                    continue
                for i, (d, _) in enumerate(node.children):
                    if d is kind and prem[0] == x.add_formulas(a + (i,), [split[1]]):
                        return None
        return _mismatch(name)

    return rule


def _dkt_dia_up(kind: Diamond, name: str):
    # dia2 / bdia2: a child of the dual nesting passes A up to its parent
    def rule(x, prem, params, c) -> Problem | None:
        for a in _nodes(x, params):
            node = x.node(a)
            for i, (d, child) in enumerate(node.children):
                if d is not kind.dual:
                    continue
                for f in _filter(child.formulas, _hint(params, "formula")):
                    split = as_diamond(f)
                    if split is not None and split[0] is kind and prem[0] == x.add_formulas(a, [split[1]]):
                        return None
        return _mismatch(name)

    return rule


def parse_path_param(v: Sequence, node_of: Callable[[object], object]) -> PropPath:
    nodes = [node_of(v[k]) for k in range(0, len(v), 2)]
    ds = [Diamond.BLACK if v[k] == "<#>" else Diamond.WHITE for k in range(1, len(v), 2)]
    for k in range(1, len(v), 2):
        if v[k] not in ("<>", "<#>"):
            raise ValueError(f"bad diamond {v[k]!r} in witness")
    return PropPath(tuple(nodes), tuple(ds))


def path_param(p: PropPath, node_out: Callable[[object], object] = lambda n: n) -> list:
    out: list = [node_out(p.nodes[0])]
    for d, n in zip(p.diamonds, p.nodes[1:]):
        out += [d.value, node_out(n)]
    return out


def _propagation_problem(
    g, path: PropPath, source_formulas: Sequence[Formula], params: dict, c: Calculus, matches: Callable[[Formula], bool]
) -> Problem | None:
    if not is_path_in(g, path):
        return "witness", f"witness {path} is not a path of the propagation graph"
    hint = _hint(params, "formula")
    diamonds = [f for f in _filter(source_formulas, hint) if as_diamond(f) is not None]
    if not diamonds:
        return "shape", "witness source holds no diamond formula"
    tried_member = False
    for f in diamonds:
        kind, body = as_diamond(f)  # type: ignore[misc]
        if not completion_member(c.grammar(), path.diamonds, kind):
            continue
        tried_member = True
        if matches(body):
            return None
    if not tried_member:
        word = "".join(d.value for d in path.diamonds) or "e"
        return "witness", f"witness string {word} is not in the completion"
    return "shape", "premise does not add the propagated formula at the witness target"


def _dkt_dp(x, prem, params, c) -> Problem | None:
    w = params.get("witness")
    if w is None:
        return "witness", "dp needs a witness path"
    path = parse_path_param(w, lambda n: tuple(int(i) for i in n))
    if not all(_valid_address(x, a) for a in path.nodes):
        return "witness", "witness mentions a node that does not exist"
    return _propagation_problem(
        pg_of_nested(x),
        path,
        x.node(path.source).formulas,
        params,
        c,
        lambda body: prem[0] == x.add_formulas(path.target, [body]),
    )


def _dkt_w(x, prem, params, c) -> Problem | None:
    small = to_polytree("r", prem[0], LabelGen(prefix="_p"))
    big = to_polytree("r", x, LabelGen(prefix="_c"))
    if prem[0].is_empty or embed(small, big) is not None:
        return None
    return "shape", "premise does not embed into the conclusion"


def _dkt_c(x, prem, params, c) -> Problem | None:
    p = prem[0]
    for a in _nodes(x, params):
        have = Counter(str(f) for f in x.node(a).formulas)
        lookup = {str(f): f for f in x.node(a).formulas}
        for b in p.addresses():
            extra = Counter(str(f) for f in p.node(b).formulas) - have
            if not extra or any(have[k] < n for k, n in extra.items()):
                continue
            dup = [lookup[k] for k, n in extra.items() for _ in range(n)]
            if p == x.add_formulas(a, dup):
                return None
    return _mismatch("c")


_DKT: dict[str, Callable] = {
    "id": _dkt_id,
    "or": _dkt_or,
    "and": _dkt_and,
    "wbox": _dkt_box(Diamond.WHITE, "wbox"),
    "bbox": _dkt_box(Diamond.BLACK, "bbox"),
    "dia1": _dkt_dia_down(Diamond.WHITE, "dia1"),
    "bdia1": _dkt_dia_down(Diamond.BLACK, "bdia1"),
    "dia2": _dkt_dia_up(Diamond.WHITE, "dia2"),
    "bdia2": _dkt_dia_up(Diamond.BLACK, "bdia2"),
    "dp": _dkt_dp,
    "w": _dkt_w,
    "c": _dkt_c,
}


# -- labeled (LKT) kernel ---------------------------------------------------

def substitute(s: LabeledSequent, x: str, y: str) -> LabeledSequent:
    """Replace label ``y`` by ``x`` everywhere; duplicate atoms collapse."""
    return s.rename({y: x})


def r_atom(kind: Diamond, a: str, b: str) -> tuple[str, str]:
    """``R_<>ab = Rab`` and ``R_<#>ab = Rba``."""
    return (a, b) if kind is Diamond.WHITE else (b, a)


def _labels_hint(s: LabeledSequent, params: dict) -> list:
    want = params.get("label")
    fs = s.lformulas
    if want is not None:
        fs = tuple((x, f) for x, f in fs if x == want)
    return list(dict.fromkeys(fs))


def _lkt_id(s, prem, params, c) -> Problem | None:
    labels = {x for x, _ in s.lformulas}
    if any(has_dual_literals(s.formulas_at(x)) for x in labels):
        return None
    return "shape", "no label carries a dual literal pair"


def _lkt_or(s, prem, params, c) -> Problem | None:
    hint = _hint(params, "formula")
    for x, f in _labels_hint(s, params):
        if isinstance(f, Or) and (hint is None or f == hint):
            if prem[0] == s.without_formula((x, f)).with_formulas([(x, f.left), (x, f.right)]):
                return None
    return _mismatch("l_or")


def _lkt_and(s, prem, params, c) -> Problem | None:
    hint = _hint(params, "formula")
    for x, f in _labels_hint(s, params):
        if isinstance(f, And) and (hint is None or f == hint):
            rest = s.without_formula((x, f))
            if prem[0] == rest.with_formulas([(x, f.left)]) and prem[1] == rest.with_formulas([(x, f.right)]):
                return None
    return _mismatch("l_and")


def _lkt_box(kind: Diamond, name: str):
    cls = Box if kind is Diamond.WHITE else BlackBox

    def rule(s, prem, params, c) -> Problem | None:
        hint = _hint(params, "formula")
        used = s.labels()
        clash = None
        for x, f in _labels_hint(s, params):
            if not isinstance(f, cls) or (hint is not None and f != hint):
                continue
            rest = s.without_formula((x, f))
            for y in sorted(prem[0].labels()):
                if prem[0] == rest.with_atoms([r_atom(kind, x, y)]).with_formulas([(y, f.body)]):
                    if y not in used:
                        return None
                    clash = y
        if clash is not None:
            return "eigenvariable", f"label {clash} occurs in the conclusion of {name}"
        return _mismatch(name)

    return rule


def _lkt_dia(kind: Diamond, name: str):
    def rule(s, prem, params, c) -> Problem | None:
        hint = _hint(params, "formula")
        for x, f in _labels_hint(s, params):
            split = as_diamond(f)
            if split is None or split[0] is not kind or (hint is not None and f != hint):
                continue
            for a, b in s.rel:
                y = b if kind is Diamond.WHITE and a == x else a if kind is Diamond.BLACK and b == x else None
                if y is not None and prem[0] == s.with_formulas([(y, split[1])]):
                    return None
        return _mismatch(name)

    return rule


def _lkt_prop(s, prem, params, c) -> Problem | None:
    w = params.get("witness")
    if w is None:
        return "witness", "l_prop needs a witness path"
    path = parse_path_param(w, str)
    if path.source not in s.labels():
        return "witness", f"witness starts at unknown label {path.source}"
    return _propagation_problem(
        pg_of_labeled(s),
        path,
        s.formulas_at(path.source),
        params,
        c,
        lambda body: prem[0] == s.with_formulas([(path.target, body)]),
    )


def _lkt_w(s, prem, params, c) -> Problem | None:
    p = prem[0]
    big, small = s.formula_counter(), p.formula_counter()
    if p.relset <= s.relset and all(big[k] >= n for k, n in small.items()):
        return None
    return "shape", "premise is not contained in the conclusion"


def _lkt_c(s, prem, params, c) -> Problem | None:
    p = prem[0]
    if p.relset != s.relset:
        return "shape", "contraction changes relational atoms"
    big, small = p.formula_counter(), s.formula_counter()
    if any(big[k] < n for k, n in small.items()):
        return "shape", "premise lacks formulas of the conclusion"
    extra = big - small
    if not extra or any(small[k] < n for k, n in extra.items()):
        return "shape", "premise is not the conclusion plus duplicated formulas"
    return None


def _lkt_s(s, prem, params, c) -> Problem | None:
    p = prem[0]
    for y in sorted(p.labels()):
        for x in sorted(s.labels() | p.labels()):
            if x != y and substitute(p, x, y) == s:
                return None
    return _mismatch("l_s")


def walks(
    rel: Iterable[tuple[str, str]],
    start: str,
    word: Sequence[Diamond],
    inner_ok: Callable[[str], bool] = lambda _: True,
) -> list[list[str]]:
    """Label sequences ``start, l1, ..., ln`` following ``word`` through ``rel``.

    Intermediate labels must satisfy ``inner_ok`` and be pairwise distinct.
    """
    fwd: dict[str, list[str]] = {}
    bwd: dict[str, list[str]] = {}
    for a, b in rel:
        fwd.setdefault(a, []).append(b)
        bwd.setdefault(b, []).append(a)
    out: list[list[str]] = []

    def go(seq: list[str], k: int) -> None:
        if k == len(word):
            out.append(seq)
            return
        here = seq[-1]
        step = fwd if word[k] is Diamond.WHITE else bwd
        for nxt in sorted(step.get(here, ())):
            last = k == len(word) - 1
            if not last and (not inner_ok(nxt) or nxt in seq[1:]):
                continue
            go(seq + [nxt], k + 1)

    go([start], 0)
    return out


@dataclass(frozen=True)
class StructuralMatch:
    axiom: GeneralPathAxiom
    x: str
    y: str
    pi_inner: tuple[str, ...]
    sigma_inner: tuple[str, ...]


def labeled_structural_matches(
    s: LabeledSequent, p: LabeledSequent, ax: GeneralPathAxiom, fresh_only: bool = True
) -> list[StructuralMatch]:
    """Ways ``p`` is the premise of ``ax``'s structural rule with conclusion ``s``."""
    if s.formula_counter() != p.formula_counter() or not s.relset <= p.relset:
        return []
    pi, sigma = ax.antecedent, ax.consequent
    if not sigma:
        return [StructuralMatch(ax, "", "", (), ())] if s == p and not pi else []
    used = s.labels()
    inner_ok = (lambda v: v not in used) if fresh_only else (lambda v: True)
    out = []
    starts = sorted(p.labels())
    for x in starts:
        for seq in walks(p.rel, x, sigma, inner_ok):
            y = seq[-1]
            atoms = set(relational_chain(sigma, x, y, seq[1:-1]))
            if p.relset != s.relset | atoms:
                continue
            if not pi:
                if x == y:
                    out.append(StructuralMatch(ax, x, y, (), tuple(seq[1:-1])))
                continue
            if x not in used:
                continue
            for pseq in walks(s.rel, x, pi):
                if pseq[-1] == y:
                    out.append(StructuralMatch(ax, x, y, tuple(pseq[1:-1]), tuple(seq[1:-1])))
                    break
    return out


def _lkt_structural(name: str):
    def rule(s, prem, params, c) -> Problem | None:
        axs = _declared(params, c, name == "l_path")
        if not axs:
            return "axiom", f"no declared axiom available for {name}"
        for a in axs:
            if labeled_structural_matches(s, prem[0], a):
                return None
        for a in axs:
            if labeled_structural_matches(s, prem[0], a, fresh_only=False):
                return "eigenvariable", f"internal labels of the {a} instance occur in the conclusion"
        return "axiom", f"premise is not obtained by the {name} rule of a declared axiom"

    return rule


_LKT: dict[str, Callable] = {
    "id": _lkt_id,
    "l_or": _lkt_or,
    "l_and": _lkt_and,
    "l_box": _lkt_box(Diamond.WHITE, "l_box"),
    "l_bbox": _lkt_box(Diamond.BLACK, "l_bbox"),
    "l_dia": _lkt_dia(Diamond.WHITE, "l_dia"),
    "l_bdia": _lkt_dia(Diamond.BLACK, "l_bdia"),
    "l_prop": _lkt_prop,
    "l_w": _lkt_w,
    "l_c": _lkt_c,
    "l_s": _lkt_s,
    "l_gp": _lkt_structural("l_gp"),
    "l_path": _lkt_structural("l_path"),
}


# -- forward rule application -----------------------------------------------

def apply_rule(s: Sequent, rule: str, params: dict) -> list[Sequent]:
    """Premises demanded by one rule instance, read from conclusion to premises.

    Parameters: ``formula`` (text of the principal formula), ``node``
    (address, nested rules), ``child`` (child index), ``label``, ``target``
    and ``eigen`` (labeled rules), ``witness`` (propagation rules).
    Display rules take ``child``, the index of the nesting to move into.
    """
    f = parse_formula(params["formula"]) if "formula" in params else None
    if isinstance(s, NestedSequent):
        return _apply_nested(s, rule, params, f)
    return _apply_labeled(s, rule, params, f)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise RuleError(msg)


def _apply_nested(s: NestedSequent, rule: str, params: dict, f: Formula | None) -> list[Sequent]:
    a = _addr_param(params, "node") or ()
    _need(_valid_address(s, a), f"no node at {a}")
    node = s.node(a)
    if rule == "id":
        _need(has_dual_literals(node.formulas), "no dual literal pair")
        return []
    if rule in ("rf", "rp"):
        _need(not a, "display rules act at the top level")
        kind = Diamond.BLACK if rule == "rf" else Diamond.WHITE
        i = int(params["child"])
        _need(s.children[i][0] is kind, f"{rule} needs a {kind.nesting}-child")
        return [s.children[i][1].union(NestedSequent((), [(kind.dual, _root_minus_child(s, i))]))]
    _need(f is not None, f"{rule} needs a principal formula")
    assert f is not None
    if rule != "dp":
        rest = drop_one(node.formulas, f) if rule not in ("dia2", "bdia2") else node.formulas
        _need(rest is not None, f"{f} is not at node {a}")
    if rule == "or":
        _need(isinstance(f, Or), "not a disjunction")
        return [_replace_formulas(s, a, rest + (f.left, f.right))]  # type: ignore[union-attr,operator]
    if rule == "and":
        _need(isinstance(f, And), "not a conjunction")
        return [_replace_formulas(s, a, rest + (g,)) for g in (f.left, f.right)]  # type: ignore[union-attr,operator]
    if rule in ("wbox", "bbox"):
        kind = Diamond.WHITE if rule == "wbox" else Diamond.BLACK
        _need(isinstance(f, Box if kind is Diamond.WHITE else BlackBox), "wrong box")
        if params.get("shallow"):
            return [_replace_formulas(s, a, rest).add_child(a, kind, NestedSequent([f.body]))]  # type: ignore[union-attr,arg-type]
        return [s.add_child(a, kind, NestedSequent([f.body]))]  # type: ignore[union-attr]
    split = as_diamond(f)
    _need(split is not None, "not a diamond formula")
    kind, body = split  # type: ignore[misc]
    if rule in ("wdia", "bdia", "dia1", "bdia1"):
        i = int(params["child"])
        _need(node.children[i][0] is kind, "child has the wrong nesting")
        return [s.add_formulas(a + (i,), [body])]
    if rule in ("dia2", "bdia2"):
        i = int(params["child"])
        _need(node.children[i][0] is kind.dual, "child has the wrong nesting")
        _need(f in node.children[i][1].formulas, f"{f} is not in child {i}")
        return [s.add_formulas(a, [body])]
    if rule == "dp":
        path = parse_path_param(params["witness"], lambda n: tuple(int(i) for i in n))
        _need(f in s.node(path.source).formulas, f"{f} is not at the witness source")
        return [s.add_formulas(path.target, [body])]
    raise RuleError(f"apply_rule does not support {rule!r}")


def _apply_labeled(s: LabeledSequent, rule: str, params: dict, f: Formula | None) -> list[Sequent]:
    if rule == "id":
        return []
    x = params.get("label")
    _need(f is not None and x is not None, f"{rule} needs a label and a formula")
    assert f is not None
    _need((x, f) in [(y, g) for y, g in s.lformulas], f"{x}:{f} is not in the sequent")
    if rule == "l_or":
        _need(isinstance(f, Or), "not a disjunction")
        return [s.without_formula((x, f)).with_formulas([(x, f.left), (x, f.right)])]  # type: ignore[union-attr]
    if rule == "l_and":
        _need(isinstance(f, And), "not a conjunction")
        rest = s.without_formula((x, f))
        return [rest.with_formulas([(x, f.left)]), rest.with_formulas([(x, f.right)])]  # type: ignore[union-attr]
    if rule in ("l_box", "l_bbox"):
        kind = Diamond.WHITE if rule == "l_box" else Diamond.BLACK
        _need(isinstance(f, Box if kind is Diamond.WHITE else BlackBox), "wrong box")
        y = params["eigen"]
        _need(y not in s.labels(), f"eigenvariable {y} occurs in the conclusion")
        return [s.without_formula((x, f)).with_atoms([r_atom(kind, x, y)]).with_formulas([(y, f.body)])]  # type: ignore[union-attr]
    split = as_diamond(f)
    _need(split is not None, "not a diamond formula")
    kind, body = split  # type: ignore[misc]
    if rule in ("l_dia", "l_bdia"):
        y = params["target"]
        _need(r_atom(kind, x, y) in s.relset, "missing relational atom")
        return [s.with_formulas([(y, body)])]
    if rule == "l_prop":
        path = parse_path_param(params["witness"], str)
        return [s.with_formulas([(path.target, body)])]
    raise RuleError(f"apply_rule does not support {rule!r}")


def goal_sequent(goal: Formula) -> NestedSequent:
    return NestedSequent([goal])


def goal_labeled(goal: Formula, label: str = "x") -> LabeledSequent:
    return LabeledSequent((), [(label, goal)])


def in_modal_fragment(goal: Formula) -> bool:
    """True when ``goal`` stays inside the modal fragment."""
    return not uses_past(goal)


__all__ = [
    "Proof",
    "Calculus",
    "CheckReport",
    "Diagnostic",
    "RuleError",
    "apply_rule",
    "check",
    "substitute",
    "skt",
    "dkt",
    "lkt_st",
    "lkt_pr",
    "box_of",
    "diamond_of",
    "graph_of",
]
