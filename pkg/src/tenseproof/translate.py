"""Proof translations between the shallow, deep and labeled calculi.

``shallow_to_labeled``
    SKT with structural rules of general path axioms into the labeled
    calculus with the matching structural rules.  Display steps vanish.
``eliminate_structural``
    removes labeled structural rules of path axioms, turning the
    diamond steps that used a deleted atom into propagation steps.
``labeled_to_deep``
    labeled proofs of polytree sequents with propagation rules into DKT.
``deep_to_shallow``
    DKT back into SKT: every deep step is displayed to the root, and each
    propagation step is rebuilt from structural rules along a parse tree
    of its witness word.
``pipeline_reverse``
    the last three in sequence.

Every function works on one rule instance at a time and asserts that the
sequent it builds equals the one in the input proof, so a bug shows up as a
:class:`TranslationError` at the offending node rather than as a bad proof.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .axioms import (
    AxiomScopeError,
    GeneralPathAxiom,
    ParseNode,
    parse_axiom,
    parse_tree,
    relational_chain,
)
from .formula import And, BlackBox, Box, Diamond, Formula, Or, as_diamond, parse_formula
from .polytree import (
    LabeledPolytree,
    PolytreeError,
    display_moves,
    edge_diamond,
    embed,
    graph_of,
    labeled_sequent_of,
    to_nested,
    to_nested_addressed,
    to_polytree,
    to_polytree_addressed,
)
from .proof import (
    Calculus,
    Proof,
    chain_splits,
    has_dual_literals,
    labeled_structural_matches,
    parse_path_param,
    path_param,
    r_atom,
)
from .propagation import PropPath
from .recursion import call_with_deep_stack
from .sequent import Address, Label, LabeledSequent, LabelGen, NestedSequent


class TranslationError(ValueError):
    """The input proof does not have the shape a translation step expects."""


def translation_labels(avoid: Iterable[str] = ()) -> LabelGen:
    """Fresh labels ``y, z, u, v, w, t, s, ...`` then numbered ones."""
    pool = ["y", "z", "u", "v", "w"] + [chr(c) for c in range(ord("t"), ord("a") - 1, -1)]
    return LabelGen(prefix="l", pool=pool, avoid=set(avoid))


# -- polytree surgery shared by the translations ------------------------------

def subtree(g: LabeledPolytree, parent: Label, w: Label) -> LabeledPolytree:
    keep = set(g.side(parent, w))
    return g.without_vertices([v for v in g.vertices if v not in keep])


def _item_key_formula(f: Formula) -> str:
    return str(f)


def _item_key_child(d: Diamond, child: NestedSequent) -> str:
    return f"{d.nesting}{{{child.key()}}}"


@dataclass
class RootItems:
    """Top-level items of a polytree reading: formulas and neighbour subtrees."""

    formulas: list[tuple[str, Formula]]
    neighbors: list[tuple[str, Label]]

    @classmethod
    def of(cls, g: LabeledPolytree, root: Label) -> "RootItems":
        fs = [(_item_key_formula(f), f) for f in g.labels[root]]
        ns = [
            (_item_key_child(pol, to_nested(w, subtree(g, root, w))), w)
            for w, pol in g.neighbors(root)
        ]
        return cls(fs, ns)


def nested_items(x: NestedSequent) -> Counter:
    c = Counter(_item_key_formula(f) for f in x.formulas)
    c.update(_item_key_child(d, k) for d, k in x.children)
    return c


def pick_items(items: RootItems, wanted: Counter) -> tuple[list[Formula], list[Label], list[Formula], list[Label]]:
    """Split root items into (kept formulas, kept neighbours, rest formulas, rest neighbours)."""
    left = Counter(wanted)
    kf, kn, rf, rn = [], [], [], []
    for k, f in items.formulas:
        if left[k] > 0:
            left[k] -= 1
            kf.append(f)
        else:
            rf.append(f)
    for k, w in items.neighbors:
        if left[k] > 0:
            left[k] -= 1
            kn.append(w)
        else:
            rn.append(w)
    if +left:
        raise TranslationError("premise items do not occur in the conclusion")
    return kf, kn, rf, rn


def drop_sides(g: LabeledPolytree, v: Label, neighbors: Iterable[Label]) -> LabeledPolytree:
    gone: list[Label] = []
    for w in neighbors:
        gone += g.side(v, w)
    return g.without_vertices(gone)


def copy_side(
    g: LabeledPolytree, v: Label, w: Label, gen: LabelGen
) -> tuple[LabeledPolytree, dict[Label, Label]]:
    """Duplicate the subtree hanging off ``v`` at ``w``; returns the copy map."""
    part = g.side(v, w)
    inside = set(part)
    cmap = {u: gen.fresh() for u in part}
    labels = dict(g.labels)
    for u in part:
        labels[cmap[u]] = g.labels[u]
    edges = list(g.edges)
    for a, b in g.edges:
        if a in inside and b in inside:
            edges.append((cmap[a], cmap[b]))
    edges.append((v, cmap[w]) if (v, w) in set(g.edges) else (cmap[w], v))
    return LabeledPolytree(list(g.vertices) + [cmap[u] for u in part], edges, labels), cmap


def move_neighbors(g: LabeledPolytree, old: Label, new: Label, neighbors: Iterable[Label]) -> LabeledPolytree:
    """Reattach the edges ``old``--``n`` to ``new``--``n`` keeping direction."""
    ns = set(neighbors)
    edges = []
    for a, b in g.edges:
        if a == old and b in ns:
            edges.append((new, b))
        elif b == old and a in ns:
            edges.append((a, new))
        else:
            edges.append((a, b))
    return LabeledPolytree(g.vertices, edges, g.labels)


def pi_chains(g: LabeledPolytree, root: Label, word: Sequence[Diamond]) -> list[list[Label]]:
    """Vertex chains from ``root`` spelling ``word`` whose inner vertices are
    formula-free and have no other neighbours (the shape ``X, w{Y}``)."""
    out: list[list[Label]] = []

    def go(seq: list[Label], k: int) -> None:
        here = seq[-1]
        if k > 0 and k < len(word):
            if g.labels[here] or len(g.neighbors(here)) != 2:
                return
        if k == len(word):
            out.append(seq)
            return
        for w, pol in g.neighbors(here):
            if pol is word[k] and w not in seq:
                go(seq + [w], k + 1)

    go([root], 0)
    return out


# -- proof-level helpers ----------------------------------------------------------

def _map_label_param(v: object, mapping: dict[str, str]) -> object:
    if isinstance(v, str):
        return mapping.get(v, v)
    if isinstance(v, list):
        return [_map_label_param(u, mapping) for u in v]
    return v


_LABEL_PARAMS = ("label", "target", "eigen", "witness")


def rename_labels(p: Proof, mapping: dict[str, str]) -> Proof:
    """Apply a label renaming to every sequent and label parameter of ``p``."""

    def params(d: dict) -> dict:
        return {k: (_map_label_param(v, mapping) if k in _LABEL_PARAMS else v) for k, v in d.items()}

    return p.map_sequents(lambda s: s.rename(mapping), params)  # type: ignore[union-attr]


def add_atoms_everywhere(p: Proof, atoms: Sequence[tuple[str, str]]) -> Proof:
    return p.map_sequents(lambda s: s.with_atoms(atoms))  # type: ignore[union-attr]


def _formula(params: dict) -> Formula | None:
    v = params.get("formula")
    return parse_formula(v) if isinstance(v, str) else None


def _axiom_candidates(params: dict, calc: Calculus, path_only: bool = False) -> list[GeneralPathAxiom]:
    axs = [a for a in calc.axioms if a.is_path or not path_only]
    if isinstance(params.get("axiom"), str):
        want = parse_axiom(params["axiom"])
        axs = [a for a in axs if a == want] or axs
    return axs


# -- shallow to labeled -----------------------------------------------------------

class _ShallowToLabeled:
    def __init__(self, calc: Calculus, gen: LabelGen) -> None:
        self.calc = calc
        self.gen = gen

    def fail(self, node: Proof, why: str) -> TranslationError:
        return TranslationError(f"{node.rule}: {why} at {node.conclusion}")

    def run(self, node: Proof, g: LabeledPolytree, root: Label) -> Proof:
        if to_nested(root, g) != node.conclusion:
            raise self.fail(node, "sequent does not match its polytree reading")
        here = labeled_sequent_of(g)
        rule = node.rule
        prem = [q.conclusion for q in node.premises]
        if rule in ("id", "open"):
            return Proof(here, rule)
        if rule in ("or", "and"):
            for f in dict.fromkeys(g.labels[root]):
                if not isinstance(f, Or if rule == "or" else And):
                    continue
                base = g.without_formulas(root, [f])
                if rule == "or":
                    g1 = base.with_formulas(root, [f.left, f.right])
                    if to_nested(root, g1) == prem[0]:
                        return Proof(
                            here, "l_or", {"label": root, "formula": str(f)}, (self.run(node.premises[0], g1, root),)
                        )
                else:
                    gl = base.with_formulas(root, [f.left])
                    gr = base.with_formulas(root, [f.right])
                    if to_nested(root, gl) == prem[0] and to_nested(root, gr) == prem[1]:
                        return Proof(
                            here,
                            "l_and",
                            {"label": root, "formula": str(f)},
                            (self.run(node.premises[0], gl, root), self.run(node.premises[1], gr, root)),
                        )
            raise self.fail(node, "no principal formula found")
        if rule in ("wbox", "bbox"):
            kind = Diamond.WHITE if rule == "wbox" else Diamond.BLACK
            y = self.gen.fresh()
            for f in dict.fromkeys(g.labels[root]):
                if not isinstance(f, Box if kind is Diamond.WHITE else BlackBox):
                    continue
                g1 = g.without_formulas(root, [f]).with_vertex(y, [f.body]).with_edges([r_atom(kind, root, y)])
                if to_nested(root, g1) == prem[0]:
                    name = "l_box" if kind is Diamond.WHITE else "l_bbox"
                    params = {"label": root, "formula": str(f), "eigen": y}
                    return Proof(here, name, params, (self.run(node.premises[0], g1, root),))
            raise self.fail(node, "no principal box found")
        if rule in ("wdia", "bdia"):
            kind = Diamond.WHITE if rule == "wdia" else Diamond.BLACK
            for f in dict.fromkeys(g.labels[root]):
                split = as_diamond(f)
                if split is None or split[0] is not kind:
                    continue
                for w, pol in g.neighbors(root):
                    if pol is not kind:
                        continue
                    g1 = g.with_formulas(w, [split[1]])
                    if to_nested(root, g1) == prem[0]:
                        name = "l_dia" if kind is Diamond.WHITE else "l_bdia"
                        params = {"label": root, "formula": str(f), "target": w}
                        return Proof(here, name, params, (self.run(node.premises[0], g1, root),))
            raise self.fail(node, "no diamond instance found")
        if rule in ("rf", "rp"):
            kind = Diamond.BLACK if rule == "rf" else Diamond.WHITE
            for w, pol in g.neighbors(root):
                if pol is kind and to_nested(w, g) == prem[0]:
                    return self.run(node.premises[0], g, w)
            raise self.fail(node, "no display target found")
        if rule == "w":
            items = RootItems.of(g, root)
            _, _, rf, rn = pick_items(items, nested_items(prem[0]))
            g1 = drop_sides(g.without_formulas(root, rf), root, rn)
            sub = self.run(node.premises[0], g1, root)
            if sub.conclusion == here:
                return sub
            return Proof(here, "l_w", {}, (sub,))
        if rule == "c":
            return self.contraction(node, g, root, here)
        if rule in ("gp", "path"):
            return self.structural(node, g, root, here)
        raise self.fail(node, "rule is not part of the shallow calculus")

    def contraction(self, node: Proof, g: LabeledPolytree, root: Label, here: LabeledSequent) -> Proof:
        items = RootItems.of(g, root)
        extra = nested_items(node.premises[0].conclusion) - nested_items(node.conclusion)
        g1 = g
        back: dict[Label, Label] = {}
        fkeys = {k: f for k, f in items.formulas}
        nkeys = {k: w for k, w in items.neighbors}
        for k, n in extra.items():
            for _ in range(n):
                if k in fkeys:
                    g1 = g1.with_formulas(root, [fkeys[k]])
                elif k in nkeys:
                    g1, cmap = copy_side(g1, root, nkeys[k], self.gen)
                    back.update({c: o for o, c in cmap.items()})
                else:
                    raise self.fail(node, "contracted item not found")
        sub = self.run(node.premises[0], g1, root)
        if back:
            sub = rename_labels(sub, back)
        if sub.conclusion == here:
            return sub
        return Proof(here, "l_c", {}, (sub,))

    def structural(self, node: Proof, g: LabeledPolytree, root: Label, here: LabeledSequent) -> Proof:
        prem = node.premises[0].conclusion
        for ax in _axiom_candidates(node.params, self.calc, node.rule == "path"):
            pi, sigma = ax.antecedent, ax.consequent
            name = "l_path" if ax.is_path else "l_gp"
            if not pi and not sigma:
                if prem == node.conclusion:
                    return self.run(node.premises[0], g, root)
                continue
            if not pi:
                for xp, yp in chain_splits(prem, sigma):
                    if xp.union(yp) != node.conclusion:
                        continue
                    items = RootItems.of(g, root)
                    ys, yn, _, _ = pick_items(items, nested_items(yp))
                    inner = [self.gen.fresh() for _ in sigma[1:]]
                    y = self.gen.fresh()
                    g1 = move_neighbors(g, root, y, yn)
                    g1 = g1.without_formulas(root, ys)
                    for v in inner:
                        g1 = g1.with_vertex(v)
                    g1 = g1.with_vertex(y, ys).with_edges(relational_chain(sigma, root, y, inner))
                    if to_nested(root, g1) != prem:
                        continue
                    sub = rename_labels(self.run(node.premises[0], g1, root), {y: root})
                    return Proof(here, name, {"axiom": str(ax)}, (sub,))
                continue
            for chain in pi_chains(g, root, pi):
                y = chain[-1]
                removed = [e for e in g.edges if e[0] in chain and e[1] in chain]
                inner = [self.gen.fresh() for _ in sigma[1:]]
                g1 = g.without_vertices(chain[1:-1]).without_edges(removed)
                for v in inner:
                    g1 = g1.with_vertex(v)
                g1 = g1.with_edges(relational_chain(sigma, root, y, inner))
                if to_nested(root, g1) != prem:
                    continue
                sub = add_atoms_everywhere(self.run(node.premises[0], g1, root), removed)
                return Proof(here, name, {"axiom": str(ax)}, (sub,))
        raise self.fail(node, "no declared axiom matches")


def shallow_to_labeled(
    p: Proof, calc: Calculus | None = None, start: Label = "x", gen: LabelGen | None = None
) -> Proof:
    """Translate an SKT proof; the result proves the polytree of its end sequent
    read from ``start``."""
    calc = calc or Calculus("skt")
    gen = gen or translation_labels([start])
    gen.reserve([start])
    g = to_polytree(start, p.conclusion, gen)  # type: ignore[arg-type]
    if not g.vertices:
        g = LabeledPolytree([start])
    worker = _ShallowToLabeled(calc, gen)
    return call_with_deep_stack(worker.run, p, g, start)


# -- structural rule elimination ------------------------------------------------

def _labels_in(p: Proof) -> set[str]:
    out: set[str] = set()
    for _, n in p.walk():
        out |= n.conclusion.labels()  # type: ignore[union-attr]
    return out


def _topmost_structural(p: Proof) -> tuple[int, ...] | None:
    for path, n in p.walk():
        if n.rule in ("l_path", "l_gp") and not any(
            m.rule in ("l_path", "l_gp") for _, m in n.premises[0].walk()
        ):
            return path
    return None


def _replace_at(p: Proof, path: tuple[int, ...], new: Proof) -> Proof:
    if not path:
        return new
    kids = list(p.premises)
    kids[path[0]] = _replace_at(kids[path[0]], path[1:], new)
    return Proof(p.conclusion, p.rule, dict(p.params), tuple(kids))


@dataclass
class _Elimination:
    """Removes one relational atom from a subproof and reroutes its uses."""

    atom: tuple[str, str]
    kind: Diamond
    start: str
    end: str
    chain: list[tuple[str, str]]
    chain_nodes: list[str]
    gen: LabelGen
    pi: tuple[Diamond, ...] = ()
    protected: set[str] = field(default_factory=set)

    def step_uses_atom(self, a: str, d: Diamond, b: str) -> bool:
        return r_atom(d, a, b) == self.atom and (
            (d is self.kind and a == self.start and b == self.end)
            or (d is self.kind.dual and a == self.end and b == self.start)
        )

    def reroute(self, path: PropPath) -> PropPath:
        fwd = PropPath(tuple(self.chain_nodes), self.pi)
        nodes = [path.nodes[0]]
        ds: list[Diamond] = []
        for a, d, b in path.steps():
            if self.step_uses_atom(a, d, b):
                seg = fwd if (d is self.kind and a == self.start) else fwd.reverse()
                nodes += list(seg.nodes[1:])
                ds += list(seg.diamonds)
            else:
                nodes.append(b)
                ds.append(d)
        return PropPath(tuple(nodes), tuple(ds))

    def fix(self, s: LabeledSequent) -> LabeledSequent:
        if self.atom in s.relset:
            return s.without_atoms([self.atom]).with_atoms(self.chain)
        return s

    def run(self, node: Proof) -> Proof:
        s = node.conclusion
        assert isinstance(s, LabeledSequent)
        rule, params = node.rule, dict(node.params)
        if rule in ("l_box", "l_bbox") and params.get("eigen") in self.protected:
            fresh = self.gen.fresh()
            renamed = rename_labels(node.premises[0], {params["eigen"]: fresh})
            params["eigen"] = fresh
            node = Proof(s, rule, params, (renamed,))
        if rule == "l_s":
            raise AxiomScopeError("substitution above a structural rule is not supported by the elimination")
        present = self.atom in s.relset
        if present and rule in ("l_dia", "l_bdia"):
            d = Diamond.WHITE if rule == "l_dia" else Diamond.BLACK
            x, t = params.get("label"), params.get("target")
            if x is not None and t is not None and self.step_uses_atom(x, d, t):
                witness = self.reroute(PropPath((x, t), (d,)))
                params = {"label": x, "formula": params["formula"], "witness": path_param(witness)}
                rule = "l_prop"
        elif present and rule == "l_prop":
            old = parse_path_param(params["witness"], str)
            params["witness"] = path_param(self.reroute(old))
        premises = tuple(self.run(q) for q in node.premises)
        return Proof(self.fix(s), rule, params, premises)


def _fill_labeled_params(node: Proof) -> dict:
    """Recover the label, target and formula of a labeled diamond step."""
    params = dict(node.params)
    if node.rule not in ("l_dia", "l_bdia") or ("label" in params and "target" in params and "formula" in params):
        return params
    s, q = node.conclusion, node.premises[0].conclusion
    kind = Diamond.WHITE if node.rule == "l_dia" else Diamond.BLACK
    added = q.formula_counter() - s.formula_counter()  # type: ignore[union-attr]
    for (t, body), _ in added.items():
        for x, f in s.lformulas:  # type: ignore[union-attr]
            split = as_diamond(f)
            if split and split[0] is kind and str(split[1]) == body and r_atom(kind, x, t) in s.relset:  # type: ignore[union-attr]
                return {"label": x, "formula": str(f), "target": t}
    return params


def _normalise_params(p: Proof) -> Proof:
    return Proof(
        p.conclusion,
        p.rule,
        _fill_labeled_params(p),
        tuple(_normalise_params(q) for q in p.premises),
    )


def eliminate_structural(p: Proof, calc: Calculus) -> Proof:
    """Remove every ``l_path``/``l_gp`` step, topmost first."""
    return call_with_deep_stack(_eliminate, p, calc)


def _eliminate(p: Proof, calc: Calculus) -> Proof:
    p = _normalise_params(p)
    gen = translation_labels(_labels_in(p))
    while True:
        where = _topmost_structural(p)
        if where is None:
            return p
        node = p
        for i in where:
            node = node.premises[i]
        concl, prem = node.conclusion, node.premises[0].conclusion
        match = None
        for ax in _axiom_candidates(node.params, calc, path_only=True):
            found = labeled_structural_matches(concl, prem, ax)  # type: ignore[arg-type]
            if found:
                match = found[0]
                break
        if match is None:
            raise AxiomScopeError(
                f"structural step at {where} is not an instance of a declared path axiom; "
                "only path-axiom structural rules can be eliminated"
            )
        ax = match.axiom
        kind = ax.consequent[0]
        atom = r_atom(kind, match.x, match.y)
        if atom in concl.relset:  # type: ignore[union-attr]
            p = _replace_at(p, where, node.premises[0])
            continue
        chain = relational_chain(ax.antecedent, match.x, match.y, match.pi_inner)
        elim = _Elimination(
            atom,
            kind,
            match.x,
            match.y,
            chain,
            [match.x, *match.pi_inner, match.y] if ax.antecedent else [match.x],
            gen,
            ax.antecedent,
            concl.labels(),  # type: ignore[union-attr]
        )
        p = _replace_at(p, where, elim.run(node.premises[0]))


# -- labeled to deep -------------------------------------------------------------

class _LabeledToDeep:
    def fail(self, node: Proof, why: str) -> TranslationError:
        return TranslationError(f"{node.rule}: {why} at {node.conclusion}")

    def reading(self, node: Proof, s: LabeledSequent, root: Label) -> tuple[NestedSequent, dict[Label, Address]]:
        g = graph_of(s)
        if not g.is_polytree():
            raise self.fail(node, "sequent is not a labeled polytree")
        try:
            return to_nested_addressed(root, g)
        except PolytreeError as e:
            raise self.fail(node, str(e)) from None

    def run(self, node: Proof, root: Label) -> Proof:
        s = node.conclusion
        assert isinstance(s, LabeledSequent)
        x, amap = self.reading(node, s, root)
        rule, params = node.rule, node.params
        here = lambda lab: list(amap[lab])  # noqa: E731
        if rule in ("id", "open"):
            for lab in amap:
                if has_dual_literals(s.formulas_at(lab)):
                    return Proof(x, "id", {"node": here(lab)})
            return Proof(x, rule)
        if rule in ("l_or", "l_and"):
            kids = tuple(self.run(q, root) for q in node.premises)
            return Proof(x, rule[2:], {"node": here(params["label"]), "formula": params["formula"]}, kids)
        if rule in ("l_box", "l_bbox"):
            kind = Diamond.WHITE if rule == "l_box" else Diamond.BLACK
            f = parse_formula(params["formula"])
            body = f.body  # type: ignore[union-attr]
            a = amap[params["label"]]
            copied = x.add_child(a, kind, NestedSequent([body]))
            sub = self.run(node.premises[0], root)
            weak = Proof(copied, "w", {}, (sub,))
            return Proof(x, "wbox" if kind is Diamond.WHITE else "bbox", {"node": list(a), "formula": params["formula"]}, (weak,))
        if rule in ("l_dia", "l_bdia"):
            kind = Diamond.WHITE if rule == "l_dia" else Diamond.BLACK
            src, dst = params["label"], params["target"]
            a, b = amap[src], amap[dst]
            sub = self.run(node.premises[0], root)
            if b[:-1] == a:
                name = "dia1" if kind is Diamond.WHITE else "bdia1"
                return Proof(x, name, {"node": list(a), "formula": params["formula"], "child": b[-1]}, (sub,))
            if a[:-1] == b:
                name = "dia2" if kind is Diamond.WHITE else "bdia2"
                return Proof(x, name, {"node": list(b), "formula": params["formula"], "child": a[-1]}, (sub,))
            raise self.fail(node, "diamond step between non-adjacent labels")
        if rule == "l_prop":
            path = parse_path_param(params["witness"], str)
            witness = path_param(path.rename(amap), list)
            sub = self.run(node.premises[0], root)
            return Proof(x, "dp", {"node": list(amap[path.source]), "formula": params["formula"], "witness": witness}, (sub,))
        if rule == "l_w":
            q = node.premises[0].conclusion
            assert isinstance(q, LabeledSequent)
            keep = q.labels()
            new_root = root
            if keep and root not in keep:
                g = graph_of(s)
                order = [root]
                seen = {root}
                k = 0
                while k < len(order):
                    v = order[k]
                    if v in keep:
                        new_root = v
                        break
                    for w, _ in g.neighbors(v):
                        if w not in seen:
                            seen.add(w)
                            order.append(w)
                    k += 1
            sub = self.run(node.premises[0], new_root)
            if sub.conclusion == x:
                return sub
            return Proof(x, "w", {}, (sub,))
        if rule == "l_c":
            q = node.premises[0].conclusion
            assert isinstance(q, LabeledSequent)
            extra = q.formula_counter() - s.formula_counter()
            sub = self.run(node.premises[0], root)
            by_label: dict[Label, list[Formula]] = {}
            lookup = {(lab, str(f)): f for lab, f in s.lformulas}
            for (lab, fs), n in extra.items():
                by_label.setdefault(lab, []).extend([lookup[(lab, fs)]] * n)
            steps = list(by_label.items())
            seqs = [x]
            for lab, fs in steps:
                seqs.append(seqs[-1].add_formulas(amap[lab], fs))
            out = sub
            for k in range(len(steps) - 1, -1, -1):
                out = Proof(seqs[k], "c", {"node": list(amap[steps[k][0]])}, (out,))
            return out
        raise self.fail(node, "rule has no deep counterpart (eliminate structural rules first)")


def default_start(s: LabeledSequent) -> Label:
    if s.lformulas:
        return s.lformulas[0][0]
    if s.rel:
        return s.rel[0][0]
    return "x"


def labeled_to_deep(p: Proof, start: Label | None = None) -> Proof:
    s = p.conclusion
    assert isinstance(s, LabeledSequent)
    root = start if start is not None else default_start(s)
    if root not in s.labels():
        raise TranslationError(f"start label {root} does not occur in the end sequent")
    return call_with_deep_stack(_LabeledToDeep().run, p, root)


# -- deep to shallow -------------------------------------------------------------

class _Shallow:
    """A linear run of shallow steps over a polytree with a moving root."""

    def __init__(self, g: LabeledPolytree, root: Label, gen: LabelGen) -> None:
        self.g = g
        self.root = root
        self.gen = gen
        self.steps: list[tuple[NestedSequent, str, dict]] = []

    def reading(self) -> NestedSequent:
        return to_nested(self.root, self.g)

    def emit(self, rule: str, params: dict, g: LabeledPolytree, root: Label | None = None) -> None:
        self.steps.append((self.reading(), rule, params))
        self.g = g
        if root is not None:
            self.root = root

    def move(self, target: Label) -> None:
        for rule, nxt in list(display_moves(self.g, self.root, target)):
            self.emit(rule, {}, self.g, nxt)

    def weaken(self, v: Label, formulas: Sequence[Formula], neighbors: Sequence[Label]) -> None:
        if not formulas and not neighbors:
            return
        self.move(v)
        self.emit("w", {}, drop_sides(self.g.without_formulas(v, formulas), v, neighbors))

    def contract_formula(self, v: Label, f: Formula) -> None:
        self.move(v)
        self.emit("c", {}, self.g.with_formulas(v, [f]))

    def contract_side(self, v: Label, w: Label) -> dict[Label, Label]:
        self.move(v)
        g, cmap = copy_side(self.g, v, w, self.gen)
        self.emit("c", {}, g)
        return cmap

    def close(self, top: Proof | None) -> Proof:
        node = top
        for concl, rule, params in reversed(self.steps):
            node = Proof(concl, rule, params, (node,) if node is not None else ())
        if node is None:
            raise TranslationError("empty shallow fragment")
        return node

    def fork(self) -> "_Shallow":
        other = _Shallow(self.g, self.root, self.gen)
        return other


class _DeepToShallow:
    def __init__(self, calc: Calculus) -> None:
        self.calc = calc
        self.gen = LabelGen(prefix="n")
        self.root = "r"
        self.gen.reserve([self.root])

    def fail(self, node: Proof, why: str) -> TranslationError:
        return TranslationError(f"{node.rule}: {why} at {node.conclusion}")

    def finish(self, b: _Shallow, root: Label, premise: Proof) -> Proof:
        b.move(root)
        if b.reading() != premise.conclusion:
            raise TranslationError(f"rebuilt premise {b.reading()} differs from {premise.conclusion}")
        return b.close(self.run(premise))

    def run(self, node: Proof) -> Proof:
        x = node.conclusion
        assert isinstance(x, NestedSequent)
        if x.is_empty:
            raise self.fail(node, "empty sequent")
        g, amap = to_polytree_addressed(self.root, x, self.gen)
        b = _Shallow(g, self.root, self.gen)
        rule = node.rule
        prem = [q.conclusion for q in node.premises]
        f_hint = _formula(node.params)
        if rule in ("id", "open"):
            for v in g.vertices:
                if has_dual_literals(g.labels[v]) or rule == "open":
                    b.move(v)
                    b.steps.append((b.reading(), rule, {}))
                    return b.close(None)
            raise self.fail(node, "no dual literal pair")
        if rule in ("or", "and"):
            cls = Or if rule == "or" else And
            for v in g.vertices:
                for f in dict.fromkeys(g.labels[v]):
                    if not isinstance(f, cls) or (f_hint is not None and f != f_hint):
                        continue
                    base = g.without_formulas(v, [f])
                    if rule == "or":
                        g1 = base.with_formulas(v, [f.left, f.right])
                        if to_nested(self.root, g1) == prem[0]:
                            b.move(v)
                            b.emit("or", {"formula": str(f)}, g1)
                            return self.finish(b, self.root, node.premises[0])
                    else:
                        gl = base.with_formulas(v, [f.left])
                        gr = base.with_formulas(v, [f.right])
                        if to_nested(self.root, gl) == prem[0] and to_nested(self.root, gr) == prem[1]:
                            b.move(v)
                            concl = b.reading()
                            left, right = b.fork(), b.fork()
                            left.g, right.g = gl, gr
                            lp = self.finish(left, self.root, node.premises[0])
                            rp = self.finish(right, self.root, node.premises[1])
                            top = Proof(concl, "and", {"formula": str(f)}, (lp, rp))
                            return b.close(top)
            raise self.fail(node, "no principal formula found")
        if rule in ("wbox", "bbox"):
            kind = Diamond.WHITE if rule == "wbox" else Diamond.BLACK
            for v in g.vertices:
                for f in dict.fromkeys(g.labels[v]):
                    if not isinstance(f, Box if kind is Diamond.WHITE else BlackBox):
                        continue
                    if f_hint is not None and f != f_hint:
                        continue
                    y = self.gen.fresh()
                    g1 = g.with_vertex(y, [f.body]).with_edges([r_atom(kind, v, y)])
                    if to_nested(self.root, g1) != prem[0]:
                        continue
                    b.contract_formula(v, f)
                    b.emit(rule, {"formula": str(f)}, g1)
                    return self.finish(b, self.root, node.premises[0])
            raise self.fail(node, "no principal box found")
        if rule in ("dia1", "dia2", "bdia1", "bdia2"):
            kind = Diamond.WHITE if rule.startswith("dia") else Diamond.BLACK
            for v in g.vertices:
                for f in dict.fromkeys(g.labels[v]):
                    split = as_diamond(f)
                    if split is None or split[0] is not kind or (f_hint is not None and f != f_hint):
                        continue
                    for w, pol in g.neighbors(v):
                        if pol is not kind:
                            continue
                        g1 = g.with_formulas(w, [split[1]])
                        if to_nested(self.root, g1) != prem[0]:
                            continue
                        b.move(v)
                        b.emit("wdia" if kind is Diamond.WHITE else "bdia", {"formula": str(f)}, g1)
                        return self.finish(b, self.root, node.premises[0])
            raise self.fail(node, "no diamond instance found")
        if rule == "c":
            extra = None
            for a in x.addresses():
                have = Counter(str(f) for f in x.node(a).formulas)
                lookup = {str(f): f for f in x.node(a).formulas}
                for c in prem[0].addresses():
                    more = Counter(str(f) for f in prem[0].node(c).formulas) - have
                    if not more or any(have[k] < n for k, n in more.items()):
                        continue
                    dup = [lookup[k] for k, n in more.items() for _ in range(n)]
                    if prem[0] == x.add_formulas(a, dup):
                        extra = (a, dup)
                        break
                if extra:
                    break
            if extra is None:
                raise self.fail(node, "no contraction instance found")
            v = amap[extra[0]]
            b.move(v)
            b.emit("c", {}, g.with_formulas(v, extra[1]))
            return self.finish(b, self.root, node.premises[0])
        if rule == "w":
            return self.weakening(node, g, b)
        if rule == "dp":
            return self.propagation(node, g, amap, b)
        raise self.fail(node, "rule is not part of the deep calculus")

    def weakening(self, node: Proof, g: LabeledPolytree, b: _Shallow) -> Proof:
        small = to_polytree("p", node.premises[0].conclusion, LabelGen(prefix="p_"))  # type: ignore[arg-type]
        emb = embed(small, g)
        if emb is None:
            raise self.fail(node, "premise does not embed")
        image = set(emb.values())
        inv = {v: k for k, v in emb.items()}
        first = min(image, key=lambda v: g.distance(self.root, v))
        order = [first]
        seen = {first}
        k = 0
        while k < len(order):
            for w, _ in g.neighbors(order[k]):
                if w in image and w not in seen:
                    seen.add(w)
                    order.append(w)
            k += 1
        for v in order:
            extra = Counter(g.labels[v]) - Counter(small.labels[inv[v]])
            drop_f = [f for f, n in extra.items() for _ in range(n)]
            drop_n = [w for w, _ in b.g.neighbors(v) if w not in image]
            b.weaken(v, drop_f, drop_n)
        return self.finish(b, emb[small.vertices[0]], node.premises[0])

    def propagation(self, node: Proof, g: LabeledPolytree, amap: dict[Address, Label], b: _Shallow) -> Proof:
        path = parse_path_param(node.params["witness"], lambda n: tuple(int(i) for i in n))
        walk = [amap[a] for a in path.nodes]
        word = path.diamonds
        prem = node.premises[0].conclusion
        f_hint = _formula(node.params)
        grammar = self.calc.grammar()
        chosen = None
        for f in dict.fromkeys(g.labels[walk[0]]):
            split = as_diamond(f)
            if split is None or (f_hint is not None and f != f_hint):
                continue
            tree = parse_tree(grammar, word, split[0])
            if tree is None:
                continue
            if to_nested(self.root, g.with_formulas(walk[-1], [split[1]])) == prem:
                chosen = (f, split[0], split[1], tree)
                break
        if chosen is None:
            raise self.fail(node, "no propagation instance matches the witness")
        f, kind, body, tree = chosen
        home = self.root
        m = len(word)
        j = walk[-1]
        b.move(j)
        if m == 0:
            b.contract_formula(j, f)
            chain = [j]
        else:
            orig = {v: v for v in b.g.vertices}
            rev = [j]
            cur = j
            for k in range(m - 1, -1, -1):
                prev = rev[-2] if len(rev) >= 2 else None
                if k == m - 1:
                    n, copy = walk[m - 1], True
                elif walk[k] == walk[k + 2]:
                    n, copy = prev, True
                else:
                    cands = [u for u, _ in b.g.neighbors(cur) if u != prev and orig.get(u) == walk[k]]
                    if len(cands) != 1:
                        raise self.fail(node, "witness walk cannot be followed")
                    n, copy = cands[0], False
                if copy:
                    cmap = b.contract_side(cur, n)  # type: ignore[arg-type]
                    for o, c in cmap.items():
                        orig[c] = orig[o]
                    n = cmap[n]  # type: ignore[index]
                b.move(n)  # type: ignore[arg-type]
                cur = n  # type: ignore[assignment]
                rev.append(cur)
            chain = rev[::-1]
            for k in range(m):
                v = chain[k]
                keep = {chain[k + 1]} | ({chain[k - 1]} if k > 0 else set())
                fs = list(b.g.labels[v])
                if k == 0:
                    fs.remove(f)
                b.weaken(v, fs, [u for u, _ in b.g.neighbors(v) if u not in keep])
        self._collapse(tree, 0, chain, f, b)
        if len(chain) != 2 or chain[-1] != j:
            raise self.fail(node, "collapse did not end with a single edge")
        s = chain[0]
        b.move(s)
        b.emit("wdia" if kind is Diamond.WHITE else "bdia", {"formula": str(f)}, b.g.with_formulas(j, [body]))
        b.weaken(j, [], [s])
        return self.finish(b, home, node.premises[0])

    def _collapse(self, t: ParseNode, k: int, chain: list[Label], f: Formula, b: _Shallow) -> None:
        if t.is_identity:
            return
        ax = t.axiom
        assert ax is not None
        label = {"axiom": str(ax.general())}
        if not t.children:
            v = chain[k]
            left = self.gen.fresh()
            g = b.g.with_vertex(left, [f] if k == 0 else [])
            if k == 0:
                g = g.without_formulas(v, [f])
            if k > 0:
                g = move_neighbors(g, v, left, [chain[k - 1]])
            g = g.with_edges([r_atom(t.symbol, left, v)])
            b.move(v)
            b.emit("path", label, g, v if t.inverted else left)
            chain.insert(k, left)
            return
        for i, c in enumerate(t.children):
            self._collapse(c, k + i, chain, f, b)
        n = len(t.children)
        start, end = (chain[k + n], chain[k]) if t.inverted else (chain[k], chain[k + n])
        seg = chain[k : k + n + 1]
        removed = [e for e in b.g.edges if e[0] in seg and e[1] in seg]
        b.move(start)
        g = b.g.without_edges(removed).without_vertices(seg[1:-1]).with_edges([r_atom(ax.consequent, start, end)])
        b.emit("path", label, g)
        del chain[k + 1 : k + n]


def deep_to_shallow(p: Proof, calc: Calculus) -> Proof:
    """Simulate a DKT proof in SKT with the structural rules of the same axioms."""
    return call_with_deep_stack(_DeepToShallow(calc).run, p)


def pipeline_reverse(p: Proof, calc: Calculus, start: Label | None = None) -> Proof:
    """Labeled proof with structural rules of path axioms into SKT."""
    lab = eliminate_structural(p, calc)
    deep = labeled_to_deep(lab, start)
    return deep_to_shallow(deep, calc)


__all__ = [
    "TranslationError",
    "shallow_to_labeled",
    "eliminate_structural",
    "labeled_to_deep",
    "deep_to_shallow",
    "pipeline_reverse",
    "rename_labels",
    "translation_labels",
]
