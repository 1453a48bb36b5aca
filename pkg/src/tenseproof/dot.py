"""Graphviz DOT text for propagation graphs, polytrees and proofs."""

from __future__ import annotations

from .formula import Diamond, pretty
from .polytree import LabeledPolytree
from .proof import Proof
from .propagation import PropagationGraph
from .sequent import LabeledSequent, show_labeled, show_nested


def _q(s: object) -> str:
    """DOT string literal; newlines become centred line breaks."""
    text = str(s).replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{text}"'


def _node_name(n: object) -> str:
    if isinstance(n, tuple):
        return "root" if not n else "n" + ".".join(map(str, n))
    return str(n)


def propagation_dot(g: PropagationGraph, contents: dict | None = None, name: str = "pg") -> str:
    """Solid edges carry <>, dashed edges carry <#>."""
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    for n in sorted(g.nodes, key=repr):
        label = _node_name(n)
        if contents and contents.get(n):
            label += "\n" + ", ".join(pretty(f) for f in contents[n])
        lines.append(f"  {_q(_node_name(n))} [label={_q(label)}];")
    for a, b, d in sorted(g.edges, key=repr):
        style = "solid" if d is Diamond.WHITE else "dashed"
        lines.append(f"  {_q(_node_name(a))} -> {_q(_node_name(b))} [label={_q(d.glyph)}, style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def polytree_dot(g: LabeledPolytree, name: str = "polytree") -> str:
    lines = [f"digraph {name} {{", "  node [shape=box];"]
    for v in g.vertices:
        fs = ", ".join(pretty(f) for f in g.labels.get(v, ()))
        lines.append(f"  {_q(v)} [label={_q(f'{v}: {fs}' if fs else v)}];")
    for a, b in g.edges:
        lines.append(f"  {_q(a)} -> {_q(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def proof_dot(p: Proof, name: str = "proof") -> str:
    """Premises point to their conclusion, as in a written derivation."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for path, node in p.walk():
        s = node.conclusion
        text = show_labeled(s) if isinstance(s, LabeledSequent) else show_nested(s)
        lines.append(f"  {_q(_node_name(path))} [label={_q(f'{text}   ({node.rule})')}];")
        for i in range(len(node.premises)):
            lines.append(f"  {_q(_node_name(path + (i,)))} -> {_q(_node_name(path))};")
    lines.append("}")
    return "\n".join(lines) + "\n"
