"""Plain-text and Graphviz serializations of automata.

The text dump is deterministic (states renumbered, arcs sorted) so two runs
over the same machine produce byte-identical files; labels are written as
exact symbol-set expressions that round-trip through the expression language.
"""

from __future__ import annotations

from .alphabet import Alphabet
from .fsa import Arc, Fsa


def dump_text(a: Fsa) -> str:
    lines = [f"states {a.n}", f"start {a.start}"]
    lines.append("finals " + " ".join(str(q) for q in sorted(a.finals)))
    for arc in sorted(a.arcs, key=lambda x: (x.src, x.dst, not x.label.pc, x.label.bits)):
        role = "P" if arc.label.pc else "C"
        expr = a.alphabet.format_label_expr(arc.label.bits)
        lines.append(f"arc {arc.src} {arc.dst} {role} {expr}")
    return "\n".join(lines) + "\n"


def dump_dot(a: Fsa, name: str = "fsa") -> str:
    """Graphviz digraph; producer arcs drawn bold, final states doubled."""
    out = [f"digraph {name} {{", "  rankdir=LR;", '  node [shape=circle];']
    out.append(f'  __start [shape=point, label=""];')
    out.append(f"  __start -> {a.start};")
    for q in range(a.n):
        shape = "doublecircle" if q in a.finals else "circle"
        out.append(f"  {q} [shape={shape}];")
    for arc in sorted(a.arcs, key=lambda x: (x.src, x.dst, not x.label.pc, x.label.bits)):
        lbl = a.alphabet.format_label(arc.label.bits).replace('"', '\\"')
        pen = ", penwidth=2" if arc.label.pc else ""
        out.append(f'  {arc.src} -> {arc.dst} [label="{lbl}"{pen}];')
    out.append("}")
    return "\n".join(out) + "\n"


def path_display(a: Fsa, labels) -> str:
    """One raw path in compact notation, e.g. 'w:1+m u:0 repeat repeat'."""
    return " ".join(a.alphabet.format_label(l.bits) for l in labels)
