"""The three lexical enrichments that make copying expressible.

Self loops let a state absorb externally produced material (fixed melodies),
skip arcs let a path advance without spelling a position out (truncation),
and repeat arcs let a path move backwards (re-realization of earlier
positions — the copying device). All added arcs are consumer-typed: the
machinery is inert until some morpheme produces the matching technical
symbol or segment.
"""

from __future__ import annotations

from .fsa import Arc, Fsa, Label


def _is_technical(arc: Arc, a: Fsa) -> bool:
    return bool(arc.label.bits & a.alphabet.tech)


def add_self_loops(a: Fsa) -> Fsa:
    """Consumer self loop over all segment symbols at every state."""
    loop = Label(a.alphabet.seg, False)
    added = tuple(Arc(q, loop, q) for q in range(a.n))
    return Fsa(a.alphabet, a.n, a.start, a.finals, a.arcs + added)


def add_skips(a: Fsa) -> Fsa:
    """Consumer skip arc parallel to every non-technical arc."""
    skip = Label(a.alphabet.skip, False)
    added = tuple(
        Arc(arc.src, skip, arc.dst) for arc in a.arcs if not _is_technical(arc, a)
    )
    return Fsa(a.alphabet, a.n, a.start, a.finals, a.arcs + added)


def add_repeats(a: Fsa) -> Fsa:
    """Consumer repeat arc reversing every non-technical arc."""
    rep = Label(a.alphabet.repeat, False)
    added = tuple(
        Arc(arc.dst, rep, arc.src) for arc in a.arcs if not _is_technical(arc, a)
    )
    return Fsa(a.alphabet, a.n, a.start, a.finals, a.arcs + added)


def enrich(a: Fsa) -> Fsa:
    """The canonical nesting: self loops, then skips, then repeats.

    With this order both the original arcs and the new self loops get skip
    and repeat mirrors, so a path can move back even across absorbed melody
    material.
    """
    return add_repeats(add_skips(add_self_loops(a)))
