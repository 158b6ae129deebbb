"""Resource-conscious interpretation: open intersection and closing.

Open intersection pairs compatible arcs and ORs their producer bits, so a
producer on either side licenses the combined arc while unmatched consumer
demands stay pending. Closing settles the account: arcs still marked
consumer never found a producer and are deleted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import _kernel
from .alphabet import Alphabet
from .errors import AutomatonError
from .fsa import Arc, Fsa, Label, trim


@dataclass
class ProductStats:
    """Work counters accumulated across intersect_open calls."""

    calls: int = 0
    visited_pairs: int = 0
    per_call: list[int] = field(default_factory=list)

    def record(self, visited: int) -> None:
        self.calls += 1
        self.visited_pairs += visited
        self.per_call.append(visited)


def intersect_open(a: Fsa, b: Fsa, stats: ProductStats | None = None) -> Fsa:
    """Pairwise product with label intersection and producer-dominant pc."""
    if a.alphabet != b.alphabet:
        raise AutomatonError("intersection over mismatched alphabets")
    n, start, finals, arcs, visited = _kernel.product(
        a.n,
        a.start,
        a.finals,
        [(x.src, x.dst, x.label.bits, x.label.pc) for x in a.arcs],
        b.n,
        b.start,
        b.finals,
        [(x.src, x.dst, x.label.bits, x.label.pc) for x in b.arcs],
    )
    if stats is not None:
        stats.record(visited)
    result = Fsa(
        a.alphabet,
        n,
        start,
        frozenset(finals),
        tuple(Arc(src, Label(bits, pc), dst) for src, dst, bits, pc in arcs),
    )
    return trim(result)


def close(a: Fsa) -> Fsa:
    """Closed interpretation: delete arcs whose demands were never produced."""
    return trim(
        Fsa(
            a.alphabet,
            a.n,
            a.start,
            a.finals,
            tuple(arc for arc in a.arcs if arc.label.pc),
        )
    )


def universal_producer(alphabet: Alphabet) -> Fsa:
    """Producer-typed Σ* (technicals included): the always-available resource."""
    return Fsa(
        alphabet, 1, 0, frozenset({0}), (Arc(0, Label(alphabet.sigma, True), 0),)
    )


def prepare_parse_input(alphabet: Alphabet, string: str) -> Fsa:
    """Surface string as a parse automaton.

    A consumer-typed chain — every surface segment demands a lexical producer
    — underspecified for all attributes, with a consumer {repeat, skip} self
    loop on each state so the grammar's technical arcs can surface anywhere.
    """
    tokens = alphabet.tokenize(string)
    arcs = [
        Arc(i, Label(alphabet.char(tok), False), i + 1) for i, tok in enumerate(tokens)
    ]
    tech = Label(alphabet.tech, False)
    arcs.extend(Arc(q, tech, q) for q in range(len(tokens) + 1))
    return Fsa(
        alphabet, len(tokens) + 1, 0, frozenset({len(tokens)}), tuple(arcs)
    )
