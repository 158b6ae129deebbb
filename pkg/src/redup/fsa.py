"""Epsilon-free automata over featured alphabets, with resource-typed arcs.

Every arc carries a Label: a non-empty symbol-set (int bitmask over the
alphabet) plus one producer/consumer bit. The bit is part of arc identity for
all structural operations — determinization and minimization never merge a
producer arc with a consumer arc, which is what keeps resource accounting
intact through normalization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

from .alphabet import Alphabet
from .errors import AutomatonError, EnumerationCapError, InventoryError

DEFAULT_ENUM_CAP = 200_000


class Label(NamedTuple):
    bits: int
    pc: bool  # True: producer, False: consumer


class Arc(NamedTuple):
    src: int
    label: Label
    dst: int


@dataclass(frozen=True)
class Fsa:
    """Immutable epsilon-free automaton.

    States are 0..n-1 with a single start state; `finals` may be empty (the
    empty language). Arcs are kept exactly as constructed — duplicates are
    legal and observable (enrichment re-application adds them on purpose).
    """

    alphabet: Alphabet
    n: int
    start: int
    finals: frozenset[int]
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        if self.n < 1:
            raise AutomatonError("an automaton needs at least one state")
        if not 0 <= self.start < self.n:
            raise AutomatonError(f"start state {self.start} out of range")
        for q in self.finals:
            if not 0 <= q < self.n:
                raise AutomatonError(f"final state {q} out of range")
        sigma = self.alphabet.sigma
        for arc in self.arcs:
            if not 0 <= arc.src < self.n or not 0 <= arc.dst < self.n:
                raise AutomatonError(f"arc endpoint out of range: {arc}")
            bits = arc.label.bits
            if bits == 0:
                raise AutomatonError(
                    "empty-label (epsilon) arc: epsilon transitions would make "
                    "technical-symbol counts ambiguous and are not representable"
                )
            if bits & ~sigma:
                raise AutomatonError("arc label uses symbols outside the alphabet")

    # Small conveniences used all over the test-suite and CLI.

    def out_arcs(self) -> list[list[Arc]]:
        by_src: list[list[Arc]] = [[] for _ in range(self.n)]
        for arc in self.arcs:
            by_src[arc.src].append(arc)
        return by_src

    def in_arcs(self) -> list[list[Arc]]:
        by_dst: list[list[Arc]] = [[] for _ in range(self.n)]
        for arc in self.arcs:
            by_dst[arc.dst].append(arc)
        return by_dst

    def is_final(self, q: int) -> bool:
        return q in self.finals


# ---------------------------------------------------------------------------
# basic builders


def empty_string_fsa(alphabet: Alphabet) -> Fsa:
    """Accepts exactly the empty string."""
    return Fsa(alphabet, 1, 0, frozenset({0}), ())


def never_fsa(alphabet: Alphabet) -> Fsa:
    """Accepts nothing (the canonical empty automaton)."""
    return Fsa(alphabet, 1, 0, frozenset(), ())


def symbol_fsa(alphabet: Alphabet, bits: int, pc: bool = False) -> Fsa:
    """Accepts exactly one symbol drawn from `bits`."""
    return Fsa(alphabet, 2, 0, frozenset({1}), (Arc(0, Label(bits, pc), 1),))


def build_from_string(
    alphabet: Alphabet,
    string: str | Sequence[str],
    attrs: Sequence[int | None] | None = None,
    pc: bool = True,
) -> Fsa:
    """Linear producer automaton for a lexical string.

    Each token becomes one arc labeled with every attribute variant of that
    token, optionally narrowed by a per-token mask from `attrs`. Raises
    InventoryError for tokens missing from the inventory.
    """
    tokens = alphabet.tokenize(string) if isinstance(string, str) else list(string)
    if attrs is not None and len(attrs) != len(tokens):
        raise AutomatonError("attrs must align with the token sequence")
    arcs = []
    for i, tok in enumerate(tokens):
        bits = alphabet.char(tok)
        if attrs is not None and attrs[i] is not None:
            bits &= attrs[i]
            if bits == 0:
                raise AutomatonError(
                    f"attribute spec empties token {tok!r} at position {i}"
                )
        arcs.append(Arc(i, Label(bits, pc), i + 1))
    return Fsa(alphabet, len(tokens) + 1, 0, frozenset({len(tokens)}), tuple(arcs))


# ---------------------------------------------------------------------------
# rational operations (concatenation, union, star, optionality)


def combine(kind: str, parts: Sequence[Fsa], alphabet: Alphabet | None = None) -> Fsa:
    """Concatenate/union/star/option automata.

    Built with internal epsilon transitions which are removed before the
    result is returned; producer/consumer bits of copied arcs are untouched.
    """
    if parts:
        alphabet = parts[0].alphabet
        for p in parts[1:]:
            if p.alphabet != alphabet:
                raise AutomatonError("combine over mismatched alphabets")
    if alphabet is None:
        raise AutomatonError("combine of zero parts needs an explicit alphabet")

    if kind in ("star", "optional") and len(parts) != 1:
        raise AutomatonError(f"{kind} takes exactly one operand")
    if kind == "concat" and not parts:
        return empty_string_fsa(alphabet)
    if kind == "union" and not parts:
        return never_fsa(alphabet)

    arcs: list[Arc] = []
    eps: list[tuple[int, int]] = []
    offset = 0
    placed: list[tuple[int, Fsa]] = []
    for p in parts:
        for a in p.arcs:
            arcs.append(Arc(a.src + offset, a.label, a.dst + offset))
        placed.append((offset, p))
        offset += p.n
    root = offset  # fresh start state
    n = offset + 1
    finals: set[int] = set()

    if kind == "concat":
        eps.append((root, placed[0][0] + placed[0][1].start))
        for (off_a, pa), (off_b, pb) in zip(placed, placed[1:]):
            for f in pa.finals:
                eps.append((off_a + f, off_b + pb.start))
        off_last, last = placed[-1]
        finals = {off_last + f for f in last.finals}
    elif kind == "union":
        for off, p in placed:
            eps.append((root, off + p.start))
            finals |= {off + f for f in p.finals}
    elif kind == "star":
        off, p = placed[0]
        eps.append((root, off + p.start))
        for f in p.finals:
            eps.append((off + f, root))
        finals = {root}
    elif kind == "optional":
        off, p = placed[0]
        eps.append((root, off + p.start))
        finals = {off + f for f in p.finals} | {root}
    else:
        raise AutomatonError(f"unknown combine kind {kind!r}")

    return trim(_remove_epsilons(alphabet, n, root, finals, arcs, eps))


def _remove_epsilons(
    alphabet: Alphabet,
    n: int,
    start: int,
    finals: set[int],
    arcs: list[Arc],
    eps: list[tuple[int, int]],
) -> Fsa:
    closure: list[set[int]] = [{q} for q in range(n)]
    adj: list[list[int]] = [[] for _ in range(n)]
    for s, d in eps:
        adj[s].append(d)
    for q in range(n):
        stack = [q]
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt not in closure[q]:
                    closure[q].add(nxt)
                    stack.append(nxt)
    by_src: list[list[Arc]] = [[] for _ in range(n)]
    for a in arcs:
        by_src[a.src].append(a)
    out: list[Arc] = []
    new_finals: set[int] = set()
    for q in range(n):
        seen: set[tuple[int, bool, int]] = set()
        for p in closure[q]:
            for a in by_src[p]:
                key = (a.label.bits, a.label.pc, a.dst)
                if key not in seen:
                    seen.add(key)
                    out.append(Arc(q, a.label, a.dst))
            if p in finals:
                new_finals.add(q)
    return Fsa(alphabet, n, start, frozenset(new_finals), tuple(out))


# ---------------------------------------------------------------------------
# normalization


def trim(a: Fsa) -> Fsa:
    """Keep only states on some start-to-final path (canonical empty if none)."""
    out = a.out_arcs()
    fwd = {a.start}
    stack = [a.start]
    while stack:
        q = stack.pop()
        for arc in out[q]:
            if arc.dst not in fwd:
                fwd.add(arc.dst)
                stack.append(arc.dst)
    inc = a.in_arcs()
    bwd = set(a.finals)
    stack = list(a.finals)
    while stack:
        q = stack.pop()
        for arc in inc[q]:
            if arc.src not in bwd:
                bwd.add(arc.src)
                stack.append(arc.src)
    keep = fwd & bwd
    if a.start not in keep:
        return never_fsa(a.alphabet)
    order = sorted(keep)
    remap = {old: new for new, old in enumerate(order)}
    arcs = tuple(
        Arc(remap[x.src], x.label, remap[x.dst])
        for x in a.arcs
        if x.src in keep and x.dst in keep
    )
    return Fsa(a.alphabet, len(order), remap[a.start],
               frozenset(remap[q] for q in a.finals if q in keep), arcs)


def label_atoms(labels: Iterable[int]) -> list[int]:
    """Coarsest partition of the alphabet compatible with every given set.

    Each input label is a disjoint union of returned atoms, so atoms act as
    the effective alphabet for subset construction and minimization.
    """
    labels = list(labels)
    blocks: list[int] = []
    rest = 0
    for bits in labels:
        rest |= bits
    if rest:
        blocks = [rest]
    for bits in labels:
        nxt = []
        for b in blocks:
            inside = b & bits
            outside = b & ~bits
            if inside:
                nxt.append(inside)
            if outside:
                nxt.append(outside)
        blocks = nxt
    return blocks


def _subset_construct(
    alphabet: Alphabet,
    arcs: Sequence[Arc],
    n: int,
    initial: frozenset[int],
    accepting: frozenset[int],
    atoms: list[int],
) -> tuple[int, int, frozenset[int], tuple[Arc, ...]]:
    by_src: list[list[Arc]] = [[] for _ in range(n)]
    for a in arcs:
        by_src[a.src].append(a)
    states: dict[frozenset[int], int] = {initial: 0}
    todo = [initial]
    out_arcs: list[Arc] = []
    finals: set[int] = set()
    while todo:
        subset = todo.pop()
        sid = states[subset]
        if subset & accepting:
            finals.add(sid)
        moves: dict[tuple[int, bool], set[int]] = {}
        for q in subset:
            for arc in by_src[q]:
                for i, atom in enumerate(atoms):
                    if atom & arc.label.bits:
                        moves.setdefault((i, arc.label.pc), set()).add(arc.dst)
        regroup: dict[tuple[frozenset[int], bool], int] = {}
        for (i, pc), targets in moves.items():
            key = (frozenset(targets), pc)
            regroup[key] = regroup.get(key, 0) | atoms[i]
        for (targets, pc), bits in sorted(
            regroup.items(), key=lambda kv: (kv[1], kv[0][1])
        ):
            if targets not in states:
                states[targets] = len(states)
                todo.append(targets)
            out_arcs.append(Arc(sid, Label(bits, pc), states[targets]))
    return len(states), 0, frozenset(finals), tuple(out_arcs)


def determinize(a: Fsa) -> Fsa:
    """Subset construction over the label-atom partition (pc kept distinct)."""
    a = trim(a)
    if not a.finals:
        return a
    atoms = label_atoms(arc.label.bits for arc in a.arcs)
    n, start, finals, arcs = _subset_construct(
        a.alphabet, a.arcs, a.n, frozenset({a.start}), a.finals, atoms
    )
    return trim(Fsa(a.alphabet, n, start, finals, arcs))


def minimize(a: Fsa) -> Fsa:
    """Minimal deterministic form (double-reversal construction)."""
    a = trim(a)
    if not a.finals:
        return a
    atoms = label_atoms(arc.label.bits for arc in a.arcs)

    def reverse_det(n, start_set, arcs, accepting):
        rev = tuple(Arc(x.dst, x.label, x.src) for x in arcs)
        return _subset_construct(a.alphabet, rev, n, start_set, accepting, atoms)

    n1, s1, f1, arcs1 = reverse_det(a.n, frozenset(a.finals), a.arcs, frozenset({a.start}))
    n2, s2, f2, arcs2 = reverse_det(n1, f1, arcs1, frozenset({s1}))
    return trim(Fsa(a.alphabet, n2, s2, f2, arcs2))


def normalize(a: Fsa, mode: str = "minimize") -> Fsa:
    if mode == "trim":
        return trim(a)
    if mode == "determinize":
        return determinize(a)
    if mode == "minimize":
        return minimize(a)
    raise AutomatonError(f"unknown normalize mode {mode!r}")


def canonical(a: Fsa) -> Fsa:
    """Minimized automaton renumbered into BFS order with sorted arcs.

    Equal canonical forms mean isomorphic minimal machines, which for
    deterministic machines means equal languages.
    """
    m = minimize(a)
    order: dict[int, int] = {m.start: 0}
    by_src = m.out_arcs()
    queue = [m.start]
    while queue:
        q = queue.pop(0)
        for arc in sorted(by_src[q], key=lambda x: (x.label.bits, x.label.pc, x.dst)):
            if arc.dst not in order:
                order[arc.dst] = len(order)
                queue.append(arc.dst)
    arcs = tuple(
        sorted(
            (Arc(order[x.src], x.label, order[x.dst]) for x in m.arcs),
            key=lambda x: (x.src, x.label.bits, x.label.pc, x.dst),
        )
    )
    return Fsa(m.alphabet, m.n, 0, frozenset(order[q] for q in m.finals), arcs)


def language_equal(a: Fsa, b: Fsa) -> bool:
    return canonical(a) == canonical(b)


# ---------------------------------------------------------------------------
# queries


def is_empty(a: Fsa) -> bool:
    out = a.out_arcs()
    seen = {a.start}
    stack = [a.start]
    while stack:
        q = stack.pop()
        if q in a.finals:
            return False
        for arc in out[q]:
            if arc.dst not in seen:
                seen.add(arc.dst)
                stack.append(arc.dst)
    return True


def accepts(a: Fsa, symbols: Iterable[int]) -> bool:
    """Membership of a fully specified symbol-index sequence."""
    out = a.out_arcs()
    current = {a.start}
    for idx in symbols:
        bit = 1 << idx
        nxt = set()
        for q in current:
            for arc in out[q]:
                if arc.label.bits & bit:
                    nxt.add(arc.dst)
        if not nxt:
            return False
        current = nxt
    return bool(current & a.finals)


def has_cycle(a: Fsa) -> bool:
    """True if some cycle is reachable from the start state."""
    out = a.out_arcs()
    color = [0] * a.n  # 0 unvisited, 1 on stack, 2 done
    stack: list[tuple[int, Iterable[Arc]]] = [(a.start, iter(out[a.start]))]
    color[a.start] = 1
    while stack:
        q, it = stack[-1]
        arc = next(it, None)
        if arc is None:
            color[q] = 2
            stack.pop()
            continue
        if color[arc.dst] == 1:
            return True
        if color[arc.dst] == 0:
            color[arc.dst] = 1
            stack.append((arc.dst, iter(out[arc.dst])))
    return False


def enumerate_language(
    a: Fsa, max_len: int, cap: int = DEFAULT_ENUM_CAP
) -> set[tuple[int, ...]]:
    """All accepted symbol-index sequences of length <= max_len.

    Every arc contributes one branch per symbol in its label, so this is the
    fully specified language — use it only over small, mostly singleton-label
    machines. Aborts with EnumerationCapError beyond `cap` tracked paths.
    """
    out = a.out_arcs()
    results: set[tuple[int, ...]] = set()
    frontier: set[tuple[int, tuple[int, ...]]] = {(a.start, ())}
    for _ in range(max_len + 1):
        for q, path in frontier:
            if q in a.finals:
                results.add(path)
        nxt: set[tuple[int, tuple[int, ...]]] = set()
        for q, path in frontier:
            if len(path) == max_len:
                continue
            for arc in out[q]:
                bits = arc.label.bits
                while bits:
                    low = bits & -bits
                    nxt.add((arc.dst, path + (low.bit_length() - 1,)))
                    bits ^= low
            if len(nxt) + len(results) > cap:
                raise EnumerationCapError(cap)
        if not nxt:
            break
        frontier = nxt
    return results


def enumerate_label_paths(
    a: Fsa, max_len: int, cap: int = DEFAULT_ENUM_CAP
) -> set[tuple[Label, ...]]:
    """All label sequences along accepting paths of length <= max_len."""
    out = a.out_arcs()
    results: set[tuple[Label, ...]] = set()
    frontier: set[tuple[int, tuple[Label, ...]]] = {(a.start, ())}
    for _ in range(max_len + 1):
        for q, path in frontier:
            if q in a.finals:
                results.add(path)
        nxt: set[tuple[int, tuple[Label, ...]]] = set()
        for q, path in frontier:
            if len(path) == max_len:
                continue
            for arc in out[q]:
                nxt.add((arc.dst, path + (arc.label,)))
            if len(nxt) + len(results) > cap:
                raise EnumerationCapError(cap)
        if not nxt:
            break
        frontier = nxt
    return results


# ---------------------------------------------------------------------------
# surface projection


def surface_path(alphabet: Alphabet, path: Iterable[int | Label]) -> str:
    """Project one raw path to its surface string.

    Technical symbols disappear; each segment contributes its bare token.
    Accepts symbol indices or Labels (whose members must agree on the token).
    """
    chars: list[str] = []
    for step in path:
        if isinstance(step, Label):
            bits = step.bits & alphabet.seg
            if not bits:
                continue
            toks = {s.char for s in alphabet.members(bits)}
            if len(toks) > 1:
                raise AutomatonError(
                    f"label covers several tokens ({sorted(toks)}); "
                    "surface projection is ambiguous"
                )
            chars.append(toks.pop())
        else:
            sym = alphabet.symbols[step]
            if sym.char is not None:
                chars.append(sym.char)
    return "".join(chars)


def project_surface(a: Fsa) -> Fsa:
    """Erase attributes and technical symbols from an automaton.

    Technical arcs become epsilon transitions (removed), and every segment
    label widens to all variants of the tokens it mentions, so the projected
    language is exactly the set of surface strings.
    """
    al = a.alphabet
    arcs: list[Arc] = []
    eps: list[tuple[int, int]] = []
    for arc in a.arcs:
        seg_bits = arc.label.bits & al.seg
        if arc.label.bits & al.tech:
            eps.append((arc.src, arc.dst))
        if seg_bits:
            widened = 0
            for tok in {s.char for s in al.members(seg_bits)}:
                widened |= al.char(tok)
            arcs.append(Arc(arc.src, Label(widened, arc.label.pc), arc.dst))
    return trim(_remove_epsilons(al, a.n, a.start, set(a.finals), arcs, eps))


def surface_strings(
    a: Fsa, max_len: int | None = None, cap: int = DEFAULT_ENUM_CAP
) -> set[str]:
    """The set of surface strings of an automaton.

    For acyclic surface projections (the usual case after closed
    interpretation) the result is the complete finite language; otherwise
    max_len must be given to bound the walk.
    """
    p = project_surface(a)
    if max_len is None:
        if has_cycle(p):
            raise AutomatonError(
                "surface language is infinite; pass max_len to bound enumeration"
            )
        max_len = p.n  # acyclic: a path revisits no state
    out = p.out_arcs()
    al = p.alphabet
    results: set[str] = set()
    frontier: set[tuple[int, str]] = {(p.start, "")}
    for _ in range(max_len):
        for q, s in frontier:
            if q in p.finals:
                results.add(s)
        nxt: set[tuple[int, str]] = set()
        for q, s in frontier:
            for arc in out[q]:
                for tok in sorted({sym.char for sym in al.members(arc.label.bits)}):
                    nxt.add((arc.dst, s + tok))
            if len(nxt) + len(results) > cap:
                raise EnumerationCapError(cap)
        if not nxt:
            break
        frontier = nxt
    for q, s in frontier:
        if q in p.finals:
            results.add(s)
    return results
