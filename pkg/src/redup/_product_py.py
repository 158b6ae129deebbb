"""Pure-Python product kernel.

Shared contract with the compiled backend: operate on plain tuples so either
implementation can be swapped in behind `redup._kernel.product`.
"""

from __future__ import annotations

from typing import Sequence


def product(
    n_a: int,
    start_a: int,
    finals_a: frozenset[int],
    arcs_a: Sequence[tuple[int, int, int, bool]],
    n_b: int,
    start_b: int,
    finals_b: frozenset[int],
    arcs_b: Sequence[tuple[int, int, int, bool]],
) -> tuple[int, int, list[int], list[tuple[int, int, int, bool]], int]:
    """Reachable pair-product of two arc lists.

    Arcs are (src, dst, label_bits, pc) tuples. A pair of arcs combines iff
    their labels overlap; the result arc gets the label intersection and the
    OR of the pc bits. Returns (n_states, start, finals, arcs, visited_pairs)
    where visited_pairs counts the distinct state pairs discovered — the
    work measure used to compare engines.
    """
    out_a: list[list[tuple[int, int, bool]]] = [[] for _ in range(n_a)]
    for src, dst, bits, pc in arcs_a:
        out_a[src].append((dst, bits, pc))
    out_b: list[list[tuple[int, int, bool]]] = [[] for _ in range(n_b)]
    for src, dst, bits, pc in arcs_b:
        out_b[src].append((dst, bits, pc))

    pair_id: dict[tuple[int, int], int] = {(start_a, start_b): 0}
    todo = [(start_a, start_b)]
    finals: list[int] = []
    arcs: list[tuple[int, int, int, bool]] = []
    while todo:
        qa, qb = todo.pop()
        sid = pair_id[(qa, qb)]
        if qa in finals_a and qb in finals_b:
            finals.append(sid)
        for da, ba, pa in out_a[qa]:
            for db, bb, pb in out_b[qb]:
                bits = ba & bb
                if bits:
                    key = (da, db)
                    tid = pair_id.get(key)
                    if tid is None:
                        tid = len(pair_id)
                        pair_id[key] = tid
                        todo.append(key)
                    arcs.append((sid, tid, bits, pa or pb))
    return len(pair_id), 0, finals, arcs, len(pair_id)
