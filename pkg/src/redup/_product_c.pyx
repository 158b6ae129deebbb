# cython: language_level=3
"""Compiled product kernel.

Same contract as ``_product_py.product``.  Label bitsets stay Python ints
(they routinely exceed 64 bits), so the win here is the pair bookkeeping:
typed state ids, a flat ``qa * n_b + qb`` key instead of a tuple, and
C-level loops over the adjacency lists.
"""


def product(
    long long n_a,
    long long start_a,
    finals_a,
    arcs_a,
    long long n_b,
    long long start_b,
    finals_b,
    arcs_b,
):
    cdef long long qa, qb, da, db, sid, tid, key, key2
    cdef bint pa, pb
    cdef dict pair_id = {}
    cdef list todo = []
    cdef list finals = []
    cdef list arcs = []
    cdef list out_a = [[] for _ in range(n_a)]
    cdef list out_b = [[] for _ in range(n_b)]
    cdef object bits, ba, bb
    cdef tuple arc_a, arc_b

    for arc_a in arcs_a:
        out_a[<long long> arc_a[0]].append((arc_a[1], arc_a[2], arc_a[3]))
    for arc_b in arcs_b:
        out_b[<long long> arc_b[0]].append((arc_b[1], arc_b[2], arc_b[3]))

    fin_a = frozenset(finals_a)
    fin_b = frozenset(finals_b)

    pair_id[start_a * n_b + start_b] = 0
    todo.append(start_a * n_b + start_b)
    while todo:
        key = <long long> todo.pop()
        qa = key // n_b
        qb = key % n_b
        sid = <long long> pair_id[key]
        if qa in fin_a and qb in fin_b:
            finals.append(sid)
        for arc_a in out_a[qa]:
            da = <long long> arc_a[0]
            ba = arc_a[1]
            pa = <bint> arc_a[2]
            for arc_b in out_b[qb]:
                bb = arc_b[1]
                bits = ba & bb
                if bits:
                    db = <long long> arc_b[0]
                    pb = <bint> arc_b[2]
                    key2 = da * n_b + db
                    cached = pair_id.get(key2)
                    if cached is None:
                        tid = len(pair_id)
                        pair_id[key2] = tid
                        todo.append(key2)
                    else:
                        tid = <long long> cached
                    arcs.append((sid, tid, bits, pa or pb))
    return len(pair_id), 0, finals, arcs, len(pair_id)
