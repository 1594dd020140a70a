"""Exhaustive ground-truth enumeration for small instances.

Assigns union edges to the two factors by backtracking with degree
propagation, keeps complete assignments whose factors are both single
Hamiltonian cycles, and deduplicates under factor swap (and, for
undirected inputs, traversal orientation, since factors are compared
as edge multisets).  Intended as an independent reference: it shares
no machinery with the solvers.
"""

from __future__ import annotations

from .multigraph import (
    W,
    Z,
    HamCycle,
    TwoFactorPair,
    UnionMultigraph,
    components,
    cycle_from_factor,
)

MAX_ORACLE_N = 14

UNSET = -1


def enumerate_decompositions(
    g: UnionMultigraph,
) -> list[tuple[HamCycle, HamCycle]]:
    """All decompositions of the union into two Hamiltonian cycles."""
    if g.n > MAX_ORACLE_N:
        raise ValueError(
            f"exhaustive enumeration capped at n <= {MAX_ORACLE_N}"
        )
    n = g.n
    m = len(g.edges)
    side = [UNSET] * m
    if g.directed:
        cap = 1
        slots = {
            Z: [g.out_arcs, g.in_arcs],
            W: [g.out_arcs, g.in_arcs],
        }
        counts = {
            Z: [[0] * (n + 1), [0] * (n + 1)],
            W: [[0] * (n + 1), [0] * (n + 1)],
        }

        def touched(e, slot):
            return e.tail if slot == 0 else e.head
    else:
        cap = 2
        slots = {Z: [g.inc], W: [g.inc]}
        counts = {Z: [[0] * (n + 1)], W: [[0] * (n + 1)]}

        def touched(e, slot):
            return (e.tail, e.head)

    trail: list[int] = []

    def place(edge_id, s) -> bool:
        """Assign with propagation; False on contradiction."""
        stack = [(edge_id, s)]
        while stack:
            eid, want = stack.pop()
            if side[eid] != UNSET:
                if side[eid] != want:
                    return False
                continue
            e = g.edges[eid]
            if e.partner is not None and side[e.partner] == want:
                return False
            side[eid] = want
            trail.append(eid)
            if g.directed:
                ends = ((0, e.tail), (1, e.head))
            else:
                ends = ((0, e.tail), (0, e.head))
            for slot, v in ends:
                c = counts[want][slot]
                c[v] += 1
                if c[v] > cap:
                    return False
                if c[v] == cap:
                    # saturated: remaining incident edges go the other way
                    other = W if want == Z else Z
                    for oid in slots[want][slot][v]:
                        if side[oid] == UNSET:
                            stack.append((oid, other))
            if e.partner is not None and side[e.partner] == UNSET:
                stack.append((e.partner, W if want == Z else Z))
        return True

    def undo(mark):
        while len(trail) > mark:
            eid = trail.pop()
            e = g.edges[eid]
            s = side[eid]
            if g.directed:
                counts[s][0][e.tail] -= 1
                counts[s][1][e.head] -= 1
            else:
                counts[s][0][e.tail] -= 1
                counts[s][0][e.head] -= 1
            side[eid] = UNSET

    found: dict = {}

    def record():
        pair = TwoFactorPair(g, side)
        if pair.broken:
            return
        report = components(pair)
        if report.total != 2:
            return
        z = cycle_from_factor(pair, Z)
        w = cycle_from_factor(pair, W)
        key = frozenset((z.edge_multiset(), w.edge_multiset()))
        if key not in found:
            found[key] = (z, w)

    def search(from_edge):
        eid = from_edge
        while eid < m and side[eid] != UNSET:
            eid += 1
        if eid == m:
            record()
            return
        for s in (Z, W):
            mark = len(trail)
            if place(eid, s):
                search(eid + 1)
            undo(mark)

    # factor labels are interchangeable: pin the first edge to Z
    mark = len(trail)
    if place(0, Z):
        search(1)
    undo(mark)

    return [found[k] for k in sorted(found, key=sorted)]


def has_second_decomposition(
    g: UnionMultigraph, x: HamCycle, y: HamCycle
) -> tuple[bool, tuple[HamCycle, HamCycle] | None]:
    """Ground-truth answer plus a witness different from {x, y}."""
    original = frozenset((x.edge_multiset(), y.edge_multiset()))
    for z, w in enumerate_decompositions(g):
        if frozenset((z.edge_multiset(), w.edge_multiset())) != original:
            return True, (z, w)
    return False, None
