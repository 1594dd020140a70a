"""Local search over factor assignments of the union multigraph.

The objective is the total number of connected components over both
factors; 2 means each factor is a single Hamiltonian cycle.  Moves
flip edges between factors.  Chain fixing propagates a forced move
through the degree contract: directed graphs via the sibling arcs at
the endpoints, undirected graphs via vertices whose factor degree
saturates.  All mutation goes through a trail so failed candidates
roll back exactly.

One copy of every parallel edge pair is pinned in each factor up
front: splitting them is necessary for Hamiltonicity, so the search
never needs to consider moving them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .instances import fisher_yates
from .multigraph import W, Z, TwoFactorPair, components

FixTrail = list  # entries: (edge id, prior side, prior fixed flag)


@dataclass
class HeuristicParams:
    attempt_limit: int = 10
    depth_limit: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.attempt_limit < 1:
            raise ValueError("attempt_limit must be positive")
        if self.depth_limit < 0:
            raise ValueError("depth_limit must be non-negative")


@dataclass
class TraceRecorder:
    """Objective values at accepted states, one sequence per search run."""

    sequences: list = field(default_factory=list)
    valid: bool = True

    def open_run(self, start_total: int) -> None:
        self.sequences.append([start_total])

    def accept(self, pair: TwoFactorPair, total: int) -> None:
        self.sequences[-1].append(total)
        # revalidate from scratch: accepted states must be clean 2-factors
        fresh = TwoFactorPair(pair.graph, pair.side)
        if fresh.broken:
            self.valid = False
        for e in pair.graph.edges:
            if e.partner is not None and (
                pair.side[e.id] == pair.side[e.partner]
            ):
                self.valid = False


def record(pair: TwoFactorPair, trail: FixTrail, edge_id: int) -> None:
    trail.append((edge_id, pair.side[edge_id], pair.fixed[edge_id]))


def rollback(pair: TwoFactorPair, trail: FixTrail, mark: int) -> None:
    """Restore sides and fixed flags to the state at `mark`."""
    while len(trail) > mark:
        edge_id, side, fixed = trail.pop()
        pair.set_side(edge_id, side)
        pair.fixed[edge_id] = fixed


def fix_parallel_copies(pair: TwoFactorPair) -> None:
    """Pin both copies of every parallel pair, one per factor."""
    for e in pair.graph.edges:
        if e.partner is None or e.partner < e.id:
            continue
        if pair.side[e.id] == pair.side[e.partner]:
            raise ValueError("parallel copies must start in different factors")
        pair.fixed[e.id] = True
        pair.fixed[e.partner] = True


def unfix_non_parallel(pair: TwoFactorPair) -> None:
    for e in pair.graph.edges:
        if e.partner is None:
            pair.fixed[e.id] = False


def fix_edge(
    pair: TwoFactorPair,
    edge_id: int,
    side: int,
    trail: FixTrail,
    recursive: bool = True,
) -> bool:
    """Move an edge to `side` and pin it; False reports a contradiction.

    With `recursive` the move cascades through every edge the degree
    contract then forces; without it only the one edge is touched.
    """
    if not recursive:
        if pair.fixed[edge_id]:
            return pair.side[edge_id] == side
        record(pair, trail, edge_id)
        pair.set_side(edge_id, side)
        pair.fixed[edge_id] = True
        return True
    if pair.graph.directed:
        return _fix_chain_directed(pair, edge_id, side, trail)
    return _fix_chain_undirected(pair, edge_id, side, trail)


def _fix_chain_directed(pair, edge_id, side, trail) -> bool:
    g = pair.graph
    stack = [(edge_id, side)]
    while stack:
        eid, want = stack.pop()
        if pair.fixed[eid]:
            if pair.side[eid] != want:
                return False
            continue
        record(pair, trail, eid)
        pair.set_side(eid, want)
        pair.fixed[eid] = True
        e = g.edges[eid]
        other = W if want == Z else Z
        # the factor has out-degree 1 at the tail and in-degree 1 at the
        # head, so the sibling arcs are forced to the other factor
        for sib in g.out_arcs[e.tail]:
            if sib != eid:
                stack.append((sib, other))
        for sib in g.in_arcs[e.head]:
            if sib != eid:
                stack.append((sib, other))
    return True


def _fix_chain_undirected(pair, edge_id, side, trail) -> bool:
    g = pair.graph
    stack = [(edge_id, side)]
    while stack:
        eid, want = stack.pop()
        if pair.fixed[eid]:
            if pair.side[eid] != want:
                return False
            continue
        record(pair, trail, eid)
        pair.set_side(eid, want)
        pair.fixed[eid] = True
        e = g.edges[eid]
        other = W if want == Z else Z
        for v in (e.tail, e.head):
            pinned = sum(
                1
                for oid in g.inc[v]
                if pair.fixed[oid] and pair.side[oid] == want
            )
            if pinned > 2:
                return False
            if pinned == 2:
                for oid in g.inc[v]:
                    if not pair.fixed[oid]:
                        stack.append((oid, other))
    return True


def _pick(seq, rng):
    return seq[int(rng.integers(0, len(seq)))]


def _movable(pair, v, from_side):
    g = pair.graph
    return [
        oid
        for oid in g.inc[v]
        if not pair.fixed[oid] and pair.side[oid] == from_side
    ]


def _repair_all(pair, rng, trail, recursive) -> bool:
    """Move edges at random broken vertices until none remain."""
    guard = 4 * len(pair.graph.edges)
    while pair.broken:
        guard -= 1
        if guard < 0:
            return False
        v = _pick(sorted(pair.broken), rng)
        if pair.deg_z[v] < 2:
            want, pool = Z, _movable(pair, v, W)
        else:
            want, pool = W, _movable(pair, v, Z)
        if not pool:
            return False
        if not fix_edge(pair, _pick(pool, rng), want, trail, recursive):
            return False
    return True


def _unfixed_z_edges(pair, rng):
    order = [
        e.id
        for e in pair.graph.edges
        if pair.side[e.id] == Z and not pair.fixed[e.id]
    ]
    fisher_yates(order, rng)
    return order


def _expired(deadline):
    return deadline is not None and time.monotonic() > deadline


def local_search_directed(
    pair: TwoFactorPair,
    rng,
    cut_sink=None,
    trace: TraceRecorder | None = None,
    deadline: float | None = None,
) -> TwoFactorPair:
    """Descend by single chain-fixed moves until no move improves.

    Every accepted state's subtours are reported to `cut_sink`; after
    an acceptance all non-parallel pins are released and the sweep
    restarts over a fresh shuffle.
    """
    if not pair.graph.directed:
        raise ValueError("this search works on directed unions")
    trail: FixTrail = []
    fix_parallel_copies(pair)
    best = components(pair).total
    if trace:
        trace.open_run(best)
    while best > 2:
        improved = False
        for eid in _unfixed_z_edges(pair, rng):
            if _expired(deadline):
                return pair
            mark = len(trail)
            if fix_edge(pair, eid, W, trail) and not pair.broken:
                report = components(pair)
                if report.total < best:
                    best = report.total
                    if cut_sink:
                        cut_sink(report)
                    if trace:
                        trace.accept(pair, report.total)
                    unfix_non_parallel(pair)
                    trail.clear()
                    improved = True
                    break
            rollback(pair, trail, mark)
        if not improved:
            break
    return pair


def ls_first_neighbourhood(
    pair: TwoFactorPair,
    params: HeuristicParams,
    rng,
    cut_sink=None,
    trace: TraceRecorder | None = None,
    recursive: bool = True,
    deadline: float | None = None,
) -> TwoFactorPair:
    """One sweep of move-then-repair; returns at the first improvement.

    Each candidate move is given `attempt_limit` randomized repair
    replays from the post-move state.  Cascades that leave no broken
    vertex are deterministic, so they get a single attempt.
    """
    if pair.graph.directed:
        raise ValueError("this neighbourhood works on undirected unions")
    trail: FixTrail = []
    fix_parallel_copies(pair)
    base = components(pair).total
    if trace:
        trace.open_run(base)
    if base == 2:
        return pair
    for eid in _unfixed_z_edges(pair, rng):
        if _expired(deadline):
            return pair
        start = len(trail)
        if not fix_edge(pair, eid, W, trail, recursive):
            rollback(pair, trail, start)
            continue
        checkpoint = len(trail)
        attempts = 1 if not pair.broken else params.attempt_limit
        for _ in range(attempts):
            if _repair_all(pair, rng, trail, recursive):
                report = components(pair)
                if report.total < base:
                    if cut_sink:
                        cut_sink(report)
                    if trace:
                        trace.accept(pair, report.total)
                    unfix_non_parallel(pair)
                    trail.clear()
                    return pair
            rollback(pair, trail, checkpoint)
        rollback(pair, trail, start)
    return pair


def ls_second_neighbourhood(
    pair: TwoFactorPair,
    params: HeuristicParams,
    rng,
    trace: TraceRecorder | None = None,
    recursive: bool = True,
    deadline: float | None = None,
) -> TwoFactorPair:
    """Depth-bounded backtracking over repair choices, first improvement."""
    if pair.graph.directed:
        raise ValueError("this neighbourhood works on undirected unions")
    trail: FixTrail = []
    fix_parallel_copies(pair)
    base = components(pair).total
    if trace:
        trace.open_run(base)
    if base == 2:
        return pair
    for eid in _unfixed_z_edges(pair, rng):
        if _expired(deadline):
            return pair
        start = len(trail)
        if fix_edge(pair, eid, W, trail, recursive) and _dive(
            pair, 1, params.depth_limit, base, rng, trail, recursive
        ):
            if trace:
                trace.accept(pair, components(pair).total)
            unfix_non_parallel(pair)
            trail.clear()
            return pair
        rollback(pair, trail, start)
    return pair


def _dive(pair, depth, limit, base, rng, trail, recursive) -> bool:
    if not pair.broken:
        return components(pair).total < base
    if depth > limit:
        return False
    v = _pick(sorted(pair.broken), rng)
    if pair.deg_z[v] < 2:
        want, pool = Z, _movable(pair, v, W)
    else:
        want, pool = W, _movable(pair, v, Z)
    for eid in pool:
        mark = len(trail)
        if fix_edge(pair, eid, want, trail, recursive) and _dive(
            pair, depth + 1, limit, base, rng, trail, recursive
        ):
            return True
        rollback(pair, trail, mark)
    return False


def vnd_undirected(
    pair: TwoFactorPair,
    params: HeuristicParams,
    rng,
    cut_sink=None,
    trace: TraceRecorder | None = None,
    recursive: bool = True,
    deadline: float | None = None,
) -> TwoFactorPair:
    """Alternate the two neighbourhoods until neither improves.

    The first neighbourhood is drained to a local minimum, then the
    bounded-backtracking one gets a pass; any improvement there loops
    back to the first.  Improvements found by the second neighbourhood
    report their subtours to `cut_sink` here, since that search keeps
    no cut machinery of its own.
    """
    current = components(pair).total
    while current > 2:
        while True:
            ls_first_neighbourhood(
                pair, params, rng, cut_sink, trace, recursive, deadline
            )
            total = components(pair).total
            if total < current:
                current = total
                if current == 2:
                    return pair
                continue
            break
        if _expired(deadline):
            return pair
        ls_second_neighbourhood(
            pair, params, rng, trace, recursive, deadline
        )
        total = components(pair).total
        if total < current:
            current = total
            if cut_sink:
                cut_sink(components(pair))
            continue
        return pair
    return pair
