"""ILP formulations over the union multigraph.

Every model asks for a factor Z (complement W) such that both are
Hamiltonian cycles and {Z, W} differs from the generating pair.  The
cut-based model leaves subtour elimination to a lazy loop; the
order-variable models are complete as built.

Shared structure: one binary per union edge (or per oriented edge
copy), degree equalities per vertex, a "not the original pair" cut per
generating cycle over its unshared edges, and an exactly-one split of
every parallel edge pair.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ilp import IlpModel
from .multigraph import (
    ORIGIN_X,
    ORIGIN_Y,
    W,
    Z,
    TwoFactorPair,
    UnionMultigraph,
)


@dataclass
class DfjMapping:
    """Edge id -> binary var id (Z membership)."""

    z_var: list[int]


@dataclass
class MtzDirectedMapping:
    z_var: list[int]
    alpha: dict[int, int]
    beta: dict[int, int]


@dataclass
class MtzUndirectedMapping:
    """Per edge: four binaries, one per factor and traversal direction."""

    z_fwd: list[int]
    z_rev: list[int]
    w_fwd: list[int]
    w_rev: list[int]
    alpha: dict[int, int]
    beta: dict[int, int]


def _forbid_terms(var_of, edge_ids):
    return [(1, var_of[e]) for e in edge_ids]


def _add_parallel_split(model, g, z_total_terms, name_of):
    """Exactly one copy of each parallel pair belongs to Z."""
    for e in g.edges:
        if e.partner is None or e.partner < e.id:
            continue
        terms = z_total_terms(e.id) + z_total_terms(e.partner)
        model.add_eq(terms, 1, name_of(e.id, e.partner))


def build_dfj_base(g: UnionMultigraph) -> tuple[IlpModel, DfjMapping]:
    """Degree + forbidden-pair + parallel-split core; no subtour cuts yet."""
    model = IlpModel()
    z_var = [model.add_binary(f"z_{e.id}") for e in g.edges]

    if g.directed:
        for v in range(1, g.n + 1):
            model.add_eq(
                [(1, z_var[e]) for e in g.out_arcs[v]], 1, f"outdeg_{v}"
            )
            model.add_eq(
                [(1, z_var[e]) for e in g.in_arcs[v]], 1, f"indeg_{v}"
            )
    else:
        for v in range(1, g.n + 1):
            model.add_eq(
                [(1, z_var[e]) for e in g.inc[v]], 2, f"deg_{v}"
            )

    for origin, tag in ((ORIGIN_X, "x"), (ORIGIN_Y, "y")):
        unique = g.unique_edge_ids(origin)
        model.add_le(
            _forbid_terms(z_var, unique), len(unique) - 1, f"forbid_{tag}"
        )

    _add_parallel_split(
        model,
        g,
        lambda e: [(1, z_var[e])],
        lambda a, b: f"par_{a}_{b}",
    )
    return model, DfjMapping(z_var)


def sec_for_subtour(
    model: IlpModel,
    mapping: DfjMapping,
    g: UnionMultigraph,
    subtour,
    side: int,
    name: str,
) -> None:
    """Add one subtour elimination cut for vertex set `subtour`.

    Z side: the edges inside the set cannot carry a full cycle of it.
    W side: equivalently phrased on the complement, so the constraint
    keeps Z variables only.
    """
    s = set(subtour)
    if not s or len(s) >= g.n:
        raise ValueError("subtour must be a nonempty proper vertex subset")
    if not s <= set(range(1, g.n + 1)):
        raise ValueError("subtour contains unknown vertices")
    inside = [e.id for e in g.edges if e.tail in s and e.head in s]
    terms = [(1, mapping.z_var[e]) for e in inside]
    if side == Z:
        model.add_le(terms, len(s) - 1, name)
    elif side == W:
        model.add_ge(terms, len(inside) - len(s) + 1, name)
    else:
        raise ValueError(f"unknown side {side!r}")


def build_mtz_directed(
    g: UnionMultigraph,
) -> tuple[IlpModel, MtzDirectedMapping]:
    """Directed model made complete by two families of order variables."""
    if not g.directed:
        raise ValueError("directed formulation needs a directed union")
    model, base = build_dfj_base(g)
    n = g.n
    alpha = {i: model.add_int(f"a_{i}", 2, n) for i in range(2, n + 1)}
    beta = {i: model.add_int(f"b_{i}", 2, n) for i in range(2, n + 1)}
    for e in g.edges:
        i, j = e.tail, e.head
        if i == 1 or j == 1:
            continue
        z = base.z_var[e.id]
        model.add_le(
            [(1, alpha[i]), (-1, alpha[j]), (n, z)], n - 1, f"ord_z_{e.id}"
        )
        # order along W arcs: the same bound with z inverted
        model.add_le(
            [(1, beta[i]), (-1, beta[j]), (-n, z)], -1, f"ord_w_{e.id}"
        )
    return model, MtzDirectedMapping(base.z_var, alpha, beta)


def build_mtz_undirected(
    g: UnionMultigraph,
) -> tuple[IlpModel, MtzUndirectedMapping]:
    """Undirected model: each edge picks a factor and a direction."""
    if g.directed:
        raise ValueError("undirected formulation needs an undirected union")
    model = IlpModel()
    n = g.n
    z_fwd, z_rev, w_fwd, w_rev = [], [], [], []
    for e in g.edges:
        t, h = e.tail, e.head
        z_fwd.append(model.add_binary(f"z_{e.id}_{t}_{h}"))
        z_rev.append(model.add_binary(f"z_{e.id}_{h}_{t}"))
        w_fwd.append(model.add_binary(f"w_{e.id}_{t}_{h}"))
        w_rev.append(model.add_binary(f"w_{e.id}_{h}_{t}"))
    for e in g.edges:
        model.add_eq(
            [
                (1, z_fwd[e.id]),
                (1, z_rev[e.id]),
                (1, w_fwd[e.id]),
                (1, w_rev[e.id]),
            ],
            1,
            f"pick_{e.id}",
        )

    def oriented_away(v, e, fwd, rev):
        return fwd[e.id] if e.tail == v else rev[e.id]

    def oriented_into(v, e, fwd, rev):
        return rev[e.id] if e.tail == v else fwd[e.id]

    for factor, fwd, rev in (("z", z_fwd, z_rev), ("w", w_fwd, w_rev)):
        for v in range(1, n + 1):
            outs = [
                (1, oriented_away(v, g.edges[e], fwd, rev)) for e in g.inc[v]
            ]
            ins = [
                (1, oriented_into(v, g.edges[e], fwd, rev)) for e in g.inc[v]
            ]
            model.add_eq(outs, 1, f"{factor}_out_{v}")
            model.add_eq(ins, 1, f"{factor}_in_{v}")

    alpha = {i: model.add_int(f"a_{i}", 2, n) for i in range(2, n + 1)}
    beta = {i: model.add_int(f"b_{i}", 2, n) for i in range(2, n + 1)}
    order = {"z": (alpha, z_fwd, z_rev), "w": (beta, w_fwd, w_rev)}
    for factor, (rank, fwd, rev) in order.items():
        for e in g.edges:
            for u, v, var in (
                (e.tail, e.head, fwd[e.id]),
                (e.head, e.tail, rev[e.id]),
            ):
                if u == 1 or v == 1:
                    continue
                model.add_le(
                    [(1, rank[u]), (-1, rank[v]), (n, var)],
                    n - 1,
                    f"ord_{factor}_{e.id}_{u}_{v}",
                )

    # both factors must differ from both generating cycles
    for origin, tag in ((ORIGIN_X, "x"), (ORIGIN_Y, "y")):
        unique = g.unique_edge_ids(origin)
        for factor, fwd, rev in (("z", z_fwd, z_rev), ("w", w_fwd, w_rev)):
            terms = [(1, fwd[e]) for e in unique] + [
                (1, rev[e]) for e in unique
            ]
            model.add_le(terms, len(unique) - 1, f"forbid_{tag}_{factor}")

    _add_parallel_split(
        model,
        g,
        lambda e: [(1, z_fwd[e]), (1, z_rev[e])],
        lambda a, b: f"par_{a}_{b}",
    )
    return model, MtzUndirectedMapping(z_fwd, z_rev, w_fwd, w_rev, alpha, beta)


def decode(assignment, mapping, g: UnionMultigraph) -> TwoFactorPair:
    """Translate a feasible assignment into a factor pair."""
    if isinstance(mapping, MtzUndirectedMapping):
        sides = []
        for e in g.edges:
            hits = assignment[mapping.z_fwd[e.id]] + assignment[
                mapping.z_rev[e.id]
            ]
            sides.append(Z if hits == 1 else W)
    else:
        sides = [
            Z if assignment[mapping.z_var[e.id]] == 1 else W for e in g.edges
        ]
    pair = TwoFactorPair(g, sides)
    if pair.broken:
        raise AssertionError("model admitted a degree-violating assignment")
    return pair
