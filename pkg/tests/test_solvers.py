import numpy as np
import pytest

from hamdec.heuristics import HeuristicParams
from hamdec.instances import InstanceKind, InstanceSpec, generate_instance
from hamdec.multigraph import (
    W,
    Z,
    TwoFactorPair,
    build_union,
    components,
    is_second_decomposition,
)
from hamdec.oracle import enumerate_decompositions, has_second_decomposition
from hamdec.solvers import (
    RunResult,
    Verdict,
    solve_dfj,
    solve_dfj_heuristic,
    solve_mtz,
)

from conftest import make_cycle, random_instance

BUDGET = 60.0


def mixed_batch(count, n_lo=6, n_hi=12, directed_mix=True, seed0=0):
    """Deterministic strip of instances across kinds and sizes."""
    kinds = list(InstanceKind)
    out = []
    for i in range(count):
        n = n_lo + (i * 7 + seed0) % (n_hi - n_lo + 1)
        kind = kinds[i % len(kinds)]
        if kind is InstanceKind.FOUR_PEAK and n < 8:
            kind = InstanceKind.RANDOM_PERMUTATION
        directed = directed_mix and i % 2 == 1
        spec = InstanceSpec(kind, n, directed, seed0 + i)
        x, y, g = generate_instance(spec)
        out.append((spec, x, y, g))
    return out


def check_witness(res, g, x, y):
    z, w = res.witness
    pair = TwoFactorPair(g, [Z] * len(g.edges))
    # rebuild the side vector from the witness cycles to revalidate
    sides = witness_sides(g, z)
    pair = TwoFactorPair(g, sides)
    assert is_second_decomposition(pair, x, y)


def witness_sides(g, z):
    """Side vector whose Z factor realizes cycle z, or AssertionError."""
    from collections import Counter

    want = Counter(z.edge_multiset())
    sides = [W] * len(g.edges)
    for e in g.edges:
        if g.directed:
            key = (e.tail, e.head)
        else:
            key = tuple(sorted((e.tail, e.head)))
        if want[key] > 0:
            want[key] -= 1
            sides[e.id] = Z
    assert sum(want.values()) == 0
    return sides


# -------------------------------------------------------------- verdicts

def test_cutting_loop_solves_golden_instance(ring6):
    x, y = ring6
    g = build_union(x, y)
    res = solve_dfj(g, x, y, BUDGET)
    assert res.verdict is Verdict.FEASIBLE
    assert res.algorithm == "dfj"
    assert res.iterations >= 1
    assert res.elapsed < 5
    check_witness(res, g, x, y)


def test_identical_cycles_infeasible_in_one_iteration():
    x = make_cycle([1, 2, 3, 4, 5, 6])
    res = solve_dfj(build_union(x, x), x, x, BUDGET)
    assert res.verdict is Verdict.INFEASIBLE
    assert res.iterations == 1
    assert res.cuts_added == 0


def test_order_model_identical_directed_triangle_infeasible():
    x = make_cycle([1, 2, 3], directed=True)
    res = solve_mtz(build_union(x, x), x, x, BUDGET)
    assert res.verdict is Verdict.INFEASIBLE
    assert res.iterations == 1


def test_order_model_solves_golden_in_one_call(ring6):
    x, y = ring6
    g = build_union(x, y)
    res = solve_mtz(g, x, y, BUDGET)
    assert res.verdict is Verdict.FEASIBLE
    assert res.iterations == 1
    assert res.cuts_added == 0
    check_witness(res, g, x, y)


def test_cutting_loop_agrees_with_oracle_on_mixed_batch():
    for spec, x, y, g in mixed_batch(24):
        truth, _ = has_second_decomposition(g, x, y)
        res = solve_dfj(g, x, y, BUDGET)
        assert res.verdict is (
            Verdict.FEASIBLE if truth else Verdict.INFEASIBLE
        ), spec
        if truth:
            check_witness(res, g, x, y)


def test_order_model_agrees_with_cutting_loop():
    for spec, x, y, g in mixed_batch(14, n_hi=9, seed0=3):
        a = solve_dfj(g, x, y, BUDGET)
        b = solve_mtz(g, x, y, BUDGET)
        assert a.verdict is b.verdict, spec
        if b.verdict is Verdict.FEASIBLE:
            check_witness(b, g, x, y)


def test_heuristic_loop_never_changes_the_verdict():
    for spec, x, y, g in mixed_batch(20, seed0=11):
        base = solve_dfj(g, x, y, BUDGET)
        res = solve_dfj_heuristic(
            g, x, y, HeuristicParams(seed=spec.seed), BUDGET
        )
        assert res.verdict is base.verdict, spec
        assert res.algorithm == ("dfj-ls" if g.directed else "dfj-vnd-fix")
        if res.verdict is Verdict.FEASIBLE:
            check_witness(res, g, x, y)


def test_single_move_variant_matches_too():
    for spec, x, y, g in mixed_batch(10, directed_mix=False, seed0=29):
        base = solve_dfj(g, x, y, BUDGET)
        res = solve_dfj_heuristic(
            g, x, y, HeuristicParams(seed=1), BUDGET, variant="vnd"
        )
        assert res.verdict is base.verdict, spec
        assert res.algorithm == "dfj-vnd"


# ------------------------------------------------------------- plumbing

def test_variant_must_match_directedness():
    x, y, g = random_instance(8, 0, directed=False)
    with pytest.raises(ValueError):
        solve_dfj_heuristic(g, x, y, HeuristicParams(), 1.0, variant="ls")
    xd, yd, gd = random_instance(8, 0, directed=True)
    for bad in ("vnd", "vnd-fix"):
        with pytest.raises(ValueError):
            solve_dfj_heuristic(gd, xd, yd, HeuristicParams(), 1.0, variant=bad)
    with pytest.raises(ValueError):
        solve_dfj_heuristic(g, x, y, HeuristicParams(), 1.0, variant="nope")


def test_zero_budget_times_out():
    x, y, g = random_instance(10, 2, directed=False)
    for res in (
        solve_dfj(g, x, y, 0.0),
        solve_mtz(g, x, y, 0.0),
        solve_dfj_heuristic(g, x, y, HeuristicParams(), 0.0),
    ):
        assert res.verdict is Verdict.TIMED_OUT
        assert res.witness is None
        assert res.iterations == 1


def test_emitted_cuts_come_in_deduplicated_pairs(double_squares):
    x, y = double_squares
    g = build_union(x, y)
    res = solve_dfj(g, x, y, BUDGET)
    assert res.cuts_added == len(res.emitted_cuts)
    assert len(set(res.emitted_cuts)) == len(res.emitted_cuts)
    keys = {}
    for s, side in res.emitted_cuts:
        keys.setdefault(s, set()).add(side)
    for sides in keys.values():
        assert sides == {Z, W}


def cut_holds(g, z_inside, s, side, e_s):
    if side == Z:
        return z_inside <= len(s) - 1
    return z_inside >= e_s - len(s) + 1


def test_emitted_cuts_never_exclude_true_decompositions():
    # soundness: every cut the run ever added is satisfied by every
    # decomposition of the union, in both factor orientations
    for spec, x, y, g in mixed_batch(16, n_hi=10, seed0=5):
        res = solve_dfj_heuristic(
            g, x, y, HeuristicParams(seed=spec.seed), BUDGET
        )
        if not res.emitted_cuts:
            continue
        decs = enumerate_decompositions(g)
        for s, side in res.emitted_cuts:
            e_s = sum(1 for e in g.edges if e.tail in s and e.head in s)
            for z, w in decs:
                for factor in (z, w):
                    sides = witness_sides(g, factor)
                    z_inside = sum(
                        1
                        for e in g.edges
                        if sides[e.id] == Z and e.tail in s and e.head in s
                    )
                    assert cut_holds(g, z_inside, s, side, e_s), (spec, s)


def test_heuristic_traces_descend():
    seen_runs = 0
    for spec, x, y, g in mixed_batch(12, seed0=17):
        res = solve_dfj_heuristic(
            g, x, y, HeuristicParams(seed=spec.seed), BUDGET
        )
        assert res.trace is not None
        assert res.trace.valid
        for seq in res.trace.sequences:
            seen_runs += 1
            assert all(a > b for a, b in zip(seq, seq[1:]))
    assert seen_runs > 0


def test_results_are_seed_deterministic():
    for spec, x, y, g in mixed_batch(6, seed0=23):
        runs = [
            solve_dfj_heuristic(
                g, x, y, HeuristicParams(seed=spec.seed), BUDGET
            )
            for _ in range(2)
        ]
        a, b = runs
        assert a.verdict is b.verdict
        assert a.iterations == b.iterations
        assert a.cuts_added == b.cuts_added
        assert a.work == b.work
        assert a.emitted_cuts == b.emitted_cuts
        if a.witness:
            assert [c.order for c in a.witness] == [
                c.order for c in b.witness
            ]


def test_work_counts_solver_nodes():
    x, y, g = random_instance(8, 4, directed=True)
    res = solve_dfj(g, x, y, BUDGET)
    assert res.work > 0
    assert res.verdict in (Verdict.FEASIBLE, Verdict.INFEASIBLE)
