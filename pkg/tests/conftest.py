import numpy as np
import pytest

from hamdec.multigraph import HamCycle, build_union


def make_cycle(order, directed=False):
    return HamCycle.from_order(order, directed)


def random_cycle(n, rng, directed=False):
    rest = list(range(2, n + 1))
    rng.shuffle(rest)
    return HamCycle.from_order([1] + rest, directed)


def random_instance(n, seed, directed=False):
    rng = np.random.default_rng(seed)
    x = random_cycle(n, rng, directed)
    y = random_cycle(n, rng, directed)
    return x, y, build_union(x, y)


@pytest.fixture
def ring6():
    """n=6 instance with one repeated edge and four decompositions."""
    x = make_cycle([1, 2, 3, 4, 5, 6])
    y = make_cycle([1, 4, 6, 2, 3, 5])
    return x, y


# The one decomposition of ring6 different from {x, y}.
RING6_Z = [1, 4, 5, 3, 2, 6]
RING6_W = [1, 2, 3, 4, 6, 5]


@pytest.fixture
def twin_triangles():
    """n=6 instance whose natural split leaves four triangle components."""
    x = make_cycle([1, 2, 6, 4, 5, 3])
    y = make_cycle([1, 2, 3, 4, 5, 6])
    return x, y


@pytest.fixture
def double_squares():
    """n=8 instance whose union splits into two pairs of 4-cycles."""
    x = make_cycle([1, 2, 3, 6, 7, 8, 4, 5])
    y = make_cycle([1, 4, 3, 7, 2, 6, 5, 8])
    return x, y


def find_edge(g, u, v, *, used=None):
    """Edge id in g with endpoints {u, v}, skipping ids in `used`."""
    used = used or set()
    for e in g.edges:
        if e.id in used:
            continue
        if {e.tail, e.head} == {u, v}:
            return e.id
    raise KeyError((u, v))


def sides_for_cycles(g, cycle_vertex_lists):
    """Side vector putting the listed cycles in Z and the rest in W."""
    from hamdec.multigraph import W, Z

    sides = [W] * len(g.edges)
    used = set()
    for cyc in cycle_vertex_lists:
        for i in range(len(cyc)):
            e = find_edge(g, cyc[i], cyc[(i + 1) % len(cyc)], used=used)
            sides[e] = Z
            used.add(e)
    return sides
