"""Second Hamiltonian decomposition toolkit.

Given two Hamiltonian cycles on the same vertices, the union of their
edges is a 4-regular multigraph.  This package decides whether that
union splits into a different pair of edge-disjoint Hamiltonian cycles,
by integer programming, by local search, or by both interleaved.
"""

from .heuristics import HeuristicParams
from .instances import InstanceKind, InstanceSpec, generate_instance
from .multigraph import HamCycle, UnionMultigraph, build_union
from .solvers import (
    RunResult,
    Verdict,
    solve_dfj,
    solve_dfj_heuristic,
    solve_mtz,
)

__version__ = "0.1.0"

__all__ = [
    "HamCycle",
    "HeuristicParams",
    "InstanceKind",
    "InstanceSpec",
    "RunResult",
    "UnionMultigraph",
    "Verdict",
    "build_union",
    "generate_instance",
    "solve_dfj",
    "solve_dfj_heuristic",
    "solve_mtz",
    "__version__",
]
