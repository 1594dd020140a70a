"""Integer feasibility engine and LP-format text round trip.

All variables carry finite integer domains.  There is no objective:
the solver answers Feasible (with a verified assignment), Infeasible,
or TimedOut.  The search is depth-first domain splitting with bounds
propagation to a fixpoint at every node; binaries branch high value
first, in declaration order.
"""

from __future__ import annotations

import enum
import time
from collections import deque
from dataclasses import dataclass

LE, GE, EQ = "<=", ">=", "="


@dataclass(frozen=True)
class LinearConstraint:
    coefs: tuple[int, ...]
    vars: tuple[int, ...]
    sense: str
    rhs: int
    name: str


class Status(enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    TIMED_OUT = "timed-out"


@dataclass
class SolveOutcome:
    status: Status
    assignment: list[int] | None
    nodes: int
    elapsed: float


class IlpModel:
    def __init__(self):
        self.names: list[str] = []
        self.lo: list[int] = []
        self.hi: list[int] = []
        self.binary: list[bool] = []
        self.constraints: list[LinearConstraint] = []

    def add_int(self, name: str, lo: int, hi: int) -> int:
        if lo > hi:
            raise ValueError(f"empty domain for {name}")
        self.names.append(name)
        self.lo.append(int(lo))
        self.hi.append(int(hi))
        self.binary.append(False)
        return len(self.names) - 1

    def add_binary(self, name: str) -> int:
        v = self.add_int(name, 0, 1)
        self.binary[v] = True
        return v

    def add_constraint(self, terms, sense: str, rhs: int, name: str) -> None:
        if sense not in (LE, GE, EQ):
            raise ValueError(f"unknown sense {sense!r}")
        coefs = tuple(int(c) for c, _ in terms)
        vars_ = tuple(int(v) for _, v in terms)
        for v in vars_:
            if not 0 <= v < len(self.names):
                raise ValueError(f"constraint {name} uses unknown var {v}")
        self.constraints.append(
            LinearConstraint(coefs, vars_, sense, int(rhs), name)
        )

    def add_le(self, terms, rhs, name):
        self.add_constraint(terms, LE, rhs, name)

    def add_ge(self, terms, rhs, name):
        self.add_constraint(terms, GE, rhs, name)

    def add_eq(self, terms, rhs, name):
        self.add_constraint(terms, EQ, rhs, name)

    def check(self, assignment) -> bool:
        """Exact satisfaction check of every constraint."""
        for con in self.constraints:
            acc = sum(
                c * assignment[v] for c, v in zip(con.coefs, con.vars)
            )
            if con.sense == LE and acc > con.rhs:
                return False
            if con.sense == GE and acc < con.rhs:
                return False
            if con.sense == EQ and acc != con.rhs:
                return False
        return True


def solve(model: IlpModel, budget_s: float) -> SolveOutcome:
    started = time.monotonic()
    deadline = started + budget_s
    if budget_s <= 0:
        return SolveOutcome(Status.TIMED_OUT, None, 0, 0.0)

    nvars = len(model.names)
    lo = list(model.lo)
    hi = list(model.hi)
    cons = model.constraints
    ncons = len(cons)

    # activity bookkeeping: minact/maxact of each constraint under bounds
    minact = [0] * ncons
    maxact = [0] * ncons
    vadj: list[list[tuple[int, int]]] = [[] for _ in range(nvars)]
    for ci, con in enumerate(cons):
        lo_sum = hi_sum = 0
        for c, v in zip(con.coefs, con.vars):
            vadj[v].append((ci, c))
            if c > 0:
                lo_sum += c * lo[v]
                hi_sum += c * hi[v]
            else:
                lo_sum += c * hi[v]
                hi_sum += c * lo[v]
        minact[ci] = lo_sum
        maxact[ci] = hi_sum

    trail: list[tuple[int, int, int]] = []
    pending: deque[int] = deque()
    queued = [False] * ncons

    def wake(v):
        for ci, _ in vadj[v]:
            if not queued[ci]:
                queued[ci] = True
                pending.append(ci)

    def set_lo(v, val) -> bool:
        """Raise the lower bound; True means wipeout."""
        old = lo[v]
        if val <= old:
            return False
        trail.append((v, old, hi[v]))
        lo[v] = val
        d = val - old
        for ci, c in vadj[v]:
            if c > 0:
                minact[ci] += c * d
            else:
                maxact[ci] += c * d
        if val > hi[v]:
            return True
        wake(v)
        return False

    def set_hi(v, val) -> bool:
        old = hi[v]
        if val >= old:
            return False
        trail.append((v, lo[v], old))
        hi[v] = val
        d = val - old
        for ci, c in vadj[v]:
            if c > 0:
                maxact[ci] += c * d
            else:
                minact[ci] += c * d
        if val < lo[v]:
            return True
        wake(v)
        return False

    def undo_to(mark):
        while len(trail) > mark:
            v, olo, ohi = trail.pop()
            dlo = olo - lo[v]
            dhi = ohi - hi[v]
            lo[v] = olo
            hi[v] = ohi
            for ci, c in vadj[v]:
                if c > 0:
                    minact[ci] += c * dlo
                    maxact[ci] += c * dhi
                else:
                    minact[ci] += c * dhi
                    maxact[ci] += c * dlo
        while pending:
            queued[pending.pop()] = False

    def propagate() -> bool:
        """Fixpoint bounds propagation; True means conflict."""
        while pending:
            ci = pending.popleft()
            queued[ci] = False
            con = cons[ci]
            sense = con.sense
            if sense != GE:
                slack = con.rhs - minact[ci]
                if slack < 0:
                    return True
                for c, v in zip(con.coefs, con.vars):
                    if lo[v] == hi[v]:
                        continue
                    if c > 0:
                        cap = lo[v] + slack // c
                        if cap < hi[v] and set_hi(v, cap):
                            return True
                    else:
                        floor_ = hi[v] - slack // (-c)
                        if floor_ > lo[v] and set_lo(v, floor_):
                            return True
            if sense != LE:
                surplus = maxact[ci] - con.rhs
                if surplus < 0:
                    return True
                for c, v in zip(con.coefs, con.vars):
                    if lo[v] == hi[v]:
                        continue
                    if c > 0:
                        floor_ = hi[v] - surplus // c
                        if floor_ > lo[v] and set_lo(v, floor_):
                            return True
                    else:
                        cap = lo[v] + surplus // (-c)
                        if cap < hi[v] and set_hi(v, cap):
                            return True
        return False

    def first_open(start):
        for v in range(start, nvars):
            if lo[v] < hi[v]:
                return v
        return None

    for ci in range(ncons):
        queued[ci] = True
        pending.append(ci)
    if propagate():
        return SolveOutcome(
            Status.INFEASIBLE, None, 1, time.monotonic() - started
        )

    nodes = 1
    start = 0
    # frames: (var, alt_hi, trail mark before this decision, parent start)
    frames: list[tuple[int, int, int, int]] = []
    while True:
        v = first_open(start)
        if v is None:
            assignment = lo[:]
            if not model.check(assignment):
                raise AssertionError("propagation accepted a bad leaf")
            return SolveOutcome(
                Status.FEASIBLE, assignment, nodes, time.monotonic() - started
            )
        mid = (lo[v] + hi[v]) // 2
        frames.append((v, mid, len(trail), start))
        conflict = set_lo(v, mid + 1) or propagate()
        start = v
        nodes += 1
        if nodes % 256 == 0 and time.monotonic() > deadline:
            return SolveOutcome(
                Status.TIMED_OUT, None, nodes, time.monotonic() - started
            )
        while conflict:
            if not frames:
                return SolveOutcome(
                    Status.INFEASIBLE, None, nodes, time.monotonic() - started
                )
            v, alt_hi, mark, pstart = frames.pop()
            undo_to(mark)
            conflict = set_hi(v, alt_hi) or propagate()
            start = pstart
            nodes += 1
            if nodes % 256 == 0 and time.monotonic() > deadline:
                return SolveOutcome(
                    Status.TIMED_OUT, None, nodes, time.monotonic() - started
                )


# ------------------------------------------------------------- LP text

def _format_terms(coefs, vars_, names):
    if not vars_:
        return ["0"]
    parts = []
    for i, (c, v) in enumerate(zip(coefs, vars_)):
        mag = abs(c)
        body = names[v] if mag == 1 else f"{mag} {names[v]}"
        if i == 0:
            parts.append(body if c > 0 else f"- {body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return parts


def export_lp(model: IlpModel) -> str:
    """Serialize in LP text format (feasibility problem, zero objective)."""
    out = ["Minimize", " obj: 0", "Subject To"]
    for con in model.constraints:
        parts = _format_terms(con.coefs, con.vars, model.names)
        line = f" {con.name}:"
        for i in range(0, len(parts), 8):
            chunk = " ".join(parts[i : i + 8])
            if i + 8 >= len(parts):
                out.append(f"{line} {chunk} {con.sense} {con.rhs}")
            else:
                out.append(f"{line} {chunk}")
                line = "  "
    generals = [v for v in range(len(model.names)) if not model.binary[v]]
    if generals:
        out.append("Bounds")
        for v in generals:
            out.append(f" {model.lo[v]} <= {model.names[v]} <= {model.hi[v]}")
    binaries = [v for v in range(len(model.names)) if model.binary[v]]
    if binaries:
        out.append("Binaries")
        for i in range(0, len(binaries), 10):
            chunk = binaries[i : i + 10]
            out.append(" " + " ".join(model.names[v] for v in chunk))
    if generals:
        out.append("Generals")
        for i in range(0, len(generals), 10):
            chunk = generals[i : i + 10]
            out.append(" " + " ".join(model.names[v] for v in chunk))
    out.append("End")
    return "\n".join(out) + "\n"


_SECTION_KEYS = {
    "minimize": "objective",
    "maximize": "objective",
    "subject": "constraints",
    "st": "constraints",
    "s.t.": "constraints",
    "bounds": "bounds",
    "binaries": "binaries",
    "binary": "binaries",
    "bin": "binaries",
    "generals": "generals",
    "general": "generals",
    "gen": "generals",
    "end": "end",
}


def _section_of(line: str) -> str | None:
    stripped = line.strip().lower()
    head = stripped.split()[0] if stripped.split() else ""
    key = _SECTION_KEYS.get(stripped) or _SECTION_KEYS.get(head)
    if key == "constraints" and not (
        stripped in ("st", "s.t.") or stripped.startswith("subject")
    ):
        return None
    return key


def parse_lp(text: str) -> IlpModel:
    """Re-read LP text produced by export_lp into a structurally equal model."""
    sections: dict[str, list[str]] = {
        "objective": [],
        "constraints": [],
        "bounds": [],
        "binaries": [],
        "generals": [],
    }
    current = None
    for raw in text.splitlines():
        if not raw.strip() or raw.strip().startswith("\\"):
            continue
        key = _section_of(raw)
        if key == "end":
            break
        if key is not None:
            current = key
            continue
        if current is None:
            raise ValueError(f"content before any section: {raw!r}")
        sections[current].append(raw)

    model = IlpModel()
    index: dict[str, int] = {}
    for line in sections["binaries"]:
        for name in line.split():
            index[name] = model.add_binary(name)
    general_names = []
    for line in sections["generals"]:
        for name in line.split():
            general_names.append(name)
            index[name] = model.add_int(name, 0, 0)
    bounded = set()
    for line in sections["bounds"]:
        toks = line.split()
        if len(toks) != 5 or toks[1] != "<=" or toks[3] != "<=":
            raise ValueError(f"unsupported bounds line: {line!r}")
        name = toks[2]
        if name not in index:
            raise ValueError(f"bounds for undeclared var {name!r}")
        v = index[name]
        model.lo[v] = int(toks[0])
        model.hi[v] = int(toks[4])
        bounded.add(name)
    missing = [n for n in general_names if n not in bounded]
    if missing:
        raise ValueError(f"integer vars without bounds: {missing}")

    tokens: list[str] = []
    for line in sections["constraints"]:
        tokens.extend(line.split())
    i = 0
    while i < len(tokens):
        # constraint name terminated by ':'
        tok = tokens[i]
        if tok.endswith(":"):
            name = tok[:-1]
            i += 1
        elif i + 1 < len(tokens) and tokens[i + 1] == ":":
            name = tok
            i += 2
        else:
            raise ValueError(f"expected constraint name, got {tok!r}")
        terms = []
        sign = 1
        coef = None
        sense = None
        while i < len(tokens):
            tok = tokens[i]
            i += 1
            if tok in ("<=", ">=", "=", "==", "<", ">"):
                sense = {"<": LE, ">": GE, "==": EQ}.get(tok, tok)
                break
            if tok == "+":
                sign = 1
            elif tok == "-":
                sign = -1
            elif tok.lstrip("-").isdigit():
                value = int(tok)
                if value < 0:
                    sign, value = -sign, -value
                coef = value if coef is None else coef * value
            else:
                if tok not in index:
                    raise ValueError(f"constraint uses undeclared var {tok!r}")
                terms.append((sign * (1 if coef is None else coef), index[tok]))
                sign, coef = 1, None
        if sense is None:
            raise ValueError(f"constraint {name!r} has no relation")
        if coef is not None and coef != 0:
            raise ValueError(f"dangling constant in constraint {name!r}")
        if i >= len(tokens):
            raise ValueError(f"constraint {name!r} has no right-hand side")
        rhs = int(tokens[i])
        i += 1
        model.add_constraint(terms, sense, rhs, name)
    return model
