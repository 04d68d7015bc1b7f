"""Counter abstraction: states as occupancy counts per local record.

A counter state keeps the shared valuation plus, sparsely, how many
processes sit in each local record.  For programs without pid-typed
shared variables this is an exact reduction: sorting a concrete state and
counting a concrete state lose exactly the same information, so the
counter structure is isomorphic to the full-symmetry quotient, which
``check_isomorphism`` verifies structure against structure.

The classic pitfall is the self-exclusion of "other process" guard atoms:
a guard like all_others(pc != C) must be evaluated against the occupancy
with the firing process already removed.  ``counter_successors`` does the
decrement before testing the guard.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedModelError
from .kripke import DEFAULT_STATE_BOUND, breadth_first_build
from .program import (
    GlobalState,
    atomic_props,
    command_branches,
    labeling,
    render_local,
)


@dataclass(frozen=True)
class CounterState:
    """Shared valuation plus sorted (local record, count > 0) pairs."""

    shared: tuple
    counts: tuple

    def __post_init__(self):
        if any(c < 1 for _, c in self.counts):
            raise ValueError("counter states store only positive counts")
        if list(self.counts) != sorted(self.counts):
            raise ValueError("counts must be sorted by local record")

    @property
    def n(self):
        return sum(c for _, c in self.counts)

    def encode(self):
        out = bytearray()
        for v in self.shared:
            out += v.to_bytes(4, "big")
        for rec, c in self.counts:
            for v in rec:
                out += v.to_bytes(4, "big")
            out += c.to_bytes(4, "big")
        return bytes(out)


def _require_pid_free(program):
    if program.pid_slots:
        names = [program.shared_names[k] for k in program.pid_slots]
        raise UnsupportedModelError(
            f"counter abstraction cannot track pid-typed shared state ({', '.join(names)})"
        )


def to_counter(state):
    """Abstract a concrete state to its occupancy vector."""
    if state.pid_slots:
        raise UnsupportedModelError(
            "counter abstraction cannot track pid-typed shared state"
        )
    tally = {}
    for rec in state.locals:
        tally[rec] = tally.get(rec, 0) + 1
    return CounterState(state.shared, tuple(sorted(tally.items())))


def from_counter(cstate):
    """The unique sorted concrete state with these occupancies."""
    locs = []
    for rec, c in cstate.counts:
        locs.extend([rec] * c)
    return GlobalState(cstate.shared, tuple(locs), ())


def counter_successors(program, cstate):
    """All (action, counter state) pairs one step away.

    A command fires once per occupied source record; its guard sees the
    per-pc totals of the other processes, i.e. with the firing record
    decremented first.  The effect moves one unit of occupancy from the
    firing record to the updated one and rewrites the shared valuation.
    Action labels name the firing record and command index.
    """
    counts = dict(cstate.counts)
    pc_totals = [0] * len(program.pc_names)
    for rec, c in cstate.counts:
        pc_totals[rec[0]] += c
    out = []
    for rec, _ in cstate.counts:
        for j, cmd in enumerate(program.commands):
            if rec[0] != cmd.from_pc:
                continue
            pc_others = list(pc_totals)
            pc_others[rec[0]] -= 1
            if not cmd.guard.eval_counter(cstate.shared, rec, pc_others):
                continue
            action = f"{render_local(program, rec)}/{j}"
            for new_shared, new_rec in command_branches(program, cmd, cstate.shared, rec, -1):
                moved = dict(counts)
                moved[rec] -= 1
                if moved[rec] == 0:
                    del moved[rec]
                moved[new_rec] = moved.get(new_rec, 0) + 1
                out.append((action, CounterState(new_shared, tuple(sorted(moved.items())))))
    return out


def _build_counter(program, state_bound=DEFAULT_STATE_BOUND, stop_at_bad=False):
    _require_pid_free(program)
    n = program.n

    def label_counter(cstate):
        if cstate.n != n:
            raise AssertionError(f"occupancy lost a process: {cstate}")
        return labeling(program, from_counter(cstate))

    return breadth_first_build(
        atomic_props(program),
        [to_counter(program.initial_state())],
        lambda c: counter_successors(program, c),
        label_counter,
        state_bound=state_bound,
        stop_at_bad=stop_at_bad,
    )


def build_counter_structure(program, state_bound=DEFAULT_STATE_BOUND):
    """Worklist construction of the counter structure."""
    structure, _ = _build_counter(program, state_bound)
    return structure


@dataclass
class IsomorphismReport:
    ok: bool
    discrepancy: str | None = None

    def __bool__(self):
        return self.ok


def check_isomorphism(counter_structure, quotient):
    """Verify counter and quotient structures are the same graph.

    The candidate map sends a counter state to its sorted concretization.
    Checked: the map is a bijection onto the quotient payloads, initial
    states correspond, labels agree, and edges map onto edges in both
    directions (action labels disregarded).  Returns a truthy report, or
    a falsy one naming the first discrepancy.
    """
    qstruct = quotient.structure
    mapping = {}
    for cid in counter_structure.states():
        concrete = from_counter(counter_structure.payload(cid))
        if not qstruct.has_state(concrete):
            return IsomorphismReport(
                False, f"counter state {counter_structure.payload(cid)} has no quotient twin"
            )
        mapping[cid] = qstruct.state_of(concrete)
    if len(set(mapping.values())) != len(mapping):
        return IsomorphismReport(False, "concretization is not injective")
    if len(mapping) != qstruct.num_states:
        return IsomorphismReport(
            False,
            f"state counts differ: {counter_structure.num_states} counter"
            f" vs {qstruct.num_states} quotient",
        )
    if {mapping[cid] for cid in counter_structure.init} != set(qstruct.init):
        return IsomorphismReport(False, "initial states do not correspond")
    for cid, qid in mapping.items():
        if counter_structure.label_of(cid) != qstruct.label_of(qid):
            return IsomorphismReport(
                False,
                f"labels differ on {counter_structure.payload(cid)}: "
                f"{set(counter_structure.label_of(cid))} vs {set(qstruct.label_of(qid))}",
            )
    counter_edges = {(mapping[s], mapping[t]) for s, _, t in counter_structure.edges()}
    quotient_edges = {(s, t) for s, _, t in qstruct.edges()}
    for edge in sorted(counter_edges - quotient_edges):
        return IsomorphismReport(False, f"counter edge {edge} missing from quotient")
    for edge in sorted(quotient_edges - counter_edges):
        return IsomorphismReport(False, f"quotient edge {edge} missing from counter")
    return IsomorphismReport(True)
