"""Quotient structures over canonical orbit representatives.

The quotient is built on the fly: only representatives are ever expanded,
and every successor is canonicalized before insertion.  That is sound
because process permutations commute with the successor relation, which
the frontend's guard restrictions guarantee and ``check_bisimulation``
certifies at desk scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import LabelSymmetryError, ResourceLimitError
from .kripke import DEFAULT_STATE_BOUND, breadth_first_build
from .program import atomic_props, labeling, successors
from .symmetry import apply, full_symmetric, orbit, representative_fn

BISIM_SIZE_CAP = 10**4


@dataclass
class QuotientStructure:
    """A Kripke structure whose payloads are orbit representatives."""

    structure: object
    orbit_sizes: dict  # state id -> orbit size
    rep_mode: str  # "sort" | "min-over-group"
    program: object
    group: object

    def rep(self, state):
        fn, _ = representative_fn(self.program, self.group)
        return fn(state)

    def total_covered(self):
        """Number of concrete states the representatives stand for."""
        return sum(self.orbit_sizes.values())


def orbit_size_sorted(program, state):
    """Orbit size of a sorted pid-free state under full symmetry.

    The orbit is the set of distinct arrangements of the local-record
    multiset: n! divided by the product of the multiplicity factorials.
    Always divides n!.
    """
    size = math.factorial(state.n)
    run = 1
    for k in range(1, state.n + 1):
        if k < state.n and state.locals[k] == state.locals[k - 1]:
            run += 1
            continue
        size //= math.factorial(run)
        run = 1
    return size


def _expand_canonical(program, rep_fn):
    def expand(rep_state):
        out = []
        for action, t in successors(program, rep_state):
            tbar = rep_fn(t)
            if labeling(program, t) != labeling(program, tbar):
                raise LabelSymmetryError(
                    f"labels differ inside one orbit: {t} vs {tbar}"
                )
            out.append((action, tbar))
        return out

    return expand


def _build_quotient(program, group=None, state_bound=DEFAULT_STATE_BOUND, stop_at_bad=False):
    if group is None:
        group = full_symmetric(program.n)
    rep_fn, rep_mode = representative_fn(program, group)
    init_rep = rep_fn(program.initial_state())
    structure, stats = breadth_first_build(
        atomic_props(program),
        [init_rep],
        _expand_canonical(program, rep_fn),
        lambda s: labeling(program, s),
        state_bound=state_bound,
        stop_at_bad=stop_at_bad,
    )
    return structure, stats, group, rep_mode


def build_quotient(program, group=None, state_bound=DEFAULT_STATE_BOUND):
    """Worklist construction of the quotient structure.

    Edge actions keep the process index that fired from the expanded
    representative; those indices are representative-relative.  Orbit
    sizes use the multiset closed form when sorting is the rep and
    explicit orbit enumeration otherwise, and always divide n!.
    """
    structure, _, group, rep_mode = _build_quotient(program, group, state_bound)
    orbit_sizes = {}
    nfact = math.factorial(program.n)
    for sid in structure.states():
        payload = structure.payload(sid)
        if rep_mode == "sort":
            size = orbit_size_sorted(program, payload)
        else:
            size = len(orbit(group, payload))
        if group.kind == "full-symmetric":
            assert nfact % size == 0, f"orbit size {size} does not divide {program.n}!"
        orbit_sizes[sid] = size
    return QuotientStructure(structure, orbit_sizes, rep_mode, program, group)


def check_symmetric_labeling(program, sample, group=None):
    """Violations of label invariance under the group generators.

    Returns a list of (state, permutation, labels, permuted labels)
    tuples; empty means the labeling is symmetric on the sample.
    Violations are data, not errors: the report is for diagnostics.
    """
    if group is None:
        group = full_symmetric(program.n)
    violations = []
    for s in sorted(sample, key=lambda x: x.encode()):
        base = labeling(program, s)
        for g in group.generators:
            permuted = labeling(program, apply(g, s))
            if permuted != base:
                violations.append((s, g, base, permuted))
    return violations


def check_bisimulation(full, quotient, size_cap=BISIM_SIZE_CAP):
    """Certify that relating each state to its representative is a bisimulation.

    Checks, for every concrete state s with representative r(s): equal
    labels; every concrete edge s -> t has a quotient edge
    r(s) -> r(t) (forth); and every quotient edge r(s) -> tbar is matched
    by some concrete edge s -> t with r(t) = tbar (back).  Both structures
    must be totalized first.  Action labels play no role.
    """
    if full.num_states > size_cap:
        raise ResourceLimitError(f"bisimulation check capped at {size_cap} states")
    qstruct = quotient.structure
    if not full.is_total() or not qstruct.is_total():
        raise ValueError("check_bisimulation needs totalized structures")

    rep_of = {}
    for sid in full.states():
        rep = quotient.rep(full.payload(sid))
        if not qstruct.has_state(rep):
            return False
        qid = qstruct.state_of(rep)
        rep_of[sid] = qid
        if full.label_of(sid) != qstruct.label_of(qid):
            return False

    # initial states must map onto initial representatives and back
    if {rep_of[sid] for sid in full.init} != set(qstruct.init):
        return False

    quotient_edges = {(src, dst) for src, _, dst in qstruct.edges()}
    for sid in full.states():
        succ_reps = {rep_of[dst] for _, dst in full.successors(sid)}
        # forth: each concrete move exists in the quotient
        for qdst in succ_reps:
            if (rep_of[sid], qdst) not in quotient_edges:
                return False
        # back: each quotient move from rep(s) is matched from s itself
        for _, qdst in qstruct.successors(rep_of[sid]):
            if qdst not in succ_reps:
                return False
    return True
