"""Explicit Kripke structures with labeled transitions.

States are opaque payloads keyed by value, so re-adding an existing payload
is a no-op that returns the original id.  The transition relation is a set
of (source, action, target) triples with set-valued image/preimage
operators, which is everything the CTL fixpoint routines need.  The module
also hosts the deterministic worklist builder that the full, quotient and
counter explorations all share.

Structures are built single-writer and are safe for concurrent read-only
use afterwards; no operation mutates after construction except
``totalize``, which is part of construction.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass

from .errors import DeadlockError, ResourceLimitError

STUTTER_ACTION = "stutter"
DEFAULT_STATE_BOUND = 10**6

_AP_KINDS = ("shared-literal", "count-threshold", "designated-label")


@dataclass(frozen=True)
class AtomicProp:
    """A named boolean observation on states.

    ``kind`` is one of ``shared-literal``, ``count-threshold`` or
    ``designated-label``.  Count thresholds carry their (pc value, k)
    pair in ``detail``, shared literals the (variable, value) pair.
    """

    name: str
    kind: str
    detail: tuple = ()

    def __post_init__(self):
        if self.kind not in _AP_KINDS:
            raise ValueError(f"unknown atomic proposition kind: {self.kind!r}")
        if self.kind == "count-threshold":
            if len(self.detail) != 2 or int(self.detail[1]) < 1:
                raise ValueError("count-threshold props carry (pc value, k >= 1)")


INIT_PROP = AtomicProp("init", "designated-label")


@dataclass(frozen=True)
class Path:
    """A finite path.  ``states`` holds payloads, ``actions`` labels steps.

    ``lasso``, when set, is the index of the state the final state loops
    back to, turning the path into an infinite-path witness.
    """

    states: tuple
    actions: tuple

    lasso: int | None = None

    def __post_init__(self):
        if len(self.states) == 0:
            raise ValueError("a path has at least one state")
        if len(self.actions) != len(self.states) - 1:
            raise ValueError("need exactly one action per step")
        if self.lasso is not None and not (0 <= self.lasso < len(self.states)):
            raise ValueError("lasso index out of range")

    @property
    def steps(self):
        return len(self.actions)

    def is_path_of(self, structure):
        """True iff every consecutive pair (and the lasso edge) is an edge."""
        try:
            ids = [structure.state_of(p) for p in self.states]
        except KeyError:
            return False
        for k in range(len(ids) - 1):
            if not structure.has_edge(ids[k], self.actions[k], ids[k + 1]):
                return False
        if self.lasso is not None:
            src, dst = ids[-1], ids[self.lasso]
            if not any(d == dst for _, d in structure.successors(src)):
                return False
        return True


class KripkeStructure:
    """States, initial set, labeled edges and AP labeling."""

    def __init__(self, props=()):
        self._props = {}
        for p in props:
            self.add_prop(p)
        self._payloads = []
        self._index = {}
        self._labels = []
        self._succ = []
        self._pred = []
        self._edges = set()
        self.init = set()

    # -- atomic propositions ------------------------------------------------

    def add_prop(self, prop):
        if prop.name in self._props and self._props[prop.name] != prop:
            raise ValueError(f"conflicting redefinition of prop {prop.name!r}")
        self._props[prop.name] = prop

    def props(self):
        return dict(self._props)

    def has_prop(self, name):
        return name in self._props

    # -- states --------------------------------------------------------------

    def add_state(self, payload, labels=(), initial=False):
        """Register ``payload`` and return its id; idempotent per payload.

        Re-adding an existing payload with a different label set is
        rejected, since labels are a function of the payload everywhere
        this structure is built from.
        """
        labels = frozenset(labels)
        for name in labels:
            if name not in self._props:
                raise ValueError(f"label {name!r} is not in the AP set")
        sid = self._index.get(payload)
        if sid is None:
            sid = len(self._payloads)
            self._payloads.append(payload)
            self._index[payload] = sid
            self._labels.append(labels)
            self._succ.append([])
            self._pred.append([])
        elif self._labels[sid] != labels:
            raise ValueError(
                f"payload re-added with different labels: {labels} vs {self._labels[sid]}"
            )
        if initial:
            self.init.add(sid)
        return sid

    @property
    def num_states(self):
        return len(self._payloads)

    @property
    def num_edges(self):
        return len(self._edges)

    def states(self):
        return range(len(self._payloads))

    def payload(self, sid):
        return self._payloads[sid]

    def state_of(self, payload):
        return self._index[payload]

    def has_state(self, payload):
        return payload in self._index

    def label_of(self, sid):
        self._check_id(sid)
        return self._labels[sid]

    def sat_atom(self, name):
        """All states labeled with the named proposition."""
        if name not in self._props:
            raise ValueError(f"unknown atomic proposition {name!r}")
        return {sid for sid in self.states() if name in self._labels[sid]}

    def _check_id(self, sid):
        if not isinstance(sid, int) or not 0 <= sid < len(self._payloads):
            raise KeyError(f"unknown state id {sid!r}")

    # -- edges ---------------------------------------------------------------

    def add_edge(self, src, action, dst):
        self._check_id(src)
        self._check_id(dst)
        triple = (src, action, dst)
        if triple in self._edges:
            return
        self._edges.add(triple)
        self._succ[src].append((action, dst))
        self._pred[dst].append((src, action))

    def has_edge(self, src, action, dst):
        return (src, action, dst) in self._edges

    def edges(self):
        """All (source, action, target) triples in deterministic order."""
        for src in self.states():
            for action, dst in self._succ[src]:
                yield (src, action, dst)

    def successors(self, sid):
        self._check_id(sid)
        return list(self._succ[sid])

    def predecessors(self, sid):
        self._check_id(sid)
        return list(self._pred[sid])

    def out_degree(self, sid):
        self._check_id(sid)
        return len(self._succ[sid])

    def in_degree(self, sid):
        self._check_id(sid)
        return len(self._pred[sid])

    # -- set-valued operators --------------------------------------------------

    def image(self, state_set):
        """Successor set of ``state_set`` under one transition."""
        out = set()
        for sid in state_set:
            self._check_id(sid)
            out.update(dst for _, dst in self._succ[sid])
        return out

    def preimage(self, state_set):
        """Predecessor set of ``state_set`` under one transition."""
        out = set()
        for sid in state_set:
            self._check_id(sid)
            out.update(src for src, _ in self._pred[sid])
        return out

    # -- totalization -----------------------------------------------------------

    def deadlocked_states(self):
        return [sid for sid in self.states() if not self._succ[sid]]

    def is_total(self):
        return not self.deadlocked_states()

    def totalize(self, policy="self-loop"):
        """Make the transition relation total; returns (self, deadlock ids).

        The self-loop policy adds one stutter loop per deadlocked state;
        the reject policy raises if any deadlock exists.
        """
        dead = self.deadlocked_states()
        if policy == "self-loop":
            for sid in dead:
                self.add_edge(sid, STUTTER_ACTION, sid)
            return self, dead
        if policy == "reject":
            if dead:
                raise DeadlockError(dead)
            return self, []
        raise ValueError(f"unknown totalization policy {policy!r}")

    # -- export --------------------------------------------------------------

    def export_dot(self, graph_name="M", payload_renderer=None):
        """Deterministic DOT text: states by id, edges lexicographic."""
        lines = [f"digraph {graph_name} {{"]
        for sid in self.states():
            if payload_renderer is not None:
                text = payload_renderer(self._payloads[sid])
            else:
                text = str(sid)
            labels = sorted(self._labels[sid])
            if labels:
                text += " {" + ",".join(labels) + "}"
            attrs = [f'label="{text}"']
            if sid in self.init:
                attrs.append("peripheries=2")
            lines.append(f'  {sid} [{", ".join(attrs)}];')
        for src, action, dst in sorted(self._edges):
            lines.append(f'  {src} -> {dst} [label="{action}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class BuildStats:
    """Counters gathered while a structure is explored."""

    states_reached: int = 0
    edges: int = 0
    deadlocks: int = 0
    frontier_peak: int = 0
    bad_reached: bool = False
    duration_ms: float = 0.0


def breadth_first_build(
    props,
    initial_payloads,
    expand,
    labeler,
    *,
    state_bound=DEFAULT_STATE_BOUND,
    stop_at_bad=False,
    bad_label="bad",
):
    """Worklist construction of a structure, breadth first and deterministic.

    ``expand(payload)`` must return (action, payload) successor pairs in a
    deterministic order; insertion order then fixes state numbering, so
    two runs over the same inputs produce identical structures.  With
    ``stop_at_bad`` the loop halts as soon as a state carrying
    ``bad_label`` is inserted, leaving a partial structure.

    Initial payloads get the designated ``init`` label on top of whatever
    ``labeler`` assigns, keeping labels a pure function of the payload
    even when exploration cycles back to an initial state.
    """
    if state_bound < 1:
        raise ValueError("state_bound must be >= 1")
    started = time.perf_counter()
    initial_payloads = list(initial_payloads)
    initial_set = set(initial_payloads)
    structure = KripkeStructure(props)
    if initial_set and not structure.has_prop(INIT_PROP.name):
        structure.add_prop(INIT_PROP)
    stats = BuildStats()
    queue = deque()

    def labels_for(payload):
        labels = frozenset(labeler(payload))
        if payload in initial_set:
            labels |= {INIT_PROP.name}
        return labels

    def insert(payload, initial=False):
        known = structure.has_state(payload)
        labels = structure.label_of(structure.state_of(payload)) if known else labels_for(payload)
        if not known and structure.num_states >= state_bound:
            stats.states_reached = structure.num_states
            stats.edges = structure.num_edges
            stats.frontier_peak = max(stats.frontier_peak, len(queue))
            raise ResourceLimitError(
                f"state bound {state_bound} exceeded; frontier size {len(queue)}",
                partial_stats=stats,
            )
        sid = structure.add_state(payload, labels, initial=initial)
        if not known:
            queue.append(sid)
            if stop_at_bad and bad_label in labels:
                stats.bad_reached = True
        return sid

    for payload in initial_payloads:
        insert(payload, initial=True)
        if stats.bad_reached:
            break
    stats.frontier_peak = len(queue)

    while queue and not stats.bad_reached:
        sid = queue.popleft()
        succs = expand(structure.payload(sid))
        if not succs:
            stats.deadlocks += 1
        for action, target in succs:
            tid = insert(target)
            structure.add_edge(sid, action, tid)
            if stats.bad_reached:
                break
        stats.frontier_peak = max(stats.frontier_peak, len(queue))

    stats.states_reached = structure.num_states
    stats.edges = structure.num_edges
    stats.duration_ms = (time.perf_counter() - started) * 1000.0
    return structure, stats
