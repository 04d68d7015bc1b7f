"""Permutations of process indices acting on global states.

The action permutes the local records and re-points pid-typed shared
values (``none`` stays put).  Orbits, canonical representatives and the
automorphism check all live here.  The canonical representative of an
orbit is its least element under the byte encoding documented in
``program``; for full symmetry without pid variables that minimum is just
the state with its local records sorted, which is the cheap production
path.  Full symmetric groups are always handled through their two
standard generators, never by enumerating all n! elements outside test
oracles.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import ResourceLimitError, UnsupportedModelError
from .program import GlobalState, labeling, successors

GROUP_ENUM_CAP = 10**6


@dataclass(frozen=True)
class Permutation:
    """A bijection on {0..n-1}; ``mapping[i]`` is the image of i."""

    mapping: tuple

    def __post_init__(self):
        if sorted(self.mapping) != list(range(len(self.mapping))):
            raise ValueError(f"not a permutation of 0..{len(self.mapping) - 1}: {self.mapping}")

    @property
    def degree(self):
        return len(self.mapping)

    def __call__(self, i):
        return self.mapping[i]


def identity(n):
    return Permutation(tuple(range(n)))


def transposition(n, i, j):
    m = list(range(n))
    m[i], m[j] = m[j], m[i]
    return Permutation(tuple(m))


def rotation(n):
    """The n-cycle sending i to i+1 mod n."""
    return Permutation(tuple((i + 1) % n for i in range(n)))


def compose(p, q):
    """Apply ``q`` first, then ``p``."""
    if p.degree != q.degree:
        raise ValueError("degree mismatch")
    return Permutation(tuple(p.mapping[q.mapping[i]] for i in range(q.degree)))


def inverse(p):
    m = [0] * p.degree
    for i, j in enumerate(p.mapping):
        m[j] = i
    return Permutation(tuple(m))


@dataclass(frozen=True)
class PermGroup:
    """A permutation group given by generators.

    ``full-symmetric`` groups are generated by the transposition (0 1)
    and the n-cycle and stand for all of Sym(n); ``generated`` groups are
    whatever their generator list produces.
    """

    degree: int
    generators: tuple
    kind: str = "generated"

    def __post_init__(self):
        if any(g.degree != self.degree for g in self.generators):
            raise ValueError("generator degree mismatch")
        if self.kind not in ("full-symmetric", "generated"):
            raise ValueError(f"unknown group kind {self.kind!r}")


def full_symmetric(n):
    if n <= 1:
        return PermGroup(n, (), "full-symmetric")
    gens = [transposition(n, 0, 1)]
    cyc = rotation(n)
    if cyc not in gens:
        gens.append(cyc)
    return PermGroup(n, tuple(gens), "full-symmetric")


def generated_group(generators):
    gens = tuple(generators)
    if not gens:
        raise ValueError("a generated group needs at least one generator")
    return PermGroup(gens[0].degree, gens, "generated")


# --------------------------------------------------------------------------
# The action on states.
# --------------------------------------------------------------------------


def apply(perm, state):
    """Image of ``state`` under ``perm``.

    Local record i moves to position perm(i); boolean shared values are
    untouched; a pid-typed shared value v != none becomes perm(v).
    """
    n = state.n
    if perm.degree != n:
        raise ValueError(f"permutation degree {perm.degree} != process count {n}")
    new_locals = [None] * n
    for i, rec in enumerate(state.locals):
        new_locals[perm.mapping[i]] = rec
    if state.pid_slots:
        shared = list(state.shared)
        for slot in state.pid_slots:
            if shared[slot] != n:
                shared[slot] = perm.mapping[shared[slot]]
        shared = tuple(shared)
    else:
        shared = state.shared
    return GlobalState(shared, tuple(new_locals), state.pid_slots)


def orbit(group, state):
    """Closure of {state} under the group generators."""
    if group.degree != state.n:
        raise ValueError("group degree does not match state")
    seen = {state}
    queue = deque([state])
    while queue:
        s = queue.popleft()
        for g in group.generators:
            t = apply(g, s)
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return frozenset(seen)


def rep_sort(state):
    """Canonical representative under full symmetry: sort the local records.

    Only valid without pid-typed shared variables; a shared value naming a
    process index is not invariant under re-sorting, so those programs
    must canonicalize with ``rep_min``.
    """
    if state.pid_slots:
        raise UnsupportedModelError(
            "rep_sort needs a pid-free program; use rep_min for pid-typed shared state"
        )
    return GlobalState(state.shared, tuple(sorted(state.locals)), state.pid_slots)


def group_elements(group, cap=GROUP_ENUM_CAP):
    """Enumerate the generated group (identity included), capped."""
    ident = identity(group.degree)
    seen = {ident}
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in group.generators:
            q = compose(g, p)
            if q not in seen:
                if len(seen) >= cap:
                    raise ResourceLimitError(
                        f"group enumeration exceeded cap of {cap} elements"
                    )
                seen.add(q)
                queue.append(q)
    return seen


def rep_min(group, state, enum_cap=GROUP_ENUM_CAP):
    """Least orbit element by byte encoding, plus a permutation reaching it.

    Full symmetric groups walk the orbit with witness permutations, which
    touches |orbit| states instead of n! group elements.  Generated groups
    are enumerated outright (desk scale, capped at ``enum_cap``).
    Satisfies ``apply(perm, state) == rep`` for the returned pair.
    """
    if group.degree != state.n:
        raise ValueError("group degree does not match state")
    if group.kind == "generated":
        best_state, best_perm = state, identity(group.degree)
        best_key = state.encode()
        for g in sorted(group_elements(group, enum_cap), key=lambda p: p.mapping):
            t = apply(g, state)
            key = t.encode()
            if key < best_key:
                best_state, best_perm, best_key = t, g, key
        return best_state, best_perm
    # full-symmetric: breadth-first orbit walk carrying witnesses
    ident = identity(group.degree)
    witness = {state: ident}
    queue = deque([state])
    best_state = state
    best_key = state.encode()
    while queue:
        s = queue.popleft()
        for g in group.generators:
            t = apply(g, s)
            if t not in witness:
                witness[t] = compose(g, witness[s])
                queue.append(t)
                key = t.encode()
                if key < best_key:
                    best_state, best_key = t, key
    return best_state, witness[best_state]


def representative_fn(program, group=None):
    """Pick the canonicalization for a program: (function, mode name).

    Sorting is the fast path; it is only correct for pid-free programs
    under the full symmetric group, so anything else falls back to the
    orbit minimum.
    """
    if group is None:
        group = full_symmetric(program.n)
    if group.degree != program.n:
        raise ValueError("group degree does not match program")
    if group.kind == "full-symmetric" and not program.pid_slots:
        return rep_sort, "sort"
    return (lambda s: rep_min(group, s)[0]), "min-over-group"


def is_automorphism(perm, program, sample):
    """Check label preservation and successor equivariance on a sample.

    True iff for every sampled state s, pi(s) has the same labels and
    pi maps the successor set of s onto the successor set of pi(s)
    (action labels disregarded, states compared as sets).
    """
    for s in sample:
        t = apply(perm, s)
        if labeling(program, s) != labeling(program, t):
            return False
        image = {apply(perm, u) for _, u in successors(program, s)}
        direct = {u for _, u in successors(program, t)}
        if image != direct:
            return False
    return True
