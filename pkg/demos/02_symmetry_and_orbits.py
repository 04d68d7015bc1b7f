#!/usr/bin/env python3
"""Process permutations acting on states: orbits and canonical forms.

Because guards can only talk about "self" and "the others", renaming the
processes never changes what a program can do, so each orbit of states
under the symmetric group behaves identically and one representative per
orbit suffices.
"""

from orbitmc import (
    GlobalState,
    apply,
    builtin_example,
    full_symmetric,
    orbit,
    render_state,
    rep_min,
    rep_sort,
    transposition,
)

program = builtin_example("mutex", 3)
show = lambda s: render_state(program, s)

# The state where process 0 is critical and the others are still trying.
critical_first = GlobalState((), ((2,), (0,), (0,)))
print("a state:", show(critical_first))

# Swapping two process indices just relocates the local records.
swapped = apply(transposition(3, 0, 1), critical_first)
print("after swapping processes 0 and 1:", show(swapped))

# Its orbit: every position the critical process could occupy.
group = full_symmetric(3)
print("orbit:", sorted(show(s) for s in orbit(group, critical_first)))

# The canonical representative is the least orbit element; for pid-free
# programs that is simply the state with sorted local records.
print("representative:", show(rep_sort(critical_first)))
assert rep_sort(critical_first) == rep_sort(swapped)

# Programs with pid-typed shared state (the allocator's grant cell)
# cannot just sort: the shared value names a process and must move too.
allocator = builtin_example("allocator", 2)
# grant is held by process 1, which sits at exec; process 0 is ready
state = GlobalState((1,), ((0,), (2,)), pid_slots=(0,))
print("\nallocator state:", render_state(allocator, state))
rep, witness = rep_min(full_symmetric(2), state)
print("orbit minimum:  ", render_state(allocator, rep), "via", witness.mapping)
assert apply(witness, state) == rep
print("orbit:", sorted(render_state(allocator, s) for s in orbit(full_symmetric(2), state)))
