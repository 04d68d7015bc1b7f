"""Explicit-state model checking for replicated guarded-command programs.

The package explores a concurrent program of n symmetric processes three
ways: the full interleaved state graph, its quotient under permutations
of process indices (canonical representatives), and the occupancy-count
abstraction that is isomorphic to the quotient for pid-free programs.
CTL properties are checked by set-valued fixpoints on any of the three,
and abstract counterexamples are lifted back to concrete executions.
"""

__version__ = "0.1.0"

from .counter import (
    CounterState,
    IsomorphismReport,
    build_counter_structure,
    check_isomorphism,
    counter_successors,
    from_counter,
    to_counter,
)
from .ctl import (
    Atom,
    CheckResult,
    EG,
    EU,
    EX,
    FalseF,
    Not,
    And,
    Or,
    TrueF,
    check,
    lift_counterexample,
    neg,
    parse_ctl,
    sat_set,
    shortest_path,
)
from .errors import (
    CheckerError,
    DeadlockError,
    LabelSymmetryError,
    ParseError,
    ResourceLimitError,
    UnsupportedModelError,
)
from .explore import ExplorationStats, ModeComparison, MODES, compare_modes, reach
from .kripke import (
    AtomicProp,
    BuildStats,
    DEFAULT_STATE_BOUND,
    INIT_PROP,
    KripkeStructure,
    Path,
    STUTTER_ACTION,
    breadth_first_build,
)
from .parser import (
    BUILTIN_NAMES,
    builtin_example,
    builtin_source,
    parse_program,
)
from .program import (
    GlobalState,
    GuardedCommand,
    Program,
    atomic_props,
    build_full_structure,
    initial_states,
    labeling,
    render_state,
    successors,
)
from .quotient import (
    QuotientStructure,
    build_quotient,
    check_bisimulation,
    check_symmetric_labeling,
    orbit_size_sorted,
)
from .symmetry import (
    PermGroup,
    Permutation,
    apply,
    compose,
    full_symmetric,
    generated_group,
    group_elements,
    identity,
    inverse,
    is_automorphism,
    orbit,
    rep_min,
    rep_sort,
    representative_fn,
    rotation,
    transposition,
)
