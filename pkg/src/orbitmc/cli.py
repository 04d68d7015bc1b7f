"""Command-line surface.

Subcommands: check, reach, compare, export-dot, examples.  Models come
from a file in the guarded-command language or from a builtin benchmark
as ``name:n``.  Reports are plain text or JSON with a fixed key order so
identical runs emit identical bytes (modulo the duration field).

Exit codes: 0 success / property holds; 1 property fails or stop-at-bad
triggered; 2 usage or input error; 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from . import __version__
from .counter import build_counter_structure, from_counter
from .ctl import check, lift_counterexample, parse_ctl
from .errors import CheckerError, ParseError, ResourceLimitError, UnsupportedModelError
from .explore import MODES, _any_bad, _run_mode, compare_modes, reach
from .kripke import DEFAULT_STATE_BOUND, Path
from .program import build_full_structure, render_state
from .parser import BUILTIN_NAMES, builtin_example, builtin_source, parse_program
from .quotient import build_quotient

BOUND_ENV_VAR = "ORBITMC_BOUND"

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass
class RunConfig:
    command: str
    builtin: str | None = None
    model_path: str | None = None
    prop: str | None = None
    mode: str = "full"
    bound: int | None = None
    fmt: str = "text"
    stop_at_bad: bool = False
    dot_name: str = "M"
    examples_n: int = 2


def _add_model_args(sub):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--builtin", metavar="NAME:N", help="builtin example, e.g. mutex:4")
    group.add_argument("--model", metavar="FILE", help="model file in the input language")


def _add_common_args(sub, modes=MODES):
    sub.add_argument("--mode", choices=list(modes), default="full")
    sub.add_argument("--bound", type=int, default=None, help="state bound (default 10^6)")
    sub.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    sub.add_argument(
        "--json", dest="fmt", action="store_const", const="json", help="same as --format json"
    )


def build_arg_parser():
    top = argparse.ArgumentParser(
        prog="orbitmc",
        description="explicit-state model checking with symmetry reduction",
    )
    top.add_argument("--version", action="version", version=f"orbitmc {__version__}")
    subs = top.add_subparsers(dest="command", required=True)

    p = subs.add_parser("check", help="model-check a CTL property")
    _add_model_args(p)
    p.add_argument("--prop", required=True, help="CTL formula, e.g. 'AG !bad'")
    _add_common_args(p)

    p = subs.add_parser("reach", help="explore the reachable states")
    _add_model_args(p)
    _add_common_args(p)
    p.add_argument("--stop-at-bad", action="store_true", help="halt at the first bad state")

    p = subs.add_parser("compare", help="run all modes and report the reduction")
    _add_model_args(p)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--format", dest="fmt", choices=["text", "json"], default="text")
    p.add_argument("--json", dest="fmt", action="store_const", const="json")

    p = subs.add_parser("export-dot", help="print the structure as DOT")
    _add_model_args(p)
    _add_common_args(p)
    p.add_argument("--name", dest="dot_name", default="M", help="graph name")

    p = subs.add_parser("examples", help="print the builtin model sources")
    p.add_argument("--n", dest="examples_n", type=int, default=2)
    return top


def build_config(argv):
    ns = build_arg_parser().parse_args(argv)
    return RunConfig(
        command=ns.command,
        builtin=getattr(ns, "builtin", None),
        model_path=getattr(ns, "model", None),
        prop=getattr(ns, "prop", None),
        mode=getattr(ns, "mode", "full"),
        bound=getattr(ns, "bound", None),
        fmt=getattr(ns, "fmt", "text"),
        stop_at_bad=getattr(ns, "stop_at_bad", False),
        dot_name=getattr(ns, "dot_name", "M"),
        examples_n=getattr(ns, "examples_n", 2),
    )


class UsageError(CheckerError):
    pass


def load_program(config):
    """The program plus its display name for reports."""
    if config.builtin is not None:
        name, sep, count = config.builtin.partition(":")
        if not sep or not count.isdigit() or int(count) < 1:
            raise UsageError(f"builtin models are NAME:N with N >= 1, got {config.builtin!r}")
        if name not in BUILTIN_NAMES:
            raise UsageError(
                f"unknown builtin {name!r} (have {', '.join(BUILTIN_NAMES)})"
            )
        return builtin_example(name, int(count)), config.builtin
    try:
        with open(config.model_path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise UsageError(f"cannot read model file: {exc}")
    return parse_program(text, name=config.model_path), config.model_path


def effective_bound(config):
    if config.bound is not None:
        if config.bound < 1:
            raise UsageError("--bound must be >= 1")
        return config.bound
    env = os.environ.get(BOUND_ENV_VAR)
    if env:
        if not env.isdigit() or int(env) < 1:
            raise UsageError(f"{BOUND_ENV_VAR} must be a positive integer, got {env!r}")
        return int(env)
    return DEFAULT_STATE_BOUND


def build_structure_for_mode(program, mode, bound):
    if mode == "full":
        return build_full_structure(program, bound), None
    if mode == "quotient":
        quotient = build_quotient(program, state_bound=bound)
        return quotient.structure, quotient
    if mode == "counter":
        return build_counter_structure(program, bound), None
    raise UsageError(f"unknown mode {mode!r}")


def _stats_dict(stats):
    return {
        "states_reached": stats.states_reached,
        "edges": stats.edges,
        "deadlocks": stats.deadlocks,
        "frontier_peak": stats.frontier_peak,
        "duration_ms": round(stats.duration_ms, 3),
        "bad_reached": stats.bad_reached,
    }


def _report_head(config, model_name):
    return {
        "tool_version": __version__,
        "command": config.command,
        "model": model_name,
        "mode": config.mode,
    }


def _emit(config, report, out):
    if config.fmt == "json":
        print(json.dumps(report, indent=2), file=out)
        return
    for key, value in report.items():
        if key in ("stats", "comparison") and isinstance(value, dict):
            print(f"{key}:", file=out)
            for k, v in value.items():
                if isinstance(v, dict):
                    inner = " ".join(f"{ik}={iv}" for ik, iv in v.items())
                    print(f"  {k}: {inner}", file=out)
                else:
                    print(f"  {k}: {v}", file=out)
        elif key == "counterexample" and isinstance(value, dict):
            print("counterexample:", file=out)
            states = value["states"]
            actions = value["actions"]
            for idx, state in enumerate(states):
                print(f"  {idx}: {state}", file=out)
                if idx < len(actions):
                    print(f"     --{actions[idx]}-->", file=out)
        else:
            print(f"{key}: {value}", file=out)


def _concretize_path(program, mode, structure, path):
    """Render a structure path as a concrete execution, lifting if needed."""
    if mode == "full":
        return path
    if mode == "counter":
        path = Path(tuple(from_counter(s) for s in path.states), path.actions)
    return lift_counterexample(program, path)


def run_check(config, out):
    program, model_name = load_program(config)
    bound = effective_bound(config)
    started = time.perf_counter()
    structure, build_stats = _run_mode(program, config.mode, bound, stop_at_bad=False)
    structure.totalize("self-loop")
    formula = parse_ctl(config.prop)
    try:
        result = check(structure, formula)
    except ValueError as exc:
        raise UsageError(str(exc))
    build_stats.duration_ms = (time.perf_counter() - started) * 1000.0
    build_stats.bad_reached = _any_bad(structure)

    report = _report_head(config, model_name)
    if config.fmt == "text":
        report["property"] = config.prop
    report["verdict"] = result.verdict
    report["stats"] = _stats_dict(build_stats)
    if result.counterexample is not None:
        concrete = _concretize_path(program, config.mode, structure, result.counterexample)
        report["counterexample"] = {
            "states": [render_state(program, s) for s in concrete.states],
            "actions": list(concrete.actions),
        }
    _emit(config, report, out)
    return EXIT_OK if result.holds else EXIT_FAILS


def run_reach(config, out):
    program, model_name = load_program(config)
    bound = effective_bound(config)
    _, stats = reach(program, config.mode, bound, stop_at_bad=config.stop_at_bad)
    report = _report_head(config, model_name)
    report["stats"] = _stats_dict(stats)
    _emit(config, report, out)
    if config.stop_at_bad and stats.bad_reached:
        return EXIT_FAILS
    return EXIT_OK


def run_compare(config, out):
    program, model_name = load_program(config)
    bound = effective_bound(config)
    comparison = compare_modes(program, bound)
    report = _report_head(config, model_name)
    report["mode"] = "compare"
    comparison_dict = {}
    for mode in MODES:
        if mode in comparison.stats:
            comparison_dict[mode] = _stats_dict(comparison.stats[mode])
        else:
            comparison_dict[mode] = f"unsupported: {comparison.unsupported[mode]}"
    comparison_dict["reduction_factor"] = round(comparison.reduction_factor, 3)
    report["comparison"] = comparison_dict
    _emit(config, report, out)
    return EXIT_OK


def run_export_dot(config, out):
    program, _ = load_program(config)
    bound = effective_bound(config)
    structure, _ = build_structure_for_mode(program, config.mode, bound)
    if config.mode == "counter":
        renderer = lambda c: render_state(program, from_counter(c))
    else:
        renderer = lambda s: render_state(program, s)
    out.write(structure.export_dot(config.dot_name, renderer))
    return EXIT_OK


def run_examples(config, out):
    if config.examples_n < 1:
        raise UsageError("--n must be >= 1")
    for name in BUILTIN_NAMES:
        print(f"# ---- {name} ----", file=out)
        print(builtin_source(name, config.examples_n), file=out)
    return EXIT_OK


_RUNNERS = {
    "check": run_check,
    "reach": run_reach,
    "compare": run_compare,
    "export-dot": run_export_dot,
    "examples": run_examples,
}


def run(config, out=None, err=None):
    """Execute one configured command; returns the exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        return _RUNNERS[config.command](config, out)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=err)
        return EXIT_RESOURCE
    except (UsageError, ParseError, UnsupportedModelError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(build_config(argv)))


if __name__ == "__main__":
    main()
