"""``localview`` command-line front end.

Exit codes: 0 success, 2 unreadable or malformed scenario, 3 size guard
refusal, 4 replay or invariant failure.
"""

from __future__ import annotations

import argparse
import sys
import time
import warnings
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .converse import MAX_SEARCH_GAIN, no_universal_strategy_search
from .counterexamples import builtin_counterexamples, replay
from .errors import InvariantViolation, ScenarioError, SizeGuardError
from .network import class_topology, components, enumerate_three_user_classes
from .oracle import (MAX_COMPONENT_USERS, MAX_LEVELS_BY_SIZE, QUALIFIER,
                     brute_force_sum_capacity)
from .reports import (EXISTS, NOT_EXISTS, format_table, render_replays, render_run,
                      render_sweep, replay_rows, run_rows, sweep_rows, universal_verdict,
                      write_csv)
from .runs import simulate, sweep
from .scenario import Scenario, load_scenario
from .views import NodeId, view_of

EXIT_OK, EXIT_PARSE, EXIT_GUARD, EXIT_FAILURE = 0, 2, 3, 4
DEFAULT_SWEEP_GAIN = 2


def _load(path: str) -> Scenario:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        sc = load_scenario(path)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return sc


def _map(fn, items, jobs: int):
    # results come back in input order either way
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _emit_csv(args, rows) -> None:
    if args.csv:
        write_csv(args.csv, rows)
        print(f"wrote {args.csv}")


# --- commands -------------------------------------------------------------------

def cmd_classify(args) -> int:
    sc = _load(args.scenario)
    comps = components(sc.topology)
    rows = [(i, "{" + ",".join(map(str, c.members)) + "}", str(c.tag),
             "yes" if c.tag.qualifies else "no") for i, c in enumerate(comps, 1)]
    print(f"scenario {sc.label}: K={sc.K}, {len(comps)} component(s)")
    print(format_table(("component", "users", "classification", "qualifies"), rows))
    verdict = universal_verdict(c.tag for c in comps)
    print(f"universally optimal strategy {verdict}")
    _emit_csv(args, [(sc.label, i, str(c.tag), None, None, None,
                      EXISTS if c.tag.qualifies else NOT_EXISTS) for i, c in enumerate(comps, 1)])
    return EXIT_OK


def cmd_simulate(args) -> int:
    sc = _load(args.scenario)
    report = simulate(sc.gains, genie=args.genie or sc.genie, label=sc.label)
    print(render_run(report))
    t = report.timings
    print(f"timings: strategy {t['strategy_s']:.3f}s, oracle {t['oracle_s']:.3f}s")
    _emit_csv(args, run_rows(report))
    return EXIT_OK


def cmd_view(args) -> int:
    sc = _load(args.scenario)
    node = NodeId.parse(args.node)
    v = view_of(sc.gains, node, genie=args.genie or sc.genie)
    rows = [(f"n{t}{r}", t, r, n) for (t, r), n in sorted(v.known)]
    print(f"view of {node} in {sc.label} ({len(rows)} of {len(sc.gains.entries)} links)")
    print(format_table(("link", "tx", "rx", "gain"), rows))
    if v.genie_topology is not None:
        print(f"genie connectivity: {v.genie_topology.cross_string()}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    sc = _load(args.scenario)
    res = brute_force_sum_capacity(sc.gains, method=args.method)
    print(f"scenario {sc.label}: K={sc.K}, q={sc.gains.q}")
    print(f"guard: components of at most {MAX_COMPONENT_USERS} users; "
          + ", ".join(f"q <= {q} for {k}-user components" for k, q in sorted(MAX_LEVELS_BY_SIZE.items())))
    rows = [(f"T{k}", r, str(s)) for k, (r, s) in enumerate(zip(res.rates, res.encoders), 1)]
    print(format_table(("tx", "rate", "codebook"), rows))
    comps = components(sc.topology)
    sums = dict(res.component_sums)
    print(format_table(("component", "users", "classification", "sum rate"),
                       [(i, "{" + ",".join(map(str, c.members)) + "}", str(c.tag), sums[c.members])
                        for i, c in enumerate(comps, 1)]))
    print(f"sum rate {res.sum_rate} ({res.qualifier})")
    _emit_csv(args, [(sc.label, i, str(c.tag), None, sums[c.members], None,
                      EXISTS if c.tag.qualifies else NOT_EXISTS) for i, c in enumerate(comps, 1)])
    return EXIT_OK


def _sweep_one(job):
    label, topo, g, genie, samples, seed = job
    return label, sweep(topo, g, genie, samples=samples, seed=seed)


def cmd_sweep(args) -> int:
    jobs = []
    if args.scenario:
        sc = _load(args.scenario)
        g = next(b for b in (args.gain_bound, sc.gain_bound, DEFAULT_SWEEP_GAIN) if b is not None)
        jobs.append((sc.label, sc.topology, g, args.genie or sc.genie, args.samples, args.seed))
    g = DEFAULT_SWEEP_GAIN if args.gain_bound is None else args.gain_bound
    for lab in args.classes or []:
        jobs.append((f"({lab})", class_topology(lab), g, args.genie, args.samples, args.seed))
    if not jobs:
        print("error: give a scenario file or --class", file=sys.stderr)
        return EXIT_PARSE
    results = _map(_sweep_one, jobs, args.jobs)
    rows, ok = [], True
    for label, r in results:
        print(render_sweep(label, r))
        print()
        rows += sweep_rows(label, r)
        ok &= r.consistent
    _emit_csv(args, rows)
    return EXIT_OK if ok else EXIT_FAILURE


def cmd_counterexamples(args) -> int:
    t0 = time.perf_counter()
    cases = builtin_counterexamples()
    if args.labels:
        cases = [c for c in cases if c.label in set(args.labels)]
    reports = _map(replay, cases, args.jobs)
    pairs = list(zip(cases, reports))
    print(render_replays(pairs, verbose=args.verbose))
    print(f"oracle figures are {QUALIFIER} optima; replay took {time.perf_counter() - t0:.1f}s")
    _emit_csv(args, replay_rows(pairs))
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAILURE


def cmd_enumerate(args) -> int:
    t0 = time.perf_counter()
    classes = enumerate_three_user_classes()
    rows = [(c.label, c.representative.cross_string(), c.orbit_size,
             "yes" if c.qualifies else "no") for c in classes]
    print(format_table(("class", "cross links", "orbit size", "qualifies"), rows))
    print(f"{len(classes)} classes covering {sum(c.orbit_size for c in classes)} labelled topologies "
          f"({time.perf_counter() - t0:.3f}s)")
    _emit_csv(args, [(f"({c.label})", 1, c.representative.cross_string(), None, None, None,
                      EXISTS if c.qualifies else NOT_EXISTS) for c in classes])
    return EXIT_OK


def _search_one(job):
    label, topo, g, genie, minimize = job
    return label, no_universal_strategy_search(topo, g, genie, minimize)


def cmd_search(args) -> int:
    jobs = []
    if args.scenario:
        sc = _load(args.scenario)
        jobs.append((sc.label, sc.topology, args.gain_bound, args.genie, args.minimize))
    labels = [c.label for c in enumerate_three_user_classes()] if args.all_classes else (args.classes or [])
    for lab in labels:
        jobs.append((f"({lab})", class_topology(lab), args.gain_bound, args.genie, args.minimize))
    if not jobs:
        print("error: give a scenario file, --class or --all-classes", file=sys.stderr)
        return EXIT_PARSE
    results = _map(_search_one, jobs, args.jobs)
    rows = [(label, r.topology.cross_string(), r.assignments, r.variables, r.nodes, r.verdict,
             "" if r.core is None else len(r.core)) for label, r in results]
    print(f"universal view-to-codebook tables, gains 0..{args.gain_bound}, "
          f"genie {'on' if args.genie else 'off'}, optimum = {QUALIFIER} oracle")
    print(format_table(("topology", "cross links", "assignments", "table entries", "nodes",
                        "table", "core size"), rows))
    for label, r in results:
        if r.core:
            print(f"{label} core: " + "; ".join(gm.describe() for gm in r.core))
    _emit_csv(args, [(label, 1, r.topology.cross_string(), None, None, None,
                      EXISTS if r.feasible else NOT_EXISTS) for label, r in results])
    return EXIT_OK


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", metavar="PATH", help="also write the fixed-column CSV report")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps and replays")

    p = argparse.ArgumentParser(prog="localview",
                                description="Local-view strategies on deterministic interference networks.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, scenario=True, genie=True):
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if scenario:
            sp.add_argument("scenario", help="scenario file")
        if genie:
            sp.add_argument("--genie", action="store_true", help="give every node global connectivity")
        sp.set_defaults(func=fn)
        return sp

    add("classify", cmd_classify, "tag each component and state whether a universal strategy exists",
        genie=False)
    add("simulate", cmd_simulate, "run the distributed strategy and compare with the oracle")
    sp = add("view", cmd_view, "print the links a node knows")
    sp.add_argument("node", help="node name such as T2 or R1")
    sp = add("oracle", cmd_oracle, "exhaustive linear single-shot sum-rate search", genie=False)
    sp.add_argument("--method", choices=("auto", "enumerate", "branch"), default="auto")

    sp = add("sweep", cmd_sweep, "distributed sum against the oracle over every gain assignment",
             scenario=False)
    sp.add_argument("scenario", nargs="?", help="scenario file whose topology is swept")
    sp.add_argument("--class", dest="classes", action="append", metavar="LABEL",
                    help="three-user class label a..p (repeatable)")
    sp.add_argument("--gain-bound", type=int,
                    help="largest gain, at most 3 (default: the scenario's gain_bound, else 2)")
    sp.add_argument("--samples", type=int, help="sample this many assignments instead of sweeping")

    sp = add("counterexamples", cmd_counterexamples, "replay the built-in instances", scenario=False,
             genie=False)
    sp.add_argument("labels", nargs="*", help="restrict to these labels")
    sp.add_argument("-v", "--verbose", action="store_true", help="show each replay step")

    add("enumerate-topologies", cmd_enumerate, "list the three-user isomorphism classes",
        scenario=False, genie=False)

    sp = add("search-universal", cmd_search, "search for one table from views to codebooks",
             scenario=False, genie=False)
    sp.add_argument("scenario", nargs="?", help="three-user scenario file")
    sp.add_argument("--class", dest="classes", action="append", metavar="LABEL")
    sp.add_argument("--all-classes", action="store_true")
    sp.add_argument("--gain-bound", type=int, default=1, help=f"largest gain, 1..{MAX_SEARCH_GAIN} (default 1)")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--genie", dest="genie", action="store_true", default=True,
                   help="views include global connectivity (default)")
    g.add_argument("--no-genie", dest="genie", action="store_false")
    sp.add_argument("--minimize", action="store_true",
                    help="shrink an infeasible instance set to an irreducible core")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SizeGuardError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InvariantViolation as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
