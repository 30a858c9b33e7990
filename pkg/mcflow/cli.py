from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

from .bench import report_rows_csv, run_bench
from .config import apply_config, build_arg_parser, load_toml_config, resolved_config_dict
from .constants import EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, VERSION
from .cuts import enumerate_cuts, pairwise_bound, pairwise_capacity, total_capacity, disjoint_capacity
from .cycles import build_pseudoflow, cycle_basis, cycle_constraints, decide
from .doctor import run_doctor
from .document import NetworkDocument, load_document, serialize_document
from .errors import InvalidParameterError, McflowError
from .gluing import LocalFlowFamily, brute_force, feasible_flows
from .logging import JsonLogger
from .model import Flow, discretize, embed_requirements
from .plot import render_svg
from .ratio import RatioProblem, int_ratio_max, ratio_max
from .regions import POLYGONS, PointSet, Polygonal, Region
from .util import format_rational, natural_key, parse_int_list, parse_rational, parse_vector_arg, rational_str


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _dumps(obj) -> str:
    return json.dumps({"ok": True, **obj}, indent=2, sort_keys=True) + "\n"


def region_to_dict(region: Region) -> dict:
    if isinstance(region, PointSet):
        return {"variant": "points", "k": region.k,
                "points": [[format_rational(x) for x in p] for p in region.sorted_points()]}
    if isinstance(region, Polygonal):
        return {"variant": "polygons", "k": 2,
                "pieces": [[[format_rational(x) for x in v] for v in verts] for verts in region.vertex_lists()]}
    raise InvalidParameterError(f"cannot render a {region.variant} region")


def region_csv(region: Region) -> str:
    if isinstance(region, PointSet):
        rows = [[f"x{i + 1}" for i in range(region.k)]]
        rows += [[rational_str(x) for x in p] for p in region.sorted_points()]
        return _csv(rows)
    rows = [["piece", "vertex", "x", "y"]]
    for n, verts in enumerate(region.vertex_lists()):
        for i, v in enumerate(verts):
            rows.append([n, i, rational_str(v[0]), rational_str(v[1])])
    return _csv(rows)


def _flow_dict(flow: Flow | None):
    if flow is None:
        return None
    return {a: [format_rational(x) for x in v] for a, v in flow.items()}


class CommandRunner:
    """Executes one subcommand; returns (exit code, artifact text)."""

    def __init__(self, args, logger: JsonLogger):
        self.args = args
        self.logger = logger
        self.doc: NetworkDocument | None = None
        self.net = None

    # plumbing

    def load(self, allow_discretize: bool = True):
        self.doc = load_document(self.args.network)
        self.net = self.doc.to_network()
        self.logger.emit("network_loaded", path=self.args.network, nodes=len(self.net.nodes),
                         arcs=len(self.net.arcs), k=self.net.k, variant=self.net.variant or "mixed")
        if allow_discretize and self.args.discretize and self.net.variant == POLYGONS:
            self.net = discretize(self.net)
            self.logger.emit("discretized", warning="polygons replaced by integer points; results are the integer-flow region")
        return self.net

    def region_output(self, region: Region, label: str) -> str:
        fmt = self.args.format
        if fmt == "json":
            return _dumps({"command": self.args.command, **region_to_dict(region)})
        if fmt == "svg":
            return render_svg([(label, region)], fill=self.args.fill, edge=self.args.edge, grid=self.args.grid)
        return region_csv(region)

    def _cut_by_index(self, index: int):
        cuts = enumerate_cuts(self.net)
        if not 0 <= index < len(cuts):
            raise InvalidParameterError(f"cut index {index} out of range 0..{len(cuts) - 1}", cut=index)
        return cuts[index]

    def _family_output(self, family: LocalFlowFamily) -> str:
        stats = family.stats
        counters = {
            "semantic_comparisons": stats.semantic_comparisons,
            "survivor_comparisons": stats.survivor_comparisons,
            "actual_comparisons": stats.actual_comparisons,
            "coordinates": stats.coordinates,
            "operations": stats.operations,
        }
        realize = getattr(self.args, "realize", False)
        groups = family.by_value()
        if self.args.format == "json":
            out = {"command": self.args.command, "counters": counters, "flows": len(family),
                   "values": [[format_rational(x) for x in v] for v in groups]}
            if realize:
                out["realizations"] = [_flow_dict(fs[0].to_flow()) for fs in groups.values()]
            return _dumps(out)
        if self.args.format == "svg":
            return render_svg([(self.args.command, PointSet.of(self.net.k, groups))],
                              fill=self.args.fill, edge=self.args.edge, grid=self.args.grid)
        header = [f"x{i + 1}" for i in range(self.net.k)] + (["flow"] if realize else [])
        rows = [header]
        for v, fs in groups.items():
            row = [rational_str(x) for x in v]
            if realize:
                row.append(";".join(f"{a}={x}" for a, x in fs[0].sorted_items()))
            rows.append(row)
        rows += [[f"# {k}", n] for k, n in counters.items()]
        return _csv(rows)

    # commands

    def cmd_validate(self):
        self.load(allow_discretize=False)
        checks, text = run_doctor(self.doc, self.net, self.args.budget)
        if self.args.format == "json":
            return EXIT_OK, _dumps({"command": "validate", "checks": checks})
        return EXIT_OK, text

    def cmd_cuts(self):
        net = self.load()
        cuts = enumerate_cuts(net)
        if self.args.format == "json":
            return EXIT_OK, _dumps({"command": "cuts", "cuts": [
                {"index": c.index, "s_side": sorted(c.s_side, key=natural_key), "t_side": sorted(c.t_side, key=natural_key),
                 "forward": list(c.forward), "backward": list(c.backward)} for c in cuts]})
        rows = [["index", "s_side", "t_side", "forward", "backward"]]
        for c in cuts:
            rows.append([c.index, ";".join(sorted(c.s_side, key=natural_key)), ";".join(sorted(c.t_side, key=natural_key)),
                         ";".join(c.forward), ";".join(c.backward)])
        return EXIT_OK, _csv(rows)

    def cmd_total_capacity(self):
        net = self.load()
        return EXIT_OK, self.region_output(total_capacity(net, self.logger), "total capacity")

    def cmd_pairwise_capacity(self):
        net = self.load()
        a, b = self.args.cut_a, self.args.cut_b
        if (a is None) != (b is None):
            raise InvalidParameterError("give both --cut-a and --cut-b, or neither")
        if a is None:
            return EXIT_OK, self.region_output(pairwise_bound(net, self.logger), "pairwise bound")
        region = pairwise_capacity(net, self._cut_by_index(a), self._cut_by_index(b))
        return EXIT_OK, self.region_output(region, f"pairwise capacity {a},{b}")

    def cmd_mutual_capacity(self):
        net = self.load()
        return EXIT_OK, self._family_output(feasible_flows(net, budget=self.args.budget, logger=self.logger))

    def cmd_brute_force(self):
        net = self.load()
        return EXIT_OK, self._family_output(brute_force(net, budget=self.args.budget, logger=self.logger))

    def cmd_disjoint_capacity(self):
        net = self.load()
        return EXIT_OK, self.region_output(disjoint_capacity(net), "disjoint capacity")

    def _tree(self):
        tree = getattr(self.args, "tree", None)
        return [t for t in tree.split(",") if t] if tree else None

    def cmd_decide(self):
        net = self.load()
        value = parse_vector_arg(self.args.value)
        d = decide(net, value, tree=self._tree(), budget=self.args.budget,
                   branch_budget=self.args.branch_budget, logger=self.logger)
        code = EXIT_OK if d.feasible else EXIT_NEGATIVE
        if self.args.format == "json":
            return code, _dumps({"command": "decide", "feasible": d.feasible,
                                 "value": [format_rational(x) for x in d.value],
                                 "witness": _flow_dict(d.witness)})
        rows = [["verdict", "feasible" if d.feasible else "infeasible"]]
        if d.witness is not None:
            rows.append(["arc"] + [f"x{i + 1}" for i in range(net.k)])
            rows += [[a] + [rational_str(x) for x in v] for a, v in d.witness.items()]
        return code, _csv(rows)

    def cmd_cycle_basis(self):
        net = self.load()
        system = cycle_basis(net, self._tree())
        names = [f"c{i + 1}" for i in range(len(system.basis))]
        chords = [c.chord for c in system.basis]
        membership = system.membership(net.arc_ids())
        if self.args.format == "json":
            ccs = cycle_constraints(net, system, build_pseudoflow(net, [0] * net.k, system))
            return EXIT_OK, _dumps({
                "command": "cycle-basis",
                "tree": list(system.tree),
                "cycles": [{"name": n, "chord": c.chord, "arcs": c.describe()} for n, c in zip(names, system.basis)],
                "return_cycle": system.return_cycle.describe() if system.return_cycle else None,
                "membership": {a: list(s) for a, s in membership.items()},
                "groups": [g.describe(names) for g in ccs.groups()],
            })
        rows = [["arc"] + [f"{n}[{c}]" for n, c in zip(names, chords)] + ["tree"]]
        tree = set(system.tree)
        for a, signs in membership.items():
            rows.append([a] + list(signs) + [int(a in tree)])
        return EXIT_OK, _csv(rows)

    def cmd_ratio_max(self):
        net = self.load()
        prob = RatioProblem(
            net,
            parse_vector_arg(self.args.ratio),
            parse_rational(self.args.upper),
            parse_rational(self.args.eps),
            integer_mode=bool(self.args.integer),
            reducible_declared=self.doc.reducible_declared or self.args.reducible,
        )
        solve = int_ratio_max if prob.integer_mode else ratio_max
        res = solve(prob, budget=self.args.budget, branch_budget=self.args.branch_budget, logger=self.logger)
        if self.args.witness:
            Path(self.args.witness).write_text(json.dumps(_flow_dict(res.witness), indent=2, sort_keys=True) + "\n")
        if self.args.format == "json":
            return EXIT_OK, _dumps({"command": "ratio-max", "multiple": format_rational(res.multiple),
                                    "iterations": res.iterations, "upper": format_rational(res.upper),
                                    "integer": prob.integer_mode, "reducibility": res.reducibility,
                                    "witness": _flow_dict(res.witness)})
        rows = [["multiple", "iterations", "upper", "integer", "reducibility"],
                [rational_str(res.multiple), res.iterations, rational_str(res.upper),
                 int(prob.integer_mode), res.reducibility]]
        return EXIT_OK, _csv(rows)

    def cmd_embed(self):
        net = self.load(allow_discretize=False)
        embedded = embed_requirements(
            net,
            [s for s in self.args.sources.split(",") if s],
            [t for t in self.args.sinks.split(",") if t],
            parse_vector_arg(self.args.requirement),
            bound=self.args.bound,
        )
        return EXIT_OK, serialize_document(NetworkDocument.from_network(embedded, self.doc.flags))

    def cmd_bench(self):
        us = parse_int_list(self.args.U)
        if not us or any(u < 0 for u in us):
            raise InvalidParameterError("--U needs nonnegative integers", U=self.args.U)
        report = run_bench(us, budget=self.args.budget, logger=self.logger)
        if self.args.format == "json":
            return EXIT_OK, _dumps({"command": "bench", **report.to_dict(self.args.timings)})
        rows = report_rows_csv(report, self.args.timings)
        rows.append(["# gluing_exponent", report.gluing_exponent])
        rows.append(["# brute_exponent", report.brute_exponent])
        rows += [["# note", n] for n in report.notes]
        return EXIT_OK, _csv(rows)

    def cmd_plot(self):
        net = self.load(allow_discretize=False)
        want = ["total", "pairwise", "mutual"] if self.args.region == "all" else [self.args.region]
        panels = []
        for name in want:
            if name == "total":
                panels.append(("total capacity", total_capacity(net, self.logger)))
            elif name == "pairwise":
                panels.append(("pairwise bound", pairwise_bound(net, self.logger)))
            elif name == "disjoint":
                panels.append(("disjoint capacity", disjoint_capacity(net)))
            else:
                points_net = discretize(net) if net.variant == POLYGONS else net
                family = feasible_flows(points_net, budget=self.args.budget, logger=self.logger)
                panels.append(("feasible values", PointSet.of(net.k, family.values())))
        return EXIT_OK, render_svg(panels, fill=self.args.fill, edge=self.args.edge, grid=self.args.grid,
                                   title=Path(self.args.network).name)


def run(command: str, args, logger: JsonLogger | None = None) -> int:
    """Run one subcommand and write its artifact to --out or stdout."""
    logger = logger or JsonLogger(enable_json=bool(getattr(args, "json", False)),
                                  verbose=bool(getattr(args, "verbose", False)))
    runner = CommandRunner(args, logger)
    handler = getattr(runner, "cmd_" + command.replace("-", "_"), None)
    if handler is None:
        raise InvalidParameterError(f"unknown command {command!r}")
    code, text = handler()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    return code


def _fail(err: McflowError) -> int:
    print(json.dumps(err.to_dict(), sort_keys=True, default=str), file=sys.stderr)
    return err.exit_code


def main(argv=None) -> int:
    """CLI entry point. Parses args, applies config, and dispatches the subcommand."""
    ap = build_arg_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        ap.print_help()
        return 0

    args = ap.parse_args(argv)
    if args.version:
        print(VERSION)
        return 0

    # CLI arguments take precedence; only unset fields are filled from TOML, then built-ins.
    try:
        cfg = load_toml_config(args.config) if getattr(args, "config", None) else {}
    except (OSError, ValueError, RuntimeError) as e:
        return _fail(InvalidParameterError(f"cannot load config {args.config}: {e}", path=args.config))
    try:
        apply_config(args, cfg)
    except McflowError as e:
        return _fail(e)

    # Print resolved configuration and exit (does not read a network).
    if args.print_config:
        print(json.dumps(resolved_config_dict(args), indent=2, sort_keys=True))
        return 0

    if not args.command:
        ap.print_help(sys.stderr)
        return EXIT_INPUT

    logger = JsonLogger(enable_json=bool(args.json), verbose=bool(args.verbose))
    try:
        return run(args.command, args, logger)
    except McflowError as e:
        return _fail(e)
    except ValueError as e:
        # malformed vectors / rationals on the command line
        return _fail(InvalidParameterError(str(e)))
