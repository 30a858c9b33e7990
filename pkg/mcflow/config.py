from __future__ import annotations

import argparse
from argparse import RawDescriptionHelpFormatter

try:
    import tomllib  # py3.11+
except Exception:  # pragma: no cover
    tomllib = None
    try:
        import tomli as _tomli  # type: ignore
    except Exception:
        _tomli = None

from .constants import (
    DEFAULT_BRANCH_BUDGET,
    DEFAULT_BUDGET,
    DEFAULT_EDGE,
    DEFAULT_EMBED_BOUND,
    DEFAULT_EPS,
    DEFAULT_FILL,
    DEFAULT_GRID,
    DEFAULT_UPPER,
    USAGE_EXAMPLES,
)
from .errors import InvalidParameterError

FORMATS = ("csv", "json", "svg")

COMMANDS = {
    "validate": "Parse a network document and print diagnostics.",
    "cuts": "List every s-t cut with its forward and backward arcs.",
    "total-capacity": "Intersection of all cut capacities (outer bound).",
    "pairwise-capacity": "Pairwise capacity of two cuts, or the bound over all pairs.",
    "mutual-capacity": "Feasible flow values by gluing local flows (point-set capacities).",
    "brute-force": "Feasible flow values by exhaustive enumeration (oracle).",
    "disjoint-capacity": "Closed-form region of a fully disjoint network.",
    "decide": "Decide whether a flow value is feasible; exit 1 when it is not.",
    "cycle-basis": "Spanning tree and signed fundamental-cycle membership matrix.",
    "ratio-max": "Largest (integer) multiple of a commodity ratio, by bisection.",
    "embed": "Reduce one-source-per-commodity requirements to a single s-t network.",
    "bench": "Gluing versus brute-force operation counts on the chain network.",
    "plot": "Draw the regions of a 2-commodity network as SVG.",
}

NEEDS_NETWORK = set(COMMANDS) - {"bench"}


def load_toml_config(path: str) -> dict:
    """Load TOML configuration from path."""
    with open(path, "rb") as f:
        if tomllib is not None:
            return tomllib.load(f)
        if _tomli is not None:  # pragma: no cover
            return _tomli.load(f)
        raise RuntimeError("TOML support not available; install 'tomli' or use Python 3.11+")


def _get_cfg(cfg: dict, section: str, key: str, default=None):
    sec = cfg.get(section, {})
    if not isinstance(sec, dict):
        return default
    return sec.get(key, default)


def config_defaults_from(cfg: dict) -> dict:
    """Map TOML config into argparse defaults."""
    return {
        "budget": _get_cfg(cfg, "engine", "budget", DEFAULT_BUDGET),
        "branch_budget": _get_cfg(cfg, "engine", "branch_budget", DEFAULT_BRANCH_BUDGET),
        "discretize": _get_cfg(cfg, "engine", "discretize", False),
        "bound": _get_cfg(cfg, "engine", "bound", DEFAULT_EMBED_BOUND),
        "eps": str(_get_cfg(cfg, "ratio", "eps", DEFAULT_EPS)),
        "upper": str(_get_cfg(cfg, "ratio", "upper", DEFAULT_UPPER)),
        "integer": _get_cfg(cfg, "ratio", "integer", False),
        "format": _get_cfg(cfg, "output", "format", "csv"),
        "out": _get_cfg(cfg, "output", "out", None),
        "fill": _get_cfg(cfg, "output", "fill", DEFAULT_FILL),
        "edge": _get_cfg(cfg, "output", "edge", DEFAULT_EDGE),
        "grid": _get_cfg(cfg, "output", "grid", DEFAULT_GRID),
        "verbose": _get_cfg(cfg, "logging", "verbose", False),
        "json": _get_cfg(cfg, "logging", "json", False),
    }


def apply_config(args, cfg: dict) -> None:
    """Backfill options left unset on the command line (CLI > TOML > built-in)."""
    for k, v in config_defaults_from(cfg).items():
        if getattr(args, k, None) in (None, ""):
            setattr(args, k, v)
    if args.format not in FORMATS:
        raise InvalidParameterError(f"unknown output format {args.format!r}", choices=list(FORMATS))
    for key in ("budget", "branch_budget", "bound"):
        val = getattr(args, key)
        if isinstance(val, bool) or not isinstance(val, int) or val < 0:
            raise InvalidParameterError(f"{key} must be a nonnegative integer, got {val!r}")


def resolved_config_dict(args) -> dict:
    return {
        "engine": {
            "budget": args.budget,
            "branch_budget": args.branch_budget,
            "discretize": bool(args.discretize),
            "bound": args.bound,
        },
        "ratio": {"eps": args.eps, "upper": args.upper, "integer": bool(args.integer)},
        "output": {"format": args.format, "out": args.out, "fill": args.fill, "edge": args.edge, "grid": args.grid},
        "logging": {"verbose": bool(args.verbose), "json": bool(args.json)},
    }


def _common_options() -> argparse.ArgumentParser:
    # SUPPRESS keeps unset options off the namespace so the backfill can tell them apart
    S = argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=S, help="Path to a TOML config file. CLI args override config values.")
    common.add_argument("--budget", type=int, default=S,
                        help="Maximum enumerated assignments for gluing / brute force (exit 3 beyond it).")
    common.add_argument("--branch-budget", dest="branch_budget", type=int, default=S,
                        help="Maximum polygon-piece branches explored by decide.")
    common.add_argument("--discretize", dest="discretize", action="store_true", default=S,
                        help="Replace polygonal capacities by their integer points before enumerating.")
    common.add_argument("--no-discretize", dest="discretize", action="store_false", default=S,
                        help="Keep polygonal capacities as given.")
    common.add_argument("--format", choices=FORMATS, default=S, help="Output format (default: csv).")
    common.add_argument("-o", "--out", default=S, help="Write the artifact to this path instead of stdout.")
    common.add_argument("--verbose", dest="verbose", action="store_true", default=S,
                        help="Verbose logging (fold steps, ratio checks, pruned branches).")
    common.add_argument("--no-verbose", dest="verbose", action="store_false", default=S, help="Disable verbose logging.")
    json_group = common.add_mutually_exclusive_group()
    json_group.add_argument("--json", dest="json", action="store_true", default=S, help="Emit JSON log events.")
    json_group.add_argument("--no-json", dest="json", action="store_false", default=S, help="Disable JSON log output.")
    return common


def build_arg_parser() -> argparse.ArgumentParser:
    """Construct the CLI argument parser: global options plus one subcommand per operation."""
    S = argparse.SUPPRESS
    common = _common_options()
    ap = argparse.ArgumentParser(
        prog="multicommodity-flow",
        description="Feasible flow regions of k-commodity networks with vector capacities.",
        epilog=USAGE_EXAMPLES,
        formatter_class=RawDescriptionHelpFormatter,
        parents=[common],
    )
    ap.add_argument("--print-config", action="store_true", help="Print the resolved configuration and exit.")
    ap.add_argument("--version", action="store_true", help="Print version and exit.")
    sub = ap.add_subparsers(dest="command", metavar="COMMAND")

    parsers = {}
    for name, text in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=text, description=text)
        if name in NEEDS_NETWORK:
            sp.add_argument("network", help="Network document (JSON).")
        parsers[name] = sp

    parsers["pairwise-capacity"].add_argument("--cut-a", dest="cut_a", type=int,
                                              help="Counter index of the first cut (see `cuts`).")
    parsers["pairwise-capacity"].add_argument("--cut-b", dest="cut_b", type=int,
                                              help="Counter index of the second cut.")
    parsers["mutual-capacity"].add_argument("--realize", action="store_true",
                                            help="Also print one full flow per feasible value.")
    parsers["brute-force"].add_argument("--realize", action="store_true",
                                        help="Also print one full flow per feasible value.")
    parsers["decide"].add_argument("--value", required=True, help='Flow value, e.g. "2,1" or "3/2,1".')
    parsers["cycle-basis"].add_argument("--tree", help="Comma-separated arc ids of the spanning tree to use.")
    parsers["decide"].add_argument("--tree", help="Comma-separated arc ids of the spanning tree to use.")

    rm = parsers["ratio-max"]
    rm.add_argument("--ratio", required=True, help='Commodity ratio R, e.g. "2/1,1/1".')
    rm.add_argument("--upper", default=S, help="Initial overestimate B+ of the multiple (default: 8).")
    rm.add_argument("--eps", default=S, help="Precision epsilon as p/q (default: 1/8).")
    rm.add_argument("--integer", dest="integer", action="store_true", default=S,
                    help="Integer ratio search (needs eps < 1/2).")
    rm.add_argument("--no-integer", dest="integer", action="store_false", default=S, help="Rational ratio search.")
    rm.add_argument("--reducible", action="store_true",
                    help="Trust capacities to be reducible when they cannot be certified.")
    rm.add_argument("--witness", help="Write the witness flow (JSON) to this path.")

    em = parsers["embed"]
    em.add_argument("--sources", required=True, help="One source node per commodity, comma-separated.")
    em.add_argument("--sinks", required=True, help="One sink node per commodity, comma-separated.")
    em.add_argument("--requirement", required=True, help='Requirement vector R, e.g. "1,1".')
    em.add_argument("--bound", type=int, default=S, help="Box bound B standing in for uncapacitated arcs.")

    b = parsers["bench"]
    b.add_argument("--chain", action="store_true", required=True, help="Run the three-arc chain benchmark.")
    b.add_argument("--U", dest="U", default="1,2,4,8", help="Comma-separated values of U (default: 1,2,4,8).")
    b.add_argument("--timings", action="store_true", help="Include wall-clock seconds (not deterministic).")

    p = parsers["plot"]
    p.add_argument("--region", choices=("total", "pairwise", "mutual", "disjoint", "all"), default="all",
                   help="Which region to draw (default: total, pairwise and mutual side by side).")
    p.add_argument("--fill", default=S, help="Fill colour for a single region.")
    p.add_argument("--edge", default=S, help="Edge and axis colour.")
    p.add_argument("--grid", default=S, help="Integer grid colour.")
    return ap
