"""Command-line front end.

Subcommands read JSON channel/state descriptors, run the roof solver and
the brute-force oracle, and emit deterministic JSON reports (floats with
17 significant digits) or CSV sweeps.

Exit codes are a stable contract: 0 success, 2 parse error, 3 map not
positive, 4 invalid state, 5 rank too high, 1 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
import time

import numpy as np

from . import __version__
from .bipartite import (
    coefficient_four_vector,
    concurrence_2xn,
    eof_from_concurrence,
    induced_map,
)
from .channels import POSITIVITY_TOL, is_completely_positive, is_positive
from .descriptors import (
    bipartite_from_dict,
    channel_from_dict,
    channel_to_dict,
    load_json,
    state_from_dict,
    complex_pairs,
)
from .exceptions import (
    InvalidStateError,
    NotPositiveMapError,
    QConcurrenceError,
    RankTooHighError,
)
from .minkowski import TAU_CAUSAL
from .oracle import OracleConfig, brute_force_concurrence, two_point_sufficiency
from .roof import TOL_PSD, concurrence, optimal_decomposition, solve_w0

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_NOT_POSITIVE = 3
EXIT_INVALID_STATE = 4
EXIT_RANK = 5


# ---------------------------------------------------------------------------
# Deterministic JSON rendering (17 significant digits, stable field order).
# ---------------------------------------------------------------------------


def format_number(x: float) -> str:
    if not np.isfinite(x):
        raise ValueError(f"non-finite number in report: {x}")
    return format(float(x), ".17g")


def render_json(obj, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        parts = [f"{inner}{json.dumps(str(k))}: {render_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            return "[]"
        rendered = [render_json(v, indent + 1) for v in items]
        if all(("\n" not in r) for r in rendered) and sum(len(r) for r in rendered) < 72:
            return "[" + ", ".join(rendered) + "]"
        return "[\n" + ",\n".join(inner + r for r in rendered) + "\n" + pad + "]"
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_number(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    raise TypeError(f"cannot serialize {type(obj).__name__} in a report")


# ---------------------------------------------------------------------------
# Report assembly.
# ---------------------------------------------------------------------------


def _base_report(args) -> dict:
    return {
        "tool": {"name": "qconcurrence", "version": __version__},
        "tolerances": {
            "tol_psd": args.tol_psd,
            "tol_causal": args.tol_causal,
            "positivity_tol": POSITIVITY_TOL,
        },
    }


def _roof_fields(sol) -> dict:
    return {
        "w0": sol.w0,
        "psd_interval": list(sol.psd_interval),
        "flat": sol.flat,
        "kernel": [v.as_array().tolist() for v in sol.kernel_basis],
        "n": sol.n.as_array().tolist(),
        "solver_method": sol.method,
    }


def _solve_checked(phi, args):
    if not is_positive(phi):
        raise NotPositiveMapError("the channel is not a positive map")
    return solve_w0(
        phi, tol_psd=args.tol_psd, tau_causal=args.tol_causal, check_positive=False
    )


def _oracle_config(args) -> OracleConfig:
    return OracleConfig(
        grid_resolution=getattr(args, "grid_resolution", 256),
        refine_iterations=getattr(args, "refine_iterations", 200),
        n_points=getattr(args, "n_points", 2),
        restarts=getattr(args, "restarts", 16),
        seed=args.seed,
    )


def cmd_channel_info(args) -> str:
    phi = channel_from_dict(load_json(args.channel))
    sol = _solve_checked(phi, args)
    report = _base_report(args)
    report["channel"] = channel_to_dict(phi)
    report["positive"] = True
    report["completely_positive"] = is_completely_positive(phi)
    report.update(_roof_fields(sol))
    return render_json(report)


def cmd_concurrence(args) -> str:
    phi = channel_from_dict(load_json(args.channel))
    state = state_from_dict(load_json(args.state))
    sol = _solve_checked(phi, args)
    value = concurrence(phi, state, solution=sol)
    report = _base_report(args)
    report["channel"] = channel_to_dict(phi)
    report["state"] = {"bloch": state.x.tolist()}
    report["positive"] = True
    report["completely_positive"] = is_completely_positive(phi)
    report.update(_roof_fields(sol))
    report["concurrence"] = value
    if args.decompose:
        dec = optimal_decomposition(phi, state, solution=sol)
        report["decomposition"] = {
            "weights": dec.weights.tolist(),
            "pure_states": dec.pures.tolist(),
            "degenerate_leaf": dec.degenerate_leaf,
        }
    if args.oracle:
        cfg = _oracle_config(args)
        oracle_value = brute_force_concurrence(phi, state, cfg, check_positive=False)
        report["oracle"] = {
            "value": oracle_value,
            "gap": oracle_value - value,
            "config": {
                "grid_resolution": cfg.grid_resolution,
                "refine_iterations": cfg.refine_iterations,
                "n_points": cfg.n_points,
                "restarts": cfg.restarts,
                "seed": cfg.seed,
            },
        }
    return render_json(report)


def cmd_reduce(args) -> str:
    state = bipartite_from_dict(load_json(args.bipartite))
    im = induced_map(state)
    coeff = coefficient_four_vector(state, im.basis)
    report = _base_report(args)
    report["dims"] = list(state.dims)
    report["rank"] = state.rank()
    report["support_basis"] = complex_pairs(im.basis)
    report["d_blocks"] = complex_pairs(im.d_blocks)
    report["induced_channel"] = channel_to_dict(im.map)
    report["completely_positive"] = is_completely_positive(im.map)
    report["coefficient_bloch"] = coeff.x.tolist()
    if args.then_concurrence:
        sol = solve_w0(
            im.map, tol_psd=args.tol_psd, tau_causal=args.tol_causal, check_positive=False
        )
        value = concurrence_2xn(state, solution=sol)
        report.update(_roof_fields(sol))
        report["concurrence"] = value
        report["eof"] = {
            "value": eof_from_concurrence(value),
            "exact": bool(sol.flat or state.rank() <= 1),
        }
    return render_json(report)


def _parse_range(spec: str) -> tuple[str, np.ndarray]:
    try:
        name, rest = spec.split("=", 1)
        start_s, stop_s, count_s = rest.split(":")
        values = np.linspace(float(start_s), float(stop_s), int(count_s))
    except Exception as exc:
        raise ValueError(
            f"range {spec!r} must have the form NAME=START:STOP:COUNT"
        ) from exc
    return name, values


def _substitute(node, mapping: dict):
    if isinstance(node, dict):
        return {k: _substitute(v, mapping) for k, v in node.items()}
    if isinstance(node, list):
        return [_substitute(v, mapping) for v in node]
    if isinstance(node, str) and node in mapping:
        return mapping[node]
    return node


def _template_placeholders(node, names: set) -> set:
    found = set()
    if isinstance(node, dict):
        for v in node.values():
            found |= _template_placeholders(v, names)
    elif isinstance(node, list):
        for v in node:
            found |= _template_placeholders(v, names)
    elif isinstance(node, str) and node in names:
        found.add(node)
    return found


def cmd_sweep(args) -> str:
    template = load_json(args.template)
    if not args.range:
        raise ValueError("sweep needs at least one --range NAME=START:STOP:COUNT")
    ranges = dict(_parse_range(spec) for spec in args.range)
    names = sorted(ranges)
    used = _template_placeholders(template, set(names))
    missing = [n for n in names if n not in used]
    if missing:
        raise ValueError(f"template has no placeholder for range parameter(s) {missing}")
    state = state_from_dict(load_json(args.state)) if args.state else None

    header = list(names) + ["w0", "flat"]
    if state is not None:
        header.append("concurrence")
    header.append("error")

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for combo in itertools.product(*(ranges[n] for n in names)):
        row = [format_number(v) for v in combo]
        mapping = dict(zip(names, (float(v) for v in combo)))
        try:
            phi = channel_from_dict(_substitute(template, mapping))
            if not is_positive(phi):
                raise NotPositiveMapError("not positive")
            sol = solve_w0(
                phi, tol_psd=args.tol_psd, tau_causal=args.tol_causal, check_positive=False
            )
            row += [format_number(sol.w0), "true" if sol.flat else "false"]
            if state is not None:
                row.append(format_number(concurrence(phi, state, solution=sol)))
            row.append("")
        except NotPositiveMapError:
            row += _error_cells(state, EXIT_NOT_POSITIVE)
        except InvalidStateError:
            row += _error_cells(state, EXIT_INVALID_STATE)
        except (ValueError, QConcurrenceError):
            row += _error_cells(state, EXIT_INTERNAL)
        writer.writerow(row)

    text = buffer.getvalue()
    if args.csv and args.csv != "-":
        with open(args.csv, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        return f"wrote {args.csv}"
    return text.rstrip("\n")


def _error_cells(state, code: int) -> list:
    cells = ["", ""]
    if state is not None:
        cells.append("")
    cells.append(str(code))
    return cells


def cmd_oracle(args) -> str:
    phi = channel_from_dict(load_json(args.channel))
    state = state_from_dict(load_json(args.state))
    sol = _solve_checked(phi, args)
    roof_value = concurrence(phi, state, solution=sol)
    cfg = _oracle_config(args)
    oracle_value = brute_force_concurrence(phi, state, cfg, check_positive=False)
    report = _base_report(args)
    report["channel"] = channel_to_dict(phi)
    report["state"] = {"bloch": state.x.tolist()}
    report["roof_concurrence"] = roof_value
    report["oracle_value"] = oracle_value
    report["gap"] = oracle_value - roof_value
    report["config"] = {
        "grid_resolution": cfg.grid_resolution,
        "refine_iterations": cfg.refine_iterations,
        "n_points": cfg.n_points,
        "restarts": cfg.restarts,
        "seed": cfg.seed,
    }
    if args.sufficiency:
        suff = two_point_sufficiency(phi, state, cfg, check_positive=False)
        report["sufficiency"] = {
            "minima": {str(k): v for k, v in sorted(suff.minima.items())},
            "two_point_sufficient": suff.two_point_sufficient,
            "tol": suff.tol,
        }
    return render_json(report)


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--tol-psd",
        type=float,
        default=TOL_PSD,
        help=f"PSD tolerance relative to |Q0| (default {TOL_PSD})",
    )
    common.add_argument(
        "--tol-causal",
        type=float,
        default=TAU_CAUSAL,
        help=f"causal classification tolerance (default {TAU_CAUSAL})",
    )
    common.add_argument(
        "--seed", type=int, default=123456789, help="oracle seed (default 123456789)"
    )
    common.add_argument(
        "--timing",
        action="store_true",
        help="append wall-clock timing to the report (off by default so reports are reproducible)",
    )

    parser = argparse.ArgumentParser(
        prog="qconc",
        description="Concurrence of stochastic 1-qubit maps and rank-2 states of 2 x n systems.",
    )
    parser.add_argument("--version", action="version", version=f"qconcurrence {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("channel-info", parents=[common], help="roof data of a channel")
    p.add_argument("channel", help="channel descriptor JSON file")
    p.set_defaults(handler=cmd_channel_info)

    p = sub.add_parser("concurrence", parents=[common], help="concurrence at a state")
    p.add_argument("channel", help="channel descriptor JSON file")
    p.add_argument("state", help="state descriptor JSON file")
    p.add_argument("--decompose", action="store_true", help="include the optimal two-component decomposition")
    p.add_argument("--oracle", action="store_true", help="include the brute-force value and gap")
    p.set_defaults(handler=cmd_concurrence)

    p = sub.add_parser("reduce", parents=[common], help="reduce a rank-2 bipartite state")
    p.add_argument("bipartite", help="bipartite state descriptor JSON file")
    p.add_argument(
        "--then-concurrence",
        action="store_true",
        help="also compute concurrence and the entanglement-of-formation value/bound",
    )
    p.set_defaults(handler=cmd_reduce)

    p = sub.add_parser("sweep", parents=[common], help="CSV parameter sweep over a channel template")
    p.add_argument("template", help="channel template JSON; strings equal to a range name are substituted")
    p.add_argument(
        "--range",
        action="append",
        default=[],
        metavar="NAME=START:STOP:COUNT",
        help="inclusive linspace for a template parameter (repeatable)",
    )
    p.add_argument("--state", help="optional state descriptor JSON; adds a concurrence column")
    p.add_argument("--csv", help="output path ('-' or omitted: stdout)")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("oracle", parents=[common], help="brute-force decomposition search")
    p.add_argument("channel", help="channel descriptor JSON file")
    p.add_argument("state", help="state descriptor JSON file")
    p.add_argument("--grid-resolution", type=int, default=256)
    p.add_argument("--refine-iterations", type=int, default=200)
    p.add_argument("--n-points", type=int, default=2)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--sufficiency", action="store_true", help="compare 2-, 3- and 4-point minima")
    p.set_defaults(handler=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        text = args.handler(args)
        if args.timing:
            elapsed = time.perf_counter() - started
            if text.startswith("{"):
                text = text[: text.rfind("\n}")] + f',\n  "timing_s": {format_number(elapsed)}\n}}'
            else:
                text += f"\n# timing_s={format_number(elapsed)}"
    except NotPositiveMapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_POSITIVE
    except InvalidStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_STATE
    except RankTooHighError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANK
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except QConcurrenceError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    print(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
