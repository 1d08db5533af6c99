"""Command-line front end: ``convseq <command> ...`` or ``convseq run config.json``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Sequence

import jsonschema

from .analysis import limit_report
from .constants import TARGETS, run_constant
from .errors import ConfigError, ConvseqError, LengthError, ParamError
from .numeric import format_coeff, from_json, to_coeff, to_json, to_plot_value
from .recurrence import DIRECT, SERIES, RecurrenceProblem, compute_a, compute_alpha
from .sequences import SequenceSpec, catalog_b, spec_from_json
from .solver import build_system, default_roots, solve_system, target_rhs

COMMANDS = ("alpha", "a", "limits", "solve", "constants", "plotdata")

# preset m = 1 orbit kernels for --figure; N is the default horizon
FIGURES = {
    1: {"b": [-3, 2, -1, 3], "dim": 2, "N": 200},
    2: {"b": [3, -1, 0, 2, -3], "dim": 2, "N": 200},
    3: {"b": [3, 1, -3, -2, 2], "dim": 2, "N": 200},
    4: {"b": [2, 0, 0, -3, 2], "dim": 2, "N": 75},
    5: {"b": {"kind": "catalog", "name": "sine"}, "dim": 2, "N": 150},
    6: {"b": {"kind": "catalog", "name": "fibonacci_phi"}, "dim": 2, "N": 150},
    7: {"b": [3, 0, -3, -2, 3], "dim": 3, "N": 200},
}

_INTEGER = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": "^-?[0-9]+$"}]}

_NUMBER = {
    "oneOf": [
        {"type": "number"},
        {"type": "string"},
        {"type": "object", "properties": {"num": _INTEGER, "den": _INTEGER},
         "required": ["num", "den"], "additionalProperties": False},
        {"type": "object", "properties": {"re": {"type": "number"}, "im": {"type": "number"}},
         "required": ["re", "im"], "additionalProperties": False},
    ]
}

_SPEC = {
    "oneOf": [
        {"type": "array", "items": _NUMBER, "minItems": 1},
        {"type": "object",
         "properties": {"kind": {"const": "finite"}, "values": {"type": "array", "items": _NUMBER, "minItems": 1}},
         "required": ["kind", "values"], "additionalProperties": False},
        {"type": "object",
         "properties": {"kind": {"const": "catalog"}, "name": {"type": "string"}, "params": {"type": "object"}},
         "required": ["kind", "name"], "additionalProperties": False},
    ]
}

_COMMAND = {
    "oneOf": [
        {"enum": list(COMMANDS)},
        {"type": "object",
         "properties": {
             "name": {"enum": list(COMMANDS)},
             "limit": _NUMBER,
             "roots": {"type": "array", "items": _NUMBER},
             "L_vec": {"type": "array", "items": _NUMBER},
             "target": {"enum": list(TARGETS)},
             "a": _NUMBER,
             "dim": {"enum": [2, 3]},
             "k": {"type": "integer", "minimum": 0},
             "window": {"type": "integer", "minimum": 2},
         },
         "required": ["name"], "additionalProperties": False},
    ]
}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "b": _SPEC,
        "m": {"type": "integer", "minimum": 1},
        "N": {"type": "integer", "minimum": 0},
        "initials": {"type": "array", "items": _NUMBER},
        "route": {"enum": [DIRECT, SERIES]},
        "commands": {"type": "array", "items": _COMMAND, "minItems": 1},
        "output": {
            "type": "object",
            "properties": {"path": {"type": "string"}, "format": {"enum": ["json", "csv"]}},
            "additionalProperties": False,
        },
    },
    "required": ["commands"],
    "additionalProperties": False,
}


def validate_config(config) -> dict:
    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {exc.message}") from None
    return config


def plot_data(alpha_row: Sequence, dim: int, N: int) -> list[tuple]:
    """Rows (n, x(n), x(n+1)[, x(n+2)]) for n = 0..N."""
    if dim not in (2, 3):
        raise ParamError("dim must be 2 or 3")
    if len(alpha_row) < N + dim:
        raise LengthError(f"need {N + dim} values for N={N}, dim={dim}; got {len(alpha_row)}")
    return [(n, *alpha_row[n:n + dim]) for n in range(N + 1)]


# ---------------------------------------------------------------- rendering

def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _alpha_outputs(b, m, N, route):
    table = compute_alpha(RecurrenceProblem(b, m, N), route=route)
    return (
        {"m": m, "N": N, "route": route,
         "alpha": [[to_json(x) for x in row] for row in table.rows]},
        table.to_csv(),
    )


def _a_outputs(b, m, N, initials, route):
    if initials is None:
        raise ParamError("command 'a' needs initials")
    values = compute_a(RecurrenceProblem(b, m, N), initials)
    return {"m": m, "N": N, "a": [to_json(x) for x in values]}, ",".join(map(format_coeff, values)) + "\n"


def _limits_outputs(b, m, N, window):
    report = limit_report(b, m, N=N, window=window)
    data = report.to_json()
    rows = [["k", "closed_form", "numeric", "converged", "radius_M", "radius_G"]]
    for k in range(m):
        num = data["numeric_limits"][k]
        rows.append([k, _scalar(data["closed_limits"][k]), _scalar(num["value"]), _scalar(num["converged"]),
                     _scalar(data["radius_M"][k]), _scalar(data["radius_G"][k])])
    return data, _csv(rows)


def _scalar(v):
    if isinstance(v, dict) and ("num" in v or "re" in v):
        return format_coeff(from_json(v))
    if isinstance(v, dict):
        return v.get("reason", json.dumps(v, sort_keys=True))
    if isinstance(v, bool):
        return str(v).lower()
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else str(v)


def _solve_outputs(b, m, limit, roots, L_vec):
    if limit is None:
        raise ParamError("command 'solve' needs a target limit")
    roots = default_roots(b, m) if roots is None else roots
    report = solve_system(build_system(b, m, roots, L_vec, target_rhs(b, m, to_coeff(limit))))
    rows = [["row", *[f"c{j}" for j in range(m)], "rhs"]]
    for i, (r, v) in enumerate(zip(report.matrix, report.rhs)):
        rows.append([i, *map(format_coeff, r), format_coeff(v)])
    rows.append(["determinant", format_coeff(report.determinant)])
    rows.append(["determinant_closed_form", format_coeff(report.determinant_closed_form)])
    rows.append(["solution", *map(format_coeff, report.solution)])
    return report.to_json(), _csv(rows)


def _constants_outputs(target, a, N):
    run = run_constant(target, a, N)
    rows = [["n", "alpha", "b_weighted"]]
    rows += [[n, format_coeff(x), format_coeff(y)] for n, (x, y) in enumerate(zip(run.alpha_partial, run.b_weighted_tail))]
    return run.to_json(), _csv(rows)


def _plot_outputs(b, m, N, dim, k):
    table = compute_alpha(RecurrenceProblem(b, m, max(N + dim - 1, m)))
    rows = plot_data(table.row(k), dim, N)
    header = ["n", "x", "y", "z"][: dim + 1]
    data = {"dim": dim, "k": k, "N": N, "columns": header,
            "rows": [[r[0], *(to_plot_value(v) for v in r[1:])] for r in rows]}
    return data, _csv([header, *data["rows"]])


def execute(command: str, opts: dict, b: SequenceSpec | None, m: int, N: int, initials, route):
    """Run one command; returns (json_obj, csv_text)."""
    if command == "constants":
        return _constants_outputs(opts.get("target", "zeta_direct"), opts.get("a"), N)
    if b is None:
        raise ConfigError(f"command {command!r} needs 'b'")
    if command == "alpha":
        return _alpha_outputs(b, m, N, route)
    if command == "a":
        return _a_outputs(b, m, N, initials, route)
    if command == "limits":
        return _limits_outputs(b, m, N, opts.get("window", 8))
    if command == "solve":
        return _solve_outputs(b, m, opts.get("limit"), opts.get("roots"), opts.get("L_vec"))
    if command == "plotdata":
        return _plot_outputs(b, m, N, opts.get("dim", 2), opts.get("k", 0))
    raise ConfigError(f"unknown command {command!r}")


def _emit(name: str, payload: tuple, fmt: str, out_dir: str | None, out_file: str | None = None) -> None:
    data, text = payload
    body = _dumps(data) if fmt == "json" else text
    if out_file:
        Path(out_file).write_text(body)
    elif out_dir:
        path = Path(out_dir)
        path.mkdir(parents=True, exist_ok=True)
        (path / f"{name}.{fmt}").write_text(body)
    else:
        sys.stdout.write(body)


def run_config(config: dict) -> None:
    validate_config(config)
    b = spec_from_json(config["b"]) if "b" in config else None
    m = config.get("m", 1)
    N = config.get("N", 20)
    initials = [from_json(v) for v in config["initials"]] if "initials" in config else None
    route = config.get("route", DIRECT)
    output = config.get("output", {})
    fmt = output.get("format", "csv")
    for item in config["commands"]:
        opts = {"name": item} if isinstance(item, str) else dict(item)
        name = opts.pop("name")
        for key in ("limit", "a"):
            if key in opts:
                opts[key] = from_json(opts[key])
        for key in ("roots", "L_vec"):
            if key in opts:
                opts[key] = [from_json(v) for v in opts[key]]
        try:
            payload = execute(name, opts, b, m, N, initials, route)
        except ConvseqError as exc:
            raise type(exc)(f"{name}: {exc}") from None
        _emit(name, payload, fmt, output.get("path"))


# ---------------------------------------------------------------- argparse

def _parse_b(text: str, params: list[str]) -> SequenceSpec:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        kv = {}
        for p in params:
            key, _, val = p.partition("=")
            kv[key] = val
        if "id" in kv:
            kv["id"] = int(kv["id"])
        if "k" in kv:
            kv["k"] = int(kv["k"])
        return catalog_b(text, kv)
    return spec_from_json(obj)


def _parse_values(text: str | None):
    if text is None:
        return None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        obj = [v for v in text.split(",") if v]
    if not isinstance(obj, list):
        obj = [obj]
    return [from_json(v) for v in obj]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="convseq", description="Convolution-like recurrences and their alpha-sequences.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a JSON config")
    p.add_argument("config")

    def common(p, need_b=True, default_n=20):
        p.add_argument("-b", required=need_b, help="JSON list, JSON spec object or catalog name")
        p.add_argument("-p", "--param", action="append", default=[], help="catalog parameter key=value")
        p.add_argument("-m", type=int, default=1)
        p.add_argument("-n", type=int, default=default_n, dest="N")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("-o", "--out", help="output file (default stdout)")

    p = sub.add_parser("alpha", help="alpha-table")
    common(p)
    p.add_argument("--route", choices=[DIRECT, SERIES], default=DIRECT)

    p = sub.add_parser("a", help="sequence a from initial values")
    common(p)
    p.add_argument("--initials", required=True, help="JSON list or comma list")

    p = sub.add_parser("limits", help="limits and convergence diagnostics")
    common(p, default_n=400)
    p.add_argument("--window", type=int, default=8)

    p = sub.add_parser("solve", help="initial values for a target limit")
    common(p)
    p.add_argument("--limit", required=True)
    p.add_argument("--roots", help="JSON list of roots (default: smallest-modulus roots)")
    p.add_argument("--L-vec", dest="L_vec", help="JSON list of L_j (default zeros)")

    p = sub.add_parser("constants", help="partial sums for zeta, 1/zeta, pi, e")
    p.add_argument("--target", choices=TARGETS, required=True)
    p.add_argument("--a-re", type=float)
    p.add_argument("--a-im", type=float, default=0.0)
    p.add_argument("--a", dest="a_exact", help="exact exponent such as 2 or 3/2")
    p.add_argument("-n", type=int, default=100, dest="N")
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("-o", "--out")

    p = sub.add_parser("plotdata", help="orbit points (x(n), x(n+1)[, x(n+2)])")
    common(p, need_b=False, default_n=None)
    p.add_argument("--dim", type=int, choices=[2, 3])
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--figure", type=int, choices=sorted(FIGURES))
    return parser


def _dispatch(args) -> None:
    if args.command == "run":
        try:
            config = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        run_config(config)
        return
    if args.command == "constants":
        if args.a_exact is not None:
            a = to_coeff(args.a_exact)
        elif args.a_re is not None:
            a = complex(args.a_re, args.a_im)
        else:
            a = None
        payload = execute("constants", {"target": args.target, "a": a}, None, 1, args.N, None, DIRECT)
        _emit("constants", payload, args.format, None, args.out)
        return

    opts = {}
    if args.command == "plotdata":
        fig = FIGURES.get(args.figure) if args.figure else None
        if fig is None and args.b is None:
            raise ParamError("plotdata needs -b or --figure")
        b = spec_from_json(fig["b"]) if fig and args.b is None else _parse_b(args.b, args.param)
        args.N = args.N if args.N is not None else (fig["N"] if fig else 50)
        opts = {"dim": args.dim or (fig["dim"] if fig else 2), "k": args.k}
    else:
        b = _parse_b(args.b, args.param)
    if args.command == "limits":
        opts["window"] = args.window
    if args.command == "solve":
        opts = {"limit": from_json(args.limit) if not args.limit.startswith("{") else from_json(json.loads(args.limit)),
                "roots": _parse_values(args.roots), "L_vec": _parse_values(args.L_vec)}
    initials = _parse_values(getattr(args, "initials", None))
    route = getattr(args, "route", DIRECT)
    payload = execute(args.command, opts, b, args.m, args.N, initials, route)
    _emit(args.command, payload, args.format, None, args.out)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _dispatch(args)
    except ConvseqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except BrokenPipeError:
        # downstream reader (e.g. head) closed early; not an error
        sys.stdout = open(os.devnull, "w")
        return 0
    except Exception as exc:  # noqa: BLE001 - report, don't traceback
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
