"""Batch command line front end.

Usage::

    qgid COMMAND [REQUEST] [flags]

``COMMAND`` is one of ``analyze``, ``threshold``, ``split``, ``sweep``,
``precheck``.  ``REQUEST`` is an optional JSON request file (``-`` for
stdin); flags override its fields.  A request looks like::

    {"schema": "qgid-request/1",
     "spec": {"family": "ml_squared", "params": {"alpha": 0.75}},
     "lambda": 0.3, "order": 50, "tol": 1e-9, "semigroup": "geometric"}

LST descriptions use ``{"family": name, "params": {...}}`` plus ``"inner"``
(for ``shift`` and ``scale_arg``) or ``"parts"`` (for ``convolution``).
Families and parameters:

=================  ==========================  ===========================
family             params                      transform
=================  ==========================  ===========================
degenerate         x0 >= 0                     exp(-x0 t)
exponential        theta > 0                   1/(1 + theta t)
mittag_leffler     alpha in (0,1], a > 0       1/(1 + a t^alpha)
ml_squared         alpha in (1/2,1]            (1 + t^alpha)^-2
log_mixture        (none)                      1/(1 + log(1 + t))
shift              x0 > 0; inner               exp(-x0 t) inner(t)
convolution        parts: [spec, ...]          product of parts
scale_arg          c > 0; inner                inner(c t)
=================  ==========================  ===========================

The report is JSON with a ``schema`` field, fixed key order and floats
printed with 17 significant digits, so identical requests give
byte-identical output.  Non-finite numbers are written as ``null``.

Exit codes: 0 analysis ran (whatever the verdict), 2 usage error,
3 malformed JSON, 4 unknown family, 5 parameter out of range,
6 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Any

import numpy as np

from . import __version__
from .analysis import (METHODS, gid_grid_test, nid_k_jet, nid_split, q_series, qgid_test,
                       reconstruct_check, threshold_search)
from .exceptions import BracketError, InvalidParameter, QGIDError, RangeError, UnknownFamily
from .lst import LSTSpec, from_json, poisson_mixture_pmf
from .precheck import DEFAULT_DERIVATIVES, DEFAULT_Z_GRID, mixture_precheck
from .recursions import (a_from_p, b_from_r, hansen_criterion, logconcavity_check,
                         logconvexity_check, r_from_p)
from .semigroup import SemigroupFamily
from .series import DEFAULT_TOL, MAX_DERIVATIVE_ORDER

REQUEST_SCHEMA = "qgid-request/1"
REPORT_SCHEMA = "qgid-report/1"
COMMANDS = ("analyze", "threshold", "split", "sweep", "precheck")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_JSON = 3
EXIT_FAMILY = 4
EXIT_RANGE = 5
EXIT_NUMERIC = 6

DEFAULT_CLI_ORDER = 32


class RequestError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------- formatting

def _encode(obj: Any) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return "null"
        return format(x, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if hasattr(obj, "to_dict"):
        return _encode(obj.to_dict())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """Deterministic JSON text: insertion-ordered keys, 17 significant digits."""
    return _encode(obj)


# ---------------------------------------------------------------- request parsing

def _grid(text, name) -> list[float]:
    """``lo:hi:n`` (n evenly spaced points, inclusive) or a comma list."""
    if isinstance(text, list):
        return [_number(x, name) for x in text]
    text = str(text)
    if ":" in text:
        try:
            lo, hi, n = text.split(":")
            lo, hi, n = float(lo), float(hi), int(n)
        except ValueError:
            raise RequestError(f"{name} must look like lo:hi:n, got {text!r}", EXIT_USAGE) from None
        if n < 1:
            raise RequestError(f"{name} needs at least one point", EXIT_RANGE)
        return [lo] if n == 1 else np.linspace(lo, hi, n).tolist()
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise RequestError(f"{name} must be a comma list or lo:hi:n, got {text!r}", EXIT_USAGE) from None


def _number(x, name) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise RequestError(f"{name} must be a number, got {x!r}", EXIT_RANGE)
    try:
        v = float(x)
    except ValueError:
        raise RequestError(f"{name} must be a number, got {x!r}", EXIT_USAGE) from None
    if not math.isfinite(v):
        raise RequestError(f"{name} must be finite", EXIT_RANGE)
    return v


def _positive(x, name) -> float:
    v = _number(x, name)
    if v <= 0:
        raise RequestError(f"{name} out of range (0,inf): {v!r}", EXIT_RANGE)
    return v


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise RequestError(f"malformed JSON in {what}: {exc}", EXIT_JSON) from None


def _read_request(path: str | None) -> dict:
    if path is None:
        return {}
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise RequestError(f"cannot read request {path!r}: {exc.strerror}", EXIT_USAGE) from None
    obj = _load_json(text, "request")
    if not isinstance(obj, dict):
        raise RequestError("request must be a JSON object", EXIT_JSON)
    schema = obj.get("schema", REQUEST_SCHEMA)
    if schema != REQUEST_SCHEMA:
        raise RequestError(f"unsupported request schema {schema!r} (expected {REQUEST_SCHEMA!r})", EXIT_USAGE)
    return obj


def _spec(raw) -> LSTSpec:
    if isinstance(raw, str):
        if raw.startswith("@"):
            try:
                with open(raw[1:], encoding="utf-8") as fh:
                    raw = fh.read()
            except OSError as exc:
                raise RequestError(f"cannot read spec {raw[1:]!r}: {exc.strerror}", EXIT_USAGE) from None
        raw = _load_json(raw, "spec")
    try:
        return from_json(raw)
    except UnknownFamily as exc:
        raise RequestError(str(exc), EXIT_FAMILY) from None
    except InvalidParameter as exc:
        raise RequestError(str(exc), EXIT_RANGE) from None


def build_request(command: str, args: argparse.Namespace) -> dict:
    """Merge the request file and flags, validating every field up front."""
    req = _read_request(args.request)
    overrides = {
        "spec": args.spec, "lambda": args.lam, "lambda_grid": args.lambda_grid,
        "p": args.p, "p_grid": args.p_grid, "order": args.order, "tol": args.tol,
        "semigroup": args.semigroup, "method": args.method, "lambda_lo": args.lambda_lo,
        "lambda_hi": args.lambda_hi, "iters": args.iters, "z_grid": args.z_grid, "m": args.m,
    }
    for key, value in overrides.items():
        if value is not None:
            req[key] = value
    cmd = req.get("command", command)
    if cmd != command:
        raise RequestError(f"request is for command {cmd!r}, not {command!r}", EXIT_USAGE)

    out: dict[str, Any] = {"command": command}
    if command == "precheck" and "pgf" in req:
        pgf = req["pgf"]
        if not isinstance(pgf, list) or not pgf:
            raise RequestError("pgf must be a nonempty list of numbers", EXIT_USAGE)
        out["pgf"] = [_number(x, "pgf coefficient") for x in pgf]
    else:
        if "spec" not in req:
            raise RequestError("missing LST description (--spec or 'spec' in the request)", EXIT_USAGE)
        out["spec"] = _spec(req["spec"])

    order = req.get("order", DEFAULT_CLI_ORDER)
    if isinstance(order, bool) or not isinstance(order, (int, float, str)):
        raise RequestError(f"order must be an integer, got {order!r}", EXIT_RANGE)
    try:
        order_f = float(order)
    except ValueError:
        raise RequestError(f"order must be an integer, got {order!r}", EXIT_USAGE) from None
    if not order_f.is_integer() or not 1 <= order_f <= MAX_DERIVATIVE_ORDER:
        raise RequestError(f"order out of range [1,{MAX_DERIVATIVE_ORDER}]: {order!r}", EXIT_RANGE)
    out["order"] = int(order_f)
    out["tol"] = _positive(req.get("tol", DEFAULT_TOL), "tol")
    if out["tol"] >= 1e-2:
        raise RequestError(f"tol out of range (0,1e-2): {out['tol']!r}", EXIT_RANGE)
    try:
        out["semigroup"] = SemigroupFamily.from_name(str(req.get("semigroup", "geometric")))
    except InvalidParameter as exc:
        raise RequestError(str(exc), EXIT_RANGE) from None
    method = req.get("method", "q_series")
    if method not in METHODS:
        raise RequestError(f"method must be one of {', '.join(METHODS)}, got {method!r}", EXIT_RANGE)
    out["method"] = method

    if command in ("analyze", "split") or (command == "precheck" and "spec" in out):
        if "lambda" not in req:
            raise RequestError(f"{command} needs --lambda", EXIT_USAGE)
        out["lambda"] = _positive(req["lambda"], "lambda")
    if command == "sweep":
        if "lambda_grid" not in req:
            raise RequestError("sweep needs --lambda-grid", EXIT_USAGE)
        grid = _grid(req["lambda_grid"], "lambda_grid")
        if not grid:
            raise RequestError("lambda_grid is empty", EXIT_RANGE)
        for lam in grid:
            _positive(lam, "lambda_grid entry")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise RequestError("lambda_grid must be strictly increasing", EXIT_RANGE)
        out["lambda_grid"] = grid
    if command == "split":
        if "p_grid" in req:
            ps = _grid(req["p_grid"], "p_grid")
        elif "p" in req:
            ps = [_number(req["p"], "p")]
        else:
            raise RequestError("split needs --p or --p-grid", EXIT_USAGE)
        if not ps:
            raise RequestError("p_grid is empty", EXIT_RANGE)
        for p in ps:
            try:
                out["semigroup"].check_p(p)
            except InvalidParameter as exc:
                raise RequestError(str(exc), EXIT_RANGE) from None
        out["p_grid"] = ps
    if command == "threshold":
        out["lambda_lo"] = _positive(req["lambda_lo"], "lambda_lo") if "lambda_lo" in req else None
        out["lambda_hi"] = _positive(req["lambda_hi"], "lambda_hi") if "lambda_hi" in req else None
        if out["lambda_lo"] and out["lambda_hi"] and out["lambda_hi"] <= out["lambda_lo"]:
            raise RequestError("lambda_hi must exceed lambda_lo", EXIT_RANGE)
        iters = _number(req.get("iters", 60), "iters")
        if not iters.is_integer() or not 1 <= iters <= 200:
            raise RequestError(f"iters out of range [1,200]: {iters!r}", EXIT_RANGE)
        out["iters"] = int(iters)
    if command == "precheck":
        z_grid = _grid(req["z_grid"], "z_grid") if "z_grid" in req else list(DEFAULT_Z_GRID)
        if not z_grid or any(z >= 1.0 for z in z_grid):
            raise RequestError("z_grid must be nonempty with every point in (-inf,1)", EXIT_RANGE)
        out["z_grid"] = z_grid
        m = _number(req.get("m", DEFAULT_DERIVATIVES), "m")
        if not m.is_integer() or not 1 <= m <= 40:
            raise RequestError(f"m out of range [1,40]: {m!r}", EXIT_RANGE)
        out["m"] = int(m)
    return out


def _request_echo(req: dict) -> dict:
    echo = {}
    for key, value in req.items():
        if isinstance(value, LSTSpec):
            value = value.to_json()
        elif isinstance(value, SemigroupFamily):
            value = value.kind
        echo[key] = value
    return echo


# ---------------------------------------------------------------- commands

def _analyze(req) -> tuple[dict, dict]:
    spec, lam, order, tol = req["spec"], req["lambda"], req["order"], req["tol"]
    family = req["semigroup"]
    by_q = qgid_test(spec, lam, order, "q_series", tol)
    by_a = qgid_test(spec, lam, order, "a_recursion", tol)
    agree = by_q.holds == by_a.holds and (by_q.holds or by_q.first_violation[0] == by_a.first_violation[0])
    pmf = poisson_mixture_pmf(spec, lam, order, tol)
    _, q = q_series(spec, lam, order, tol)
    a = a_from_p(pmf, tol)
    r = r_from_p(pmf, tol)
    b = b_from_r(r, tol)
    k = nid_k_jet(family, spec, lam, order, tol)
    hansen = None
    if r.nonneg:
        for mode in ("convex", "concave"):
            shape = logconvexity_check(r.values, tol) if mode == "convex" else logconcavity_check(r.values, tol)
            if shape.holds:
                hansen = hansen_criterion(r, mode, tol).to_dict()
                break
    holds = by_q.holds if family.kind == "geometric" else k.nonneg
    result = {
        "holds": holds,
        "semigroup": family.kind,
        "phi_lambda": pmf.p0,
        "c_lambda": by_q.details["c_lambda"],
        "q_series": by_q.to_dict(),
        "a_recursion": by_a.to_dict(),
        "methods_agree": bool(agree),
        "infinitely_divisible": r.nonneg,
        "pmf_log_convex": logconvexity_check(np.clip(pmf.probs, 0, None), tol).holds,
        "pmf_log_concave": logconcavity_check(np.clip(pmf.probs, 0, None), tol).holds,
        "hansen": hansen,
        "pmf": [float(x) for x in pmf.probs],
        "q": q.to_dict(),
        "a": a.to_dict(),
        "r": r.to_dict(),
        "b": b.to_dict(),
        "k_jet": k.to_dict(),
    }
    seqs = {"pmf": pmf.probs, "q": q.values, "a": a.values, "r": r.values, "b": b.values, "k": k.values}
    return result, seqs


def _threshold(req):
    lam_star = threshold_search(req["spec"], req["order"], req["lambda_lo"], req["lambda_hi"],
                                req["iters"], req["method"], req["tol"])
    return {"lambda_star": lam_star, "unbounded": math.isinf(lam_star)}, {}


def _split(req):
    spec, lam, order, tol, family = req["spec"], req["lambda"], req["order"], req["tol"], req["semigroup"]
    rows, seqs = [], {}
    for i, p in enumerate(req["p_grid"]):
        rep = nid_split(family, spec, lam, p, order, tol)
        row = {"p": p, "pgf_valid": rep.extra["pgf_valid"], "split": rep.to_dict()}
        if family.kind == "geometric":
            row["reconstruction_residual"] = reconstruct_check(spec, lam, p, order, tol)
        rows.append(row)
        seqs[f"g{i}"] = rep.values
    return {"semigroup": family.kind, "all_valid": all(r["pgf_valid"] for r in rows), "splits": rows}, seqs


def _sweep(req):
    grid = gid_grid_test(req["spec"], req["lambda_grid"], req["order"], req["method"], req["tol"])
    return grid.to_dict(), {}


def _precheck(req):
    if "pgf" in req:
        coeffs = req["pgf"]
    else:
        coeffs = poisson_mixture_pmf(req["spec"], req["lambda"], req["order"], req["tol"]).probs
    rep = mixture_precheck(coeffs, req["z_grid"], req["m"], req["tol"], req["semigroup"])
    return rep.to_dict(), {"pgf": np.asarray(coeffs)}


HANDLERS = {"analyze": _analyze, "threshold": _threshold, "split": _split,
            "sweep": _sweep, "precheck": _precheck}


def run(req: dict) -> tuple[dict, dict]:
    """Execute a validated request; returns the report and named sequences."""
    result, seqs = HANDLERS[req["command"]](req)
    report = {
        "schema": REPORT_SCHEMA,
        "version": __version__,
        "command": req["command"],
        "request": _request_echo(req),
        "result": result,
    }
    return report, seqs


def write_csv(prefix: str, seqs: dict):
    for name, values in seqs.items():
        with open(f"{prefix}_{name}.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "value"])
            for i, v in enumerate(values):
                w.writerow([i, format(float(v), ".17g")])


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qgid", description="Finite-order quasi-geometric infinite divisibility tests.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("request", nargs="?", help="JSON request file, or - for stdin")
        sp.add_argument("--spec", help="LST description as JSON text or @file")
        sp.add_argument("--order", type=int)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--lambda", dest="lam", type=float)
        sp.add_argument("--lambda-grid", help="lo:hi:n or comma list")
        sp.add_argument("--p", type=float)
        sp.add_argument("--p-grid", help="lo:hi:n or comma list")
        sp.add_argument("--semigroup", choices=("geometric", "classical"))
        sp.add_argument("--method", choices=METHODS)
        sp.add_argument("--lambda-lo", type=float)
        sp.add_argument("--lambda-hi", type=float)
        sp.add_argument("--iters", type=int)
        sp.add_argument("--z-grid", help="lo:hi:n or comma list (precheck)")
        sp.add_argument("--m", type=int, help="number of derivatives (precheck)")
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--csv", help="also dump sequences to PREFIX_<name>.csv")
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        req = build_request(args.command, args)
        report, seqs = run(req)
    except RequestError as exc:
        print(f"qgid: error: {exc}", file=sys.stderr)
        return exc.code
    except (InvalidParameter, RangeError, BracketError) as exc:
        print(f"qgid: error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except QGIDError as exc:
        print(f"qgid: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = dumps(report) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.csv:
        write_csv(args.csv, seqs)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
