"""Command-line front end.

Exit codes: 0 on success, 2 when the answer is an obstruction certificate,
1 on usage, parse or precondition errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .coeff import embed_complex, format_coeff
from .expr import ParseError, is_constant, lower, lower_constants, names_for, parse_germ
from .flow import (
    ObstructionCertificate,
    evaluate_flow,
    exp_flow,
    flow_family,
    formal_log,
    iterative_root,
)
from .linearize import (
    closeness_check,
    koenigs,
    matrix_log,
    matrix_power_t,
    poincare_linearize,
    resonance_check,
)
from .matrix import SquareMatrix

SCHEMA_ID = "germflow-output/1"
COMMANDS = ("exp", "log", "flow", "eval", "root", "linearize", "resonance", "matlog", "matpow")
EXIT_OK, EXIT_ERROR, EXIT_OBSTRUCTION = 0, 1, 2
DEFAULT_ORDER = 16


def default_precision() -> int:
    return int(os.environ.get("GERMFLOW_PRECISION", "256"))


@dataclass
class RunConfig:
    command: str
    order: int = DEFAULT_ORDER
    mode: str = "exact"
    precision: int = 256
    tolerance: float | None = None
    branch: int = 0
    output: str = "text"
    k: int = 2
    t: str | None = None
    max_degree: int = 8

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.order < 2:
            raise ValueError("order must be at least 2")
        if self.mode not in ("exact", "float"):
            raise ValueError("mode must be 'exact' or 'float'")
        if self.mode == "float" and self.precision < 64:
            raise ValueError("precision must be at least 64 bits in float mode")
        if self.tolerance is not None and self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.output not in ("text", "json"):
            raise ValueError("output must be 'text' or 'json'")


class _Usage(ValueError):
    pass


def _scalar(text: str | None, cfg: RunConfig, what: str):
    if text is None:
        raise _Usage(f"{cfg.command} needs {what}")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise _Usage(f"cannot read {what} {text!r} as a rational number") from None
    return embed_complex(value, cfg.precision) if cfg.mode == "float" else value


def _to_mode(g, cfg):
    if cfg.mode == "float":
        return g.map_coefficients(lambda c: embed_complex(c, cfg.precision))
    return g


def _tol(cfg):
    return None if cfg.tolerance is None else cfg.tolerance


def _matrix_input(node, cfg) -> SquareMatrix:
    if is_constant(node):
        vals = lower_constants(node)
        if all(isinstance(v, list) for v in vals):
            return SquareMatrix(vals)
        if len(vals) == 1 and not isinstance(vals[0], list):
            return SquareMatrix([[vals[0]]])
        raise _Usage("a constant matrix is written as a tuple of row tuples")
    return lower(node, cfg.order).linear_part()


def execute(cfg: RunConfig, node) -> dict:
    """Run one command on a parsed expression and return the JSON document."""
    cfg.validate()
    doc: dict = {
        "schema": SCHEMA_ID,
        "command": cfg.command,
        "status": "ok",
        "mode": cfg.mode,
        "order": cfg.order,
        "series": None,
        "certificate": None,
        "flow": None,
        "witnesses": None,
        "norm": None,
        "matrix": None,
        "variables": None,
        "message": None,
        "text": None,
    }
    cmd = cfg.command
    if cmd in ("resonance", "matlog", "matpow"):
        if cmd == "resonance":
            if is_constant(node):
                lams = lower_constants(node)
                if any(isinstance(x, list) for x in lams):
                    raise _Usage("resonance expects a tuple of multipliers")
            else:
                J = lower(node, cfg.order).linear_part()
                if not J.is_diagonal():
                    raise _Usage("resonance needs a diagonal linear part or explicit multipliers")
                lams = J.diagonal()
            if cfg.mode == "float":
                lams = [embed_complex(x, cfg.precision) for x in lams]
            w = resonance_check(lams, cfg.max_degree, _tol(cfg))
            doc["witnesses"] = [x.to_json() for x in w]
            doc["message"] = f"{len(w)} resonance(s) up to degree {cfg.max_degree}"
            return doc
        J = _matrix_input(node, cfg)
        chk = closeness_check(J, cfg.precision)
        doc["norm"] = f"{chk.norm:.{max(int(cfg.precision * 0.30103), 17)}g}"
        if cmd == "matlog":
            M = matrix_log(J, cfg.precision, _tol(cfg))
        else:
            M = matrix_power_t(J, _scalar(cfg.t, cfg, "--t"), cfg.precision, _tol(cfg))
        doc["matrix"] = M.to_json()
        return doc

    names = names_for(node)
    doc["variables"] = names
    if cmd == "exp":
        v = _to_mode(lower(node, cfg.order, kind="field"), cfg)
        t = _scalar(cfg.t or "1", cfg, "--t")
        _put_series(doc, exp_flow(v, t, cfg.order, _tol(cfg)), names)
        return doc
    u = _to_mode(lower(node, cfg.order), cfg)
    if cmd == "log":
        _put_series(doc, formal_log(u, cfg.order), names)
    elif cmd in ("flow", "eval"):
        F = flow_family(u, cfg.order, _tol(cfg))
        doc["flow"] = F.to_json()
        doc["flow"]["text"] = (F.f if F.kind == "hyperbolic" else F.v).render(names)
        if cmd == "eval" or cfg.t is not None:
            flag = "--t" if cmd == "eval" else "--eval-t"
            _put_series(doc, evaluate_flow(F, _scalar(cfg.t, cfg, flag), cfg.order, cfg.precision), names)
    elif cmd == "root":
        res = iterative_root(u, cfg.k, cfg.order, cfg.branch, _tol(cfg))
        if isinstance(res, ObstructionCertificate):
            doc["status"] = "obstruction"
            doc["certificate"] = res.to_json()
            doc["message"] = (
                f"no formal iterative root of order {cfg.k} on branch {cfg.branch}: "
                f"0*c = {format_coeff(res.beta)} at degree {res.degree}"
            )
        else:
            _put_series(doc, res, names)
    elif cmd == "linearize":
        lin = koenigs(u, cfg.order, _tol(cfg)) if u.nvars == 1 else poincare_linearize(u, cfg.order, _tol(cfg))
        _put_series(doc, lin.f, names)
        doc["flow"] = {
            "kind": "hyperbolic",
            "order": lin.f.order,
            "multipliers": [format_coeff(x) for x in lin.multipliers],
            "conjugacy": lin.f.to_json(),
            "text": doc["text"],
        }
    return doc


def _put_series(doc, g, names):
    doc["series"] = g.to_json()
    doc["text"] = g.render(names)


def render_text(doc: dict) -> str:
    if doc["status"] == "error":
        return f"error: {doc['message']}"
    lines = []
    fl = doc.get("flow")
    if fl:
        if fl["kind"] == "hyperbolic":
            lines.append(f"hyperbolic flow, multipliers {', '.join(fl['multipliers'])}")
            lines.append(f"conjugacy f = {fl['text']}")
        else:
            lines.append(f"parabolic flow, generator v = {fl['text']}")
    if doc.get("text") is not None and not (fl and fl["text"] == doc["text"]):
        lines.append(doc["text"])
    c = doc.get("certificate")
    if c:
        lines.append(doc["message"])
        lines.append(f"  component {c['component'] + 1}, exponents {c['exponents']}")
        lines.append(f"  alpha = {c['alpha']}, beta = {c['beta']}")
        lines.append(f"  root multipliers: {', '.join(c['root_multipliers'])}")
        if c["free"]:
            lines.append(f"  undetermined coefficients set to 0: {len(c['free'])}")
    if doc.get("witnesses") is not None:
        lines.append(doc.get("message") or "")
        for w in doc["witnesses"]:
            lines.append(f"  lambda_{w['s'] + 1} = prod lambda_i^m_i, m = {w['m']}")
    if doc.get("norm") is not None:
        lines.append(f"||J - E||_F = {doc['norm']}")
    if doc.get("matrix") is not None:
        for row in doc["matrix"]:
            lines.append("  [" + ", ".join(row) + "]")
    if doc.get("message") and not c and doc.get("witnesses") is None:
        lines.append(f"note: {doc['message']}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", "-N", type=int, default=DEFAULT_ORDER, help="truncation order (default 16)")
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--precision", type=int, default=None, help="bits in float mode (env GERMFLOW_PRECISION)")
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--branch", type=int, default=0)
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--json", dest="output", action="store_const", const="json")
    common.add_argument("germ", help='germ expression, or "-" to read stdin')

    p = argparse.ArgumentParser(prog="germflow", description="Flows, roots and linearizations of germs.")
    p.add_argument("--version", action="version", version=f"germflow {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("exp", parents=[common], help="time-t flow of a vector field")
    sp.add_argument("--t", default=None)
    sub.add_parser("log", parents=[common], help="infinitesimal generator of a parabolic germ")
    sp = sub.add_parser("flow", parents=[common], help="flow family through a germ")
    sp.add_argument("--eval-t", dest="t", default=None)
    sp = sub.add_parser("eval", parents=[common], help="fractional iterate phi^t")
    sp.add_argument("--t", required=True)
    sp = sub.add_parser("root", parents=[common], help="k-th iterative root or obstruction")
    sp.add_argument("--k", type=int, default=2)
    sub.add_parser("linearize", parents=[common], help="conjugacy to the linear part")
    sp = sub.add_parser("resonance", parents=[common], help="resonances among multipliers")
    sp.add_argument("--max-degree", type=int, default=8)
    sub.add_parser("matlog", parents=[common], help="logarithm of the linear part")
    sp = sub.add_parser("matpow", parents=[common], help="fractional power of the linear part")
    sp.add_argument("--t", required=True)
    return p


def run(cfg: RunConfig, text: str, stdout=None) -> int:
    """Parse ``text``, execute, print the rendered result; return the exit code."""
    stdout = stdout or sys.stdout
    try:
        node = parse_germ(text)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            doc = execute(cfg, node)
        if caught:
            doc["message"] = "; ".join(str(w.message) for w in caught)
        code = EXIT_OBSTRUCTION if doc["status"] == "obstruction" else EXIT_OK
    except (ValueError, TypeError, ArithmeticError) as exc:
        doc = {
            "schema": SCHEMA_ID,
            "command": cfg.command,
            "status": "error",
            "mode": cfg.mode,
            "order": cfg.order,
            "series": None,
            "certificate": None,
            "flow": None,
            "witnesses": getattr(exc, "witnesses", None) and [w.to_json() for w in exc.witnesses],
            "norm": None,
            "matrix": None,
            "variables": None,
            "message": str(exc),
            "text": None,
        }
        if isinstance(exc, ParseError) and exc.offset is not None:
            doc["offset"] = exc.offset
        code = EXIT_ERROR
    if cfg.output == "json":
        print(json.dumps(doc, indent=2), file=stdout)
    else:
        print(render_text(doc), file=stdout if code != EXIT_ERROR else sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    text = sys.stdin.read() if args.germ == "-" else args.germ
    try:
        precision = default_precision() if args.precision is None else args.precision
    except ValueError:
        print("error: GERMFLOW_PRECISION must be an integer", file=sys.stderr)
        return EXIT_ERROR
    cfg = RunConfig(
        command=args.command,
        order=args.order,
        mode=args.mode,
        precision=precision,
        tolerance=args.tolerance,
        branch=args.branch,
        output=args.output,
        k=getattr(args, "k", 2),
        t=getattr(args, "t", None),
        max_degree=getattr(args, "max_degree", 8),
    )
    return run(cfg, text)


if __name__ == "__main__":
    sys.exit(main())

