"""Command-line front end.

Every subcommand prints one report (text or JSON) and exits with 0 when the
mathematical answer is positive, 1 when it is negative and 2 on any error.
``script FILE`` runs declarations and commands line by line; ``repl`` does the
same interactively.
"""
from __future__ import annotations

import argparse
import json
import shlex
import sys
from pathlib import Path

from .errors import DirectFiniteError, ExprError
from .group_ring import GroupRingElem, GroupRingMatrix, check_direct_finiteness, find_right_inverse
from .near_ring import NearRingElem, star, verify_theorem_A
from .parsing import Session, _kind, format_ca, format_value
from .pipeline import REPORT_SCHEMA, PipelineConfig, conclude_two_sided, run_restriction_ladder
from .sca import (AffineAlphabet, FiniteAlphabet, Pattern, apply_pattern, compose,
                  on_ladder, window_map)
from .surjunctivity import gottschalk_sweep, is_injective, is_surjective

CLI_SCHEMA_VERSION = "directfinite.cli/1"

CLI_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "command report",
    "type": "object",
    "required": ["schema", "command", "status", "exit_code", "result", "error"],
    "properties": {
        "schema": {"const": CLI_SCHEMA_VERSION},
        "command": {"type": "string"},
        "status": {"enum": ["ok", "negative", "error"]},
        "exit_code": {"enum": [0, 1, 2]},
        "result": {"type": ["object", "null"]},
        "error": {
            "oneOf": [
                {"type": "null"},
                {"type": "object", "required": ["type", "message", "position"],
                 "properties": {"type": {"type": "string"}, "message": {"type": "string"},
                                "position": {"type": ["integer", "null"]}}},
            ]
        },
    },
    "allOf": [
        {"if": {"properties": {"command": {"const": "pipeline"}, "status": {"enum": ["ok", "negative"]}}},
         "then": {"properties": {"result": {"type": "object", "required": ["report"],
                                            "properties": {"report": REPORT_SCHEMA}}}}},
        {"if": {"properties": {"status": {"const": "error"}}},
         "then": {"properties": {"exit_code": {"const": 2}, "error": {"type": "object"}}}},
    ],
}


class UsageError(Exception):
    """Malformed command line (raised instead of exiting)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--group", help="group specification, e.g. Z, 'free gens=g,h', S3 (default Z)")
    p.add_argument("--field", help="Q, GF(p) or GF(p^r) (default Q)")
    p.add_argument("--depth", type=int, default=4, help="top level of the restriction ladder")
    p.add_argument("--budget-terms", type=int, default=None, help="maximum monomials in an expansion")
    p.add_argument("--emit", help="also write the JSON report to this path")
    p.add_argument("--format", choices=("json", "text"), default="text")
    return p


def build_parser():
    common = _common()
    parser = _Parser(prog="directfinite", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("star", "near-ring products alpha ** beta and beta ** alpha")
    p.add_argument("alpha")
    p.add_argument("beta")
    p = add("grmul", "product in k[G] or Mat_n(k[G])")
    p.add_argument("a")
    p.add_argument("b")
    p = add("check-df", "check ab = 1 and ba = 1")
    p.add_argument("a")
    p.add_argument("b")
    p = add("find-rinv", "search for a right inverse")
    p.add_argument("a")
    p.add_argument("--radius", type=int, default=None, help="support radius (infinite groups)")
    p = add("theoremA", "check alpha ** beta = X[1] and beta ** alpha = X[1]")
    p.add_argument("alpha")
    p.add_argument("beta")
    p = add("ca-apply", "apply an automaton to a finite word")
    p.add_argument("rule")
    p.add_argument("word", help="symbols, e.g. 0110 or '1 w w+1' or '(1,0) (0,1)'")
    p.add_argument("--start", type=int, default=0)
    p = add("ca-compose", "sigma o tau")
    p.add_argument("sigma")
    p.add_argument("tau")
    for name in ("ca-surjective", "ca-injective"):
        p = add(name, f"decide {name[3:]}ity")
        p.add_argument("rule")
    p = add("gottschalk-sweep", "check injective => surjective over all rules of a size")
    p.add_argument("--alphabet", type=int, required=True)
    p.add_argument("--radius", required=True, help="1/2, 1, 3/2, ...")
    p = add("window-map", "surjectivity of A^(M^2) -> A^M")
    p.add_argument("rule")
    p.add_argument("--memory", default=None, help="comma separated group elements (default: rule memory)")
    p = add("pipeline", "restriction ladder for a one-sided inverse pair")
    p.add_argument("--left", default=None, help="sigma with sigma o tau = Id (omit to check tau alone)")
    p.add_argument("--right", required=True, help="tau")
    p.add_argument("--quotients", default="2..8", help="moduli n of the probed quotients Z/n")
    p = add("script", "run a file of declarations and commands ('-' for stdin)")
    p.add_argument("file")
    add("repl", "interactive session")
    return parser


# ---------------------------------------------------------------------------
# command implementations; each returns (verdict or None, result dict)


def _expr(session, text, kinds=None, what="value"):
    v = session.evaluate(text)
    if kinds and not isinstance(v, kinds):
        if NearRingElem in kinds and _kind(v) == "scalar":
            return NearRingElem.const(session.group, session.field, v)
        if GroupRingElem in kinds and _kind(v) == "scalar":
            return GroupRingElem.one(session.group, session.field).scale(session.field.coerce(v))
        raise DirectFiniteError(f"expected a {what}, got a {_kind(v)}")
    return v


def cmd_star(args, s):
    a = _expr(s, args.alpha, (NearRingElem,), "near-ring element")
    b = _expr(s, args.beta, (NearRingElem,), "near-ring element")
    ab, ba = star(a, b, s.budget), star(b, a, s.budget)
    return None, {"alpha": format_value(a), "beta": format_value(b),
                  "alpha_star_beta": format_value(ab), "beta_star_alpha": format_value(ba)}


_GR = (GroupRingElem, GroupRingMatrix)


def cmd_grmul(args, s):
    a = _expr(s, args.a, _GR, "group ring element or matrix")
    b = _expr(s, args.b, _GR, "group ring element or matrix")
    if type(a) is not type(b):
        raise DirectFiniteError("cannot multiply a matrix by a group ring element")
    return None, {"a": format_value(a), "b": format_value(b), "product": format_value(a * b)}


def cmd_check_df(args, s):
    a = _expr(s, args.a, _GR, "group ring element or matrix")
    b = _expr(s, args.b, _GR, "group ring element or matrix")
    rep = check_direct_finiteness(a, b)
    return rep.ab_is_one and rep.ba_is_one, {**rep.as_dict(), "consistent": rep.consistent}


def cmd_find_rinv(args, s):
    a = _expr(s, args.a, _GR, "group ring element or matrix")
    b = find_right_inverse(a, args.radius)
    if b is None:
        return False, {"a": format_value(a), "right_inverse": None}
    rep = check_direct_finiteness(a, b)
    return True, {"a": format_value(a), "right_inverse": format_value(b), **rep.as_dict()}


def cmd_theorem_a(args, s):
    a = _expr(s, args.alpha, (NearRingElem,), "near-ring element")
    b = _expr(s, args.beta, (NearRingElem,), "near-ring element")
    rep = verify_theorem_A(a, b, s.budget)
    return rep.is_left_inverse and rep.is_right_inverse, {**rep.as_dict(), "consistent": rep.consistent}


def _parse_symbol(alphabet, tok):
    if isinstance(alphabet, FiniteAlphabet):
        for label in alphabet.labels:
            if str(label) == tok:
                return label
        raise DirectFiniteError(f"{tok!r} is not a symbol of {alphabet}")
    parts = tok.strip("()").split(",") if tok.startswith("(") else [tok]
    if len(parts) != alphabet.dim:
        raise DirectFiniteError(f"{tok!r} does not have {alphabet.dim} coordinates")
    return tuple(alphabet.field.parse(p).value for p in parts)


def _parse_word(alphabet, text):
    text = text.strip()
    if " " in text or "," in text and not text.startswith("("):
        toks = text.replace(",", " ").split()
    elif text.startswith("("):
        toks = text.split()
    else:
        toks = list(text)
    return [_parse_symbol(alphabet, t) for t in toks]


def cmd_ca_apply(args, s):
    tau = s.automaton(args.rule)
    word = _parse_word(tau.alphabet, args.word)
    G = tau.group
    if G.is_finite():
        if len(word) != G.order:
            raise DirectFiniteError(f"a configuration on {G} needs {G.order} symbols")
        pattern = Pattern(G, dict(zip(G.elements(), word)))
    else:
        if getattr(G, "rank", None) != 1 or G.kind != "free_abelian":
            raise DirectFiniteError("words can only be applied over Z or a finite group")
        pattern = Pattern.from_word(G, word, args.start)
    out = apply_pattern(tau, pattern)
    fmt = tau.alphabet.format
    return None, {"rule": format_ca(tau), "input": [fmt(v) for v in pattern.word()],
                  "window": [str(g) for g in sorted(out.values)],
                  "output": [fmt(v) for v in out.word()]}


def cmd_ca_compose(args, s):
    sigma, tau = s.automaton(args.sigma), s.automaton(args.tau)
    rho = compose(sigma, tau, s.budget)
    return None, {"composite": format_ca(rho), "memory": [str(g) for g in rho.memory]}


def _decision(report):
    w = report.witness
    if w is not None:
        w = json.loads(json.dumps(w, default=str))
    return report.verdict, {"verdict": report.verdict, "method": report.method, "witness": w}


def cmd_ca_surjective(args, s):
    return _decision(is_surjective(s.automaton(args.rule)))


def cmd_ca_injective(args, s):
    return _decision(is_injective(s.automaton(args.rule)))


def _memory_length(radius):
    from fractions import Fraction
    r = Fraction(radius)
    if r <= 0 or (2 * r).denominator != 1:
        raise DirectFiniteError(f"radius must be a positive multiple of 1/2, got {radius!r}")
    return int(2 * r) + 1


def cmd_gottschalk(args, s):
    if args.alphabet < 2:
        raise DirectFiniteError("alphabet size must be >= 2")
    m = _memory_length(args.radius)
    if args.alphabet ** (args.alphabet ** m) > 1 << 22:
        raise DirectFiniteError("rule space too large for an exhaustive sweep")
    rep = gottschalk_sweep(args.alphabet, m, s.group)
    return not rep.violations, rep.as_dict()


def cmd_window_map(args, s):
    from .groups import MemorySet
    tau = s.automaton(args.rule)
    mem = tau.memory if args.memory is None else MemorySet(
        tau.group, [tau.group(x) for x in args.memory.split(";" if ";" in args.memory else ",")])
    wm = window_map(tau, mem)
    ok = wm.is_surjective()
    return ok, {"memory": [str(g) for g in wm.memory], "domain": [str(g) for g in wm.domain],
                "linear_rank": wm.linear_rank(), "surjective": ok}


def _quotients(text):
    if ".." in text:
        lo, hi = text.split("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(x) for x in text.split(",") if x.strip())


def _ladder_ca(tau):
    if not (tau.is_poly and isinstance(tau.alphabet, AffineAlphabet)):
        raise DirectFiniteError("the pipeline needs polynomial rules over a finite field")
    return tau if tau.alphabet.ladder else on_ladder(tau)


def cmd_pipeline(args, s):
    tau = _ladder_ca(s.automaton(args.right))
    sigma = _ladder_ca(s.automaton(args.left)) if args.left else None
    cfg = PipelineConfig(depth=args.depth, quotients=_quotients(args.quotients),
                         term_budget=s.budget)
    report = run_restriction_ladder(sigma, tau, cfg)
    verdict = report.all_levels_pass
    if sigma is not None and verdict:
        verdict = conclude_two_sided(sigma, tau, report, cfg)
    return verdict, {"left": format_ca(sigma) if sigma else None, "right": format_ca(tau),
                     "report": report.as_dict()}


COMMANDS = {
    "star": cmd_star, "grmul": cmd_grmul, "check-df": cmd_check_df, "find-rinv": cmd_find_rinv,
    "theoremA": cmd_theorem_a, "ca-apply": cmd_ca_apply, "ca-compose": cmd_ca_compose,
    "ca-surjective": cmd_ca_surjective, "ca-injective": cmd_ca_injective,
    "gottschalk-sweep": cmd_gottschalk, "window-map": cmd_window_map, "pipeline": cmd_pipeline,
}


# ---------------------------------------------------------------------------
# reports


def envelope(command, verdict=None, result=None, error=None):
    if error is not None:
        status, code = "error", 2
    elif verdict is False:
        status, code = "negative", 1
    else:
        status, code = "ok", 0
    return {"schema": CLI_SCHEMA_VERSION, "command": command, "status": status, "exit_code": code,
            "result": result, "error": error}


def _error_dict(exc):
    pos = exc.pos if isinstance(exc, ExprError) else None
    msg = exc.message if isinstance(exc, ExprError) else str(exc)
    return {"type": type(exc).__name__, "message": msg, "position": pos}


def render_text(env):
    lines = [f"{env['command']}: {env['status']}"]
    if env["error"]:
        e = env["error"]
        where = f" at column {e['position'] + 1}" if e["position"] is not None else ""
        lines.append(f"error ({e['type']}){where}: {e['message']}")
    for k, v in (env["result"] or {}).items():
        lines.append(f"  {k}: {v if isinstance(v, str) else json.dumps(v, default=str)}")
    return "\n".join(lines)


def _configure(session, args):
    if args.group is not None:
        session.declare_group(f"_group{len(session.groups)}", args.group)
    elif session.group is None:
        session.declare_group("_group0", "Z")
    if args.field is not None:
        session.declare_field(f"_field{len(session.fields)}", args.field)
    if args.budget_terms is not None:
        if args.budget_terms < 1:
            raise DirectFiniteError("--budget-terms must be positive")
        session.budget = args.budget_terms


_HANDLED = (DirectFiniteError, UsageError, ValueError, ZeroDivisionError, OverflowError,
            RecursionError, KeyError, OSError)


def run_command(argv, session=None, out=None):
    """Parse ``argv``, run the subcommand and return ``(exit code, report dict)``."""
    out = out if out is not None else sys.stdout
    session = session if session is not None else Session()
    command, fmt, emit = (argv[0] if argv else ""), "text", None
    try:
        args = build_parser().parse_args(argv)
        command, fmt, emit = args.command or "", args.format, args.emit
        if args.command in (None, "script", "repl"):
            raise UsageError("expected a subcommand")
        _configure(session, args)
        verdict, result = COMMANDS[args.command](args, session)
        env = envelope(command, verdict, result)
    except _HANDLED as exc:
        env = envelope(command, error=_error_dict(exc))
    print(json.dumps(env, indent=2, default=str) if fmt == "json" else render_text(env), file=out)
    if emit:
        try:
            Path(emit).write_text(json.dumps(env, indent=2, default=str))
        except OSError as exc:
            print(f"cannot write {emit}: {exc}", file=sys.stderr)
            return 2, env
    return env["exit_code"], env


def run_line(line, session, out):
    """One script/REPL line: a declaration, ``print EXPR`` or a command."""
    try:
        done = session.execute(line)
    except _HANDLED as exc:
        env = envelope("declaration", error=_error_dict(exc))
        print(render_text(env), file=out)
        return 2
    if done is not None:
        kind, value = done
        if kind in ("print", "let", "ca"):
            print(format_value(value), file=out)
        return 0
    try:
        argv = shlex.split(line, comments=True)
    except ValueError as exc:
        print(render_text(envelope("script", error=_error_dict(exc))), file=out)
        return 2
    return run_command(argv, session, out)[0]


def run_script(lines, session=None, out=None):
    """Run every line; the exit code is the worst one seen."""
    out = out if out is not None else sys.stdout
    session = session or Session()
    worst = 0
    for line in lines:
        code = run_line(line, session, out)
        if code == 2 or (code == 1 and worst == 0):
            worst = code
    return worst


def repl(session=None, stdin=None, out=None):
    stdin = stdin or sys.stdin
    out = out or sys.stdout
    session = session or Session()
    if session.group is None:
        session.declare_group("_group0", "Z")
    while True:
        print("df> ", end="", file=out, flush=True)
        line = stdin.readline()
        if not line or line.strip() in ("quit", "exit"):
            return 0
        run_line(line, session, out)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0] == "script" and len(argv) == 2:
        path = argv[1]
        try:
            if path == "-":
                lines = sys.stdin.read().splitlines()
                base = None
            else:
                lines = Path(path).read_text().splitlines()
                base = Path(path).resolve().parent
        except OSError as exc:
            print(f"cannot read {path}: {exc}", file=sys.stderr)
            return 2
        return run_script(lines, Session(base_dir=base))
    if not argv or argv == ["repl"]:
        return repl()
    return run_command(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
