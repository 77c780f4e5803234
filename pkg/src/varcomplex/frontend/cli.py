"""``varcomplex`` command line interface.

Exit codes: 0 verified, 1 check failed, 2 usage or input error, 3 resource bound.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from ..algebra import Jet, ScalarExpr, conjugate, jets_in
from ..calculus import UnsupportedContractionError
from ..fieldtheory import (
    BidegreeError,
    ConsistencyError,
    Verdict,
    euler_lagrange,
    hamilton_identity,
    hamiltonian_vf_components,
    invariance_check,
    momentum_map,
    noether_check,
    on_shell_reduce,
    symplectic_density,
    total_symplectic,
)
from ..forms import ResourceBoundError, project_bidegree, term_limit
from ..hodge import UnsupportedStarError
from .parser import ParseError, Scenario, parse_expression, parse_scalar, parse_scenario, render_scenario
from .render import STYLES, render, to_ast
from .scenarios import BUILTINS, load_builtin

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    """Bad arguments that argparse cannot detect on its own."""


class _Out:
    def __init__(self, fmt: str, coords, stream=None):
        self.fmt = fmt
        self.coords = coords
        self.stream = stream or sys.stdout

    def emit(self, label: str, obj):
        if self.fmt == "ast":
            line = json.dumps({"label": label, "value": to_ast(obj)},
                              sort_keys=True, separators=(",", ":"))
        else:
            line = f"{label} = {render(obj, self.fmt, self.coords)}"
        print(line, file=self.stream)

    def status(self, label: str, text: str):
        if self.fmt == "ast":
            line = json.dumps({"label": label, "value": text}, sort_keys=True, separators=(",", ":"))
        else:
            line = f"{label}: {text}"
        print(line, file=self.stream)


def _load(args) -> Scenario:
    if args.scenario_file:
        text = Path(args.scenario_file).read_text()
        if args.dim is not None:
            raise UsageError("--dim applies to built-in parametric scenarios only")
        return parse_scenario(text)
    if not args.names:
        raise UsageError("no scenario given (name a built-in or pass --scenario-file)")
    name = args.names.pop(0)
    if name in BUILTINS:
        return load_builtin(name, args.dim)
    path = Path(name)
    if path.is_file():
        return parse_scenario(path.read_text())
    raise UsageError(f"unknown scenario {name!r} (built-ins: {', '.join(BUILTINS)})")


def _killing(sc: Scenario, args, count: int) -> list:
    names = list(args.names)
    if len(names) > count:
        raise UsageError(f"too many arguments: {' '.join(names[count:])}")
    if count == 1:
        return [sc.killing_field(names[0] if names else None)]
    if len(names) != count:
        raise UsageError(f"expected {count} Killing field names")
    return [sc.killing_field(nm) for nm in names]


def _verdict(out: _Out, label: str, v: Verdict) -> int:
    if v.ok:
        out.status(label, "verified")
        return EXIT_OK
    out.emit("residual", v.residual)
    out.status(label, "FAILED")
    return EXIT_FAILED


def _no_extra(args):
    if args.names:
        raise UsageError(f"unexpected arguments: {' '.join(args.names)}")


# --------------------------------------------------------------------------
# subcommands


def cmd_derive_el(args, out: _Out, sc: Scenario) -> int:
    _no_extra(args)
    out.emit("E", euler_lagrange(sc.system))
    return EXIT_OK


def cmd_symplectic(args, out: _Out, sc: Scenario) -> int:
    _no_extra(args)
    out.emit("omega", symplectic_density(sc.system))
    return EXIT_OK


def cmd_momentum(args, out: _Out, sc: Scenario) -> int:
    (X,) = _killing(sc, args, 1)
    J = momentum_map(sc.system, X)
    label = f"J_{X.name}" if args.scale == 1 else f"{args.scale}*J_{X.name}"
    out.emit(label, J * args.scale)
    return EXIT_OK


def cmd_check_invariance(args, out: _Out, sc: Scenario) -> int:
    (X,) = _killing(sc, args, 1)
    return _verdict(out, f"Lie_{X.name} L", invariance_check(sc.system, X))


def cmd_check_noether(args, out: _Out, sc: Scenario) -> int:
    if args.names:
        pairs = [tuple(_killing(sc, args, 2))]
    else:
        fields = list(sc.killing.values())
        pairs = [(a, b) for a in fields for b in fields]
    code = EXIT_OK
    for a, b in pairs:
        code = max(code, _verdict(out, f"Lie_{a.name} J_{b.name}", noether_check(sc.system, a, b)))
    return code


def _binding(text: str, sc: Scenario) -> dict:
    lhs, sep, rhs = text.partition("=")
    if not sep:
        raise UsageError(f"--on-shell expects 'jet = expression', got {text!r}")
    u = parse_scalar(lhs.strip(), sc.context)
    jets = jets_in(u)
    if len(jets) != 1 or u != ScalarExpr.atom(next(iter(jets))):
        raise UsageError(f"left side of {text!r} is not a single jet")
    (jet,) = jets
    value = parse_scalar(rhs.strip(), sc.context)
    out = {jet: value}
    partner = jet.field.conjugate()
    if partner != jet.field:
        out[Jet(partner, jet.index)] = conjugate(value)
    return out


def cmd_check_hamilton(args, out: _Out, sc: Scenario) -> int:
    (X,) = _killing(sc, args, 1)
    eqns = {}
    for text in args.on_shell or ():
        eqns.update(_binding(text, sc))
    v = hamilton_identity(sc.system, X)
    for (p, q), comp in sorted(v.components.items()):
        out.emit(f"({X.name} _| omega + D H)^({p},{q})", comp)
    code = _verdict(out, f"{X.name} _| omega + D H = -{X.name} _| E", v)
    if eqns:
        ok = True
        for (p, q), comp in sorted(v.components.items()):
            reduced = on_shell_reduce(comp, eqns)
            if not reduced.is_zero():
                ok = False
                out.emit(f"on-shell ({p},{q})", reduced)
        out.status("on-shell", "all components vanish" if ok else "FAILED")
        if not ok:
            code = EXIT_FAILED
    return code


def cmd_components(args, out: _Out, sc: Scenario) -> int:
    (X,) = _killing(sc, args, 1)
    system = sc.system
    n = system.n
    J = momentum_map(system, X)
    for p in range(0, n + 1):
        piece = project_bidegree(J, p, n - 1 - p) if n - 1 - p >= 0 else None
        if piece is not None and not piece.is_zero():
            out.emit(f"J_{X.name}^({p},{n - 1 - p})", piece)
    ds = total_symplectic(system)
    lhs = hamiltonian_vf_components(ds, X, J)
    for k, c in enumerate(lhs):
        if n - k >= 0:
            out.emit(f"C^({k},{n - k})", c)
    return EXIT_OK


def cmd_selftest(args, out: _Out, sc: Optional[Scenario]) -> int:
    from ..selftest import run_all

    results = run_all(args.cases, args.seed, workers=args.workers)
    total = 0
    code = EXIT_OK
    for r in results:
        total += r.forms
        out.status(f"suite {r.name}",
                   f"{r.cases} cases, {r.forms} forms, {len(r.failures)} failures")
        for msg in r.failures[:3]:
            print(f"  {msg}", file=sys.stderr)
        if r.failures:
            code = EXIT_FAILED
    out.status("selftest", f"{total} forms, {'ok' if code == EXIT_OK else 'FAILED'}")
    return code


def cmd_render(args, out: _Out, sc: Scenario) -> int:
    if len(args.names) > 1:
        raise UsageError("render takes at most one expression")
    if args.names:
        out.emit("expr", parse_expression(args.names[0], sc.context))
    elif out.fmt == "ast":
        out.emit("L", sc.system.L)
        out.emit("theta", sc.system.theta)
    else:
        sys.stdout.write(render_scenario(sc))
    return EXIT_OK


COMMANDS = {
    "derive-el": (cmd_derive_el, "print the Euler-Lagrange form"),
    "symplectic": (cmd_symplectic, "print the symplectic density del theta"),
    "momentum": (cmd_momentum, "print the momentum map of a Killing field"),
    "check-invariance": (cmd_check_invariance, "verify Lie_X (L + theta) = 0"),
    "check-noether": (cmd_check_noether, "verify Lie_A J_B = 0 (all pairs if none named)"),
    "check-hamilton": (cmd_check_hamilton, "verify the Hamilton identity for a Killing field"),
    "components": (cmd_components, "print momentum components and the component system"),
    "selftest": (cmd_selftest, "run every randomized property suite"),
    "render": (cmd_render, "render a scenario or an expression in its context"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=STYLES, default="plain")
    common.add_argument("--scenario-file", metavar="PATH")
    common.add_argument("--dim", type=int, metavar="N", help="dimension of a parametric scenario")
    common.add_argument("--max-terms", type=int, metavar="N",
                        help="abort when any expression exceeds N terms")
    ap = argparse.ArgumentParser(prog="varcomplex", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "selftest":
            p.add_argument("--cases", type=int, default=100)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--workers", type=int, default=1)
            continue
        p.add_argument("names", nargs="*", metavar="ARG",
                       help="scenario (unless --scenario-file) then command arguments")
        if name == "momentum":
            p.add_argument("--scale", type=int, default=1)
        if name == "check-hamilton":
            p.add_argument("--on-shell", action="append", metavar="'JET = EXPR'",
                           help="equation of motion; the conjugate is added for complex fields")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args, extra = ap.parse_known_args(argv)
    # positionals after options land in ``extra``; fold them back in order
    if any(x.startswith("--") for x in extra) or (extra and not hasattr(args, "names")):
        ap.error(f"unrecognized arguments: {' '.join(extra)}")
    if extra:
        args.names = list(args.names) + extra
    handler = COMMANDS[args.command][0]
    try:
        with term_limit(args.max_terms):
            sc = None if args.command == "selftest" else _load(args)
            out = _Out(args.format, sc.coords if sc else None)
            return handler(args, out, sc)
    except ResourceBoundError as e:
        print(f"varcomplex: resource bound exceeded: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except ParseError as e:
        print(f"varcomplex: parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (UnsupportedContractionError, UnsupportedStarError) as e:
        print(f"varcomplex: mode violation: {e}", file=sys.stderr)
        return EXIT_USAGE
    except KeyError as e:
        print(f"varcomplex: {e.args[0] if e.args else e}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, BidegreeError, ValueError, OSError) as e:
        print(f"varcomplex: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as e:
        print(f"varcomplex: {e}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
