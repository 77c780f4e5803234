"""Acceptance criteria 1-10, one test and one summary line per criterion.

Run directly (``python3 tests/test_acceptance.py``) or through pytest, which
prints the lines in its terminal summary.
"""

from __future__ import annotations

import contextlib
import io
import json
import subprocess
import sys
import time
from pathlib import Path

import pytest
import sympy as sp

sys.path.insert(0, str(Path(__file__).parent))

from _kit import (  # noqa: E402
    ALPHA, HALF, I, MU, PHI, PHIBAR, Q, S, jet, kg_display_2j, kg_forms, lift_with, translation,
)
from varcomplex.algebra import Coord, Func, Jet, ScalarExpr  # noqa: E402
from varcomplex.calculus import horizontal_diff, interior, vertical_diff  # noqa: E402
from varcomplex.fieldtheory import hamilton_identity, normalize, on_shell_reduce  # noqa: E402
from varcomplex.forms import Form  # noqa: E402
from varcomplex.frontend import BUILTINS, load_builtin, parse_scenario, render_scenario, to_ast  # noqa: E402
from varcomplex.frontend.cli import main  # noqa: E402
from varcomplex.gauge import (  # noqa: E402
    ConnA, MatrixForm, VarA, Xi, commutator, covariant_derivative, curvature, gauge_killing,
    nc_star, trace, ym_euler_lagrange, ym_system,
)
from varcomplex.hodge import AbstractMode, star, star_pair_normalize  # noqa: E402
from varcomplex.selftest import GAUGE_SUITES, SUITES, run_suite  # noqa: E402

BUDGET = 10.0
RESULTS: dict = {}


def cli_ast(*argv) -> dict:
    """Run the CLI in-process and return ``{label: ast}``."""
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main([*argv, "--format", "ast"])
    assert code == 0, f"exit {code}"
    out = {}
    for line in buf.getvalue().splitlines():
        rec = json.loads(line)
        out[rec["label"]] = rec["value"]
    return out


def criterion(k: int, title: str):
    def wrap(fn):
        def test():
            t0 = time.perf_counter()
            try:
                fn()
            except BaseException as e:
                RESULTS[k] = f"criterion {k:2d} FAIL ({time.perf_counter() - t0:.1f}s) {title}: {e!r}"[:400]
                raise
            dt = time.perf_counter() - t0
            ok = dt < BUDGET
            RESULTS[k] = f"criterion {k:2d} {'PASS' if ok else 'FAIL'} ({dt:.1f}s) {title}"
            assert ok, f"over the {BUDGET:.0f}s budget"
        test.__name__ = f"test_criterion_{k:02d}"
        test.__doc__ = title
        return test
    return wrap


# --------------------------------------------------------------------------


@criterion(1, "mechanics Euler-Lagrange form")
def _c1():
    args = (Jet(Q), Jet(Q, (0,)), Coord(0))
    L = lambda *slots: ScalarExpr.atom(Func("L", args, slots))
    d_dt_Lv = L(1, 2) + L(0, 1) * jet(Q, 0) + L(1, 1) * jet(Q, 0, 0)
    expected = S(d_dt_Lv - L(0), 1) ^ Form.dx(0, 1) ^ Form.delta(Jet(Q), 1)
    got = cli_ast("derive-el", "mechanics")["E"]
    assert got == to_ast(expected)
    # independent oracle: sympy's Euler-Lagrange operator on concrete Lagrangians
    from sympy.calculus.euler import euler_equations
    t, q, qt = sp.symbols("t q q_t")
    qf = sp.Function("q")(t)
    for concrete in ("q_t**2/2 - q**2/2", "t*q**2*q_t**3 + q_t*q"):
        Lc = sp.sympify(concrete)
        (eq,) = euler_equations(Lc.subs({q: qf, qt: sp.diff(qf, t)}, simultaneous=True), qf, t)
        oracle = (-eq.lhs).subs(sp.diff(qf, t, 2), sp.Symbol("q_tt")).subs(sp.diff(qf, t), qt).subs(qf, q)
        ((_, c),) = expected.terms()
        assert sp.expand(lift_with(c, Lc) - oracle) == 0


@criterion(2, "Klein-Gordon Euler-Lagrange form with the mixed-derivative cancellation")
def _c2():
    n = 4
    mode = AbstractMode(n)
    d = horizontal_diff
    phi, phib = S(jet(PHI), n), S(jet(PHIBAR), n)
    dphi, dphib = Form.delta(Jet(PHI), n), Form.delta(Jet(PHIBAR), n)
    expected = ((dphi ^ (d(star(d(phib), mode)) + star(S(MU * MU * jet(PHIBAR), n), mode)))
                + (dphib ^ (d(star(d(phi), mode)) + star(S(MU * MU * jet(PHI), n), mode)))) * (-HALF)
    assert cli_ast("derive-el", "kg-abstract")["E"] == to_ast(star_pair_normalize(expected))
    L, theta = kg_forms(mode)
    raw = vertical_diff(L) + horizontal_diff(theta)
    mixed = lambda a: {g.jet for f, _ in a for g in f if hasattr(g, "jet") and g.jet.index}
    assert mixed(raw) and not mixed(normalize(True, raw))


@criterion(3, "Klein-Gordon symplectic density")
def _c3():
    n = 4
    mode = AbstractMode(n)
    d, de = horizontal_diff, vertical_diff
    phi, phib = S(jet(PHI), n), S(jet(PHIBAR), n)
    expected = ((de(phi) ^ star(de(d(phib)), mode)) + (de(phib) ^ star(de(d(phi)), mode))) * (-HALF)
    assert cli_ast("symplectic", "kg-abstract")["omega"] == to_ast(star_pair_normalize(expected))


@criterion(4, "2D translation momentum map, Hamilton identity and on-shell reduction")
def _c4():
    assert cli_ast("momentum", "kg2d", "translation", "--scale", "2")["2*J_translation"] == \
        to_ast(kg_display_2j())
    sys2 = load_builtin("kg2d").system
    X = translation(1, 0)
    v = hamilton_identity(sys2, X)
    assert v.ok
    total = Form.zero(2)
    for comp in v.components.values():
        total = total + comp
    from varcomplex.fieldtheory import euler_lagrange
    assert total == -interior(X, euler_lagrange(sys2))
    eqns = {Jet(PHI, (0, 0)): jet(PHI, 1, 1) - MU * MU * jet(PHI),
            Jet(PHIBAR, (0, 0)): jet(PHIBAR, 1, 1) - MU * MU * jet(PHIBAR)}
    assert v.components and all(on_shell_reduce(c, eqns).is_zero() for c in v.components.values())


@criterion(5, "U(1) momentum map")
def _c5():
    n = 4
    mode = AbstractMode(n)
    d = horizontal_diff
    phi, phib = S(jet(PHI), n), S(jet(PHIBAR), n)
    expected = ((phi ^ star(d(phib), mode)) - (phib ^ star(d(phi), mode))) * (I * ALPHA / 2)
    assert cli_ast("momentum", "kg-abstract", "u1")["J_u1"] == to_ast(expected)


@criterion(6, "Yang-Mills Euler-Lagrange form, momentum map and gauge invariance")
def _c6():
    from varcomplex.calculus import lie_total
    from varcomplex.fieldtheory import momentum_map
    for n in (3, 4):
        A, vA = MatrixForm.atom(ConnA(), n), MatrixForm.atom(VarA(), n)
        F = curvature(n)
        sF = nc_star(F)
        sign = -1 if n % 2 else 1
        E = ym_euler_lagrange(n)
        assert E == -trace(vA ^ ((A ^ sF) - (sF ^ A) * sign + nc_star(F, 1)))
        assert E == -trace(vA ^ covariant_derivative(sF))
        sys_, X = ym_system(n), gauge_killing()
        assert momentum_map(sys_, X) == trace(covariant_derivative(MatrixForm.atom(Xi(), n)) ^ sF)
        assert interior(X, sys_.L).is_zero()
        assert normalize(True, lie_total(X, sys_.total)).is_zero()
    assert cli_ast("derive-el", "yangmills")["E"] == to_ast(ym_euler_lagrange(4))


@criterion(7, "randomized property suites, at least 1000 forms, zero failures")
def _c7():
    names = [nm for nm in SUITES if nm not in GAUGE_SUITES]
    results = [run_suite(nm, 100, seed=0) for nm in names]
    failures = [f for r in results for f in r.failures]
    assert not failures, failures[:3]
    assert sum(r.forms for r in results) >= 1000


@criterion(8, "gauge algebra: trace normal form, Bianchi identity, D_A D_A Xi = [F, Xi]")
def _c8():
    results = [run_suite(nm, 100, seed=0) for nm in GAUGE_SUITES]
    failures = [f for r in results for f in r.failures]
    assert not failures, failures[:3]
    for n in (2, 3, 4, 5, 6):
        F, xi = curvature(n), MatrixForm.atom(Xi(), n)
        assert covariant_derivative(F).is_zero()
        assert covariant_derivative(covariant_derivative(xi)) == commutator(F, xi)


@criterion(9, "Noether: Lie_A J_B = 0 among time, space and U(1) on kg2d")
def _c9():
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        for a in ("time", "space", "u1"):
            for b in ("time", "space", "u1"):
                assert main(["check-noether", "kg2d", a, b]) == 0
    assert buf.getvalue().count("verified") == 9


@criterion(10, "frontend round trip and byte-identical CLI transcripts")
def _c10():
    for name in BUILTINS:
        sc = load_builtin(name)
        text = render_scenario(sc)
        assert render_scenario(parse_scenario(text)) == text
    from test_cli import CASES, GOLDEN
    for name, argv, code in CASES:
        runs = [subprocess.run([sys.executable, "-m", "varcomplex.frontend.cli", *argv],
                               capture_output=True, check=False) for _ in range(2)]
        assert runs[0].stdout == runs[1].stdout and runs[0].returncode == code, name
        assert runs[0].stdout.decode() == (GOLDEN / f"{name}.txt").read_text(), name


TESTS = [_c1, _c2, _c3, _c4, _c5, _c6, _c7, _c8, _c9, _c10]
for _t in TESTS:
    globals()[_t.__name__] = _t


if __name__ == "__main__":
    for t in TESTS:
        with contextlib.suppress(BaseException):
            t()
    for k in sorted(RESULTS):
        print(RESULTS[k])
    sys.exit(0 if all(" PASS " in r for r in RESULTS.values()) else 1)
