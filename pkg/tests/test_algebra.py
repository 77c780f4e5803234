"""Scalar layer: exact arithmetic, partial and total derivatives, substitution."""

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from _kit import ALPHA, I, MU, PHI, PHIBAR, Q, atom_symbol, coord, jet, to_sympy
from varcomplex.algebra import (
    QI,
    Coord,
    Func,
    Jet,
    ScalarExpr,
    UnpairedFieldError,
    FieldSymbol,
    conjugate,
    direction_name,
    partial_wrt_jet,
    scalar,
    substitute,
    total_derivative,
    total_derivative_multi,
)

ATOMS_1D = [jet(Q), jet(Q, 0), jet(Q, 0, 0), coord(0), MU]
ATOMS_2D = [jet(PHI), jet(PHI, 0), jet(PHI, 1), jet(PHIBAR), jet(PHIBAR, 0, 1), coord(1), MU]


def polys(atoms):
    numbers = st.builds(lambda a, b, c: QI(Fraction(a, b), c),
                        st.integers(-4, 4), st.integers(1, 3), st.integers(-2, 2))
    monomial = st.tuples(numbers, st.lists(st.sampled_from(atoms), max_size=3))

    def build(monos):
        out = ScalarExpr()
        for c, fs in monos:
            term = ScalarExpr.const(c)
            for f in fs:
                term = term * f
            out = out + term
        return out
    return st.lists(monomial, max_size=4).map(build)


# --------------------------------------------------------------------------
# numbers


def test_qi_arithmetic_is_exact():
    a = QI(Fraction(1, 3), 2)
    assert a * a.conjugate() == QI(Fraction(1, 9) + 4)
    assert (a / a) == QI(1)
    assert QI(Fraction(1, 2)) + QI(Fraction(1, 2)) == QI(1)


def test_direction_names():
    assert [direction_name(k) for k in range(6)] == ["t", "x", "y", "z", "x4", "x5"]


# --------------------------------------------------------------------------
# ring operations against sympy


@settings(max_examples=60, deadline=None)
@given(polys(ATOMS_2D), polys(ATOMS_2D))
def test_ring_operations_match_sympy(f, g):
    assert to_sympy(f + g) == sp.expand(to_sympy(f) + to_sympy(g))
    assert to_sympy(f * g) == sp.expand(to_sympy(f) * to_sympy(g))
    assert to_sympy(f - f) == 0


@settings(max_examples=60, deadline=None)
@given(polys(ATOMS_2D))
def test_partial_derivative_matches_sympy(f):
    for u in (Jet(PHI), Jet(PHI, (0,)), Jet(PHIBAR, (0, 1))):
        assert to_sympy(partial_wrt_jet(f, u)) == sp.expand(sp.diff(to_sympy(f), atom_symbol(u)))


def _sympy_total_derivative(expr, mu, n, fields, max_order=3):
    """D_mu computed by letting every jet be the matching derivative of a function."""
    xs = sp.symbols("t x y z")[:n]
    funcs = {f: sp.Function(f)(*xs) for f in fields}
    subs = {}
    for f, fn in funcs.items():
        subs[sp.Symbol(f)] = fn
        for order in range(1, max_order + 1):
            for idx in _multi_indices(n, order):
                name = f + "_" + "".join(str(xs[m]) for m in idx)
                subs[sp.Symbol(name)] = sp.diff(fn, *[xs[m] for m in idx])
    lifted = expr.subs(subs, simultaneous=True)
    back = {}
    for sym, d in subs.items():
        back[d] = sym
    out = sp.diff(lifted, xs[mu])
    # map every derivative back onto a jet symbol, highest order first
    for f, fn in funcs.items():
        for order in range(max_order + 1, 0, -1):
            for idx in _multi_indices(n, order):
                name = f + "_" + "".join(str(xs[m]) for m in idx)
                out = out.subs(sp.diff(fn, *[xs[m] for m in idx]), sp.Symbol(name))
        out = out.subs(fn, sp.Symbol(f))
    return sp.expand(out)


def _multi_indices(n, order):
    import itertools
    return list(itertools.combinations_with_replacement(range(n), order))


@settings(max_examples=40, deadline=None)
@given(polys(ATOMS_2D), st.sampled_from([0, 1]))
def test_total_derivative_matches_sympy_chain_rule(f, mu):
    ours = to_sympy(total_derivative(f, mu))
    oracle = _sympy_total_derivative(to_sympy(f), mu, 2, ("phi", "phibar"))
    assert sp.expand(ours - oracle) == 0


@settings(max_examples=40, deadline=None)
@given(polys(ATOMS_2D))
def test_total_derivatives_commute(f):
    assert total_derivative(total_derivative(f, 0), 1) == total_derivative(total_derivative(f, 1), 0)
    assert total_derivative_multi(f, (1, 0)) == total_derivative_multi(f, (0, 1))


# --------------------------------------------------------------------------
# worked values


def test_partial_examples():
    assert partial_wrt_jet(jet(Q) * jet(Q, 0), Jet(Q, (0,))) == jet(Q)
    assert partial_wrt_jet(MU * MU * jet(PHI) * jet(PHIBAR), Jet(PHI)) == MU * MU * jet(PHIBAR)
    assert partial_wrt_jet(jet(Q, 0) ** 3 + coord(0), Jet(Q)).is_zero()


def test_total_derivative_examples():
    assert total_derivative(jet(Q), 0) == jet(Q, 0)
    assert total_derivative(coord(0), 0) == scalar(1)
    assert total_derivative(jet(Q) ** 2, 0) == jet(Q) * jet(Q, 0) * 2


@pytest.mark.parametrize("concrete", ["q**3*v**2 + t*v*q + v**4", "q*v**3*t**2 - 5*v*q**2"])
def test_formal_function_chain_rule_matches_sympy(concrete):
    """D_t of dL/dv, with L replaced afterwards by a concrete polynomial."""
    q, v, t = sp.symbols("q v t")
    Lc = sp.sympify(concrete)
    args = (Jet(Q), Jet(Q, (0,)), Coord(0))
    ours = total_derivative(ScalarExpr.atom(Func("L", args, (1,))), 0)

    def lift(expr):
        out = 0
        for mono, c in expr.items():
            term = sp.Rational(c.re.numerator, c.re.denominator)
            for a, e in mono:
                if isinstance(a, Func):
                    base = Lc
                    for s in a.slots:
                        base = sp.diff(base, (q, v, t)[s])
                    term *= base.subs({q: sp.Symbol("q"), v: sp.Symbol("q_t")}, simultaneous=True) ** e
                else:
                    term *= atom_symbol(a) ** e
            out += term
        return sp.expand(out)

    qf = sp.Function("q")(t)
    on_curve = sp.diff(Lc, v).subs({q: qf, v: sp.diff(qf, t)}, simultaneous=True)
    oracle = sp.diff(on_curve, t).subs(sp.diff(qf, t, 2), sp.Symbol("q_tt"))
    oracle = oracle.subs(sp.diff(qf, t), sp.Symbol("q_t")).subs(qf, sp.Symbol("q"))
    assert sp.expand(lift(ours) - oracle) == 0


def test_substitute_examples():
    f = jet(Q, 0, 0) + jet(Q)
    assert substitute(f, {Jet(Q, (0, 0)): -jet(Q)}).is_zero()
    assert substitute(f, {}) == f
    assert substitute(jet(PHI, 0) * jet(PHIBAR, 0), {Jet(PHI, (0,)): scalar(0)}).is_zero()


def test_conjugation():
    assert conjugate(I * ALPHA * jet(PHI)) == -I * ALPHA * jet(PHIBAR)
    assert conjugate(jet(Q, 0)) == jet(Q, 0)
    f = I * jet(PHI, 1) * jet(PHIBAR) + MU * 3
    assert conjugate(conjugate(f)) == f


def test_unpaired_complex_field_is_rejected():
    lonely = FieldSymbol("psi", None, False)
    with pytest.raises(UnpairedFieldError):
        conjugate(ScalarExpr.atom(Jet(lonely)))


def test_canonical_form_is_order_independent():
    a = jet(PHI) * jet(PHIBAR, 0) + MU
    b = MU + jet(PHIBAR, 0) * jet(PHI)
    assert a == b and hash(a) == hash(b)
