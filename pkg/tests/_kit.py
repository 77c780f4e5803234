"""Shared builders for the test suite."""

from __future__ import annotations

import sympy as sp

from varcomplex.algebra import QI, Const, Coord, FieldSymbol, Func, Jet, ScalarExpr, scalar
from varcomplex.calculus import KillingField, horizontal_diff, vertical_diff
from varcomplex.fieldtheory import LagrangianSystem
from varcomplex.forms import Form
from varcomplex.hodge import MINKOWSKI_2D, AbstractMode, TableMode, star

PHI = FieldSymbol("phi", "phibar")
PHIBAR = PHI.conjugate()
Q = FieldSymbol("q", None, True)


def jet(f, *index) -> ScalarExpr:
    return ScalarExpr.atom(Jet(f, index))


def const(name) -> ScalarExpr:
    return ScalarExpr.atom(Const(name))


def coord(mu) -> ScalarExpr:
    return ScalarExpr.atom(Coord(mu))


MU = const("mu")
ALPHA = const("alpha")
I = ScalarExpr.const(QI(0, 1))
HALF = scalar(1) / 2


def S(f, n) -> Form:
    return Form.scalar(scalar(f), n)


def kg_forms(mode):
    """Klein-Gordon ``(L, theta)`` written exactly as the source defines them."""
    n = mode.n
    d, de = horizontal_diff, vertical_diff
    phi, phib = S(jet(PHI), n), S(jet(PHIBAR), n)
    L = (d(phib) ^ star(d(phi), mode)) * HALF - star(S(MU * MU / 2 * jet(PHI) * jet(PHIBAR), n), mode)
    theta = ((de(phi) ^ star(d(phib), mode)) + (de(phib) ^ star(d(phi), mode))) * HALF
    return L, theta


def kg_system(mode) -> LagrangianSystem:
    L, theta = kg_forms(mode)
    return LagrangianSystem(mode.n, mode, (PHI, PHIBAR), L, theta, "kg")


def kg2d() -> LagrangianSystem:
    return kg_system(TableMode(MINKOWSKI_2D))


def kg_abstract(n) -> LagrangianSystem:
    return kg_system(AbstractMode(n))


def translation(At=None, Ax=None) -> KillingField:
    At = const("At") if At is None else scalar(At)
    Ax = const("Ax") if Ax is None else scalar(Ax)
    return KillingField(
        "translation", {0: At, 1: Ax},
        {"phi": -(At * jet(PHI, 0) + Ax * jet(PHI, 1)),
         "phibar": -(At * jet(PHIBAR, 0) + Ax * jet(PHIBAR, 1))})


def u1() -> KillingField:
    return KillingField("u1", {}, {"phi": I * ALPHA * jet(PHI), "phibar": -I * ALPHA * jet(PHIBAR)})


def mechanics() -> LagrangianSystem:
    args = (Jet(Q), Jet(Q, (0,)), Coord(0))
    L = S(ScalarExpr.atom(Func("L", args)), 1) ^ Form.dx(0, 1)
    theta = S(ScalarExpr.atom(Func("L", args, (1,))), 1) ^ Form.delta(Jet(Q), 1)
    return LagrangianSystem(1, AbstractMode(1), (Q,), L, theta, "mechanics", ("t",))


# --------------------------------------------------------------------------
# sympy oracle: scalar expressions with jets as independent symbols


def to_sympy(f: ScalarExpr, names=("t", "x", "y", "z")):
    out = 0
    for mono, c in f.items():
        term = sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(
            c.im.numerator, c.im.denominator)
        for atom, e in mono:
            term *= atom_symbol(atom, names) ** e
        out += term
    return sp.expand(out)


def atom_symbol(atom, names=("t", "x", "y", "z")):
    if isinstance(atom, Jet):
        suffix = "".join(names[mu] for mu in atom.index)
        return sp.Symbol(f"{atom.field.name}_{suffix}" if suffix else atom.field.name)
    if isinstance(atom, Const):
        return sp.Symbol(atom.name)
    if isinstance(atom, Coord):
        return sp.Symbol(names[atom.mu])
    raise TypeError(f"no sympy image for {atom!r}")


def lift_with(expr: ScalarExpr, concrete, names=("q", "q_t", "t")):
    """sympy image of ``expr`` with every formal function replaced by ``concrete``.

    ``concrete`` is a sympy expression in symbols named by ``names`` (one per slot).
    """
    slots = sp.symbols(names)
    out = 0
    for mono, c in expr.items():
        term = sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(
            c.im.numerator, c.im.denominator)
        for a, e in mono:
            if isinstance(a, Func):
                base = concrete
                for s in a.slots:
                    base = sp.diff(base, slots[s])
                args = [to_sympy(x) for x in a.args]
                base = base.subs(dict(zip(slots, args)), simultaneous=True)
                term *= base ** e
            else:
                term *= atom_symbol(a) ** e
        out += term
    return sp.expand(out)


def kg_display_2j(n=2):
    """The worked translation momentum map ``2 J`` for the 2D Klein-Gordon field."""
    At, Ax = const("At"), const("Ax")
    P, Pb = (lambda *i: jet(PHI, *i)), (lambda *i: jet(PHIBAR, *i))
    dt, dx = Form.dx(0, n), Form.dx(1, n)
    dphi, dphib = Form.delta(Jet(PHI), n), Form.delta(Jet(PHIBAR), n)
    block_t = (S(P(0) * Pb(0) + P(1) * Pb(1) + MU * MU * P() * Pb(), n) ^ dx) \
        + (S(P(1) * Pb(0) + P(0) * Pb(1), n) ^ dt) + (S(P(1), n) ^ dphib) + (S(Pb(1), n) ^ dphi)
    block_x = (S(P(0) * Pb(0) + P(1) * Pb(1) - MU * MU * P() * Pb(), n) ^ dt) \
        + (S(P(1) * Pb(0) + P(0) * Pb(1), n) ^ dx) + (S(P(0), n) ^ dphib) + (S(Pb(0), n) ^ dphi)
    return (S(At, n) ^ block_t) + (S(Ax, n) ^ block_x)
