"""Vertical and horizontal differentials, contractions and Lie derivatives.

``vertical_diff`` (del) and ``horizontal_diff`` (d) are anti-derivations of
total degree one; on coefficients they act through jet partials and total
derivatives.  Generator-level rules are registered with
:func:`functools.singledispatch` so that other modules (the gauge algebra)
can attach their own generator kinds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import singledispatch
from typing import Mapping, Optional

from .algebra import (
    Jet,
    ScalarExpr,
    jets_in,
    partial_wrt_jet,
    scalar,
    total_derivative,
    total_derivative_multi,
)
from .forms import Form, Generator, Horizontal, StarAtom, Vertical

__all__ = [
    "KillingField",
    "UnsupportedContractionError",
    "vertical_diff",
    "horizontal_diff",
    "total_diff",
    "interior",
    "lie_total",
    "lie_vertical",
    "lie_horizontal",
]


class UnsupportedContractionError(ValueError):
    """Contraction through an opaque star atom by a field with horizontal part."""


@dataclass(frozen=True)
class KillingField:
    """Vector field on field space x spacetime given by its contraction table.

    ``horizontal`` maps a direction to ``X _| dx^mu`` (missing entries are 0).
    ``vertical`` maps a base field name to ``X _| del(u)``; the value on a jet
    ``u_I`` is the total derivative ``D_I`` of the base value.
    """

    name: str
    horizontal: Mapping[int, ScalarExpr] = field(default_factory=dict)
    vertical: Mapping[str, ScalarExpr] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "horizontal",
                           {mu: scalar(v) for mu, v in dict(self.horizontal).items()
                            if not scalar(v).is_zero()})
        object.__setattr__(self, "vertical",
                           {k: scalar(v) for k, v in dict(self.vertical).items()})
        object.__setattr__(self, "_cache", {})

    def __hash__(self):
        return hash((self.name, tuple(sorted(self.horizontal.items())),
                     tuple(sorted(self.vertical.items()))))

    def __eq__(self, other):
        if not isinstance(other, KillingField) or type(other) is not type(self):
            return NotImplemented
        return (self.name, self.horizontal, self.vertical) == (
            other.name, other.horizontal, other.vertical)

    @property
    def is_vertical_only(self) -> bool:
        return not self.horizontal

    def on_dx(self, mu: int) -> ScalarExpr:
        return self.horizontal.get(mu, scalar(0))

    def on_jet(self, jet: Jet) -> ScalarExpr:
        """``X _| del(u_I)``, prolonged from the base declaration."""
        cache = self._cache
        if jet not in cache:
            base = self.vertical.get(jet.field.name)
            cache[jet] = scalar(0) if base is None else total_derivative_multi(base, jet.index)
        return cache[jet]

    def substitute_constants(self, name: str, values: Mapping) -> "KillingField":
        """Copy with constants replaced by numbers, e.g. a concrete translation."""
        from .algebra import Const, _map_atoms

        def image(a):
            if isinstance(a, Const) and a.name in values:
                return scalar(values[a.name])
            return ScalarExpr.atom(a)

        return KillingField(
            name,
            {mu: _map_atoms(v, image) for mu, v in self.horizontal.items()},
            {k: _map_atoms(v, image) for k, v in self.vertical.items()},
        )


# --------------------------------------------------------------------------
# generator rules


@singledispatch
def vdiff_generator(g: Generator, n: int) -> Form:
    raise TypeError(f"no vertical differential rule for {type(g).__name__}")


@singledispatch
def hdiff_generator(g: Generator, n: int) -> Form:
    raise TypeError(f"no horizontal differential rule for {type(g).__name__}")


@singledispatch
def contract_generator(g: Generator, X: KillingField, n: int) -> Form:
    raise TypeError(f"no contraction rule for {type(g).__name__}")


@vdiff_generator.register
def _(g: Horizontal, n: int) -> Form:
    return Form.zero(n)


@vdiff_generator.register
def _(g: Vertical, n: int) -> Form:
    return Form.zero(n)


@vdiff_generator.register
def _(g: StarAtom, n: int) -> Form:
    # star of a constant basis monomial
    return Form.zero(n)


@hdiff_generator.register
def _(g: Horizontal, n: int) -> Form:
    return Form.zero(n)


@hdiff_generator.register
def _(g: Vertical, n: int) -> Form:
    # d(del u_I) = -del(d u_I) = sum_mu dx^mu ^ del u_{I mu}
    return Form.from_products(
        n, [(1, [Horizontal(mu), Vertical(g.jet.extend(mu))]) for mu in range(n)])


@hdiff_generator.register
def _(g: StarAtom, n: int) -> Form:
    # flat coordinate star: *dx^I has constant coefficients
    return Form.zero(n)


@contract_generator.register
def _(g: Horizontal, X: KillingField, n: int) -> Form:
    return Form.scalar(X.on_dx(g.mu), n)


@contract_generator.register
def _(g: Vertical, X: KillingField, n: int) -> Form:
    return Form.scalar(X.on_jet(g.jet), n)


@contract_generator.register
def _(g: StarAtom, X: KillingField, n: int) -> Form:
    if not X.is_vertical_only:
        raise UnsupportedContractionError(
            f"Killing field {X.name!r} has horizontal contractions; contracting it "
            "through an abstract star requires an explicit hodge table")
    return Form.zero(n)


# --------------------------------------------------------------------------
# differentials


def _coeff_vertical(c: ScalarExpr, n: int) -> Form:
    acc = {}
    for u in sorted(jets_in(c), key=Jet.key):
        dc = partial_wrt_jet(c, u)
        if not dc.is_zero():
            acc[(Vertical(u),)] = dc
    return Form(n, acc)


def _coeff_horizontal(c: ScalarExpr, n: int) -> Form:
    acc = {}
    for mu in range(n):
        dc = total_derivative(c, mu)
        if not dc.is_zero():
            acc[(Horizontal(mu),)] = dc
    return Form(n, acc)


def _antiderivation(a: Form, coeff_rule, gen_rule) -> Form:
    """Apply a degree +1 anti-derivation defined by coefficient and generator rules."""
    n = a.n
    out = Form.zero(n)
    for factors, c in a:
        body = Form(n, {factors: scalar(1)})
        dc = coeff_rule(c, n) if coeff_rule else None
        if dc:
            out = out + (dc ^ body)
        sign = 1
        for i, g in enumerate(factors):
            dg = gen_rule(g, n)
            if dg:
                left = Form(n, {factors[:i]: c if sign > 0 else -c})
                right = Form(n, {factors[i + 1:]: scalar(1)})
                out = out + (left ^ dg ^ right)
            if g.degree & 1:
                sign = -sign
    return out


def vertical_diff(a: Form) -> Form:
    """The vertical differential del: raises bidegree (p, q) to (p + 1, q)."""
    return _antiderivation(a, _coeff_vertical, vdiff_generator)


def horizontal_diff(a: Form) -> Form:
    """The horizontal differential d: raises bidegree (p, q) to (p, q + 1)."""
    return _antiderivation(a, _coeff_horizontal, hdiff_generator)


def total_diff(a: Form) -> Form:
    """D = del + d."""
    return vertical_diff(a) + horizontal_diff(a)


def interior(X: KillingField, a: Form) -> Form:
    """Contraction ``X _| a``: an anti-derivation of degree -1."""
    n = a.n
    out = Form.zero(n)
    for factors, c in a:
        sign = 1
        for i, g in enumerate(factors):
            xg = contract_generator(g, X, n)
            if xg:
                left = Form(n, {factors[:i]: c if sign > 0 else -c})
                right = Form(n, {factors[i + 1:]: scalar(1)})
                out = out + (left ^ xg ^ right)
            if g.degree & 1:
                sign = -sign
    return out


def lie_total(X: KillingField, a: Form) -> Form:
    """Cartan formula with the total differential: ``D(X _| a) + X _| Da``."""
    return total_diff(interior(X, a)) + interior(X, total_diff(a))


def lie_vertical(X: KillingField, a: Form) -> Form:
    return vertical_diff(interior(X, a)) + interior(X, vertical_diff(a))


def lie_horizontal(X: KillingField, a: Form) -> Form:
    return horizontal_diff(interior(X, a)) + interior(X, horizontal_diff(a))


def contact_form(jet: Jet, n: int) -> Form:
    """``D(u_I) - sum_mu u_{I mu} dx^mu``, which equals ``del u_I``."""
    u = Form.scalar(ScalarExpr.atom(jet), n)
    out = total_diff(u)
    for mu in range(n):
        out = out - Form.scalar(ScalarExpr.atom(jet.extend(mu)), n) * Form.dx(mu, n)
    return out


def zero_killing(name: str = "zero") -> KillingField:
    return KillingField(name)


def killing_from(name: str, horizontal: Optional[Mapping] = None,
                 vertical: Optional[Mapping] = None) -> KillingField:
    return KillingField(name, horizontal or {}, vertical or {})
