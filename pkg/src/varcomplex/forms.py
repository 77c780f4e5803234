"""Bigraded exterior algebra on field space x spacetime.

A :class:`Form` is a finite sum of terms ``coeff * g1 ^ g2 ^ ... ^ gk`` with
the generators kept in a fixed global order.  Every reordering transposition
contributes the graded sign ``(-1)^(deg a * deg b)`` (total degrees), odd
generators square to zero and any term of horizontal degree above the
spacetime dimension is dropped.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional

from .algebra import Jet, ScalarExpr, scalar

__all__ = [
    "Bidegree",
    "Generator",
    "Horizontal",
    "Vertical",
    "StarAtom",
    "Form",
    "AmbientMismatchError",
    "ResourceBoundError",
    "term_limit",
    "wedge",
    "add",
    "scale",
    "project_bidegree",
]


class AmbientMismatchError(ValueError):
    """Forms living over spacetimes of different dimension were combined."""


class ResourceBoundError(RuntimeError):
    """An expression grew past the active term limit."""


_MAX_TERMS: contextvars.ContextVar[Optional[int]] = contextvars.ContextVar(
    "varcomplex_max_terms", default=None)


@contextlib.contextmanager
def term_limit(max_terms: Optional[int]):
    """Abort with :class:`ResourceBoundError` when any form exceeds ``max_terms`` monomials."""
    token = _MAX_TERMS.set(max_terms)
    try:
        yield
    finally:
        _MAX_TERMS.reset(token)


class Bidegree(NamedTuple):
    p: int
    q: int

    @property
    def total(self) -> int:
        return self.p + self.q


# --------------------------------------------------------------------------
# generators


class Generator:
    """A wedge factor with fixed bidegree.

    Subclasses define ``p``, ``q`` and ``key()``; the first entry of the key
    is the class rank that fixes the global order horizontal < star < trace <
    vertical.
    """

    p: int = 0
    q: int = 0

    def key(self) -> tuple:
        raise NotImplementedError

    @property
    def degree(self) -> int:
        return self.p + self.q

    @property
    def bidegree(self) -> Bidegree:
        return Bidegree(self.p, self.q)


@dataclass(frozen=True)
class Horizontal(Generator):
    """``dx^mu``."""

    mu: int

    p = 0
    q = 1

    def key(self):
        return (0, self.mu)


@dataclass(frozen=True)
class StarAtom(Generator):
    """Unexpanded Hodge dual ``*(dx^I)`` of a horizontal basis monomial.

    ``inner`` is the strictly increasing tuple of directions of the monomial;
    the empty tuple stands for ``*1``.
    """

    inner: tuple
    n: int

    @property
    def p(self):
        return 0

    @property
    def q(self):
        return self.n - len(self.inner)

    def key(self):
        return (1, len(self.inner), self.inner)


@dataclass(frozen=True)
class Vertical(Generator):
    """Contact generator ``del u_I``."""

    jet: Jet

    p = 1
    q = 0

    def key(self):
        return (3,) + self.jet.key()


def canonical_order(factors: Iterable[Generator]):
    """Sort generators into canonical order.

    Returns ``(sign, ordered_tuple)``; sign is 0 when an odd generator repeats.
    """
    out: list = []
    sign = 1
    for g in factors:
        gk = g.key()
        gd = g.degree & 1
        pos = len(out)
        while pos > 0:
            prev = out[pos - 1]
            pk = prev.key()
            if pk < gk:
                break
            if pk == gk:
                if gd:
                    return 0, ()
                break
            if gd and (prev.degree & 1):
                sign = -sign
            pos -= 1
        out.insert(pos, g)
    return sign, tuple(out)


def _factors_bidegree(factors) -> Bidegree:
    p = q = 0
    for g in factors:
        p += g.p
        q += g.q
    return Bidegree(p, q)


# --------------------------------------------------------------------------
# forms


class Form:
    """Normalized element of the bigraded algebra over an n-dimensional spacetime.

    Equality is equality of canonical term tables.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Optional[Mapping[tuple, ScalarExpr]] = None):
        # terms are assumed to carry canonically ordered factor tuples
        self.n = n
        items = []
        if terms:
            for factors, c in terms.items():
                c = scalar(c)
                if c.is_zero():
                    continue
                if _factors_bidegree(factors).q > n:
                    continue
                items.append((factors, c))
        limit = _MAX_TERMS.get()
        if limit is not None:
            # size counts scalar monomials, so coefficient growth is bounded too
            size = sum(len(c) for _, c in items)
            if size > limit:
                raise ResourceBoundError(f"expression grew to {size} terms (limit {limit})")
        items.sort(key=lambda fc: tuple(g.key() for g in fc[0]))
        self._terms = tuple(items)
        self._hash = None

    # constructors --------------------------------------------------------
    @classmethod
    def from_products(cls, n: int, products: Iterable) -> "Form":
        """Build from ``(coeff, factor_list)`` pairs in arbitrary factor order."""
        acc: dict = {}
        for c, factors in products:
            sign, ordered = canonical_order(factors)
            if sign == 0:
                continue
            c = scalar(c)
            if sign < 0:
                c = -c
            if ordered in acc:
                acc[ordered] = acc[ordered] + c
            else:
                acc[ordered] = c
        return cls(n, acc)

    @classmethod
    def zero(cls, n: int) -> "Form":
        return cls(n)

    @classmethod
    def scalar(cls, f, n: int) -> "Form":
        return cls(n, {(): scalar(f)})

    @classmethod
    def one(cls, n: int) -> "Form":
        return cls.scalar(1, n)

    @classmethod
    def dx(cls, mu: int, n: int) -> "Form":
        if not 0 <= mu < n:
            raise ValueError(f"direction {mu} out of range for dimension {n}")
        return cls(n, {(Horizontal(mu),): scalar(1)})

    @classmethod
    def delta(cls, jet: Jet, n: int) -> "Form":
        if any(not 0 <= mu < n for mu in jet.index):
            raise ValueError(f"jet index {jet.index} out of range for dimension {n}")
        return cls(n, {(Vertical(jet),): scalar(1)})

    @classmethod
    def generator(cls, g: Generator, n: int) -> "Form":
        return cls(n, {(g,): scalar(1)})

    # access ----------------------------------------------------------------
    def terms(self) -> tuple:
        """Canonical ``(factors, coeff)`` pairs."""
        return self._terms

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def bidegrees(self) -> list:
        return sorted({_factors_bidegree(f) for f, _ in self._terms})

    def components(self) -> dict:
        """Mapping bidegree -> homogeneous component."""
        return {b: project_bidegree(self, b.p, b.q) for b in self.bidegrees()}

    def bidegree(self) -> Optional[Bidegree]:
        """The bidegree of a homogeneous nonzero form, else None."""
        bs = self.bidegrees()
        return bs[0] if len(bs) == 1 else None

    def total_degrees(self) -> set:
        return {b.total for b in self.bidegrees()}

    def coefficient(self, factors: Iterable[Generator]) -> ScalarExpr:
        """Coefficient of a factor product (given in any order, sign applied)."""
        sign, ordered = canonical_order(factors)
        if sign == 0:
            return scalar(0)
        for f, c in self._terms:
            if f == ordered:
                return c if sign > 0 else -c
        return scalar(0)

    def generators(self) -> set:
        return {g for f, _ in self._terms for g in f}

    def map_coefficients(self, fn) -> "Form":
        acc: dict = {}
        for f, c in self._terms:
            acc[f] = fn(c)
        return Form(self.n, acc)

    # equality ---------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int,)) and other == 0:
            return self.is_zero()
        if not isinstance(other, Form):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self._terms))
        return self._hash

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "Form"):
        if not isinstance(other, Form):
            raise TypeError(f"expected Form, got {type(other).__name__}")
        if other.n != self.n:
            raise AmbientMismatchError(
                f"cannot combine forms over dimensions {self.n} and {other.n}")

    def __add__(self, other):
        if not isinstance(other, Form):
            other = Form.scalar(other, self.n)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return Form(self.n, {f: -c for f, c in self._terms})

    def __sub__(self, other):
        if not isinstance(other, Form):
            other = Form.scalar(other, self.n)
        return add(self, -other)

    def __rsub__(self, other):
        return Form.scalar(other, self.n) - self

    def __xor__(self, other):
        return wedge(self, other)

    def __mul__(self, other):
        if isinstance(other, Form):
            return wedge(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def __truediv__(self, other):
        inv = scalar(1) / scalar(other)
        return scale(inv, self)

    def __repr__(self):
        return f"Form(n={self.n}, {self!s})"

    def __str__(self):
        from .frontend.render import render
        return render(self, "plain")


def add(a: Form, b: Form) -> Form:
    """Termwise sum with cancellation."""
    a._check(b)
    acc = dict(a._terms)
    for f, c in b._terms:
        if f in acc:
            acc[f] = acc[f] + c
        else:
            acc[f] = c
    return Form(a.n, acc)


def scale(c, a: Form) -> Form:
    """Multiply every coefficient by the scalar ``c``."""
    c = scalar(c)
    if c.is_zero():
        return Form(a.n)
    return Form(a.n, {f: c * coef for f, coef in a._terms})


def wedge(a: Form, b: Form) -> Form:
    """Bilinear wedge product with graded signs and top-degree truncation."""
    a._check(b)
    n = a.n
    acc: dict = {}
    for fa, ca in a._terms:
        qa = _factors_bidegree(fa).q
        for fb, cb in b._terms:
            if not fa:
                sign, ordered = 1, fb
            elif not fb:
                sign, ordered = 1, fa
            else:
                if qa + _factors_bidegree(fb).q > n:
                    continue
                sign, ordered = canonical_order(fa + fb)
                if sign == 0:
                    continue
            c = ca * cb
            if sign < 0:
                c = -c
            acc[ordered] = acc[ordered] + c if ordered in acc else c
    return Form(n, acc)


def wedge_all(n: int, forms: Iterable[Form]) -> Form:
    out = Form.one(n)
    for f in forms:
        out = wedge(out, f)
    return out


def project_bidegree(a: Form, p: int, q: int) -> Form:
    """Sum of the terms of bidegree exactly ``(p, q)``."""
    return Form(a.n, {f: c for f, c in a._terms if _factors_bidegree(f) == (p, q)})


def factors_bidegree(factors) -> Bidegree:
    return _factors_bidegree(factors)
