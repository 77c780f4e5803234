"""Exact scalar coefficients over jet coordinates.

A :class:`ScalarExpr` is a polynomial with complex-rational coefficients in a
finite set of atoms: jet coordinates ``u_I``, named real constants, explicit
spacetime coordinates and formal (real-valued) function applications.  Every
expression is kept in a canonical sorted form so that structural equality is
semantic equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Iterator, Mapping, Optional, Union

__all__ = [
    "QI",
    "FieldSymbol",
    "Jet",
    "Const",
    "Coord",
    "Func",
    "ScalarExpr",
    "UnpairedFieldError",
    "scalar",
    "partial_wrt_jet",
    "total_derivative",
    "substitute",
    "conjugate",
    "jets_in",
    "direction_name",
]


class UnpairedFieldError(ValueError):
    """Raised when conjugating a complex field without a declared partner."""


# --------------------------------------------------------------------------
# complex rationals


_FZERO = Fraction(0)


class QI:
    """Exact complex rational ``re + i*im``."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction, "QI"] = 0, im: Union[int, Fraction] = 0):
        if isinstance(re, QI):
            self.re, self.im = re.re, re.im
            return
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, x) -> "QI":
        if isinstance(x, QI):
            return x
        if isinstance(x, complex):
            raise TypeError("floating point complex numbers are not exact")
        if isinstance(x, (int, Rational)):
            return cls(Fraction(x))
        raise TypeError(f"cannot interpret {x!r} as an exact complex rational")

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if not isinstance(other, QI):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __add__(self, other):
        other = QI.coerce(other)
        if not self.im and not other.im:
            return QI(self.re + other.re, _FZERO)
        return QI(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = QI.coerce(other)
        return QI(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return QI.coerce(other) - self

    def __mul__(self, other):
        other = QI.coerce(other)
        if not self.im and not other.im:
            return QI(self.re * other.re, _FZERO)
        return QI(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = QI.coerce(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero")
        return self * QI(other.re / den, -other.im / den)

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def key(self):
        return (self.re, self.im)

    def __repr__(self):
        return f"QI({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{_imag_str(abs(self.im))})"


def _imag_str(v: Fraction) -> str:
    if v == 1:
        return "i"
    if v == -1:
        return "-i"
    if v.denominator == 1:
        return f"{v.numerator}*i"
    return f"{v.numerator}/{v.denominator}*i"


ONE = QI(1)
ZERO = QI(0)
I_UNIT = QI(0, 1)


# --------------------------------------------------------------------------
# atoms

_DIRECTION_NAMES = ("t", "x", "y", "z")


def direction_name(mu: int) -> str:
    """Default coordinate name of direction ``mu``: t, x, y, z, x4, x5, ..."""
    return _DIRECTION_NAMES[mu] if mu < len(_DIRECTION_NAMES) else f"x{mu}"



@dataclass(frozen=True)
class FieldSymbol:
    """A dependent field variable.

    ``partner`` names the conjugate field for complex fields; a real field is
    its own conjugate.  A complex field with no partner cannot be conjugated.
    """

    name: str
    partner: Optional[str] = None
    real: bool = False

    def __post_init__(self):
        if self.real and self.partner not in (None, self.name):
            raise ValueError(f"real field {self.name!r} cannot have a conjugate partner")

    def conjugate(self) -> "FieldSymbol":
        if self.real:
            return self
        if self.partner is None:
            raise UnpairedFieldError(
                f"complex field {self.name!r} has no declared conjugate partner")
        return FieldSymbol(self.partner, self.name, False)


class Atom:
    """Base class of polynomial indeterminates; subclasses supply ``key``."""

    rank = 99

    def key(self) -> tuple:
        raise NotImplementedError

    def __lt__(self, other):
        return self.key() < other.key()


@dataclass(frozen=True, eq=True)
class Jet(Atom):
    """Jet coordinate ``field_I`` with a symmetric multi-index of directions."""

    field: FieldSymbol
    index: tuple = ()

    rank = 0

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(sorted(self.index)))

    def key(self):
        return (0, self.field.name, len(self.index), self.index)

    def extend(self, *mus: int) -> "Jet":
        return Jet(self.field, self.index + tuple(mus))

    @property
    def order(self) -> int:
        return len(self.index)


@dataclass(frozen=True)
class Const(Atom):
    """A named real constant (mass, symmetry parameter, ...)."""

    name: str

    def key(self):
        return (1, self.name)


@dataclass(frozen=True)
class Coord(Atom):
    """Explicit spacetime coordinate ``x^mu``."""

    mu: int

    def key(self):
        return (2, self.mu)


@dataclass(frozen=True)
class Func(Atom):
    """Formal real-valued function ``name(args)`` differentiated in ``slots``.

    ``slots`` is the sorted multiset of 0-based argument positions already
    differentiated, so mixed partials commute.
    """

    name: str
    args: tuple
    slots: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(scalar(x) for x in self.args))
        object.__setattr__(self, "slots", tuple(sorted(self.slots)))

    def key(self):
        return (3, self.name, self.slots, tuple(a.key() for a in self.args))

    def differentiated(self, slot: int) -> "Func":
        return Func(self.name, self.args, self.slots + (slot,))


# --------------------------------------------------------------------------
# polynomials

Monomial = tuple  # sorted tuple of (Atom, exponent)


def _mono_key(mono: Monomial):
    # total degree first, then atoms lexicographically
    return (sum(e for _, e in mono), tuple((a.key(), e) for a, e in mono))


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    powers = dict(m1)
    for a, e in m2:
        powers[a] = powers.get(a, 0) + e
    return tuple(sorted(powers.items(), key=lambda ae: ae[0].key()))


class ScalarExpr:
    """Canonical complex-rational polynomial in :class:`Atom` indeterminates.

    Instances are immutable; arithmetic returns new canonical expressions.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, QI]] = None):
        items = []
        if terms:
            for mono, c in terms.items():
                c = QI.coerce(c)
                if c:
                    items.append((mono, c))
        items.sort(key=lambda mc: _mono_key(mc[0]))
        self._terms = tuple(items)
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "ScalarExpr":
        return cls({(): QI.coerce(c)})

    @classmethod
    def atom(cls, a: Atom, power: int = 1) -> "ScalarExpr":
        if power == 0:
            return cls.const(1)
        return cls({((a, power),): ONE})

    # access ---------------------------------------------------------------
    def items(self):
        return self._terms

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def as_number(self) -> Optional[QI]:
        """Return the value if the expression is a pure number, else None."""
        if not self._terms:
            return ZERO
        if len(self._terms) == 1 and self._terms[0][0] == ():
            return self._terms[0][1]
        return None

    def atoms(self) -> set:
        out = set()
        for mono, _ in self._terms:
            for a, _ in mono:
                out.add(a)
        return out

    def key(self):
        return tuple((_mono_key(m), c.key()) for m, c in self._terms)

    # equality -------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, ScalarExpr):
            try:
                other = scalar(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = scalar(other)
        acc = dict(self._terms)
        for mono, c in other._terms:
            acc[mono] = acc.get(mono, ZERO) + c
        return ScalarExpr(acc)

    __radd__ = __add__

    def __neg__(self):
        return ScalarExpr({m: -c for m, c in self._terms})

    def __sub__(self, other):
        return self + (-scalar(other))

    def __rsub__(self, other):
        return scalar(other) - self

    def __mul__(self, other):
        if not isinstance(other, ScalarExpr):
            try:
                other = scalar(other)
            except TypeError:
                return NotImplemented
        acc: dict = {}
        for m1, c1 in self._terms:
            for m2, c2 in other._terms:
                m = _mono_mul(m1, m2)
                acc[m] = acc.get(m, ZERO) + c1 * c2
        return ScalarExpr(acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        num = scalar(other).as_number()
        if num is None:
            raise TypeError("division only by exact numbers")
        inv = ONE / num
        return ScalarExpr({m: c * inv for m, c in self._terms})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = ScalarExpr.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        return f"ScalarExpr({self!s})"

    def __str__(self):
        from .frontend.render import render_scalar
        return render_scalar(self)


def scalar(x) -> ScalarExpr:
    """Coerce numbers, atoms and expressions to :class:`ScalarExpr`."""
    if isinstance(x, ScalarExpr):
        return x
    if isinstance(x, Atom):
        return ScalarExpr.atom(x)
    return ScalarExpr.const(QI.coerce(x))


# --------------------------------------------------------------------------
# differentiation machinery


def _derive(f: ScalarExpr, atom_deriv: Callable[[Atom], ScalarExpr]) -> ScalarExpr:
    """Apply the derivation determined by its values on atoms."""
    acc: dict = {}
    cache: dict = {}
    for mono, c in f:
        for i, (a, e) in enumerate(mono):
            if a not in cache:
                cache[a] = atom_deriv(a)
            da = cache[a]
            if da.is_zero():
                continue
            rest = list(mono)
            if e == 1:
                del rest[i]
            else:
                rest[i] = (a, e - 1)
            rest = tuple(rest)
            for dm, dc in da:
                m = _mono_mul(rest, dm)
                acc[m] = acc.get(m, ZERO) + c * e * dc
    return ScalarExpr(acc)


_ZERO_EXPR = ScalarExpr()


def partial_wrt_jet(f: ScalarExpr, u: Jet) -> ScalarExpr:
    """Formal partial derivative, every jet coordinate independent."""
    f = scalar(f)

    def d(a: Atom) -> ScalarExpr:
        if isinstance(a, Jet):
            return ScalarExpr.const(1) if a == u else _ZERO_EXPR
        if isinstance(a, Func):
            return _chain(a, lambda arg: partial_wrt_jet(arg, u))
        return _ZERO_EXPR

    return _derive(f, d)


def total_derivative(f: ScalarExpr, mu: int) -> ScalarExpr:
    """Total derivative ``D_mu``: explicit coordinate part plus prolongation."""
    f = scalar(f)

    def d(a: Atom) -> ScalarExpr:
        if isinstance(a, Jet):
            return ScalarExpr.atom(a.extend(mu))
        if isinstance(a, Coord):
            return ScalarExpr.const(1) if a.mu == mu else _ZERO_EXPR
        if isinstance(a, Func):
            return _chain(a, lambda arg: total_derivative(arg, mu))
        return _ZERO_EXPR

    return _derive(f, d)


def total_derivative_multi(f: ScalarExpr, index: Iterable[int]) -> ScalarExpr:
    for mu in index:
        f = total_derivative(f, mu)
    return f


def _chain(fn: Func, inner: Callable[[ScalarExpr], ScalarExpr]) -> ScalarExpr:
    out = _ZERO_EXPR
    for k, arg in enumerate(fn.args):
        darg = inner(arg)
        if not darg.is_zero():
            out = out + ScalarExpr.atom(fn.differentiated(k)) * darg
    return out


# --------------------------------------------------------------------------
# substitution and conjugation


def _map_atoms(f: ScalarExpr, image: Callable[[Atom], ScalarExpr]) -> ScalarExpr:
    out = _ZERO_EXPR
    cache: dict = {}
    for mono, c in f:
        term = ScalarExpr.const(c)
        for a, e in mono:
            if a not in cache:
                cache[a] = image(a)
            term = term * (cache[a] ** e)
        out = out + term
    return out


def substitute(f: ScalarExpr, bindings: Mapping[Jet, ScalarExpr]) -> ScalarExpr:
    """Simultaneously replace jet coordinates by expressions."""
    f = scalar(f)
    if not bindings:
        return f
    bindings = {k: scalar(v) for k, v in bindings.items()}

    def image(a: Atom) -> ScalarExpr:
        if isinstance(a, Jet) and a in bindings:
            return bindings[a]
        if isinstance(a, Func):
            return ScalarExpr.atom(
                Func(a.name, tuple(substitute(x, bindings) for x in a.args), a.slots))
        return ScalarExpr.atom(a)

    return _map_atoms(f, image)


def conjugate(f: ScalarExpr) -> ScalarExpr:
    """Complex conjugation: conjugate numbers and swap fields with partners.

    Constants, coordinates and formal functions are real.
    """
    f = scalar(f)

    def image(a: Atom) -> ScalarExpr:
        if isinstance(a, Jet):
            return ScalarExpr.atom(Jet(a.field.conjugate(), a.index))
        if isinstance(a, Func):
            return ScalarExpr.atom(Func(a.name, tuple(conjugate(x) for x in a.args), a.slots))
        return ScalarExpr.atom(a)

    conj_coeffs = ScalarExpr({m: c.conjugate() for m, c in f})
    return _map_atoms(conj_coeffs, image)


def jets_in(f: ScalarExpr) -> set:
    """All jet coordinates occurring in ``f``, including inside function arguments."""
    out = set()
    for a in scalar(f).atoms():
        if isinstance(a, Jet):
            out.add(a)
        elif isinstance(a, Func):
            for arg in a.args:
                out |= jets_in(arg)
    return out


def is_constant(f: ScalarExpr) -> bool:
    """True when ``f`` involves only numbers and named constants."""
    return all(isinstance(a, Const) for a in scalar(f).atoms())
