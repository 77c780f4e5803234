"""Lie-algebra-valued forms for Yang-Mills theory.

Matrix-valued forms are sums of noncommutative words of atoms.  Words are
never reordered except by the trace, whose normal form uses graded cyclic
rotation and the star pairing rule.  Traces become scalar generators
(:class:`TraceAtom`) of the ordinary form algebra, so the generic
field-theory operations apply unchanged.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .algebra import ScalarExpr, scalar
from .calculus import (
    KillingField,
    UnsupportedContractionError,
    contract_generator,
    hdiff_generator,
    vdiff_generator,
)
from .fieldtheory import LagrangianSystem, euler_lagrange, momentum_map
from .forms import AmbientMismatchError, Form, Generator, ResourceBoundError, _MAX_TERMS
from .hodge import AbstractMode, UnsupportedStarError

__all__ = [
    "MatrixAtom",
    "ConnA",
    "DConnA",
    "VarA",
    "DVarA",
    "Xi",
    "DXi",
    "StarWrap",
    "MatrixForm",
    "TraceAtom",
    "KillingGauge",
    "InhomogeneousError",
    "nc_wedge",
    "nc_vertical_diff",
    "nc_horizontal_diff",
    "nc_interior",
    "nc_star",
    "curvature",
    "covariant_derivative",
    "commutator",
    "trace",
    "trace_normal_form",
    "ym_system",
    "ym_euler_lagrange",
    "ym_momentum_map",
    "gauge_killing",
]


class InhomogeneousError(ValueError):
    """Covariant derivative of a form without a single total degree."""


# --------------------------------------------------------------------------
# atoms


class MatrixAtom:
    p: int = 0
    q: int = 0

    @property
    def degree(self) -> int:
        return self.p + self.q

    def key(self) -> tuple:
        raise NotImplementedError


@dataclass(frozen=True)
class ConnA(MatrixAtom):
    """The connection one-form A."""

    p = 0
    q = 1

    def key(self):
        return (0,)


@dataclass(frozen=True)
class DConnA(MatrixAtom):
    """dA."""

    p = 0
    q = 2

    def key(self):
        return (1,)


@dataclass(frozen=True)
class VarA(MatrixAtom):
    """del A."""

    p = 1
    q = 1

    def key(self):
        return (2,)


@dataclass(frozen=True)
class DVarA(MatrixAtom):
    """d del A."""

    p = 1
    q = 2

    def key(self):
        return (3,)


@dataclass(frozen=True)
class Xi(MatrixAtom):
    """Lie algebra element, a field-independent matrix zero-form."""

    p = 0
    q = 0

    def key(self):
        return (4,)


@dataclass(frozen=True)
class DXi(MatrixAtom):
    """d Xi."""

    p = 0
    q = 1

    def key(self):
        return (5,)


@dataclass(frozen=True)
class StarWrap(MatrixAtom):
    """``d^k *w`` for a word ``w`` (k = ``d_applied`` in {0, 1})."""

    word: tuple
    n: int
    d_applied: int = 0

    @property
    def p(self):
        return sum(a.p for a in self.word)

    @property
    def q(self):
        return self.n - sum(a.q for a in self.word) + self.d_applied

    def key(self):
        return (6, self.d_applied, tuple(a.key() for a in self.word))


def _word_degree(word) -> int:
    return sum(a.degree for a in word)


def _word_q(word) -> int:
    return sum(a.q for a in word)


def _word_key(word) -> tuple:
    return tuple(a.key() for a in word)


# --------------------------------------------------------------------------
# matrix forms


class MatrixForm:
    """Sum of ``coeff * word`` with words of matrix atoms kept in order."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Optional[Mapping[tuple, ScalarExpr]] = None):
        self.n = n
        items = []
        for w, c in (terms or {}).items():
            c = scalar(c)
            if c.is_zero() or _word_q(w) > n:
                continue
            items.append((tuple(w), c))
        limit = _MAX_TERMS.get()
        if limit is not None and len(items) > limit:
            raise ResourceBoundError(f"expression grew to {len(items)} terms (limit {limit})")
        items.sort(key=lambda wc: _word_key(wc[0]))
        self._terms = tuple(items)

    @classmethod
    def atom(cls, a: MatrixAtom, n: int) -> "MatrixForm":
        return cls(n, {(a,): scalar(1)})

    @classmethod
    def zero(cls, n: int) -> "MatrixForm":
        return cls(n)

    @classmethod
    def word(cls, word: Iterable[MatrixAtom], n: int, coeff=1) -> "MatrixForm":
        return cls(n, {tuple(word): scalar(coeff)})

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def terms(self) -> tuple:
        return self._terms

    def degrees(self) -> set:
        return {_word_degree(w) for w, _ in self._terms}

    def bidegrees(self) -> list:
        return sorted({(sum(a.p for a in w), _word_q(w)) for w, _ in self._terms})

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, MatrixForm):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, self._terms))

    def _check(self, other):
        if not isinstance(other, MatrixForm):
            raise TypeError(f"expected MatrixForm, got {type(other).__name__}")
        if other.n != self.n:
            raise AmbientMismatchError(
                f"cannot combine matrix forms over dimensions {self.n} and {other.n}")

    def __add__(self, other):
        self._check(other)
        acc = dict(self._terms)
        for w, c in other._terms:
            acc[w] = acc[w] + c if w in acc else c
        return MatrixForm(self.n, acc)

    def __neg__(self):
        return MatrixForm(self.n, {w: -c for w, c in self._terms})

    def __sub__(self, other):
        return self + (-other)

    def __xor__(self, other):
        return nc_wedge(self, other)

    def __mul__(self, other):
        if isinstance(other, MatrixForm):
            return nc_wedge(self, other)
        c = scalar(other)
        return MatrixForm(self.n, {w: c * k for w, k in self._terms})

    def __rmul__(self, other):
        c = scalar(other)
        return MatrixForm(self.n, {w: c * k for w, k in self._terms})

    def __truediv__(self, other):
        return self * (scalar(1) / scalar(other))

    def __repr__(self):
        return f"MatrixForm(n={self.n}, {self!s})"

    def __str__(self):
        from .frontend.render import render
        return render(self, "plain")


def _from_pairs(n: int, pairs) -> MatrixForm:
    acc: dict = {}
    for w, c in pairs:
        acc[w] = acc[w] + c if w in acc else c
    return MatrixForm(n, acc)


def nc_wedge(a: MatrixForm, b: MatrixForm) -> MatrixForm:
    """Word concatenation, bilinear, without reordering."""
    a._check(b)
    return _from_pairs(a.n, ((wa + wb, ca * cb) for wa, ca in a for wb, cb in b))


# --------------------------------------------------------------------------
# star


def _star_word(word: tuple, n: int, d_applied: int) -> MatrixForm:
    """``d^k *word`` with matrix zero-forms pulled out of the star."""
    if any(isinstance(a, StarWrap) for a in word):
        raise UnsupportedStarError("star of a star is not defined")
    if word and isinstance(word[0], Xi):
        rest = _star_word(word[1:], n, 0)
        xi = MatrixForm.atom(Xi(), n)
        if d_applied == 0:
            return xi ^ rest
        # d(Xi *w) = dXi ^ *w + Xi ^ d*w
        return (MatrixForm.atom(DXi(), n) ^ rest) + (xi ^ _star_word(word[1:], n, 1))
    if word and isinstance(word[-1], Xi):
        rest = _star_word(word[:-1], n, 0)
        xi = MatrixForm.atom(Xi(), n)
        if d_applied == 0:
            return rest ^ xi
        # d(*w Xi) = d*w Xi + (-1)^{#*w} *w dXi
        head = word[:-1]
        odd = (sum(t.p for t in head) + n - _word_q(head)) % 2
        tail = rest ^ MatrixForm.atom(DXi(), n)
        return (_star_word(head, n, 1) ^ xi) + (-tail if odd else tail)
    if _word_q(word) > n:
        return MatrixForm.zero(n)
    return MatrixForm.atom(StarWrap(tuple(word), n, d_applied), n)


def nc_star(a: MatrixForm, d_applied: int = 0) -> MatrixForm:
    """Hodge star of a matrix form; linear over scalar coefficients."""
    out = MatrixForm.zero(a.n)
    for w, c in a:
        out = out + _star_word(w, a.n, d_applied) * c
    return out


# --------------------------------------------------------------------------
# differentials on words


def _leibniz(a: MatrixForm, atom_rule) -> MatrixForm:
    # coefficients are constants, so only atoms are differentiated
    n = a.n
    out = []
    for w, c in a:
        sign = 1
        for i, atom in enumerate(w):
            img = atom_rule(atom, n)
            if img:
                left, right = w[:i], w[i + 1:]
                cc = c if sign > 0 else -c
                for wi, ci in img:
                    out.append((left + wi + right, cc * ci))
            if atom.degree & 1:
                sign = -sign
    return _from_pairs(n, out)


def _vdiff_atom(a: MatrixAtom, n: int) -> Optional[MatrixForm]:
    if isinstance(a, ConnA):
        return MatrixForm.atom(VarA(), n)
    if isinstance(a, DConnA):
        # del d = -d del
        return -MatrixForm.atom(DVarA(), n)
    if isinstance(a, StarWrap):
        inner = nc_vertical_diff(MatrixForm.word(a.word, n))
        out = nc_star(inner, a.d_applied)
        return -out if a.d_applied & 1 else out
    return None


def _hdiff_atom(a: MatrixAtom, n: int) -> Optional[MatrixForm]:
    if isinstance(a, ConnA):
        return MatrixForm.atom(DConnA(), n)
    if isinstance(a, VarA):
        return MatrixForm.atom(DVarA(), n)
    if isinstance(a, Xi):
        return MatrixForm.atom(DXi(), n)
    if isinstance(a, StarWrap) and a.d_applied == 0:
        return MatrixForm.atom(StarWrap(a.word, n, 1), n)
    return None


def nc_vertical_diff(a: MatrixForm) -> MatrixForm:
    """del on matrix forms, a graded derivation over the word."""
    return _leibniz(a, _vdiff_atom)


def nc_horizontal_diff(a: MatrixForm) -> MatrixForm:
    """d on matrix forms, a graded derivation over the word."""
    return _leibniz(a, _hdiff_atom)


def nc_total_diff(a: MatrixForm) -> MatrixForm:
    return nc_vertical_diff(a) + nc_horizontal_diff(a)


def commutator(a: MatrixForm, b: MatrixForm) -> MatrixForm:
    """Graded commutator ``a ^ b - (-1)^{#a #b} b ^ a`` for homogeneous a, b."""
    da, db = _homogeneous_degree(a), _homogeneous_degree(b)
    ba = nc_wedge(b, a)
    return nc_wedge(a, b) - ba if (da * db) % 2 == 0 else nc_wedge(a, b) + ba


def _homogeneous_degree(a: MatrixForm) -> int:
    degs = a.degrees()
    if len(degs) > 1:
        raise InhomogeneousError(f"form has total degrees {sorted(degs)}")
    return degs.pop() if degs else 0


def connection(n: int) -> MatrixForm:
    return MatrixForm.atom(ConnA(), n)


def curvature(n: int) -> MatrixForm:
    """``F_A = dA + A ^ A``."""
    A = connection(n)
    return MatrixForm.atom(DConnA(), n) + (A ^ A)


def covariant_derivative(beta: MatrixForm) -> MatrixForm:
    """``D_A beta = d beta + A ^ beta + (-1)^{#beta + 1} beta ^ A``."""
    k = _homogeneous_degree(beta)
    A = connection(beta.n)
    tail = nc_wedge(beta, A)
    return nc_horizontal_diff(beta) + nc_wedge(A, beta) + (tail if k % 2 else -tail)


# --------------------------------------------------------------------------
# gauge Killing field


class KillingGauge(KillingField):
    """Infinitesimal gauge transformation generated by ``Xi``.

    Vertical-only: ``X _| del A = -(dXi + A ^ Xi - Xi ^ A)``; every horizontal
    and scalar generator contracts to zero.
    """

    def __init__(self, name: str = "gauge"):
        super().__init__(name)

    def on_var_a(self, n: int) -> MatrixForm:
        return -covariant_derivative(MatrixForm.atom(Xi(), n))


def gauge_killing(name: str = "gauge") -> KillingGauge:
    return KillingGauge(name)


def _contract_atom(X: KillingGauge, a: MatrixAtom, n: int) -> Optional[MatrixForm]:
    if isinstance(a, VarA):
        return X.on_var_a(n)
    if isinstance(a, DVarA):
        # evolutionary fields anticommute with d
        return -nc_horizontal_diff(X.on_var_a(n))
    if isinstance(a, StarWrap):
        inner = nc_interior(X, MatrixForm.word(a.word, n))
        out = nc_star(inner, a.d_applied)
        return -out if a.d_applied & 1 else out
    return None


def nc_interior(X: KillingField, a: MatrixForm) -> MatrixForm:
    """Contraction of a matrix form; an anti-derivation of degree -1."""
    if not isinstance(X, KillingGauge):
        if not X.is_vertical_only:
            raise UnsupportedContractionError(
                f"Killing field {X.name!r} has no rule on matrix-valued forms")
        return MatrixForm.zero(a.n)
    return _leibniz(a, lambda atom, n: _contract_atom(X, atom, n))


# --------------------------------------------------------------------------
# trace


@dataclass(frozen=True)
class TraceAtom(Generator):
    """``Tr(word)`` for a word in trace normal form."""

    word: tuple

    @property
    def p(self):
        return sum(a.p for a in self.word)

    @property
    def q(self):
        return _word_q(self.word)

    def key(self):
        return (2, len(self.word), _word_key(self.word))


def _trace_moves(word: tuple, n: int):
    """Words equal to ``Tr(word)`` up to the returned sign."""
    if len(word) > 1:
        head, rest = word[0], word[1:]
        sign = -1 if (head.degree * _word_degree(rest)) % 2 else 1
        yield sign, rest + (head,)
    stars = [i for i, a in enumerate(word) if isinstance(a, StarWrap)]
    if len(stars) == 1 and stars[0] == len(word) - 1 and word[-1].d_applied == 0:
        u, v = word[:-1], word[-1].word
        if u and _word_q(u) == _word_q(v):
            exp = _word_degree(u) * _word_degree(v) - _word_q(u) * _word_q(v)
            # starring a plain word only pulls out zero-forms: one term, coefficient 1
            (w2, _), = (MatrixForm.word(v, n) ^ _star_word(u, n, 0)).terms()
            yield (-1 if exp % 2 else 1), w2


def trace_normal_form(word: tuple, n: int):
    """``(sign, representative)``; sign 0 when the orbit forces ``Tr(word) = 0``."""
    word = tuple(word)
    seen = {word: 1}
    queue = deque([word])
    while queue:
        w = queue.popleft()
        for s, w2 in _trace_moves(w, n):
            s2 = seen[w] * s
            if w2 in seen:
                if seen[w2] != s2:
                    return 0, ()
                continue
            seen[w2] = s2
            queue.append(w2)
    rep = min(seen, key=_word_key)
    return seen[rep], rep


def trace(a: MatrixForm) -> Form:
    """Graded trace: a scalar form whose generators are trace symbols."""
    products = []
    for w, c in a:
        if not w:
            raise ValueError("trace of a bare scalar needs a matrix dimension")
        s, rep = trace_normal_form(w, a.n)
        if s:
            products.append((c if s > 0 else -c, [TraceAtom(rep)]))
    return Form.from_products(a.n, products)


def _trace_word(g: TraceAtom, n: int) -> MatrixForm:
    return MatrixForm.word(g.word, n)


@vdiff_generator.register
def _(g: TraceAtom, n: int) -> Form:
    return trace(nc_vertical_diff(_trace_word(g, n)))


@hdiff_generator.register
def _(g: TraceAtom, n: int) -> Form:
    return trace(nc_horizontal_diff(_trace_word(g, n)))


@contract_generator.register
def _(g: TraceAtom, X: KillingField, n: int) -> Form:
    return trace(nc_interior(X, _trace_word(g, n)))


# --------------------------------------------------------------------------
# Yang-Mills


def ym_system(n: int) -> LagrangianSystem:
    """``L = -1/2 Tr(F ^ *F)``, ``theta = -Tr(del A ^ *F)`` in abstract mode."""
    F = curvature(n)
    sF = nc_star(F)
    L = trace(F ^ sF) * scalar(-1) / 2
    theta = -trace(MatrixForm.atom(VarA(), n) ^ sF)
    return LagrangianSystem(n, AbstractMode(n), (), L, theta, name="yangmills")


def ym_euler_lagrange(n: int) -> Form:
    """``del L + d theta``, checked against ``-Tr(del A ^ D_A *F)``."""
    from .fieldtheory import ConsistencyError

    E = euler_lagrange(ym_system(n))
    expected = -trace(MatrixForm.atom(VarA(), n) ^ covariant_derivative(nc_star(curvature(n))))
    if E != expected:
        raise ConsistencyError("Yang-Mills Euler-Lagrange form differs from -Tr(del A ^ D_A *F)")
    return E


def ym_momentum_map(n: int, X: Optional[KillingGauge] = None) -> Form:
    """``J_Xi = Xi* _| (L + theta)``; asserts the Lagrangian part contracts to zero."""
    from .calculus import interior
    from .fieldtheory import ConsistencyError

    X = X or gauge_killing()
    sys = ym_system(n)
    if not interior(X, sys.L).is_zero():
        raise ConsistencyError("gauge Killing field contracts L to a nonzero form")
    return momentum_map(sys, X)
