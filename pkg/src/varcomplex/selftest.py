"""Seed-pinned randomized property suites.

Every suite draws bounded-size forms from :class:`FormSampler` and checks an
exact identity.  :func:`run_all` is what ``varcomplex selftest`` executes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .algebra import QI, Const, Coord, FieldSymbol, Jet, ScalarExpr
from .calculus import (
    KillingField,
    horizontal_diff,
    interior,
    lie_horizontal,
    lie_total,
    lie_vertical,
    total_diff,
    vertical_diff,
)
from .fieldtheory import LagrangianSystem, lagrangian_shift, total_symplectic
from .forms import Form, Horizontal, StarAtom, Vertical, wedge
from .hodge import TableMode, star, table_from_signature

__all__ = ["FormSampler", "SuiteResult", "SUITES", "run_all", "run_suite"]

PHI = FieldSymbol("phi", "phibar")
PHIBAR = PHI.conjugate()
Q = FieldSymbol("q", None, True)


class FormSampler:
    """Random exact forms of bounded size over an n-dimensional spacetime."""

    def __init__(self, rng: random.Random, n: int, max_order: int = 1, stars: bool = True):
        self.rng = rng
        self.n = n
        self.max_order = max_order
        self.stars = stars
        self.count = 0

    def jet(self) -> Jet:
        r = self.rng
        f = r.choice((PHI, PHIBAR, Q))
        k = r.randint(0, self.max_order)
        return Jet(f, tuple(r.randrange(self.n) for _ in range(k)))

    def number(self) -> QI:
        r = self.rng
        re = r.choice((1, -1, 2, -3, 1, 1))
        den = r.choice((1, 1, 2, 3))
        im = r.choice((0, 0, 0, 1, -2))
        return QI(re, 0) / den + QI(0, im)

    def scalar(self, max_terms: int = 2) -> ScalarExpr:
        r = self.rng
        out = ScalarExpr()
        for _ in range(r.randint(1, max_terms)):
            term = ScalarExpr.const(self.number())
            for _ in range(r.randint(0, 2)):
                pick = r.random()
                if pick < 0.75:
                    atom = self.jet()
                elif pick < 0.9:
                    atom = Const(r.choice(("mu", "alpha")))
                else:
                    atom = Coord(r.randrange(self.n))
                term = term * ScalarExpr.atom(atom)
            out = out + term
        return out

    def factors(self, p: int, q: int) -> list:
        r = self.rng
        out = [Vertical(self.jet()) for _ in range(p)]
        if self.stars and q > 0 and r.random() < 0.25:
            k = self.n - q
            inner = tuple(sorted(r.sample(range(self.n), k)))
            out.append(StarAtom(inner, self.n))
        else:
            out.extend(Horizontal(mu) for mu in r.sample(range(self.n), min(q, self.n)))
        return out

    def homogeneous(self, p: int, q: int, max_terms: int = 3) -> Form:
        self.count += 1
        products = [(self.scalar(), self.factors(p, q))
                    for _ in range(self.rng.randint(1, max_terms))]
        return Form.from_products(self.n, products)

    def bidegree(self, max_p: int = 2):
        return self.rng.randint(0, max_p), self.rng.randint(0, self.n)

    def form(self, max_terms: int = 3) -> Form:
        """A possibly inhomogeneous form."""
        out = Form.zero(self.n)
        for _ in range(self.rng.randint(1, 2)):
            out = out + self.homogeneous(*self.bidegree(), max_terms=max_terms)
        return out

    def killing(self, vertical_only: bool = False) -> KillingField:
        r = self.rng
        horizontal = {} if vertical_only else {
            mu: ScalarExpr.const(self.number()) for mu in range(self.n) if r.random() < 0.6}
        vertical = {f.name: self.scalar() for f in (PHI, PHIBAR, Q) if r.random() < 0.8}
        return KillingField("X", horizontal, vertical)


def _degree(a: Form) -> int:
    (d,) = a.total_degrees()
    return d


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


# --------------------------------------------------------------------------
# suites: each returns None on success or a failure description


def _nilpotent(op, name):
    def check(s: FormSampler):
        a = s.form()
        if not op(op(a)).is_zero():
            return f"{name}^2 a != 0 for a = {a}"
    return check


def _anticommute(s: FormSampler):
    a = s.form()
    if not (horizontal_diff(vertical_diff(a)) + vertical_diff(horizontal_diff(a))).is_zero():
        return f"d del + del d != 0 on {a}"


def _leibniz(op, name):
    def check(s: FormSampler):
        a = s.homogeneous(*s.bidegree(1))
        b = s.homogeneous(*s.bidegree(1))
        if a.is_zero():
            return None
        lhs = op(wedge(a, b))
        rhs = wedge(op(a), b) + wedge(a, op(b)) * _sign(_degree(a))
        if lhs != rhs:
            return f"{name} is not an anti-derivation on ({a}, {b})"
    return check


def _interior_leibniz(s: FormSampler):
    s_plain = FormSampler(s.rng, s.n, s.max_order, stars=False)
    X = s.killing()
    a = s_plain.homogeneous(*s.bidegree(1))
    b = s_plain.homogeneous(*s.bidegree(1))
    s.count += s_plain.count
    if a.is_zero():
        return None
    lhs = interior(X, wedge(a, b))
    rhs = wedge(interior(X, a), b) + wedge(a, interior(X, b)) * _sign(_degree(a))
    if lhs != rhs:
        return f"interior is not an anti-derivation on ({a}, {b})"


def _graded_commutativity(s: FormSampler):
    a = s.homogeneous(*s.bidegree(1))
    b = s.homogeneous(*s.bidegree(1))
    if a.is_zero() or b.is_zero():
        return None
    if wedge(a, b) != wedge(b, a) * _sign(_degree(a) * _degree(b)):
        return f"graded commutativity fails on ({a}, {b})"


def _cartan(s: FormSampler):
    vertical_only = s.rng.random() < 0.5
    s_plain = FormSampler(s.rng, s.n, s.max_order, stars=vertical_only)
    X = s.killing(vertical_only)
    a = s_plain.homogeneous(*s.bidegree(1), max_terms=2)
    s.count += s_plain.count
    if lie_total(X, total_diff(a)) != total_diff(lie_total(X, a)):
        return f"Lie_X D != D Lie_X on {a}"
    if lie_vertical(X, a) + lie_horizontal(X, a) != lie_total(X, a):
        return f"partial Lie derivatives do not sum to Lie_X on {a}"


def _contact(s: FormSampler):
    from .calculus import contact_form
    u = s.jet()
    s.count += 1
    if contact_form(u, s.n) != Form.delta(u, s.n):
        return f"contact identity fails for {u}"


def _star_pairing_table(s: FormSampler):
    r = s.rng
    signs = tuple(r.choice((1, -1)) for _ in range(s.n))
    mode = TableMode(table_from_signature(signs, r.choice((1, -1))))
    s_plain = FormSampler(r, s.n, s.max_order, stars=False)
    q = r.randint(0, s.n)
    pa, pb = r.randint(0, 2), r.randint(0, 2)
    alpha = s_plain.homogeneous(pa, q, max_terms=1)
    beta = s_plain.homogeneous(pb, q, max_terms=1)
    s.count += s_plain.count
    exp = (pa + q) * (pb + q) - q * q
    lhs = wedge(alpha, star(beta, mode))
    rhs = wedge(beta, star(alpha, mode)) * _sign(exp)
    if lhs != rhs:
        return f"star pairing sign fails for {alpha}, {beta} with signature {signs}"


def _shift_invariance(s: FormSampler):
    from .hodge import AbstractMode
    s_plain = FormSampler(s.rng, s.n, s.max_order, stars=False)
    L = s_plain.homogeneous(0, s.n)
    theta = s_plain.homogeneous(1, s.n - 1)
    lam = s_plain.homogeneous(0, s.n - 1)
    s.count += s_plain.count
    sys = LagrangianSystem(s.n, AbstractMode(s.n), (PHI, PHIBAR, Q), L, theta)
    shifted = lagrangian_shift(sys, lam)
    if total_symplectic(shifted).Omega != total_symplectic(sys).Omega:
        return f"shift by {lam} changes Omega"


# --------------------------------------------------------------------------
# gauge suites


def _matrix_sampler(rng: random.Random, n: int):
    from . import gauge as g

    plain = [g.ConnA(), g.DConnA(), g.VarA(), g.DVarA(), g.Xi(), g.DXi()]

    def factor(allow_star: bool):
        if allow_star and rng.random() < 0.3:
            inner = g.MatrixForm.word([rng.choice(plain) for _ in range(rng.randint(1, 2))], n)
            out = g.nc_star(inner)
            return g.nc_horizontal_diff(out) if rng.random() < 0.3 else out
        return g.MatrixForm.atom(rng.choice(plain), n)

    def form(max_len: int = 3):
        out = g.MatrixForm.zero(n)
        for _ in range(rng.randint(1, 2)):
            term = factor(True)
            for _ in range(rng.randint(0, max_len - 1)):
                term = term ^ factor(True)
            out = out + term * rng.choice((1, -1, 2))
        return out

    return form


def _trace_orbit(s: FormSampler):
    from . import gauge as g
    a = _matrix_sampler(s.rng, s.n)(4)
    s.count += 1
    for w, _ in a:
        base = g.trace(g.MatrixForm.word(w, s.n))
        sign = 1
        cur = w
        for _ in range(len(w)):
            head, rest = cur[0], cur[1:]
            sign *= _sign(head.degree * sum(x.degree for x in rest))
            cur = rest + (head,)
            if g.trace(g.MatrixForm.word(cur, s.n)) * sign != base:
                return f"rotation of {w} changes the trace normal form"
        again = Form.zero(s.n)
        for factors, c in base:
            again = again + g.trace(g.MatrixForm.word(factors[0].word, s.n)) * c
        if again != base:
            return f"trace normal form of {w} is not stable"


def _matrix_nilpotent(s: FormSampler):
    from . import gauge as g
    a = _matrix_sampler(s.rng, s.n)()
    s.count += 1
    v, h = g.nc_vertical_diff, g.nc_horizontal_diff
    if not v(v(a)).is_zero():
        return f"del^2 != 0 on {a}"
    if not h(h(a)).is_zero():
        return f"d^2 != 0 on {a}"
    if not (h(v(a)) + v(h(a))).is_zero():
        return f"d del + del d != 0 on {a}"


def _gauge_identities(s: FormSampler):
    from . import gauge as g
    n = s.rng.randint(2, 5)
    s.count += 2
    F = g.curvature(n)
    xi = g.MatrixForm.atom(g.Xi(), n)
    if not g.covariant_derivative(F).is_zero():
        return f"Bianchi identity fails in dimension {n}"
    if g.covariant_derivative(g.covariant_derivative(xi)) != g.commutator(F, xi):
        return f"D_A D_A Xi != [F, Xi] in dimension {n}"


@dataclass
class SuiteResult:
    name: str
    cases: int
    forms: int
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


SUITES: Dict[str, Callable] = {
    "delta-squared": _nilpotent(vertical_diff, "del"),
    "d-squared": _nilpotent(horizontal_diff, "d"),
    "d-delta-anticommute": _anticommute,
    "D-squared": _nilpotent(total_diff, "D"),
    "leibniz-delta": _leibniz(vertical_diff, "del"),
    "leibniz-d": _leibniz(horizontal_diff, "d"),
    "leibniz-interior": _interior_leibniz,
    "graded-commutativity": _graded_commutativity,
    "cartan": _cartan,
    "contact-identity": _contact,
    "star-pairing": _star_pairing_table,
    "shift-invariance": _shift_invariance,
    "trace-orbit": _trace_orbit,
    "matrix-nilpotent": _matrix_nilpotent,
    "gauge-identities": _gauge_identities,
}

GAUGE_SUITES = ("trace-orbit", "matrix-nilpotent", "gauge-identities")


def run_suite(name: str, cases: int = 100, seed: int = 0) -> SuiteResult:
    rng = random.Random(f"{seed}:{name}")
    check = SUITES[name]
    result = SuiteResult(name, cases, 0)
    for k in range(cases):
        n = rng.randint(1, 3) if name != "star-pairing" else rng.randint(2, 4)
        sampler = FormSampler(rng, n)
        msg = check(sampler)
        result.forms += sampler.count
        if msg:
            result.failures.append(f"case {k}: {msg}")
    return result


def run_all(cases: int = 100, seed: int = 0, names: Optional[List[str]] = None,
            workers: int = 1) -> List[SuiteResult]:
    """Run suites in registry order; ``workers > 1`` runs them in separate processes."""
    names = list(names or SUITES)
    if workers <= 1:
        return [run_suite(nm, cases, seed) for nm in names]
    from concurrent.futures import ProcessPoolExecutor
    with ProcessPoolExecutor(workers) as pool:
        return list(pool.map(run_suite, names, [cases] * len(names), [seed] * len(names)))
