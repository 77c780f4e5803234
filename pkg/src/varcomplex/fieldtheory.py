"""Lagrangian systems, Euler-Lagrange forms, momentum maps and their checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .algebra import (
    FieldSymbol,
    Jet,
    ScalarExpr,
    direction_name,
    partial_wrt_jet,
    scalar,
    substitute,
    total_derivative_multi,
)
from .calculus import (
    KillingField,
    horizontal_diff,
    interior,
    lie_total,
    total_diff,
    vertical_diff,
)
from .forms import Form, project_bidegree
from .hodge import AbstractMode, HodgeMode, star_pair_normalize

__all__ = [
    "LagrangianSystem",
    "DynamicalSymplectic",
    "Verdict",
    "BidegreeError",
    "ConsistencyError",
    "normalize",
    "euler_lagrange",
    "symplectic_density",
    "total_symplectic",
    "lagrangian_shift",
    "momentum_map",
    "invariance_check",
    "momentum_defining_check",
    "hamilton_identity",
    "noether_check",
    "hamiltonian_vf_components",
    "on_shell_reduce",
    "solve_for_jet",
]


class BidegreeError(ValueError):
    """A form does not have the bidegree its role requires."""


class ConsistencyError(RuntimeError):
    """An identity the construction guarantees failed to hold."""


def _require_bidegree(a: Form, p: int, q: int, what: str):
    bad = [b for b in a.bidegrees() if b != (p, q)]
    if bad:
        found = ", ".join(f"({b.p},{b.q})" for b in bad)
        raise BidegreeError(f"{what} must have bidegree ({p},{q}); found {found}")


@dataclass(frozen=True)
class LagrangianSystem:
    """Total Lagrangian ``L + theta`` over an n-dimensional spacetime."""

    n: int
    hodge: HodgeMode
    fields: tuple
    L: Form
    theta: Form
    name: str = "system"
    coords: tuple = ()

    def __post_init__(self):
        if self.hodge.n != self.n:
            raise ValueError("hodge mode dimension differs from system dimension")
        for a in (self.L, self.theta):
            if a.n != self.n:
                raise ValueError("Lagrangian forms live over the wrong dimension")
        _require_bidegree(self.L, 0, self.n, "Lagrangian density L")
        _require_bidegree(self.theta, 1, self.n - 1, "variational form theta")
        if not self.coords:
            object.__setattr__(self, "coords", default_coords(self.n))

    @property
    def total(self) -> Form:
        return self.L + self.theta

    @property
    def abstract(self) -> bool:
        return isinstance(self.hodge, AbstractMode)

    def field(self, name: str) -> FieldSymbol:
        for f in self.fields:
            if f.name == name:
                return f
        raise KeyError(name)


def default_coords(n: int) -> tuple:
    return tuple(direction_name(mu) for mu in range(n))


@dataclass(frozen=True)
class DynamicalSymplectic:
    """``Omega = omega + E`` with ``omega`` of bidegree (2, n-1) and ``E`` of (1, n)."""

    Omega: Form
    omega: Form
    E: Form


@dataclass
class Verdict:
    """Outcome of a symbolic check; ``residual`` is zero exactly when ``ok``."""

    ok: bool
    residual: Form
    components: dict = field(default_factory=dict)
    detail: str = ""

    def __bool__(self):
        return self.ok


def normalize(sys_or_abstract, a: Form) -> Form:
    """Apply the star pairing rule in abstract mode; identity otherwise."""
    abstract = sys_or_abstract.abstract if isinstance(sys_or_abstract, LagrangianSystem) \
        else bool(sys_or_abstract)
    return star_pair_normalize(a) if abstract else a


def _verdict(sys: LagrangianSystem, residual: Form, detail: str = "") -> Verdict:
    residual = normalize(sys, residual)
    return Verdict(residual.is_zero(), residual, residual.components(), detail)


def euler_lagrange(sys: LagrangianSystem) -> Form:
    """``E = (D L_total)^{1,n} = del L + d theta``."""
    return normalize(sys, vertical_diff(sys.L) + horizontal_diff(sys.theta))


def symplectic_density(sys: LagrangianSystem) -> Form:
    """``omega = del theta``."""
    return normalize(sys, vertical_diff(sys.theta))


def total_symplectic(sys: LagrangianSystem) -> DynamicalSymplectic:
    n = sys.n
    Omega = normalize(sys, total_diff(sys.total))
    residue = project_bidegree(Omega, 0, n + 1)
    if not residue.is_zero():
        raise ConsistencyError(f"(0,{n + 1}) component of D L is nonzero: {residue}")
    omega = project_bidegree(Omega, 2, n - 1)
    E = project_bidegree(Omega, 1, n)
    if omega + E != Omega:
        raise ConsistencyError("D L does not decompose into omega + E")
    return DynamicalSymplectic(Omega, omega, E)


def lagrangian_shift(sys: LagrangianSystem, lam: Form) -> LagrangianSystem:
    """Replace the total Lagrangian by ``L_total + D lambda``."""
    if lam.n != sys.n:
        raise ValueError("lambda lives over the wrong dimension")
    _require_bidegree(lam, 0, sys.n - 1, "lambda")
    return LagrangianSystem(sys.n, sys.hodge, sys.fields,
                            sys.L + horizontal_diff(lam),
                            sys.theta + vertical_diff(lam),
                            sys.name, sys.coords)


def momentum_map(sys: LagrangianSystem, X: KillingField) -> Form:
    """``J_X = X _| (L + theta)``."""
    return normalize(sys, interior(X, sys.total))


def invariance_check(sys: LagrangianSystem, X: KillingField) -> Verdict:
    """Infinitesimal invariance: ``Lie_X (L + theta) = 0``."""
    return _verdict(sys, lie_total(X, sys.total), f"Lie_{X.name} L")


def momentum_defining_check(sys: LagrangianSystem, X: KillingField) -> Verdict:
    """``X _| Omega + D J_X = 0``."""
    Omega = total_diff(sys.total)
    J = momentum_map(sys, X)
    return _verdict(sys, interior(X, Omega) + total_diff(J), f"{X.name} _| Omega + D J")


def hamilton_identity(sys: LagrangianSystem, X: KillingField) -> Verdict:
    """Check ``(X _| omega + D H) + X _| E = 0`` with ``H = J_X``.

    ``components`` reports the bigraded pieces of ``X _| omega + D H``; each
    equals the matching piece of ``-X _| E``.
    """
    ds = total_symplectic(sys)
    H = momentum_map(sys, X)
    lhs = normalize(sys, interior(X, ds.omega) + total_diff(H))
    rhs = normalize(sys, -interior(X, ds.E))
    residual = normalize(sys, lhs - rhs)
    return Verdict(residual.is_zero(), residual, lhs.components(),
                   f"{X.name} _| omega + D H = -{X.name} _| E")


def noether_check(sys: LagrangianSystem, XA: KillingField, XB: KillingField) -> Verdict:
    """``Lie_{X_A} J_B = 0`` for commuting symmetries."""
    JB = momentum_map(sys, XB)
    return _verdict(sys, lie_total(XA, JB), f"Lie_{XA.name} J_{XB.name}")


def hamiltonian_vf_components(ds: DynamicalSymplectic, X: KillingField, alpha: Form) -> tuple:
    """Left-hand sides of the component system of ``X _| Omega + D alpha = 0``.

    Returns four forms of bidegrees (0,n), (1,n-1), (2,n-2), (3,n-3).
    """
    n = ds.Omega.n
    proj = project_bidegree
    xE = interior(X, ds.E)
    xw = interior(X, ds.omega)

    def part(a, p, q):
        return proj(a, p, q) if q >= 0 else Form.zero(n)

    a0 = part(alpha, 0, n - 1)
    a1 = part(alpha, 1, n - 2)
    a2 = part(alpha, 2, n - 3)
    c_a = part(xE, 0, n) + horizontal_diff(a0)
    c_b = (part(xE, 1, n - 1) + part(xw, 1, n - 1)
           + horizontal_diff(a1) + vertical_diff(a0))
    c_c = part(xw, 2, n - 2) + horizontal_diff(a2) + vertical_diff(a1)
    c_d = vertical_diff(a2)
    out = []
    for c, (p, q) in zip((c_a, c_b, c_c, c_d), ((0, n), (1, n - 1), (2, n - 2), (3, n - 3))):
        c = star_pair_normalize(c)
        out.append(proj(c, p, q) if q >= 0 else Form.zero(n))
    return tuple(out)


def _prolonged_bindings(eqns: Mapping[Jet, ScalarExpr], jets) -> dict:
    """Extend ``u_J -> rhs`` to every present jet ``u_I`` with ``I`` containing ``J``."""
    out = {}
    for u in jets:
        if u in eqns:
            out[u] = scalar(eqns[u])
            continue
        for lhs, rhs in eqns.items():
            if lhs.field != u.field:
                continue
            rest = list(u.index)
            try:
                for mu in lhs.index:
                    rest.remove(mu)
            except ValueError:
                continue
            out[u] = total_derivative_multi(scalar(rhs), rest)
            break
    return out


def on_shell_reduce(a: Form, eqns: Mapping[Jet, ScalarExpr], prolong: bool = True) -> Form:
    """Substitute equations of motion into every coefficient.

    With ``prolong`` every derivative of a bound jet is replaced by the
    matching total derivative of the right-hand side; repeated until no bound
    jet remains.
    """
    from .algebra import jets_in

    if not eqns:
        return a
    for _ in range(16):
        jets = set()
        for _, c in a:
            jets |= jets_in(c)
        binds = _prolonged_bindings(eqns, jets) if prolong else \
            {u: scalar(v) for u, v in eqns.items() if u in jets}
        if not binds:
            return a
        a = a.map_coefficients(lambda c: substitute(c, binds))
    raise ConsistencyError("on-shell substitution did not terminate")


def solve_for_jet(f: ScalarExpr, u: Jet) -> ScalarExpr:
    """Solve ``f = 0`` for ``u`` when ``f`` is affine in ``u`` with numeric slope."""
    slope = partial_wrt_jet(f, u)
    num = slope.as_number()
    if num is None or not num:
        raise ValueError(f"{u} does not enter linearly with a numeric coefficient")
    rest = f - slope * ScalarExpr.atom(u)
    if not partial_wrt_jet(rest, u).is_zero():
        raise ValueError("equation is not affine in the requested jet")
    return -rest / num


def report_components(a: Form) -> Sequence:
    """``[(bidegree, component)]`` in bidegree order."""
    return sorted(a.components().items())
