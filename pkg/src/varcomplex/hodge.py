"""Hodge star on field space x spacetime.

The star acts only on the spacetime factor of a product form and passes over
the field-space factor: ``*(beta_F ^ beta_M) = beta_F ^ *beta_M``.  Two modes
are offered.  :class:`TableMode` replaces each horizontal monomial by its image
from an explicit table; :class:`AbstractMode` keeps ``*dx^I`` as an opaque
:class:`~varcomplex.forms.StarAtom` for any dimension.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Union

from .forms import Form, Horizontal, StarAtom, Vertical

__all__ = [
    "HodgeTable",
    "TableMode",
    "AbstractMode",
    "HodgeMode",
    "UnsupportedStarError",
    "MINKOWSKI_2D",
    "MINKOWSKI_2D_AS_PRINTED",
    "table_from_rows",
    "table_from_signature",
    "star",
    "star_pair_normalize",
    "star_delta_commute",
    "expand_star_atoms",
    "pair_sign_exponent",
]


class UnsupportedStarError(ValueError):
    """Star requested where no rule is available (e.g. a double star)."""


def _basis_monomials(n: int):
    for k in range(n + 1):
        yield from itertools.combinations(range(n), k)


@dataclass(frozen=True)
class HodgeTable:
    """Explicit star on horizontal basis monomials.

    ``images`` maps each increasing direction tuple to ``(sign, image)``.
    """

    n: int
    signature: str
    images: Mapping = field(hash=False)

    def __post_init__(self):
        images = {tuple(k): (int(s), tuple(v)) for k, (s, v) in dict(self.images).items()}
        object.__setattr__(self, "images", images)
        for mono in _basis_monomials(self.n):
            if mono not in images:
                raise ValueError(f"hodge table incomplete: no image for {mono}")
        for mono, (sign, img) in images.items():
            if sign not in (1, -1):
                raise ValueError(f"hodge table sign must be +1 or -1, got {sign}")
            if tuple(sorted(img)) != img or len(set(img)) != len(img):
                raise ValueError(f"image {img} is not an increasing basis monomial")
            if len(img) != self.n - len(mono):
                raise ValueError(
                    f"degree rule violated: *{mono} has degree {len(img)}, "
                    f"expected {self.n - len(mono)}")
            if any(not 0 <= mu < self.n for mu in img + mono):
                raise ValueError(f"direction out of range in {mono} -> {img}")
        if len(images) != 2 ** self.n:
            raise ValueError("hodge table has entries outside the basis")

    def __hash__(self):
        return hash((self.n, self.signature, tuple(sorted(self.images.items()))))

    def image(self, mono: tuple) -> tuple:
        return self.images[mono]


# Signature (+,-), orientation dx ^ dt.  This is the star under which the
# worked 2D Klein-Gordon momentum map and its on-shell equation come out as
# displayed; it is the built-in table used by the kg2d scenario.
MINKOWSKI_2D = HodgeTable(
    n=2,
    signature="minkowski(+,-)",
    images={
        (): (-1, (0, 1)),
        (0,): (-1, (1,)),
        (1,): (-1, (0,)),
        (0, 1): (1, ()),
    },
)

# The literal table *1 = -dt^dx, *dt = dx, *dx = dt, *(dt^dx) = 1
# (signature (-,+), orientation dx ^ dt).  Kept for comparison.
MINKOWSKI_2D_AS_PRINTED = HodgeTable(
    n=2,
    signature="minkowski(-,+)",
    images={
        (): (-1, (0, 1)),
        (0,): (1, (1,)),
        (1,): (1, (0,)),
        (0, 1): (1, ()),
    },
)


@dataclass(frozen=True)
class TableMode:
    table: HodgeTable

    @property
    def n(self) -> int:
        return self.table.n

    abstract = False


@dataclass(frozen=True)
class AbstractMode:
    n: int

    abstract = True


HodgeMode = Union[TableMode, AbstractMode]


def _split_term(factors):
    horiz = [g for g in factors if isinstance(g, Horizontal)]
    vert = [g for g in factors if isinstance(g, Vertical)]
    other = [g for g in factors if not isinstance(g, (Horizontal, Vertical))]
    return horiz, vert, other


def star(a: Form, mode: HodgeMode) -> Form:
    """Hodge star passing over vertical factors.

    For a canonical term ``c * H ^ V`` (horizontal block ``H``, vertical block
    ``V``) the result is ``c * (-1)^(|H||V|) * V ^ *H``.
    """
    if a.n != mode.n:
        raise ValueError(f"form dimension {a.n} does not match hodge mode dimension {mode.n}")
    products = []
    for factors, c in a:
        horiz, vert, other = _split_term(factors)
        if other:
            if any(isinstance(g, StarAtom) for g in other):
                raise UnsupportedStarError("star of a star is not defined")
            raise UnsupportedStarError(
                f"star is not defined on {type(other[0]).__name__} factors")
        mono = tuple(g.mu for g in horiz)
        coeff = c if (len(horiz) * len(vert)) % 2 == 0 else -c
        if mode.abstract:
            starred = [StarAtom(mono, a.n)]
        else:
            sign, img = mode.table.image(mono)
            if sign < 0:
                coeff = -coeff
            starred = [Horizontal(mu) for mu in img]
        products.append((coeff, vert + starred))
    return Form.from_products(a.n, products)


def pair_sign_exponent(total_a: int, total_b: int, horiz_a: int, horiz_b: int) -> int:
    """Exponent of the sign relating ``a ^ *b`` and ``b ^ *a`` for product forms."""
    return total_a * total_b - horiz_a * horiz_b


def star_pair_normalize(a: Form) -> Form:
    """Normal form for ``dx^I ^ *dx^J`` pairs of equal degree in abstract mode.

    Coordinates are taken orthonormal, so the pair vanishes unless ``I = J``
    as sets.  For pure spacetime blocks of equal degree the product-form sign
    exponent ``#a#b - #_M a #_M b`` is zero, so no sign arises; signs from
    vertical factors are already carried by the canonical ordering.
    """
    products = []
    for factors, c in a:
        horiz = [g for g in factors if isinstance(g, Horizontal)]
        stars = [g for g in factors if isinstance(g, StarAtom)]
        if len(stars) == 1 and len(horiz) == len(stars[0].inner):
            if tuple(g.mu for g in horiz) != stars[0].inner:
                continue
        products.append((c, list(factors)))
    return Form.from_products(a.n, products)


def star_delta_commute(a: Form, mode: HodgeMode) -> Form:
    """``del(*a)`` computed as ``*(del a)``: the vertical differential passes the star."""
    from .calculus import vertical_diff
    return star(vertical_diff(a), mode)


def expand_star_atoms(a: Form, table: HodgeTable) -> Form:
    """Replace every abstract star atom by its image under ``table``."""
    if a.n != table.n:
        raise ValueError("dimension mismatch between form and table")
    products = []
    for factors, c in a:
        coeff = c
        new = []
        for g in factors:
            if isinstance(g, StarAtom):
                sign, img = table.image(g.inner)
                if sign < 0:
                    coeff = -coeff
                new.extend(Horizontal(mu) for mu in img)
            else:
                new.append(g)
        products.append((coeff, new))
    return Form.from_products(a.n, products)


def _perm_sign(seq) -> int:
    sign = 1
    seq = list(seq)
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def table_from_signature(signs, orientation: int = 1, label: str = "") -> HodgeTable:
    """Star of the flat diagonal metric ``diag(signs)``.

    Fixed by ``dx^I ^ *dx^I = (prod_{i in I} signs[i]) * vol`` with
    ``vol = orientation * dx^0 ^ ... ^ dx^{n-1}``.
    """
    signs = tuple(int(s) for s in signs)
    if any(s not in (1, -1) for s in signs) or orientation not in (1, -1):
        raise ValueError("metric signs and orientation must be +1 or -1")
    n = len(signs)
    images = {}
    for mono in _basis_monomials(n):
        comp = tuple(mu for mu in range(n) if mu not in mono)
        norm = 1
        for mu in mono:
            norm *= signs[mu]
        images[mono] = (orientation * norm * _perm_sign(mono + comp), comp)
    sig = "".join("+" if s > 0 else "-" for s in signs)
    return HodgeTable(n, label or f"diag({sig}){'' if orientation > 0 else ' reversed'}", images)


def table_from_rows(n: int, rows, signature: str = "custom") -> HodgeTable:
    """Build a table from ``(monomial, sign, image)`` rows."""
    return HodgeTable(n, signature, {tuple(m): (s, tuple(img)) for m, s, img in rows})
