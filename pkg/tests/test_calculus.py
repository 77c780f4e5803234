"""Differentials, contraction and Lie derivatives."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _kit import ALPHA, I, MU, PHI, PHIBAR, Q, S, coord, jet, kg_abstract, kg2d, translation, u1
from varcomplex.algebra import Jet, scalar
from varcomplex.calculus import (
    KillingField,
    UnsupportedContractionError,
    contact_form,
    horizontal_diff,
    interior,
    lie_horizontal,
    lie_total,
    lie_vertical,
    total_diff,
    vertical_diff,
    zero_killing,
)
from varcomplex.forms import Form
from varcomplex.hodge import AbstractMode, star
from varcomplex.selftest import FormSampler

dt1 = Form.dx(0, 1)
dq = Form.delta(Jet(Q), 1)


def sampler(seed, n):
    return FormSampler(random.Random(seed), n)


# --------------------------------------------------------------------------
# worked values in the mechanics setting


def test_vertical_examples():
    assert vertical_diff(S(coord(0), 1)).is_zero()
    phi, phib = S(jet(PHI), 2), S(jet(PHIBAR), 2)
    expected = (S(jet(PHIBAR), 2) ^ Form.delta(Jet(PHI), 2)) + (S(jet(PHI), 2) ^ Form.delta(Jet(PHIBAR), 2))
    assert vertical_diff(phi ^ phib) == expected
    assert vertical_diff(dq).is_zero()


def test_horizontal_examples():
    # d(del q) = -del(d q) = -del(q_t dt) = dt ^ del q_t
    assert horizontal_diff(dq) == (dt1 ^ Form.delta(Jet(Q, (0,)), 1))
    assert horizontal_diff(dq) == -vertical_diff(horizontal_diff(S(jet(Q), 1)))
    assert horizontal_diff(dt1).is_zero()
    assert horizontal_diff(S(jet(Q) ** 2, 1)) == S(jet(Q) * jet(Q, 0) * 2, 1) ^ dt1


def test_total_examples():
    assert total_diff(S(coord(0), 1)) == dt1
    assert total_diff(S(jet(Q), 1)) == (S(jet(Q, 0), 1) ^ dt1) + dq


def test_contact_identity():
    for u in (Jet(Q), Jet(Q, (0,)), Jet(Q, (0, 0))):
        assert contact_form(u, 1) == Form.delta(u, 1)


def test_star_commutes_with_delta_and_d_kills_star_atoms():
    mode = AbstractMode(2)
    sdphi = star(horizontal_diff(S(jet(PHI), 2)), mode)
    assert vertical_diff(sdphi) == star(vertical_diff(horizontal_diff(S(jet(PHI), 2))), mode)
    assert vertical_diff(star(Form.one(2), mode)).is_zero()
    f = S(jet(PHIBAR), 2)
    assert vertical_diff(f ^ sdphi) == (vertical_diff(f) ^ sdphi) + (f ^ vertical_diff(sdphi))


# --------------------------------------------------------------------------
# contraction


def test_translation_contracts_dx_to_parameters():
    X = translation()
    assert interior(X, Form.dx(0, 2)) == S(scalar(X.horizontal[0]), 2)
    assert interior(X, Form.dx(1, 2)) == S(scalar(X.horizontal[1]), 2)


def test_u1_contracts_delta_phi():
    assert interior(u1(), Form.delta(Jet(PHI), 2)) == S(I * ALPHA * jet(PHI), 2)
    assert interior(u1(), Form.one(2)).is_zero()


def test_contraction_prolongs_by_total_derivative():
    X = translation()
    u = Jet(PHI, (0, 1))
    from varcomplex.algebra import total_derivative_multi
    base = -(X.horizontal[0] * jet(PHI, 0) + X.horizontal[1] * jet(PHI, 1))
    assert X.on_jet(u) == total_derivative_multi(base, (0, 1))


def test_horizontal_contraction_of_star_atom_is_a_mode_error():
    a = star(Form.dx(0, 2), AbstractMode(2))
    with pytest.raises(UnsupportedContractionError):
        interior(translation(), a)
    assert interior(u1(), a).is_zero()


# --------------------------------------------------------------------------
# Lie derivatives


def test_kg_lagrangian_is_invariant():
    sys2 = kg2d()
    assert lie_total(translation(), sys2.total).is_zero()
    assert lie_total(u1(), sys2.total).is_zero()
    assert lie_total(u1(), kg_abstract(4).total).is_zero()
    assert lie_total(u1(), Form.zero(2)).is_zero()


def test_lie_partition_and_examples():
    X = translation()
    a = S(jet(PHI, 0) * jet(PHIBAR), 2) ^ Form.delta(Jet(PHI), 2)
    assert lie_vertical(X, a) + lie_horizontal(X, a) == lie_total(X, a)
    assert lie_horizontal(u1(), S(jet(PHI) ** 2, 2)).is_zero()
    assert lie_vertical(X, Form.dx(0, 2)).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_differentials_square_to_zero(seed, n):
    a = sampler(seed, n).form()
    assert vertical_diff(vertical_diff(a)).is_zero()
    assert horizontal_diff(horizontal_diff(a)).is_zero()
    assert (horizontal_diff(vertical_diff(a)) + vertical_diff(horizontal_diff(a))).is_zero()
    assert total_diff(total_diff(a)).is_zero()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_cartan_formula(seed, n):
    s = sampler(seed, n)
    s.stars = False
    X = s.killing()
    a = s.homogeneous(*s.bidegree(1), max_terms=2)
    assert lie_total(X, total_diff(a)) == total_diff(lie_total(X, a))


def test_zero_killing_field():
    a = sampler(1, 2).form()
    assert interior(zero_killing(), a).is_zero()
    assert lie_total(zero_killing(), a).is_zero()
