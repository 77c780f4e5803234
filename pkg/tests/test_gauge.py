"""Matrix-valued forms, the graded trace and Yang-Mills theory."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from varcomplex.calculus import interior, total_diff, vertical_diff, zero_killing
from varcomplex.fieldtheory import (
    euler_lagrange,
    invariance_check,
    momentum_defining_check,
    momentum_map,
    symplectic_density,
)
from varcomplex.forms import Form
from varcomplex.gauge import (
    ConnA,
    DConnA,
    DVarA,
    DXi,
    InhomogeneousError,
    MatrixForm,
    StarWrap,
    TraceAtom,
    VarA,
    Xi,
    commutator,
    covariant_derivative,
    curvature,
    gauge_killing,
    nc_horizontal_diff,
    nc_star,
    nc_vertical_diff,
    trace,
    ym_euler_lagrange,
    ym_momentum_map,
    ym_system,
)

N = 4
A, dA, vA = (MatrixForm.atom(ConnA(), N), MatrixForm.atom(DConnA(), N), MatrixForm.atom(VarA(), N))
XI = MatrixForm.atom(Xi(), N)


def test_words_do_not_commute():
    assert not (A ^ A).is_zero()
    assert not (vA ^ vA).is_zero()
    assert (A ^ MatrixForm.zero(N)).is_zero()


def test_curvature_and_its_differentials():
    F = curvature(N)
    assert F == dA + (A ^ A)
    assert nc_horizontal_diff(F) == (dA ^ A) - (A ^ dA)


def test_delta_of_curvature_matches_source_formula():
    # del(dA) = -d(del A), recorded by the atom DVarA = d(del A)
    F = curvature(N)
    assert nc_vertical_diff(F) == -MatrixForm.atom(DVarA(), N) + (vA ^ A) - (A ^ vA)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_bianchi_and_double_covariant_derivative(n):
    F = curvature(n)
    xi = MatrixForm.atom(Xi(), n)
    assert covariant_derivative(F).is_zero()
    assert covariant_derivative(covariant_derivative(xi)) == commutator(F, xi)


def test_covariant_derivative_examples():
    assert covariant_derivative(XI) == MatrixForm.atom(DXi(), N) + (A ^ XI) - (XI ^ A)
    sF = nc_star(curvature(N))
    sign = -1 if N % 2 else 1
    assert covariant_derivative(sF) == nc_star(curvature(N), 1) + (A ^ sF) - (sF ^ A) * sign


def test_inhomogeneous_covariant_derivative_rejected():
    with pytest.raises(InhomogeneousError):
        covariant_derivative(A + XI)


# --------------------------------------------------------------------------
# trace


PLAIN = [ConnA(), DConnA(), VarA(), DVarA(), Xi(), DXi()]


def _degree(w):
    return sum(a.degree for a in w)


def _rotation_oracle(word):
    """Least rotation with its graded sign; sign 0 if the orbit is inconsistent."""
    signs = {}
    sign, w = 1, tuple(word)
    for _ in range(len(word)):
        if w in signs and signs[w] != sign:
            return 0, None
        signs.setdefault(w, sign)
        head, rest = w[0], w[1:]
        sign *= -1 if (head.degree * _degree(rest)) % 2 else 1
        w = rest + (head,)
    if signs.get(w, sign) != sign:
        return 0, None
    rep = min(signs, key=lambda x: tuple(a.key() for a in x))
    return signs[rep], rep


@settings(max_examples=150, deadline=None)
@given(st.lists(st.sampled_from(PLAIN), min_size=1, max_size=5))
def test_trace_normal_form_matches_rotation_oracle(word):
    n = 6
    sign, rep = _rotation_oracle(word)
    got = trace(MatrixForm.word(word, n))
    if sign == 0:
        assert got.is_zero()
    else:
        assert got == Form.generator(TraceAtom(rep), n) * sign


@settings(max_examples=80, deadline=None)
@given(st.lists(st.sampled_from(PLAIN), min_size=0, max_size=3), st.integers(3, 5))
def test_trace_with_star_is_rotation_invariant(prefix, n):
    word = tuple(prefix) + tuple(nc_star(curvature(n)).terms()[0][0])
    base = trace(MatrixForm.word(word, n))
    sign, w = 1, word
    for _ in range(len(word)):
        head, rest = w[0], w[1:]
        sign *= -1 if (head.degree * _degree(rest)) % 2 else 1
        w = rest + (head,)
        assert trace(MatrixForm.word(w, n)) * sign == base


@pytest.mark.parametrize("n", [3, 4])
def test_trace_example_rotation(n):
    vA_, A_ = MatrixForm.atom(VarA(), n), MatrixForm.atom(ConnA(), n)
    sF = nc_star(curvature(n))
    # del A has total degree 2, the rest n - 1
    sign = -1 if (2 * (n - 1)) % 2 else 1
    assert trace(vA_ ^ A_ ^ sF) == trace(A_ ^ sF ^ vA_) * sign
    assert trace(MatrixForm.zero(n)).is_zero()


# --------------------------------------------------------------------------
# Yang-Mills


@pytest.mark.parametrize("n", [3, 4, 5])
def test_ym_bidegrees(n):
    sys = ym_system(n)
    assert sys.L.bidegrees() == [(0, n)]
    assert sys.theta.bidegrees() == [(1, n - 1)]


@pytest.mark.parametrize("n", [3, 4, 5])
def test_ym_euler_lagrange_display_and_covariant_form(n):
    A_, vA_ = MatrixForm.atom(ConnA(), n), MatrixForm.atom(VarA(), n)
    F = curvature(n)
    sF = nc_star(F)
    sign = -1 if n % 2 else 1
    display = -trace(vA_ ^ ((A_ ^ sF) - (sF ^ A_) * sign + nc_star(F, 1)))
    E = ym_euler_lagrange(n)
    assert E == display
    assert E == -trace(vA_ ^ covariant_derivative(sF))


def test_ym_mixed_derivative_pair_cancels():
    def has_dvar(a):
        def walk(word):
            for x in word:
                if isinstance(x, DVarA):
                    return True
                if isinstance(x, StarWrap) and walk(x.word):
                    return True
            return False
        return any(walk(g.word) for f, _ in a for g in f if isinstance(g, TraceAtom))

    sys = ym_system(N)
    raw = vertical_diff(sys.L)
    assert has_dvar(raw)
    assert not has_dvar(euler_lagrange(sys))


def test_ym_symplectic_is_closed():
    assert vertical_diff(symplectic_density(ym_system(N))).is_zero()


@pytest.mark.parametrize("n", [3, 4])
def test_ym_momentum_map(n):
    xi = MatrixForm.atom(Xi(), n)
    J = ym_momentum_map(n)
    assert J == trace(covariant_derivative(xi) ^ nc_star(curvature(n)))
    assert interior(gauge_killing(), ym_system(n).L).is_zero()
    assert momentum_map(ym_system(n), zero_killing()).is_zero()


@pytest.mark.parametrize("n", [3, 4])
def test_ym_gauge_invariance(n):
    sys, X = ym_system(n), gauge_killing()
    assert invariance_check(sys, X).ok
    assert momentum_defining_check(sys, X).ok
