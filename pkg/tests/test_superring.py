from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from supersplit.superring import (SuperPoly, SuperSpaceSig, bosonic_reduce, localize_check, merge_odd, mul,
                                  odd_subsets)

NX, M = 3, 3


@st.composite
def polys(draw, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        xexp = tuple(draw(st.integers(-2, 2)) for _ in range(NX))
        odd = tuple(sorted(draw(st.sets(st.integers(1, M), max_size=M))))
        terms[(xexp, odd)] = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 3)))
    return SuperPoly(terms)


def th(j):
    return SuperPoly.theta(j, NX)


def test_space_signature():
    sp = SuperSpaceSig(2, 1)
    assert sp.nx == 3
    with pytest.raises(ValueError):
        SuperSpaceSig(-1, 0)


def test_theta_squares_to_zero_and_anticommutes():
    assert (th(1) * th(1)).is_zero()
    assert th(1) * th(2) == -(th(2) * th(1))
    assert th(1) * th(2) * th(3) == th(3) * th(1) * th(2)


def test_merge_odd_signs():
    assert merge_odd((1,), (2,)) == (1, (1, 2))
    assert merge_odd((2,), (1,)) == (-1, (1, 2))
    assert merge_odd((1, 3), (2,)) == (-1, (1, 2, 3))
    assert merge_odd((1,), (1,))[0] == 0


def test_grading():
    f = SuperPoly.x(0, NX, 2) * SuperPoly.x(1, NX, -1) * th(2)
    assert f.degree == 2 and f.parity == 1 and f.odd_order() == 1
    assert f.max_pole() == 1
    g = f + SuperPoly.x(0, NX)
    assert not g.is_homogeneous()


def test_bosonic_reduce_kills_thetas():
    f = SuperPoly.x(0, NX) + SuperPoly.x(1, NX) * th(1) * th(2)
    assert bosonic_reduce(f) == SuperPoly.x(0, NX)


def test_negative_powers():
    x = SuperPoly.x(1, NX)
    assert x ** -2 * x ** 2 == SuperPoly.const(1, NX)
    with pytest.raises(ValueError):
        (x + th(1)) ** -1
    with pytest.raises(ValueError):
        SuperPoly.zero() ** 0


def test_localize_check():
    assert localize_check(SuperPoly.x(0, NX, -3) * th(1))
    assert localize_check(SuperPoly.x(0, NX, -1) + SuperPoly.const(1, NX))
    assert not localize_check(SuperPoly({((0, 0, 0), (2, 1)): Fraction(1)}, _trusted=True))


def test_odd_subsets():
    assert odd_subsets(3, 2) == [(1, 2), (1, 3), (2, 3)]
    assert len(odd_subsets(4)) == 16


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == SuperPoly.zero()


@settings(max_examples=60, deadline=None)
@given(polys(), polys())
def test_supercommutativity_on_homogeneous_parts(f, g):
    for pf in (0, 1):
        for pg in (0, 1):
            a = SuperPoly({k: c for k, c in f.terms.items() if len(k[1]) % 2 == pf})
            b = SuperPoly({k: c for k, c in g.terms.items() if len(k[1]) % 2 == pg})
            sign = -1 if pf and pg else 1
            assert mul(a, b) == (mul(b, a)).scale(sign)


@settings(max_examples=40, deadline=None)
@given(polys())
def test_json_round_trip(f):
    assert SuperPoly.from_json(f.to_json()) == f
