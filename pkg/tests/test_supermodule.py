import random

import pytest

from helpers import random_even_matrix, random_module
from supersplit.superring import SuperPoly
from supersplit.supermodule import (FreeSupermodule, NotInvertibleError, SuperDim, SuperMatrix,
                                    bosonic_reduce_matrix, compose, det, direct_sum, dual, invert, is_invertible,
                                    parity_shift, parity_sign, series_terms, supertranspose, tensor, twist)

NX, M = 3, 2


def test_superdim_arithmetic():
    a, b = SuperDim(2, 1), SuperDim.parse("1|3")
    assert a + b == SuperDim(3, 4)
    assert 3 * a == SuperDim(6, 3) and a - a == SuperDim()
    assert a.pi() == SuperDim(1, 2)
    assert str(a) == "2|1"
    with pytest.raises(ValueError):
        SuperDim.parse("2,1")


def test_module_basics():
    V = FreeSupermodule((1, 0), (2,))
    assert V.rank == SuperDim(2, 1)
    assert V.parities == (0, 0, 1)
    assert V.pi().rank == SuperDim(1, 2)
    assert V.dual().twists == (-1, 0, -2)
    assert FreeSupermodule.from_json(V.to_json()) == V


def test_entry_degree_is_enforced():
    V, W = FreeSupermodule((0,)), FreeSupermodule((2,))
    SuperMatrix(V, W, [[SuperPoly.x(0, NX, 2)]], NX)
    with pytest.raises(ValueError, match="degree"):
        SuperMatrix(V, W, [[SuperPoly.x(0, NX, 1)]], NX)


def test_odd_block_needs_odd_entries():
    V = FreeSupermodule((0,), (1,))
    th = SuperPoly.theta(1, NX)
    SuperMatrix(V, V, [[SuperPoly.const(1, NX), SuperPoly.zero()], [th, SuperPoly.const(1, NX)]], NX)
    with pytest.raises(ValueError, match="parity"):
        SuperMatrix(V, V, [[SuperPoly.const(1, NX), SuperPoly.zero()],
                           [SuperPoly.x(0, NX), SuperPoly.const(1, NX)]], NX)


def _pairs(seed, count=15):
    rng = random.Random(seed)
    for _ in range(count):
        V = random_module(rng, 2, 2)
        yield rng, V, random_even_matrix(rng, V, NX, M), random_even_matrix(rng, V, NX, M)


def test_supertranspose_is_antimultiplicative():
    for _, _, f, g in _pairs(1):
        assert supertranspose(compose(f, g)) == compose(supertranspose(g), supertranspose(f))


def test_double_dual_is_sign_conjugation():
    for _, V, f, _ in _pairs(2):
        s = parity_sign(V, NX)
        assert dual(dual(f)) == compose(s, compose(f, s))


def test_tensor_is_functorial():
    rng = random.Random(3)
    for _ in range(6):
        V, W = random_module(rng, 2, 1), random_module(rng, 1, 2)
        f1, f2 = random_even_matrix(rng, V, NX, M), random_even_matrix(rng, V, NX, M)
        g1, g2 = random_even_matrix(rng, W, NX, M), random_even_matrix(rng, W, NX, M)
        assert tensor(compose(f1, f2), compose(g1, g2)) == compose(tensor(f1, g1), tensor(f2, g2))


def test_direct_sum_and_parity_shift_respect_composition():
    for _, _, f, g in _pairs(4, 8):
        assert direct_sum(compose(f, g), g) == compose(direct_sum(f, SuperMatrix.identity(g.source, NX)),
                                                       direct_sum(g, g))
        assert parity_shift(compose(f, g)) == compose(parity_shift(f), parity_shift(g))
        assert twist(f, 3).source.twists == tuple(t + 3 for t in f.source.twists)


def test_inverse_is_exact():
    rng = random.Random(5)
    done = 0
    while done < 20:
        V = random_module(rng)
        f = random_even_matrix(rng, V, NX, 3)
        if not is_invertible(f, range(NX)):
            continue
        inv = invert(f)
        one = SuperMatrix.identity(V, NX)
        assert compose(f, inv) == one and compose(inv, f) == one
        done += 1


def test_series_terminates_by_nilpotency():
    rng = random.Random(6)
    V = FreeSupermodule((0, 0), (0,))
    f = random_even_matrix(rng, V, NX, 2)
    while not is_invertible(f, range(NX)):
        f = random_even_matrix(rng, V, NX, 2)
    terms = series_terms(f, 6)
    assert terms[-1].is_zero()
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    assert total == invert(f)


def test_singular_reduction_is_detected():
    rng = random.Random(7)
    for _ in range(10):
        V = random_module(rng)
        f = random_even_matrix(rng, V, NX, M, singular=True)
        assert not is_invertible(f, range(NX))
        with pytest.raises(NotInvertibleError):
            invert(f)


def test_twist_mismatch_is_not_invertible():
    V, W = FreeSupermodule((0, 1)), FreeSupermodule((1, 0))
    one, z = SuperPoly.const(1, NX), SuperPoly.zero()
    f = SuperMatrix(V, W, [[z, one], [one, z]], NX)
    assert is_invertible(f)
    U = FreeSupermodule((0, 2))
    g = SuperMatrix(V, U, [[one, z], [z, SuperPoly.x(0, NX)]], NX)
    assert not is_invertible(g, range(NX))


def test_determinant_small_cases():
    x = [SuperPoly.x(i, NX) for i in range(NX)]
    assert det([[x[0], x[1]], [x[2], x[0]]]) == x[0] * x[0] - x[1] * x[2]


def test_reduction_of_product_is_product_of_reductions():
    for _, _, f, g in _pairs(8, 8):
        assert bosonic_reduce_matrix(compose(f, g)) == compose(bosonic_reduce_matrix(f), bosonic_reduce_matrix(g))


def test_json_round_trip():
    for _, _, f, _ in _pairs(9, 5):
        assert SuperMatrix.from_json(f.to_json(), NX) == f
