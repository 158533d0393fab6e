import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gl2modp.weights import (
    HChar,
    Weight,
    WeightRangeError,
    alpha,
    all_weights,
    bracket_s,
    generic_tuples,
    h_character,
    hchar_s,
    is_generic,
    sigma_shift,
    weight_dim,
)


def test_hchar_group_law():
    q = 25
    a, b = HChar(3, 7, q), HChar(20, 5, q)
    assert (a * b).pair() == (23, 12)
    assert (a**24).pair() == (0, 0)
    assert hchar_s(a).pair() == (7, 3)
    assert alpha(q).pair() == (1, 23)
    with pytest.raises(ValueError):
        a * HChar(1, 1, 9)


def test_weight_normalises_twist_and_checks_range():
    assert Weight((1, 2), 30, 5).a == 30 % 24
    with pytest.raises(WeightRangeError):
        Weight((5,), 0, 5)
    with pytest.raises(ValueError):
        Weight((), 0, 5)


def test_weight_count_and_dims():
    ws = list(all_weights(3, 2))
    assert len(ws) == 9 * 8
    assert weight_dim(Weight((2, 1), 0, 3)) == 6
    assert Weight.from_json(Weight((2, 1), 3, 3).to_json(), 3) == Weight((2, 1), 3, 3)


def test_h_character_formula_examples():
    assert h_character(Weight((1,), 0, 3)).pair() == (1, 0)
    assert h_character(Weight((1, 2), 3, 5)).pair() == (1 + 10 + 3, 3)


def test_genericity():
    assert is_generic((1, 2), 5)
    assert not is_generic((0, 0), 5)
    assert not is_generic((2, 2), 5)
    assert not is_generic((3, 1), 5)
    assert len(list(generic_tuples(5, 2))) == 9 - 2


@pytest.mark.parametrize("p,f", [(5, 2), (5, 3), (7, 2), (7, 3)])
def test_shifts_are_distinct_weights(p, f):
    for r in generic_tuples(p, f):
        w = Weight(r, 0, p)
        shifts = [sigma_shift(w, j) for j in range(f)]
        assert len(set(shifts)) == f
        assert w not in shifts


def test_shift_tuples_alone_can_coincide():
    # only the determinant twist separates the two shifts here
    w = Weight((1, 1), 0, 5)
    s0, s1 = sigma_shift(w, 0), sigma_shift(w, 1)
    assert s0.r == s1.r == (2, 2)
    assert s0 != s1


@pytest.mark.parametrize("p,f", [(5, 2), (5, 3), (7, 2), (7, 3)])
def test_shift_dimension_ratio(p, f):
    for r in generic_tuples(p, f):
        w = Weight(r, 0, p)
        for j in range(f):
            jm = (j - 1) % f
            lhs = weight_dim(sigma_shift(w, j)) * (r[j] + 1) * (r[jm] + 1)
            rhs = weight_dim(w) * (r[j] + 2) * (p - 1 - r[jm])
            assert lhs == rhs


@given(st.sampled_from([5, 7, 11]), st.data())
def test_shift_keeps_the_central_character(p, data):
    # a twist by det^b changes the central character by 2b, the tuple by sum r_i p^i
    f = data.draw(st.integers(2, 3))
    r = data.draw(st.sampled_from(list(generic_tuples(p, f))))
    j = data.draw(st.integers(0, f - 1))
    w = Weight(r, 0, p)
    s = sigma_shift(w, j)
    q = p**f
    central = lambda u: (sum(x * p**i for i, x in enumerate(u.r)) + 2 * u.a) % (q - 1)
    assert central(s) == central(w)


def test_shift_errors():
    with pytest.raises(ValueError):
        sigma_shift(Weight((1,), 0, 5), 0)
    with pytest.raises(WeightRangeError):
        sigma_shift(Weight((4, 1), 0, 5), 1)


def test_bracket_tuple():
    assert bracket_s((1, 2, 3), 7) == (2, 3, 3)
    assert bracket_s(Weight((0, 0), 0, 5)) == (1, 3)
    with pytest.raises(WeightRangeError):
        bracket_s((1, 4), 5)
