import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gl2modp import iwasawa
from gl2modp.iwasawa import CyclicModule, TruncatedRing
from gl2modp.weights import HChar, alpha


def test_truncated_ring_multiplication():
    R = TruncatedRing(5, 2)
    assert R.dim == 25
    a = R.index((2, 1))
    b = R.index((2, 3))
    assert R.exponents(R.mul_monomials(a, b)) == (4, 4)
    assert R.mul_monomials(R.index((3, 0)), R.index((2, 0))) is None
    assert R.degree(a) == 3


def test_example_p5_f2():
    M = CyclicModule(5, (1, 2))
    assert M.dim() == 6
    assert iwasawa.ext1_dim(M) == 2
    chars = iwasawa.ext1_characters(M)
    a = alpha(25)
    assert chars == sorted([(a ** (2 * 1), 1), (a ** (3 * 5), 1)])


def test_s_range_checked():
    with pytest.raises(ValueError):
        CyclicModule(5, (4,))


@pytest.mark.parametrize("f", [1, 2])
def test_dimension_independent_of_s(f):
    dims = {iwasawa.ext1_dim(CyclicModule(5, s)) for s in itertools.product(range(4), repeat=f)}
    assert dims == {f}


@pytest.mark.parametrize("p", [3, 5, 7])
def test_koszul_count_at_f1(p):
    for s in range(p - 1):
        assert iwasawa.koszul_ext1_dim(CyclicModule(p, (s,))) == 1


@st.composite
def modules(draw):
    p = draw(st.sampled_from([5, 7]))
    f = draw(st.integers(1, 2))
    s = tuple(draw(st.integers(0, p - 2)) for _ in range(f))
    q = p**f
    psi = HChar(draw(st.integers(0, q - 2)), draw(st.integers(0, q - 2)), q)
    return CyclicModule(p, s, psi)


@given(modules())
def test_characters_three_ways(M):
    chars = iwasawa.ext1_characters(M)
    assert chars == iwasawa.closed_form_characters(M)
    assert chars == iwasawa.ext1_characters_dense(M)
    assert all(m == 1 for _, m in chars)
    assert len(chars) == M.f


@given(modules())
def test_basis_extensions_are_non_split(M):
    for j in range(M.f):
        w = iwasawa.extension_module_generators(M, j)
        assert w["extension_dim"] == w["module_dim"] + 1
        assert w["extension_generators"] == 1 < w["split_generators"]
        assert w["bumped_generators"] == 1


def test_basis_descriptors():
    M = CyclicModule(5, (1, 2))
    basis = iwasawa.ext1_basis(M)
    assert [b["image_exponents"] for b in basis] == [[2, 0], [0, 3]]
    assert sorted(b["character"] for b in basis) == sorted(c.to_json() for c, _ in iwasawa.ext1_characters(M))


def test_psi_override_shifts_characters():
    M = CyclicModule(5, (1, 2))
    psi = HChar(3, 1, 25)
    shifted = iwasawa.ext1_characters(M, psi)
    base = iwasawa.ext1_characters(M)
    assert sorted(c for c, _ in shifted) == sorted(psi * c for c, _ in base)


@pytest.mark.parametrize("p,f", [(3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (3, 3)])
def test_homomorphism_count(p, f):
    assert iwasawa.homomorphism_count(p, f) == f


def test_homomorphism_count_rejects_two():
    with pytest.raises(ValueError):
        iwasawa.homomorphism_count(2, 1)
