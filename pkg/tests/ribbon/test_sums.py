from fractions import Fraction

import pytest

from jack_measures.exceptions import DomainError
from jack_measures.partitions import Partition
from jack_measures.ribbon.polynomials import BiPolynomial
from jack_measures.ribbon.sums import (
    C_count,
    C_table,
    W_sum,
    Y_sum,
    cumulants_poly,
    decorated_cumulants_poly,
    decorated_moments_poly,
    moments_from_cumulants,
    moments_poly,
    ribbon_counts,
)


@pytest.mark.parametrize("m,expected", [(1, 1), (2, 2), (3, 5), (4, 14), (5, 42)])
def test_catalan_numbers(plancherel, exact, m, expected):
    assert W_sum((2 * m,), plancherel, plancherel, exact)[(0, 0)] == exact(expected)


def test_small_moments(plancherel, exact):
    assert W_sum((2,), plancherel, plancherel, exact) == BiPolynomial(exact, {(0, 0): 1})
    assert Y_sum((2, 2), plancherel, plancherel, exact) == BiPolynomial(exact, {(0, 0): 1, (1, 0): 1})
    assert W_sum((2, 2), plancherel, plancherel, exact) == BiPolynomial(exact, {(1, 0): 1})
    assert Y_sum((3,), plancherel, plancherel, exact) == BiPolynomial(exact, {(0, 1): 1})
    assert Y_sum((4,), plancherel, plancherel, exact) == BiPolynomial(exact, {(0, 0): 2, (1, 0): 1, (0, 2): 1})
    assert not Y_sum((1,), plancherel, plancherel, exact)


def test_moments_and_cumulants_are_aliases(plancherel):
    assert moments_poly((3, 2), plancherel, plancherel) == Y_sum((3, 2), plancherel, plancherel)
    assert cumulants_poly((3, 2), plancherel, plancherel) == W_sum((3, 2), plancherel, plancherel)


@pytest.mark.parametrize("lengths", [(2, 2), (2, 3), (4, 2), (3, 3), (2, 2, 2), (2, 3, 4), (4, 4, 2)])
def test_cumulant_hbar_grading(specialization, exact, lengths):
    v = specialization({2: "1/2"})
    cumulant = W_sum(lengths, v, v, exact)
    assert cumulant.min_hbar_exponent() >= len(lengths) - 1
    assert all(q >= len(lengths) - 1 for q, _ in cumulant.keys())


@pytest.mark.parametrize("lengths", [(4,), (2, 2), (3, 4), (2, 2, 2), (2, 3, 3), (2, 2, 2, 2)])
def test_moments_from_cumulants(specialization, exact, lengths):
    v = specialization({2: "1/2", 3: [0, "1/3"]})
    assert moments_from_cumulants(lengths, v, v, exact) == Y_sum(lengths, v, v, exact)


def test_counts_are_independent_of_specialization():
    counts = dict(ribbon_counts((2,), 2))
    assert counts == {(0, 0, (1,), (1,)): 1, (0, 0, (2,), (2,)): 1}


def test_c_count_and_table(exact):
    assert C_count((2,), Partition((1,)), Partition((1,)), exact) == BiPolynomial(exact, {(0, 0): 1})
    assert C_count((2, 2), Partition((1,)), Partition((1,)), exact) == BiPolynomial(exact, {(1, 0): 1})
    assert C_table((2,), 1) == [(0, 0, Partition((1,)), Partition((1,)), 1)]
    with pytest.raises(DomainError) as excinfo:
        C_count((2,), Partition((2,)), Partition((1,)), exact)
    assert "differ in size" in str(excinfo.value)


def test_weights_use_conjugate_of_outgoing(specialization, exact):
    v_out = specialization({1: [0, 1]})
    v_in = specialization({1: [0, 1]})
    # conj(i) · i = 1 for the single Dyck path of length two
    assert W_sum((2,), v_out, v_in, exact) == BiPolynomial(exact, {(0, 0): 1})


@pytest.mark.parametrize("lengths", [(), (0,), (2, -1)])
def test_invalid_lengths(plancherel, lengths):
    with pytest.raises(DomainError):
        W_sum(lengths, plancherel, plancherel)


def test_decorated_variance_of_o2(plancherel, exact):
    # O_2 = 2 T_2, so Var(O_2) = 4 κ(T_2, T_2) = 4ℏ
    assert decorated_cumulants_poly((2, 2), plancherel, plancherel, exact) == BiPolynomial(exact, {(1, 0): 4})
    assert decorated_moments_poly((2,), plancherel, plancherel, exact) == BiPolynomial(exact, {(0, 0): 2})
    assert not decorated_moments_poly((1,), plancherel, plancherel, exact)


def test_decorated_mean_of_o3(plancherel, exact):
    # O_3 = 3 T_3 once T_1 is dropped, and E[T_3] = ε̄
    assert decorated_moments_poly((3,), plancherel, plancherel, exact) == BiPolynomial(exact, {(0, 1): 3})


def test_decorated_requires_statistics(plancherel):
    with pytest.raises(DomainError):
        decorated_cumulants_poly((), plancherel, plancherel)
    with pytest.raises(DomainError):
        decorated_moments_poly((0,), plancherel, plancherel)


def test_exact_evaluation(plancherel, exact):
    value = Y_sum((4,), plancherel, plancherel, exact).evaluate(Fraction(1, 2), Fraction(-1))
    assert exact.real(value) == Fraction(7, 2)
