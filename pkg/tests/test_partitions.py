from fractions import Fraction

import pytest

from jack_measures.exceptions import DomainError
from jack_measures.partitions import (
    EMPTY,
    Partition,
    content,
    params_from_alpha,
    params_from_ebar_hbar,
    params_from_eps,
    partition_count,
    partitions_of_size,
    partitions_up_to,
    rational_sqrt,
)


@pytest.mark.parametrize("parts", [(0,), (1, 2), (-1,), (3, 0, 1)])
def test_partition_rejects_invalid_parts(parts):
    with pytest.raises(DomainError) as excinfo:
        Partition(parts)
    assert str(parts) in str(excinfo.value)


def test_partition_basics():
    lam = Partition((3, 1, 1))
    assert lam.size == 5
    assert lam.length == 3
    assert lam.row(1) == 3
    assert lam.row(4) == 0
    assert lam.multiplicities() == {3: 1, 1: 2}
    assert lam.transpose() == Partition((3, 1, 1))
    assert Partition((4, 2)).transpose() == Partition((2, 2, 1, 1))
    assert str(lam) == "(3,1,1)"
    assert str(EMPTY) == "∅"
    assert not EMPTY
    assert Partition.from_parts([1, 0, 3, 2]) == Partition((3, 2, 1))


def test_cells():
    lam = Partition((2, 1))
    assert lam.boxes() == [(1, 1), (1, 2), (2, 1)]
    assert lam.addable_cells() == [(1, 3), (2, 2), (3, 1)]
    assert lam.removable_cells() == [(1, 2), (2, 1)]
    assert EMPTY.addable_cells() == [(1, 1)]
    assert EMPTY.removable_cells() == []


def test_add_and_remove_parts():
    lam = Partition((2, 1))
    assert lam.add_part(3) == Partition((3, 2, 1))
    assert lam.remove_part(2) == Partition((1,))


def test_dominance():
    assert Partition((3,)).dominates(Partition((2, 1)))
    assert Partition((2, 1)).dominates(Partition((1, 1, 1)))
    assert not Partition((2, 2, 2)).dominates(Partition((3, 1, 1, 1)))
    assert not Partition((3, 1, 1, 1)).dominates(Partition((2, 2, 2)))
    assert not Partition((2,)).dominates(Partition((1,)))


def test_norm_squared():
    assert Partition((2, 1, 1)).norm_squared(Fraction(1, 2)) == Fraction(1) * Fraction(1, 4) * 2
    assert EMPTY.norm_squared(3) == 1


@pytest.mark.parametrize("parts,expected", [((1,), 1), ((2, 1), 2), ((3, 2), 5), ((2, 2, 1, 1), 9), ((4, 3, 1), 70)])
def test_dimension(parts, expected):
    assert Partition(parts).dimension() == expected


def test_partitions_of_size_order():
    assert partitions_of_size(4) == [
        Partition((4,)),
        Partition((3, 1)),
        Partition((2, 2)),
        Partition((2, 1, 1)),
        Partition((1, 1, 1, 1)),
    ]
    assert partitions_of_size(0) == [EMPTY]


@pytest.mark.parametrize("d,expected", [(0, 1), (1, 1), (5, 7), (8, 22), (10, 42), (20, 627)])
def test_partition_count(d, expected):
    assert partition_count(d) == expected
    if d <= 10:
        assert len(partitions_of_size(d)) == expected


def test_partitions_up_to():
    assert len(partitions_up_to(4)) == 1 + 1 + 2 + 3 + 5


def test_partitions_of_negative_size():
    with pytest.raises(DomainError):
        partitions_of_size(-1)


def test_params_from_ebar_hbar_exact():
    params = params_from_ebar_hbar(Fraction(1), Fraction(2))
    assert params.exact
    assert (params.eps1, params.eps2) == (Fraction(2), Fraction(-1))
    assert params.alpha == 2
    assert params.eps1 + params.eps2 == params.ebar
    assert -params.eps1 * params.eps2 == params.hbar


def test_params_from_ebar_hbar_keeps_rational_ebar_hbar():
    params = params_from_ebar_hbar(Fraction(-1), Fraction(1, 2))
    assert not params.exact
    assert params.exact_ebar_hbar
    assert (params.ebar, params.hbar) == (Fraction(-1), Fraction(1, 2))
    assert isinstance(params.eps1, float)
    assert params.eps1 + params.eps2 == pytest.approx(-1.0)
    assert -params.eps1 * params.eps2 == pytest.approx(0.5)


def test_params_from_float_ebar_hbar():
    params = params_from_ebar_hbar(-1.0, 0.5)
    assert not params.exact_ebar_hbar
    assert params.ebar == -1.0


@pytest.mark.parametrize("hbar", [0, -1, Fraction(-1, 2)])
def test_params_require_positive_hbar(hbar):
    with pytest.raises(DomainError) as excinfo:
        params_from_ebar_hbar(0, hbar)
    assert "hbar must be strictly positive" in str(excinfo.value)


def test_params_from_eps_and_alpha():
    assert params_from_eps(Fraction(1, 2), Fraction(-2)).hbar == 1
    with pytest.raises(DomainError):
        params_from_eps(-1, -1)
    params = params_from_alpha(2, 2)
    assert params.exact
    assert (params.eps1, params.eps2) == (2, -1)
    assert params_from_alpha(2.0, 1.0).alpha == pytest.approx(2.0)
    with pytest.raises(DomainError):
        params_from_alpha(0, 1)


def test_negated_params():
    params = params_from_ebar_hbar(Fraction(1), Fraction(2))
    negated = params.negated()
    assert negated.ebar == -1
    assert negated.hbar == 2
    assert (negated.eps1, negated.eps2) == (1, -2)
    assert negated.negated() == params


def test_content():
    params = params_from_ebar_hbar(Fraction(1), Fraction(2))
    assert content(1, 1, params) == 0
    assert content(1, 3, params) == 4
    assert content(2, 1, params) == -1


@pytest.mark.parametrize(
    "value,expected", [(Fraction(9, 4), Fraction(3, 2)), (Fraction(2), None), (Fraction(-1), None)]
)
def test_rational_sqrt(value, expected):
    assert rational_sqrt(value) == expected
