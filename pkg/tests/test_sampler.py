import math
from fractions import Fraction

import pytest

from jack_measures.exceptions import DomainError, TailThresholdError
from jack_measures.partitions import EMPTY, Partition, params_from_alpha, params_from_ebar_hbar, partitions_up_to
from jack_measures.sampler import (
    MeasureTable,
    build_table,
    empirical_cumulants,
    exact_cumulants,
    k_statistics,
    sample,
    statistic_values,
)


@pytest.fixture
def table(plancherel):
    return build_table(plancherel, params_from_alpha(2, 2), 8)


def test_build_table(table):
    assert table.cutoff == 8
    assert table.partitions == partitions_up_to(8)
    # |λ| is Poisson(1/ℏ) under Plancherel specializations
    expected_tail = 1 - sum(math.exp(-0.5) * 0.5**d / math.factorial(d) for d in range(9))
    assert table.tail_mass == pytest.approx(expected_tail, abs=1e-10)
    assert table.total() + table.tail_mass == pytest.approx(1.0)
    assert table.rows[EMPTY] == pytest.approx(math.exp(-0.5))


def test_build_table_rejects_negative_cutoff(plancherel):
    with pytest.raises(DomainError):
        build_table(plancherel, params_from_alpha(1, 1), -1)


def test_sampling_is_deterministic(table):
    first = sample(table, seed=7, count=200)
    assert first == sample(table, seed=7, count=200)
    assert first != sample(table, seed=8, count=200)
    assert all(lam.size <= 8 for lam in first)


def test_sampled_sizes(table):
    draws = sample(table, seed=0, count=20000)
    mean = sum(lam.size for lam in draws) / len(draws)
    assert mean == pytest.approx(0.5, abs=0.03)


def test_plancherel_sizes_at_small_hbar(plancherel):
    # |λ| ~ Poisson(1/ℏ); the table conditions on |λ| ≤ 10
    table = build_table(plancherel, params_from_ebar_hbar(0, Fraction(1, 4)), 10)
    count = 10**4
    draws = sample(table, seed=11, count=count)
    mean = sum(lam.size for lam in draws) / count
    truncated = sum(lam.size * prob for lam, prob in table.rows.items()) / table.total()
    assert truncated == pytest.approx(4.0, abs=0.03)
    assert abs(mean - 4.0) <= 3 * math.sqrt(4.0 / count) + (4.0 - truncated)


def test_tail_threshold(plancherel):
    small = build_table(plancherel, params_from_alpha(1, 1), 1)
    with pytest.raises(TailThresholdError) as excinfo:
        sample(small, seed=0, count=10)
    assert "increase the degree cutoff" in str(excinfo.value)
    assert sample(small, seed=0, count=10, threshold=0.5)


def test_sample_from_hand_built_table():
    table = MeasureTable(rows={EMPTY: 0.25, Partition((1,)): 0.75}, tail_mass=0.0, cutoff=1)
    draws = sample(table, seed=3, count=1000)
    assert set(draws) <= {EMPTY, Partition((1,))}
    assert 650 < sum(1 for lam in draws if lam) < 850


def test_k_statistics():
    values = [1.0, 2.0, 3.0, 4.0]
    assert k_statistics(values, 1) == pytest.approx(2.5)
    assert k_statistics(values, 2) == pytest.approx(5 / 3)
    assert k_statistics(values, 3) == pytest.approx(0.0, abs=1e-12)
    assert k_statistics([2.0] * 5, 4) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("values,n", [([1.0, 2.0], 0), ([1.0, 2.0], 5), ([1.0, 2.0], 2)])
def test_k_statistics_validation(values, n):
    with pytest.raises(DomainError):
        k_statistics(values, n)


def test_statistic_values(params):
    p = params({"hbar": Fraction(2)})
    samples = [EMPTY, Partition((1,)), Partition((2, 1)), Partition((1,))]
    assert statistic_values(samples, "T", 2, p) == pytest.approx([0.0, 2.0, 6.0, 2.0])
    assert statistic_values(samples, "O", 2, p) == pytest.approx([0.0, 4.0, 12.0, 4.0])
    with pytest.raises(DomainError):
        statistic_values(samples, "X", 2, p)


def test_exact_cumulants(params, plancherel):
    p = params({"ebar": Fraction(1), "hbar": Fraction(2)})
    # |λ| is Poisson(1/ℏ), so Var(T_2) = ℏ and Var(O_2) = 4ℏ
    assert exact_cumulants("T", 2, 1, plancherel, p) == 1
    assert exact_cumulants("T", 2, 2, plancherel, p) == 2
    assert exact_cumulants("O", 2, 2, plancherel, p) == 8
    with pytest.raises(DomainError):
        exact_cumulants("T", 2, 0, plancherel, p)
    with pytest.raises(DomainError):
        exact_cumulants("Q", 2, 1, plancherel, p)


def test_empirical_cumulants_match_exact(plancherel):
    params = params_from_alpha(1, 1)
    draws = sample(build_table(plancherel, params, 9), seed=11, count=20000)
    assert empirical_cumulants(draws, "O", 2, 1, params) == pytest.approx(2.0, abs=0.08)
    assert empirical_cumulants(draws, "O", 2, 2, params) == pytest.approx(4.0, abs=0.3)
