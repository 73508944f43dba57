"""
Exact sampling from Jack measures of bounded size and cumulant estimators.

Draws use numpy's Philox generator, a counter-based bit generator whose stream depends only on the seed.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np

from .exceptions import DomainError, InconsistencyError, TailThresholdError
from .jack import jack_measure_prob
from .partitions import AnisotropyParams, Partition, partitions_up_to
from .profiles import linear_statistics, profile_of, transition_moments
from .ribbon.sums import W_sum, decorated_cumulants_poly
from .scalars import ScalarField
from .specializations import Specialization

logger = logging.getLogger(__name__)

NEGATIVE_TOLERANCE = 1e-12
DEFAULT_TAIL_THRESHOLD = 0.05
MAX_RESAMPLE_ROUNDS = 1000


@dataclass
class MeasureTable:
    """
    Jack measure probabilities of all partitions of size at most D.

    Attributes:
        rows: Probabilities in canonical order (by size, then reverse lexicographic); zero rows are omitted.
        tail_mass: 1 − Σ rows, the probability of |λ| > D.
        cutoff: D.
    """

    rows: Dict[Partition, float] = field(default_factory=dict)
    tail_mass: float = 0.0
    cutoff: int = 0

    @property
    def partitions(self) -> List[Partition]:
        return list(self.rows)

    def total(self) -> float:
        return float(sum(self.rows.values()))


def build_table(v: Specialization, params: AnisotropyParams, D: int) -> MeasureTable:
    """
    Tabulates the diagonal Jack measure with v_out = v_in = v over |λ| ≤ D.

    Args:
        v: The specialization.
        params: The anisotropy parameters.
        D: The size cutoff.

    Returns:
        The table.

    Raises:
        InconsistencyError: If a probability is negative beyond round-off.
    """
    if D < 0:
        raise DomainError(f"Size cutoff must be nonnegative, got {D}.")
    table = MeasureTable(cutoff=D)
    for lam in partitions_up_to(D):
        prob = jack_measure_prob(lam, v, v, params).real
        if prob < -NEGATIVE_TOLERANCE:
            raise InconsistencyError(f"probability of {lam}", prob, 0.0, NEGATIVE_TOLERANCE)
        if prob > 0:
            table.rows[lam] = prob
    table.tail_mass = max(0.0, 1.0 - table.total())
    logger.debug("build_table: D=%d, %d rows, tail mass %.3e", D, len(table.rows), table.tail_mass)
    return table


def sample(
    table: MeasureTable, seed: int, count: int, threshold: float = DEFAULT_TAIL_THRESHOLD
) -> List[Partition]:
    """
    Draws i.i.d. partitions by inverse CDF over the table; draws landing in the tail are redrawn.

    Args:
        table: The probability table.
        seed: The Philox seed.
        count: The number of draws.
        threshold: The largest acceptable tail mass.

    Returns:
        The draws.

    Raises:
        TailThresholdError: If the tail mass is not below ``threshold``.
    """
    if table.tail_mass >= threshold:
        raise TailThresholdError(table.tail_mass, threshold)
    rng = np.random.Generator(np.random.Philox(seed))
    partitions = table.partitions
    cdf = np.cumsum(list(table.rows.values()))
    indices = np.searchsorted(cdf, rng.random(count), side="right")
    redrawn = 0
    for _ in range(MAX_RESAMPLE_ROUNDS):
        hits = np.flatnonzero(indices >= len(partitions))
        if not len(hits):
            break
        redrawn += len(hits)
        indices[hits] = np.searchsorted(cdf, rng.random(len(hits)), side="right")
    else:
        raise TailThresholdError(table.tail_mass, threshold)
    if redrawn:
        logger.info("sample: redrew %d draws that fell in the tail (mass %.3e)", redrawn, table.tail_mass)
    return [partitions[i] for i in indices]


def k_statistics(values: Sequence[float], n: int) -> float:
    """
    The unbiased estimator k_n of the n-th cumulant, n ≤ 4.

    Raises:
        DomainError: If n is outside 1..4 or there are not more than n values.
    """
    if not 1 <= n <= 4:
        raise DomainError(f"k-statistics are available for orders 1 to 4, got {n}.")
    x = np.asarray(values, dtype=float)
    N = len(x)
    if N <= n:
        raise DomainError(f"The order-{n} k-statistic needs more than {n} values, got {N}.")
    s1, s2, s3, s4 = (float(np.sum(x**p)) for p in range(1, 5))
    if n == 1:
        return s1 / N
    if n == 2:
        return (N * s2 - s1**2) / (N * (N - 1))
    if n == 3:
        return (2 * s1**3 - 3 * N * s1 * s2 + N**2 * s3) / (N * (N - 1) * (N - 2))
    return (
        -6 * s1**4 + 12 * N * s1**2 * s2 - 3 * N * (N - 1) * s2**2 - 4 * N * (N + 1) * s1 * s3 + N**2 * (N + 1) * s4
    ) / (N * (N - 1) * (N - 2) * (N - 3))


def statistic_values(samples: Sequence[Partition], statistic: str, index: int, params: AnisotropyParams) -> List[float]:
    """
    T_ℓ↑|_λ (statistic "T") or O_p|_λ (statistic "O") for every sample.

    Raises:
        DomainError: If the statistic is unknown.
    """
    if statistic not in ("T", "O"):
        raise DomainError(f"Statistic must be 'T' or 'O', got '{statistic}'.")
    cache: Dict[Partition, float] = {}
    values = []
    for lam in samples:
        if lam not in cache:
            profile = profile_of(lam, params)
            if statistic == "T":
                cache[lam] = float(transition_moments(profile, index)[index])
            else:
                cache[lam] = float(linear_statistics(profile, index)[index])
        values.append(cache[lam])
    return values


def empirical_cumulants(
    samples: Sequence[Partition], statistic: str, index: int, order: int, params: AnisotropyParams
) -> float:
    """The k-statistic of the given order of T_index or O_index over the samples."""
    return k_statistics(statistic_values(samples, statistic, index, params), order)


def exact_cumulants(statistic: str, index: int, order: int, v: Specialization, params: AnisotropyParams) -> Any:
    """
    The exact order-n cumulant of T_index or O_index under the Jack measure, from ribbon path sums.

    Exact when ε̄, ℏ and the specialization are rational.

    Raises:
        DomainError: If the statistic is unknown or the order is below 1.
    """
    if order < 1:
        raise DomainError(f"Cumulant order must be positive, got {order}.")
    field_ = ScalarField(exact=params.exact_ebar_hbar)
    if statistic == "T":
        poly = W_sum((index,) * order, v, v, field_)
    elif statistic == "O":
        poly = decorated_cumulants_poly((index,) * order, v, v, field_)
    else:
        raise DomainError(f"Statistic must be 'T' or 'O', got '{statistic}'.")
    return field_.real(poly.evaluate(params.hbar, params.ebar))
