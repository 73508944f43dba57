"""
Weighted sums over ribbon paths.

The sums Y (all ribbon paths), W (connected ribbon paths), C (connected ribbon paths with prescribed unpaired
jump profiles) and their decorated versions are computed by one memoized transfer recursion. It walks the
steps of all sites in order and keeps, as state, the current height, the multiset of down jumps that are still
waiting for a later up jump to pair with, and the connected components of the sites joined so far. The
recursion returns integer counts keyed by (q, m, μ⁻, μ⁺); specializations are substituted afterwards.
"""

import logging
from collections import Counter
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_partitions

from ..exceptions import DomainError
from ..partitions import Partition
from ..profiles import kmk_polynomial
from ..scalars import ScalarField
from ..specializations import Specialization
from .paths import Decoration
from .polynomials import BiPolynomial

logger = logging.getLogger(__name__)

CountKey = Tuple[int, int, Tuple[int, ...], Tuple[int, ...]]
Counts = Tuple[Tuple[CountKey, int], ...]

_EMPTY: CountKey = (0, 0, (), ())


def _insert(parts: Tuple[int, ...], k: int) -> Tuple[int, ...]:
    return tuple(sorted(parts + (k,), reverse=True))


def _relabel(labels: Tuple[int, ...]) -> Tuple[int, ...]:
    seen: Dict[int, int] = {}
    return tuple(seen.setdefault(label, len(seen)) for label in labels)


def _join(labels: Tuple[int, ...], a: int, b: int) -> Tuple[int, ...]:
    old, new = labels[a], labels[b]
    return _relabel(tuple(new if label == old else label for label in labels))


@lru_cache(maxsize=256)
def ribbon_counts(lengths: Tuple[int, ...], K: int, groups: Optional[Tuple[int, ...]] = None) -> Counts:
    """
    Integer counts of ribbon paths, keyed by (q, m, μ⁻, μ⁺).

    Each path contributes Π size(pairing) · Π height(slide); unpaired jumps have degree at most ``K``.

    Args:
        lengths: ℓ₁, ..., ℓ_n, all positive.
        K: The largest unpaired jump degree.
        groups: When given, only paths whose reduced graph is connected after merging the sites with equal group
            labels are counted. ``tuple(range(n))`` counts connected ribbon paths.

    Returns:
        Sorted ``(key, count)`` pairs with nonzero counts.
    """
    if not lengths or any(length < 1 for length in lengths):
        raise DomainError(f"Lengths must be a nonempty sequence of positive integers, got {lengths}.")
    steps = [(a, i) for a, length in enumerate(lengths) for i in range(length)]
    total = len(steps)
    track = groups is not None
    start_labels = _relabel(groups) if track else ()

    @lru_cache(maxsize=None)
    def suffix(t: int, h: int, opens: Tuple[Tuple[int, int], ...], labels: Tuple[int, ...]) -> Dict[CountKey, int]:
        if t == total:
            if opens or (track and len(set(labels)) > 1):
                return {}
            return {_EMPTY: 1}
        if len(opens) > total - t:
            return {}
        a, i = steps[t]
        last = i == lengths[a] - 1
        out: Dict[CountKey, int] = {}

        def absorb(
            result: Dict[CountKey, int], weight: int, dq: int, dm: int, minus: int = 0, plus: int = 0
        ) -> None:
            for (q, m, mu_minus, mu_plus), count in result.items():
                key = (
                    q + dq,
                    m + dm,
                    _insert(mu_minus, minus) if minus else mu_minus,
                    _insert(mu_plus, plus) if plus else mu_plus,
                )
                out[key] = out.get(key, 0) + weight * count

        if not last:
            if h > 0:
                absorb(suffix(t + 1, h, opens, labels), h, 0, 1)
            for k in range(1, K + 1):
                absorb(suffix(t + 1, h + k, opens, labels), 1, 0, 0, plus=k)
            for (k, b), multiplicity in Counter(opens).items():
                remaining = list(opens)
                remaining.remove((k, b))
                joined = _join(labels, a, b) if track else labels
                absorb(suffix(t + 1, h + k, tuple(remaining), joined), k * multiplicity, 1, 0)
        for k in range(1, h + 1):
            if last and k != h:
                continue
            if k <= K:
                absorb(suffix(t + 1, h - k, opens, labels), 1, 0, 0, minus=k)
            absorb(suffix(t + 1, h - k, tuple(sorted(opens + ((k, a),))), labels), 1, 0, 0)
        return {key: count for key, count in out.items() if count}

    result = suffix(0, 0, (), start_labels)
    logger.debug("ribbon_counts%s K=%d groups=%s: %d keys", lengths, K, groups, len(result))
    return tuple(sorted(result.items()))


def _support_bound(*specializations: Specialization) -> int:
    return max((v.max_index for v in specializations), default=0)


def _evaluate(counts: Counts, v_out: Specialization, v_in: Specialization, field: ScalarField) -> BiPolynomial:
    K = _support_bound(v_out, v_in)
    conj_out = {k: field.conj(v_out.value(k, field)) for k in range(1, K + 1)}
    vin = {k: v_in.value(k, field) for k in range(1, K + 1)}
    result = BiPolynomial(field)
    for (q, m, mu_minus, mu_plus), count in counts:
        value = field(count)
        for k in mu_minus:
            value = value * conj_out[k]
        for k in mu_plus:
            value = value * vin[k]
        if not field.is_zero(value):
            result.add_term((q, m), value)
    return result


def Y_sum(
    lengths: Sequence[int], v_out: Specialization, v_in: Specialization, field: Optional[ScalarField] = None
) -> BiPolynomial:
    """
    Σ_{q,m} Y_{n,q,m}(ℓ⃗ | v^out, v^in) ℏ^q ε̄^m, the weighted count of all ribbon paths.

    Raises:
        DomainError: If ``lengths`` is empty.
    """
    field = field or ScalarField()
    lengths = _check_lengths(lengths)
    return _evaluate(ribbon_counts(lengths, _support_bound(v_out, v_in)), v_out, v_in, field)


def W_sum(
    lengths: Sequence[int], v_out: Specialization, v_in: Specialization, field: Optional[ScalarField] = None
) -> BiPolynomial:
    """
    Σ_{g,m} W_{n,g,m}(ℓ⃗ | v^out, v^in) ℏ^{n−1+g} ε̄^m, the weighted count of connected ribbon paths.

    Raises:
        DomainError: If ``lengths`` is empty.
    """
    field = field or ScalarField()
    lengths = _check_lengths(lengths)
    groups = tuple(range(len(lengths)))
    return _evaluate(ribbon_counts(lengths, _support_bound(v_out, v_in), groups), v_out, v_in, field)


def C_count(
    lengths: Sequence[int], mu_out: Partition, mu_in: Partition, field: Optional[ScalarField] = None
) -> BiPolynomial:
    """
    The count of connected ribbon paths with unpaired jump profiles μ⁻ = ``mu_out`` and μ⁺ = ``mu_in``.

    Coefficients are nonnegative integers keyed by (n − 1 + g, m).

    Raises:
        DomainError: If the profiles differ in size or ``lengths`` is empty.
    """
    if mu_out.size != mu_in.size:
        raise DomainError(f"Unpaired jump profiles {mu_out} and {mu_in} differ in size.")
    field = field or ScalarField()
    lengths = _check_lengths(lengths)
    K = max(mu_out.parts[:1] + mu_in.parts[:1], default=0)
    groups = tuple(range(len(lengths)))
    result = BiPolynomial(field)
    for (q, m, mu_minus, mu_plus), count in ribbon_counts(lengths, K, groups):
        if mu_minus == mu_out.parts and mu_plus == mu_in.parts:
            result.add_term((q, m), field(count))
    return result


def C_table(lengths: Sequence[int], K: int) -> List[Tuple[int, int, Partition, Partition, int]]:
    """All nonzero connected counts (q, m, μ⁻, μ⁺, count) with unpaired jump degrees at most ``K``."""
    lengths = _check_lengths(lengths)
    groups = tuple(range(len(lengths)))
    return [
        (q, m, Partition(mu_minus), Partition(mu_plus), count)
        for (q, m, mu_minus, mu_plus), count in ribbon_counts(lengths, K, groups)
    ]


def moments_poly(
    lengths: Sequence[int], v_out: Specialization, v_in: Specialization, field: Optional[ScalarField] = None
) -> BiPolynomial:
    """The joint moment 𝔼[T_{ℓ₁}↑ ⋯ T_{ℓ_n}↑] as a polynomial in ℏ and ε̄."""
    return Y_sum(lengths, v_out, v_in, field)


def cumulants_poly(
    lengths: Sequence[int], v_out: Specialization, v_in: Specialization, field: Optional[ScalarField] = None
) -> BiPolynomial:
    """The joint cumulant κ_n(T_{ℓ₁}↑, ..., T_{ℓ_n}↑) as a polynomial in ℏ and ε̄."""
    return W_sum(lengths, v_out, v_in, field)


def moments_from_cumulants(
    lengths: Sequence[int], v_out: Specialization, v_in: Specialization, field: Optional[ScalarField] = None
) -> BiPolynomial:
    """
    The joint moment rebuilt from joint cumulants: Σ over set partitions π of the sites of Π_{B∈π} κ(ℓ_B).
    """
    field = field or ScalarField()
    lengths = _check_lengths(lengths)
    total = BiPolynomial(field)
    for partition in multiset_partitions(list(range(len(lengths)))):
        term = BiPolynomial(field, {(0, 0): 1})
        for block in partition:
            term = term * W_sum([lengths[a] for a in sorted(block)], v_out, v_in, field)
        total = total + term
    return total


def _expanded_statistics(ps: Sequence[int]) -> List[List[Tuple[int, Tuple[int, ...]]]]:
    expansions = []
    for p in ps:
        if p < 1:
            raise DomainError(f"Linear statistic indices must be positive, got {p}.")
        # T̂₁ vanishes identically, so monomials containing it drop out
        expansions.append([(c, lengths) for c, lengths in kmk_polynomial(p) if 1 not in lengths])
    return expansions


def _decorated(
    ps: Sequence[int], v_out: Specialization, v_in: Specialization, field: ScalarField, connected: bool
) -> BiPolynomial:
    K = _support_bound(v_out, v_in)
    total = BiPolynomial(field)
    for choice in product(*_expanded_statistics(ps)):
        coefficient = 1
        lengths: Tuple[int, ...] = ()
        nu = []
        for c, ls in choice:
            coefficient *= c
            lengths += ls
            nu.append(len(ls))
        groups = Decoration(tuple(nu)).labels() if connected else None
        total = total + _evaluate(ribbon_counts(lengths, K, groups), v_out, v_in, field).scale(coefficient)
    return total


def decorated_cumulants_poly(
    ps: Sequence[int], v_out: Specialization, v_in: Specialization, field: Optional[ScalarField] = None
) -> BiPolynomial:
    """
    The joint cumulant κ_N(O_{p₁}, ..., O_{p_N}) of linear statistics.

    Each O_p is expanded into products of transition moments by KMK_p; a product of T's attached to one
    statistic forms one group of a decoration, and the joint cumulant counts ribbon paths connected along it.

    Raises:
        DomainError: If ``ps`` is empty or contains a non-positive index.
    """
    if not ps:
        raise DomainError("At least one linear statistic is required.")
    return _decorated(ps, v_out, v_in, field or ScalarField(), connected=True)


def decorated_moments_poly(
    ps: Sequence[int], v_out: Specialization, v_in: Specialization, field: Optional[ScalarField] = None
) -> BiPolynomial:
    """
    The joint moment 𝔼[O_{p₁} ⋯ O_{p_N}] of linear statistics.

    Raises:
        DomainError: If ``ps`` is empty or contains a non-positive index.
    """
    if not ps:
        raise DomainError("At least one linear statistic is required.")
    return _decorated(ps, v_out, v_in, field or ScalarField(), connected=False)


def _check_lengths(lengths: Sequence[int]) -> Tuple[int, ...]:
    lengths = tuple(int(length) for length in lengths)
    if not lengths:
        raise DomainError("At least one length is required.")
    if any(length < 1 for length in lengths):
        raise DomainError(f"Lengths must be positive, got {lengths}.")
    return lengths
