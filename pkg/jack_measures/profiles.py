"""
Anisotropic partition profiles, transition-measure moments and linear statistics.

A profile is stored through its interlacing local minima and maxima. Its transition measure has Stieltjes
transform Π(u − max_j) / Π(u − min_i), and the moments T_ℓ↑ are read off from power sums of the extrema
with Newton's identities. The content-product route expands the same transform box by box and serves as an
independent check.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, List, Sequence, Tuple

from .exceptions import DomainError, InconsistencyError
from .partitions import AnisotropyParams, Partition, content

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class MomentSequence:
    """
    Moments indexed from zero; ``values[0]`` is 1 for transition moments and linear statistics alike.

    Attributes:
        values: The moments.
    """

    values: Tuple[Any, ...]

    def __getitem__(self, index: int) -> Any:
        return self.values[index]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Any]:
        return iter(self.values)

    @property
    def order(self) -> int:
        return len(self.values) - 1

    def as_floats(self) -> List[float]:
        return [float(v) for v in self.values]


@dataclass(frozen=True)
class InterlacingProfile:
    """
    A piecewise-linear profile with slopes ±1 described by its local extrema.

    Attributes:
        minima: Local minima in ascending order.
        maxima: Local maxima in ascending order.
    """

    minima: Tuple[Any, ...]
    maxima: Tuple[Any, ...]

    def __post_init__(self) -> None:
        if len(self.minima) != len(self.maxima) + 1:
            raise DomainError(f"Expected one more minimum than maxima, got {len(self.minima)} and {len(self.maxima)}.")
        merged = [self.minima[0]]
        for low, high in zip(self.minima[1:], self.maxima):
            merged.extend([high, low])
        if any(not a < b for a, b in zip(merged, merged[1:])):
            raise DomainError(f"Extrema do not interlace: minima={self.minima}, maxima={self.maxima}.")

    def evaluate(self, c: float) -> float:
        """f(c) = Σ|c − min_i| − Σ|c − max_j|."""
        return float(sum(abs(c - x) for x in self.minima) - sum(abs(c - y) for y in self.maxima))

    def center(self) -> Any:
        return sum(self.minima) - sum(self.maxima)


def profile_of(lam: Partition, params: AnisotropyParams) -> InterlacingProfile:
    """
    The anisotropic profile of a partition.

    Minima sit at the contents of the addable cells, maxima at the contents of the removable cells shifted by
    ε₁ + ε₂.

    Args:
        lam: The partition.
        params: The anisotropy parameters.

    Returns:
        The interlacing extrema in ascending order.
    """
    minima = sorted(content(i, j, params) for i, j in lam.addable_cells())
    maxima = sorted(content(i, j, params) + params.ebar for i, j in lam.removable_cells())
    return InterlacingProfile(tuple(minima), tuple(maxima))


def profile_area(lam: Partition, params: AnisotropyParams, tolerance: float = DEFAULT_TOLERANCE) -> Any:
    """
    The area 2ℏ|λ| between the profile and |c|, cross-checked against Σ min² − Σ max².

    Raises:
        InconsistencyError: If the two computations disagree.
    """
    area = 2 * params.hbar * lam.size
    profile = profile_of(lam, params)
    from_extrema = sum(x * x for x in profile.minima) - sum(y * y for y in profile.maxima)
    if not _close(area, from_extrema, tolerance):
        raise InconsistencyError("profile area", area, from_extrema, tolerance)
    return area


def power_sums(profile: InterlacingProfile, P: int) -> List[Any]:
    """Σ min_i^p − Σ max_j^p for p = 0..P."""
    return [sum(x**p for x in profile.minima) - sum(y**p for y in profile.maxima) for p in range(P + 1)]


def linear_statistics(profile: InterlacingProfile, P: int) -> MomentSequence:
    """
    The linear statistics O_p = ∫ c^p ½f″(c) dc for p = 0..P; O₀ = 1 and O₁ = 0 for partition profiles.
    """
    return MomentSequence(tuple(power_sums(profile, P)))


def kmk_T_from_O(o: Sequence[Any]) -> MomentSequence:
    """
    Transition moments from linear statistics through u·T↑(u) = exp(Σ_p O_p u^{−p}/p).

    Args:
        o: O₀..O_L; ``o[0]`` is ignored.

    Returns:
        T₀..T_L.
    """
    values = list(o.values if isinstance(o, MomentSequence) else o)
    t: List[Any] = [1]
    for n in range(1, len(values)):
        t.append(_divide(sum(values[p] * t[n - p] for p in range(1, n + 1)), n))
    return MomentSequence(tuple(t))


def kmk_O_from_T(t: Sequence[Any]) -> MomentSequence:
    """
    Linear statistics from transition moments; the inverse of :func:`kmk_T_from_O`.

    Args:
        t: T₀..T_L with ``t[0] == 1``.

    Returns:
        O₀..O_L with O₀ = 1.

    Raises:
        DomainError: If ``t[0]`` is not 1.
    """
    values = list(t.values if isinstance(t, MomentSequence) else t)
    if not values or values[0] != 1:
        raise DomainError(f"Transition moments must start with T_0 = 1, got {values[:1]}.")
    o: List[Any] = [values[0]]
    for n in range(1, len(values)):
        o.append(n * values[n] - sum(o[p] * values[n - p] for p in range(1, n)))
    return MomentSequence(tuple(o))


def kmk_polynomial(p: int) -> List[Tuple[int, Tuple[int, ...]]]:
    """
    The polynomial KMK_p as integer-coefficient monomials in T₁..T_p.

    Returns:
        Pairs ``(coefficient, lengths)`` where ``lengths`` lists the T indices of the monomial, ascending.
    """
    # polynomials in T are dicts keyed by sorted index tuples
    t_polys: List[dict] = [{(): Fraction(1)}] + [{(n,): Fraction(1)} for n in range(1, p + 1)]
    o_polys: List[dict] = [{(): Fraction(1)}]
    for n in range(1, p + 1):
        poly: dict = {}
        _accumulate(poly, t_polys[n], n)
        for q in range(1, n):
            _accumulate(poly, _multiply(o_polys[q], t_polys[n - q]), -1)
        o_polys.append(poly)
    return sorted((int(c), key) for key, c in o_polys[p].items() if c)


def transition_moments(profile: InterlacingProfile, L: int) -> MomentSequence:
    """
    Coefficients of u^{−ℓ−1}, ℓ = 0..L, of Π(u − max_j)/Π(u − min_i) at u = ∞.
    """
    return kmk_T_from_O(power_sums(profile, L))


def transition_moments_content_product(lam: Partition, params: AnisotropyParams, L: int) -> MomentSequence:
    """
    Transition moments from the box product
    u·T↑(u) = Π_□ (u − c)(u − c − ε₁ − ε₂) / ((u − c − ε₂)(u − c − ε₁)),
    expanded as a series in 1/u.
    """
    series: List[Any] = [1] + [0] * L
    for i, j in lam.boxes():
        c = content(i, j, params)
        series = _series_multiply(series, [1, -c], L)
        series = _series_multiply(series, [1, -(c + params.ebar)], L)
        series = _series_multiply(series, _geometric(c + params.eps2, L), L)
        series = _series_multiply(series, _geometric(c + params.eps1, L), L)
    return MomentSequence(tuple(series))


def transition_moments_of(lam: Partition, params: AnisotropyParams, L: int) -> MomentSequence:
    return transition_moments(profile_of(lam, params), L)


def assert_routes_agree(lam: Partition, params: AnisotropyParams, L: int, tolerance: float = DEFAULT_TOLERANCE) -> None:
    """
    Raises:
        InconsistencyError: If the profile route and the content-product route disagree.
    """
    first = transition_moments_of(lam, params, L)
    second = transition_moments_content_product(lam, params, L)
    for ell, (a, b) in enumerate(zip(first, second)):
        if not _close(a, b, tolerance):
            raise InconsistencyError(f"T_{ell} of {lam}", a, b, tolerance)


def _geometric(a: Any, L: int) -> List[Any]:
    terms: List[Any] = [1]
    for _ in range(L):
        terms.append(terms[-1] * a)
    return terms


def _series_multiply(a: Sequence[Any], b: Sequence[Any], L: int) -> List[Any]:
    result: List[Any] = [0] * (L + 1)
    for i, x in enumerate(a[: L + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b[: L + 1 - i]):
            result[i + j] = result[i + j] + x * y
    return result


def _accumulate(target: dict, source: dict, factor: int) -> None:
    for key, value in source.items():
        target[key] = target.get(key, 0) + factor * value
        if not target[key]:
            del target[key]


def _multiply(a: dict, b: dict) -> dict:
    result: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            key = tuple(sorted(ka + kb))
            result[key] = result.get(key, 0) + va * vb
    return {k: v for k, v in result.items() if v}


def _divide(value: Any, n: int) -> Any:
    if isinstance(value, (int, Fraction)):
        return Fraction(value, n)
    return value / n


def _close(a: Any, b: Any, tolerance: float) -> bool:
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return a == b
    return abs(a - b) <= tolerance * max(1.0, abs(a), abs(b))
