"""
Integer partitions, anisotropy parameters and box contents.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Tuple, Union

from .exceptions import DomainError

logger = logging.getLogger(__name__)

Real = Union[float, Fraction]
Cell = Tuple[int, int]


@dataclass(frozen=True)
class Partition:
    """
    A weakly decreasing sequence of positive integers, stored without trailing zeros.

    Attributes:
        parts: The parts, largest first.
    """

    parts: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        for i, part in enumerate(parts):
            if part < 1:
                raise DomainError(f"Partition parts must be positive, got {parts}.")
            if i and parts[i - 1] < part:
                raise DomainError(f"Partition parts must be weakly decreasing, got {parts}.")

    @classmethod
    def from_parts(cls, parts: Iterable[int]) -> "Partition":
        """Builds a partition from parts in any order, dropping zeros."""
        return cls(tuple(sorted((int(p) for p in parts if p), reverse=True)))

    def __str__(self) -> str:
        if not self.parts:
            return "∅"
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, index: int) -> int:
        return self.parts[index]

    def __bool__(self) -> bool:
        return bool(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def row(self, i: int) -> int:
        """Length of row ``i`` (1-based), zero beyond the last row."""
        return self.parts[i - 1] if 1 <= i <= len(self.parts) else 0

    def multiplicity(self, k: int) -> int:
        """The number of parts equal to ``k``."""
        return self.parts.count(k)

    def multiplicities(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for part in self.parts:
            counts[part] = counts.get(part, 0) + 1
        return counts

    def transpose(self) -> "Partition":
        if not self.parts:
            return self
        return Partition(tuple(sum(1 for p in self.parts if p >= j) for j in range(1, self.parts[0] + 1)))

    def boxes(self) -> List[Cell]:
        """All cells (row, col), 1-based, row by row."""
        return [(i, j) for i, part in enumerate(self.parts, start=1) for j in range(1, part + 1)]

    def addable_cells(self) -> List[Cell]:
        """Cells that can be added to keep a partition, from the top row down."""
        cells = []
        for i in range(1, self.length + 2):
            if i == 1 or self.row(i - 1) > self.row(i):
                cells.append((i, self.row(i) + 1))
        return cells

    def removable_cells(self) -> List[Cell]:
        """Cells whose removal keeps a partition, from the top row down."""
        return [(i, self.row(i)) for i in range(1, self.length + 1) if self.row(i) > self.row(i + 1)]

    def add_part(self, k: int) -> "Partition":
        return Partition.from_parts(self.parts + (k,))

    def remove_part(self, k: int) -> "Partition":
        parts = list(self.parts)
        parts.remove(k)
        return Partition(tuple(parts))

    def dominates(self, other: "Partition") -> bool:
        """True when every partial sum of ``self`` is at least the matching partial sum of ``other``."""
        if self.size != other.size:
            return False
        mine = theirs = 0
        for i in range(max(self.length, other.length)):
            mine += self.row(i + 1)
            theirs += other.row(i + 1)
            if mine < theirs:
                return False
        return True

    def norm_squared(self, hbar: Real) -> Real:
        """The squared norm Π_k (ℏk)^{d_k} d_k! of the monomial ρ_μ."""
        result: Real = 1
        for k, count in self.multiplicities().items():
            result = result * (hbar * k) ** count * math.factorial(count)
        return result

    def dimension(self) -> int:
        """The number of standard Young tableaux, by the hook length formula."""
        conjugate = self.transpose()
        hooks = 1
        for i, j in self.boxes():
            hooks *= self.row(i) - j + conjugate.row(j) - i + 1
        return math.factorial(self.size) // hooks


EMPTY = Partition()


def partitions_of_size(d: int) -> List[Partition]:
    """
    Lists every partition of ``d`` once, in reverse lexicographic order.

    Args:
        d: The size.

    Returns:
        The partitions, starting from ``(d)`` and ending with ``(1, ..., 1)``.

    Raises:
        DomainError: If ``d`` is negative.
    """
    if d < 0:
        raise DomainError(f"Partition size must be nonnegative, got {d}.")
    return [Partition(parts) for parts in _partitions(d, d)]


@lru_cache(maxsize=None)
def _partitions(d: int, largest: int) -> Tuple[Tuple[int, ...], ...]:
    if d == 0:
        return ((),)
    result = []
    for first in range(min(d, largest), 0, -1):
        for rest in _partitions(d - first, first):
            result.append((first,) + rest)
    return tuple(result)


def partitions_up_to(d: int) -> List[Partition]:
    """All partitions of size at most ``d``, by size then reverse lexicographic order."""
    return [lam for size in range(d + 1) for lam in partitions_of_size(size)]


def partition_count(d: int) -> int:
    """The partition function p(d) from Euler's pentagonal number recurrence."""
    counts = [1]
    for n in range(1, d + 1):
        total, k = 0, 1
        while True:
            first = k * (3 * k - 1) // 2
            if first > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * counts[n - first]
            second = k * (3 * k + 1) // 2
            if second <= n:
                total += sign * counts[n - second]
            k += 1
        counts.append(total)
    return counts[d]


@dataclass(frozen=True)
class AnisotropyParams:
    """
    Deformation parameters with ε̄ = ε₁ + ε₂ and ℏ = −ε₁ε₂.

    Values are ``Fraction`` when they are known exactly and ``float`` otherwise. Rational ε̄ and ℏ stay exact even
    when ε₁ and ε₂ are irrational.

    Attributes:
        ebar: ε̄, real.
        hbar: ℏ, positive.
        eps1: ε₁, positive.
        eps2: ε₂, negative.
    """

    ebar: Real
    hbar: Real
    eps1: Real
    eps2: Real

    @property
    def alpha(self) -> Real:
        return self.eps1 / (-self.eps2)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for x in (self.ebar, self.hbar, self.eps1, self.eps2))

    @property
    def exact_ebar_hbar(self) -> bool:
        """Ribbon path polynomials and the Fock space operators depend on ε̄ and ℏ only."""
        return isinstance(self.ebar, Fraction) and isinstance(self.hbar, Fraction)

    def negated(self) -> "AnisotropyParams":
        """Parameters with ε̄ replaced by −ε̄ and the same ℏ."""
        return AnisotropyParams(ebar=-self.ebar, hbar=self.hbar, eps1=-self.eps2, eps2=-self.eps1)

    def as_floats(self) -> "AnisotropyParams":
        return AnisotropyParams(
            ebar=float(self.ebar), hbar=float(self.hbar), eps1=float(self.eps1), eps2=float(self.eps2)
        )


def params_from_ebar_hbar(ebar: Union[int, Real], hbar: Union[int, Real]) -> AnisotropyParams:
    """
    Solves x² − ε̄x − ℏ = 0 for ε₁ > 0 and sets ε₂ = ε̄ − ε₁.

    Rational inputs give exact parameters whenever ε̄² + 4ℏ is the square of a rational.

    Args:
        ebar: ε̄.
        hbar: ℏ, strictly positive.

    Returns:
        The anisotropy parameters.

    Raises:
        DomainError: If ``hbar`` is not positive.
    """
    if not hbar > 0:
        raise DomainError(f"hbar must be strictly positive, got {hbar}.")
    if isinstance(ebar, (int, Fraction)) and isinstance(hbar, (int, Fraction)):
        ebar, hbar = Fraction(ebar), Fraction(hbar)
        root = rational_sqrt(ebar**2 + 4 * hbar)
        if root is not None:
            eps1 = (ebar + root) / 2
            return AnisotropyParams(ebar=ebar, hbar=hbar, eps1=eps1, eps2=ebar - eps1)
        # ε̄ and ℏ stay rational, only ε₁ and ε₂ are irrational
        eps1_float = (float(ebar) + math.sqrt(float(ebar**2 + 4 * hbar))) / 2.0
        return AnisotropyParams(ebar=ebar, hbar=hbar, eps1=eps1_float, eps2=-float(hbar) / eps1_float)
    e, h = float(ebar), float(hbar)
    eps1 = (e + math.sqrt(e * e + 4.0 * h)) / 2.0
    return AnisotropyParams(ebar=e, hbar=h, eps1=eps1, eps2=-h / eps1)


def params_from_eps(eps1: Union[int, Real], eps2: Union[int, Real]) -> AnisotropyParams:
    """
    Builds parameters directly from ε₁ > 0 > ε₂; exact whenever both inputs are rational.

    Raises:
        DomainError: If the signs are wrong.
    """
    if not (eps1 > 0 and eps2 < 0):
        raise DomainError(f"Expected eps1 > 0 > eps2, got eps1={eps1}, eps2={eps2}.")
    if isinstance(eps1, (int, Fraction)) and isinstance(eps2, (int, Fraction)):
        e1, e2 = Fraction(eps1), Fraction(eps2)
        return AnisotropyParams(ebar=e1 + e2, hbar=-e1 * e2, eps1=e1, eps2=e2)
    e1, e2 = float(eps1), float(eps2)
    return AnisotropyParams(ebar=e1 + e2, hbar=-e1 * e2, eps1=e1, eps2=e2)


def params_from_alpha(alpha: Union[int, Real], hbar: Union[int, Real]) -> AnisotropyParams:
    """
    Builds parameters from the Jack parameter α = ε₁/(−ε₂) and ℏ.

    Raises:
        DomainError: If ``alpha`` or ``hbar`` is not positive.
    """
    if not (alpha > 0 and hbar > 0):
        raise DomainError(f"alpha and hbar must be positive, got alpha={alpha}, hbar={hbar}.")
    if isinstance(alpha, (int, Fraction)) and isinstance(hbar, (int, Fraction)):
        root = rational_sqrt(Fraction(hbar) / Fraction(alpha))
        if root is not None:
            return params_from_eps(Fraction(alpha) * root, -root)
    minus_eps2 = math.sqrt(float(hbar) / float(alpha))
    return params_from_eps(float(alpha) * minus_eps2, -minus_eps2)


def rational_sqrt(value: Fraction) -> Optional[Fraction]:
    """The rational square root of ``value`` when it exists."""
    if value < 0:
        return None
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def content(row: int, col: int, params: AnisotropyParams) -> Real:
    """The scaled content ε₂(row − 1) + ε₁(col − 1) of a box."""
    return params.eps2 * (row - 1) + params.eps1 * (col - 1)
