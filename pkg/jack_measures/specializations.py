"""
Finitely supported specializations k ↦ V_k of the generators ρ_k.
"""

import cmath
from dataclasses import dataclass
from typing import Any, Dict, Iterator, Mapping, Optional, Tuple

from .exceptions import DomainError
from .partitions import Partition
from .scalars import Scalar, ScalarField, to_fraction


@dataclass(frozen=True)
class DecayBound:
    """The bound |V_k| ≤ A·r^k."""

    A: float
    r: float

    def __post_init__(self) -> None:
        if not (self.A > 0 and 0 < self.r < 1):
            raise DomainError(f"Decay bound needs A > 0 and 0 < r < 1, got A={self.A}, r={self.r}.")


@dataclass(frozen=True)
class Specialization:
    """
    A finitely supported specialization.

    Coefficients are kept in the form they were given (integers, fractions, floats, complex numbers or
    ``(re, im)`` pairs) and converted by a :class:`~jack_measures.scalars.ScalarField` on use, so a single
    specialization serves both exact and numeric computations.

    Attributes:
        items: Sorted ``(k, V_k)`` pairs with nonzero ``V_k``.
        decay: Optional decay bound.
    """

    items: Tuple[Tuple[int, Any], ...] = ()
    decay: Optional[DecayBound] = None

    def __post_init__(self) -> None:
        cleaned = []
        for k, value in sorted(self.items, key=lambda item: item[0]):
            if int(k) < 1:
                raise DomainError(f"Specialization indices must be positive, got {k}.")
            if isinstance(value, list):
                value = tuple(value)
            if _is_zero(value):
                continue
            cleaned.append((int(k), value))
        keys = [k for k, _ in cleaned]
        if len(set(keys)) != len(keys):
            raise DomainError(f"Duplicate specialization indices in {keys}.")
        object.__setattr__(self, "items", tuple(cleaned))
        if self.decay is not None:
            for k, value in cleaned:
                if abs(_as_complex(value)) > self.decay.A * self.decay.r**k * (1 + 1e-12):
                    raise DomainError(f"|V_{k}| exceeds the declared decay bound {self.decay}.")

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, Any], decay: Optional[DecayBound] = None) -> "Specialization":
        return cls(tuple((int(k), v) for k, v in coeffs.items()), decay)

    @classmethod
    def plancherel(cls) -> "Specialization":
        """The Plancherel specialization V_k = δ(k − 1)."""
        return cls(((1, 1),))

    def __iter__(self) -> Iterator[Tuple[int, Any]]:
        return iter(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __str__(self) -> str:
        if not self.items:
            return "{}"
        return "{" + ", ".join(f"V{k}={v}" for k, v in self.items) + "}"

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(k for k, _ in self.items)

    @property
    def max_index(self) -> int:
        """The support bound K, zero for the empty specialization."""
        return self.items[-1][0] if self.items else 0

    def raw(self, k: int) -> Any:
        for index, value in self.items:
            if index == k:
                return value
        return 0

    def value(self, k: int, field: ScalarField) -> Scalar:
        """V_k in the given field, zero outside the support."""
        return field(self.raw(k))

    def values(self, field: ScalarField, K: Optional[int] = None) -> Dict[int, Scalar]:
        """V_k for k = 1..K in the given field."""
        K = self.max_index if K is None else K
        return {k: field(self.raw(k)) for k in range(1, K + 1)}

    def monomial(self, mu: Partition, field: ScalarField) -> Scalar:
        """V_μ = Π V_{μ_i}."""
        result = field.one
        for part in mu:
            result = result * field(self.raw(part))
        return result

    def negated(self) -> "Specialization":
        return Specialization(tuple((k, _negate(v)) for k, v in self.items), self.decay)

    def with_value(self, k: int, value: Any) -> "Specialization":
        """A copy with V_k replaced; a zero value removes k from the support."""
        items = [(index, v) for index, v in self.items if index != k]
        items.append((k, value))
        return Specialization(tuple(items))

    def mass(self) -> float:
        """Σ_k |V_k|²/k, which is ℏ log⟨Υ_v, Υ_v⟩."""
        return sum(abs(_as_complex(v)) ** 2 / k for k, v in self.items)

    def symbol(self, x: float) -> float:
        """The real symbol v(x) = Σ (V_k e^{−ikx} + conj(V_k) e^{ikx})."""
        total = 0j
        for k, value in self.items:
            v = _as_complex(value)
            total += v * cmath.exp(-1j * k * x) + v.conjugate() * cmath.exp(1j * k * x)
        return total.real

    def sup_norm_bound(self) -> float:
        """The bound 2Σ|V_k| on the symbol."""
        return 2.0 * sum(abs(_as_complex(v)) for _, v in self.items)


def _as_complex(value: Any) -> complex:
    return ScalarField(exact=False)(value)


def _is_zero(value: Any) -> bool:
    if isinstance(value, tuple):
        return all(_is_zero(part) for part in value)
    if isinstance(value, str):
        return to_fraction(value) == 0
    return value == 0


def _negate(value: Any) -> Any:
    if isinstance(value, tuple):
        return tuple(_negate(part) for part in value)
    if isinstance(value, str):
        return -to_fraction(value)
    return -value
