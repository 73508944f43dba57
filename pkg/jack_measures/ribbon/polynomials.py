from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple

from ..scalars import Scalar, ScalarField
from ..types import BiPolynomialTerm

Key = Tuple[int, int]


class BiPolynomial:
    """
    A sparse polynomial in ℏ and ε̄, stored as ``{(q, m): coefficient}`` for the monomial ℏ^q ε̄^m.

    Zero coefficients are never stored.
    """

    def __init__(self, field: ScalarField, terms: Optional[Mapping[Key, Any]] = None) -> None:
        """
        Args:
            field: The scalar field of the coefficients.
            terms: Initial terms; values are converted into ``field``.
        """
        self.field = field
        self._terms: Dict[Key, Scalar] = {}
        for key, value in (terms or {}).items():
            self.add_term(key, field(value))

    def __repr__(self) -> str:
        return f"BiPolynomial({self.to_dict()})"

    def __iter__(self) -> Iterator[Tuple[Key, Scalar]]:
        return iter(sorted(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __getitem__(self, key: Key) -> Scalar:
        return self._terms.get(key, self.field.zero)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiPolynomial):
            return NotImplemented
        keys = set(self._terms) | set(other._terms)
        return all(self.field.is_zero(self[key] - other.field(other[key])) for key in keys)

    def keys(self) -> List[Key]:
        return sorted(self._terms)

    def add_term(self, key: Key, value: Scalar) -> None:
        total = self._terms.get(key, self.field.zero) + value
        if self.field.is_zero(total):
            self._terms.pop(key, None)
        else:
            self._terms[key] = total

    def __add__(self, other: "BiPolynomial") -> "BiPolynomial":
        result = self.copy()
        for key, value in other._terms.items():
            result.add_term(key, value)
        return result

    def __sub__(self, other: "BiPolynomial") -> "BiPolynomial":
        return self + other.scale(-1)

    def __mul__(self, other: "BiPolynomial") -> "BiPolynomial":
        result = BiPolynomial(self.field)
        for (q1, m1), a in self._terms.items():
            for (q2, m2), b in other._terms.items():
                result.add_term((q1 + q2, m1 + m2), a * b)
        return result

    def scale(self, factor: Any) -> "BiPolynomial":
        factor = self.field(factor)
        result = BiPolynomial(self.field)
        for key, value in self._terms.items():
            result.add_term(key, value * factor)
        return result

    def copy(self) -> "BiPolynomial":
        result = BiPolynomial(self.field)
        result._terms = dict(self._terms)
        return result

    def restrict(self, q: Optional[int] = None, m: Optional[int] = None) -> "BiPolynomial":
        """The terms with the given ℏ-exponent and/or ε̄-exponent."""
        result = BiPolynomial(self.field)
        for (kq, km), value in self._terms.items():
            if (q is None or kq == q) and (m is None or km == m):
                result._terms[(kq, km)] = value
        return result

    def min_hbar_exponent(self) -> Optional[int]:
        return min((q for q, _ in self._terms), default=None)

    def evaluate(self, hbar: Any, ebar: Any) -> Scalar:
        """Substitutes numbers for ℏ and ε̄."""
        h, e = self.field(hbar), self.field(ebar)
        total = self.field.zero
        for (q, m), value in self._terms.items():
            total = total + value * self.field.power(h, q) * self.field.power(e, m)
        return total

    def ebar_polynomial(self, hbar_exponent: int) -> List[Scalar]:
        """Coefficients of ε̄^0, ε̄^1, ... among the terms with the given ℏ-exponent."""
        terms = self.restrict(q=hbar_exponent)
        degree = max((m for _, m in terms._terms), default=-1)
        return [terms[(hbar_exponent, m)] for m in range(degree + 1)]

    def to_dict(self) -> Dict[Key, Any]:
        return {key: self.field.to_json(value) for key, value in sorted(self._terms.items())}

    def to_json(self) -> List[BiPolynomialTerm]:
        """The list-of-terms JSON shape used by the command line."""
        rows: List[BiPolynomialTerm] = []
        for (q, m), value in sorted(self._terms.items()):
            re, im = self.field.to_json(value)
            rows.append({"q": q, "m": m, "re": re, "im": im})
        return rows
