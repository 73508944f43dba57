"""
Sparse operator algebra on the polynomial Fock space.

Vectors are sparse maps from partitions μ to the coefficient of the monomial ρ_μ = Π ρ_{μ_i}.
The creation operator ρ̂_k multiplies by ρ_k and the annihilation operator ρ̂_{−k} is ℏk∂/∂ρ_k; the
monomials are orthogonal with ||ρ_μ||² = Π_k (ℏk)^{d_k} d_k!.

The Nazarov-Sklyanin operators T̂_ℓ↑ are the top-left entries of the ℓth power of the quantum Lax matrix
whose (j, j′) entry is ρ̂_{j′−j} + ε̄jδ(j − j′); they are applied to a state in the auxiliary space
spanned by ψ_j.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DomainError, TruncationError
from .partitions import EMPTY, AnisotropyParams, Partition, partitions_of_size
from .scalars import Scalar, ScalarField
from .specializations import Specialization

logger = logging.getLogger(__name__)


class FockVector:
    """A sparse vector Σ x_μ ρ_μ with no stored zero coefficients."""

    def __init__(self, field: ScalarField, entries: Optional[Mapping[Partition, Any]] = None) -> None:
        """
        Args:
            field: The scalar field of the coefficients.
            entries: Initial coefficients, converted into ``field``.
        """
        self.field = field
        self.entries: Dict[Partition, Scalar] = {}
        for mu, value in (entries or {}).items():
            self.add(mu, field(value))

    @classmethod
    def vacuum(cls, field: ScalarField) -> "FockVector":
        return cls(field, {EMPTY: 1})

    @classmethod
    def monomial(cls, mu: Partition, field: ScalarField) -> "FockVector":
        return cls(field, {mu: 1})

    def __repr__(self) -> str:
        terms = ", ".join(f"{mu}: {value}" for mu, value in self.items())
        return f"FockVector({{{terms}}})"

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __getitem__(self, mu: Partition) -> Scalar:
        return self.entries.get(mu, self.field.zero)

    def items(self) -> Iterator[Tuple[Partition, Scalar]]:
        return iter(sorted(self.entries.items(), key=lambda item: (item[0].size, item[0].parts)))

    def add(self, mu: Partition, value: Scalar) -> None:
        total = self.entries.get(mu, self.field.zero) + value
        if self.field.is_zero(total):
            self.entries.pop(mu, None)
        else:
            self.entries[mu] = total

    def __add__(self, other: "FockVector") -> "FockVector":
        result = self.copy()
        for mu, value in other.entries.items():
            result.add(mu, value)
        return result

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other.scale(-1)

    def scale(self, factor: Any) -> "FockVector":
        factor = self.field(factor)
        result = FockVector(self.field)
        for mu, value in self.entries.items():
            result.add(mu, value * factor)
        return result

    def copy(self) -> "FockVector":
        result = FockVector(self.field)
        result.entries = dict(self.entries)
        return result

    def max_degree(self) -> int:
        return max((mu.size for mu in self.entries), default=0)

    def degree_part(self, d: int) -> "FockVector":
        """The component in the degree-d subspace."""
        result = FockVector(self.field)
        result.entries = {mu: value for mu, value in self.entries.items() if mu.size == d}
        return result

    def truncate(self, D: int) -> "FockVector":
        result = FockVector(self.field)
        result.entries = {mu: value for mu, value in self.entries.items() if mu.size <= D}
        return result

    def evaluate(self, v: Specialization) -> Scalar:
        """Substitutes ρ_k = V_k."""
        total = self.field.zero
        for mu, value in self.entries.items():
            total = total + value * v.monomial(mu, self.field)
        return total


class AuxFockVector:
    """A state Σ_j x_j ⊗ ψ_j with finitely many nonzero layers."""

    def __init__(self, field: ScalarField, layers: Optional[Mapping[int, FockVector]] = None) -> None:
        self.field = field
        self.layers: Dict[int, FockVector] = {j: x for j, x in (layers or {}).items() if x}

    def layer(self, j: int) -> FockVector:
        return self.layers.get(j, FockVector(self.field))

    def add(self, j: int, x: FockVector) -> None:
        total = self.layer(j) + x
        if total:
            self.layers[j] = total
        else:
            self.layers.pop(j, None)


def norm_squared(mu: Partition, hbar: Any, field: ScalarField) -> Scalar:
    """||ρ_μ||² = Π_k (ℏk)^{d_k} d_k!."""
    h = field(hbar)
    result = field.one
    for k, count in mu.multiplicities().items():
        result = result * field.power(h * field(k), count) * field(math.factorial(count))
    return result


def inner_product(a: FockVector, b: FockVector, hbar: Any) -> Scalar:
    """
    The ℏ-inner product ⟨a, b⟩ = Σ_μ conj(a_μ) b_μ ||ρ_μ||², antilinear in the first argument.
    """
    field = a.field
    total = field.zero
    for mu, value in a.entries.items():
        other = b.entries.get(mu)
        if other is not None:
            total = total + field.conj(value) * other * norm_squared(mu, hbar, field)
    return total


def apply_create(k: int, x: FockVector) -> FockVector:
    """ρ̂_k x: multiplication by ρ_k."""
    if k < 1:
        raise DomainError(f"Creation operators have positive index, got {k}.")
    result = FockVector(x.field)
    for mu, value in x.entries.items():
        result.add(mu.add_part(k), value)
    return result


def apply_annihilate(k: int, x: FockVector, hbar: Any, shift: Optional[Mapping[int, Scalar]] = None) -> FockVector:
    """
    ρ̂_{−k} x = ℏk ∂x/∂ρ_k, which sends ρ_μ to ℏk·N_k(μ)·ρ_{μ∖k}.

    Args:
        k: The index, at least 1.
        x: The vector.
        hbar: ℏ.
        shift: Optional constants s_k; when given the operator ρ̂_{−k} + s_k is applied instead. With
            s_k = conj(V_k) this is the annihilation operator acting on the prefactor p of a product p·Υ_v.

    Returns:
        The image vector.
    """
    if k < 1:
        raise DomainError(f"Annihilation operators have positive index, got {k}.")
    field = x.field
    factor = field(hbar) * field(k)
    result = FockVector(field)
    for mu, value in x.entries.items():
        count = mu.multiplicity(k)
        if count:
            result.add(mu.remove_part(k), value * factor * field(count))
    if shift is not None and k in shift:
        s = shift[k]
        for mu, value in x.entries.items():
            result.add(mu, value * s)
    return result


def _apply_rho(index: int, x: FockVector, hbar: Any, shift: Optional[Mapping[int, Scalar]]) -> FockVector:
    if index > 0:
        return apply_create(index, x)
    if index < 0:
        return apply_annihilate(-index, x, hbar, shift)
    return FockVector(x.field)


def apply_lax(
    state: AuxFockVector,
    params: AnisotropyParams,
    Jmax: int,
    shift: Optional[Mapping[int, Scalar]] = None,
) -> AuxFockVector:
    """
    One application of the quantum Lax matrix, keeping auxiliary layers 0..Jmax.

    The new layer j collects ρ̂_{j′−j} x_{j′} from every layer j′ plus ε̄·j·x_j.
    """
    field = state.field
    ebar = field(params.ebar)
    result = AuxFockVector(field)
    for source, x in state.layers.items():
        if source and not field.is_zero(ebar):
            result.add(source, x.scale(ebar * field(source)))
        for target in range(Jmax + 1):
            if target == source:
                continue
            image = _apply_rho(source - target, x, params.hbar, shift)
            if image:
                result.add(target, image)
    return result


def apply_T(
    ell: int,
    x: FockVector,
    params: AnisotropyParams,
    Jmax: Optional[int] = None,
    shift: Optional[Mapping[int, Scalar]] = None,
) -> FockVector:
    """
    T̂_ℓ↑ x, the layer-0 component of L̂^ℓ (x ⊗ ψ₀).

    Without ``shift`` the auxiliary index plus the polynomial degree is conserved along the way, so layers above
    the top degree of ``x`` never return to layer 0 and ``Jmax`` defaults to that degree.

    Args:
        ell: ℓ ≥ 0.
        x: The vector.
        params: The anisotropy parameters.
        Jmax: The largest auxiliary layer kept.
        shift: Constants added to the annihilation operators, see :func:`apply_annihilate`.

    Returns:
        The image vector.

    Raises:
        TruncationError: If ``Jmax`` is below the exact reach in exact mode.
    """
    if ell < 0:
        raise DomainError(f"T_ell needs ell >= 0, got {ell}.")
    if ell == 0:
        return x.copy()
    required = x.max_degree()
    if shift is not None:
        required += max(shift, default=0) * ell
    if Jmax is None:
        Jmax = required
    elif Jmax < required:
        if x.field.exact:
            raise TruncationError("Jmax", Jmax, required)
        logger.warning("apply_T: Jmax=%d below the exact reach %d; result is truncated", Jmax, required)
    state = AuxFockVector(x.field, {0: x})
    for _ in range(ell):
        state = apply_lax(state, params, Jmax, shift)
    return state.layer(0)


def apply_T_product(
    lengths: Sequence[int],
    x: FockVector,
    params: AnisotropyParams,
    shift: Optional[Mapping[int, Scalar]] = None,
) -> FockVector:
    """T̂_{ℓ₁}↑ ⋯ T̂_{ℓ_n}↑ x, applying the rightmost factor first."""
    for ell in reversed(list(lengths)):
        x = apply_T(ell, x, params, shift=shift)
    return x


def apply_cubic_hamiltonian(x: FockVector, params: AnisotropyParams) -> FockVector:
    """
    Ĥ x with the cubic Hamiltonian
    Ĥ = Σ_{i,j≥1} (ρ̂_{i+j}ρ̂_{−i}ρ̂_{−j} + ρ̂_iρ̂_jρ̂_{−i−j}) + ε̄ Σ_j j ρ̂_jρ̂_{−j}.
    """
    field = x.field
    hbar = params.hbar
    top = x.max_degree()
    result = FockVector(field)
    for i in range(1, top + 1):
        first = apply_annihilate(i, x, hbar)
        if not first:
            continue
        for j in range(1, top + 1):
            second = apply_annihilate(j, first, hbar)
            if second:
                result = result + apply_create(i + j, second)
    for total in range(2, top + 1):
        lowered = apply_annihilate(total, x, hbar)
        if not lowered:
            continue
        for i in range(1, total):
            result = result + apply_create(i, apply_create(total - i, lowered))
    ebar = field(params.ebar)
    if not field.is_zero(ebar):
        for j in range(1, top + 1):
            lowered = apply_annihilate(j, x, hbar)
            if lowered:
                result = result + apply_create(j, lowered).scale(ebar * field(j))
    return result


def coherent_state(v: Specialization, hbar: Any, D: int, field: Optional[ScalarField] = None) -> FockVector:
    """
    The coherent state Υ_v = exp((1/ℏ) Σ_k conj(V_k) ρ_k / k), truncated to degree at most D.

    Args:
        v: The specialization.
        hbar: ℏ.
        D: The degree cutoff, at least 0.
        field: The scalar field, numeric by default.

    Returns:
        Υ_v up to degree D.
    """
    if D < 0:
        raise DomainError(f"Degree cutoff must be nonnegative, got {D}.")
    field = field or ScalarField()
    h = field(hbar)
    rates = {k: field.conj(v.value(k, field)) / (h * field(k)) for k in v.support}
    result = FockVector(field)
    for d in range(D + 1):
        for mu in partitions_of_size(d):
            if any(part not in rates for part in mu):
                continue
            value = field.one
            for k, count in mu.multiplicities().items():
                value = value * field.power(rates[k], count) / field(math.factorial(count))
            result.add(mu, value)
    return result


def truncated_kernel(v: Specialization, hbar: Any, d: int, field: Optional[ScalarField] = None) -> FockVector:
    """The degree-d part Υ_v^(d) = Σ_{|μ|=d} conj(V_μ) ρ_μ / ||ρ_μ||² of the coherent state."""
    field = field or ScalarField()
    return coherent_state(v, hbar, d, field).degree_part(d)


def coherent_overlap(
    v_in: Specialization, v_out: Specialization, hbar: Any, field: Optional[ScalarField] = None
) -> Scalar:
    """⟨Υ_in, Υ_out⟩ = exp((1/ℏ) Σ_k conj(V^out_k) V^in_k / k), numeric."""
    field = field or ScalarField()
    exponent = sum(
        (field.to_complex(field.conj(v_out.value(k, field)) * v_in.value(k, field)) / k for k in v_out.support), 0j
    )
    return complex(np.exp(exponent / float(hbar)))


@dataclass(frozen=True)
class OperatorMoment:
    """
    A joint moment computed in the Fock space.

    Attributes:
        value: The normalized matrix element.
        method: "displaced" or "truncated".
        cutoff: The degree cutoff D for the truncated method, None otherwise.
        tail: Relative overlap mass missing below the cutoff; zero for the displaced method.
    """

    value: Scalar
    method: str
    cutoff: Optional[int]
    tail: float


def joint_moments_operator(
    lengths: Sequence[int],
    v_out: Specialization,
    v_in: Specialization,
    params: AnisotropyParams,
    D: Optional[int] = None,
    method: str = "displaced",
    field: Optional[ScalarField] = None,
) -> OperatorMoment:
    """
    ⟨Υ_in, T̂_{ℓ₁}↑ ⋯ T̂_{ℓ_n}↑ Υ_out⟩ / ⟨Υ_in, Υ_out⟩.

    The displaced method writes the state as p·Υ_out with p = 1 initially; annihilation operators act on the
    prefactor as ℏk∂_k + conj(V^out_k) and the reproducing property evaluates the final p at V^in. It is exact
    and needs no degree cutoff. The truncated method builds both coherent states up to degree D and reports the
    relative overlap mass missing below D.

    Args:
        lengths: ℓ₁, ..., ℓ_n.
        v_out: The outgoing specialization.
        v_in: The incoming specialization.
        params: The anisotropy parameters.
        D: Degree cutoff for the truncated method.
        method: "displaced" or "truncated".
        field: The scalar field, numeric by default.

    Returns:
        The moment with its metadata.

    Raises:
        DomainError: If ``lengths`` is empty, the method is unknown or D is missing for the truncated method.
    """
    if not lengths:
        raise DomainError("At least one length is required.")
    field = field or ScalarField()
    if method == "displaced":
        shift = {k: field.conj(v_out.value(k, field)) for k in v_out.support}
        prefactor = apply_T_product(lengths, FockVector.vacuum(field), params, shift=shift)
        return OperatorMoment(value=prefactor.evaluate(v_in), method=method, cutoff=None, tail=0.0)
    if method != "truncated":
        raise DomainError(f"Unknown method '{method}'.")
    if D is None:
        raise DomainError("The truncated method needs a degree cutoff D.")
    upsilon_out = coherent_state(v_out, params.hbar, D, field)
    upsilon_in = coherent_state(v_in, params.hbar, D, field)
    image = apply_T_product(lengths, upsilon_out, params)
    numerator = inner_product(upsilon_in, image, params.hbar)
    overlap = inner_product(upsilon_in, upsilon_out, params.hbar)
    full = coherent_overlap(v_in, v_out, params.hbar, field)
    tail = abs(1.0 - field.to_complex(overlap) / full) if full else 0.0
    logger.debug("joint_moments_operator truncated at D=%d, relative tail %.3e", D, tail)
    return OperatorMoment(value=numerator / overlap, method=method, cutoff=D, tail=tail)


def operator_matrix(
    apply: Any, d: int, hbar: Any, field: Optional[ScalarField] = None
) -> Tuple[List[Partition], np.ndarray]:
    """
    The matrix of an operator on the degree-d block in the orthonormal basis ρ_μ/||ρ_μ||.

    Args:
        apply: A callable taking and returning a :class:`FockVector`.
        d: The degree.
        hbar: ℏ.
        field: The scalar field, numeric by default.

    Returns:
        The basis (reverse lexicographic) and the matrix with entries ⟨e_ν, A e_μ⟩.
    """
    field = field or ScalarField()
    basis = partitions_of_size(d)
    index = {mu: n for n, mu in enumerate(basis)}
    norms = [math.sqrt(abs(field.to_complex(norm_squared(mu, hbar, field)))) for mu in basis]
    matrix = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, mu in enumerate(basis):
        image = apply(FockVector.monomial(mu, field))
        for nu, value in image.entries.items():
            if nu.size != d:
                raise DomainError(f"Operator does not preserve degree {d}: {mu} -> {nu}.")
            row = index[nu]
            matrix[row, col] = field.to_complex(value) * norms[row] / norms[col]
    return basis, matrix
