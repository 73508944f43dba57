"""
Jack polynomials as joint eigenvectors of the Nazarov-Sklyanin operators, Jack measure probabilities and
fixed-size (dePoissonized) expectations.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh

from .exceptions import DegenerateSpectrumError, DomainError, InconsistencyError
from .fock import FockVector, apply_T, apply_T_product, inner_product, operator_matrix, truncated_kernel
from .partitions import AnisotropyParams, Partition, partitions_of_size, partitions_up_to
from .profiles import DEFAULT_TOLERANCE, transition_moments_of
from .ribbon.sums import moments_poly
from .scalars import Scalar, ScalarField
from .specializations import Specialization
from .types import JackVectorDict

logger = logging.getLogger(__name__)

MAX_JACK_DEGREE = 10
CLUSTER_TOLERANCE = 1e-8


@dataclass
class JackBasis:
    """
    The normalized Jack polynomials of one degree.

    Attributes:
        degree: d.
        params: The (floating point) anisotropy parameters.
        partitions: The labels λ, |λ| = d, in reverse lexicographic order.
        coefficients: P_λ^norm in the monomial basis ρ_μ; unit ℏ-norm.
        norms: The ℏ-norm of P_λ scaled so that its leading monomial symmetric function has coefficient 1.
        eigenvalues: T_ℓ↑|_λ for ℓ = 0..L.
    """

    degree: int
    params: AnisotropyParams
    partitions: List[Partition]
    coefficients: Dict[Partition, FockVector] = field(default_factory=dict)
    norms: Dict[Partition, float] = field(default_factory=dict)
    eigenvalues: Dict[Partition, List[float]] = field(default_factory=dict)

    def evaluate(self, lam: Partition, v: Specialization) -> complex:
        """P_λ^norm at ρ_k = V_k."""
        return complex(self.coefficients[lam].evaluate(v))

    def check_against_profiles(self, tolerance: float = 1e-9) -> None:
        """
        Compares the eigenvalue table with transition moments of the profiles.

        Raises:
            InconsistencyError: If an eigenvalue differs from the profile moment beyond ``tolerance``, relative to
                the largest moment of the same order.
        """
        L = len(next(iter(self.eigenvalues.values()))) - 1
        for lam in self.partitions:
            moments = transition_moments_of(lam, self.params, L).as_floats()
            for ell in range(L + 1):
                scale = max(1.0, abs(moments[ell]))
                if abs(self.eigenvalues[lam][ell] - moments[ell]) > tolerance * scale:
                    raise InconsistencyError(f"T_{ell} at {lam}", self.eigenvalues[lam][ell], moments[ell], tolerance)

    def to_json(self) -> List[JackVectorDict]:
        rows: List[JackVectorDict] = []
        for lam in self.partitions:
            rows.append(
                {
                    "partition": list(lam.parts),
                    "norm": self.norms[lam],
                    "eigenvalues": list(self.eigenvalues[lam]),
                    "coefficients": {
                        " ".join(str(p) for p in mu.parts): [value.real, value.imag]
                        for mu, value in self.coefficients[lam].items()
                    },
                }
            )
        return rows


@lru_cache(maxsize=None)
def _power_to_monomial(mu: Tuple[int, ...], nu: Tuple[int, ...]) -> int:
    """The coefficient of m_ν in p_μ: the number of ways to distribute the parts of μ over the rows of ν."""

    @lru_cache(maxsize=None)
    def fill(index: int, remaining: Tuple[int, ...]) -> int:
        if index == len(mu):
            return 1 if not any(remaining) else 0
        total = 0
        for row, capacity in enumerate(remaining):
            if capacity >= mu[index]:
                reduced = remaining[:row] + (capacity - mu[index],) + remaining[row + 1 :]
                total += fill(index + 1, reduced)
        return total

    return fill(0, nu)


def _clusters(values: np.ndarray, tolerance: float) -> List[List[int]]:
    order = np.argsort(values)
    scale = max(1.0, float(np.max(np.abs(values)))) if len(values) else 1.0
    groups: List[List[int]] = []
    for index in order:
        if groups and abs(values[index] - values[groups[-1][-1]]) <= tolerance * scale:
            groups[-1].append(int(index))
        else:
            groups.append([int(index)])
    return groups


def _diagonalize(
    matrices: Dict[int, np.ndarray], subspace: np.ndarray, ell: int, top: int, degree: int
) -> List[np.ndarray]:
    """Splits ``subspace`` into joint eigenvectors of T̂_ℓ, T̂_{ℓ+1}, ..., T̂_top."""
    if subspace.shape[1] == 1:
        return [subspace[:, 0]]
    if ell > top:
        raise DegenerateSpectrumError(degree, subspace.shape[1])
    if ell > 3:
        logger.info("jack_basis: degree %d cluster of size %d, escalating to T_%d", degree, subspace.shape[1], ell)
    block = subspace.conj().T @ matrices[ell] @ subspace
    values, vectors = eigh((block + block.conj().T) / 2)
    rotated = subspace @ vectors
    found: List[np.ndarray] = []
    for group in _clusters(values, CLUSTER_TOLERANCE):
        found.extend(_diagonalize(matrices, rotated[:, group], ell + 1, top, degree))
    return found


def _leading(coefficients: Dict[Partition, float], tolerance: float) -> Optional[Partition]:
    scale = max(abs(value) for value in coefficients.values())
    support = [nu for nu, value in coefficients.items() if abs(value) > tolerance * scale]
    for candidate in support:
        if all(candidate.dominates(nu) for nu in support):
            return candidate
    return None


@lru_cache(maxsize=64)
def jack_basis(d: int, params: AnisotropyParams, L: int = 8) -> JackBasis:
    """
    Computes the Jack polynomials of degree d by diagonalizing T̂₃↑ on the degree-d block.

    Eigenvalue clusters of T̂₃↑ are split with T̂₄↑, T̂₅↑, ... as needed. Each eigenvector is expanded in
    monomial symmetric functions of p_k = ρ_k/(−ε₂) and labeled by its dominance-maximal monomial; the phase
    makes that coefficient positive.

    Args:
        d: The degree, between 0 and ``MAX_JACK_DEGREE``.
        params: The anisotropy parameters; the computation runs in floating point.
        L: The largest ℓ in the eigenvalue table.

    Returns:
        The basis.

    Raises:
        DomainError: If d is out of range.
        DegenerateSpectrumError: If eigenvectors cannot be separated or labeled.
    """
    if not 0 <= d <= MAX_JACK_DEGREE:
        raise DomainError(f"Jack degree must lie in [0, {MAX_JACK_DEGREE}], got {d}.")
    params = params.as_floats()
    field_ = ScalarField()
    top = max(L, d + 2, 3)
    matrices: Dict[int, np.ndarray] = {}
    basis: List[Partition] = partitions_of_size(d)
    for ell in range(top + 1):
        basis, matrix = operator_matrix(lambda x, ell=ell: apply_T(ell, x, params), d, params.hbar, field_)
        matrices[ell] = matrix
    vectors = _diagonalize(matrices, np.eye(len(basis), dtype=complex), 3, top, d)

    norms = np.array([math.sqrt(mu.norm_squared(params.hbar)) for mu in basis])
    scale = -params.eps2
    result = JackBasis(degree=d, params=params, partitions=[])
    labeled: Dict[Partition, Tuple[np.ndarray, float]] = {}
    for vector in vectors:
        # ρ_μ coefficients of the unit vector, then monomial coefficients
        rho = vector / norms
        monomial = {
            nu: sum(
                complex(rho[i]) * scale ** mu.length * _power_to_monomial(mu.parts, nu.parts)
                for i, mu in enumerate(basis)
            )
            for nu in basis
        }
        lam = _leading({nu: abs(value) for nu, value in monomial.items()}, 1e-8)
        if lam is None or lam in labeled:
            raise DegenerateSpectrumError(d, len(vectors))
        leading = monomial[lam]
        phase = abs(leading) / leading
        labeled[lam] = (vector * phase, abs(leading))

    for lam in basis:
        vector, leading = labeled[lam]
        result.partitions.append(lam)
        result.coefficients[lam] = FockVector(
            field_, {mu: complex(vector[i]) / norms[i] for i, mu in enumerate(basis) if abs(vector[i]) > 1e-15}
        )
        result.norms[lam] = 1.0 / leading
        result.eigenvalues[lam] = [float((vector.conj() @ matrices[ell] @ vector).real) for ell in range(L + 1)]
    logger.debug("jack_basis: degree %d, %d vectors", d, len(basis))
    return result


def _overlap_exponent(v_out: Specialization, v_in: Specialization, hbar: float) -> complex:
    field_ = ScalarField()
    total = sum((field_.conj(v_out.value(k, field_)) * v_in.value(k, field_) / k for k in v_out.support), 0j)
    return total / hbar


def jack_measure_prob(
    lam: Partition, v_out: Specialization, v_in: Specialization, params: AnisotropyParams
) -> complex:
    """
    The Jack measure weight conj(P_λ^norm(V^out)) P_λ^norm(V^in) exp(−(1/ℏ) Σ conj(V^out_k) V^in_k / k).

    The weight is real and nonnegative when ``v_out == v_in``.

    Raises:
        DomainError: If |λ| exceeds ``MAX_JACK_DEGREE``.
    """
    basis = jack_basis(lam.size, params)
    out = basis.evaluate(lam, v_out)
    into = basis.evaluate(lam, v_in)
    return out.conjugate() * into * complex(np.exp(-_overlap_exponent(v_out, v_in, float(params.hbar))))


def jack_plancherel_prob(lam: Partition, params: AnisotropyParams) -> Any:
    """
    The Jack-Plancherel probability of λ given |λ| = d, from the double hook product.

    Exact for exact parameters.
    """
    d = lam.size
    conjugate = lam.transpose()
    eps1, eps2 = params.eps1, params.eps2
    weight: Any = params.hbar**d * math.factorial(d)
    for i, j in lam.boxes():
        arm = lam.row(i) - j
        leg = conjugate.row(j) - i
        base = -eps2 * leg + eps1 * arm
        weight = weight / ((base + eps1) * (base - eps2))
    return weight


def conditioned_moments(
    lengths: Sequence[int],
    v_out: Specialization,
    v_in: Specialization,
    params: AnisotropyParams,
    d: int,
    field: Optional[ScalarField] = None,
) -> Scalar:
    """
    Joint moments of transition moments under the Jack measure conditioned on |λ| = d.

    The ratio ⟨Υ_in^(d), T̂_{ℓ₁}↑⋯T̂_{ℓ_n}↑ Υ_out^(d)⟩ / ⟨Υ_in^(d), Υ_out^(d)⟩
    of degree-d truncated kernels.

    Raises:
        DomainError: If d is negative or the truncated kernels are orthogonal.
    """
    if d < 0:
        raise DomainError(f"Degree must be nonnegative, got {d}.")
    field = field or ScalarField(exact=params.exact_ebar_hbar)
    kernel_out = truncated_kernel(v_out, params.hbar, d, field)
    kernel_in = truncated_kernel(v_in, params.hbar, d, field)
    overlap = inner_product(kernel_in, kernel_out, params.hbar)
    if field.is_zero(overlap):
        raise DomainError(f"The degree-{d} kernels of {v_in} and {v_out} are orthogonal.")
    image = apply_T_product(lengths, kernel_out, params)
    return inner_product(kernel_in, image, params.hbar) / overlap


def depoissonization_factor(eta: int, d: int, hbar: Any) -> Any:
    """𝒞_d(η; ℏ) = d(d−1)⋯(d−η+1)·ℏ^η; exact for integer or ``Fraction`` ℏ."""
    if eta < 0 or d < 0:
        raise DomainError(f"eta and d must be nonnegative, got eta={eta}, d={d}.")
    falling = 1
    for i in range(eta):
        falling *= d - i
    if isinstance(hbar, int):
        hbar = Fraction(hbar)
    return falling * hbar**eta


@dataclass(frozen=True)
class PartitionSum:
    """
    A moment computed as a sum over partitions of bounded size.

    Attributes:
        value: Σ_{|λ|≤D} Prob(λ) Π T_{ℓ_a}↑|_λ.
        cutoff: D.
        missing_mass: 1 − Σ_{|λ|≤D} Prob(λ).
        tail_bound: A bound on |Σ_{|λ|>D} Prob(λ) Π T_{ℓ_a}↑|_λ|, the error of ``value``; infinite when
            v^out ≠ v^in.
    """

    value: complex
    cutoff: int
    missing_mass: float
    tail_bound: float


def partition_sum_moments(
    lengths: Sequence[int],
    v_out: Specialization,
    v_in: Specialization,
    params: AnisotropyParams,
    D: int,
) -> PartitionSum:
    """
    Joint moments of transition moments by summing over all partitions of size at most D.

    When v^out = v^in the weights are probabilities and Cauchy-Schwarz bounds the omitted terms by
    √(missing mass · 𝔼[(Π T_{ℓ_a}↑)²]), with the second moment taken from the ribbon path sum of the doubled
    lengths.

    Args:
        lengths: ℓ₁, ..., ℓ_n.
        v_out: The outgoing specialization.
        v_in: The incoming specialization.
        params: The anisotropy parameters.
        D: The size cutoff, at most ``MAX_JACK_DEGREE``.

    Returns:
        The truncated sum with its missing probability mass and the bound on its error.
    """
    if not lengths:
        raise DomainError("At least one length is required.")
    top = max(lengths)
    value = 0j
    mass = 0j
    for lam in partitions_up_to(D):
        prob = jack_measure_prob(lam, v_out, v_in, params)
        moments = transition_moments_of(lam, params, top).as_floats()
        mass += prob
        value += prob * math.prod(moments[ell] for ell in lengths)
    missing = float(abs(1 - mass))
    if v_out == v_in:
        second = complex(moments_poly(tuple(lengths) * 2, v_in, v_in).evaluate(params.hbar, params.ebar)).real
        tail_bound = math.sqrt(missing * max(second, 0.0))
    else:
        tail_bound = math.inf
    logger.debug(
        "partition_sum_moments%s: D=%d, missing mass %.3e, tail bound %.3e", tuple(lengths), D, missing, tail_bound
    )
    return PartitionSum(value=value, cutoff=D, missing_mass=missing, tail_bound=tail_bound)


def fixed_size_normalization(d: int, params: AnisotropyParams, tolerance: float = DEFAULT_TOLERANCE) -> float:
    """
    Σ_{|λ|=d} of the Jack-Plancherel probabilities.

    Raises:
        InconsistencyError: If the sum differs from 1 beyond ``tolerance``.
    """
    total = sum(jack_plancherel_prob(lam, params) for lam in partitions_of_size(d))
    if abs(float(total) - 1.0) > tolerance:
        raise InconsistencyError(f"Jack-Plancherel mass at degree {d}", float(total), 1.0, tolerance)
    return float(total)
