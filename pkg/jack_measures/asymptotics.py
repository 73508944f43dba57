"""
Limit shapes and Gaussian fluctuations.

The convex action profile (ε̄ = 0) is the push-forward of the uniform measure on the circle along the symbol
v(x); the dispersive action profile (ε̄ < 0) is read from the spectral data of a truncated Lax matrix. The
covariance of the fluctuations of the linear statistics is computed three ways: by the welding operator
applied to limit-shape moments, from decorated ribbon paths, and by Fourier quadrature.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Chebyshev
from scipy.integrate import quad
from scipy.linalg import eigh
from scipy.optimize import brentq

from .exceptions import DomainError, PoleProximityError, TruncationError
from .partitions import AnisotropyParams, Partition
from .profiles import InterlacingProfile, MomentSequence, kmk_O_from_T, profile_of
from .ribbon.sums import W_sum, decorated_cumulants_poly, decorated_moments_poly
from .scalars import ScalarField
from .specializations import Specialization

logger = logging.getLogger(__name__)

WEIGHT_FLOOR = 1e-10
POLE_PROXIMITY = 1e-8
DEFAULT_STEP = 1e-4
QUAD_LIMIT = 400


@dataclass(frozen=True)
class TruncatedLax:
    """
    The M×M truncation of the Lax matrix with entries conj(V_{j′−j}) above the diagonal, V_{j−j′} below it and
    ε̄·j on it. ε̄ = 0 gives the Toeplitz matrix of the symbol.

    Attributes:
        v: The specialization.
        ebar: ε̄.
        M: The dimension.
    """

    v: Specialization
    ebar: float
    M: int

    def __post_init__(self) -> None:
        if self.M < 1:
            raise DomainError(f"Truncation size must be positive, got {self.M}.")

    @cached_property
    def matrix(self) -> np.ndarray:
        field_ = ScalarField()
        matrix = np.diag(np.arange(self.M, dtype=float) * float(self.ebar)).astype(complex)
        for k in self.v.support:
            if k >= self.M:
                continue
            value = field_.to_complex(self.v.value(k, field_))
            idx = np.arange(self.M - k)
            matrix[idx + k, idx] = value
            matrix[idx, idx + k] = value.conjugate()
        return matrix

    @cached_property
    def spectrum(self) -> Tuple[np.ndarray, np.ndarray]:
        """Eigenvalues θ_k in ascending order and the weights |w_k(0)|² of ψ₀ on the eigenvectors."""
        values, vectors = eigh(self.matrix)
        return values, np.abs(vectors[0, :]) ** 2


def symbol_eval(v: Specialization, x: float) -> float:
    """v(x) = Σ_k (V_k e^{−ikx} + conj(V_k) e^{ikx})."""
    return v.symbol(x)


def resolvent_00(lax: TruncatedLax, u: complex) -> complex:
    """
    ⟨ψ₀, (u − L)^{−1} ψ₀⟩ = Σ_k |w_k(0)|² / (u − θ_k).

    Raises:
        PoleProximityError: If u lies within ``POLE_PROXIMITY`` of an eigenvalue.
    """
    values, weights = lax.spectrum
    distances = np.abs(u - values)
    nearest = int(np.argmin(distances))
    if distances[nearest] < POLE_PROXIMITY:
        raise PoleProximityError(u, float(values[nearest]))
    return complex(np.sum(weights / (u - values)))


def resolvent_difference_residual(v: Specialization, ebar: float, u: complex, M: int = 400) -> float:
    """
    |𝐓↑(u − ε̄) + 1/𝐓↑(u) − u| for the M-truncated resolvent.

    For ε̄ = 0 this is the quadratic 𝐓↑ + 1/𝐓↑ = u.

    The relation holds exactly for Specialization.plancherel() in the limit M → ∞.
    """
    lax = TruncatedLax(v, ebar, M)
    return abs(resolvent_00(lax, u - ebar) + 1.0 / resolvent_00(lax, u) - u)


def lax_moments(v: Specialization, ebar: float, L: int, M: int) -> MomentSequence:
    """⟨ψ₀, L^ℓ ψ₀⟩ for ℓ = 0..L by repeated products with the truncated matrix."""
    lax = TruncatedLax(v, ebar, M)
    state = np.zeros(M, dtype=complex)
    state[0] = 1.0
    moments: List[Any] = [1]
    for _ in range(L):
        state = lax.matrix @ state
        moments.append(complex(state[0]))
    return MomentSequence(tuple(moments))


def limit_moments_paths(
    v: Specialization, ebar: Any, L: int, field: Optional[ScalarField] = None
) -> MomentSequence:
    """
    𝐓ℓ↑(v; ε̄) = Σ_m W_{1,0,m}(ℓ | v, v) ε̄^m for ℓ = 0..L,
    from single-site ribbon paths without pairings.
    """
    field = field or ScalarField()
    moments: List[Any] = [1]
    for ell in range(1, L + 1):
        moments.append(W_sum((ell,), v, v, field).restrict(q=0).evaluate(0, ebar))
    return MomentSequence(tuple(moments))


def limit_linear_statistics(
    v: Specialization, ebar: Any, P: int, field: Optional[ScalarField] = None
) -> MomentSequence:
    """𝐎_p(v; ε̄), p = 0..P, from the limit transition moments through KMK_p."""
    return kmk_O_from_T(limit_moments_paths(v, ebar, P, field))


def _integrate(fn: Callable[[float], float], low: float, high: float, epsabs: float) -> float:
    # full_output keeps quad from emitting IntegrationWarning; its message is logged instead
    result = quad(fn, low, high, limit=QUAD_LIMIT, epsabs=epsabs, full_output=1)
    if len(result) > 3:
        logger.debug("quad on [%g, %g]: %s (error estimate %.2e)", low, high, str(result[3]).strip(), result[1])
    return float(result[0])


def convex_profile_moments(v: Specialization, P: int) -> MomentSequence:
    """𝐎_p = ∫₀^{2π} v(x)^p dx/2π for p = 0..P, by adaptive quadrature."""
    moments: List[Any] = [1.0]
    for p in range(1, P + 1):
        value = _integrate(lambda x: v.symbol(x) ** p, 0.0, 2.0 * math.pi, 1e-13)
        moments.append(value / (2.0 * math.pi))
    return MomentSequence(tuple(moments))


def convex_profile(v: Specialization, grid: Sequence[float]) -> List[Tuple[float, float]]:
    """The convex action profile f(c) = ∫₀^{2π} |c − v(x)| dx/2π at each grid point."""
    points = []
    for c in grid:
        value = _integrate(lambda x: abs(c - v.symbol(x)), 0.0, 2.0 * math.pi, 1e-12)
        points.append((float(c), value / (2.0 * math.pi)))
    return points


def vkls_profile(c: float) -> float:
    """The closed form (2/π)(c·arcsin(c/2) + √(4 − c²)) for |c| ≤ 2 and |c| outside."""
    if abs(c) >= 2.0:
        return abs(c)
    return (2.0 / math.pi) * (c * math.asin(c / 2.0) + math.sqrt(4.0 - c * c))


@dataclass(frozen=True)
class DispersiveProfileData:
    """
    Spectral data of the dispersive action profile.

    Attributes:
        poles: S_i↑, descending; the local minima of the profile.
        zeros: S_i↓, descending; the local maxima.
        M: The truncation size.
        ebar: ε̄ < 0.
        discarded_weight: Total weight |w_k(0)|² of the eigenvalues below the weight floor.
    """

    poles: Tuple[float, ...]
    zeros: Tuple[float, ...]
    M: int
    ebar: float
    discarded_weight: float

    @property
    def gaps(self) -> List[float]:
        """(S_{i−1}↑ − S_i↓)/|ε̄| for i = 1..n."""
        return [(self.poles[i - 1] - self.zeros[i - 1]) / abs(self.ebar) for i in range(1, len(self.poles))]

    def profile(self) -> InterlacingProfile:
        return InterlacingProfile(tuple(reversed(self.poles)), tuple(reversed(self.zeros)))


def dispersive_profile(v: Specialization, ebar: float, M: int = 200) -> DispersiveProfileData:
    """
    Computes the dispersive action profile from the M-truncated Lax matrix.

    Poles are the eigenvalues carrying weight above ``WEIGHT_FLOOR``; the zeros of the resolvent are bracketed
    between consecutive poles and found with Brent's method.

    Args:
        v: The specialization.
        ebar: ε̄, strictly negative.
        M: The truncation size.

    Returns:
        The interlacing extrema.

    Raises:
        DomainError: If ``ebar`` is not negative.
        TruncationError: If the recovered extrema do not interlace.
    """
    if not ebar < 0:
        raise DomainError(f"Dispersive profiles need ebar < 0, got {ebar}.")
    lax = TruncatedLax(v, float(ebar), M)
    values, weights = lax.spectrum
    keep = weights > WEIGHT_FLOOR
    poles, residues = values[keep], weights[keep]
    discarded = float(np.sum(weights[~keep]))
    if discarded:
        logger.debug("dispersive_profile: discarded weight %.3e below floor at M=%d", discarded, M)

    def numerator(u: float) -> float:
        return float(np.sum(residues / (u - poles)))

    zeros = []
    for low, high in zip(poles[:-1], poles[1:]):
        margin = (high - low) * 1e-12
        zeros.append(brentq(numerator, low + margin, high - margin, xtol=1e-14))
    data = DispersiveProfileData(
        poles=tuple(float(x) for x in poles[::-1]),
        zeros=tuple(float(x) for x in zeros[::-1]),
        M=M,
        ebar=float(ebar),
        discarded_weight=discarded,
    )
    try:
        data.profile()
    except DomainError:
        raise TruncationError("M", M, 2 * M)
    return data


@dataclass
class CovarianceTable:
    """
    Covariances 𝚺_{p₁,p₂} keyed by (p₁, p₂) with p₁ ≤ p₂.

    Attributes:
        entries: The values.
        regime: A free-form regime tag.
        ebar: ε̄.
        method: "welding", "paths" or "bd".
    """

    entries: Dict[Tuple[int, int], float] = field(default_factory=dict)
    regime: str = ""
    ebar: float = 0.0
    method: str = "paths"

    def __getitem__(self, key: Tuple[int, int]) -> float:
        return self.entries[tuple(sorted(key))]


def _perturbed(v: Specialization, k: int, delta: complex) -> Specialization:
    base = ScalarField().to_complex(v.value(k, ScalarField()))
    return v.with_value(k, base + delta)


def _wirtinger(
    f: Callable[[Specialization], complex], v: Specialization, k: int, step: float
) -> Tuple[complex, complex]:
    """(∂f/∂V_k, ∂f/∂conj(V_k)) by central differences in the real and imaginary directions."""
    fx = (f(_perturbed(v, k, step)) - f(_perturbed(v, k, -step))) / (2 * step)
    fy = (f(_perturbed(v, k, 1j * step)) - f(_perturbed(v, k, -1j * step))) / (2 * step)
    return (fx - 1j * fy) / 2, (fx + 1j * fy) / 2


def covariance_welding(v: Specialization, ebar: float, p1: int, p2: int, step: float = DEFAULT_STEP) -> float:
    """
    𝚺_{p₁,p₂} = Σ_k k ∂𝐎_{p₁}/∂conj(V_k) · ∂𝐎_{p₂}/∂V_k,
    the welding operator applied to the limit shapes.

    Args:
        v: The specialization.
        ebar: ε̄.
        p1: The first statistic.
        p2: The second statistic.
        step: The finite difference step δ.

    Returns:
        The real part of the welded product.
    """
    if not v or min(p1, p2) < 2:
        return 0.0
    kmax = v.max_index * max(p1, p2)

    def statistic(p: int) -> Callable[[Specialization], complex]:
        return lambda s: complex(limit_linear_statistics(s, ebar, p)[p])

    total = 0j
    for k in range(1, kmax + 1):
        _, d1 = _wirtinger(statistic(p1), v, k, step)
        d2, _ = _wirtinger(statistic(p2), v, k, step)
        total += k * d1 * d2
    return float(total.real)


def covariance_paths(v: Specialization, ebar: Any, p1: int, p2: int) -> float:
    """𝚺_{p₁,p₂} = Σ_m W^dec_{2,0,m}(p₁, p₂) ε̄^m, the ℏ¹ part of the decorated joint cumulant."""
    cumulant = decorated_cumulants_poly((p1, p2), v, v)
    return float(ScalarField().to_complex(cumulant.restrict(q=1).evaluate(1, ebar)).real)


def _fourier(v: Specialization, g: Callable[[float], float], k: int) -> complex:
    re = _integrate(lambda x: g(v.symbol(x)) * math.cos(k * x), 0.0, 2.0 * math.pi, 1e-13)
    im = _integrate(lambda x: g(v.symbol(x)) * math.sin(k * x), 0.0, 2.0 * math.pi, 1e-13)
    return complex(re, im) / (2.0 * math.pi)


def _bd(v: Specialization, g1: Callable[[float], float], g2: Callable[[float], float], kmax: int) -> float:
    total = 0j
    for k in range(1, kmax + 1):
        total += k * _fourier(v, g1, k) * _fourier(v, g2, k).conjugate()
    return float(total.real)


def covariance_bd(v: Specialization, p1: int, p2: int) -> float:
    """
    Σ_k k (∫p₁v^{p₁−1}e^{ikx}dx/2π)(∫p₂v^{p₂−1}e^{−ikx}dx/2π),
    the ε̄ = 0 covariance by quadrature.
    """
    if not v or min(p1, p2) < 1:
        return 0.0
    kmax = v.max_index * max(p1 - 1, p2 - 1)
    return _bd(v, lambda c: p1 * c ** (p1 - 1), lambda c: p2 * c ** (p2 - 1), kmax)


def chebyshev_variance(k: int, k2: Optional[int] = None, v: Optional[Specialization] = None) -> float:
    """
    Cov[∫U_{k−1}(c/2)𝐆 dc, ∫U_{k₂−1}(c/2)𝐆 dc] at ε̄ = 0.

    Integrating by parts against f_k(c) = (2/k) T_k(c/2), whose derivative is U_{k−1}(c/2), turns the k-th statistic
    into the quadrature covariance with kernel f_k. For the Plancherel specialization the result is δ(k − k₂)/k.

    Raises:
        DomainError: If an index is below 1.
    """
    k2 = k if k2 is None else k2
    if min(k, k2) < 1:
        raise DomainError(f"Chebyshev indices start at 1, got {k} and {k2}.")
    v = v or Specialization.plancherel()
    first, second = Chebyshev.basis(k), Chebyshev.basis(k2)
    kmax = v.max_index * max(k, k2)
    return _bd(v, lambda c: 2.0 / k * first(c / 2.0), lambda c: 2.0 / k2 * second(c / 2.0), kmax)


def covariance_table(
    v: Specialization, ebar: float, P: int, method: str = "paths", regime: str = "", step: float = DEFAULT_STEP
) -> CovarianceTable:
    """
    𝚺_{p₁,p₂} for 1 ≤ p₁ ≤ p₂ ≤ P.

    Raises:
        DomainError: If the method is unknown, or "bd" is requested at nonzero ε̄.
    """
    if method == "bd" and ebar != 0:
        raise DomainError("The quadrature covariance only applies at ebar = 0.")
    compute: Dict[str, Callable[[int, int], float]] = {
        "welding": lambda a, b: covariance_welding(v, ebar, a, b, step),
        "paths": lambda a, b: covariance_paths(v, ebar, a, b),
        "bd": lambda a, b: covariance_bd(v, a, b),
    }
    if method not in compute:
        raise DomainError(f"Unknown covariance method '{method}'.")
    table = CovarianceTable(regime=regime, ebar=float(ebar), method=method)
    for p1 in range(1, P + 1):
        for p2 in range(p1, P + 1):
            table.entries[(p1, p2)] = compute[method](p1, p2)
    return table


def mean_shift_moments(v: Specialization, P: int, step: float = DEFAULT_STEP) -> MomentSequence:
    """d𝐎_p/dε̄ at ε̄ = 0 for p = 0..P, by central differences of the limit-shape statistics."""
    plus = limit_linear_statistics(v, step, P)
    minus = limit_linear_statistics(v, -step, P)
    return MomentSequence(tuple(complex(a - b).real / (2 * step) for a, b in zip(plus, minus)))


def mean_shift_paths(v: Specialization, P: int, field: Optional[ScalarField] = None) -> MomentSequence:
    """𝐗_p = Y^dec_{1,0,1}(p), the ε̄-linear, ℏ-free part of the decorated moment of O_p, for p = 0..P."""
    field = field or ScalarField()
    values: List[Any] = [field.zero]
    for p in range(1, P + 1):
        values.append(decorated_moments_poly((p,), v, v, field)[(0, 1)])
    return MomentSequence(tuple(values))


def plancherel_mean_shift(c: float) -> float:
    """The Plancherel mean shift −(1/2π) arcsin(c/2) on [−2, 2], zero outside."""
    if abs(c) > 2.0:
        return 0.0
    return -math.asin(c / 2.0) / (2.0 * math.pi)


def plancherel_mean_shift_moments(P: int) -> MomentSequence:
    """The mean shift moments −p(p−1)∫c^{p−2}·X(c) dc of the closed form X, for p = 0..P."""
    values: List[Any] = [0.0, 0.0]
    for p in range(2, P + 1):
        integral = _integrate(lambda c: c ** (p - 2) * plancherel_mean_shift(c), -2.0, 2.0, 1e-13)
        values.append(-p * (p - 1) * integral)
    return MomentSequence(tuple(values[: P + 1]))


def plancherel_mean_shift_series(P: int) -> MomentSequence:
    """
    The exact mean shift moments from Σ_p 𝐗_p u^{−p}/p = S₋(u)/(u² − 4), S₋(u) = (u − √(u² − 4))/2.
    """
    values: List[Any] = [0]
    for p in range(1, P + 1):
        if p % 2 == 0 or p < 3:
            values.append(0)
            continue
        top = (p - 3) // 2
        values.append(p * sum(catalan(m) * 4 ** (top - m) for m in range(top + 1)))
    return MomentSequence(tuple(values))


def catalan(m: int) -> int:
    return math.comb(2 * m, m) // (m + 1)


@dataclass(frozen=True)
class ReflectedData:
    """
    Regime-III quantities obtained from Regime-I data at (−v, −ε̄).

    Attributes:
        moments: 𝐓_ℓ↑(v; ε̄) = (−1)^ℓ 𝐓_ℓ↑(−v; −ε̄), ℓ = 0..L.
        covariances: 𝚺_{p₁,p₂}(v; ε̄) = (−1)^{p₁+p₂} 𝚺_{p₁,p₂}(−v; −ε̄).
    """

    moments: MomentSequence
    covariances: Dict[Tuple[int, int], float]


def regime3_reflection(
    v: Specialization,
    ebar: Any,
    L: int,
    pairs: Sequence[Tuple[int, int]] = (),
    field: Optional[ScalarField] = None,
) -> ReflectedData:
    """
    Computes ε̄ > 0 limit moments and covariances through the symmetry (v, ε̄) ↦ (−v, −ε̄).

    Raises:
        DomainError: If ``ebar`` is not positive.
    """
    if not ebar > 0:
        raise DomainError(f"The reflection applies to ebar > 0, got {ebar}.")
    field = field or ScalarField()
    reflected = v.negated()
    moments = limit_moments_paths(reflected, -ebar, L, field)
    signed = tuple(value if ell % 2 == 0 else -value for ell, value in enumerate(moments))
    covariances = {
        (p1, p2): (-1) ** (p1 + p2) * covariance_paths(reflected, -ebar, p1, p2) for p1, p2 in pairs
    }
    return ReflectedData(moments=MomentSequence(signed), covariances=covariances)


def transition_transform(lam: Partition, params: AnisotropyParams, u: complex) -> complex:
    """T↑(u)|_λ = Π(u − max_j)/Π(u − min_i) from the profile of λ."""
    profile = profile_of(lam, params)
    value = complex(1.0)
    for y in profile.maxima:
        value *= u - float(y)
    for x in profile.minima:
        value /= u - float(x)
    return value


def g_up_weight(contents: Sequence[float], us: Sequence[complex], params: AnisotropyParams) -> complex:
    """
    Π_a Π_c (u_a − c)(u_a − c − ε₂ − ε₁) / ((u_a − c − ε₂)(u_a − c − ε₁))
    over box contents c.

    Raises:
        DomainError: If some u_a is real.
    """
    eps1, eps2 = float(params.eps1), float(params.eps2)
    result = complex(1.0)
    for u in us:
        if complex(u).imag == 0:
            raise DomainError(f"Spectral parameters must be non-real, got {u}.")
        for c in contents:
            c = float(c)
            result *= (u - c) * (u - c - eps1 - eps2) / ((u - c - eps2) * (u - c - eps1))
    return result


def regime_rate(ebar: Any, hbar: Any) -> Any:
    """γ = ε̄²/ℏ; exact for rational inputs."""
    if isinstance(ebar, (int, Fraction)) and isinstance(hbar, (int, Fraction)):
        return Fraction(ebar) ** 2 / Fraction(hbar)
    return float(ebar) ** 2 / float(hbar)
