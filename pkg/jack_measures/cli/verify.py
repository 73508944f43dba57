"""
The property suite behind ``jack-measures verify``.

Each check recomputes a quantity by two independent routes, or compares one against a golden value, and reports
a pass/fail row.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Tuple

from ..asymptotics import (
    chebyshev_variance,
    convex_profile_moments,
    covariance_bd,
    covariance_paths,
    dispersive_profile,
    mean_shift_paths,
    plancherel_mean_shift_series,
    resolvent_difference_residual,
)
from ..exceptions import JackMeasuresError
from ..fock import joint_moments_operator
from ..jack import jack_basis, jack_measure_prob, jack_plancherel_prob
from ..partitions import AnisotropyParams, params_from_ebar_hbar, partitions_of_size, partitions_up_to
from ..profiles import assert_routes_agree
from ..ribbon.sums import W_sum, moments_poly
from ..scalars import ScalarField
from ..specializations import Specialization
from ..types import GoldenDict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _close(a: complex, b: complex, tolerance: float) -> bool:
    return abs(a - b) <= tolerance * max(1.0, abs(a), abs(b))


def check_catalan(golden: GoldenDict) -> str:
    v = Specialization.plancherel()
    exact = ScalarField(exact=True)
    values = [int(exact.real(W_sum((2 * m,), v, v, exact)[(0, 0)])) for m in range(1, len(golden["catalan"]) + 1)]
    if values != golden["catalan"]:
        raise AssertionError(f"{values} != {golden['catalan']}")
    return f"{values}"


def check_central_binomials(golden: GoldenDict) -> str:
    expected = golden["central_binomials"]
    moments = convex_profile_moments(Specialization.plancherel(), 2 * len(expected))
    values = [moments[2 * m] for m in range(1, len(expected) + 1)]
    if not all(abs(a - b) <= 1e-8 for a, b in zip(values, expected)):
        raise AssertionError(f"{values} != {expected}")
    return f"{[round(x, 10) for x in values]}"


def check_covariance(golden: GoldenDict) -> str:
    v = Specialization.plancherel()
    paths, bd = covariance_paths(v, 0, 2, 2), covariance_bd(v, 2, 2)
    if abs(paths - golden["covariance_22"]) > 1e-9 or abs(bd - golden["covariance_22"]) > 1e-6:
        raise AssertionError(f"paths {paths}, quadrature {bd}, golden {golden['covariance_22']}")
    return f"{paths}"


def check_chebyshev(golden: GoldenDict) -> str:
    values = [chebyshev_variance(k) for k in range(1, len(golden["chebyshev_variances"]) + 1)]
    if not all(abs(a - b) <= 1e-6 for a, b in zip(values, golden["chebyshev_variances"])):
        raise AssertionError(f"{values} != {golden['chebyshev_variances']}")
    off = chebyshev_variance(2, 3)
    if abs(off) > 1e-6:
        raise AssertionError(f"off-diagonal covariance {off}")
    return f"{[round(x, 8) for x in values]}"


def check_moments(params: AnisotropyParams) -> str:
    v = Specialization.plancherel()
    for lengths in [(2,), (3,), (4,), (2, 2), (3, 3), (2, 4)]:
        paths = complex(moments_poly(lengths, v, v).evaluate(params.hbar, params.ebar))
        operator = complex(joint_moments_operator(lengths, v, v, params.as_floats()).value)
        if not _close(paths, operator, 1e-8):
            raise AssertionError(f"{lengths}: paths {paths} != operator {operator}")
    return "paths = operator"


def check_eigenvalues(params: AnisotropyParams) -> str:
    for d in range(0, 5):
        jack_basis(d, params).check_against_profiles(1e-9)
    return "d <= 4"


def check_plancherel_law(params: AnisotropyParams) -> str:
    v = Specialization.plancherel()
    for d in range(1, 5):
        weights = {lam: jack_measure_prob(lam, v, v, params).real for lam in partitions_of_size(d)}
        total = sum(weights.values())
        for lam, weight in weights.items():
            expected = float(jack_plancherel_prob(lam, params))
            if not _close(weight / total, expected, 1e-9):
                raise AssertionError(f"{lam}: {weight / total} != {expected}")
    return "d <= 4"


def check_content_product() -> str:
    params = params_from_ebar_hbar(Fraction(3, 2), 1)
    for lam in partitions_up_to(6):
        assert_routes_agree(lam, params, 10)
    return "exact, |λ| <= 6"


def check_mean_shift() -> str:
    series = plancherel_mean_shift_series(6)
    paths = mean_shift_paths(Specialization.plancherel(), 6, ScalarField(exact=True))
    exact = ScalarField(exact=True)
    values = [exact.real(x) for x in paths]
    if [Fraction(x) for x in series] != values:
        raise AssertionError(f"{list(series)} != {values}")
    return f"{list(series)}"


def check_resolvent(M: int) -> str:
    v = Specialization.plancherel()
    convex = resolvent_difference_residual(v, 0.0, 3j, M)
    dispersive = resolvent_difference_residual(v, -1.0, 3j, M)
    if convex > 1e-6 or dispersive > 1e-4:
        raise AssertionError(f"residuals {convex:.2e}, {dispersive:.2e}")
    return f"residuals {convex:.2e}, {dispersive:.2e}"


def check_gaps(M: int) -> str:
    data = dispersive_profile(Specialization.plancherel(), -1.0, M)
    gaps = data.gaps[:5]
    if len(gaps) < 5 or any(gap < 0.5 or abs(gap - round(gap)) > 0.05 for gap in gaps):
        raise AssertionError(f"gaps {gaps}")
    return f"{[round(gap, 6) for gap in gaps]}"


def run_checks(golden: GoldenDict, params: AnisotropyParams, M: int = 400) -> List[CheckResult]:
    """
    Runs every check and collects the results; a check fails when it raises.

    Args:
        golden: The golden values.
        params: The anisotropy parameters for the parameter-dependent checks.
        M: The truncation size for resolvent checks.

    Returns:
        One result per check.
    """
    checks: List[Tuple[str, Callable[[], str]]] = [
        ("catalan", lambda: check_catalan(golden)),
        ("central-binomials", lambda: check_central_binomials(golden)),
        ("covariance-22", lambda: check_covariance(golden)),
        ("chebyshev", lambda: check_chebyshev(golden)),
        ("moments", lambda: check_moments(params)),
        ("eigenvalues", lambda: check_eigenvalues(params)),
        ("plancherel-law", lambda: check_plancherel_law(params)),
        ("content-product", check_content_product),
        ("mean-shift", check_mean_shift),
        ("resolvent", lambda: check_resolvent(M)),
        ("gaps", lambda: check_gaps(M)),
    ]
    results = []
    for name, check in checks:
        try:
            detail = check()
            results.append(CheckResult(name, True, detail))
        except (AssertionError, JackMeasuresError, KeyError, TypeError) as e:
            results.append(CheckResult(name, False, str(e)))
        level = logging.INFO if results[-1].passed else logging.ERROR
        logger.log(level, "verify %s: %s", name, "ok" if results[-1].passed else results[-1].detail)
    return results


def summary(results: List[CheckResult]) -> str:
    failed = [result.name for result in results if not result.passed]
    if not failed:
        return f"{len(results)} checks passed"
    return f"{len(failed)} of {len(results)} checks failed: {', '.join(failed)}"


