#!/usr/bin/env python3

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .. import asymptotics, exceptions, util
from ..fock import joint_moments_operator
from ..jack import MAX_JACK_DEGREE, jack_basis, partition_sum_moments
from ..partitions import AnisotropyParams, params_from_alpha, params_from_ebar_hbar
from ..ribbon import BiPolynomial, C_table, W_sum, Y_sum, enumerate_ribbon_paths, path_weight
from ..sampler import DEFAULT_TAIL_THRESHOLD, build_table, sample
from ..scalars import ScalarField
from ..specializations import Specialization
from . import output, verify

logger = logging.getLogger(__name__)

AGREEMENT_TOLERANCE = 1e-8

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

Rows = List[Tuple[Any, ...]]


class EnvVar(argparse.Action):
    def __init__(self, envvar: str, default: Optional[str] = None, required: bool = True, **kwargs: Any) -> None:
        default = os.environ.get(envvar, default)
        if required and default:
            required = False
        super(EnvVar, self).__init__(default=default, required=required, **kwargs)

    def __call__(
        self,
        parser: argparse.ArgumentParser,
        namespace: argparse.Namespace,
        values: Any,
        option_string: Optional[str] = None,
    ) -> None:
        setattr(namespace, self.dest, values)


def rational(text: str) -> Fraction:
    """Parses '1/2', '-1' or '0.25' into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid number: '{text}'")


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


@dataclass(frozen=True)
class RunConfig:
    """
    Everything a subcommand needs, resolved from the parsed arguments.

    Attributes:
        command: The subcommand name.
        v_out: The outgoing specialization.
        v_in: The incoming specialization.
        params: The anisotropy parameters; exact when ``mode`` is 'exact' and the inputs allow it.
        mode: 'exact' or 'numeric'.
        fmt: 'csv' or 'json'.
        seed: The sampling seed.
        threads: Worker threads for tables built entry by entry.
        options: The subcommand specific arguments.
    """

    command: str
    v_out: Specialization
    v_in: Specialization
    params: AnisotropyParams
    mode: str
    fmt: str
    seed: int
    threads: int
    options: Dict[str, Any]

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> "RunConfig":
        """
        Raises:
            SpecializationNotFoundError: If a specialization file is missing.
            DomainError: If the parameters are invalid.
        """
        v = util.load_specialization(args.spec)
        v_out = util.load_specialization(args.spec_out) if args.spec_out else v
        v_in = util.load_specialization(args.spec_in) if args.spec_in else v
        ebar, hbar, alpha = args.ebar, args.hbar, args.alpha
        if args.mode == "numeric":
            ebar, hbar = float(ebar), float(hbar)
            alpha = None if alpha is None else float(alpha)
        params = params_from_alpha(alpha, hbar) if alpha is not None else params_from_ebar_hbar(ebar, hbar)
        common = {"command", "spec", "spec_out", "spec_in", "ebar", "hbar", "alpha", "mode", "format", "out"}
        common |= {"seed", "threads", "verbose"}
        options = {key: value for key, value in vars(args).items() if key not in common}
        return cls(
            command=args.command,
            v_out=v_out,
            v_in=v_in,
            params=params,
            mode=args.mode,
            fmt=args.format,
            seed=int(args.seed),
            threads=int(args.threads),
            options=options,
        )

    @property
    def field(self) -> ScalarField:
        return ScalarField(exact=self.mode == "exact")

    @property
    def operator_field(self) -> ScalarField:
        """The field for routes that need ε̄ and ℏ as scalars; numeric unless both are rational."""
        return self.field if self.params.exact_ebar_hbar else ScalarField()

    @property
    def regime(self) -> str:
        if self.params.ebar == 0:
            return "convex"
        return "dispersive" if self.params.ebar < 0 else "reflected"

    def metadata(self, **extra: Any) -> Dict[str, Any]:
        return output.metadata(
            self.command,
            ebar=str(self.params.ebar),
            hbar=str(self.params.hbar),
            alpha=str(self.params.alpha),
            mode=self.mode,
            regime=self.regime,
            spec_out=str(self.v_out),
            spec_in=str(self.v_in),
            **extra,
        )


def _parallel_map(config: RunConfig, fn: Callable[[Any], Any], items: Sequence[Any]) -> List[Any]:
    if config.threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        return list(pool.map(fn, items))


def _complex_cells(field: ScalarField, value: Any) -> Tuple[Any, Any]:
    re, im = field.to_json(field(value))
    return re, im


def _evaluate(config: RunConfig, poly: BiPolynomial) -> Tuple[ScalarField, Any]:
    """Substitutes (ℏ, ε̄) into a ribbon path polynomial, exactly whenever both are rational."""
    field = config.operator_field
    if field != poly.field:
        poly = BiPolynomial(field, dict(poly))
    return field, poly.evaluate(config.params.hbar, config.params.ebar)


def cmd_enumerate(config: RunConfig) -> Tuple[List[str], Rows, Dict[str, Any]]:
    lengths = tuple(config.options["lengths"])
    table = config.options["table"]
    field = config.field
    K = max(config.v_out.max_index, config.v_in.max_index)
    meta = config.metadata(lengths=list(lengths), table=table, K=K)
    if table in ("W", "Y"):
        poly = (W_sum if table == "W" else Y_sum)(lengths, config.v_out, config.v_in, field)
        rows: Rows = [(term["q"], term["m"], term["re"], term["im"]) for term in poly.to_json()]
        value_field, value = _evaluate(config, poly)
        meta["value"] = [str(x) for x in _complex_cells(value_field, value)]
        return ["q", "m", "re", "im"], rows, meta
    if table == "C":
        rows = [(q, m, list(minus.parts), list(plus.parts), count) for q, m, minus, plus, count in C_table(lengths, K)]
        return ["q", "m", "mu_minus", "mu_plus", "count"], rows, meta
    rows = []
    for index, path in enumerate(enumerate_ribbon_paths(lengths, K)):
        weight = path_weight(path, config.v_out, config.v_in, field)
        if field.is_zero(weight.value):
            continue
        sites = " | ".join(" ".join(str(h) for h in site.heights) for site in path.sites)
        pairings = " ".join(f"{a}.{i}-{b}.{j}" for (a, i), (b, j) in path.pairings)
        rows.append((index, sites, pairings, weight.q, weight.m, *_complex_cells(field, weight.value)))
    return ["index", "heights", "pairings", "q", "m", "re", "im"], rows, meta


def _agrees(a: complex, b: complex, tolerance: float) -> bool:
    return abs(a - b) <= tolerance * max(1.0, abs(a), abs(b))


def cmd_moments(config: RunConfig) -> Tuple[List[str], Rows, Dict[str, Any]]:
    """
    Computes one joint moment by ribbon paths, in the Fock space and as a truncated partition sum.

    The tail column bounds each route's truncation error; the partition sum agrees when it lies within its bound
    of the ribbon path value.

    Raises:
        InconsistencyError: If the ribbon path and Fock space values disagree.
    """
    lengths = tuple(config.options["lengths"])
    D = config.options["degree_cutoff"]
    method = config.options["method"]
    params = config.params
    field = config.operator_field
    operator_params = params if params.exact_ebar_hbar else params.as_floats()
    moment_field, moment = _evaluate(config, Y_sum(lengths, config.v_out, config.v_in, config.field))
    operator = joint_moments_operator(
        lengths, config.v_out, config.v_in, operator_params, D=D, method=method, field=field
    )
    paths, operator_value = moment_field.to_complex(moment), field.to_complex(field(operator.value))
    tolerance = AGREEMENT_TOLERANCE if method == "displaced" else max(AGREEMENT_TOLERANCE, operator.tail)
    if not _agrees(paths, operator_value, tolerance):
        raise exceptions.InconsistencyError(f"moment {lengths}", paths, operator_value, tolerance)
    rows: Rows = [
        ("paths", *_complex_cells(moment_field, moment), "", 0.0, True),
        (f"operator-{method}", *_complex_cells(field, operator.value), operator.cutoff or "", operator.tail, True),
    ]
    numeric_routes = [] if field.exact else ["paths", f"operator-{method}"]
    meta: Dict[str, Any] = {"lengths": list(lengths)}
    if D <= MAX_JACK_DEGREE:
        summed = partition_sum_moments(lengths, config.v_out, config.v_in, params.as_floats(), D)
        slack = AGREEMENT_TOLERANCE * max(1.0, abs(paths), abs(summed.value))
        agrees = abs(paths - summed.value) <= summed.tail_bound + slack
        if not agrees:
            logger.warning(
                "moments%s: partition sum differs from paths by %.3e, more than its tail bound %.3e",
                lengths,
                abs(paths - summed.value),
                summed.tail_bound,
            )
        rows.append(("partition-sum", summed.value.real, summed.value.imag, D, summed.tail_bound, agrees))
        numeric_routes.append("partition-sum")
        meta["missing_mass"] = summed.missing_mass
    else:
        logger.info("moments: skipping the partition sum, D=%d exceeds %d", D, MAX_JACK_DEGREE)
    meta["numeric_routes"] = numeric_routes
    return ["route", "re", "im", "cutoff", "tail", "agrees"], rows, config.metadata(**meta)


def cmd_limit_shape(config: RunConfig) -> Tuple[List[str], Rows, Dict[str, Any]]:
    v, options = config.v_in, config.options
    if options["kind"] == "convex":
        low, high, points = options["grid_min"], options["grid_max"], options["grid_points"]
        grid = [low + (high - low) * i / (points - 1) for i in range(points)] if points > 1 else [low]
        closed = v == Specialization.plancherel()
        rows: Rows = [
            (c, f, asymptotics.vkls_profile(c) if closed else "") for c, f in asymptotics.convex_profile(v, grid)
        ]
        return ["c", "profile", "closed_form"], rows, config.metadata(kind="convex", grid_points=points)
    M = options["matrix_size"]
    data = asymptotics.dispersive_profile(v, float(config.params.ebar), M)
    gaps = data.gaps
    rows = []
    for i, pole in enumerate(data.poles):
        zero = data.zeros[i] if i < len(data.zeros) else ""
        gap = gaps[i] if i < len(gaps) else ""
        rows.append((i, pole, zero, gap))
    meta = config.metadata(kind="dispersive", M=M, discarded_weight=data.discarded_weight)
    return ["index", "minimum", "maximum", "gap"], rows, meta


def cmd_fluctuations(config: RunConfig) -> Tuple[List[str], Rows, Dict[str, Any]]:
    v, options = config.v_in, config.options
    P, table = options["p"], options["table"]
    meta = config.metadata(table=table, P=P)
    if table == "chebyshev":
        pairs = [(k1, k2) for k1 in range(1, P + 1) for k2 in range(k1, P + 1)]
        values = _parallel_map(config, lambda pair: asymptotics.chebyshev_variance(pair[0], pair[1], v), pairs)
        return ["k1", "k2", "covariance"], [(*pair, value) for pair, value in zip(pairs, values)], meta
    if table == "mean-shift":
        finite = asymptotics.mean_shift_moments(v, P)
        paths = asymptotics.mean_shift_paths(v, P)
        closed = asymptotics.plancherel_mean_shift_series(P) if v == Specialization.plancherel() else None
        rows: Rows = [
            (p, finite[p], ScalarField().to_complex(paths[p]).real, closed[p] if closed else "") for p in range(P + 1)
        ]
        return ["p", "finite_difference", "paths", "closed_form"], rows, meta
    method = options["covariance_method"]
    ebar = config.params.ebar
    pairs = [(p1, p2) for p1 in range(1, P + 1) for p2 in range(p1, P + 1)]
    if method == "bd" and ebar != 0:
        raise exceptions.DomainError("The quadrature covariance only applies at ebar = 0.")
    if config.regime == "reflected" and method == "paths":
        reflected = asymptotics.regime3_reflection(v, ebar, 0, pairs)
        values = [reflected.covariances[pair] for pair in pairs]
    else:
        compute: Dict[str, Callable[[Tuple[int, int]], float]] = {
            "welding": lambda pair: asymptotics.covariance_welding(v, float(ebar), *pair),
            "paths": lambda pair: asymptotics.covariance_paths(v, ebar, *pair),
            "bd": lambda pair: asymptotics.covariance_bd(v, *pair),
        }
        values = _parallel_map(config, compute[method], pairs)
    meta["method"] = method
    return ["p1", "p2", "covariance"], [(*pair, value) for pair, value in zip(pairs, values)], meta


def cmd_sample(config: RunConfig) -> Tuple[List[str], Rows, Dict[str, Any]]:
    D, count = config.options["degree_cutoff"], config.options["count"]
    table = build_table(config.v_in, config.params.as_floats(), D)
    draws = sample(table, config.seed, count, config.options["threshold"])
    rows: Rows = [(i, list(lam.parts), lam.size) for i, lam in enumerate(draws)]
    meta = config.metadata(
        D=D, count=count, seed=config.seed, tail_mass=table.tail_mass, numeric_routes=["measure-table"]
    )
    return ["index", "partition", "size"], rows, meta


def cmd_jack_basis(config: RunConfig) -> Tuple[List[str], Rows, Dict[str, Any]]:
    d, L = config.options["degree"], config.options["series_order"]
    basis = jack_basis(d, config.params.as_floats(), L)
    rows: Rows = [
        (row["partition"], row["norm"], row["eigenvalues"], json.dumps(row["coefficients"], sort_keys=True))
        for row in basis.to_json()
    ]
    meta = config.metadata(degree=d, L=L, numeric_routes=["eigenproblem"])
    return ["partition", "norm", "eigenvalues", "coefficients"], rows, meta


def cmd_verify(config: RunConfig) -> Tuple[List[str], Rows, Dict[str, Any]]:
    golden = util.load_golden(config.options["golden"]) if config.options["golden"] else util.load_golden()
    results = verify.run_checks(golden, config.params, config.options["matrix_size"])
    rows: Rows = [(result.name, result.passed, result.detail) for result in results]
    meta = config.metadata(summary=verify.summary(results))
    return ["check", "passed", "detail"], rows, meta


COMMANDS: Dict[str, Callable[[RunConfig], Tuple[List[str], Rows, Dict[str, Any]]]] = {
    "enumerate": cmd_enumerate,
    "moments": cmd_moments,
    "limit-shape": cmd_limit_shape,
    "fluctuations": cmd_fluctuations,
    "sample": cmd_sample,
    "verify": cmd_verify,
    "jack-basis": cmd_jack_basis,
}


def parse_arguments(arguments: List[str]) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--spec",
        default="plancherel",
        help="Specialization JSON file used for both v_out and v_in, or a bundled name. Default is 'plancherel'.",
    )
    common.add_argument("--spec-out", default=None, help="Specialization file for v_out; overrides --spec.")
    common.add_argument("--spec-in", default=None, help="Specialization file for v_in; overrides --spec.")
    common.add_argument("--ebar", type=rational, default=None, help="The deformation ε̄. Default is 0.")
    common.add_argument("--hbar", type=rational, default=Fraction(1), help="The scale ℏ > 0. Default is 1.")
    common.add_argument("--alpha", type=rational, default=None, help="The Jack parameter α; excludes --ebar.")
    common.add_argument(
        "--mode",
        action=EnvVar,
        envvar="JACK_MEASURES_MODE",
        default="exact",
        required=False,
        choices=["exact", "numeric"],
        help="Exact rational arithmetic where possible, or floating point.",
    )
    common.add_argument(
        "--seed", action=EnvVar, envvar="JACK_MEASURES_SEED", default="0", required=False, type=int, help="Seed."
    )
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="Output format. Default is csv.")
    common.add_argument(
        "-o",
        "--out",
        required=False,
        default=sys.stdout,
        type=argparse.FileType("w", encoding="utf-8"),
        help="The output file. If not provided default is stdout.",
    )
    common.add_argument("-v", "--verbose", action="store_true", help="Log debug messages to stderr.")
    common.add_argument(
        "--threads",
        type=positive_int,
        default=os.cpu_count() or 1,
        help="Worker threads for tables built entry by entry; 1 keeps every reduction in canonical order.",
    )

    parser = argparse.ArgumentParser(
        prog="jack-measures",
        description="Moments, limit shapes and fluctuations of Jack measures on partitions.",
        fromfile_prefix_chars="@",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    enumerate_parser = subparsers.add_parser("enumerate", parents=[common], help="Ribbon path tables.")
    enumerate_parser.add_argument("--lengths", nargs="+", type=positive_int, required=True, help="ℓ₁ ... ℓ_n.")
    enumerate_parser.add_argument(
        "--table", choices=["W", "Y", "C", "paths"], default="W", help="Connected, all, counted or listed paths."
    )

    moments_parser = subparsers.add_parser("moments", parents=[common], help="Joint moments by three routes.")
    moments_parser.add_argument("--lengths", nargs="+", type=positive_int, required=True, help="ℓ₁ ... ℓ_n.")
    moments_parser.add_argument("--degree-cutoff", type=int, default=8, help="D for truncated routes.")
    moments_parser.add_argument("--method", choices=["displaced", "truncated"], default="displaced")

    limit_parser = subparsers.add_parser("limit-shape", parents=[common], help="Convex or dispersive profiles.")
    limit_parser.add_argument("--kind", choices=["convex", "dispersive"], default="convex")
    limit_parser.add_argument("--matrix-size", type=positive_int, default=200, help="Lax truncation M.")
    limit_parser.add_argument("--grid-min", type=float, default=-3.0)
    limit_parser.add_argument("--grid-max", type=float, default=3.0)
    limit_parser.add_argument("--grid-points", type=positive_int, default=61)

    fluctuations_parser = subparsers.add_parser("fluctuations", parents=[common], help="Covariances, mean shift.")
    fluctuations_parser.add_argument("--p", type=positive_int, default=4, help="The largest statistic P.")
    fluctuations_parser.add_argument("--table", choices=["covariance", "chebyshev", "mean-shift"], default="covariance")
    fluctuations_parser.add_argument("--covariance-method", choices=["welding", "paths", "bd"], default="paths")

    sample_parser = subparsers.add_parser("sample", parents=[common], help="Exact samples of bounded size.")
    sample_parser.add_argument("--degree-cutoff", type=int, default=8, help="The table cutoff D.")
    sample_parser.add_argument("--count", type=positive_int, default=1000)
    sample_parser.add_argument("--threshold", type=float, default=DEFAULT_TAIL_THRESHOLD, help="Largest tail mass.")

    verify_parser = subparsers.add_parser("verify", parents=[common], help="Run the property suite.")
    verify_parser.add_argument("--golden", default=None, help="Golden values JSON. Default is the bundled file.")
    verify_parser.add_argument("--matrix-size", type=positive_int, default=400, help="Lax truncation M.")

    basis_parser = subparsers.add_parser("jack-basis", parents=[common], help="Normalized Jack polynomials.")
    basis_parser.add_argument("--degree", type=int, required=True, help="The degree d.")
    basis_parser.add_argument("--series-order", type=positive_int, default=8, help="Eigenvalues T_0 .. T_L.")

    args = parser.parse_args(arguments)
    if args.alpha is not None and args.ebar is not None:
        parser.error("argument --alpha: not allowed with argument --ebar")
    if args.ebar is None:
        args.ebar = Fraction(0)
    return args


def run(arguments: List[str]) -> int:
    """
    Parses the arguments, runs one subcommand and writes its table.

    Returns:
        0 on success, 1 on a failed verification, 2 on invalid input and 3 on a numerical consistency error.
    """
    args = parse_arguments(arguments)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = RunConfig.from_namespace(args)
        header, rows, meta = COMMANDS[config.command](config)
        output.emit(args.out, config.fmt, header, rows, meta)
        if config.command == "verify" and not all(row[1] for row in rows):
            raise exceptions.VerificationError(meta["summary"])
    except exceptions.VerificationError as e:
        print(f"jack-measures: verification failed: {e}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (
        exceptions.InconsistencyError,
        exceptions.TruncationError,
        exceptions.PoleProximityError,
        exceptions.DegenerateSpectrumError,
    ) as e:
        print(f"jack-measures: numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except exceptions.JackMeasuresError as e:
        print(f"jack-measures: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if args.out is not sys.stdout:
            args.out.close()
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
