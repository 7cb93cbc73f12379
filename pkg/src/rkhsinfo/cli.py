"""Command-line front end.

Every command reads CSV input, runs one library operation and prints a
result document (JSON by default) on stdout. Exit status is 0 on success,
1 for invalid input and 2 for numerical failures; the error message goes
to stderr.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from .exceptions import InvalidInputError, NumericalFailureError
from .info_discrete import (
    KNGenerator,
    LogBase,
    conditional_entropy,
    joint_entropy,
    kl_divergence,
    kn_mean,
    marginals,
    mutual_information,
    renyi_entropy,
    shannon_entropy,
    tsallis_entropy,
)
from .io import read_joint, read_pmf, read_sample
from .kernels import KernelSpec, gram_matrix, psd_check
from .l2_geometry import central_moment, moment_tensor, ols_fit, standardized_moment
from .prob_core import sample_mean, sample_variance
from .rkhs import BandwidthSpec, kde_density, mmd_squared, renyi2_entropy_estimate

DEFAULT_SEED = 42
SEED_ENV = "RKHSINFO_SEED"
HELP_WIDTH = 88

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2

COMMANDS = {
    "gram": "Gram matrix of a sample",
    "psd": "positive-semidefiniteness check of a Gram (or given) matrix",
    "kde": "Gaussian kernel density estimate",
    "entropy-discrete": "Shannon/Renyi/Tsallis entropy, KL, or joint-table measures",
    "renyi2": "kernel estimate of the order-2 Renyi entropy",
    "mmd": "squared maximum mean discrepancy between two samples",
    "regress": "ordinary least squares (last column is the response)",
    "moments": "sample moments or a centered moment tensor",
    "knmean": "Kolmogorov-Nagumo mean of a numeric pmf",
}


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with the invalid-input exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _formatter(prog):
    return argparse.RawDescriptionHelpFormatter(prog, width=HELP_WIDTH)


def _parse_seed(text):
    try:
        seed = int(text)
    except (TypeError, ValueError):
        raise argparse.ArgumentTypeError(f"seed must be an unsigned integer, got {text!r}")
    if seed < 0:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned integer, got {text!r}")
    return seed


def _parse_base(text):
    try:
        return LogBase.coerce(text)
    except InvalidInputError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_common(p):
    p.add_argument("--output", choices=("json", "tsv"), default="json",
                   help="result format (default: json)")
    p.add_argument("--seed", type=_parse_seed, default=None,
                   help=f"random seed (default: ${SEED_ENV} or {DEFAULT_SEED})")


def _add_kernel(p):
    p.add_argument("--kernel", choices=("linear", "poly", "gaussian", "laplacian"),
                   default="gaussian", help="kernel family (default: gaussian)")
    p.add_argument("--sigma", type=float, default=1.0,
                   help="gaussian/laplacian bandwidth (default: 1.0)")
    p.add_argument("--degree", type=int, default=2, help="polynomial degree (default: 2)")
    p.add_argument("--c", type=float, default=0.0, help="polynomial offset (default: 0.0)")


def _add_base(p):
    p.add_argument("--base", type=_parse_base, default=LogBase(),
                   help="logarithm base: 2, e or a positive real (default: e)")


def build_parser():
    parser = _Parser(
        prog="rkhsinfo",
        description="Kernel, RKHS and information-theoretic estimators on CSV data.",
        formatter_class=_formatter,
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def add(name):
        p = sub.add_parser(name, help=COMMANDS[name], description=COMMANDS[name],
                           formatter_class=_formatter)
        return p

    p = add("gram")
    p.add_argument("sample", help="sample CSV (one point per row)")
    _add_kernel(p)
    _add_common(p)

    p = add("psd")
    p.add_argument("sample", help="sample CSV, or a square matrix CSV with --matrix")
    p.add_argument("--matrix", action="store_true", help="input is already a symmetric matrix")
    p.add_argument("--tol", type=float, default=None,
                   help="eigenvalue tolerance (default: 1e-8 * N * max(1, max diag))")
    p.add_argument("--method", choices=("eigen", "probe"), default="eigen",
                   help="eigen-solver or seeded random quadratic-form probes (default: eigen)")
    _add_kernel(p)
    _add_common(p)

    p = add("kde")
    p.add_argument("sample", help="sample CSV")
    p.add_argument("--bandwidth", default="1.0", help="<real> or silverman (default: 1.0)")
    p.add_argument("--points", default=None,
                   help="CSV of query points (default: the sample itself)")
    _add_common(p)

    p = add("entropy-discrete")
    p.add_argument("pmf", help="pmf CSV (label,prob) or joint table with --joint")
    p.add_argument("reference", nargs="?", default=None,
                   help="second pmf CSV; adds KL(pmf || reference)")
    p.add_argument("--joint", action="store_true", help="input is a joint pmf table")
    _add_base(p)
    p.add_argument("--alpha", type=float, default=None, help="also report Renyi entropy of this order")
    p.add_argument("--q", type=float, default=None, help="also report Tsallis entropy of this index")
    _add_common(p)

    p = add("renyi2")
    p.add_argument("sample", help="sample CSV")
    p.add_argument("--sigma", type=float, default=1.0, help="KDE bandwidth (default: 1.0)")
    _add_base(p)
    _add_common(p)

    p = add("mmd")
    p.add_argument("sample_x", help="first sample CSV")
    p.add_argument("sample_y", help="second sample CSV")
    p.add_argument("--variant", choices=("biased", "unbiased"), default="biased",
                   help="V-statistic (biased) or U-statistic (unbiased) (default: biased)")
    _add_kernel(p)
    _add_common(p)

    p = add("regress")
    p.add_argument("data", help="CSV with predictor columns followed by the response column")
    _add_common(p)

    p = add("moments")
    p.add_argument("sample", help="sample CSV")
    p.add_argument("--order", type=int, default=None,
                   help="central moment (d=1) or moment tensor (d>1) order (tensor default: 2)")
    _add_common(p)

    p = add("knmean")
    p.add_argument("pmf", help="pmf CSV whose labels are the numeric values")
    p.add_argument("--generator", choices=("identity", "power", "exponential"),
                   default="identity", help="generator family (default: identity)")
    p.add_argument("--rho", type=float, default=1.0, help="power-generator exponent (default: 1.0)")
    p.add_argument("--rate", type=float, default=1.0,
                   help="exponential-generator rate (default: 1.0)")
    _add_common(p)

    synopsis = []
    for name in COMMANDS:
        usage = sub.choices[name].format_usage().rstrip().splitlines()
        synopsis.append("  " + usage[0][len("usage: "):])
        synopsis.extend("  " + line[len("usage: "):] for line in usage[1:])
    parser.epilog = (
        "command synopsis:\n" + "\n".join(synopsis)
        + f"\n\nexit status: {EXIT_OK} success, {EXIT_INVALID} invalid input, "
        f"{EXIT_NUMERICAL} numerical failure.\n${SEED_ENV} sets the seed when --seed is absent."
    )
    return parser


def _kernel_from(args):
    family = "polynomial" if args.kernel == "poly" else args.kernel
    return KernelSpec(family, sigma=args.sigma, c=args.c, degree=args.degree)


def _kernel_echo(k):
    return {"kernel": k.family, **{key: v for key, v in k.params().items() if key != "normalize"}}


def _base_echo(b):
    if b.base == math.e:
        return "e"
    return b.base


def _cmd_gram(args, warnings):
    k = _kernel_from(args)
    X = read_sample(args.sample)
    return _kernel_echo(k), {"n": X.shape[0], "gram": gram_matrix(k, X)}


def _cmd_psd(args, warnings):
    params = {"matrix": args.matrix, "method": args.method}
    if args.matrix:
        K = read_sample(args.sample)
    else:
        k = _kernel_from(args)
        params.update(_kernel_echo(k))
        K = gram_matrix(k, read_sample(args.sample))
    report = psd_check(K, tol=args.tol, method=args.method, random_state=args.seed)
    if args.method == "probe":
        warnings.append("probe method gives an upper bound on the minimum eigenvalue")
    return params, {
        "min_eigenvalue": report.min_eigenvalue,
        "is_psd": report.is_psd,
        "tol": report.tol,
    }


def _cmd_kde(args, warnings):
    X = read_sample(args.sample)
    bw = BandwidthSpec.coerce(args.bandwidth)
    sigma = bw.resolve(X)
    Q = X if args.points is None else read_sample(args.points)
    dens = kde_density(X, BandwidthSpec("fixed", sigma), Q)
    params = {"bandwidth": bw.mode if bw.mode == "silverman" else bw.sigma}
    return params, {"sigma": sigma, "points": Q, "density": dens}


def _cmd_entropy(args, warnings):
    b = args.base
    params = {"base": _base_echo(b), "joint": args.joint}
    if args.joint:
        if args.reference is not None:
            raise InvalidInputError("KL reference is not supported together with --joint")
        j = read_joint(args.pmf)
        px, py = marginals(j)
        return params, {
            "joint_entropy": joint_entropy(j, b),
            "entropy_x": shannon_entropy(px, b),
            "entropy_y": shannon_entropy(py, b),
            "conditional_entropy": conditional_entropy(j, b),
            "mutual_information": mutual_information(j, b),
        }
    p = read_pmf(args.pmf)
    results = {"entropy": shannon_entropy(p, b)}
    if args.alpha is not None:
        params["alpha"] = args.alpha
        results["renyi"] = renyi_entropy(p, args.alpha, b)
    if args.q is not None:
        params["q"] = args.q
        results["tsallis"] = tsallis_entropy(p, args.q)
        warnings.append("tsallis entropy does not depend on --base")
    if args.reference is not None:
        results["kl"] = kl_divergence(p, read_pmf(args.reference), b)
    return params, results


def _cmd_renyi2(args, warnings):
    X = read_sample(args.sample)
    params = {"sigma": args.sigma, "base": _base_echo(args.base)}
    return params, {"renyi2_entropy": renyi2_entropy_estimate(X, args.sigma, args.base)}


def _cmd_mmd(args, warnings):
    k = _kernel_from(args)
    X = read_sample(args.sample_x)
    Y = read_sample(args.sample_y)
    params = {**_kernel_echo(k), "variant": args.variant}
    return params, {"mmd2": mmd_squared(X, Y, k, args.variant)}


def _cmd_regress(args, warnings):
    data = read_sample(args.data)
    if data.shape[1] < 2:
        raise InvalidInputError("regress needs at least one predictor column and a response column")
    fit = ols_fit(data[:, :-1], data[:, -1])
    if data.shape[0] < data.shape[1] + 1:
        warnings.append("fewer observations than predictors + 2")
    return {}, {
        "betas": fit.betas,
        "intercept": fit.intercept,
        "mean_y": fit.mean_y,
        "residual_norm": fit.residual_norm,
    }


def _cmd_moments(args, warnings):
    X = read_sample(args.sample)
    params = {"order": args.order}
    if X.shape[1] == 1:
        results = {"mean": float(sample_mean(X)[0]), "variance": float(sample_variance(X)[0])}
        if results["variance"] > 0:
            results["skewness"] = standardized_moment(X, 3)
            results["kurtosis"] = standardized_moment(X, 4)
        else:
            warnings.append("zero variance: skewness and kurtosis undefined")
        if args.order is not None:
            results["central_moment"] = central_moment(X, args.order)
        return params, results
    order = 2 if args.order is None else args.order
    params["order"] = order
    return params, {"mean": sample_mean(X), "tensor": moment_tensor(X, order)}


def _cmd_knmean(args, warnings):
    p = read_pmf(args.pmf)
    try:
        values = [float(v) for v in p.outcomes]
    except ValueError:
        raise InvalidInputError("knmean needs numeric labels (the values being averaged)") from None
    param = {"identity": 1.0, "power": args.rho, "exponential": args.rate}[args.generator]
    g = KNGenerator(args.generator, param)
    params = {"generator": args.generator}
    if args.generator != "identity":
        params["rho" if args.generator == "power" else "rate"] = param
    return params, {"kn_mean": kn_mean(values, p, g)}


_HANDLERS = {
    "gram": _cmd_gram,
    "psd": _cmd_psd,
    "kde": _cmd_kde,
    "entropy-discrete": _cmd_entropy,
    "renyi2": _cmd_renyi2,
    "mmd": _cmd_mmd,
    "regress": _cmd_regress,
    "moments": _cmd_moments,
    "knmean": _cmd_knmean,
}


def _plain(value):
    """Convert results to JSON-ready builtins; non-finite floats become strings."""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return _plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v + 0.0
    return value


def render(document, mode="json"):
    """Serialize a result document.

    JSON floats use Python's shortest round-trip repr, which never needs
    more than 17 significant digits.
    """
    if mode == "json":
        return json.dumps(document, allow_nan=False) + "\n"
    lines = []

    def emit(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                emit(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list) and value and isinstance(value[0], list):
            for i, row in enumerate(value):
                emit(f"{prefix}[{i}]", row)
        elif isinstance(value, list):
            lines.append("\t".join([prefix] + [json.dumps(v) for v in value]))
        else:
            lines.append(f"{prefix}\t{json.dumps(value)}")

    emit("", document)
    return "\n".join(lines) + "\n"


def resolve_seed(flag_value, environ=None):
    if flag_value is not None:
        return flag_value
    environ = os.environ if environ is None else environ
    text = environ.get(SEED_ENV)
    if text is None or text == "":
        return DEFAULT_SEED
    try:
        return _parse_seed(text)
    except argparse.ArgumentTypeError as exc:
        raise InvalidInputError(f"{SEED_ENV}: {exc}") from None


def run(args):
    """Execute parsed arguments; returns ``(document, exit_code, error_message)``."""
    warnings = []
    try:
        args.seed = resolve_seed(args.seed)
        params, results = _HANDLERS[args.command](args, warnings)
    except (InvalidInputError, ValueError) as exc:
        return None, EXIT_INVALID, str(exc)
    except (NumericalFailureError, ArithmeticError, np.linalg.LinAlgError) as exc:
        return None, EXIT_NUMERICAL, str(exc)
    document = {
        "command": args.command,
        "parameters": {**params, "seed": args.seed},
        "results": results,
        "warnings": warnings,
    }
    return _plain(document), EXIT_OK, None


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    document, code, message = run(args)
    if code != EXIT_OK:
        print(f"rkhsinfo {args.command}: error: {message}", file=sys.stderr)
        return code
    sys.stdout.write(render(document, args.output))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
