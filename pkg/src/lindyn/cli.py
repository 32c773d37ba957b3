"""Batch experiment runner with deterministic JSON/CSV reports.

Subcommands: epsilon | witness | classify | extract | disk.  Exit codes:
0 success, 2 configuration error, 3 inconclusive outcome (witness cap or
extraction failure), with the partial report still written.  Identical
configurations and seeds produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from typing import Any

import numpy as np

from . import __version__
from .diskdyn import AnalyticFn, DiskAutomorphism, Polynomial, obstruction_report
from .epsilon import epsilon_estimate
from .extract import MatrixOp, extract_subsequence
from .seqspace import SeqVector, Space
from .serialize import complex_str, csv_bytes, finite_or_string, json_bytes, parse_complex, vector_payload
from .shiftops import BackwardShift, ExhaustedTail, WeightSeq
from .strongdyn import classify, strong_hc_witness

log = logging.getLogger("lindyn")

_FORMULA_RATIONAL = re.compile(r"^([0-9.eE+-]+?)([+-])([0-9.eE]+)/n$")


class ConfigError(ValueError):
    """Invalid command-line configuration (exit code 2)."""


def parse_weights(spec: str, tail_spec: str | None) -> WeightSeq:
    """Weight specs: const:V | table:v1,v2,... (+ --tail) | formula:... .

    Formulas come from a whitelist (constant, a+b/n monotone rationals,
    geometric) so the exact infimum stays certifiable; arbitrary expressions
    are rejected.
    """
    try:
        kind, _, body = spec.partition(":")
        if kind == "const":
            if tail_spec is not None:
                raise ConfigError("--tail only applies to table: weights")
            return WeightSeq.constant(float(body))
        if kind == "table":
            values = [float(v) for v in body.split(",") if v]
            if not values:
                raise ConfigError("empty weight table")
            if tail_spec is None:
                raise ConfigError("table: weights require --tail (const:V or error)")
            if tail_spec == "error":
                return WeightSeq.table(values)
            tkind, _, tbody = tail_spec.partition(":")
            if tkind == "const":
                return WeightSeq.table(values, float(tbody))
            raise ConfigError(f"unknown tail spec {tail_spec!r}")
        if kind == "formula":
            if tail_spec is not None:
                raise ConfigError("--tail only applies to table: weights")
            if body.startswith("geometric:"):
                parts = body[len("geometric:"):].split(",")
                if len(parts) != 2:
                    raise ConfigError("geometric formula needs scale,ratio")
                return WeightSeq.geometric(float(parts[0]), float(parts[1]))
            m = _FORMULA_RATIONAL.match(body.replace(" ", ""))
            if m:
                base = float(m.group(1))
                slope = float(m.group(3))
                if m.group(2) == "-":
                    slope = -slope
                return WeightSeq.rational(base, slope)
            try:
                return WeightSeq.constant(float(body))
            except ValueError:
                raise ConfigError(
                    f"formula {body!r} is not whitelisted (use a constant, a+b/n, or geometric:a,q)"
                ) from None
        raise ConfigError(f"unknown weight spec {spec!r}")
    except (ValueError, TypeError) as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError(f"bad weight spec {spec!r}: {err}") from err


def parse_vector(spec: str, space: Space, dim: int | None = None,
                 rng: np.random.Generator | None = None) -> SeqVector:
    spec = spec.strip()
    if spec == "0":
        return SeqVector.zero(space)
    if spec == "random":
        if rng is None or dim is None:
            raise ConfigError("random vectors need --seed and a matrix operator")
        values = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        v = SeqVector.from_values(space, values)
        return (1.0 / v.norm()) * v
    m = re.fullmatch(r"e(\d+)", spec)
    if m:
        return SeqVector.basis(space, int(m.group(1)))
    try:
        values = [parse_complex(part) for part in spec.split(",")]
    except ValueError as err:
        raise ConfigError(f"bad vector spec {spec!r}: {err}") from err
    return SeqVector.from_values(space, values)


def parse_automorphism(spec: str) -> DiskAutomorphism:
    theta = 0.0
    alpha = 0j
    try:
        for part in spec.split(","):
            key, _, value = part.partition("=")
            key = key.strip()
            if key == "theta":
                theta = float(value)
            elif key == "alpha":
                alpha = parse_complex(value)
            else:
                raise ConfigError(f"unknown automorphism field {key!r}")
        return DiskAutomorphism(theta, alpha)
    except (ValueError, TypeError) as err:
        if isinstance(err, ConfigError):
            raise
        raise ConfigError(f"bad automorphism spec {spec!r}: {err}") from err


def parse_weight_fn(spec: str) -> AnalyticFn:
    kind, _, body = spec.partition(":")
    try:
        if kind == "const":
            return Polynomial((parse_complex(body),))
        if kind == "poly":
            return Polynomial(tuple(parse_complex(part) for part in body.split(",")))
    except ValueError as err:
        raise ConfigError(f"bad weight function {spec!r}: {err}") from err
    raise ConfigError(f"unknown weight function spec {spec!r} (use const:V or poly:c0,c1,...)")


def parse_matrix(spec: str, rng: np.random.Generator | None) -> np.ndarray:
    m = re.fullmatch(r"random:(\d+)", spec)
    if m:
        if rng is None:
            raise ConfigError("random matrices need --seed")
        d = int(m.group(1))
        return (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2 * d)
    try:
        rows = [[parse_complex(v) for v in row.split(",")] for row in spec.split(";")]
    except ValueError as err:
        raise ConfigError(f"bad matrix spec {spec!r}: {err}") from err
    mat = np.array(rows, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ConfigError(f"matrix spec {spec!r} is not square")
    return mat


def _space(text: str) -> Space:
    try:
        return Space.parse(text)
    except ValueError as err:
        raise ConfigError(str(err)) from err


# ---------------------------------------------------------------------------
# Subcommand runners: each returns (result_payload, exit_code).


def _run_epsilon(args) -> tuple[dict[str, Any], int]:
    weights = parse_weights(args.weights, args.tail)
    space = _space(args.space)
    shift = BackwardShift(weights, space)
    n = args.N
    if n is None:
        n = 1000
        if isinstance(weights.tail, ExhaustedTail):
            n = min(n, len(weights.prefix))
    elif isinstance(weights.tail, ExhaustedTail) and n > len(weights.prefix):
        raise ConfigError(
            f"--N {n} exceeds the {len(weights.prefix)}-entry table and the tail errors"
        )
    if args.R > 0 and args.seed is None:
        raise ConfigError("--seed is mandatory when random directions are requested")
    report = epsilon_estimate(shift, n, args.R, args.seed or 0, args.tol)
    payload = {
        "closedForm": report.closed_form,
        "infAttained": report.inf_attained,
        "estimate": report.estimate,
        "coordDirectionsScanned": report.coord_directions,
        "randomDirections": report.random_directions,
        "witnessOutside": vector_payload(report.witness_outside),
        "witnessDirection": report.witness_direction,
        "seed": report.seed,
    }
    return payload, 0


def _run_classify(args) -> tuple[dict[str, Any], int]:
    shift = BackwardShift(parse_weights(args.weights, args.tail), _space(args.space))
    c = classify(shift)
    payload = {
        "surjective": c.surjective,
        "denseGeneralizedKernel": c.dense_generalized_kernel,
        "stronglySupercyclic": c.strongly_supercyclic,
        "scalarThreshold": finite_or_string(c.scalar_threshold),
    }
    return payload, 0


def _run_witness(args) -> tuple[dict[str, Any], int]:
    space = _space(args.space)
    shift = BackwardShift(parse_weights(args.weights, args.tail), space)
    c = parse_complex(args.c)
    target = parse_vector(args.target, space)
    center = parse_vector(args.center, space)
    if target.is_zero:
        raise ConfigError("the target vector must be nonzero")
    if not args.radius > 0:
        raise ConfigError("--radius must be positive")
    search = strong_hc_witness(shift, c, center, args.radius, target, args.ncap)
    payload: dict[str, Any] = {
        "status": search.status,
        "scalarMagnitude": search.scalar_magnitude,
        "threshold": finite_or_string(search.threshold),
        "nCap": search.n_cap,
        "n": search.witness.n if search.witness else None,
        "u": vector_payload(search.witness.u) if search.witness else None,
        "residual": search.witness.residual if search.witness else None,
        "reason": search.reason,
    }
    return payload, 0 if search.status == "found" else 3


def _run_extract(args) -> tuple[dict[str, Any], int]:
    space = _space(args.space)
    rng = np.random.default_rng(args.seed) if args.seed is not None else None
    if args.op == "shift":
        if args.weights is None:
            raise ConfigError("--weights is required for shift operators")
        op = BackwardShift(parse_weights(args.weights, args.tail), space)
        dim = None
    else:
        if args.matrix is None:
            raise ConfigError("--matrix is required for matrix operators")
        op = MatrixOp(parse_matrix(args.matrix, rng), space)
        dim = op.dim
    x = parse_vector(args.x, space, dim, rng)
    trace = extract_subsequence(op, x, args.K, args.search_cap, args.eta, args.margin, args.tol)
    payload = {
        "status": trace.status,
        "scale": trace.scale,
        "x": vector_payload(trace.x) if trace.x is not None else None,
        "exponents": list(trace.exponents),
        "stepDistances": list(trace.step_distances),
        "finalDistance": trace.final_distance,
        "requestedTerms": trace.requested_terms,
        "searchCap": trace.search_cap,
        "eta": trace.eta,
        "margin": trace.margin,
        "failure": trace.failure,
    }
    return payload, 0 if trace.status == "completed" else 3


def _run_disk(args) -> tuple[dict[str, Any], int]:
    phi = parse_automorphism(args.phi)
    weight = parse_weight_fn(args.w)
    if phi.is_identity:
        raise ConfigError("the identity automorphism is unsupported")
    report = obstruction_report(weight, phi, args.N, args.M)
    payload = {
        "case": report.case,
        "targetValue": report.target_value,
        "gap": report.gap,
        "certifiedUpTo": report.certified_up_to,
        "maxAbsValue": report.max_abs_value,
        "values": [complex_str(v) for v in report.values],
        "offendingPoint": complex_str(report.offending_point) if report.offending_point is not None else None,
        "fixedPoint": complex_str(report.fixed_point) if report.fixed_point is not None else None,
        "symbolClass": report.symbol_class,
        "denjoyWolff": complex_str(report.denjoy_wolff) if report.denjoy_wolff is not None else None,
        "orbitPoints": [complex_str(p) for p in report.orbit_points] if report.orbit_points is not None else None,
        "note": report.note,
    }
    return payload, 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lindyn",
        description="Deterministic experiments in linear dynamics on sequence spaces and the disk.",
    )
    parser.add_argument("--version", action="version", version=f"lindyn {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", default="-", help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=None, help="RNG seed (mandatory for randomized runs)")
        p.add_argument("--tol", type=float, default=1e-9, help="numerical tolerance")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    def shift_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--weights", help="const:V | table:v1,v2,... | formula:a+b/n | formula:geometric:a,q")
        p.add_argument("--tail", default=None, help="tail for table: weights (const:V or error)")
        p.add_argument("--space", default="l2", help="l1, l2, l3, ..., or c0")

    p = sub.add_parser("epsilon", help="closed form vs ray-sweep estimate of the unit-ball gap")
    shift_flags(p)
    p.add_argument("--N", type=int, default=None, help="coordinate directions to scan")
    p.add_argument("--R", type=int, default=0, help="random adversarial directions")
    common(p)

    p = sub.add_parser("classify", help="surjectivity / strong supercyclicity / scalar threshold")
    shift_flags(p)
    common(p)

    p = sub.add_parser("witness", help="constructive strong-hypercyclicity witness for c*B")
    shift_flags(p)
    p.add_argument("--c", required=True, help="scalar multiplier (complex, e.g. 2 or 1+0.5i)")
    p.add_argument("--target", required=True, help="target vector v (e.g. e0 or 1,0.5)")
    p.add_argument("--center", default="0", help="neighborhood center u0")
    p.add_argument("--radius", type=float, required=True, help="neighborhood radius r")
    p.add_argument("--ncap", type=int, default=200, help="largest exponent to try")
    common(p)

    p = sub.add_parser("extract", help="greedy orbit-exponent extraction with certificate")
    p.add_argument("--op", choices=("shift", "matrix"), required=True)
    shift_flags(p)
    p.add_argument("--matrix", default=None, help="random:D or rows 'a,b;c,d'")
    p.add_argument("--x", required=True, help="start vector (e.g. '1.5,1.5', e0, random)")
    p.add_argument("--K", type=int, required=True, help="number of exponents to extract")
    p.add_argument("--search-cap", type=int, default=10_000)
    p.add_argument("--eta", type=float, default=0.5)
    p.add_argument("--margin", type=float, default=1e-9)
    common(p)

    p = sub.add_parser("disk", help="obstruction witnesses for weighted composition operators")
    p.add_argument("--phi", required=True, help="automorphism, e.g. 'theta=0,alpha=0.5'")
    p.add_argument("--w", required=True, help="weight function, const:V or poly:c0,c1,...")
    p.add_argument("--N", type=int, default=50, help="orbit powers for elliptic/weight-zero cases")
    p.add_argument("--M", type=int, default=20, help="orbit length for the boundary case")
    common(p)

    return parser


_RUNNERS = {
    "epsilon": _run_epsilon,
    "classify": _run_classify,
    "witness": _run_witness,
    "extract": _run_extract,
    "disk": _run_disk,
}


def _config_echo(args: argparse.Namespace) -> dict[str, Any]:
    skip = {"command", "out", "format"}
    echo = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return echo


def _write(out: str, data: bytes) -> None:
    if out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        with open(out, "wb") as fh:
            fh.write(data)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("LINDYN_LOG", "WARNING").upper())
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, code = _RUNNERS[args.command](args)
    except ConfigError as err:
        print(f"lindyn: configuration error: {err}", file=sys.stderr)
        return 2
    payload = {
        "tool": "lindyn",
        "version": __version__,
        "command": args.command,
        "config": _config_echo(args),
        "result": result,
    }
    data = json_bytes(payload) if args.format == "json" else csv_bytes(payload)
    _write(args.out, data)
    log.info("wrote %d bytes (%s report)", len(data), args.command)
    return code


if __name__ == "__main__":
    sys.exit(main())
