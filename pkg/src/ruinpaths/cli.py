"""Command-line surface: counting tables, probability queries, convergence
traces, the verification suites, simulation, and path dumps.

Exit codes: 0 success, 1 a verification identity failed, 2 bad input or
usage, 3 a series evaluation did not converge (its lower bound is still
printed).  Stdout carries data, stderr carries diagnostics.  The default
simulation seed comes from the RUINPATHS_SEED environment variable when the
--seed flag is absent.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from . import combinatorics, paths, probability, simulator

ENV_SEED = "RUINPATHS_SEED"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3

FORMATS = ("table", "csv", "json")


class CliError(Exception):
    """User-facing input error; rendered to stderr with exit code 2."""


# ---------------------------------------------------------------------------
# input parsing

def parse_probability(text: str) -> probability.StepProbability:
    """Decimal literal or "num/den"; the slash form selects exact
    arithmetic end to end."""
    text = text.strip()
    if "/" in text:
        num_text, _, den_text = text.partition("/")
        try:
            value: probability.StepProbability = Fraction(int(num_text), int(den_text))
        except (ValueError, ZeroDivisionError) as exc:
            raise CliError(f"bad rational probability {text!r}: {exc}") from None
    else:
        try:
            value = float(text)
        except ValueError:
            raise CliError(f"bad probability {text!r}") from None
        if math.isnan(value) or math.isinf(value):
            raise CliError(f"probability must be finite, got {text!r}")
    if not 0 <= value <= 1:
        raise CliError(f"probability must lie in [0, 1], got {text!r}")
    return value


def parse_range(text: str, name: str, minimum: int) -> range:
    """Inclusive "A..B" or a single integer "N"."""
    lo_text, sep, hi_text = text.partition("..")
    try:
        lo = int(lo_text)
        hi = int(hi_text) if sep else lo
    except ValueError:
        raise CliError(f"bad {name} range {text!r}; expected N or A..B") from None
    if lo > hi:
        raise CliError(f"empty {name} range {text!r} (start exceeds end)")
    if lo < minimum:
        raise CliError(f"{name} must be >= {minimum}, got {lo}")
    return range(lo, hi + 1)


def resolve_seed(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(ENV_SEED)
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise CliError(f"{ENV_SEED} must be an integer, got {env!r}") from None


# ---------------------------------------------------------------------------
# output rendering

def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return "inf" if math.isinf(value) else repr(value)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return value


def emit(rows: Sequence[dict[str, Any]], fmt: str, stream: Any = None) -> None:
    stream = stream if stream is not None else sys.stdout
    if not rows:
        return
    columns = list(rows[0])
    if fmt == "json":
        payload: Any = [{k: _jsonable(v) for k, v in row.items()} for row in rows]
        if len(payload) == 1:
            payload = payload[0]
        stream.write(json.dumps(payload, allow_nan=False) + "\n")
    elif fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_value(row[c]) for c in columns])
    else:
        cells = [columns] + [[format_value(row[c]) for c in columns] for row in rows]
        widths = [max(len(line[i]) for line in cells) for i in range(len(columns))]
        for line in cells:
            stream.write(
                "  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip()
                + "\n"
            )


# ---------------------------------------------------------------------------
# subcommand handlers

def cmd_count(args: argparse.Namespace) -> int:
    k_range = parse_range(args.k, "k", 1)
    n_range = parse_range(args.n, "n", 0)
    rows = [
        {"k": k, "n": n, "count": combinatorics.ballot_count(k, n)}
        for k in k_range
        for n in n_range
    ]
    emit(rows, args.format)
    return EXIT_OK


def cmd_prob(args: argparse.Namespace) -> int:
    if args.k < 1:
        raise CliError(f"k must be >= 1, got {args.k}")
    p = parse_probability(args.p)
    method = args.method
    row: dict[str, Any] = {"k": args.k, "p": p, "method": method}
    code = EXIT_OK

    if method == "exact":
        row["value"] = probability.absorption_exact(args.k, p)
    elif method == "gf":
        # Start-1 value from the generating function, lifted to k by the
        # power law.
        try:
            row["value"] = probability.absorption_via_gf(p) ** args.k
        except ValueError as exc:
            raise CliError(str(exc)) from None
    elif method == "series":
        if args.tail <= 0:
            raise CliError(f"--tail must be > 0, got {args.tail}")
        if args.max_terms < 1:
            raise CliError(f"--max-terms must be >= 1, got {args.max_terms}")
        result = probability.absorption_series(
            args.k, p, args.tail, max_terms=args.max_terms
        )
        row["value"] = result.partial_sum
        row["terms_used"] = result.terms_used
        row["tail_bound"] = result.tail_bound
        row["converged"] = result.converged
        if not result.converged:
            code = EXIT_NOT_CONVERGED
    else:  # simulate
        if args.trials < 1:
            raise CliError(f"--trials must be >= 1, got {args.trials}")
        seed = resolve_seed(args.seed)
        try:
            config = simulator.WalkConfig(
                k=args.k, p=p, max_steps=args.max_steps, trials=args.trials, seed=seed
            )
        except ValueError as exc:
            raise CliError(str(exc)) from None
        estimate = simulator.estimate_absorption(config)
        row["value"] = estimate.point
        row["ci_low"] = estimate.ci_low
        row["ci_high"] = estimate.ci_high
        row["absorbed"] = estimate.absorbed
        row["censored"] = estimate.censored
        row["trials"] = config.trials
        row["max_steps"] = config.max_steps
        row["seed"] = seed
        row["is_lower_bound"] = estimate.is_lower_bound

    emit([row], args.format)
    return code


def cmd_converge(args: argparse.Namespace) -> int:
    if args.k < 1:
        raise CliError(f"k must be >= 1, got {args.k}")
    if args.max_terms < 0:
        raise CliError(f"--max-terms must be >= 0, got {args.max_terms}")
    p = parse_probability(args.p)
    q = 1 - p
    pq = p * q
    ratio = 4 * pq
    n0 = probability.tail_start(args.k)
    k = args.k

    rows: list[dict[str, Any]] = []
    term = q**k
    total = 0 * q
    for n in range(args.max_terms + 1):
        total += term
        # The geometric bound is only valid from n0 on, and needs r < 1.
        if ratio < 1 and n >= n0:
            bound: Any = term * ratio / (1 - ratio)
        else:
            bound = "n/a"
        rows.append({"n": n, "term": term, "partial_sum": total, "tail_bound": bound})
        term = term * pq * ((2 * n + k) * (2 * n + k + 1)) / ((n + 1) * (n + k + 1))
    emit(rows, args.format)
    return EXIT_OK


def cmd_dump(args: argparse.Namespace) -> int:
    if args.k < 1:
        raise CliError(f"k must be >= 1, got {args.k}")
    if args.n < 0:
        raise CliError(f"n must be >= 0, got {args.n}")
    try:
        found = paths.enumerate_first_passage(args.k, args.n, cap=args.cap)
    except paths.EnumerationCapError as exc:
        raise CliError(str(exc)) from None
    rows = [{"path": paths.path_to_string(p)} for p in found]
    emit(rows, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites

def _result(suite: str, identity: str, tested: str, failure: str | None) -> dict[str, Any]:
    return {
        "suite": suite,
        "identity": identity,
        "range": tested,
        "status": "FAIL" if failure else "PASS",
        "detail": failure or "",
    }


def _first_failure(pairs: Iterable[tuple[str, bool]]) -> str | None:
    for label, ok in pairs:
        if not ok:
            return label
    return None


def _verify_recurrences(max_k: int, max_n: int, t2_max_n: int) -> list[dict[str, Any]]:
    out = []
    out.append(
        _result(
            "recurrences",
            "recurrence equals closed form",
            f"k=1..{max_k}, n=0..{max_n}",
            _first_failure(
                (
                    f"k={k}, n={n}: "
                    f"{combinatorics.ballot_via_recurrence(k, n)} != "
                    f"{combinatorics.ballot_count(k, n)}",
                    combinatorics.ballot_via_recurrence(k, n)
                    == combinatorics.ballot_count(k, n),
                )
                for k in range(1, max_k + 1)
                for n in range(max_n + 1)
            ),
        )
    )
    out.append(
        _result(
            "recurrences",
            "first-return convolution equals catalan",
            f"n=1..{max_n}",
            _first_failure(
                (
                    f"n={n}",
                    combinatorics.catalan_via_convolution(n) == combinatorics.catalan(n),
                )
                for n in range(1, max_n + 1)
            ),
        )
    )
    out.append(
        _result(
            "recurrences",
            "start-2 counts equal shifted catalan",
            f"n=0..{t2_max_n}",
            _first_failure(
                (
                    f"n={n}",
                    combinatorics.ballot_count(2, n) == combinatorics.catalan(n + 1),
                )
                for n in range(t2_max_n + 1)
            ),
        )
    )
    out.append(
        _result(
            "recurrences",
            "prefactor division is exact",
            f"k=1..{max_k}, n=0..{max_n}",
            _first_failure(
                (
                    f"k={k}, n={n}",
                    combinatorics.ballot_count(k, n) * (2 * n + k)
                    == k * math.comb(2 * n + k, n),
                )
                for k in range(1, max_k + 1)
                for n in range(max_n + 1)
            ),
        )
    )
    out.append(
        _result(
            "recurrences",
            "counts strictly increase in n",
            f"k=1..{max_k}, n=1..{max_n}",
            _first_failure(
                (
                    f"k={k}, n={n}",
                    combinatorics.ballot_count(k, n + 1) > combinatorics.ballot_count(k, n),
                )
                for k in range(1, max_k + 1)
                for n in range(1, max_n + 1)
            ),
        )
    )
    return out


def _verify_oracle(max_k: int, max_len: int, cap: int) -> list[dict[str, Any]]:
    if max_len > cap:
        raise CliError(f"--max-len {max_len} exceeds enumeration cap {cap}")
    failures: list[str] = []
    for k in range(1, max_k + 1):
        for n in range((max_len - k) // 2 + 1):
            found = paths.enumerate_first_passage(k, n, cap=cap)
            expected = combinatorics.ballot_count(k, n)
            serialized = paths.serialize_all(found)
            if len(found) != expected:
                failures.append(f"k={k}, n={n}: {len(found)} paths != C_k(n)={expected}")
            elif len(set(serialized)) != len(found):
                failures.append(f"k={k}, n={n}: duplicate paths emitted")
            elif serialized != sorted(serialized):
                failures.append(f"k={k}, n={n}: canonical order violated")
            if failures:
                break
        if failures:
            break
    return [
        _result(
            "oracle",
            "enumeration count equals ballot count",
            f"k=1..{max_k}, 2n+k<={max_len}",
            failures[0] if failures else None,
        )
    ]


def _verify_bijections(max_n: int, max_len: int, cap: int) -> list[dict[str, Any]]:
    if max_len > cap:
        raise CliError(f"--max-len {max_len} exceeds enumeration cap {cap}")
    out = []

    def shift_ok(n: int) -> bool:
        source = paths.enumerate_first_passage(1, n + 1, cap=cap)
        image = [paths.shift_bijection_k2(p) for p in source]
        target = paths.enumerate_first_passage(2, n, cap=cap)
        round_trip = all(
            paths.LatticePath(1, (paths.Step.RIGHT,) + q.steps) == p
            for p, q in zip(source, image)
        )
        return round_trip and set(paths.serialize_all(image)) == set(
            paths.serialize_all(target)
        )

    out.append(
        _result(
            "bijections",
            "strip-first-step maps start 1 onto start 2",
            f"n=0..{max_n}",
            _first_failure((f"n={n}", shift_ok(n)) for n in range(max_n + 1)),
        )
    )

    def first_return_ok(n: int) -> bool:
        source = paths.enumerate_first_passage(1, n, cap=cap)
        rebuilt = []
        for p in source:
            alpha, left, right = paths.first_return_decompose(p)
            if not 1 <= alpha <= n:
                return False
            if left.right_steps() + right.right_steps() + 1 != n:
                return False
            if paths.first_return_compose(alpha, left, right) != p:
                return False
            rebuilt.append(paths.path_to_string(p))
        return sorted(rebuilt) == sorted(paths.serialize_all(source))

    out.append(
        _result(
            "bijections",
            "first-return decompose/compose round-trip",
            f"n=1..{max_n}",
            _first_failure((f"n={n}", first_return_ok(n)) for n in range(1, max_n + 1)),
        )
    )

    def partition_ok(k: int, n: int) -> bool:
        to_k, to_k_minus_2 = paths.partition_by_first_step(k, n, cap=cap)
        target_k = paths.enumerate_first_passage(k, n, cap=cap)
        target_k2 = paths.enumerate_first_passage(k - 2, n + 1, cap=cap)
        return set(paths.serialize_all(to_k)) == set(
            paths.serialize_all(target_k)
        ) and set(paths.serialize_all(to_k_minus_2)) == set(
            paths.serialize_all(target_k2)
        )

    cases = [
        (k, n)
        for k in range(3, 6)
        for n in range((max_len - (k - 1)) // 2)
        if 2 * (n + 1) + (k - 1) <= max_len
    ]
    out.append(
        _result(
            "bijections",
            "partition by first step splits the level-(k-1) paths",
            f"k=3..5, 2(n+1)+(k-1)<={max_len}",
            _first_failure((f"k={k}, n={n}", partition_ok(k, n)) for k, n in cases),
        )
    )
    return out


_RATIONAL_GRID = (
    Fraction(1, 10),
    Fraction(1, 4),
    Fraction(2, 5),
    Fraction(1, 2),
    Fraction(3, 5),
    Fraction(3, 4),
    Fraction(9, 10),
)
_FLOAT_GRID = (0.1, 0.3, 0.5, 0.6, 0.9)


def _verify_probability() -> list[dict[str, Any]]:
    out = []
    out.append(
        _result(
            "probability",
            "closed form: 1 below 1/2, power law above",
            "k<=64, rational grid",
            _first_failure(
                (
                    f"k={k}, p={p}",
                    probability.absorption_exact(k, p)
                    == probability.absorption_exact(1, p) ** k,
                )
                for p in _RATIONAL_GRID
                for k in range(1, 65)
            ),
        )
    )
    out.append(
        _result(
            "probability",
            "generating function solves its quadratic",
            "z in {0, 0.01, 0.1, 0.2, 0.25}",
            _first_failure(
                (
                    f"z={z}",
                    abs(
                        probability.generating_function(z) ** 2
                        - probability.generating_function(z)
                        + z
                    )
                    <= 1e-14,
                )
                for z in (0.0, 0.01, 0.1, 0.2, 0.25)
            ),
        )
    )
    route_checks = [
        (
            f"p={p}",
            abs(probability.absorption_via_gf(p) - probability.absorption_exact(1, p))
            <= 1e-12,
        )
        for p in _FLOAT_GRID
    ] + [
        (
            f"p={p}",
            probability.absorption_via_gf(p) == probability.absorption_exact(1, p),
        )
        for p in _RATIONAL_GRID
    ]
    out.append(
        _result(
            "probability",
            "generating-function route matches closed form",
            "float grid within 1e-12; rational grid exactly",
            _first_failure(route_checks),
        )
    )
    out.append(
        _result(
            "probability",
            "three-term recurrence",
            "k<=32, rational and float grids",
            _first_failure(
                [
                    (f"k={k}, p={p}", probability.verify_three_term(k, p))
                    for p in _RATIONAL_GRID
                    if 0 < p < 1
                    for k in range(1, 33)
                ]
                + [
                    (f"k={k}, p={p}", probability.verify_three_term(k, p))
                    for p in _FLOAT_GRID
                    if 0 < p < 1
                    for k in range(1, 33)
                ]
            ),
        )
    )

    def series_ok(k: int, p: Fraction) -> bool:
        result = probability.absorption_series(k, p, 1e-12)
        exact = probability.absorption_exact(k, p)
        return (
            result.converged
            and result.terms_used >= probability.tail_start(k) + 1
            and result.tail_bound <= 1e-12
            and result.partial_sum <= exact <= result.partial_sum + result.tail_bound
        )

    out.append(
        _result(
            "probability",
            "series brackets the closed form",
            "k<=5, rational p away from 1/2, tail 1e-12",
            _first_failure(
                (f"k={k}, p={p}", series_ok(k, p))
                for p in _RATIONAL_GRID
                if abs(p - Fraction(1, 2)) >= Fraction(1, 20)
                for k in range(1, 6)
            ),
        )
    )
    near = probability.absorption_series(2, Fraction(1, 2), 1e-12, max_terms=2000)
    out.append(
        _result(
            "probability",
            "near-critical series reports an honest lower bound",
            "k=2, p=1/2, 2000 terms",
            None
            if (not near.converged and near.partial_sum < 1 and math.isinf(near.tail_bound))
            else "expected converged=false with partial_sum < 1",
        )
    )
    return out


def cmd_verify(args: argparse.Namespace) -> int:
    cap = args.cap
    suites = ("recurrences", "bijections", "oracle", "probability")
    chosen = suites if args.suite == "all" else (args.suite,)
    rows: list[dict[str, Any]] = []
    for suite in chosen:
        if suite == "recurrences":
            max_k = args.max_k if args.max_k is not None else 50
            max_n = args.max_n if args.max_n is not None else 200
            t2_max_n = args.max_n if args.max_n is not None else 500
            if max_k < 1 or max_n < 1:
                raise CliError("recurrence bounds must be >= 1")
            rows.extend(_verify_recurrences(max_k, max_n, t2_max_n))
        elif suite == "oracle":
            max_k = args.max_k if args.max_k is not None else 6
            max_len = args.max_len if args.max_len is not None else 18
            if max_k < 1 or max_len < 1:
                raise CliError("oracle bounds must be >= 1")
            rows.extend(_verify_oracle(max_k, max_len, cap))
        elif suite == "bijections":
            max_n = args.max_n if args.max_n is not None else 8
            max_len = args.max_len if args.max_len is not None else 20
            if max_n < 1 or max_len < 4:
                raise CliError("bijection bounds too small to test anything")
            rows.extend(_verify_bijections(max_n, max_len, cap))
        else:
            rows.extend(_verify_probability())
    emit(rows, args.format)
    failed = [r for r in rows if r["status"] == "FAIL"]
    if failed:
        print(
            f"{len(failed)} of {len(rows)} identities failed", file=sys.stderr
        )
        return EXIT_VERIFY_FAILED
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ruinpaths",
        description=(
            "Absorption probabilities of the left-absorbed random walk, "
            "computed exactly, by series, by generating function, and by "
            "simulation, with lattice-path counting behind all of it."
        ),
        epilog=f"Default simulation seed: --seed, else ${ENV_SEED}, else 0.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "--format", choices=FORMATS, default="table", help="output format"
        )

    p_count = sub.add_parser("count", help="exact path-count table C_k(n)")
    p_count.add_argument("--k", required=True, help="start positions, N or A..B")
    p_count.add_argument("--n", required=True, help="right-step counts, N or A..B")
    add_format(p_count)
    p_count.set_defaults(handler=cmd_count)

    p_prob = sub.add_parser("prob", help="absorption probability from start k")
    p_prob.add_argument("--k", type=int, required=True, help="start position")
    p_prob.add_argument("--p", required=True, help='right-step probability, decimal or "num/den"')
    p_prob.add_argument(
        "--method",
        choices=("exact", "series", "gf", "simulate"),
        default="exact",
        help="computation route (gf evaluates start 1 and raises to the k-th power)",
    )
    p_prob.add_argument("--tail", type=float, default=1e-12, help="series tail target")
    p_prob.add_argument(
        "--max-terms",
        type=int,
        default=probability.DEFAULT_MAX_TERMS,
        help="series term budget",
    )
    p_prob.add_argument("--trials", type=int, default=10_000, help="simulation trials")
    p_prob.add_argument(
        "--max-steps", type=int, default=100_000, help="simulation censoring horizon"
    )
    p_prob.add_argument("--seed", type=int, default=None, help="simulation seed")
    add_format(p_prob)
    p_prob.set_defaults(handler=cmd_prob)

    p_sim = sub.add_parser("simulate", help="shorthand for prob --method simulate")
    p_sim.add_argument("--k", type=int, required=True, help="start position")
    p_sim.add_argument("--p", required=True, help='right-step probability, decimal or "num/den"')
    p_sim.add_argument("--trials", type=int, default=10_000, help="simulation trials")
    p_sim.add_argument(
        "--max-steps", type=int, default=100_000, help="censoring horizon"
    )
    p_sim.add_argument("--seed", type=int, default=None, help="simulation seed")
    add_format(p_sim)
    p_sim.set_defaults(handler=cmd_prob, method="simulate")

    p_conv = sub.add_parser("converge", help="per-term series trace")
    p_conv.add_argument("--k", type=int, required=True, help="start position")
    p_conv.add_argument("--p", required=True, help='right-step probability, decimal or "num/den"')
    p_conv.add_argument(
        "--max-terms", type=int, default=20, help="last term index n to print"
    )
    add_format(p_conv)
    p_conv.set_defaults(handler=cmd_converge)

    p_verify = sub.add_parser("verify", help="run the identity suites")
    p_verify.add_argument(
        "suite",
        nargs="?",
        choices=("all", "recurrences", "bijections", "oracle", "probability"),
        default="all",
        help="which suite to run",
    )
    p_verify.add_argument(
        "--max-k",
        type=int,
        default=None,
        help="k bound (default 50 for recurrences, 6 for oracle)",
    )
    p_verify.add_argument(
        "--max-n",
        type=int,
        default=None,
        help="n bound (default 200 for the recurrence grid, 500 for the "
        "start-2 identity, 8 for bijections)",
    )
    p_verify.add_argument(
        "--max-len",
        type=int,
        default=None,
        help="path-length bound 2n+k (default 18 for oracle, 20 for the "
        "partition bijection)",
    )
    p_verify.add_argument(
        "--cap",
        type=int,
        default=paths.DEFAULT_ENUMERATION_CAP,
        help="enumeration cap override",
    )
    add_format(p_verify)
    p_verify.set_defaults(handler=cmd_verify)

    p_dump = sub.add_parser(
        "dump", help="canonical serializations of the enumerated paths"
    )
    p_dump.add_argument("--k", type=int, required=True, help="start position")
    p_dump.add_argument("--n", type=int, required=True, help="right-step count")
    p_dump.add_argument(
        "--cap",
        type=int,
        default=paths.DEFAULT_ENUMERATION_CAP,
        help="enumeration cap override",
    )
    add_format(p_dump)
    p_dump.set_defaults(handler=cmd_dump)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, paths.EnumerationCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
