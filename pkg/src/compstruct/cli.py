"""Batch command-line front end.

Subcommands: cpf, sample, check, reconstruct, arrange, fragment.  Parameters
given as "p/q" fractions keep the whole run exact; decimals force float
mode.  Exit codes: 0 success, 1 failed check, 2 invalid parameters, 3
enumeration cap exceeded, 4 reconstruction infeasible.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import tables
from .composition import MAX_ENUM_N, Composition, Partition, enumerate_compositions
from .laws import (DecrementMatrix, DecrementMatrixPair, ewens_cpf, markov_cpf,
                   renewal_cpf, two_param_q, two_param_stationary_pair)
from .ratmath import parse_scalar
from .stochastic import (RngStream, batch_arrangements, batch_ewens_strings,
                         batch_markov_compositions, batch_poisson_construction,
                         batch_renewal_strings, batch_uniform_construction,
                         codes_to_counts)
from .structural import ReconstructionError, reconstruct_markov, StructuralMoments
from .verify import (check_decrement_recursions, check_right_consistency,
                     check_theorem_SL, check_uniform_consistency)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_PARAMS = 2
EXIT_CAP_EXCEEDED = 3
EXIT_RECONSTRUCTION = 4

FAMILIES = ("ewens", "renewal", "renewal-reversed", "two-param", "markov-table")


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _scalar(text):
    if text is None:
        return None
    try:
        return parse_scalar(text)
    except (ValueError, ZeroDivisionError):
        raise CliError(f"cannot parse scalar {text!r}", EXIT_BAD_PARAMS)


def _check_cap(n):
    if n > MAX_ENUM_N:
        raise CliError(f"n = {n} exceeds the enumeration cap {MAX_ENUM_N}",
                       EXIT_CAP_EXCEEDED)


def build_cpf(family, alpha, theta, matrix_file=None):
    try:
        if family == "ewens":
            if theta is None:
                raise CliError("ewens needs --theta", EXIT_BAD_PARAMS)
            return ewens_cpf(theta)
        if family == "renewal":
            if alpha is None:
                raise CliError("renewal needs --alpha", EXIT_BAD_PARAMS)
            return renewal_cpf(alpha)
        if family == "renewal-reversed":
            if alpha is None:
                raise CliError("renewal-reversed needs --alpha", EXIT_BAD_PARAMS)
            return renewal_cpf(alpha, reversed_=True)
        if family == "two-param":
            if alpha is None or theta is None:
                raise CliError("two-param needs --alpha and --theta", EXIT_BAD_PARAMS)
            return markov_cpf(two_param_stationary_pair(alpha, theta))
        if family == "markov-table":
            if matrix_file is None:
                raise CliError("markov-table needs --matrix-file", EXIT_BAD_PARAMS)
            return markov_cpf(load_matrix_pair(matrix_file))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_BAD_PARAMS) from exc
    raise CliError(f"unknown family {family!r}", EXIT_BAD_PARAMS)


def build_pair(family, alpha, theta, matrix_file=None) -> DecrementMatrixPair:
    try:
        if family == "two-param":
            return two_param_stationary_pair(alpha, theta)
        if family == "markov-table":
            return load_matrix_pair(matrix_file)
    except (ValueError, TypeError) as exc:
        raise CliError(str(exc), EXIT_BAD_PARAMS) from exc
    raise CliError(f"family {family!r} has no decrement-matrix form",
                   EXIT_BAD_PARAMS)


def load_matrix_pair(path) -> DecrementMatrixPair:
    """Read 'kind n r value' lines with kind in {q, q*}."""
    entries = {"q": {}, "q*": {}}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        kind, n, r, value = line.split()
        entries[kind][(int(n), int(r))] = tables.parse_value(value)

    def make(kind):
        table = entries[kind]

        def entry(n, r):
            try:
                return table[(n, r)]
            except KeyError:
                raise ValueError(f"matrix file lacks {kind}({n}:{r})") from None

        return DecrementMatrix(f"{kind}[{path}]", entry)

    return DecrementMatrixPair(q=make("q"), qstar=make("q*"), label=f"table[{path}]")


def _emit(args, text_lines, tree):
    body = tables.to_json(tree) if args.format == "json" else "\n".join(text_lines)
    if args.output:
        out = Path(args.output)
        if not out.is_absolute() and os.environ.get("COMPSTRUCT_OUTDIR"):
            out = Path(os.environ["COMPSTRUCT_OUTDIR"]) / out
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(body + "\n")
    else:
        print(body)


# ---------------------------------------------------------------------------
# subcommands


def cmd_cpf(args):
    _check_cap(args.n)
    cpf = build_cpf(args.family, _scalar(args.alpha), _scalar(args.theta),
                    args.matrix_file)
    _emit(args, tables.cpf_table_lines(cpf, args.n), tables.cpf_table_tree(cpf, args.n))
    return EXIT_OK


def cmd_sample(args):
    _check_cap(args.n)
    alpha, theta = _scalar(args.alpha), _scalar(args.theta)
    stream = RngStream(seed=args.seed, stream=args.stream)
    try:
        if args.family == "ewens":
            if args.method == "uniform-set":
                codes = batch_uniform_construction(theta, args.n, args.draws, stream)
            elif args.method == "poisson-set":
                codes = batch_poisson_construction(theta, args.n, args.draws, stream)
            else:
                codes = batch_ewens_strings(theta, args.n, args.draws, stream)
        elif args.family == "renewal":
            codes = batch_renewal_strings(alpha, args.n, args.draws, stream)
        elif args.family in ("two-param", "markov-table"):
            pair = build_pair(args.family, alpha, theta, args.matrix_file)
            codes = batch_markov_compositions(pair, args.n, args.draws, stream)
        else:
            raise CliError(f"no sampler for family {args.family!r}", EXIT_BAD_PARAMS)
    except (ValueError, TypeError) as exc:
        raise CliError(str(exc), EXIT_BAD_PARAMS) from exc

    if args.log_file:
        with open(args.log_file, "w") as fh:
            for code in codes:
                fh.write(format(int(code), f"0{args.n}b") + "\n")

    counts = codes_to_counts(codes, args.n)
    try:
        probs = build_cpf(args.family if args.family != "markov-table" else "markov-table",
                          alpha, theta, args.matrix_file).float_probs(args.n)
    except CliError:
        probs = [0.0] * len(counts)
    _emit(args, tables.count_table_lines(counts, probs, args.n),
          tables.count_table_tree(counts, probs, args.n))
    return EXIT_OK


def cmd_check(args):
    _check_cap(args.n_max)
    alpha, theta = _scalar(args.alpha), _scalar(args.theta)
    reports = []
    if args.family in ("two-param", "markov-table"):
        pair = build_pair(args.family, alpha, theta, args.matrix_file)
        if args.control == "regenerative":
            pair = DecrementMatrixPair(q=pair.q, qstar=pair.q,
                                       label=pair.label + "[q*:=q]")
        cpf = markov_cpf(pair)
        reports.append(check_decrement_recursions(pair, args.n_max - 1))
    else:
        cpf = build_cpf(args.family, alpha, theta, args.matrix_file)
        if args.control == "regenerative":
            raise CliError("--control regenerative needs a decrement-matrix family",
                           EXIT_BAD_PARAMS)
    reports.append(check_right_consistency(cpf, args.n_max))
    reports.append(check_uniform_consistency(cpf, args.n_max))
    reports.append(check_theorem_SL(cpf, args.n_max))
    _emit(args, tables.report_lines(reports), tables.report_tree(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK_FAILED


def cmd_reconstruct(args):
    values = tables.parse_moments(Path(args.moments).read_text())
    try:
        moments = StructuralMoments(tuple(values))
        pair, cpf = reconstruct_markov(moments)
    except (ReconstructionError, ValueError) as exc:
        print(f"reconstruction infeasible: {exc}", file=sys.stderr)
        return EXIT_RECONSTRUCTION
    N = moments.max_n - 1
    table_n = min(N, args.n or N)
    lines = (["# q"] + [f"q\t{ln}" for ln in tables.matrix_lines(pair.q, N)]
             + ["# q*"] + [f"q*\t{ln}" for ln in tables.matrix_lines(pair.qstar, N + 1)]
             + ["# cpf"] + tables.cpf_table_lines(cpf, table_n))
    tree = {"q": tables.matrix_lines(pair.q, N),
            "qstar": tables.matrix_lines(pair.qstar, N + 1),
            "cpf": tables.cpf_table_tree(cpf, table_n)}
    if args.roundtrip_family:
        ref = build_cpf(args.roundtrip_family, _scalar(args.alpha), _scalar(args.theta),
                        args.matrix_file)
        ok = all(cpf(c) == ref(c) for m in range(1, table_n + 1)
                 for c in enumerate_compositions(m))
        lines.append(f"# roundtrip {args.roundtrip_family}: {'pass' if ok else 'FAIL'}")
        tree["roundtrip"] = bool(ok)
        if not ok:
            _emit(args, lines, tree)
            return EXIT_CHECK_FAILED
    _emit(args, lines, tree)
    return EXIT_OK


def cmd_arrange(args):
    alpha, theta = _scalar(args.alpha), _scalar(args.theta)
    try:
        lam = Partition.from_string(args.partition)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_BAD_PARAMS) from exc
    if not (0 <= alpha < 1 and theta > -alpha):
        raise CliError(f"need 0 <= alpha < 1, theta > -alpha, got {(alpha, theta)}",
                       EXIT_BAD_PARAMS)
    import numpy as np

    stream = RngStream(seed=args.seed, stream=args.stream)
    parts = np.tile(np.array(lam.parts, dtype=np.int64), (args.draws, 1))
    codes = batch_arrangements(parts, lam.n, alpha, theta, stream)
    counts = codes_to_counts(codes, lam.n)
    probs = [0.0] * len(counts)
    _emit(args, tables.count_table_lines(counts, probs, lam.n),
          tables.count_table_tree(counts, probs, lam.n))
    return EXIT_OK


def cmd_fragment(args):
    _check_cap(args.n)
    from .stochastic import fragment_cpf

    outer = build_cpf(args.outer, _scalar(args.outer_alpha), _scalar(args.outer_theta))
    inner = build_cpf(args.inner, _scalar(args.inner_alpha), _scalar(args.inner_theta))
    frag = fragment_cpf(outer, inner, max_n=args.n)
    _emit(args, tables.cpf_table_lines(frag, args.n), tables.cpf_table_tree(frag, args.n))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_common(p, sampling=False):
    p.add_argument("--alpha", help="exact fraction 'p/q' or decimal")
    p.add_argument("--theta", help="exact fraction 'p/q' or decimal")
    p.add_argument("--matrix-file", help="decrement-matrix file for markov-table")
    p.add_argument("--output", help="output path (COMPSTRUCT_OUTDIR resolves bare names)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    if sampling:
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--stream", type=int, default=0)
        p.add_argument("--draws", type=int, default=1000)


def make_parser():
    ap = argparse.ArgumentParser(prog="compstruct",
                                 description="composition-structure tables, samplers and checks")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cpf", help="exact CPF table over all compositions of n")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_cpf)

    p = sub.add_parser("sample", help="seeded Monte Carlo draws with count table")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("string", "uniform-set", "poisson-set"),
                   default="string")
    p.add_argument("--log-file", help="also write one binary draw per line here")
    _add_common(p, sampling=True)
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("check", help="run consistency checks; exit 1 on failure")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--control", choices=("regenerative",),
                   help="negative control: force q* := q")
    _add_common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("reconstruct", help="rebuild (q, q*, CPF) from moments")
    p.add_argument("--moments", required=True, help="file of p(1..N+1) values")
    p.add_argument("--n", type=int, help="table order for the emitted CPF")
    p.add_argument("--roundtrip-family", choices=FAMILIES)
    _add_common(p)
    p.set_defaults(fn=cmd_reconstruct)

    p = sub.add_parser("arrange", help="arrange a partition into compositions")
    p.add_argument("--partition", required=True, help="comma-separated parts")
    _add_common(p, sampling=True)
    p.set_defaults(fn=cmd_arrange)

    p = sub.add_parser("fragment", help="exact fragmentation-product CPF table")
    p.add_argument("--outer", choices=FAMILIES, required=True)
    p.add_argument("--inner", choices=FAMILIES, required=True)
    p.add_argument("--outer-alpha")
    p.add_argument("--outer-theta")
    p.add_argument("--inner-alpha")
    p.add_argument("--inner-theta")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(fn=cmd_fragment)

    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
