"""Command line front end: transform vectors from files, inspect derived
algorithmic parameters, and emit benchmark CSV.

Exit codes: 0 success, 1 bad arguments, 2 unreadable/malformed input,
3 numeric failure (non-finite output).
"""

import argparse
import sys
import time

import numpy as np

from . import dht as dht_mod
from . import fourier_bessel as fb
from . import schlomilch as sh
from .bessel import bessel_roots_j0
from .schlomilch import MIN_EPS
from .vecio import VectorFileError, read_vector, write_vector

EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

KINDS = ("schlomilch", "fourier-bessel", "dht")

# library-vs-direct crossover sizes for method=auto
AUTO_DIRECT_BELOW = {"schlomilch": 100, "fourier-bessel": 700, "dht": 6000}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _check_eps(eps):
    if not MIN_EPS <= eps < 1.0:
        raise _UsageError("--eps must lie in [2^-52, 1)")


def _check_threads(threads):
    # accepted for interface compatibility; evaluation is single-threaded
    if threads < 1:
        raise _UsageError("--threads must be >= 1")


def _build_parser():
    parser = _Parser(prog="fasthankel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    tr = sub.add_parser("transform", help="apply a transform to a vector file")
    tr.add_argument("kind", choices=KINDS)
    tr.add_argument("input")
    tr.add_argument("output")
    tr.add_argument("--nu", type=int, default=0)
    tr.add_argument("--eps", type=float, default=1e-15)
    tr.add_argument("--gamma", type=float, default=0.0)
    tr.add_argument("--method", choices=("auto", "direct", "single", "fast"),
                    default="auto")
    tr.add_argument("--threads", type=int, default=1)
    tr.add_argument("--format", choices=("text", "binary"), default="text")
    tr.set_defaults(func=cmd_transform)

    pa = sub.add_parser("params", help="print derived algorithmic parameters")
    pa.add_argument("kind", choices=KINDS)
    pa.add_argument("--nu", type=int, default=0)
    pa.add_argument("--n", type=int, required=True)
    pa.add_argument("--eps", type=float, default=1e-15)
    pa.add_argument("--gamma", type=float, default=0.0)
    pa.set_defaults(func=cmd_params)

    be = sub.add_parser("bench", help="emit timing/accuracy CSV")
    be.add_argument("kind", choices=KINDS)
    be.add_argument("--sizes", required=True,
                    help="comma-separated list of N values")
    be.add_argument("--eps", type=float, default=1e-15)
    be.add_argument("--nu", type=int, default=0)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--threads", type=int, default=1)
    be.add_argument("--direct-cap", type=int, default=4096,
                    help="skip the direct reference above this N")
    be.add_argument("--self-inverse", action="store_true",
                    help="dht only: also report the self-inverse residual")
    be.set_defaults(func=cmd_bench)
    return parser


def cmd_transform(args):
    _check_eps(args.eps)
    _check_threads(args.threads)
    if args.nu < 0:
        raise _UsageError("--nu must be >= 0")
    if args.kind != "schlomilch":
        if args.gamma != 0.0:
            raise _UsageError("--gamma only applies to the schlomilch kind")
        if args.method == "single":
            raise _UsageError("--method single only applies to the schlomilch kind")
    if args.kind == "dht" and args.nu != 0:
        raise _UsageError("the discrete Hankel transform is order 0 only")
    c = read_vector(args.input, args.format)
    n = c.shape[0]
    if n < 1:
        raise VectorFileError("%s: no values" % args.input)
    method = args.method
    if method == "auto":
        method = "direct" if n < AUTO_DIRECT_BELOW[args.kind] else "fast"
    if args.kind == "schlomilch":
        if method == "direct":
            f = sh.schlomilch_direct(args.nu, args.gamma, c)
        else:
            params = sh.select_params(args.nu, n, args.eps, args.gamma)
            if method == "single":
                f = sh.schlomilch_single_partition(params, c)
            else:
                f = sh.schlomilch_fast(params, c)
    elif args.kind == "fourier-bessel":
        if method == "direct":
            f = fb.fourier_bessel_direct(args.nu, c)
        else:
            f = fb.fourier_bessel_eval(args.nu, c, args.eps)
    else:
        plan = dht_mod.dht_plan(n, args.eps)
        f = dht_mod.dht_direct(plan, c) if method == "direct" else dht_mod.dht(plan, c)
    if not np.all(np.isfinite(f)):
        print("fasthankel: non-finite values in output", file=sys.stderr)
        return EXIT_NUMERIC
    write_vector(args.output, f, args.format)
    return 0


def _print_kv(pairs):
    for key, value in pairs:
        if isinstance(value, float):
            print("%s=%.6g" % (key, value))
        else:
            print("%s=%s" % (key, value))


def cmd_params(args):
    _check_eps(args.eps)
    if args.nu < 0:
        raise _UsageError("--nu must be >= 0")
    if args.n < 1:
        raise _UsageError("--n must be >= 1")
    if args.kind == "schlomilch":
        p = sh.select_params(args.nu, args.n, args.eps, args.gamma)
        _print_kv([("M", p.m_terms), ("s", p.s), ("alpha", p.alpha),
                   ("beta", p.beta), ("P", p.partitions)])
        return 0
    margin = 1.01 if args.kind == "dht" else 1.0
    np_ = fb.select_neumann_params(args.eps, margin=margin)
    pairs = [("K", np_.k_terms), ("T", np_.t_terms),
             ("p_K", np_.p_cut), ("q_T", np_.q_cut)]
    inner_eps = args.eps / (2 * np_.t_terms + np_.k_terms - 2)
    if args.kind == "fourier-bessel":
        pairs.append(("n_split", np_.n_split))
        engine = sh.SchlomilchEngine(
            args.n, -0.25, inner_eps,
            fb._order_universe(((args.nu, 1.0),), np_.k_terms))
    else:
        pairs.append(("row_split", np_.n_split))
        fb_params = fb.select_neumann_params(inner_eps)
        schl_eps = inner_eps / (2 * fb_params.t_terms + fb_params.k_terms - 2)
        universe = fb._order_universe(
            [(s, 1.0) for s in range(np_.k_terms)], fb_params.k_terms)
        engine = sh.SchlomilchEngine(4 * args.n + 3, -0.25, schl_eps, universe)
    p = engine.params
    pairs += [("M", p.m_terms), ("s", p.s), ("alpha", p.alpha),
              ("beta", p.beta), ("P", p.partitions)]
    _print_kv(pairs)
    return 0


def _timed(fn):
    fn()  # warm-up
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def cmd_bench(args):
    _check_eps(args.eps)
    _check_threads(args.threads)
    if args.self_inverse and args.kind != "dht":
        raise _UsageError("--self-inverse only applies to the dht kind")
    try:
        sizes = [int(tok) for tok in args.sizes.replace(",", " ").split()]
    except ValueError:
        raise _UsageError("--sizes must be a comma-separated list of integers")
    if not sizes or any(n < 1 for n in sizes):
        raise _UsageError("--sizes must contain positive integers")
    print("N,method,seconds,max_abs_error_vs_direct")
    for n in sizes:
        rng = np.random.default_rng([args.seed, n])
        c = rng.standard_normal(n)
        reference = None
        rows = []
        if args.kind == "schlomilch":
            params = sh.select_params(args.nu, n, args.eps)
            runs = [("direct", lambda: sh.schlomilch_direct(args.nu, 0.0, c)),
                    ("single", lambda: sh.schlomilch_single_partition(params, c)),
                    ("fast", lambda: sh.schlomilch_fast(params, c))]
        elif args.kind == "fourier-bessel":
            roots = bessel_roots_j0(n)
            runs = [("direct", lambda: fb.fourier_bessel_direct(args.nu, c, roots)),
                    ("fast", lambda: fb.fourier_bessel_eval(args.nu, c, args.eps,
                                                            roots))]
        else:
            plan = dht_mod.dht_plan(n, args.eps)
            runs = [("direct", lambda: dht_mod.dht_direct(plan, c)),
                    ("fast", lambda: dht_mod.dht(plan, c))]
        for method, fn in runs:
            if method == "direct" and n > args.direct_cap:
                continue
            out, seconds = _timed(fn)
            if method == "direct":
                reference = out
            err = "" if reference is None else "%.17g" % np.max(np.abs(out - reference))
            rows.append("%d,%s,%.6g,%s" % (n, method, seconds, err))
        if args.kind == "dht" and args.self_inverse:
            plan = dht_mod.dht_plan(n, args.eps)
            fn = lambda: dht_mod.dht_self_inverse_residual(n, args.eps, c, plan=plan)
            residual, seconds = _timed(fn)
            rows.append("%d,%s,%.6g,%.17g" % (n, "self-inverse", seconds, residual))
        for row in rows:
            print(row)
    return 0


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print("fasthankel: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except VectorFileError as exc:
        print("fasthankel: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print("fasthankel: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
