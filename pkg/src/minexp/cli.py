"""Command-line interface.

Subcommands: gen, recover, certify, threshold, sweep, noise-sweep.
Exit codes: 0 success, 2 usage error, 3 numeric failure,
4 infeasible / certification failed.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .certify import strong_recoverable_k, support_recoverable, two_hop_condition
from .errors import (
    ChecksumMismatchError,
    FormatError,
    MinexpError,
    NoFeasibleAlphaError,
    NoFeasibleMuError,
)
from .graphs import DEFAULT_BUDGET, MeasurementMatrix, perturb, random_left_regular
from .matrixio import read_matrix, write_matrix
from .recovery import l1_min_nonneg, noisy_recovery, reverse_expansion_recovery
from .sweeps import parse_config, run_noise_sweep, run_recovery_sweep, write_sweep_csv
from .thresholds import existence_prob_bound, strong_max_mu, strong_min_degree, weak_max_alpha

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_INFEASIBLE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minexp",
                                     description="sparse non-negative recovery toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a (perturbed) measurement matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--eps1", type=float, default=0.1,
                   help="perturbation magnitude; 0 keeps the 0-1 adjacency")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("recover", help="recover a signal from a measurement file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--y", required=True, help="file with one measurement value per line")
    p.add_argument("--algo", choices=["l1", "alg1", "alg2-l1", "alg2-l2"], required=True)
    p.add_argument("--k", type=int, default=None, help="sparsity bound (alg1/alg2)")
    p.add_argument("--out", default=None, help="write the estimate here, one value per line")

    p = sub.add_parser("certify", help="recoverability certificates")
    p.add_argument("--matrix", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--mode", choices=["strong", "support", "two-hop"], required=True)
    p.add_argument("--support", default=None, help="comma-separated left-node indices")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("threshold", help="strong/weak thresholds and existence bounds")
    p.add_argument("--kind", choices=["strong", "weak", "prob"], required=True)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--r0", type=int, default=None)

    p = sub.add_parser("sweep", help="recovery-rate sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("noise-sweep", help="SER-vs-SNR sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    return parser


def _load_vector(path) -> np.ndarray:
    data = np.loadtxt(path, dtype=float, ndmin=1)
    return np.asarray(data, dtype=float).ravel()


def _parse_support(text):
    if text is None or text.strip() == "":
        return []
    return [int(v) for v in text.split(",")]


def _cmd_gen(args) -> int:
    g = random_left_regular(args.n, args.m, args.d, args.seed)
    if args.eps1 > 0:
        a = perturb(g, args.eps1, args.seed + 1)
    else:
        a = MeasurementMatrix.unperturbed(g)
    write_matrix(args.out, a)
    print(f"wrote {args.out}: n={a.n} m={a.m} d={a.d} eps1={a.epsilon1}")
    return EXIT_OK


def _cmd_recover(args) -> int:
    a = read_matrix(args.matrix)
    y = _load_vector(args.y)
    if args.algo == "l1":
        rep = l1_min_nonneg(a, y)
    elif args.algo == "alg1":
        if args.k is None:
            raise ValueError("alg1 requires --k")
        rep = reverse_expansion_recovery(a, y, args.k)
    else:
        norm = "l1" if args.algo == "alg2-l1" else "l2"
        rep = noisy_recovery(a, y, args.k, norm_choice=norm)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            for v in rep.estimate:
                fh.write(format(float(v), ".17g") + "\n")
    print(f"status={rep.solver_status} residual_l1={rep.residual_l1:.6e} "
          f"zeroed_rows={rep.zero_set_size} nonzeros={int(np.count_nonzero(rep.estimate))}")
    if rep.solver_status == "infeasible":
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_certify(args) -> int:
    a = read_matrix(args.matrix)
    if args.mode == "strong":
        if args.k is None:
            raise ValueError("strong mode requires --k")
        ok = strong_recoverable_k(a, args.k, budget=args.budget)
        print(f"strong_recoverable_k(k={args.k}): {ok}")
        return EXIT_OK if ok else EXIT_INFEASIBLE
    support = _parse_support(args.support)
    if args.mode == "support":
        cert = support_recoverable(a, support)
        print(f"support {sorted(support)} recoverable: {cert.recoverable}")
        if not cert.recoverable and cert.failing_witness is not None:
            neg = np.flatnonzero(cert.failing_witness < -1e-9)
            print(f"witness negative entries: {neg.tolist()}")
        return EXIT_OK if cert.recoverable else EXIT_INFEASIBLE
    ok = two_hop_condition(a, support, budget=args.budget)
    print(f"two-hop matching condition for {sorted(support)}: {ok}")
    return EXIT_OK if ok else EXIT_INFEASIBLE


def _cmd_threshold(args) -> int:
    if args.kind == "strong":
        if args.beta is None:
            raise ValueError("strong kind requires --beta")
        if args.mu is not None:
            val = strong_min_degree(args.mu, args.beta)
            print(f"min degree for (mu={args.mu}, beta={args.beta}): {val:.12g}")
        elif args.d is not None:
            mu = strong_max_mu(args.beta, args.d)
            print(f"max mu for (beta={args.beta}, d={args.d}): {mu:.12g} "
                  f"(sparsity ratio mu/d = {mu / args.d:.12g})")
        else:
            raise ValueError("strong kind requires --mu or --d")
    elif args.kind == "weak":
        if args.beta is None or args.d is None:
            raise ValueError("weak kind requires --beta and --d")
        alpha = weak_max_alpha(args.beta, args.d)
        print(f"max alpha for (beta={args.beta}, d={args.d}): {alpha:.12g}")
    else:
        if None in (args.n, args.m, args.r0, args.d):
            raise ValueError("prob kind requires --n --m --r0 --d")
        val = existence_prob_bound(args.n, args.m, args.r0, args.d)
        print(f"existence probability bound: {val:.12g}")
    return EXIT_OK


def _cmd_sweep(args, noise: bool) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = parse_config(fh.read())
    rows = run_noise_sweep(cfg) if noise else run_recovery_sweep(cfg)
    write_sweep_csv(args.out, cfg, rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "recover":
            return _cmd_recover(args)
        if args.command == "certify":
            return _cmd_certify(args)
        if args.command == "threshold":
            return _cmd_threshold(args)
        if args.command == "sweep":
            return _cmd_sweep(args, noise=False)
        return _cmd_sweep(args, noise=True)
    except (FormatError, ChecksumMismatchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoFeasibleMuError, NoFeasibleAlphaError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except MinexpError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
