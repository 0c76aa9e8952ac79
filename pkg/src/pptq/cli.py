"""Command-line surface.

One binary with subcommands; every command is deterministic given its input
files, flags and seed, and JSON output is byte-stable across runs.

Exit codes: 0 success, 1 check failure, 2 bad input, 3 precondition,
4 internal error, 5 solver inconclusive.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .errors import (DimensionCapExceeded, DimensionMismatch,
                     InvariantViolation, NegativeNegativity, ParseError,
                     PptqError, PreconditionViolated, SolverNotConverged,
                     ZeroNegativityTarget)
from .negativity import log_negativity, one_shot_exact_distillable
from .operators import (DEFAULT_DIM_CAP, BipartiteOperator, partial_transpose,
                        trace_norm)
from .rates import chain_report, conversion_ratio
from .states import (load, max_entangled, random_quasi_state, random_state,
                     save)
from .synthesis import load_channel, save_channel, synthesize, verify
from .tempered import SolverConfig, tempered_negativity

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_INTERNAL = 4
EXIT_INCONCLUSIVE = 5

DEFAULT_SEED = 0xC0FFEE


def _emit_json(payload):
    sys.stdout.write(json.dumps(payload, ensure_ascii=False,
                                separators=(", ", ": ")) + "\n")


def _solver_config(args):
    return SolverConfig(
        bisect_tol=args.tol,
        bisect_steps=args.bisect_steps,
        max_iters=args.max_iters,
    )


def cmd_en(args) -> int:
    state = load(args.state_file)
    val = log_negativity(state)
    if args.format == "json":
        _emit_json({"log_negativity": val.log_negativity,
                    "trace_norm_pt": val.trace_norm_pt})
    else:
        print(f"E_N = {val.log_negativity:.6f}")
        print(f"trace_norm_pt = {val.trace_norm_pt:.6f}")
    return EXIT_OK


def cmd_ntau(args) -> int:
    state = load(args.state_file)
    cfg = _solver_config(args)
    res = tempered_negativity(state, cfg)
    payload = {
        "n_tau": res.n_tau,
        "log_n_tau": res.log_n_tau,
        "converged": res.converged,
        "experimental": res.experimental,
        "iterations": res.iterations,
        "residuals": {
            "r_op": res.feasibility_residuals[0],
            "r_pt": res.feasibility_residuals[1],
            "r_lin": res.feasibility_residuals[2],
        },
        "config": {
            "bisect_tol": cfg.bisect_tol,
            "bisect_steps": cfg.bisect_steps,
            "max_iters": cfg.max_iters,
            "residual_tol": cfg.residual_tol,
        },
    }
    if args.format == "json":
        _emit_json(payload)
    else:
        print(f"N_tau = {res.n_tau:.6f}")
        print(f"log2 N_tau = {res.log_n_tau:.6f}")
        print(f"converged = {res.converged}")
    return EXIT_OK if res.converged else EXIT_INCONCLUSIVE


def cmd_synthesize(args) -> int:
    rho = load(args.rho_file)
    sigma = load(args.sigma_file)
    try:
        channel, cert = synthesize(rho, sigma)
    except PreconditionViolated as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PRECONDITION
    report = verify(channel, rho, sigma)
    save_channel(channel, args.out)
    payload = {
        "channel_file": args.out,
        "branch": cert.branch,
        "lambda_min": cert.lambda_min,
        "verification": report.to_dict(),
    }
    if args.format == "json":
        _emit_json(payload)
    else:
        print(f"channel written to {args.out} (branch: {cert.branch})")
        for name, info in report.to_dict().items():
            if isinstance(info, dict):
                verdict = "pass" if info["passed"] else "FAIL"
                print(f"  {name}: {verdict} (residual {info['residual']:.3e})")
    if not report.synthesis_contract_passed():
        # should not happen for a synthesized channel; keep the report
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_verify_channel(args) -> int:
    channel = load_channel(args.channel_file)
    rho = load(args.rho) if args.rho else None
    sigma = load(args.sigma) if args.sigma else None
    report = verify(channel, rho, sigma)
    payload = report.to_dict()
    if args.format == "json":
        _emit_json(payload)
    else:
        for name, info in payload.items():
            if isinstance(info, dict):
                verdict = "pass" if info["passed"] else "FAIL"
                print(f"{name}: {verdict} (residual {info['residual']:.3e})")
    return EXIT_OK if report.all_passed() else EXIT_CHECK_FAILED


def cmd_rate(args) -> int:
    rho = load(args.rho_file)
    sigma = load(args.sigma_file)
    try:
        report = conversion_ratio(rho, sigma)
    except ZeroNegativityTarget as exc:
        if args.format == "json":
            _emit_json({"status": "unbounded", "detail": str(exc)})
        else:
            print(f"ratio unbounded: {exc}")
        return EXIT_PRECONDITION
    if args.format == "json":
        _emit_json(report.to_dict())
    else:
        print(f"E_N(rho) = {report.en_rho:.6f}")
        print(f"E_N(sigma) = {report.en_sigma:.6f}")
        print(f"ratio_forward = {report.ratio_forward:.6f}")
        print(f"ratio_backward = {report.ratio_backward:.6f}")
        print(f"reversibility_product = {report.reversibility_product:.6f}")
    return EXIT_OK


def cmd_chain_check(args) -> int:
    rho = load(args.state_file)
    cfg = _solver_config(args)
    report = chain_report(rho, cfg)
    if args.format == "json":
        _emit_json(report.to_dict())
    else:
        print(f"E_N^tau = {report.e_n_tau:.6f}")
        print(f"E_N = {report.e_n:.6f}")
        print(f"cost interval = [{report.cost_interval[0]:.6f}, "
              f"{report.cost_interval[1]:.6f}]")
        print(f"chain_holds = {report.chain_holds}")
        print(f"status = {report.status}")
    if report.status != "ok":
        return EXIT_INCONCLUSIVE
    return EXIT_OK if report.chain_holds else EXIT_CHECK_FAILED


def cmd_random_state(args) -> int:
    d_a, d_b = args.dims
    if d_a * d_b > args.dim_cap:
        raise DimensionCapExceeded(f"side {d_a * d_b} exceeds cap {args.dim_cap}")
    if args.kind == "state":
        state = random_state(d_a, d_b, args.seed)
    else:
        state = random_quasi_state(d_a, d_b, args.neg_weight, args.seed)
    save(state, args.out)
    if args.format == "json":
        _emit_json({"file": args.out, "kind": args.kind,
                    "d_a": d_a, "d_b": d_b, "seed": args.seed})
    else:
        print(f"{args.kind} written to {args.out}")
    return EXIT_OK


def _selftest_checks(seed):
    rng = np.random.default_rng(seed)
    # partial transpose is an involution and preserves the trace
    for _ in range(20):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        op = BipartiteOperator(2, 2, 0.5 * (g + g.conj().T))
        ptpt = partial_transpose(partial_transpose(op))
        yield ("pt involution", float(np.abs(ptpt.matrix - op.matrix).max()) < 1e-12)
        yield ("pt trace", abs(partial_transpose(op).trace() - op.trace()) < 1e-10)
    # trace-norm growth under partial transpose is capped by the full side
    for _ in range(50):
        g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        op = BipartiteOperator(2, 3, 0.5 * (g + g.conj().T))
        yield ("pt norm cap",
               trace_norm(partial_transpose(op)) <= 6 * trace_norm(op) + 1e-9)
    # reversibility product
    for i in range(10):
        rho = _mixed_npt(2, 2, int(rng.integers(0, 2 ** 31)))
        sig = _mixed_npt(2, 2, int(rng.integers(0, 2 ** 31)))
        rep = conversion_ratio(rho, sig)
        yield ("reversibility", abs(rep.reversibility_product - 1.0) <= 1e-9)
    # synthesis round trip
    for i in range(5):
        rho = _mixed_npt(2, 2, int(rng.integers(0, 2 ** 31)))
        sig = _mixed_npt(2, 2, int(rng.integers(0, 2 ** 31)))
        if log_negativity(rho).log_negativity < log_negativity(sig).log_negativity:
            rho, sig = sig, rho
        channel, _ = synthesize(rho, sig)
        rep = verify(channel, rho, sig)
        yield ("synthesis verify", rep.synthesis_contract_passed())
    # tempered witnesses on the anchor states
    for d in (2, 3):
        res = tempered_negativity(max_entangled(d))
        yield (f"ntau mes d={d}", abs(res.n_tau - d) <= 1e-4)
    eye4 = BipartiteOperator(2, 2, np.eye(4) / 4)
    from .states import QuasiState
    res = tempered_negativity(QuasiState(eye4))
    yield ("ntau maximally mixed", abs(res.n_tau - 1.0) <= 1e-6)
    # one-shot sandwich
    for i in range(5):
        rho = _mixed_npt(2, 2, 900 + i)
        en = log_negativity(rho).log_negativity
        for n in (1, 2, 3):
            lo, _ = one_shot_exact_distillable(rho, n)
            yield ("one-shot sandwich", lo <= n * en + 1e-9)


def _mixed_npt(d_a, d_b, seed, weight=0.6):
    """Random NPT state: blend of a maximally entangled state and noise."""
    from .states import QuasiState
    base = max_entangled(min(d_a, d_b))
    if (base.d_a, base.d_b) != (d_a, d_b):
        base = random_state(d_a, d_b, seed + 1)
    noise = random_state(d_a, d_b, seed)
    m = weight * base.matrix + (1 - weight) * noise.matrix
    return QuasiState(BipartiteOperator(d_a, d_b, m))


def cmd_selftest(args) -> int:
    failures = 0
    counts = {}
    for name, ok in _selftest_checks(args.seed):
        counts.setdefault(name, [0, 0])
        counts[name][0] += 1
        if not ok:
            counts[name][1] += 1
            failures += 1
    for name, (total, bad) in counts.items():
        verdict = "pass" if bad == 0 else "FAIL"
        print(f"{verdict}  {name} ({total - bad}/{total})")
    return EXIT_OK if failures == 0 else EXIT_CHECK_FAILED


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pptq",
        description="Exact entanglement manipulation under PPT "
                    "quasi-operations: measures, channel synthesis, rates.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--tol", type=float, default=1e-6,
                        help="solver/bisection tolerance (default 1e-6)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed for randomized commands (default 0xC0FFEE)")
    parser.add_argument("--format", choices=("json", "text"), default="text")
    parser.add_argument("--dim-cap", type=int, default=DEFAULT_DIM_CAP,
                        help="maximum matrix side (default 4096)")
    parser.add_argument("--max-iters", type=int, default=5000,
                        help="feasibility iterations per bisection probe")
    parser.add_argument("--bisect-steps", type=int, default=200)

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("en", help="log-negativity of a state file")
    p.add_argument("state_file")
    p.set_defaults(func=cmd_en)

    p = sub.add_parser("ntau", help="tempered negativity of a state file")
    p.add_argument("state_file")
    p.set_defaults(func=cmd_ntau)

    p = sub.add_parser("synthesize",
                       help="build the channel mapping rho to sigma")
    p.add_argument("rho_file")
    p.add_argument("sigma_file")
    p.add_argument("-o", "--out", required=True, help="channel output file")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("verify-channel", help="verify a channel file")
    p.add_argument("channel_file")
    p.add_argument("--rho", help="optional input state file")
    p.add_argument("--sigma", help="optional target state file")
    p.set_defaults(func=cmd_verify_channel)

    p = sub.add_parser("rate", help="conversion ratios between two states")
    p.add_argument("rho_file")
    p.add_argument("sigma_file")
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("chain-check",
                       help="rate inequality chain report for one state")
    p.add_argument("state_file")
    p.set_defaults(func=cmd_chain_check)

    p = sub.add_parser("random-state", help="write a seeded random state")
    p.add_argument("--kind", choices=("state", "quasi"), default="state")
    p.add_argument("--dims", type=int, nargs=2, required=True,
                   metavar=("DA", "DB"))
    p.add_argument("--neg-weight", type=float, default=0.5)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_random_state)

    p = sub.add_parser("selftest", help="run the batch property checks")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.tol <= 0:
        print("input error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    if args.seed < 0 or args.seed >= 2 ** 64:
        print("input error: --seed must fit in 64 unsigned bits", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (ParseError, InvariantViolation, FileNotFoundError, IsADirectoryError,
            PermissionError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PreconditionViolated, ZeroNegativityTarget, NegativeNegativity,
            DimensionCapExceeded, DimensionMismatch) as exc:
        print(f"precondition error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except SolverNotConverged as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except PptqError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
