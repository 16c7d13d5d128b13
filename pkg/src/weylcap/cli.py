"""Command-line front end.

Exit codes: 0 success, 1 failed ``verify`` check, 2 malformed input,
3 invalid channel or parameters, 4 unwritable output path.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bounds import coincidence_test
from .channel import channel_from_spec
from .errors import MalformedSpecError, WeylcapError
from .experiments import run_sweep, special_report, write_sweep_csv
from .oracle import OptimizerConfig, min_output_entropy
from .weyl import weyl_eigenbasis, weyl_eigenvalues, weyl_operator

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_MALFORMED = 2
EXIT_INVALID = 3
EXIT_UNWRITABLE = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_spec(text: str) -> dict:
    if text == "-":
        text = sys.stdin.read()
    elif not text.lstrip().startswith("{"):
        path = Path(text)
        if not path.is_file():
            raise CliError(f"no such channel spec file: {text}", EXIT_MALFORMED)
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"channel spec is not valid JSON: {exc}", EXIT_MALFORMED) from None


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_bounds(args) -> int:
    spec = _read_spec(args.spec)
    p = channel_from_spec(spec)
    out = coincidence_test(p).to_dict()
    if args.oracle:
        res = min_output_entropy(p, OptimizerConfig(restarts=args.restarts, seed=args.seed))
        out["chi_opt"] = res.chi_opt
        out["oracle_converged"] = res.converged
    _emit(out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.count < 1:
        raise CliError("--count must be at least 1", EXIT_MALFORMED)
    stream = sys.stdout
    if args.out is not None:
        try:
            stream = open(args.out, "w", newline="", encoding="utf-8")
        except OSError as exc:
            raise CliError(f"cannot write {args.out}: {exc}", EXIT_UNWRITABLE) from None
    try:
        rows = run_sweep(
            args.d,
            args.count,
            seed=args.seed,
            oracle=not args.no_oracle,
            restarts=args.restarts,
            timing=args.timing,
        )
        write_sweep_csv(rows, stream, normalize=args.normalize)
    finally:
        if stream is not sys.stdout:
            stream.close()
    return EXIT_OK


def cmd_special(args) -> int:
    params: dict = {}
    if args.kind == "depolarizing":
        params["mu"] = _required(args.mu, "--mu")
    elif args.kind == "depol-like-1":
        params["xi"] = _required(args.xi, "--xi")
        params["idx"] = tuple(args.idx or (0, 0))
    else:
        params["eta"] = _required(args.eta, "--eta")
        params["kappa"] = _required(args.kappa, "--kappa")
        params["idx_a"] = tuple(args.idx or (0, 1))
        params["idx_b"] = tuple(args.idx_b or (1, 0))
    _emit(special_report(args.kind, args.d, **params))
    return EXIT_OK


def _required(value, flag):
    if value is None:
        raise CliError(f"{flag} is required for this channel kind", EXIT_MALFORMED)
    return value


def _fmt_complex(z: complex) -> str:
    return f"{z.real:+.6f}{z.imag:+.6f}i"


def cmd_eig(args) -> int:
    d, n, m = args.d, args.n, args.m
    spec = weyl_eigenbasis((n, m), d)
    W = weyl_operator((n, m), d)
    V = spec.eigenvectors
    residual = float(np.abs(W @ V - V * spec.eigenvalues).max())
    analytic = weyl_eigenvalues((n, m), d)
    if args.json:
        _emit(
            {
                "d": d,
                "n": n,
                "m": m,
                "order": spec.order,
                "phase": [spec.phase.real, spec.phase.imag],
                "degenerate": spec.degenerate,
                "eigenvalues": [[z.real, z.imag] for z in analytic],
                "eigenvectors": [[[z.real, z.imag] for z in V[:, i]] for i in range(d)],
                "residual": residual,
            }
        )
        return EXIT_OK
    print(f"W_{n}{m} on d={d}: order l={spec.order}, phase p={_fmt_complex(spec.phase)}")
    if spec.degenerate:
        print("note: repeated eigenvalues; canonical cycle basis shown")
    print("eigenvalues (closed form):", ", ".join(_fmt_complex(z) for z in analytic))
    for i in range(d):
        vec = " ".join(_fmt_complex(z) for z in V[:, i])
        print(f"  lambda={_fmt_complex(spec.eigenvalues[i])}  v=[{vec}]")
    print(f"max |W v - lambda v| = {residual:.3e}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .checks import run_all

    results = run_all(count=args.count, seed=args.seed)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


def _pair(text: str) -> tuple[int, int]:
    try:
        n, m = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'n,m', got {text!r}") from None
    return n, m


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weylcap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="bounds and coincidence verdict for one channel")
    b.add_argument("spec", help="channel JSON, a path to a JSON file, or '-' for stdin")
    b.add_argument("--oracle", action="store_true", help="also run the optimization oracle")
    b.add_argument("--restarts", type=int, default=32)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("sweep", help="random-channel sweep written as CSV")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--count", type=int, default=400)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="output CSV path (default: stdout)")
    s.add_argument("--normalize", action="store_true", help="divide capacities by log2(d)")
    s.add_argument("--no-oracle", action="store_true", help="leave chi_opt empty")
    s.add_argument("--restarts", type=int, default=8, help="random starts per oracle run")
    s.add_argument("--timing", action="store_true", help="record lower-bound wall time")
    s.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("special", help="special channels: closed form vs computed bounds")
    sp.add_argument("kind", choices=["depolarizing", "depol-like-1", "depol-like-2"])
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--mu", type=float)
    sp.add_argument("--xi", type=float)
    sp.add_argument("--eta", type=float)
    sp.add_argument("--kappa", type=float)
    sp.add_argument("--idx", type=_pair, help="Weyl index 'n,m' (first index)")
    sp.add_argument("--idx-b", type=_pair, help="second Weyl index 'n,m' for depol-like-2")
    sp.add_argument("--json", action="store_true", help="accepted for symmetry; output is always JSON")
    sp.set_defaults(func=cmd_special)

    e = sub.add_parser("eig", help="analytic spectrum of one Weyl operator")
    e.add_argument("n", type=int)
    e.add_argument("m", type=int)
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_eig)

    v = sub.add_parser("verify", help="run the invariant checks on random inputs")
    v.add_argument("--count", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"weylcap: {exc}", file=sys.stderr)
        return exc.code
    except MalformedSpecError as exc:
        print(f"weylcap: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except WeylcapError as exc:
        code = EXIT_MALFORMED if args.command == "eig" else EXIT_INVALID
        print(f"weylcap: {exc}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
