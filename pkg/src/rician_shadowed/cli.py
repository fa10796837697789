"""Command-line front end.

Subcommands: cdf-curve, pdf-curve, sample, verify.  Model parameters come
from flags and/or a key=value config file (flags win).  Every run prints
the resolved parameter set and seed; CSV output uses a header row, comma
delimiter and 17-significant-digit floats so reruns are byte-identical.

Exit codes: 0 success, 1 verification failure, 2 validation error,
3 numerical-consistency error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import NumericalConsistencyError
from .model import ScaledIdentityParams
from .montecarlo import estimate_max_eig_samples
from .stats import max_eig_cdf_grid, max_eig_pdf_grid
from .verify import SUITES, run_suite

_FMT = "%.17g"


def _add_param_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, default=None,
                   help="key=value file with any of: n, p, m, sigma2-sigma, sigma2-m, inv-sigma2-m")
    p.add_argument("--n", type=int, default=None, help="receive dimension")
    p.add_argument("--p", type=int, default=None, help="transmit dimension (p >= n)")
    p.add_argument("--m", type=float, default=None, help="shadowing severity (m > n - 1)")
    p.add_argument("--sigma2-sigma", type=float, default=None,
                   help="scattering covariance scale sigma_Sigma^2")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--sigma2-m", type=float, default=None,
                       help="shadowing rate scale sigma_M^2")
    group.add_argument("--inv-sigma2-m", type=float, default=None,
                       help="inverse shadowing rate sigma_M^-2 (as quoted in figure legends)")


def _read_config(path: Path) -> dict[str, str]:
    out: dict[str, str] = {}
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {raw!r} is not key=value")
        key, val = (part.strip() for part in line.split("=", 1))
        out[key.replace("_", "-")] = val
    return out


def _resolve_params(args: argparse.Namespace) -> ScaledIdentityParams:
    cfg = _read_config(args.config) if args.config else {}

    def pick(flag_value, key: str, cast):
        if flag_value is not None:
            return flag_value
        if key in cfg:
            return cast(cfg[key])
        return None

    n = pick(args.n, "n", int)
    p = pick(args.p, "p", int)
    m = pick(args.m, "m", float)
    s2s = pick(args.sigma2_sigma, "sigma2-sigma", float)
    s2m = pick(args.sigma2_m, "sigma2-m", float)
    inv_s2m = pick(args.inv_sigma2_m, "inv-sigma2-m", float)
    if s2m is None and inv_s2m is not None:
        if inv_s2m <= 0:
            raise ValueError("inv-sigma2-m must be > 0")
        s2m = 1.0 / inv_s2m
    missing = [name for name, v in
               (("n", n), ("p", p), ("m", m), ("sigma2-sigma", s2s), ("sigma2-m", s2m))
               if v is None]
    if missing:
        raise ValueError(f"missing parameters: {', '.join(missing)}")
    return ScaledIdentityParams(n=n, p=p, m=m, sigma2_Sigma=s2s, sigma2_M=s2m)


def _print_resolved(params: ScaledIdentityParams, seed) -> None:
    print(f"params: n={params.n} p={params.p} m={params.m:g} "
          f"sigma2-sigma={params.sigma2_Sigma:.17g} sigma2-m={params.sigma2_M:.17g} "
          f"(inv-sigma2-m={1.0 / params.sigma2_M:.17g})")
    print(f"seed: {seed}")


def _write_csv(path: Path, header: str, rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_FMT % v for v in row) + "\n")


def _grid(args: argparse.Namespace) -> np.ndarray:
    if not args.xmin < args.xmax:
        raise ValueError("grid requires xmin < xmax")
    if args.points < 2:
        raise ValueError("grid requires points >= 2")
    return np.linspace(args.xmin, args.xmax, args.points)


def _cmd_cdf_curve(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    _print_resolved(params, args.seed)
    xs = _grid(args)
    cdf = max_eig_cdf_grid(xs, params)
    _write_csv(args.output, "x,cdf", zip(xs, cdf))
    print(f"wrote {args.output} ({xs.size} rows)")
    return 0


def _cmd_pdf_curve(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    _print_resolved(params, args.seed)
    xs = _grid(args)
    if xs[0] <= 0.0:
        xs = xs.copy()
        xs[0] = min(1e-9, xs[1] * 0.5) if xs.size > 1 else 1e-9
    pdf = max_eig_pdf_grid(xs, params)
    _write_csv(args.output, "x,pdf", zip(xs, pdf))
    print(f"wrote {args.output} ({xs.size} rows)")
    return 0


def _cmd_sample(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    _print_resolved(params, args.seed)
    if args.num_samples < 1:
        raise ValueError("num-samples must be >= 1")
    dist = estimate_max_eig_samples(params, args.num_samples, seed=args.seed,
                                    n_workers=args.workers)
    _write_csv(args.output, "max_eigenvalue",
               ((v,) for v in dist.sorted_samples))
    print(f"wrote {args.output} ({dist.count} rows)")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    print(f"suite: {args.suite}")
    print(f"seed: {args.seed}")
    results = run_suite(args.suite, seed=args.seed)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rician-shadowed",
        description="Maximum-eigenvalue statistics of the shadowed-Rician MIMO Gram matrix")
    sub = parser.add_subparsers(dest="command", required=True)

    p_cdf = sub.add_parser("cdf-curve", help="write an analytic CDF curve as CSV")
    _add_param_args(p_cdf)
    p_cdf.add_argument("--xmin", type=float, default=0.0)
    p_cdf.add_argument("--xmax", type=float, required=True)
    p_cdf.add_argument("--points", type=int, default=200)
    p_cdf.add_argument("--output", type=Path, required=True)
    p_cdf.add_argument("--seed", type=int, default=0)
    p_cdf.set_defaults(fn=_cmd_cdf_curve)

    p_pdf = sub.add_parser("pdf-curve", help="write an analytic PDF curve as CSV")
    _add_param_args(p_pdf)
    p_pdf.add_argument("--xmin", type=float, default=0.0)
    p_pdf.add_argument("--xmax", type=float, required=True)
    p_pdf.add_argument("--points", type=int, default=200)
    p_pdf.add_argument("--output", type=Path, required=True)
    p_pdf.add_argument("--seed", type=int, default=0)
    p_pdf.set_defaults(fn=_cmd_pdf_curve)

    p_s = sub.add_parser("sample", help="write Monte-Carlo max-eigenvalue samples as CSV")
    _add_param_args(p_s)
    p_s.add_argument("--num-samples", type=int, required=True)
    p_s.add_argument("--seed", type=int, default=0)
    p_s.add_argument("--workers", type=int, default=1)
    p_s.add_argument("--output", type=Path, required=True)
    p_s.set_defaults(fn=_cmd_sample)

    p_v = sub.add_parser("verify", help="run a verification suite")
    p_v.add_argument("--suite", choices=sorted(SUITES), required=True)
    p_v.add_argument("--seed", type=int, default=1234)
    p_v.set_defaults(fn=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except NumericalConsistencyError as exc:
        print(f"numerical-consistency error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
