"""Command-line interface.

Subcommands: enumerate, sample, fredholm-bessel, fredholm-airy,
discrete-fredholm, converge {bessel,airy}, cdf-compare, critical-point.
Exit codes: 0 success, 1 usage, 2 numerical non-convergence, 3 invalid
parameters.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import combinatorics as cb
from . import harness as hs
from . import kernels as kn
from . import montecarlo as mc
from .errors import CylpeakError, DomainError, ScaleError
from .fredholm import NystromSpec, fredholm_det_semiinfinite


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--n", type=int, required=True)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cylpeak")
    ap.add_argument("--config", help="JSON config file; flags override its fields")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("enumerate", help="exact peak pmf by enumeration")
    _add_model_args(p)
    p.add_argument("--max-volume", type=int, required=True)
    p.add_argument("--out", help="write the pmf as JSON here")

    p = sub.add_parser("sample", help="Monte Carlo samples of (L, chi, peak)")
    _add_model_args(p)
    p.add_argument("--count", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tail-tol", type=float, default=1e-9)
    p.add_argument("--out", help="CSV path (index,L,chi,peak)")

    p = sub.add_parser("fredholm-bessel", help="finite-temperature Bessel determinant")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--nodes", type=int, default=32)

    p = sub.add_parser("fredholm-airy", help="finite-temperature Airy determinant")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--nodes", type=int, default=32)

    p = sub.add_parser("discrete-fredholm", help="gap determinant of the discrete kernel")
    _add_model_args(p)
    p.add_argument("--ell", type=int, required=True)

    p = sub.add_parser("converge", help="convergence sweep toward a limit law")
    p.add_argument("which", choices=["bessel", "airy"])
    p.add_argument("--eps", type=float, nargs="+", required=True)
    p.add_argument("--s-grid", type=float, nargs="+", required=True)
    p.add_argument("--alpha", type=float, help="Bessel regime: fugacity exponent")
    p.add_argument("--n", type=int, default=1, help="Bessel regime: fixed half-width")
    p.add_argument("--beta", type=float, help="Airy regime: width-growth coefficient")
    p.add_argument("--a", type=float, help="Airy regime: fixed fugacity")
    p.add_argument("--c2-mode", choices=["action", "paper", "both"], default="both")
    p.add_argument("--out", help="CSV path; mode suffix added when both run")

    p = sub.add_parser("cdf-compare", help="empirical vs exact vs Fredholm CDF")
    _add_model_args(p)
    p.add_argument("--max-ell", type=int, default=10)
    p.add_argument("--count", type=int, default=100000)
    p.add_argument("--max-volume", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("critical-point", help="scaling constants of the action")
    p.add_argument("--a", type=float, required=True)
    return ap


def _apply_config(args: argparse.Namespace) -> argparse.Namespace:
    if not getattr(args, "config", None):
        return args
    with open(args.config) as fh:
        conf = json.load(fh)
    model = conf.get("model", {})
    for key in ("a", "q", "n"):
        if key in model and getattr(args, key, None) is None:
            setattr(args, key, model[key])
    scaling = conf.get("scaling", {})
    mapping = {"eps": "eps", "s_grid": "s_grid", "alpha": "alpha", "beta": "beta", "c2_mode": "c2_mode"}
    for src, dst in mapping.items():
        if src in scaling and getattr(args, dst, None) in (None, "both"):
            setattr(args, dst, scaling[src])
    for key in ("seed", "out"):
        if key in conf and getattr(args, key, None) in (None, 0):
            setattr(args, key, conf[key])
    return args


def _cmd_enumerate(args) -> int:
    params = kn.ModelParams(a=args.a, q=args.q, n=args.n)
    pmf = cb.exact_peak_pmf(params, args.max_volume)
    text = pmf.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_sample(args) -> int:
    params = kn.ModelParams(a=args.a, q=args.q, n=args.n)
    rng = mc.RngStream(seed=args.seed, stream_id=0).generator()
    ls, cs, peaks = mc.sample_peaks(params, args.tail_tol, rng, args.count, with_parts=True)
    rows = [(i, int(ls[i]), int(cs[i]), int(peaks[i])) for i in range(args.count)]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["index", "L", "chi", "peak"])
            wr.writerows(rows)
    else:
        print(f"mean peak = {peaks.mean():.4f} over {args.count} samples")
    return 0


def _cmd_fredholm_bessel(args) -> int:
    det = fredholm_det_semiinfinite(
        lambda x, y: kn.ft_bessel_kernel(x, y, args.alpha, args.n),
        args.s,
        NystromSpec(m_nodes=args.nodes, rel_tol=1e-6),
        kernel_matrix=lambda xs: kn.ft_bessel_kernel_matrix(xs, args.alpha, args.n),
    )
    print(f"{det:.6f}")
    return 0


def _cmd_fredholm_airy(args) -> int:
    det = fredholm_det_semiinfinite(
        lambda x, y: kn.ft_airy_kernel(x, y, args.beta),
        args.s,
        NystromSpec(m_nodes=args.nodes, rel_tol=1e-6),
        kernel_matrix=lambda xs: kn.ft_airy_kernel_matrix(xs, args.beta),
    )
    print(f"{det:.6f}")
    return 0


def _cmd_discrete_fredholm(args) -> int:
    params = kn.ModelParams(a=args.a, q=args.q, n=args.n)
    det = hs.discrete_peak_cdf(params, [args.ell])[0]
    print(f"{det:.8f}")
    return 0


def _cmd_converge(args) -> int:
    eps = sorted(args.eps, reverse=True)
    if args.which == "bessel":
        if args.alpha is None:
            raise DomainError("converge bessel requires --alpha")
        cfg = hs.ExperimentConfig(eps_list=eps, s_grid=args.s_grid, alpha=args.alpha, n=args.n)
        res = hs.run_converge_bessel(cfg)
        if args.out:
            hs.write_convergence_csv(args.out, res["rows"])
        for e in eps:
            print(f"eps={e:g} sup|discrete-limit| = {res['sup'][e]:.5f}")
        return 0
    if args.beta is None or args.a is None:
        raise DomainError("converge airy requires --beta and --a")
    modes = ["action", "paper"] if args.c2_mode == "both" else [args.c2_mode]
    sups = {}
    for mode in modes:
        cfg = hs.ExperimentConfig(
            eps_list=eps, s_grid=args.s_grid, beta=args.beta, a=args.a, c2_mode=mode
        )
        res = hs.run_converge_airy(cfg)
        sups[mode] = res["sup"]
        if args.out:
            path = args.out if len(modes) == 1 else args.out.replace(".csv", f"_{mode}.csv")
            hs.write_convergence_csv(path, res["rows"])
        for e in eps:
            print(f"[c2={mode}] eps={e:g} sup|discrete-limit| = {res['sup'][e]:.5f}")
    if len(modes) == 2:
        smallest = min(eps)
        best = min(modes, key=lambda m: sups[m][smallest])
        print(f"smaller sup-difference at eps={smallest:g}: c2_mode={best}")
    return 0


def _cmd_cdf_compare(args) -> int:
    params = kn.ModelParams(a=args.a, q=args.q, n=args.n)
    rng = mc.RngStream(seed=args.seed, stream_id=0).generator()
    peaks = mc.sample_peaks(params, 1e-9, rng, args.count)
    emp = mc.ecdf(peaks)
    pmf = cb.exact_peak_pmf(params, args.max_volume)
    shift = cb.shift_pmf(params)
    mix = cb.convolve_pmf(pmf, shift)
    ells = list(range(args.max_ell + 1))
    dets = hs.discrete_peak_cdf(params, ells)
    with open(args.out, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["ell", "empirical", "exact", "fredholm", "abs_diff"])
        for ell, det in zip(ells, dets):
            wr.writerow(
                [
                    ell,
                    f"{emp(ell):.12g}",
                    f"{pmf.cdf(ell):.12g}",
                    f"{det:.12g}",
                    f"{abs(mix.cdf(ell) - det):.12g}",
                ]
            )
    return 0


def _cmd_critical_point(args) -> int:
    consts, diag = hs.critical_point_report(args.a)
    print(f"b         = {consts.b:.10f}")
    print(f"c1        = {consts.c1:.10f}")
    print(f"c2_paper  = {consts.c2_paper:.10f}")
    print(f"c2_action = {consts.c2_action:.10f}")
    print(f"ratio     = {diag['c2_ratio_action_over_paper']:.10f}")
    print(f"S'(1)     = {diag['S1']:.3e}")
    print(f"S''(1)    = {diag['S2']:.3e}")
    print(f"S'''(1)   = {diag['S3']:.10f} (closed form {diag['S3_closed_form']:.10f})")
    return 0


_HANDLERS = {
    "enumerate": _cmd_enumerate,
    "sample": _cmd_sample,
    "fredholm-bessel": _cmd_fredholm_bessel,
    "fredholm-airy": _cmd_fredholm_airy,
    "discrete-fredholm": _cmd_discrete_fredholm,
    "converge": _cmd_converge,
    "cdf-compare": _cmd_cdf_compare,
    "critical-point": _cmd_critical_point,
}


def cli_main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        args = _apply_config(args)
        return _HANDLERS[args.cmd](args)
    except (DomainError, ScaleError, ValueError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 3
    except CylpeakError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
