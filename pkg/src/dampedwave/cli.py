"""Command-line interface.

Subcommands: coeffs, lemmas, equiv, rates, decompose.  Configuration
precedence is flags > environment (DWAVE_ prefix, e.g. DWAVE_SEED) >
defaults.  Exit codes: 0 success, 1 failed verification, 2 bad flags,
3 quadrature accuracy error.

Output conventions: CSV has a header row, LF line endings, floats with 17
significant digits; JSON is UTF-8 with sorted keys; exact rationals are
serialized as "num/den" strings.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import expansion as ex
from . import lemmas as lemma_suite
from . import ratelab
from .exact import l_constant
from .norms import (
    AccuracyError,
    data_library,
    default_rule,
    evolve_grid,
    grid_fourier_norm,
    grid_from_physical,
    write_grid_binary,
    write_grid_csv,
)


def _env(name: str, default):
    raw = os.environ.get(f"DWAVE_{name.upper()}")
    if raw is None:
        return default
    if isinstance(default, bool):
        return raw.lower() in ("1", "true", "yes", "on")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    return raw


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _frac_pretty(text: str) -> str:
    return text[:-2] if text.endswith("/1") else text


def _fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _dump_json(payload, path: Path | None):
    text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)
    if path is None:
        print(text)
    else:
        path.write_text(text + "\n", encoding="utf-8")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# coeffs
# ---------------------------------------------------------------------------


def cmd_coeffs(args) -> int:
    requested = any(
        v is not None for v in (args.L, args.beta, args.sing, args.ik, args.m)
    )
    show_l = args.L if args.L is not None else (5 if not requested else None)
    show_m = args.m if args.m is not None else (3 if not requested else None)
    show_beta = args.beta
    show_sing = args.sing if args.sing is not None else (5 if not requested else None)
    show_ik = args.ik if args.ik is not None else (3 if not requested else None)

    payload: dict = {}
    if show_l is not None:
        payload["L"] = {str(j): _frac(l_constant(j)) for j in range(1, show_l + 1)}
    if show_m is not None:
        tc = ex.takeda_coefficients(show_m)
        payload["alpha"] = {f"{j},{k}": _frac(v) for (j, k), v in sorted(tc.alpha.items())}
        payload["beta"] = {str(l): _frac(v) for l, v in sorted(tc.beta.items())}
    if show_beta is not None:
        tc = ex.takeda_coefficients(show_beta)
        payload["beta"] = {str(l): _frac(v) for l, v in sorted(tc.beta.items())}
    if show_sing is not None:
        payload["sing_limit"] = {
            str(k): {"t_power": 2 * k, "coeff": _frac(ex.sing_limit(k)[1])}
            for k in range(1, show_sing + 1)
        }
    if show_ik is not None:
        payload["wave_kernels"] = {
            str(k): ex.wave_Ik(k).to_json_dict() for k in range(1, show_ik + 1)
        }

    out = Path(args.out) / "coeffs.json" if args.out else None
    if args.format == "json":
        if out:
            _out_dir(args)
        _dump_json(payload, out)
        if out:
            print(f"wrote {out}")
        return 0

    if args.format == "csv":
        print("table,key,value")
        for table, entries in sorted(payload.items()):
            if table == "wave_kernels":
                continue
            for key, value in entries.items():
                val = value if isinstance(value, str) else f"({value['coeff']}) t^{value['t_power']}"
                print(f"{table},{key},{val}")
        return 0

    if "L" in payload:
        print("# sqrt-derivative constants")
        for j, v in payload["L"].items():
            print(f"L_{j} = {_frac_pretty(v)}")
    if "alpha" in payload:
        print("# alpha coefficients (j,k)")
        for jk, v in payload["alpha"].items():
            print(f"alpha_{{{jk}}} = {_frac_pretty(v)}")
    if "beta" in payload:
        print("# beta coefficients")
        for l, v in payload["beta"].items():
            print(f"beta_{l} = {_frac_pretty(v)}")
    if "sing_limit" in payload:
        print("# r -> 0 limits of the wave derivative family")
        for k, v in payload["sing_limit"].items():
            print(f"limit_{k} = ({_frac_pretty(v['coeff'])}) * t^{v['t_power']}")
    if "wave_kernels" in payload:
        print("# wave kernels I_k (coeff, t_power, r_power, phase)")
        for k, v in payload["wave_kernels"].items():
            terms = ", ".join(
                f"({t['coeff']}) t^{t['t_power']} r^{t['r_power']} {t['phase']}(tr)"
                for t in v["terms"]
            )
            print(f"I_{k} = {terms}")
    return 0


# ---------------------------------------------------------------------------
# lemmas
# ---------------------------------------------------------------------------


def cmd_lemmas(args) -> int:
    results = lemma_suite.run_all(
        max_k=args.max_k, seed=args.seed, corrupt=args.self_test_corrupt
    )
    failed = [r for r in results if not r.passed]
    for r in results:
        tag = "PASS" if r.passed else "FAIL"
        print(f"{tag}  {r.name}: {r.detail}")
    if args.out:
        out = _out_dir(args) / "lemmas.json"
        _dump_json(
            {
                r.name: {"passed": r.passed, "detail": r.detail}
                for r in results
            },
            out,
        )
        print(f"wrote {out}")
    if failed:
        first = failed[0]
        print(f"first failure: {first.name} {first.counterexample or first.detail}")
        return 1
    return 0


# ---------------------------------------------------------------------------
# equiv
# ---------------------------------------------------------------------------


def cmd_equiv(args) -> int:
    worst = None
    for report in ex.iter_equivalence(args.m):
        verdict = "equal" if report.equal else "MISMATCH"
        print(f"order {report.order}: {verdict}")
        if not report.equal and worst is None:
            worst = report
    if worst is not None:
        print(
            f"first mismatch at order {worst.order}, side {worst.side}, "
            f"monomial r^{2 * worst.monomial[0]} (tr^2)^{worst.monomial[1]}: "
            f"{_frac(worst.taylor_value)} vs {_frac(worst.takeda_value)}"
        )
        return 1
    return 0


# ---------------------------------------------------------------------------
# rates
# ---------------------------------------------------------------------------


def _write_sweep_csv(path: Path, result, predicted_exponent: float) -> None:
    t_ref = float(result.times[-1])
    e_ref = float(result.values[-1])
    with open(path, "w", newline="") as fh:
        fh.write("t,E,predicted_envelope\n")
        for t, e in zip(result.times, result.values):
            envelope = e_ref * (t / t_ref) ** predicted_exponent
            fh.write(f"{_fmt_float(t)},{_fmt_float(e)},{_fmt_float(envelope)}\n")


def cmd_rates(args) -> int:
    if args.theorem1 and args.b <= args.n / 2:
        print(
            f"rejected: --theorem1 requires b > n/2 (got b={args.b}, n={args.n})",
            file=sys.stderr,
        )
        return 2
    data0 = data_library(args.data, sigma=args.sigma)
    data1 = data_library(args.data, sigma=args.sigma)
    rule = default_rule(args.R, args.nodes)
    out = _out_dir(args)

    times = ratelab.geometric_times(args.tmin, args.tmax, args.samples)
    result = ratelab.sweep(
        "both" if args.i is None else args.i,
        args.b,
        args.l,
        args.region,
        args.n,
        data0,
        data1,
        times,
        rule,
    )
    fit = ratelab.fit_rate(result)
    target = ratelab.diffusive_exponent(args.n, args.l)

    csv_path = out / "rates_sweep.csv"
    _write_sweep_csv(csv_path, result, target)
    fit_payload = {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "max_residual": fit.max_residual,
        "window": list(fit.window),
        "predicted_diffusive_exponent": target,
        "config": result.config,
        "seed": args.seed,
    }

    passed = True
    if args.theorem1:
        report = ratelab.check_theorem1(
            args.n,
            args.b,
            args.l,
            data0,
            data1,
            window=(args.tmin, args.tmax),
            samples=args.samples,
            rule=rule,
        )
        fit_payload["theorem1"] = {
            c.name: {"passed": c.passed, "observed": c.observed, "expected": c.expected}
            for c in report.checks
        }
        for c in report.checks:
            tag = "PASS" if c.passed else "FAIL"
            print(f"{tag}  {c.name}: observed {c.observed:+.4f}, expected {c.expected}")
        passed = report.passed
    else:
        print(f"slope {fit.slope:+.4f} over t in [{args.tmin:g}, {args.tmax:g}]")

    json_path = out / "rates_fit.json"
    _dump_json(fit_payload, json_path)
    print(f"wrote {csv_path} and {json_path}")
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# decompose
# ---------------------------------------------------------------------------


def cmd_decompose(args) -> int:
    if args.n not in (1, 2):
        print("decompose snapshots support n = 1 or 2", file=sys.stderr)
        return 2
    data = data_library(args.data, sigma=args.sigma)
    if data.physical is None:
        print(f"{data.label} has no physical-space form for the grid", file=sys.stderr)
        return 2
    u0 = grid_from_physical(data, n=args.n, L=args.grid_extent, N=args.grid_points)
    u1 = grid_from_physical(data, n=args.n, L=args.grid_extent, N=args.grid_points)
    u, parts = evolve_grid(u0, u1, args.t)
    emt2 = math.exp(-0.5 * args.t)

    out = _out_dir(args)
    scaled_w = u.like(emt2 * parts["w"].values)
    residual = u.like(u.values - scaled_w.values - parts["v"].values)
    fields = {
        "u": u,
        "wave_part": scaled_w,
        "heat_part": parts["v"],
        "wave_profile_part": parts["wave_profile_part"],
        "diffusive_part": parts["diffusive_part"],
        "residual": residual,
    }
    written = []
    if args.n == 1:
        csv_path = out / "decompose_snapshot.csv"
        write_grid_csv(csv_path, fields)
        written.append(csv_path)
    for name, fieldv in fields.items():
        bin_path = out / f"decompose_{name}.bin"
        write_grid_binary(bin_path, fieldv)
        written.append(bin_path)

    norms = {name: grid_fourier_norm(fieldv) for name, fieldv in fields.items()}
    payload = {
        "t": args.t,
        "n": args.n,
        "grid": {"N": args.grid_points, "L": args.grid_extent},
        "fourier_norms": norms,
        "seed": args.seed,
    }
    json_path = out / "decompose_norms.json"
    _dump_json(payload, json_path)
    written.append(json_path)

    print(f"t = {args.t:g}, n = {args.n}")
    for name, value in norms.items():
        print(f"||{name}|| = {_fmt_float(value)}")
    print("wrote " + ", ".join(str(p) for p in written))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dwave",
        description="Asymptotic-profile toolkit for the linear damped wave equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_coeffs = sub.add_parser("coeffs", help="print exact coefficient tables")
    p_coeffs.add_argument("--L", type=int, metavar="J", help="sqrt-derivative constants up to J")
    p_coeffs.add_argument("--m", type=int, help="alpha (j+k <= m) and beta (l <= m) tables")
    p_coeffs.add_argument("--beta", type=int, metavar="M", help="beta coefficients up to M")
    p_coeffs.add_argument("--sing", type=int, metavar="K", help="r->0 limits up to order K")
    p_coeffs.add_argument("--ik", type=int, metavar="K", help="wave kernels I_k up to K")
    p_coeffs.set_defaults(func=cmd_coeffs)

    p_lemmas = sub.add_parser("lemmas", help="run the identity verification suites")
    p_lemmas.add_argument("--max-k", type=int, default=_env("max_k", 8))
    p_lemmas.add_argument(
        "--self-test-corrupt",
        action="store_true",
        help="flip one exact coefficient to confirm the harness detects it",
    )
    p_lemmas.set_defaults(func=cmd_lemmas)

    p_equiv = sub.add_parser("equiv", help="check the two diffusive expansions agree")
    p_equiv.add_argument("--m", type=int, default=_env("m", 8), help="maximum expansion order")
    p_equiv.set_defaults(func=cmd_equiv)

    p_rates = sub.add_parser("rates", help="sweep remainder norms and fit decay rates")
    p_rates.add_argument("--n", type=int, default=_env("n", 1), help="spatial dimension")
    p_rates.add_argument("--b", type=int, default=_env("b", 1), help="wave profile order")
    p_rates.add_argument("--l", type=int, default=_env("l", 1), help="diffusive profile order")
    p_rates.add_argument("--i", type=int, choices=(1, 2), help="sweep a single piece")
    p_rates.add_argument(
        "--region", choices=("L", "M", "H", "ALL"), default=_env("region", "ALL")
    )
    p_rates.add_argument("--theorem1", action="store_true", help="verify the predicted rates")
    p_rates.set_defaults(func=cmd_rates)

    p_dec = sub.add_parser("decompose", help="grid snapshots of the wave/heat decomposition")
    p_dec.add_argument("--n", type=int, default=_env("n", 1))
    p_dec.add_argument("--t", type=float, default=_env("t", 20.0))
    p_dec.add_argument("--grid-points", type=int, default=_env("grid_points", 4096))
    p_dec.add_argument("--grid-extent", type=float, default=_env("grid_extent", 80.0))
    p_dec.set_defaults(func=cmd_decompose)

    for p in (p_coeffs, p_lemmas, p_equiv, p_rates, p_dec):
        p.add_argument(
            "--format", choices=("table", "json", "csv"), default=_env("format", "table")
        )
        p.add_argument("--seed", type=int, default=_env("seed", 1234))
        p.add_argument(
            "--out",
            default=_env("out", "dwave_out" if p in (p_rates, p_dec) else ""),
            help="output directory (file-writing subcommands only write here)",
        )
    p_rates.add_argument("--data", default=_env("data", "gaussian"))
    p_rates.add_argument("--sigma", type=float, default=_env("sigma", 1.0))
    p_rates.add_argument("--R", type=float, default=_env("r_cut", 12.0), help="quadrature cutoff")
    p_rates.add_argument("--nodes", type=int, default=_env("nodes", 72), help="nodes per panel")
    p_rates.add_argument("--tmin", type=float, default=_env("tmin", 50.0))
    p_rates.add_argument("--tmax", type=float, default=_env("tmax", 800.0))
    p_rates.add_argument("--samples", type=int, default=_env("samples", 12))
    p_dec.add_argument("--data", default=_env("data", "gaussian"))
    p_dec.add_argument("--sigma", type=float, default=_env("sigma", 1.0))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AccuracyError as exc:
        print(f"accuracy error: {exc} (tail estimate {exc.tail_estimate:.3e})", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
