"""Command-line front end.

Subcommands: perimeter, density, heat-content, expansion, verify, sample.
Inputs come from JSON specs (inline, or @file), with a few shorthands
for the common cases (``--body interval:0,1``, ``--measure stable:0.5``).
Flags override values from ``--config``.  Output is CSV or JSON with all
floats at 17 significant digits; given the same config and seed the
output is byte-identical.  ``--plot`` additionally renders a figure next
to the delimited output (the default emits data only).

Exit codes: 0 success / verification PASS, 1 verification FAIL,
2 configuration error, 3 numeric failure, 4 inconclusive verification.
"""

import argparse
import io
import json
import math
import os
import sys

import numpy as np

from .errors import DomainError, NumericError, ResourceLimitError
from .expansion import prop_expansion_1d, stable_expansion, verify_limit
from .geometry import Interval
from .heat import (
    HeatContentRequest,
    heat_content_exact_1d,
    heat_content_mc,
    heat_content_quadrature,
    nonlocal_perimeter,
)
from .jsonspec import body_from_json, measure_from_json, params_from_json
from .levy import FiniteAtomic, IsotropicStable, OneDimStable
from .stable import (
    IsotropicStableParams,
    SkewedStableParams,
    density_fourier,
    density_series_1d,
    density_series_isotropic,
    sample,
)

CONFIG_KEYS = {
    "body", "measure", "params", "tgrid", "method", "tol", "seed",
    "output", "format", "theorem", "order", "alpha", "beta", "d", "x",
    "depth", "n_samples", "t", "n", "engine", "plot", "threads",
}


def fmt(x):
    """Round-trip-safe decimal rendering (17 significant digits)."""
    return f"{float(x):.17g}"


def _read_spec(text):
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return json.load(fh)
    if text.lstrip().startswith("{"):
        return json.loads(text)
    return text


def parse_body(text):
    spec = _read_spec(text)
    if isinstance(spec, dict):
        return body_from_json(spec)
    if spec.startswith("interval:"):
        a, b = (float(v) for v in spec.split(":", 1)[1].split(","))
        return body_from_json({"shape": "interval", "a": a, "b": b})
    if spec.startswith("ball:"):
        vals = [float(v) for v in spec.split(":", 1)[1].split(",")]
        d = int(vals[0])
        return body_from_json({"shape": "ball", "d": d,
                               "center": [0.0] * d, "radius": vals[1]})
    raise DomainError(f"unrecognised body spec {text!r}")


def parse_measure(text, d=1):
    spec = _read_spec(text)
    if isinstance(spec, dict):
        return measure_from_json(spec)
    if spec.startswith("stable:"):
        return measure_from_json({
            "family": "isotropic_stable",
            "alpha": float(spec.split(":", 1)[1]), "d": d,
        })
    if spec.startswith("skewed:"):
        a, b = (float(v) for v in spec.split(":", 1)[1].split(","))
        return measure_from_json({"family": "one_dim_stable", "alpha": a, "beta": b})
    raise DomainError(f"unrecognised measure spec {text!r}")


def parse_tgrid(text):
    """Geometric grid spec 't0,ratio,count' -> ascending tuple."""
    spec = _read_spec(text)
    if isinstance(spec, dict):
        t0, ratio, count = spec["t0"], spec["ratio"], spec["count"]
    else:
        t0, ratio, count = spec.split(",")
        t0, ratio, count = float(t0), float(ratio), int(count)
    if t0 <= 0 or not 0 < ratio < 1 or count < 1:
        raise DomainError("tgrid needs t0 > 0, 0 < ratio < 1, count >= 1")
    return tuple(sorted(t0 * ratio ** k for k in range(count)))


def _params_from_args(args):
    beta = getattr(args, "beta", 0.0) or 0.0
    d = getattr(args, "d", 1) or 1
    if beta == 0.0 and getattr(args, "alpha", None) is not None and \
            (d > 1 or not getattr(args, "skewed", False)):
        return IsotropicStableParams(args.alpha, d)
    return params_from_json({"alpha": args.alpha, "beta": beta, "d": d})


def _write_output(args, text, suffix=""):
    if args.output:
        path = args.output + suffix if suffix else args.output
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        return path
    sys.stdout.write(text)
    return None


def _json_dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _plot_path(args, default_name):
    base = args.output if args.output else default_name
    root, _ = os.path.splitext(base)
    return root + ".png"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_perimeter(args):
    body = parse_body(args.body)
    measure = parse_measure(args.measure, d=body.dimension)
    value = nonlocal_perimeter(body, measure)
    if isinstance(measure, (IsotropicStable, OneDimStable)) \
            and isinstance(body, Interval):
        method = "closed-form"
    elif isinstance(measure, FiniteAtomic):
        method = "exact-sum"
    else:
        method = "quadrature"
    out = {
        "value": value if math.isfinite(value) else "inf",
        "divergent": not math.isfinite(value),
        "method": method,
        "body": _read_spec(args.body),
        "measure": _read_spec(args.measure),
    }
    _write_output(args, _json_dump(out))
    return 0


def _density_rows(params, xs):
    rows = []
    for x in xs:
        if isinstance(params, IsotropicStableParams):
            if params.alpha < 1.0:
                sv = density_series_isotropic(params, x).value
            else:
                sv = float("nan")
            fv = density_fourier(params, x)
        else:
            sv = density_series_1d(params, x).value
            fv = density_fourier(params, x)
        rows.append((x, sv, fv, abs(sv - fv)))
    return rows


def cmd_density(args):
    params = _params_from_args(args)
    xs = [float(v) for v in str(args.x).split(",")]
    rows = _density_rows(params, xs)
    if args.format == "json":
        out = [dict(zip(("x", "series_value", "fourier_value", "abs_diff"), r))
               for r in rows]
        _write_output(args, _json_dump(out))
    else:
        buf = io.StringIO()
        buf.write("x,series_value,fourier_value,abs_diff\n")
        for r in rows:
            buf.write(",".join(fmt(v) for v in r) + "\n")
        _write_output(args, buf.getvalue())
    if args.plot:
        from .plotting import density_figure
        density_figure(rows, _plot_path(args, "density.png"))
    return 0


def cmd_heat_content(args):
    body = parse_body(args.body)
    if args.measure:
        driver = parse_measure(args.measure, d=body.dimension)
    else:
        driver = _params_from_args(args)
    t_grid = parse_tgrid(args.tgrid)
    req = HeatContentRequest(body=body, driver=driver, t_grid=t_grid,
                             method=args.method, seed=args.seed,
                             n_samples=args.n_samples)
    if args.method == "mc":
        report = heat_content_mc(req)
    elif args.method == "exact_1d":
        from .heat import driver_params
        params = driver_params(driver)
        values = [heat_content_exact_1d(body, params, t) for t in t_grid]
        from .reports import EvalReport
        report = EvalReport(
            t_grid=np.array(t_grid), values=np.array(values),
            errors=np.full(len(t_grid), 1e-12),
            stderr=np.zeros(len(t_grid)), method="exact_1d",
            volume=body.volume,
        )
    else:
        report = heat_content_quadrature(req)
    if args.format == "json":
        _write_output(args, _json_dump(report.to_dict()))
    else:
        buf = io.StringIO()
        buf.write("t,H,H_over_t,stderr,method\n")
        for t, h, hot, se, m in report.rows():
            buf.write(f"{fmt(t)},{fmt(h)},{fmt(hot)},{fmt(se)},{m}\n")
        _write_output(args, buf.getvalue())
    if args.plot:
        from .plotting import heat_content_figure
        heat_content_figure(report, _plot_path(args, "heat_content.png"))
    return 0


def cmd_expansion(args):
    body = parse_body(args.body)
    params = _params_from_args(args)
    if isinstance(params, SkewedStableParams) or args.form == "interval":
        if not isinstance(body, Interval):
            raise DomainError("the interval expansion form requires an interval")
        series = prop_expansion_1d(
            body,
            params if isinstance(params, SkewedStableParams)
            else SkewedStableParams(params.alpha, 0.0),
            depth=args.depth,
        )
    else:
        series = stable_expansion(body, body.dimension, params.alpha,
                                  depth=args.depth or 3)
    _write_output(args, _json_dump(series.to_dict()))
    if args.plot:
        from .plotting import expansion_figure
        from .heat import driver_params
        t_grid = np.geomspace(1e-4, min(series.t_max, 0.25), 12)
        if isinstance(body, Interval):
            p1 = params if isinstance(params, SkewedStableParams) \
                else SkewedStableParams(params.alpha, 0.0)
            h_vals = np.array([heat_content_exact_1d(body, p1, t) for t in t_grid])
        else:
            req = HeatContentRequest(body=body, driver=params, t_grid=tuple(t_grid))
            h_vals = heat_content_quadrature(req).values
        expansion_figure(series, t_grid, h_vals, _plot_path(args, "expansion.png"))
    return 0


def cmd_verify(args):
    body = parse_body(args.body)
    params = _params_from_args(args)
    t_grid = parse_tgrid(args.tgrid)
    report = verify_limit(args.theorem, body, params, t_grid,
                          engine=args.engine, order=args.order, tol=args.tol)
    payload = report.to_dict()
    payload["theorem"] = args.theorem
    _write_output(args, _json_dump(payload))
    if args.output:
        buf = io.StringIO()
        buf.write("t,H,residual,normalized_residual\n")
        for t, h, r, nr in zip(report.t_grid, report.values,
                               report.residuals, report.normalized_residuals):
            buf.write(f"{fmt(t)},{fmt(h)},{fmt(r)},{fmt(nr)}\n")
        root, _ = os.path.splitext(args.output)
        with open(root + ".csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    if args.plot:
        from .plotting import verify_figure
        verify_figure(report, _plot_path(args, f"verify_{args.theorem}.png"))
    if report.verdict == "PASS":
        return 0
    if report.verdict == "INCONCLUSIVE":
        return 4
    return 1


def cmd_sample(args):
    params = _params_from_args(args)
    draws = sample(params, args.t, args.seed, args.n)
    draws = np.atleast_2d(draws.T).T if draws.ndim == 1 else draws
    d = draws.shape[1] if draws.ndim > 1 else 1
    buf = io.StringIO()
    if draws.ndim == 1:
        draws = draws[:, None]
    buf.write(",".join(f"x{i+1}" for i in range(draws.shape[1])) + "\n")
    for row in draws:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    _write_output(args, buf.getvalue())
    if args.plot:
        from .plotting import samples_figure
        samples_figure(draws, _plot_path(args, "samples.png"))
    return 0


# ---------------------------------------------------------------------------
# parser / config merge
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--output", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--plot", action="store_true",
                   help="also render a figure next to the output")
    p.add_argument("--threads", type=int, default=None,
                   help="parallelism level (default: NONLOCAL_HEAT_THREADS or all cores)")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="nonlocal-heat",
        description="Heat content of convolution semigroups: densities, "
                    "perimeters, expansions, and limit verification.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("perimeter", help="nonlocal perimeter of a body")
    p.add_argument("--body", required=True)
    p.add_argument("--measure", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_perimeter)

    p = sub.add_parser("density", help="stable density by series and inversion")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--skewed", action="store_true",
                   help="force the skewed 1-d law even for beta = 0")
    p.add_argument("--x", required=True, help="evaluation point(s), comma separated")
    _add_common(p)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("heat-content", help="H(t) on a t grid")
    p.add_argument("--body", required=True)
    p.add_argument("--measure", help="measure spec (defaults to stable params)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--skewed", action="store_true")
    p.add_argument("--tgrid", required=True, help="t0,ratio,count")
    p.add_argument("--method", choices=("quadrature", "mc", "exact_1d"),
                   default="quadrature")
    p.add_argument("--n-samples", dest="n_samples", type=int, default=1_000_000)
    _add_common(p)
    p.set_defaults(func=cmd_heat_content)

    p = sub.add_parser("expansion", help="small-time expansion series (JSON)")
    p.add_argument("--body", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--skewed", action="store_true")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--form", choices=("auto", "general", "interval"), default="auto")
    _add_common(p)
    p.set_defaults(func=cmd_expansion)

    p = sub.add_parser("verify", help="verify a small-time limit numerically")
    p.add_argument("--theorem", required=True,
                   choices=("first-order", "eq222", "cor34", "thm3", "thm4", "prop-ii"))
    p.add_argument("--body", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--skewed", action="store_true")
    p.add_argument("--order", type=int, default=None, help="order n for cor34")
    p.add_argument("--tgrid", required=True)
    p.add_argument("--engine", choices=("exact_1d", "quadrature"), default="exact_1d")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="draw reproducible samples of X_t")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--skewed", action="store_true")
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--n", type=int, default=1000)
    _add_common(p)
    p.set_defaults(func=cmd_sample)
    return ap


def _merge_config(args, parser):
    if not getattr(args, "config", None):
        return args
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")
    # flags given on the command line take precedence over the file
    given = {a.split("=")[0].lstrip("-").replace("-", "_")
             for a in sys.argv if a.startswith("--")}
    for key, val in cfg.items():
        attr = key.replace("-", "_")
        if attr in given or not hasattr(args, attr):
            continue
        default = parser.get_default(attr)
        if getattr(args, attr) == default:
            if isinstance(val, (dict, list)):
                val = json.dumps(val)
            setattr(args, attr, val)
    return args


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _merge_config(args, parser)
        if getattr(args, "threads", None):
            os.environ["NONLOCAL_HEAT_THREADS"] = str(args.threads)
        return args.func(args)
    except (DomainError, json.JSONDecodeError, FileNotFoundError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (NumericError, ResourceLimitError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
