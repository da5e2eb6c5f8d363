"""Command line front end: ``bose-scatter <command> ...``.

Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence.
Every command accepts ``--convention paper_constant`` to normalize the
stimulated terms by the halved critical density instead of the value of
the defining integral; this doubles the thermal-thermal term.

CSV output is comma separated with 17 significant digits, a header row and
``#``-prefixed metadata lines; it contains no timestamps, so repeated runs
with the same flags are byte-identical. JSON output follows
``schemas/output.schema.json`` shipped with the package.
"""

import argparse
import datetime
import json
import math
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .config import QuadratureConfig
from .errors import ConvergenceError, DomainError
from .lab_units import (LabParameters, PolarizationMode, delta_from_angle,
                        delta_small_angle, polarization_factor,
                        scaled_photon_momentum)
from .oracle import (box_model_for_delta, box_rate_components, build_box_model,
                     stimulated_energy_balance, term2b_monte_carlo,
                     term2b_quadrature_3d)
from .scattering import (FIGURE1_DELTAS, RateBreakdown, ScaledPoint, expected_sum_rule,
                         sum_rule, sweep_delta, sweep_tau, thermal_thermal_term,
                         total_rate)
from .thermo import CONVENTIONS, critical_density, thermo_state

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

THREADS_ENV = "BOSE_SCATTER_THREADS"

ROW_FIELDS = ("delta", "tau", "unstimulated", "thermal_thermal", "condensate",
              "total", "quadrature_error")

# option name -> (type, default); these may also come from --config files
_COMMON = {
    "rel_tol": (float, 1e-8),
    "max_subdivisions": (int, 2000),
    "convention": (str, "integral"),
    "p_truncation_multiplier": (float, 8.4),
    "format": (str, "text"),
    "out": (str, None),
    "seed": (int, 12345),
}


class UsageError(Exception):
    pass


def fmt(x):
    """17 significant digits, the CSV number format."""
    return f"{x:.17g}"


def _config_from_args(args):
    return QuadratureConfig(rel_tol=args.rel_tol, max_subdivisions=args.max_subdivisions,
                            n_total_convention=args.convention,
                            p_truncation_multiplier=args.p_truncation_multiplier)


def _metadata_lines(config, extra=()):
    lines = [f"# bosescatter {__version__}"]
    lines += [f"# {k} = {v}" for k, v in config.as_dict().items()]
    lines += [f"# {line}" for line in extra]
    return lines


def _json_metadata(config, **extra):
    meta = {
        "engine_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "config": config.as_dict(),
    }
    meta.update(extra)
    return meta


def _emit(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _dump_json(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _row_values(delta, tau, result):
    if isinstance(result, RateBreakdown):
        return [getattr(result, f) for f in ROW_FIELDS]
    return [delta, tau] + [math.nan] * (len(ROW_FIELDS) - 2)


def _thread_cap():
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None


def _text_table(pairs):
    width = max(len(k) for k, _ in pairs)
    out = []
    for k, v in pairs:
        v = repr(v) if isinstance(v, float) else str(v)
        out.append(f"{k:<{width}}  {v}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# commands


def cmd_rate(args):
    config = _config_from_args(args)
    point = ScaledPoint(args.delta, args.tau)
    result = total_rate(point, config)
    if args.format == "json":
        text = _dump_json({"kind": "rate", "metadata": _json_metadata(config),
                           "result": result.as_dict()})
    elif args.format == "csv":
        lines = _metadata_lines(config) + [",".join(ROW_FIELDS),
                                           ",".join(fmt(v) for v in _row_values(0, 0, result))]
        text = "\n".join(lines) + "\n"
    else:
        text = _text_table(list(result.as_dict().items()))
    _emit(text, args.out)
    return EXIT_OK


def _sweep_output(args, config, sweep_var, fixed, rows):
    failures = [(d, t, r) for d, t, r in rows if not isinstance(r, RateBreakdown)]
    if args.format == "json":
        body = {
            "kind": "sweep",
            "metadata": _json_metadata(config, sweep_variable=sweep_var, fixed=fixed,
                                       failures=len(failures)),
            "rows": [r.as_dict() for _, _, r in rows if isinstance(r, RateBreakdown)],
            "errors": [{"delta": d, "tau": t, "message": str(r)} for d, t, r in failures],
        }
        text = _dump_json(body)
    else:
        extra = [f"sweep {sweep_var} at {k} = {fmt(v)}" for k, v in fixed.items()]
        extra += [f"error delta={fmt(d)} tau={fmt(t)}: {r}" for d, t, r in failures]
        lines = _metadata_lines(config, extra) + [",".join(ROW_FIELDS)]
        lines += [",".join(fmt(v) for v in _row_values(d, t, r)) for d, t, r in rows]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return _failure_exit(len(failures), len(rows))


def _failure_exit(n_fail, n_total):
    if n_fail:
        print(f"warning: {n_fail} of {n_total} points failed", file=sys.stderr)
    if n_fail > 0.1 * n_total:
        return EXIT_NUMERICAL
    return EXIT_OK


def _grid(lo, hi, steps, log=False):
    if steps < 1:
        raise UsageError("steps must be >= 1")
    if steps == 1:
        return [float(lo)]
    if log:
        if lo <= 0:
            raise UsageError("log grid needs a positive lower bound")
        return [float(x) for x in np.geomspace(lo, hi, steps)]
    return [float(x) for x in np.linspace(lo, hi, steps)]


def cmd_sweep_tau(args):
    config = _config_from_args(args)
    if args.delta <= 0:
        raise DomainError("delta must be positive")
    grid = _grid(args.tau_min, args.tau_max, args.steps)
    rows = [(args.delta, t, r) for t, r in sweep_tau(args.delta, grid, config, _thread_cap())]
    return _sweep_output(args, config, "tau", {"delta": args.delta}, rows)


def cmd_sweep_delta(args):
    config = _config_from_args(args)
    if args.tau <= 0:
        raise DomainError("tau must be positive")
    grid = _grid(args.delta_min, args.delta_max, args.steps, args.log)
    rows = [(d, args.tau, r) for d, r in sweep_delta(args.tau, grid, config, _thread_cap())]
    return _sweep_output(args, config, "delta", {"tau": args.tau}, rows)


def figure1_filename(delta):
    return f"figure1_delta_{delta:g}.csv"


def figure1_csv(delta, results, config):
    """CSV text for one figure curve: ``tau,total,condensate_contribution``."""
    failures = [(t, r) for t, r in results if not isinstance(r, RateBreakdown)]
    extra = [f"delta = {fmt(delta)}",
             "total: all terms (solid curve); condensate_contribution: condensate term (dashed)"]
    extra += [f"error tau={fmt(t)}: {r}" for t, r in failures]
    lines = _metadata_lines(config, extra) + ["tau,total,condensate_contribution"]
    for t, r in results:
        if isinstance(r, RateBreakdown):
            lines.append(f"{fmt(t)},{fmt(r.total)},{fmt(r.condensate)}")
        else:
            lines.append(f"{fmt(t)},nan,nan")
    return "\n".join(lines) + "\n", len(failures)


def cmd_figure1(args):
    config = _config_from_args(args)
    deltas = args.delta_list or list(FIGURE1_DELTAS)
    if any(d <= 0 for d in deltas):
        raise DomainError("delta must be positive")
    lo, hi = args.tau_range
    if not 0 < lo < hi:
        raise UsageError("tau range must satisfy 0 < min < max")
    grid = _grid(lo, hi, args.steps)
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    n_fail = 0
    n_total = 0
    for delta in deltas:
        results = sweep_tau(delta, grid, config, _thread_cap())
        text, fails = figure1_csv(delta, results, config)
        (out_dir / figure1_filename(delta)).write_text(text, encoding="utf-8", newline="\n")
        n_fail += fails
        n_total += len(results)
    return _failure_exit(n_fail, n_total)


def cmd_sumrule(args):
    config = _config_from_args(args)
    value = sum_rule(args.tau, config)
    n_total = critical_density(config.n_total_convention)
    expected = expected_sum_rule(args.tau, config.n_total_convention)
    result = {
        "tau": args.tau,
        "sum_rule": value,
        "n_total": n_total,
        "ratio_to_n_total": value / n_total,
        "expected": expected,
        "ratio_to_expected": value / expected if expected else math.nan,
    }
    if args.format == "json":
        text = _dump_json({"kind": "sumrule", "metadata": _json_metadata(config),
                           "result": result})
    elif args.format == "csv":
        lines = _metadata_lines(config) + [",".join(result),
                                           ",".join(fmt(v) for v in result.values())]
        text = "\n".join(lines) + "\n"
    else:
        text = _text_table(list(result.items()))
    _emit(text, args.out)
    return EXIT_OK


def cmd_convert(args):
    params = LabParameters.from_lab(args.mass_amu, args.wavelength_nm, args.tc_nk)
    k = scaled_photon_momentum(params)
    if args.angle_mrad is not None:
        theta = args.angle_mrad * 1e-3
    else:
        theta = math.radians(args.angle_deg)
    result = {
        "k": k,
        "theta_rad": theta,
        "delta": delta_from_angle(theta, k),
        "delta_small_angle": delta_small_angle(theta, k),
        "theta_over_delta": theta / delta_from_angle(theta, k),
    }
    config = _config_from_args(args)
    if args.polarization:
        result["polarization"] = PolarizationMode(args.polarization).value
        result["polarization_factor"] = polarization_factor(theta, args.polarization)
    if args.tau is not None:
        rb = total_rate(ScaledPoint(result["delta"], args.tau), config)
        result["tau"] = args.tau
        result["rate_total"] = rb.total
        if args.polarization:
            result["rate_total_polarized"] = rb.total * result["polarization_factor"]
    if args.format == "json":
        text = _dump_json({"kind": "convert", "metadata": _json_metadata(config),
                           "result": result})
    elif args.format == "csv":
        text = ",".join(result) + "\n" + ",".join(
            v if isinstance(v, str) else fmt(v) for v in result.values()) + "\n"
    else:
        text = _text_table(list(result.items()))
    _emit(text, args.out)
    return EXIT_OK


def cmd_oracle(args):
    config = _config_from_args(args)
    kind = args.oracle
    if kind in ("quad3d", "mc"):
        point = ScaledPoint(args.delta, args.tau)
        thermo = thermo_state(args.tau, config.n_total_convention)
        reduced, reduced_err = thermal_thermal_term(point, thermo, config)
        if kind == "quad3d":
            value, err = term2b_quadrature_3d(point, thermo, config)
            result = {"delta": args.delta, "tau": args.tau, "quad3d": value,
                      "quad3d_error": err, "reduced_1d": reduced,
                      "relative_difference": (value - reduced) / reduced if reduced else 0.0}
        else:
            value, stderr = term2b_monte_carlo(point, thermo, args.samples, args.seed, config)
            result = {"delta": args.delta, "tau": args.tau, "samples": args.samples,
                      "seed": args.seed, "monte_carlo": value, "standard_error": stderr,
                      "reduced_1d": reduced,
                      "pull": (value - reduced) / stderr if stderr else 0.0}
    elif kind == "box":
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            model = box_model_for_delta(args.delta, args.tau, args.modes_per_delta,
                                        args.max_mode)
            comps = box_rate_components(model, (0, 0, args.modes_per_delta))
        cont = total_rate(ScaledPoint(args.delta, args.tau), config)
        result = {"delta": args.delta, "tau": args.tau, "max_mode": args.max_mode,
                  "modes_per_delta": args.modes_per_delta, "box_scale": model.box_scale,
                  "fugacity": model.fugacity,
                  "boundary_occupancy": model.boundary_occupancy(),
                  "box_total": comps["total"], "box_thermal_thermal": comps["thermal_thermal"],
                  "box_condensate": comps["condensate"], "continuum_total": cont.total,
                  "cutoff_warning": bool(caught)}
    else:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            model = build_box_model(args.tau, args.box_scale, args.max_mode)
        bal = stimulated_energy_balance(model)
        result = {"tau": args.tau, "box_scale": args.box_scale, "max_mode": args.max_mode,
                  "stimulated_flow": bal.stimulated, "unstimulated_flow": bal.unstimulated,
                  "gross_stimulated_flow": bal.gross,
                  "relative_stimulated_flow": bal.stimulated / bal.gross if bal.gross else 0.0,
                  "unstimulated_per_transition": bal.unstimulated / bal.transitions,
                  "cutoff_warning": bool(caught)}
    if args.format == "json":
        text = _dump_json({"kind": f"oracle_{kind}", "metadata": _json_metadata(config),
                           "result": result})
    elif args.format == "csv":
        lines = _metadata_lines(config) + [",".join(result), ",".join(
            fmt(v) if isinstance(v, float) else str(v) for v in result.values())]
        text = "\n".join(lines) + "\n"
    else:
        text = _text_table(list(result.items()))
    _emit(text, args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# parsing


def _add_common(p, formats=("text", "json", "csv")):
    p.add_argument("--config", metavar="PATH",
                   help="key=value file; keys are option names, flags override it")
    p.add_argument("--rel-tol", dest="rel_tol", type=float)
    p.add_argument("--max-subdivisions", dest="max_subdivisions", type=int)
    p.add_argument("--convention", choices=CONVENTIONS,
                   help="N_total normalization (default: integral)")
    p.add_argument("--p-truncation-multiplier", dest="p_truncation_multiplier", type=float)
    p.add_argument("--format", choices=formats)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--seed", type=int)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bose-scatter",
        description="Bose-enhanced light scattering off an ideal Bose gas.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="R(delta, tau) with its three terms")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_rate)

    p = sub.add_parser("sweep-tau", help="rates on a tau grid at fixed delta")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--tau-min", type=float, default=0.6)
    p.add_argument("--tau-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=141)
    _add_common(p, ("csv", "json"))
    p.set_defaults(func=cmd_sweep_tau)

    p = sub.add_parser("sweep-delta", help="rates on a delta grid at fixed tau")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--delta-min", type=float, default=0.01)
    p.add_argument("--delta-max", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--log", action="store_true", help="geometric grid")
    _add_common(p, ("csv", "json"))
    p.set_defaults(func=cmd_sweep_delta)

    p = sub.add_parser("figure1", help="one tau-sweep CSV per delta")
    p.add_argument("--delta-list", type=float, nargs="+")
    p.add_argument("--tau-range", type=float, nargs=2, default=(0.6, 2.0),
                   metavar=("MIN", "MAX"))
    p.add_argument("--steps", type=int, default=141)
    _add_common(p, ("csv",))
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("sumrule", help="angle-integrated enhancement")
    p.add_argument("--tau", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_sumrule)

    p = sub.add_parser("convert", help="lab units to delta")
    p.add_argument("--mass-amu", type=float, required=True)
    p.add_argument("--wavelength-nm", type=float, required=True)
    p.add_argument("--tc-nk", type=float, required=True)
    angle = p.add_mutually_exclusive_group(required=True)
    angle.add_argument("--angle-mrad", type=float)
    angle.add_argument("--angle-deg", type=float)
    p.add_argument("--polarization", choices=[m.value for m in PolarizationMode])
    p.add_argument("--tau", type=float, help="also evaluate R at the converted delta")
    _add_common(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("oracle", help="independent cross-checks")
    osub = p.add_subparsers(dest="oracle", required=True)
    for name, helptext in (("quad3d", "2D nested quadrature of the thermal term"),
                           ("mc", "Monte Carlo estimate of the thermal term")):
        q = osub.add_parser(name, help=helptext)
        q.add_argument("--delta", type=float, required=True)
        q.add_argument("--tau", type=float, required=True)
        if name == "mc":
            q.add_argument("--samples", type=int, default=1_000_000)
        _add_common(q)
        q.set_defaults(func=cmd_oracle)
    q = osub.add_parser("box", help="discrete momentum box vs continuum")
    q.add_argument("--delta", type=float, required=True)
    q.add_argument("--tau", type=float, required=True)
    q.add_argument("--modes-per-delta", type=int, default=2)
    q.add_argument("--max-mode", type=int, default=34)
    _add_common(q)
    q.set_defaults(func=cmd_oracle)
    q = osub.add_parser("energy", help="stimulated energy balance in a box")
    q.add_argument("--tau", type=float, required=True)
    q.add_argument("--box-scale", type=float, default=10.0)
    q.add_argument("--max-mode", type=int, default=16)
    _add_common(q)
    q.set_defaults(func=cmd_oracle)
    return parser


def read_config_file(path):
    """Parse ``key=value`` lines; ``#`` starts a comment, dashes equal underscores."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in _COMMON:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _resolve_common(args):
    from_file = read_config_file(args.config) if getattr(args, "config", None) else {}
    for key, (typ, default) in _COMMON.items():
        if getattr(args, key, None) is not None:
            continue
        if key in from_file:
            try:
                setattr(args, key, typ(from_file[key]))
            except ValueError:
                raise UsageError(f"bad value for {key}: {from_file[key]!r}") from None
        else:
            setattr(args, key, default)
    if args.command in ("sweep-tau", "sweep-delta") and args.format == "text":
        args.format = "csv"
    if args.command == "figure1":
        args.format = "csv"
    if args.convention not in CONVENTIONS:
        raise UsageError(f"convention must be one of {CONVENTIONS}")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _resolve_common(args)
        return args.func(args)
    except (DomainError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        term = f" in {exc.term}" if exc.term else ""
        print(f"error: numerical non-convergence{term}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
