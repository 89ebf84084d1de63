"""Command-line front end.

    mmthz bands --freq 60.5
    mmthz attenuate --freq 183 --dist 100 --rain 2
    mmthz losprob --model uma --d1 18 --d2 63 --dmax 200 --step 10
    mmthz scatter --gamma-s 0.8 --hrms 0.0002 --alpha-r 3 --theta-i 30 --theta-s 30 --ri 5 --rs 5 --freq 300
    mmthz pattern --model sinc --params n=8 --sweep -0.5:0.5:0.01
    mmthz linkbudget --band thz --freq 300 --dist 10 --pt-dbm 20 --pattern-tx flattop:gm_db=25,gs_db=-5,theta_3db=0.05
    mmthz simulate --config scenario.toml --seed 7

Frequencies on the command line are in GHz, powers and gains in dB(m/i),
distances in meters. Failures print a JSON error object on stderr and exit
with 1 (usage), 2 (configuration) or 3 (numerical/table range).
"""

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import atmosphere, blockage, channel, netsim, registry, surface
from .antenna import gain
from .config import load_config, parse_kv, parse_pattern_spec, build_los_model, build_pattern, validate
from .errors import ConfigurationError, MmthzError
from .units import GHZ, db_to_linear, linear_to_db, watts_to_dbm

EXIT_OK, EXIT_USAGE, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(MmthzError):
    exit_code = EXIT_USAGE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _db(x):
    """dB value for JSON; -inf (zero power) becomes null."""
    v = float(linear_to_db(x))
    return v if math.isfinite(v) else None


def _num(x):
    v = float(x)
    return v if math.isfinite(v) else None


def _json(doc):
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _require_format(args, allowed):
    if args.format not in allowed:
        raise UsageError(f"{args.command} supports --format {'/'.join(allowed)} only")


def _tables(args):
    spectrum = atmosphere.load_spectrum(args.absorption_table) if getattr(args, "absorption_table", None) else None
    return spectrum


def cmd_bands(args):
    _require_format(args, ("json",))
    bands = registry.load_bands(args.bands_table) if args.bands_table else None
    found = registry.lookup_bands(args.freq * GHZ, bands)
    doc = {"freq_ghz": args.freq, "bands": [b.to_dict() for b in found]}
    validate(doc, "bands")
    return _json(doc)


def cmd_attenuate(args):
    _require_format(args, ("json",))
    f = args.freq * GHZ
    spectrum = _tables(args)
    if spectrum is None:
        spectrum = atmosphere.default_spectrum()
    att = spectrum.specific_attenuation(f)
    absorption_db = atmosphere.absorption_loss_db(args.dist, f, spectrum)
    tau = atmosphere.transmittance(args.dist, f, spectrum)
    rain_rate_db = None
    rain_db = 0.0
    if args.rain is not None:
        table = atmosphere.load_rain_table(args.rain_table) if args.rain_table else None
        rain_rate_db = atmosphere.rain_attenuation(f, args.rain, table)
        rain_db = rain_rate_db * args.dist / 1000.0
    foliage_db = atmosphere.foliage_loss(f) if args.foliage else 0.0
    doc = {
        "freq_ghz": args.freq,
        "dist_m": args.dist,
        "rain_mm_hr": args.rain,
        "absorption_db_per_km": att,
        "absorption_db": absorption_db,
        "transmittance": tau,
        "rain_db_per_km": rain_rate_db,
        "rain_db": rain_db,
        "foliage_db": foliage_db,
        "total_db": absorption_db + rain_db + foliage_db,
    }
    validate(doc, "attenuate")
    return _json(doc)


_LOS_FLAGS = ("d1", "d2", "mu", "mean_length", "mean_width", "radius", "body_radius",
              "variant", "delta")


def cmd_losprob(args):
    _require_format(args, ("csv", "json"))
    params = parse_kv(args.params)
    for key in _LOS_FLAGS:
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    model = build_los_model(args.model, params)
    if model is None:
        raise UsageError("losprob needs a LOS model")
    if not (args.step > 0 and args.dmax >= 0):
        raise UsageError("need --step > 0 and --dmax >= 0")
    n = int(math.floor(args.dmax / args.step + 1e-9)) + 1
    d = np.arange(n) * args.step
    p = np.atleast_1d(blockage.p_los(model, d))
    if args.format == "json":
        return _json({"model": args.model, "d_m": d.tolist(), "p_los": p.tolist()})
    return _csv(["d", "p_los"], zip(d, p))


def cmd_scatter(args):
    _require_format(args, ("json",))
    f = args.freq * GHZ
    theta_i = math.radians(args.theta_i)
    surf = surface.SurfaceSpec(gamma_s=args.gamma_s, h0=args.h0 if args.h0 is not None else args.hrms,
                               h_rms=args.hrms, alpha_r=args.alpha_r, area=args.area)
    geom = surface.ScatterGeometry(theta_i, math.radians(args.theta_s), args.ri, args.rs)
    rho = float(surface.rough_loss_factor(surf, f, theta_i))
    reflected, scattered, s2 = surface.power_split(surf, f, theta_i, 1.0)
    pr = surface.received_scattered_power(surf, geom, f, db_to_linear(args.pt_dbm) * 1e-3,
                                          db_to_linear(args.gt_db), db_to_linear(args.gr_db),
                                          domain=args.domain)
    doc = {
        "rho": rho,
        "S2": float(s2),
        "reflected_dB": _db(reflected),
        "scattered_dB": _db(scattered),
        "p_r_dBm": _num(watts_to_dbm(pr)),
        "surface_class": surface.classify(surf, f, theta_i),
        "critical_height_m": float(surface.critical_height(f, theta_i)),
        "F_alpha": surface.ds_normalization(surf.alpha_r, domain=args.domain, theta_r=theta_i),
    }
    validate(doc, "scatter")
    return _json(doc)


def _sweep(text):
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"--sweep expects start:stop:step, got {text!r}") from exc
    if step <= 0 or hi < lo:
        raise UsageError("--sweep needs step > 0 and stop >= start")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + np.arange(n) * step


def cmd_pattern(args):
    _require_format(args, ("csv", "json"))
    pattern = build_pattern(args.model, parse_kv(args.params))
    if pattern is None:
        raise UsageError("pattern needs a model")
    x = _sweep(args.sweep)
    g = np.atleast_1d(gain(pattern, x))
    with np.errstate(divide="ignore"):
        g_db = 10.0 * np.log10(g)
    if args.format == "json":
        return _json({"model": args.model, "angle": x.tolist(),
                      "gain_dB": [v if math.isfinite(v) else None for v in g_db.tolist()]})
    return _csv(["angle", "gain_dB"], zip(x, g_db))


ABSORPTION_WARN_DB_KM = 1.0


def _absorption_warning(f, spectrum):
    """Warn when an mmWave link sits within 2 GHz of a strong absorption line."""
    lo, hi = spectrum.span_hz
    for fa, att in zip(spectrum.freqs_hz, spectrum.att_db_km):
        if att >= ABSORPTION_WARN_DB_KM and abs(f - fa) <= 2 * GHZ and lo <= f <= hi:
            return (f"{f / GHZ:g} GHz is near the {fa / GHZ:g} GHz absorption line "
                    f"({att:g} dB/km) which the mmWave link model ignores")
    return None


def cmd_linkbudget(args):
    _require_format(args, ("json",))
    f = args.freq * GHZ
    r = args.dist
    pt_w = db_to_linear(args.pt_dbm) * 1e-3
    ptx = parse_pattern_spec(args.pattern_tx)
    prx = parse_pattern_spec(args.pattern_rx)
    g_t = 1.0 if ptx is None else float(gain(ptx, args.tx_angle))
    g_r = 1.0 if prx is None else float(gain(prx, args.rx_angle))
    spectrum = _tables(args) or atmosphere.default_spectrum()
    warnings = []
    h = 1.0
    if args.fade_mu is not None:
        h = channel.nakagami_power_quantile(args.fade_mu, args.fade_percentile / 100.0)
    rain_db = 0.0
    if args.rain is not None:
        rain_db = atmosphere.rain_loss_db(f, args.rain, r)
    doc = {"band": args.band, "freq_ghz": args.freq, "dist_m": r, "pt_dbm": args.pt_dbm}
    if args.band == "mmwave":
        state = channel.LinkState(args.state)
        alpha = args.alpha if args.alpha is not None else (2.0 if state is channel.LinkState.LOS else 4.0)
        law = (channel.PathLossLaw(db_to_linear(args.c_db), alpha) if args.c_db is not None
               else channel.PathLossLaw.free_space_intercept(f, alpha))
        pr = channel.mmwave_rx_power(pt_w, law, r, g_t, g_r, h)
        spreading, absorption = _db(law(r)), 0.0
        warn = _absorption_warning(f, spectrum)
        if warn:
            warnings.append(warn)
        doc["state"] = state.value
    else:
        pr = channel.thz_rx_power_los(pt_w, f, r, g_t, g_r, spectrum) * h
        spreading = _db(channel.fspl(f, r))
        absorption = -atmosphere.absorption_loss_db(r, f, spectrum)
    pr_dbm = watts_to_dbm(pr) - rain_db
    doc.update({
        "factors_db": {"spreading": spreading, "absorption": absorption, "rain": -rain_db if rain_db else 0.0,
                       "tx_gain": _db(g_t), "rx_gain": _db(g_r), "fade": _db(h)},
        "fade_percentile": args.fade_percentile if args.fade_mu is not None else None,
        "pr_dbm": _num(pr_dbm),
    })
    if args.surface:
        sp = parse_kv(args.surface)
        known = ("gamma_s", "h_rms", "r1", "r2", "theta_i_deg", "gamma_s_coef")
        unknown = set(sp) - set(known)
        if unknown:
            raise ConfigurationError(f"--surface: unknown parameter(s) {sorted(unknown)}")
        try:
            surf = surface.SurfaceSpec(gamma_s=float(sp["gamma_s"]), h_rms=float(sp.get("h_rms", 0.0)))
            geom = channel.ThzPathGeometry(float(sp["r1"]), float(sp["r2"]),
                                           gamma_s=float(sp.get("gamma_s_coef", 1.0)))
        except KeyError as exc:
            raise ConfigurationError(f"--surface: missing parameter {exc}") from exc
        theta_i = math.radians(float(sp.get("theta_i_deg", 0.0)))
        rho = float(surface.rough_loss_factor(surf, f, theta_i))
        gamma = rho * surf.gamma_s
        p_ref = channel.thz_reflected_path(pt_w, f, geom, gamma, g_t, g_r,
                                           spectrum if args.band == "thz" else _Lossless)
        doc["reflected_path"] = {"gamma": gamma, "rho": rho, "pr_dbm": _num(watts_to_dbm(p_ref))}
    doc["warnings"] = warnings
    for w in warnings:
        print(f"warning: {w}", file=args.stderr)
    validate(doc, "linkbudget")
    return _json(doc)


class _LosslessSpectrum:
    span_hz = (0.0, math.inf)

    @staticmethod
    def absorption_coefficient(freq_hz):
        return 0.0


_Lossless = _LosslessSpectrum()


def _ci_mode(args):
    return args.ci or os.environ.get("CI", "").lower() in ("1", "true", "yes")


def cmd_simulate(args):
    _require_format(args, ("csv", "json"))
    scenario, opts = load_config(args.config)
    if _ci_mode(args) and args.seed is None:
        raise UsageError("--seed is mandatory in CI mode")
    seed = args.seed if args.seed is not None else opts.get("seed")
    if seed is None:
        raise UsageError("no seed given (use --seed or [simulation] seed)")
    trials = args.trials or opts.get("trials", 10_000)
    workers = args.workers or opts.get("workers", 1)
    thresholds = opts.get("thresholds_db", netsim.DEFAULT_THRESHOLDS_DB)
    result = netsim.simulate(scenario, trials, seed, workers=workers, thresholds_db=thresholds)
    summary = {
        "trials": result.trials,
        "seed": result.seed,
        "mean_rate_bps": result.mean_rate,
        "outage_fraction": result.outage_fraction,
        "coverage": [{"threshold_db": t, "coverage": p} for t, p in result.coverage],
    }
    validate(summary, "simulate")
    if args.summary:
        with open(args.summary, "w") as fh:
            fh.write(_json(summary))
    if args.format == "json":
        return _json(summary)
    return _csv(["threshold_dB", "coverage"], result.coverage)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    parser = _Parser(prog="mmthz", description="mmWave/THz propagation and coverage toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("bands", parents=[common], help="look up candidate bands")
    p.add_argument("--freq", type=float, required=True, help="GHz")
    p.add_argument("--bands-table")
    p.set_defaults(func=cmd_bands, default_format="json")

    p = sub.add_parser("attenuate", parents=[common], help="absorption, rain and foliage loss")
    p.add_argument("--freq", type=float, required=True, help="GHz")
    p.add_argument("--dist", type=float, required=True, help="m")
    p.add_argument("--rain", type=float, help="rain rate, mm/hr")
    p.add_argument("--foliage", action="store_true", help="add single-stand foliage loss")
    p.add_argument("--absorption-table")
    p.add_argument("--rain-table")
    p.set_defaults(func=cmd_attenuate, default_format="json")

    p = sub.add_parser("losprob", parents=[common], help="LOS probability against distance")
    p.add_argument("--model", required=True,
                   choices=("uma", "umi", "nyu", "boolean", "losball", "human", "selfblock"))
    p.add_argument("--params", default="", help="key=value list, e.g. mu=1e-4,mean_length=15")
    for key in ("d1", "d2", "mu", "mean_length", "mean_width", "radius", "body_radius", "delta"):
        p.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float)
    p.add_argument("--variant", choices=blockage.HUMAN_VARIANTS)
    p.add_argument("--dmax", type=float, required=True)
    p.add_argument("--step", type=float, default=1.0)
    p.set_defaults(func=cmd_losprob, default_format="csv")

    p = sub.add_parser("scatter", parents=[common], help="rough-surface reflection and DS scattering")
    p.add_argument("--gamma-s", type=float, required=True)
    p.add_argument("--hrms", type=float, required=True, help="RMS height, m")
    p.add_argument("--h0", type=float, help="min-to-max protuberance, m (default: hrms)")
    p.add_argument("--alpha-r", type=float, required=True)
    p.add_argument("--theta-i", type=float, required=True, help="incidence angle, degrees")
    p.add_argument("--theta-s", type=float, required=True, help="observation angle, degrees")
    p.add_argument("--ri", type=float, required=True, help="Tx-surface distance, m")
    p.add_argument("--rs", type=float, required=True, help="surface-Rx distance, m")
    p.add_argument("--freq", type=float, required=True, help="GHz")
    p.add_argument("--pt-dbm", type=float, default=0.0)
    p.add_argument("--gt-db", type=float, default=0.0)
    p.add_argument("--gr-db", type=float, default=0.0)
    p.add_argument("--area", type=float, default=1.0, help="scattering aperture, m^2")
    p.add_argument("--domain", choices=("planar", "hemisphere"), default="planar")
    p.set_defaults(func=cmd_scatter, default_format="json")

    p = sub.add_parser("pattern", parents=[common], help="sweep an antenna pattern")
    p.add_argument("--model", required=True, choices=("ula", "sinc", "flattop", "multilobe", "gaussian", "cosine"))
    p.add_argument("--params", default="", help="e.g. n=8 or gm_db=20,gs_db=-5,theta_3db=0.1")
    p.add_argument("--sweep", default="-1.5707963267948966:1.5707963267948966:0.01",
                   help="start:stop:step in the pattern's native angle unit")
    p.set_defaults(func=cmd_pattern, default_format="csv")

    p = sub.add_parser("linkbudget", parents=[common], help="single-link budget")
    p.add_argument("--band", choices=("mmwave", "thz"), required=True)
    p.add_argument("--freq", type=float, required=True, help="GHz")
    p.add_argument("--dist", type=float, required=True, help="m")
    p.add_argument("--pt-dbm", type=float, required=True)
    p.add_argument("--pattern-tx", help="model:key=value,... (default isotropic)")
    p.add_argument("--pattern-rx")
    p.add_argument("--tx-angle", type=float, default=0.0, help="pattern-native angle")
    p.add_argument("--rx-angle", type=float, default=0.0)
    p.add_argument("--state", choices=("LOS", "NLOS"), default="LOS")
    p.add_argument("--alpha", type=float, help="path-loss exponent (mmwave)")
    p.add_argument("--c-db", type=float, help="path-loss intercept at 1 m, dB (mmwave)")
    p.add_argument("--fade-mu", type=float, help="Nakagami shape for the fade margin")
    p.add_argument("--fade-percentile", type=float, default=10.0)
    p.add_argument("--rain", type=float, help="mm/hr")
    p.add_argument("--surface", help="gamma_s=..,h_rms=..,r1=..,r2=..[,theta_i_deg=..]")
    p.add_argument("--absorption-table")
    p.set_defaults(func=cmd_linkbudget, default_format="json")

    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo coverage simulation")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--summary", help="also write the JSON summary here")
    p.add_argument("--ci", action="store_true", help="CI mode: --seed is mandatory")
    p.set_defaults(func=cmd_simulate, default_format="csv")
    return parser


def _error_doc(exc, code):
    return {"error": {"type": type(exc).__name__, "message": str(exc), "exit_code": code}}


def run(argv=None, stdout=None, stderr=None):
    """Run the CLI and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if not getattr(args, "command", None):
            raise UsageError("missing subcommand; choose from bands, attenuate, losprob, "
                             "scatter, pattern, linkbudget, simulate")
        if args.format is None:
            args.format = args.default_format
        args.stderr = stderr
        text = args.func(args)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            stdout.write(text)
        return EXIT_OK
    except MmthzError as exc:
        err, code = exc, exc.exit_code
    except OSError as exc:
        err, code = exc, EXIT_CONFIG
    except (ValueError, ArithmeticError) as exc:
        err, code = exc, EXIT_NUMERICAL
    stderr.write(json.dumps(_error_doc(err, code)) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
