"""Command-line front end: experiment configs in, CSV/JSON tables out.

Subcommands
-----------
predict   classify the potential and emit the matching tail asymptote
          (JSON) plus a {E, log_tail} CSV evaluation
bounds    sandwich bounds on the shifted Laplace-Stieltjes transform over a
          t grid, CSV columns {t, L_U, L_conv, lower, upper}
simulate  Monte Carlo classical IDOS: CSV {E, N_c, stderr} plus a JSON
          summary with Campbell moments, Laplace cross-check ratios, and
          the tail-slope fit
tauber    Tauberian round-trip report (JSON)
verify    aggregated validation suite (decay-integral limit, convolution
          decay, conjugate pairs, Potter bounds, staircase, power
          conventions) with measured deviations
regvar    conjugate/inverse calculator for a slowly varying function

Configs are JSON (canonical) or TOML (accepted, by extension). Exit codes:
0 success, 2 validation failure, 3 out of theorem scope, 4 config error.
All tolerances scale with --tolerance-scale. CSV floats carry 17
significant digits; the timestamped comment line is suppressed by
--no-header, making reruns byte-identical.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import os
import sys

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from . import classical_idos, laplace, potentials, regvar, tails, tauberian

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_OUT_OF_SCOPE = 3
EXIT_CONFIG = 4

OUT_DIR_ENV = "LANDAU_TAILS_OUT"


class ConfigError(ValueError):
    pass


class OutOfScope(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# config plumbing

def load_config(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            if path.endswith(".toml"):
                return tomllib.load(fh)
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"could not parse {path}: {exc}") from None


def build_grid(obj) -> np.ndarray:
    """A grid is either an explicit list or {start, stop, num, spacing}."""
    if isinstance(obj, (list, tuple)):
        grid = np.asarray(obj, dtype=float)
    elif isinstance(obj, dict):
        try:
            start, stop = float(obj["start"]), float(obj["stop"])
            num = int(obj["num"])
        except KeyError as exc:
            raise ConfigError(f"grid spec missing key {exc}") from None
        spacing = obj.get("spacing", "log")
        if spacing == "log":
            if start <= 0:
                raise ConfigError("log-spaced grid needs start > 0")
            grid = np.geomspace(start, stop, num)
        elif spacing == "linear":
            grid = np.linspace(start, stop, num)
        else:
            raise ConfigError(f"unknown grid spacing {spacing!r}")
    else:
        raise ConfigError(f"grid must be a list or a spec dict, got {obj!r}")
    if grid.ndim != 1 or len(grid) == 0 or np.any(np.diff(grid) <= 0):
        raise ConfigError("grid must be non-empty and strictly increasing")
    return grid


def parse_landau(cfg: dict) -> potentials.LandauParams:
    block = cfg.get("landau", {})
    try:
        return potentials.LandauParams(**block)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid landau block: {exc}") from None


def parse_potential(cfg: dict) -> potentials.PotentialModel:
    try:
        return potentials.model_from_dict(cfg["potential"])
    except KeyError:
        raise ConfigError("config needs a 'potential' block") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid potential block: {exc}") from None


def parse_rho(cfg: dict) -> float:
    rho = float(cfg.get("rho", 1.0))
    if rho <= 0:
        raise ConfigError("rho must be positive")
    return rho


# ---------------------------------------------------------------------------
# output plumbing

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def write_csv(path: str, columns: list[str], rows, header: bool = True) -> None:
    with open(path, "w") as fh:
        if header:
            stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
            fh.write(f"# generated {stamp}\n")
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v)
                              for v in row) + "\n")


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def write_json(path: str, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands

def cmd_predict(cfg: dict, out: str, header: bool, tol_scale: float) -> int:
    model = parse_potential(cfg)
    landau = parse_landau(cfg)
    rho = parse_rho(cfg)
    result = tails.predict_tail(model, landau, rho,
                                sharp_gaussian=bool(cfg.get("sharp_gaussian", True)))
    if result is None:
        write_json(os.path.join(out, "tail.json"), {
            "status": "out-of-scope",
            "reason": "sub-Gaussian decay without a regular descriptor",
        })
        print("predict: potential is outside the theorems' scope", file=sys.stderr)
        return EXIT_OUT_OF_SCOPE
    E_grid = build_grid(cfg.get("energy_grid",
                                {"start": 1e-8, "stop": 1e-2, "num": 25}))
    if isinstance(result, tails.TailBracket):
        obj = {
            "status": "bracket",
            "decay_class": "gaussian",
            "lower": result.lower.to_json(),
            "upper": result.upper.to_json(),
        }
        rows = [(float(E), result.lower.log_n(float(E)), result.upper.log_n(float(E)))
                for E in E_grid]
        write_csv(os.path.join(out, "tail.csv"),
                  ["E", "log_tail_lower", "log_tail_upper"], rows, header)
    else:
        obj = {
            "status": "asymptote",
            "decay_class": potentials.classify_decay(model).kind,
            "tail": result.to_json(),
        }
        rows = [(float(E), result.log_n(float(E))) for E in E_grid]
        write_csv(os.path.join(out, "tail.csv"), ["E", "log_tail"], rows, header)
    write_json(os.path.join(out, "tail.json"), obj)
    return EXIT_OK


def cmd_bounds(cfg: dict, out: str, header: bool, tol_scale: float) -> int:
    model = parse_potential(cfg)
    landau = parse_landau(cfg)
    rho = parse_rho(cfg)
    t_grid = build_grid(cfg.get("t_grid", {"start": 0.1, "stop": 1e3, "num": 13}))
    results = laplace.sandwich_sweep(model, landau, rho, t_grid)
    rows = [(r.t, r.L_U, r.L_conv, r.lower, r.upper) for r in results]
    write_csv(os.path.join(out, "bounds.csv"),
              ["t", "L_U", "L_conv", "lower", "upper"], rows, header)
    if cfg.get("explore_lower_chain"):
        # exploratory, non-normative: the lower-bound chain alone, for decays
        # without a regular descriptor (the sharpness of the lower bound in
        # general is an open conjecture)
        rows = [(r.t, r.L_conv, r.log_lower) for r in results]
        write_csv(os.path.join(out, "lower_chain.csv"),
                  ["t", "L_conv", "log_lower"], rows, header)
    return EXIT_OK


def cmd_simulate(cfg: dict, out: str, header: bool, tol_scale: float,
                 seed_override: int | None) -> int:
    model = parse_potential(cfg)
    landau = parse_landau(cfg)
    rho = parse_rho(cfg)
    seed = seed_override if seed_override is not None else int(cfg.get("seed", 0))
    n_samples = int(cfg.get("n_samples", 100_000))
    delta = float(cfg.get("truncation_delta", 1e-3))
    radius = classical_idos.truncation_radius(model, rho, delta)
    config = classical_idos.PoissonConfig(rho, radius, seed, n_samples)

    v = classical_idos.draw_v_origin(config, model)
    mean_U = potentials.potential_integral(model, moment=0)
    mean_U2 = potentials.potential_integral(model, moment=1)

    E_grid = build_grid(cfg.get("energy_grid", {
        "start": 0.1 * rho * mean_U, "stop": 10.0 * rho * mean_U, "num": 40,
    }))
    estimate = classical_idos.estimate_Nc(config, model, landau, E_grid, v=v)
    rows = list(zip(map(float, estimate.energies),
                    map(float, estimate.values),
                    map(float, estimate.stderrs)))
    write_csv(os.path.join(out, "simulate.csv"), ["E", "N_c", "stderr"], rows, header)

    t_grid = build_grid(cfg.get("t_grid", {"start": 0.01, "stop": 1.0, "num": 5}))
    checks = classical_idos.laplace_mc_crosscheck(config, model, t_grid, v=v)
    summary = {
        "seed": seed,
        "n_samples": n_samples,
        "disk_radius": radius,
        "campbell_mean": {
            "target": rho * mean_U,
            "estimate": float(np.mean(v)),
            "stderr": float(np.std(v, ddof=1)) / math.sqrt(len(v)),
        },
        "campbell_var": {
            "target": rho * mean_U2,
            "estimate": float(np.var(v, ddof=1)),
        },
        "crosscheck_ratios": [
            {"t": c.t, "ratio": None if c.skipped else c.ratio,
             "stderr": None if c.skipped else c.stderr,
             "skipped": c.skipped}
            for c in checks
        ],
    }
    window = cfg.get("fit_window")
    if window is not None:
        try:
            slope, intercept, r2 = classical_idos.tail_exponent_fit(
                estimate, (float(window[0]), float(window[1]))
            )
            summary["fit"] = {"slope": slope, "intercept": intercept, "r_squared": r2}
        except ValueError as exc:
            summary["fit"] = {"error": str(exc)}
    write_json(os.path.join(out, "summary.json"), summary)
    return EXIT_OK


def cmd_tauber(cfg: dict, out: str, header: bool, tol_scale: float) -> int:
    try:
        gamma = float(cfg["gamma"])
        slow = regvar.slowvar_from_json(cfg["slow"])
    except KeyError as exc:
        raise ConfigError(f"tauber config missing key {exc}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    eta = float(cfg.get("eta", 0.0))
    tolerance = float(cfg.get("tolerance", 0.05)) * tol_scale
    t_grid = build_grid(cfg.get("t_grid", {"start": 1e4, "stop": 1e6, "num": 3}))
    la = tauberian.LaplaceAsymptote(gamma, slow)
    report = tauberian.roundtrip_check(la, eta, list(map(float, t_grid)))
    report["tolerance"] = tolerance
    report["pass"] = bool(report["max_deviation"] <= tolerance)
    write_json(os.path.join(out, "tauber.json"), report)
    if not report["pass"]:
        print(f"tauber: max deviation {report['max_deviation']:.4g} "
              f"exceeds tolerance {tolerance:.4g}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _verify_suite(cfg: dict, tol_scale: float) -> list[dict]:
    model = parse_potential(cfg)
    landau = parse_landau(cfg)
    descriptor = potentials.regular_decay_of(model)
    checks = []

    if descriptor is not None:
        t_grid = build_grid(cfg.get("abfall_t_grid", [1e2, 1e4, 1e6]))
        ratios = laplace.abfall_limit_check(model, descriptor, t_grid)
        target = laplace.abfall_limit_constant(descriptor.alpha)
        dev = abs(ratios[-1] / target - 1.0)
        tol = float(cfg.get("abfall_tolerance", 0.15)) * tol_scale
        checks.append({"check": "decay_integral_limit", "target": target,
                       "ratios": ratios, "deviation": dev, "tolerance": tol,
                       "pass": dev <= tol})

        radii = build_grid(cfg.get("faltung_radii", [20.0, 40.0]))
        devs = laplace.faltung_decay_check(model, descriptor,
                                           landau.magnetic_length, radii)
        finite = [d for d in devs if not math.isnan(d)]
        tol = float(cfg.get("faltung_tolerance", 0.15)) * tol_scale
        ok = bool(finite) and finite[-1] <= tol \
            and all(b <= a for a, b in zip(finite, finite[1:]))
        checks.append({"check": "convolution_decay", "radii": list(map(float, radii)),
                       "deviations": devs, "tolerance": tol, "pass": ok})

    t_probe = float(cfg.get("conjugate_probe", 1e150))
    tol = float(cfg.get("conjugate_tolerance", 0.1)) * tol_scale
    table = []
    ok = True
    for beta in (1.0, 2.0, -1.0, -2.0):
        f = regvar.IterLogProduct(1.0, (beta,))
        g = regvar.IterLogProduct(1.0, (-beta,))
        res = regvar.verify_conjugate_pair(f, g, [t_probe])
        table.append({"beta": beta, "residual": res})
        ok = ok and res <= tol
    checks.append({"check": "conjugate_pairs", "probe_t": t_probe,
                   "table": table, "tolerance": tol, "pass": ok})

    pairs = [(t, s) for t in (1e2, 1e4, 1e6) for s in (1e2, 1e4, 1e6)]
    ok = regvar.potter_check(regvar.IterLogProduct(1.0, (1.0,)),
                             A=math.sqrt(2.0), delta=1.0, pairs=pairs)
    checks.append({"check": "potter_bounds", "A": math.sqrt(2.0), "delta": 1.0,
                   "pass": bool(ok)})

    eps0, deg = landau.lowest_level, landau.degeneracy_per_area
    stair_ok = (
        tails.staircase_N0(0.5 * eps0, landau) == 0.0
        and abs(tails.staircase_N0(2.0 * eps0, landau) - deg) < 1e-12
        and abs(tails.staircase_N0(6.0 * eps0, landau) - 3.0 * deg) < 1e-12
    )
    checks.append({"check": "staircase", "pass": bool(stair_ok)})

    conv_ok = (regvar.rapid_power(0.5, math.inf) == 0.0
               and regvar.rapid_power(1.0, -math.inf) == 1.0
               and regvar.rapid_power(2.0, -math.inf) == 0.0)
    checks.append({"check": "power_conventions", "pass": bool(conv_ok)})
    return checks


def cmd_verify(cfg: dict, out: str, header: bool, tol_scale: float) -> int:
    checks = _verify_suite(cfg, tol_scale)
    all_pass = all(c["pass"] for c in checks)
    write_json(os.path.join(out, "verify.json"),
               {"checks": checks, "pass": all_pass})
    for c in checks:
        status = "ok" if c["pass"] else "FAIL"
        print(f"{c['check']}: {status}")
    return EXIT_OK if all_pass else EXIT_VALIDATION


def cmd_regvar(cfg: dict, out: str, header: bool, tol_scale: float) -> int:
    try:
        f = regvar.slowvar_from_json(cfg["slow"])
    except KeyError:
        raise ConfigError("regvar config needs a 'slow' block") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    conj = regvar.de_bruijn_conjugate(f)
    probes = [float(t) for t in cfg.get("probes", [1e6, 1e12])]
    residual = regvar.verify_conjugate_pair(f, conj, probes)
    report = {
        "slow": regvar.slowvar_to_json(f),
        "probes": probes,
        "residual": residual,
    }
    try:
        report["conjugate"] = regvar.slowvar_to_json(conj)
    except TypeError:
        report["conjugate"] = {"kind": "opaque",
                               "values": {str(t): conj(t) for t in probes}}
    gamma = cfg.get("gamma")
    if gamma is not None:
        F = regvar.RegVarFn(float(gamma), f)
        G = regvar.asymptotic_inverse(F)
        comp = [G(F(t)) / t for t in probes]
        report["inverse_composition"] = dict(zip(map(str, probes), comp))
    write_json(os.path.join(out, "regvar.json"), report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="landau-tails",
        description="Lifshits-tail toolkit for the 2-D random Landau Hamiltonian",
    )
    parser.add_argument("command",
                        choices=["predict", "bounds", "simulate",
                                 "tauber", "verify", "regvar"],
                        help="predict: tail asymptote JSON + {E, log_tail} CSV; "
                             "bounds: {t, L_U, L_conv, lower, upper} CSV; "
                             "simulate: {E, N_c, stderr} CSV + summary JSON; "
                             "tauber: round-trip report JSON; "
                             "verify: validation-suite JSON; "
                             "regvar: conjugate/inverse report JSON")
    parser.add_argument("--config", required=True,
                        help="experiment config, JSON (canonical) or TOML")
    parser.add_argument("--seed", type=int, default=None,
                        help="override the config seed (simulate)")
    parser.add_argument("--out", default=None,
                        help=f"output directory (default ${OUT_DIR_ENV} or cwd)")
    parser.add_argument("--no-header", action="store_true",
                        help="suppress the timestamped CSV comment line "
                             "(reruns become byte-identical)")
    parser.add_argument("--tolerance-scale", type=float, default=1.0,
                        help="multiply all pass/fail tolerances by this factor")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = args.out or os.environ.get(OUT_DIR_ENV) or "."
    header = not args.no_header
    if args.tolerance_scale <= 0:
        print("error: --tolerance-scale must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = load_config(args.config)
        os.makedirs(out, exist_ok=True)
        if args.command == "predict":
            return cmd_predict(cfg, out, header, args.tolerance_scale)
        if args.command == "bounds":
            return cmd_bounds(cfg, out, header, args.tolerance_scale)
        if args.command == "simulate":
            return cmd_simulate(cfg, out, header, args.tolerance_scale, args.seed)
        if args.command == "tauber":
            return cmd_tauber(cfg, out, header, args.tolerance_scale)
        if args.command == "verify":
            return cmd_verify(cfg, out, header, args.tolerance_scale)
        return cmd_regvar(cfg, out, header, args.tolerance_scale)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
