"""Command-line entry point: ``tpa sweep|preset|g2|mc|xsec``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .coherent import coherent_cross_sections, gm_2pa_cross_section
from .constants import CONSTANTS_VERSION, thz_to_angular
from .molecule import PAPER_OMEGA_BAR, DomainError
from .quadrature import QuadratureError, QuadratureSpec
from .squeezed import SqueezedParams, sq_cross_sections, vacuum_intensity
from .sweeps import (
    FIGURE_PRESETS,
    PAPER_AREA,
    PRESETS,
    ConfigError,
    SweepConfig,
    SweepError,
    emit_csv,
    g2_table,
    load_config,
    parse_mc_config,
    run_mc_report,
    run_preset,
    run_sweep,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_QUADRATURE = 3
EXIT_IO = 4


def _out_path(out_dir: str | None, default_name: str, configured: str | None = None) -> Path:
    if out_dir is not None:
        name = Path(configured).name if configured else default_name
        return Path(out_dir) / name
    if configured:
        return Path(configured)
    return Path(default_name)


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    result = run_sweep(cfg)
    path = emit_csv(result, _out_path(args.out, f"{cfg.preset or 'sweep'}.csv", cfg.output))
    print(path)
    return EXIT_OK


def _cmd_preset(args) -> int:
    result = run_preset(args.name, args.delta_points, args.intensity_points)
    path = emit_csv(result, _out_path(args.out, f"{args.name}.csv"))
    print(path)
    return EXIT_OK


def _cmd_g2(args) -> int:
    try:
        p = SqueezedParams(args.omega_bar, thz_to_angular(args.bandwidth_thz), args.beta0, args.area)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    mode = "time" if args.time else "freq"
    result = g2_table(p, mode, args.points, args.pump_bw)
    path = emit_csv(result, _out_path(args.out, f"g2_{mode}.csv"))
    print(path)
    return EXIT_OK


def _cmd_mc(args) -> int:
    try:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    p, t_points = parse_mc_config(doc)
    result = run_mc_report(p, t_points)
    path = emit_csv(result, _out_path(args.out, "mc.csv"))
    print(path)
    return EXIT_OK


def _cmd_xsec(args) -> int:
    quad = QuadratureSpec(rel_tol=args.rel_tol)
    cfg = SweepConfig(beam="squeezed", omega_bar=args.omega_bar, area=args.area,
                      big_omega_e=thz_to_angular(args.bandwidth_thz), quadrature=quad)
    m = cfg.molecule_at(args.delta)
    p = SqueezedParams(cfg.omega_bar, cfg.big_omega_e, 0.0, cfg.area)
    try:
        xs = sq_cross_sections(m, p, quad)
    except QuadratureError as exc:
        raise SweepError(f"squeezed cross-section failed: {exc}", args.delta) from exc
    coh = coherent_cross_sections(m, cfg.omega_bar)
    doc = {
        "constants_version": CONSTANTS_VERSION,
        "delta_rad_s": args.delta,
        "omega_bar_rad_s": cfg.omega_bar,
        "big_omega_e_rad_s": cfg.big_omega_e,
        "vacuum_intensity_W_m2": vacuum_intensity(p),
        "quadrature": quad.to_dict(),
        "coherent": {f"sigma{i}": float(coh[i - 1]) for i in range(1, 6)},
        "sigma_2pa_coh_GM": gm_2pa_cross_section(m, cfg.omega_bar, args.delta) if args.delta else None,
        "squeezed": {
            "sigma1": {"value": xs.sigma1.value, "error": xs.sigma1.error},
            **{f"sigma{i}_{v}": {"value": r.value, "error": r.error}
               for v, table in (("I", xs.sigma_I), ("II", xs.sigma_II)) for i, r in table.items()},
        },
    }
    print(json.dumps(doc, sort_keys=True, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tpa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sweep", help="run a (delta, intensity) sweep from a JSON config")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", help="output directory")
    sp.set_defaults(func=_cmd_sweep)

    pp = sub.add_parser("preset", help="reproduce a figure data set")
    pp.add_argument("name", choices=PRESETS, metavar="{" + ",".join(FIGURE_PRESETS) + ",g2,mc}")
    pp.add_argument("--out", help="output directory")
    pp.add_argument("--delta-points", type=int, help="override the detuning grid size")
    pp.add_argument("--intensity-points", type=int, help="override the intensity grid size")
    pp.set_defaults(func=_cmd_preset)

    gp = sub.add_parser("g2", help="second-order coherence of the squeezed beam")
    mode = gp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--time", action="store_true", help="g2 against time delay")
    mode.add_argument("--freq", action="store_true", help="g2 against the second frequency")
    gp.add_argument("--beta0", type=float, default=1.0, help="|beta_0| (default 1)")
    gp.add_argument("--bandwidth-thz", type=float, default=10.0, help="Omega_e / 2 pi in THz")
    gp.add_argument("--omega-bar", type=float, default=PAPER_OMEGA_BAR, help="carrier, rad/s")
    gp.add_argument("--area", type=float, default=PAPER_AREA, help="beam area, m^2")
    gp.add_argument("--pump-bw", type=float, help="pump bandwidth for --freq, rad/s")
    gp.add_argument("--points", type=int, default=1001)
    gp.add_argument("--out", help="output directory")
    gp.set_defaults(func=_cmd_g2)

    mp = sub.add_parser("mc", help="Monte Carlo dephasing kernel report")
    mp.add_argument("--config", required=True)
    mp.add_argument("--out", help="output directory")
    mp.set_defaults(func=_cmd_mc)

    xp = sub.add_parser("xsec", help="dump all cross-sections at one detuning as JSON")
    xp.add_argument("--delta", type=float, required=True, help="detuning, rad/s")
    xp.add_argument("--omega-bar", type=float, default=PAPER_OMEGA_BAR)
    xp.add_argument("--bandwidth-thz", type=float, default=10.0)
    xp.add_argument("--area", type=float, default=PAPER_AREA)
    xp.add_argument("--rel-tol", type=float, default=1e-7)
    xp.set_defaults(func=_cmd_xsec)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SweepError, QuadratureError) as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
