"""Command-line entry point: ``suspopt <command> --config study.toml``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import metrics, road, study as st
from .config import StudyConfig
from .errors import ConfigError, DomainError
from .io import write_json
from .objective import evaluate, profile
from .simulation import export_timeseries, simulate, simulate_transient


def _design(text: str) -> tuple[float, float]:
    try:
        zn, zp = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'zeta_n,zeta_p', got {text!r}") from None
    return zn, zp


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="suspopt", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="TOML study file")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output directory")
        p.add_argument("--workers", type=int)
        p.add_argument("--road-class", choices=sorted(road.ROAD_CLASSES))
        p.add_argument("--speed", type=float, help="travel speed [m/s]")
        p.add_argument("--fn", type=float, help="natural frequency [Hz]")
        p.add_argument("--preset", action="append", help="objective preset (repeatable)")
        return p

    common(sub.add_parser("sweep", help="CE optimum per natural frequency and preset"))
    p = common(sub.add_parser("contour", help="metric maps over (zeta_n, zeta_p)"))
    p.add_argument("--resolution", type=int)
    p.add_argument("--no-settling", action="store_true", help="skip the bump run per cell")
    p = common(sub.add_parser("transient", help="bump/step time histories for several designs"))
    p.add_argument("--design", type=_design, action="append", help="zeta_n,zeta_p (repeatable)")
    p.add_argument("--excitation", choices=["bump", "step"])
    p = common(sub.add_parser("realizations", help="sweep repeated over road seeds"))
    p.add_argument("--n-seeds", type=int)
    p = common(sub.add_parser("simulate", help="single run with time-series export"))
    p.add_argument("--design", type=_design, default=(0.3, 0.3), help="zeta_n,zeta_p")
    p.add_argument("--excitation", choices=["road", "bump", "step", "flat"], default="road")
    return parser


def _study(args) -> StudyConfig:
    base = StudyConfig.load(args.config) if args.config else StudyConfig()
    overrides = dict(
        seed=args.seed, out=args.out, workers=args.workers, road_class=args.road_class,
        speed=args.speed, fn=args.fn, preset=args.preset,
    )
    if getattr(args, "resolution", None) is not None:
        overrides["resolution"] = args.resolution
    if getattr(args, "n_seeds", None) is not None:
        overrides["n_seeds"] = args.n_seeds
    if args.command == "transient":
        overrides["designs"] = args.design
        if args.excitation:
            d = base.to_dict()
            d["transient"]["kind"] = args.excitation
            base = StudyConfig(d)
    return base.with_overrides(**overrides)


def cmd_sweep(study: StudyConfig) -> int:
    res = st.run_optimization_sweep(study)
    st.write_sweep(res, study.output_dir)
    for c in res.cells:
        if c.ok:
            print(f"f_n={c.f_n:g} {c.preset:<22} zeta_n={c.zeta_n:.3f} zeta_p={c.zeta_p:.3f} "
                  f"sigma_aw={c.sigma_aw:.3f} R_ft={c.r_ft:.3f} t_s={c.t_s:.2f}")
        else:
            print(f"f_n={c.f_n:g} {c.preset:<22} FAILED {c.error}")
    return 1 if res.failed else 0


def cmd_contour(study: StudyConfig, settling: bool) -> int:
    grid = st.run_contour_grid(study, settling=settling)
    st.write_contour(grid, study.output_dir)
    print(f"argmin sigma_aw at (zeta_n, zeta_p) = {grid.argmin(grid.sigma_aw)}")
    print(f"argmin R_ft     at (zeta_n, zeta_p) = {grid.argmin(grid.r_ft)}")
    missing = int((~(grid.sigma_aw == grid.sigma_aw)).sum())
    return 1 if missing else 0


def cmd_transient(study: StudyConfig) -> int:
    designs = study.data["transient"]["designs"]
    if not designs:
        raise ConfigError("no designs: pass --design zeta_n,zeta_p or set [transient].designs")
    runs = st.run_transient_comparison(study, designs)
    st.write_transients(runs, study.output_dir, st.provenance(study, kind="transient"))
    for r in runs:
        state = "settled" if r.settling.settled else "not settled"
        print(f"{r.label}: t_s={r.settling.time:.3f} s ({state}), peak rebound travel "
              f"{r.peak_rebound_travel * 1000:.1f} mm")
    return 0


def cmd_realizations(study: StudyConfig) -> int:
    res = st.run_realization_study(study)
    st.write_realizations(res, study.output_dir)
    for row in res.summary:
        print(json.dumps(row))
    failed = sum(len(r.failed) for r in res.per_seed)
    return 1 if failed else 0


def cmd_simulate(study: StudyConfig, design_zeta, excitation: str) -> int:
    scenario = study.scenario()
    design = scenario.design(design_zeta)
    prov = st.provenance(study, kind="simulate", design=list(design_zeta), excitation=excitation)
    out = study.output_dir
    if excitation == "road":
        spec = scenario.profile_specs()[0]
        res = simulate(scenario.params, design, profile(spec), scenario.sim_config())
        ev = evaluate(design_zeta, scenario, study.objective("min_sigma"), settling=True)
        summary = {"sigma_aw": ev.sigma_aw, "r_ft": ev.r_ft, "t_s": ev.t_s, "settled": ev.settled,
                   "comfort": metrics.classify_comfort(ev.sigma_aw), "min_f_t": float(res.f_t.min())}
    else:
        exc = road.Flat() if excitation == "flat" else study.transient_input(kind=excitation)
        res = simulate_transient(scenario.params, design, exc, scenario.sim, speed=scenario.transient_speed)
        settle = metrics.Settling(0.0, True)
        if excitation != "flat":
            settle = metrics.settling_time(
                res.x_s, res.t, exc.end / scenario.transient_speed, scenario.settle_band
            )
        summary = {"t_s": settle.time, "settled": settle.settled, "min_f_t": float(res.f_t.min())}
    export_timeseries(res, out / "timeseries.csv", prov)
    write_json(out / "summary.json", {"provenance": prov, "metrics": summary})
    print(json.dumps(summary))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        study = _study(args)
        if args.command == "sweep":
            return cmd_sweep(study)
        if args.command == "contour":
            return cmd_contour(study, settling=not args.no_settling)
        if args.command == "transient":
            return cmd_transient(study)
        if args.command == "realizations":
            return cmd_realizations(study)
        return cmd_simulate(study, args.design, args.excitation)
    except (ConfigError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
