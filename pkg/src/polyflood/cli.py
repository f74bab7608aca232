"""Command-line front end: ``polyflood {run,riemann,convergence,compare}``.

Exit statuses: 0 success, 1 runtime failure, 2 usage error.
"""

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import output, plotting
from .analysis import ErrorReport, l1_error, mass_totals, render_table, report_csv
from .fluxes import SchemeKind
from .model import DomainError, ModelError, make_model
from .presets import PRESETS, TABLE_H, ConfigError, get_preset, parse_config
from .riemann import State, sample, solve_riemann
from .solver import DegenerateCell, SolverError, run

log = logging.getLogger("polyflood")

MODELS = ("quadratic_test", "two_phase_gravity")
SCHEMES = tuple(k.value for k in SchemeKind)


class UsageError(Exception):
    """Bad combination of command-line arguments (exit status 2)."""


def _number(text):
    """Float parser that also accepts fractions such as ``1/50``."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _number_list(text):
    return [_number(v) for v in text.split(",") if v.strip()]


def _name_list(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _state(text):
    values = _number_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected 's,c', got {text!r}")
    return State(*values)


def _key_value(text):
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    return key.strip(), value.strip()


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--model", choices=MODELS, help="flux model (overrides the preset's)")
    g.add_argument("--model-param", action="append", type=_key_value, default=[],
                   metavar="KEY=VALUE", help="model parameter, repeatable")
    g.add_argument("--scheme", choices=SCHEMES, help="numerical flux")
    g.add_argument("--h", type=_number, help="mesh width (fractions like 1/100 accepted)")
    g.add_argument("--lambda", dest="lam", type=_number, help="dt/h")
    g.add_argument("--t-end", type=_number, help="final time")
    g.add_argument("--out", type=Path, default=Path("."), help="output directory")
    g.add_argument("-v", "--verbose", action="store_true", help="log per-step diagnostics")

    parser = argparse.ArgumentParser(
        prog="polyflood", description="Finite-volume solver for 1D polymer flooding.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="run one simulation, write CSV snapshots")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS))
    src.add_argument("--config", type=Path, help="INI configuration file")
    p.add_argument("--prefix", help="snapshot file prefix (default: preset or config name)")
    p.add_argument("--snapshots", type=_number_list, help="comma-separated snapshot times")
    p.add_argument("--no-figures", action="store_true", help="skip the PNG profile figure")

    p = sub.add_parser("riemann", parents=[common], help="exact Riemann solution")
    p.add_argument("--left", type=_state, required=True, metavar="S,C")
    p.add_argument("--right", type=_state, required=True, metavar="S,C")
    p.add_argument("--samples", type=int, default=201, help="number of xi samples")
    p.add_argument("--xi-range", type=_number_list, metavar="LO,HI",
                   help="sampling window (default: around the wave speeds)")
    p.add_argument("--save", action="store_true",
                   help="also write riemann.csv and riemann.png into --out")

    p = sub.add_parser("convergence", parents=[common], help="L1 error table against the exact fan")
    p.add_argument("--preset", choices=[k for k, v in PRESETS.items() if v.riemann_origin is not None],
                   default="ic1")
    p.add_argument("--schemes", type=_name_list, help="comma-separated schemes")
    p.add_argument("--h-list", type=_number_list, help="comma-separated mesh widths")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("compare", parents=[common], help="run several schemes on one preset")
    p.add_argument("--preset", choices=sorted(PRESETS), default="ivp")
    p.add_argument("--schemes", type=_name_list, help="comma-separated schemes")
    p.add_argument("--times", type=_number_list, help="comma-separated snapshot times")
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--no-figures", action="store_true")
    return parser


def _model_params(args):
    return dict(args.model_param)


def _preset_with_overrides(args, preset):
    if args.model is not None or args.model_param:
        name = args.model or preset.model
        params = {} if args.model and args.model != preset.model else dict(preset.model_params)
        params.update(_model_params(args))
        preset = replace(preset, model=name, model_params=params)
    try:
        make_model(preset.model, **preset.model_params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return preset


def _make_config(preset, scheme, args, snapshots=None):
    try:
        return preset.config(scheme, h=args.h, lam=args.lam, t_end=args.t_end,
                             snapshots=snapshots)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_schemes(names):
    if not names:
        raise UsageError("empty scheme list")
    bad = [n for n in names if n not in SCHEMES]
    if bad:
        raise UsageError(f"unknown scheme(s) {', '.join(bad)}; choose from {', '.join(SCHEMES)}")
    return names


def _execute(configs, jobs):
    """Run configurations, in worker processes when ``jobs > 1``."""
    if jobs > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, configs))
    return [run(cfg) for cfg in configs]


def _write_profile_figure(out, name, profiles, title, enabled):
    if enabled:
        path = plotting.plot_profiles(profiles, out / f"{name}.png", title)
        print(f"wrote {path}")


def cmd_run(args):
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from None
        config = parse_config(text)
        if args.model or args.model_param:
            name = args.model or config.model.name
            config = config.replace(model=make_model(name, **_model_params(args)))
        changes = {}
        if args.scheme:
            changes["scheme"] = SchemeKind(args.scheme)
        if args.h:
            g = config.grid
            changes["grid"] = type(g).from_h(g.x_min, g.x_max, args.h)
        if args.lam:
            changes["lam"] = args.lam
        if args.t_end is not None:
            changes["t_end"] = args.t_end
        if args.snapshots is not None:
            changes["snapshot_times"] = tuple(args.snapshots)
        try:
            config = config.replace(**changes)
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        prefix = args.prefix or args.config.stem
    else:
        preset = _preset_with_overrides(args, get_preset(args.preset))
        config = _make_config(preset, args.scheme or preset.default_schemes[0], args,
                              args.snapshots)
        prefix = args.prefix or preset.name
    if args.verbose:
        config = config.replace(diagnostics=True)

    snaps = run(config)
    keep = [(t, st) for t, st in snaps if t > 0.0] or snaps[:1]
    paths = output.write_snapshots(args.out, prefix, config.grid, keep)
    h = config.grid.h
    m0 = mass_totals(snaps[0][1], config.model, h)
    print(f"# model={config.model.name} scheme={config.scheme.value} cells={config.grid.n_cells} "
          f"h={h:.6g} lambda={config.lam:.6g} dt={config.dt:.6g}")
    print("t,min_s,max_s,max_c,mass_s,mass_c,file")
    for (t, st), path in zip(keep, paths):
        ms, mc = mass_totals(st, config.model, h)
        print(f"{t:g},{st.s.min():.10g},{st.s.max():.10g},{st.c.max():.10g},"
              f"{ms:.15g},{mc:.15g},{path.name}")
    print(f"# initial mass: s={m0[0]:.15g} polymer={m0[1]:.15g}")
    profiles = {config.scheme.value: {t: (config.grid.centers, st.s, st.c) for t, st in keep}}
    _write_profile_figure(Path(args.out), prefix, profiles, prefix, not args.no_figures)
    return 0


def cmd_riemann(args):
    name = args.model or "quadratic_test"
    try:
        model = make_model(name, **_model_params(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.samples < 1:
        raise UsageError("--samples must be positive")
    fan = solve_riemann(model, args.left, args.right)
    print(f"# model={model.name} left=({args.left.s:g},{args.left.c:g}) "
          f"right=({args.right.s:g},{args.right.c:g})")
    print("# kind,left_speed,right_speed,s_left,c_left,s_right,c_right")
    for w in fan.waves:
        print(f"# {w.kind},{w.left_speed:.10g},{w.right_speed:.10g},"
              f"{w.left_state.s:.10g},{w.left_state.c:.10g},"
              f"{w.right_state.s:.10g},{w.right_state.c:.10g}")
    for key, value in fan.constants.items():
        if isinstance(value, (int, float, np.floating)) and not isinstance(value, bool):
            print(f"# {key}={float(value):.10g}")
        else:
            print(f"# {key}={value}")
    if args.xi_range is not None:
        if len(args.xi_range) != 2 or args.xi_range[0] >= args.xi_range[1]:
            raise UsageError("--xi-range needs LO,HI with LO < HI")
        lo, hi = args.xi_range
    else:
        speeds = [v for w in fan.waves for v in (w.left_speed, w.right_speed)] or [0.0]
        pad = 0.25 * max(1.0, max(speeds) - min(speeds))
        lo, hi = min(speeds) - pad, max(speeds) + pad
    xi = np.linspace(lo, hi, args.samples) if args.samples > 1 else np.array([lo])
    states = [sample(fan, v) for v in xi]
    s = np.array([st.s for st in states])
    c = np.array([st.c for st in states])
    print("xi,s,c")
    for row in zip(xi, s, c):
        print(",".join(f"{float(v):.17g}" for v in row))
    if args.save:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with (out / "riemann.csv").open("w") as fh:
            fh.write("xi,s,c\n")
            for row in zip(xi, s, c):
                fh.write(",".join(f"{float(v):.17g}" for v in row) + "\n")
        plotting.plot_profiles({"exact": {0.0: (xi, s, c)}}, out / "riemann.png",
                               "exact Riemann solution (abscissa: x/t)")
    return 0


def cmd_convergence(args):
    preset = _preset_with_overrides(args, get_preset(args.preset))
    schemes = _check_schemes(args.schemes if args.schemes is not None
                             else [args.scheme] if args.scheme else list(preset.default_schemes))
    hs = args.h_list if args.h_list is not None else ([args.h] if args.h else list(TABLE_H))
    if not hs or any(h <= 0 for h in hs):
        raise UsageError("mesh widths must be positive")
    for a, b in zip(hs[:-1], hs[1:]):
        if abs(a / b - 2.0) > 1e-9:
            raise UsageError("mesh widths must halve successively")
    configs = []
    for scheme in schemes:
        for h in hs:
            configs.append(_make_config(preset, scheme, replace_h(args, h)))
    results = _execute(configs, args.jobs)
    ic = preset.initial
    reports = []
    k = 0
    for scheme in schemes:
        es, ec = [], []
        for h in hs:
            cfg = configs[k]
            t, state = results[k][-1]
            k += 1
            fan = solve_riemann(cfg.model, State(ic.s[0], ic.c[0]), State(ic.s[-1], ic.c[-1]))
            e = l1_error(state, cfg.grid, fan, preset.riemann_origin, t)
            es.append(e[0])
            ec.append(e[1])
        reports.append(ErrorReport.from_errors(scheme, hs, es, ec))
    t_end = configs[0].t_end
    print(f"# preset={preset.name} t={t_end:g} lambda={configs[0].lam:g}")
    print(render_table(reports))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"convergence_{preset.name}.csv"
    csv_path.write_text(report_csv(reports))
    print(f"wrote {csv_path}")
    table = preset.reference.get("table", {})
    known = [s for s in schemes if s in table]
    if known:
        print("# published reference values")
        ref = [ErrorReport.from_errors(s, list(TABLE_H), table[s]["s"], table[s]["c"])
               for s in known]
        print(render_table(ref))
    if not args.no_figures:
        path = plotting.plot_convergence(reports, out / f"convergence_{preset.name}.png")
        print(f"wrote {path}")
    return 0


def replace_h(args, h):
    ns = argparse.Namespace(**vars(args))
    ns.h = h
    return ns


def cmd_compare(args):
    preset = _preset_with_overrides(args, get_preset(args.preset))
    schemes = _check_schemes(args.schemes if args.schemes is not None
                             else list(preset.default_schemes))
    if "um" in schemes and not hasattr(make_model(preset.model, **preset.model_params),
                                       "mobility_1"):
        raise UsageError("upstream mobility requires two-phase model")
    times = args.times if args.times is not None else list(preset.snapshots or [preset.t_end])
    if not times:
        raise UsageError("no snapshot times")
    if args.t_end is None:
        args = replace_h(args, args.h)
        args.t_end = max(times)
    configs = [_make_config(preset, s, args, times) for s in schemes]
    results = _execute(configs, args.jobs)
    out = Path(args.out)
    files = {}
    profiles = {}
    for scheme, cfg, snaps in zip(schemes, configs, results):
        keep = [(t, st) for t, st in snaps if any(abs(t - w) < 1e-12 for w in times)]
        paths = output.write_snapshots(out, f"{preset.name}_{scheme}", cfg.grid, keep)
        files[scheme] = {t: p.name for (t, _), p in zip(keep, paths)}
        profiles[scheme] = {t: (cfg.grid.centers, st.s, st.c) for t, st in keep}
        for (t, st), p in zip(keep, paths):
            print(f"wrote {p}  (t={t:g}, min s={st.s.min():.6g}, max s={st.s.max():.6g})")
    png = f"compare_{preset.name}.png"
    script = plotting.profile_script(files, out / f"plot_{preset.name}.py", png)
    print(f"wrote {script}")
    _write_profile_figure(out, f"compare_{preset.name}", profiles, preset.description,
                          not args.no_figures)
    return 0


COMMANDS = {"run": cmd_run, "riemann": cmd_riemann, "convergence": cmd_convergence,
            "compare": cmd_compare}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"polyflood {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"polyflood: configuration error: {exc}", file=sys.stderr)
        return 1
    except (SolverError, DegenerateCell, DomainError, ModelError, ValueError) as exc:
        print(f"polyflood: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"polyflood: I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
