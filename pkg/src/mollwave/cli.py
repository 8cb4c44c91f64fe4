"""Command line front end.

    mollwave convergence | blowup | alpha-sweep | solve | check
        [--config PATH] [--preset desk|fine] [--csv PATH] [--svg PATH] [--jobs N]

Exit codes: 0 success, 1 failed rows or checks, 2 configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import harness, report
from .coefficients import glaeser_report, levi_constant, regularize
from .diagnostics import l2_error_vs_exact, physical_energy
from .exact import default_initial_data
from .grid import Grid1D
from .mollifier import BUMP_INTEGRAL_COMPUTED, derivative_l1_norm, mollifier_mass
from .solver import SolveConfig, build_system, evolve, write_snapshot

log = logging.getLogger("mollwave")


def _load(args) -> harness.ExperimentConfig:
    text = ""
    if args.config:
        text = Path(args.config).read_text(encoding="utf-8")
    cfg = harness.parse_config(text, experiment=args.command, preset=args.preset)
    overrides = {}
    if args.csv:
        overrides["output_csv"] = args.csv
    if args.svg:
        overrides["output_svg"] = args.svg
    if overrides:
        cfg = harness.ExperimentConfig(**{**cfg.__dict__, **overrides})
    return cfg


def _print_report(rep) -> None:
    alpha = rep.rows[0].alpha if rep.rows else None
    head = f"{rep.coefficient}" + ("" if alpha is None else f" alpha={alpha:g}")
    print(f"# {head}  t={rep.t_final:g} dx={rep.dx:g} cfl={rep.cfl:g}")
    for r in rep.rows:
        val = "failed" if r.failed else f"{r.value:.10e}"
        print(f"  eps={r.eps:<8g} {r.kind}={val}")
    if rep.fitted_exponent is not None:
        print(f"  fitted exponent N = {rep.fitted_exponent:.6g}")
    for note in rep.notes:
        print(f"  note: {note}")


def _svg_path_for_alpha(path: str, alpha: float) -> Path:
    p = Path(path)
    return p.with_name(f"{p.stem}_alpha{alpha:g}{p.suffix or '.svg'}")


def cmd_sweep(cfg, jobs: int) -> int:
    if cfg.experiment == "convergence":
        reports = [harness.run_convergence(cfg, jobs)]
    elif cfg.experiment == "blowup":
        reports = [harness.run_blowup(cfg, jobs)]
    else:
        reports = harness.run_alpha_sweep(cfg, jobs)
    for rep in reports:
        _print_report(rep)
    if cfg.experiment == "alpha_sweep":
        print("# fitted exponents by alpha")
        for alpha, n in harness.exponent_summary(reports):
            print(f"  alpha={alpha:<6g} N={n if n is None else format(n, '.6g')}")
    if cfg.output_csv:
        report.emit_csv(reports if len(reports) > 1 else reports[0], cfg.output_csv)
    if cfg.output_svg:
        if len(reports) == 1:
            report.emit_svg(reports[0], cfg.output_svg)
        else:
            for rep in reports:
                report.emit_svg(rep, _svg_path_for_alpha(cfg.output_svg, rep.rows[0].alpha))
    return 0 if all(r.ok for r in reports) else 1


def cmd_solve(cfg, out_dir: str) -> int:
    grid = cfg.grid()
    data = default_initial_data()
    eps = cfg.eps_list[0]
    alpha = cfg.alpha if cfg.alpha is not None else (cfg.alpha_list or [None])[0]
    a = regularize(cfg.spec(alpha), eps, cfg.omega(eps), grid)
    solve_cfg = SolveConfig(
        cfg.t_final,
        cfl_target=cfg.cfl_target,
        record_every=cfg.record_every,
        scheme=cfg.scheme,
    )
    result = evolve(data, a, None, grid, solve_cfg)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    snaps = result.snapshots or [result.state]
    for k, snap in enumerate(snaps):
        write_snapshot(out / f"u_{k:04d}.txt", grid, snap.u, snap.t)
    print(f"{a.label} eps={eps:g}: {result.steps} steps, dt={result.dt:.6g}")
    print(f"physical energy at t={result.state.t:g}: {physical_energy(result.state, a, grid):.10e}")
    if cfg.coefficient == "heaviside":
        err = l2_error_vs_exact(result.state, data, grid)
        print(f"L2 error against the exact solution: {err:.10e}")
    print(f"wrote {len(snaps)} snapshot(s) to {out}")
    return 0


def _kernel_grid(omega: float, per_omega: int = 200) -> Grid1D:
    # sup |a''| needs the kernel scale resolved; the sweep grid may not do that
    return Grid1D(-2 * omega, 4 * omega, 6 * per_omega + 1)


def cmd_check(cfg) -> int:
    ok = True
    print(f"bump integral {BUMP_INTEGRAL_COMPUTED:.8f} (stored 0.443994)")
    phi1 = derivative_l1_norm(1)
    alpha = cfg.alpha if cfg.alpha is not None else (cfg.alpha_list or [None])[0]
    for eps in cfg.eps_list:
        omega = cfg.omega(eps)
        mass = mollifier_mass(omega)
        a = regularize(cfg.spec(alpha), eps, omega, _kernel_grid(omega))
        m1, worst = glaeser_report(a)
        m2 = levi_constant(a.negated_derivative(), a)
        bound = phi1 / omega
        d1max = float(np.max(np.abs(a.d1_samples)))
        good = abs(mass - 1) <= 1e-6 and worst <= 1 + 1e-8
        if cfg.coefficient == "heaviside":
            good = good and d1max <= bound * (1 + 1e-8)
        ok &= good
        print(
            f"eps={eps:g} omega={omega:.6g} mass={mass:.9f} M1={m1:.6g} "
            f"glaeser={worst:.6f} levi M2={m2:.6g} max|a'|={d1max:.6g} "
            f"(bound {bound:.6g}) {'ok' if good else 'FAIL'}"
        )
    sys_ = build_system(a)
    print(f"max wave speed at the last eps: {sys_.max_speed:.6g}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mollwave", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("convergence", "blowup", "alpha-sweep", "solve", "check"):
        p = sub.add_parser(name)
        p.add_argument("--config", help="flat 'key = value' config file")
        p.add_argument("--preset", choices=sorted(harness.PRESET_DX))
        p.add_argument("--csv")
        p.add_argument("--svg")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("-v", "--verbose", action="store_true")
        if name == "solve":
            p.add_argument("--out-dir", default="snapshots")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = _load(args)
    except (harness.ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if cfg.experiment in ("convergence", "blowup", "alpha_sweep"):
            return cmd_sweep(cfg, args.jobs)
        if cfg.experiment == "solve":
            return cmd_solve(cfg, args.out_dir)
        return cmd_check(cfg)
    except harness.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
