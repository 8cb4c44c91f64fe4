"""Run the three sweeps (convergence, delta norms, alpha exponents) and write CSV/SVG.

    python scripts/run_sweeps.py --out results --preset desk --jobs 4
"""

import argparse
import logging
import time
from pathlib import Path

from mollwave import harness, report


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="results")
    parser.add_argument("--preset", choices=sorted(harness.PRESET_DX), default="desk")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--scheme", choices=("local", "classical"), default="local")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    scheme = f"scheme = {args.scheme}\n"

    t0 = time.perf_counter()
    conv = harness.run_convergence(
        harness.parse_config(scheme, "convergence", args.preset), args.jobs
    )
    report.emit_csv(conv, out / "convergence.csv")
    report.emit_svg(conv, out / "convergence.svg")
    logging.info("convergence done in %.1fs", time.perf_counter() - t0)

    t0 = time.perf_counter()
    blow = harness.run_blowup(harness.parse_config(scheme, "blowup", args.preset), args.jobs)
    report.emit_csv(blow, out / "blowup.csv")
    report.emit_svg(blow, out / "blowup.svg")
    logging.info("blowup done in %.1fs", time.perf_counter() - t0)

    t0 = time.perf_counter()
    sweep = harness.run_alpha_sweep(
        harness.parse_config(scheme, "alpha_sweep", args.preset), args.jobs
    )
    report.emit_csv(sweep, out / "alpha_sweep.csv")
    for rep in sweep:
        report.emit_svg(rep, out / f"alpha_sweep_alpha{rep.rows[0].alpha:g}.svg")
    logging.info("alpha sweep done in %.1fs", time.perf_counter() - t0)

    print("epsilon  error  delta-norm")
    for e, err, nrm in zip(conv.eps, conv.values, blow.values):
        print(f"{e:<8g} {err:.6e} {nrm:.12e}")
    print("alpha  fitted N")
    for alpha, n in harness.exponent_summary(sweep):
        print(f"{alpha:<6g} {n:.4e}")


if __name__ == "__main__":
    main()
