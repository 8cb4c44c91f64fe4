"""Delta-coefficient norms with the time step frozen at dt = dx, ignoring the CFL limit.

With the stability guard on, ||u_eps(t)|| is bounded by ||g0|| + t sqrt(2 E0)
for every eps. Holding dt = dx while max sqrt(a_eps) grows like eps^-1/2 breaks
the Courant condition for small eps, and the norm then grows without bound.
This script shows that growth, which is a property of the discretization only.
"""

import argparse

import numpy as np

from mollwave.coefficients import CoefficientSpec, regularize
from mollwave.diagnostics import l2_norm
from mollwave.exact import default_initial_data
from mollwave.grid import Grid1D
from mollwave.harness import EPS_LIST
from mollwave.solver import WaveState, build_system, lax_friedrichs_step


def run(eps, grid, t_final, scheme):
    a = regularize(CoefficientSpec.delta(), eps, eps, grid)
    sys_ = build_system(a)
    dt = grid.dx
    state = WaveState.initial(default_initial_data(), grid)
    for _ in range(int(round(t_final / dt))):
        # bypass the Courant check on purpose
        state = lax_friedrichs_step(state, grid, dt, sys_, scheme, _checked=True)
    return l2_norm(state.u, grid), sys_.max_speed * dt / grid.dx


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dx", type=float, default=0.002)
    parser.add_argument("--t-final", type=float, default=0.05)
    parser.add_argument("--scheme", choices=("local", "classical"), default="classical")
    args = parser.parse_args(argv)
    grid = Grid1D.from_spacing(-4.0, 4.0, args.dx)
    print("epsilon  courant  ||u||")
    with np.errstate(over="ignore", invalid="ignore"):
        for eps in EPS_LIST:
            norm, courant = run(eps, grid, args.t_final, args.scheme)
            print(f"{eps:<8g} {courant:7.3f}  {norm:.6e}")


if __name__ == "__main__":
    main()
