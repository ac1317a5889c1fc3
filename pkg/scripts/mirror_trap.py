"""A single atom in front of a quarter-wave plate and a partially reflecting mirror.

The double pass through the plate turns the returning beam's polarization
by 90 degrees, so the atom sits in a lin-perp-lin-like gradient. Solves the self-consistent fields for a sweep of atom positions and prints
the ground-state populations and the force from the momentum flux.
"""
import argparse

import numpy as np

from polscatter import JonesVector, LevelScheme, force_from_modes, solve_system
from polscatter.optics import atom, mirror, waveplate


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--zeta0", type=float, default=0.05)
    parser.add_argument("--reflectivity", type=float, default=0.9)
    parser.add_argument("--points", type=int, default=12)
    args = parser.parse_args()

    scheme = LevelScheme(1, 2, args.zeta0)
    b = JonesVector(1, 0, 1.0, basis="linear").to_circular()
    c = JonesVector.zero(1.0)
    print(f"{'kx':>8} {'force':>12} {'iter':>5}  populations")
    for x in np.linspace(0, np.pi, args.points, endpoint=False):
        sol = solve_system([atom(x), waveplate(5.0, np.pi / 2, np.pi / 4),
                               mirror(10.0, -args.reflectivity)], b, c, scheme)
        force = force_from_modes(sol.atom_modes)
        print(f"{x:8.4f} {force:12.4e} {sol.iterations:5d}  {np.round(sol.rho.populations, 6)}")


if __name__ == "__main__":
    main()
