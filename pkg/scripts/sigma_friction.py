"""Velocity dependence of the sigma+ sigma- force on a J=1 -> 2 atom.

Prints the force averaged over a wavelength as a function of v, together with
the ground-state populations about the local polarization axis.
"""
import argparse

import numpy as np

from polscatter import LevelScheme, SigmaPlusMinus, sigma_force, steady_state
from polscatter.bloch import polarization_axis, populations_along


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--zeta0", type=float, default=1e-4)
    parser.add_argument("--dzeta-dk", type=float, default=1e-4, help="Im of d zeta0 / dk")
    parser.add_argument("--vmax", type=float, default=0.1)
    args = parser.parse_args()

    scheme = LevelScheme(1, 2, args.zeta0, 1j * args.dzeta_dk)
    profile = SigmaPlusMinus()
    xs = np.linspace(0, np.pi, 16, endpoint=False)
    states = [steady_state(scheme, profile(x)) for x in xs]
    local = populations_along(states[0], polarization_axis(profile(xs[0])))
    print("populations about the local axis:", np.round(local * 17, 12), "/ 17")
    print(f"{'v':>8} {'<F>':>14}")
    for v in np.linspace(-args.vmax, args.vmax, 9):
        mean = np.mean([sigma_force(x, v, scheme, rho, 1.0, 1.0).total for x, rho in zip(xs, states)])
        print(f"{v:8.4f} {mean:14.6e}")


if __name__ == "__main__":
    main()
