"""Sisyphus force over one lin-perp-lin period, from the full pipeline and the closed form.

    python scripts/sisyphus_curve.py --zeta0 1e-4 --v 0.02 --points 32
"""
import argparse

import numpy as np

from polscatter import (LevelScheme, LinPerpLin, PumpingParameters, force_expansion,
                        force_from_modes, nonadiabatic_populations, polarizability, scatter,
                        sisyphus_force, transfer_tensor)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--zeta0", type=float, default=1e-4)
    parser.add_argument("--v", type=float, default=0.02)
    parser.add_argument("--tau-p", type=float, default=1.0)
    parser.add_argument("--points", type=int, default=32)
    args = parser.parse_args()

    scheme = LevelScheme(0.5, 1.5, args.zeta0)
    profile = LinPerpLin()
    b0, c0 = profile.beams()
    params = PumpingParameters(args.tau_p, args.v)
    print(f"{'kx':>8} {'expansion':>14} {'scattered':>14} {'closed form':>14}")
    for x in np.linspace(0, np.pi, args.points, endpoint=False):
        phase = np.exp(1j * x)
        b, c = b0 * phase, c0 * np.conj(phase)
        zeta = polarizability(scheme, nonadiabatic_populations(scheme, profile, params, x))
        pipeline = force_expansion(zeta, b, c, args.v).total
        modes = force_from_modes(scatter(transfer_tensor(zeta), b, c))
        closed = sisyphus_force(x, args.v, args.zeta0, 1.0, 1.0, args.tau_p).total
        print(f"{x:8.4f} {pipeline:14.6e} {modes:14.6e} {closed:14.6e}")


if __name__ == "__main__":
    main()
