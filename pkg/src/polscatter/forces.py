"""Radiation forces on a thin polarizable atom.

Forces are in units of ``hbar k`` times photon flux, with ``hbar = c = 1``
unless overridden. Velocity enters the Doppler terms as ``v / c``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class ForceResult:
    """A force split into its velocity-independent and velocity-proportional parts.

    ``cross_term`` is the Doppler term that mixes the two beams, which the
    approximate expansion drops; it is zero for the closed-form results.
    """

    position_term: float
    friction_term: float
    cross_term: float = 0.0

    @property
    def total(self):
        return self.position_term + self.friction_term

    @property
    def exact_total(self):
        return self.position_term + self.friction_term + self.cross_term


def _dot(a, b):
    # a . b*, the bilinear form used throughout the expansion
    return np.sum(a * np.conj(b))


def force_from_modes(quartet, hbar=1.0):
    """Net force from the momentum flux of the four modes around the atom."""
    k = quartet.b_in.k
    for mode in (quartet.a_out, quartet.c_in, quartet.d_out):
        if mode.k != k:
            raise InvalidInputError(f"mode wavenumber {mode.k} differs from {k}")
    return hbar * k * (quartet.a_out.norm2 + quartet.b_in.norm2
                       - quartet.c_in.norm2 - quartet.d_out.norm2)


def force_expansion(zeta, b_in, c_in, v, hbar=1.0, c=1.0):
    """Lowest-order force for polarizability ``zeta`` lit by ``b_in`` and ``c_in``.

    ``position_term = 2 hbar k Im{[zeta (B+C)] . (B-C)*}`` and
    ``friction_term = -2 (v/c) hbar k^2 Im{[dzeta/dk (B+C)] . (B+C)*}``;
    the remaining first-order term ``4 (v/c) hbar k Im{(zeta B).C* + (zeta C).B*}``
    is returned as ``cross_term``.
    """
    b_in._check(c_in)
    k = b_in.k
    b, cc = b_in.to_circular().vector, c_in.to_circular().vector
    total, diff = b + cc, b - cc
    position = 2 * hbar * k * _dot(zeta.zeta @ total, diff).imag
    friction = -2 * (v / c) * hbar * k ** 2 * _dot(zeta.dzeta_dk @ total, total).imag
    cross = 4 * (v / c) * hbar * k * (_dot(zeta.zeta @ b, cc) + _dot(zeta.zeta @ cc, b)).imag
    return ForceResult(float(position), float(friction), float(cross))


def sisyphus_force(x, v, zeta0, amplitude, k, tau_p, hbar=1.0):
    """Closed-form lin-perp-lin force on a J=1/2 -> 3/2 atom."""
    zeta0 = complex(zeta0)
    if zeta0.imag != 0:
        raise InvalidInputError("sisyphus_force requires a real zeta0")
    z, b2 = zeta0.real, abs(amplitude) ** 2
    position = -2 / 3 * hbar * k * b2 * z * np.sin(4 * k * x)
    friction = -8 / 3 * hbar * k ** 2 * b2 * z * v * tau_p * np.sin(2 * k * x) ** 2
    return ForceResult(float(position), float(friction))


def sigma_force(x, v, scheme, rho, amplitude, k, hbar=1.0, c=1.0):
    """Closed-form sigma+ sigma- force on a J=1 -> 2 atom with ground state ``rho``.

    The coherence term carries ``(1/3) i zeta0 Im[C e^{-2ikx}]``, the value that
    follows from the trace with the J=1 -> 2 couplings.
    """
    if (scheme.j_ground, scheme.j_excited) != (Fraction(1), Fraction(2)):
        raise InvalidInputError(
            f"sigma_force needs a J=1 -> 2 scheme, got {scheme.j_ground} -> {scheme.j_excited}")
    p_minus, p_zero, p_plus = (rho.population(m) for m in (-1, 0, 1))
    rotated = rho.coherence(1, -1) * np.exp(-2j * k * x)
    zeta0, b2 = complex(scheme.zeta0), abs(amplitude) ** 2
    inner = 5 / 6 * zeta0 * (p_plus - p_minus) + 1j / 3 * zeta0 * rotated.imag
    position = 2 * hbar * k * b2 * inner.imag
    bracket = 7 / 6 * (p_plus + p_minus) + p_zero + rotated.real / 3
    friction = -2 * (v / c) * hbar * k ** 2 * b2 * complex(scheme.dzeta0_dk).imag * bracket
    return ForceResult(float(position), float(friction))
