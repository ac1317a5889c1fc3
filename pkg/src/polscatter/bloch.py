"""Low-saturation optical pumping in the ground manifold.

With the excited state adiabatically eliminated, the ground density matrix
evolves under

    d rho/dt = -1/2 {V^+V, rho} + sum_q D_q^T V rho V^+ D_q - i delta [V^+V, rho]

where ``V = sum_q E_q D_q`` is the absorption operator (``D_q`` holds the
Clebsch-Gordan couplings, so the same matrices give spontaneous branching)
and ``delta`` is the detuning in units of the linewidth. Time is measured in
units of the pumping rate for a unit-intensity field, and the field is
normalised before use, so steady states never depend on its amplitude.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .atom import GroundDensityMatrix, spin_matrices
from .errors import DarkStateMultiplicityError, InvalidInputError
from .jones import SQRT2, JonesVector

NULL_RTOL = 1e-10


@dataclass(frozen=True)
class LocalField:
    """Spherical field components at the atom (``e_pi`` is along the beam axis)."""

    e_plus: complex
    e_minus: complex
    k: float = 1.0
    x: float = 0.0
    e_pi: complex = 0.0

    @classmethod
    def from_jones(cls, jones, x=0.0):
        c = jones.to_circular()
        return cls(c.mu, c.nu, c.k, x)

    def component(self, q):
        return {1: self.e_plus, -1: self.e_minus, 0: self.e_pi}[q]

    @property
    def intensity(self):
        return abs(self.e_plus) ** 2 + abs(self.e_minus) ** 2 + abs(self.e_pi) ** 2

    def cartesian(self):
        """Polarization vector ``(Ex, Ey, Ez)``; ``z`` is the propagation axis."""
        ep, em = complex(self.e_plus), complex(self.e_minus)
        return np.array([(em - ep) / SQRT2, -1j * (ep + em) / SQRT2, self.e_pi])


@dataclass(frozen=True)
class PumpingParameters:
    tau_p: float
    v: float = 0.0

    def __post_init__(self):
        if not self.tau_p > 0:
            raise InvalidInputError("tau_p must be positive")


def absorption_operator(scheme, field):
    return sum(field.component(q) * scheme.dipole(q) for q in (-1, 0, 1))


def ground_generator(scheme, field, detuning=0.0):
    """Superoperator acting on ``rho.reshape(-1)`` (row-major)."""
    if field.intensity == 0:
        raise InvalidInputError("steady state undefined for a zero field")
    scale = np.sqrt(field.intensity)
    unit = LocalField(field.e_plus / scale, field.e_minus / scale, field.k, field.x,
                      field.e_pi / scale)
    v = absorption_operator(scheme, unit)
    vv = v.conj().T @ v
    one = np.eye(scheme.n_ground)
    # row-major: vec(A rho B) = kron(A, B.T) vec(rho)
    left, right = np.kron(vv, one), np.kron(one, vv.T)
    gen = -0.5 * (left + right) - 1j * detuning * (left - right)
    for q in (-1, 0, 1):
        jump = scheme.dipole(q).T @ v
        gen = gen + np.kron(jump, jump.conj())
    return gen


def dark_states(scheme, field):
    """Orthonormal ground states with no coupling to the excited manifold."""
    v = absorption_operator(scheme, field)
    _, s, vh = np.linalg.svd(v)
    s = np.concatenate([s, np.zeros(scheme.n_ground - len(s))])
    tol = NULL_RTOL * max(s.max(), 1.0)
    return [vh[i].conj() for i in range(scheme.n_ground) if s[i] <= tol]


def steady_state(scheme, field, detuning=0.0):
    """Unique stationary ground density matrix for ``field``."""
    gen = ground_generator(scheme, field, detuning)
    _, s, vh = np.linalg.svd(gen)
    null = int(np.sum(s <= NULL_RTOL * s[0]))
    if null > 1:
        dark = dark_states(scheme, field)
        listing = ", ".join(np.array2string(d, precision=4) for d in dark) or "none"
        raise DarkStateMultiplicityError(
            f"stationary manifold has dimension {null}; dark states: {listing}",
            dark_states=dark, null_dimension=null)
    n = scheme.n_ground
    rho = vh[-1].conj().reshape(n, n)
    rho = rho / np.trace(rho)
    rho = (rho + rho.conj().T) / 2
    return GroundDensityMatrix(rho, scheme.j_ground)


@dataclass(frozen=True)
class LinPerpLin:
    """Counterpropagating beams with orthogonal linear polarizations.

    Beam amplitudes are referenced to ``x = 0``; the quarter-period offsets
    put the sigma- maximum at ``kx = 0``.
    """

    amplitude: complex = 1.0
    k: float = 1.0

    def beams(self):
        b = self.amplitude / SQRT2 * np.exp(-1j * np.pi / 4) * np.array([1, 1])
        c = 1j * self.amplitude / SQRT2 * np.exp(1j * np.pi / 4) * np.array([1, -1])
        return JonesVector.from_array(b, self.k), JonesVector.from_array(c, self.k)

    def __call__(self, x):
        b, c = self.beams()
        phase = np.exp(1j * self.k * x)
        return LocalField.from_jones(b * phase + c * phase.conjugate(), x)

    def closed_form(self, scheme, x):
        if (scheme.j_ground, scheme.j_excited) != (Fraction(1, 2), Fraction(3, 2)):
            return None
        kx = self.k * x
        rho = np.diag([np.cos(kx) ** 2, np.sin(kx) ** 2]).astype(complex)
        drho = self.k * np.sin(2 * kx) * np.diag([-1.0, 1.0]).astype(complex)
        return rho, drho


@dataclass(frozen=True)
class SigmaPlusMinus:
    """Counterpropagating sigma+ (rightward) and sigma- (leftward) beams."""

    amplitude: complex = 1.0
    k: float = 1.0

    def beams(self):
        return (JonesVector(self.amplitude, 0, self.k), JonesVector(0, self.amplitude, self.k))

    def __call__(self, x):
        b, c = self.beams()
        phase = np.exp(1j * self.k * x)
        return LocalField.from_jones(b * phase + c * phase.conjugate(), x)

    def closed_form(self, scheme, x):
        if (scheme.j_ground, scheme.j_excited) != (Fraction(1), Fraction(2)):
            return None
        # pi-pumping along the local (rotating) polarization axis gives
        # (4, 9, 4)/17; re-expressed about the beam axis:
        coh = 5 / 34 * np.exp(2j * self.k * x)
        rho = np.array([[13 / 34, 0, np.conj(coh)], [0, 8 / 34, 0], [coh, 0, 13 / 34]])
        drho = np.array([[0, 0, np.conj(2j * self.k * coh)], [0, 0, 0], [2j * self.k * coh, 0, 0]])
        return rho, drho


def steady_state_profile(scheme, profile, x, detuning=0.0):
    """Steady state at ``x`` and its spatial derivative.

    Uses the profile's closed form when it has one for ``scheme``; otherwise a
    central difference with step ``1e-6 / k``.
    """
    closed = getattr(profile, "closed_form", None)
    exact = closed(scheme, x) if closed is not None else None
    if exact is not None:
        return exact
    rho = steady_state(scheme, profile(x), detuning).entries
    h = 1e-6 / abs(profile(x).k)
    plus = steady_state(scheme, profile(x + h), detuning).entries
    minus = steady_state(scheme, profile(x - h), detuning).entries
    return rho, (plus - minus) / (2 * h)


def nonadiabatic_populations(scheme, profile, params, x, detuning=0.0):
    """Steady state lagging by ``v * tau_p`` behind the local one (first order in v)."""
    rho, drho = steady_state_profile(scheme, profile, x, detuning)
    lagged = rho - params.v * params.tau_p * drho
    return GroundDensityMatrix(lagged, scheme.j_ground, atol=1e-9)


def polarization_axis(field):
    """Real unit vector along a linearly polarized ``field``."""
    vec = field.cartesian()
    vec = vec * np.exp(-0.5j * np.angle(vec @ vec))
    if np.linalg.norm(vec.imag) > 1e-9 * np.linalg.norm(vec):
        raise InvalidInputError("field is not linearly polarized")
    return vec.real / np.linalg.norm(vec.real)


def populations_along(rho, axis):
    """Populations of ``rho`` quantized along the Cartesian unit vector ``axis``.

    Returned in ascending ``m`` about that axis.
    """
    jx, jy, jz = spin_matrices(rho.j_ground)
    jn = axis[0] * jx + axis[1] * jy + axis[2] * jz
    _, vecs = np.linalg.eigh(jn)
    return np.einsum("im,ij,jm->m", vecs.conj(), rho.entries, vecs).real
