"""Level schemes, Clebsch-Gordan coefficients and the polarizability operator.

Ground and excited sublevels are indexed in ascending magnetic quantum number,
so index ``a`` of a level with angular momentum ``j`` carries ``m = -j + a``.
The two-component polarization basis is ``(sigma+, sigma-)``, i.e. the
spherical components ``q = +1`` and ``q = -1`` about the propagation axis.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, isfinite, sqrt

import numpy as np

from .errors import InvalidInputError

# Jones-vector component order: mu = sigma+, nu = sigma-
JONES_Q = (+1, -1)


def as_angular_momentum(value, name="j"):
    """Return ``value`` as an exact non-negative half-integer ``Fraction``."""
    try:
        frac = Fraction(value)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name}={value!r} is not a number") from exc
    if (2 * frac).denominator != 1:
        raise InvalidInputError(f"{name}={value!r} is not an integer or half-integer")
    return frac


def clebsch_gordan_exact(j1, m1, j2, m2, j, m):
    """Exact ``<j1 m1; j2 m2 | j m>`` as ``(sign, square)``.

    ``square`` is a ``Fraction``; the coefficient is ``sign * sqrt(square)``.
    Uses the Racah closed form, Condon-Shortley phase convention.
    """
    j1, j2, j = (as_angular_momentum(x, "j") for x in (j1, j2, j))
    for x in (j1, j2, j):
        if x < 0:
            raise InvalidInputError(f"angular momentum {x} is negative")
    m1, m2, m = (Fraction(x) for x in (m1, m2, m))
    for mm, jj in ((m1, j1), (m2, j2), (m, j)):
        if (2 * mm).denominator != 1 or (jj - mm).denominator != 1:
            raise InvalidInputError(f"projection {mm} incompatible with j={jj}")
    if m1 + m2 != m or abs(m1) > j1 or abs(m2) > j2 or abs(m) > j:
        return 0, Fraction(0)
    if not (abs(j1 - j2) <= j <= j1 + j2) or (j1 + j2 + j).denominator != 1:
        return 0, Fraction(0)

    def f(x):
        return factorial(int(x))

    prefactor = Fraction(
        int(2 * j + 1) * f(j + j1 - j2) * f(j - j1 + j2) * f(j1 + j2 - j),
        f(j1 + j2 + j + 1),
    ) * (f(j + m) * f(j - m) * f(j1 - m1) * f(j1 + m1) * f(j2 - m2) * f(j2 + m2))

    total = Fraction(0)
    kmin = int(max(0, -(j - j2 + m1), -(j - j1 - m2)))
    kmax = int(min(j1 + j2 - j, j1 - m1, j2 + m2))
    for k in range(kmin, kmax + 1):
        denom = (
            f(k) * f(j1 + j2 - j - k) * f(j1 - m1 - k) * f(j2 + m2 - k)
            * f(j - j2 + m1 + k) * f(j - j1 - m2 + k)
        )
        total += Fraction((-1) ** k, denom)
    if total == 0:
        return 0, Fraction(0)
    return (1 if total > 0 else -1), prefactor * total * total


def clebsch_gordan(j_g, m_g, q, j_e):
    """Dipole coupling ``<j_g, m_g; 1, q | j_e, m_g + q>``.

    Returns 0 when ``m_g + q`` lies outside the excited manifold.
    """
    if q not in (-1, 0, 1):
        raise InvalidInputError(f"q must be -1, 0 or +1, got {q!r}")
    j_g = as_angular_momentum(j_g, "j_g")
    j_e = as_angular_momentum(j_e, "j_e")
    m_g = Fraction(m_g)
    if abs(m_g) > j_g:
        raise InvalidInputError(f"|m_g|={abs(m_g)} exceeds j_g={j_g}")
    if abs(m_g + q) > j_e:
        return 0.0
    sign, square = clebsch_gordan_exact(j_g, m_g, 1, q, j_e, m_g + q)
    return sign * sqrt(square)


@lru_cache(maxsize=None)
def _dipole_matrix(two_jg, two_je, q):
    j_g, j_e = Fraction(two_jg, 2), Fraction(two_je, 2)
    n_g, n_e = two_jg + 1, two_je + 1
    out = np.zeros((n_e, n_g))
    for a in range(n_g):
        m_g = -j_g + a
        b = m_g + q + j_e
        if 0 <= b < n_e:
            out[int(b), a] = clebsch_gordan(j_g, m_g, q, j_e)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class LevelScheme:
    """A ``j_ground -> j_excited`` dipole transition with its polarizability scale.

    ``zeta0`` is the characteristic (dimensionless) polarizability and
    ``dzeta0_dk`` its derivative with respect to wavenumber.
    """

    j_ground: Fraction
    j_excited: Fraction
    zeta0: complex = 1.0
    dzeta0_dk: complex = 0.0

    def __post_init__(self):
        jg = as_angular_momentum(self.j_ground, "j_ground")
        je = as_angular_momentum(self.j_excited, "j_excited")
        if jg < 0 or je < 0:
            raise InvalidInputError("angular momenta must be non-negative")
        if abs(jg - je) not in (0, 1) or (jg == 0 and je == 0):
            raise InvalidInputError(
                f"no electric-dipole transition between J={jg} and J'={je}")
        for name in ("zeta0", "dzeta0_dk"):
            val = complex(getattr(self, name))
            if not (isfinite(val.real) and isfinite(val.imag)):
                raise InvalidInputError(f"{name} must be finite")
        object.__setattr__(self, "j_ground", jg)
        object.__setattr__(self, "j_excited", je)

    @property
    def n_ground(self):
        return int(2 * self.j_ground + 1)

    @property
    def n_excited(self):
        return int(2 * self.j_excited + 1)

    @property
    def ground_m(self):
        return [-self.j_ground + a for a in range(self.n_ground)]

    def ground_index(self, m):
        m = Fraction(m)
        idx = m + self.j_ground
        if idx.denominator != 1 or not 0 <= idx < self.n_ground:
            raise InvalidInputError(f"m={m} is not a sublevel of J={self.j_ground}")
        return int(idx)

    def dipole(self, q):
        """``(n_excited, n_ground)`` matrix of couplings for polarization ``q``."""
        return _dipole_matrix(int(2 * self.j_ground), int(2 * self.j_excited), q)


@dataclass(frozen=True)
class GroundDensityMatrix:
    """Ground-manifold density matrix, rows/columns in ascending ``m``."""

    entries: np.ndarray
    j_ground: Fraction
    atol: float = field(default=1e-12, repr=False, compare=False)

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        jg = as_angular_momentum(self.j_ground, "j_ground")
        n = int(2 * jg + 1)
        if rho.shape != (n, n):
            raise InvalidInputError(f"expected a {n}x{n} matrix for J={jg}, got {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise InvalidInputError("density matrix has non-finite entries")
        if np.max(np.abs(rho - rho.conj().T)) > self.atol:
            raise InvalidInputError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1) > self.atol:
            raise InvalidInputError(f"density matrix trace is {np.trace(rho)}, not 1")
        rho.setflags(write=False)
        object.__setattr__(self, "entries", rho)
        object.__setattr__(self, "j_ground", jg)

    def _index(self, m):
        idx = Fraction(m) + self.j_ground
        if idx.denominator != 1 or not 0 <= idx < len(self.entries):
            raise InvalidInputError(f"m={m} out of range for J={self.j_ground}")
        return int(idx)

    @property
    def populations(self):
        return self.entries.diagonal().real.copy()

    def population(self, m):
        return self.entries[self._index(m), self._index(m)].real

    def coherence(self, m1, m2):
        """``<m1|rho|m2>``."""
        return self.entries[self._index(m1), self._index(m2)]

    @property
    def is_positive(self):
        return bool(np.linalg.eigvalsh(self.entries).min() >= -self.atol)


@dataclass(frozen=True)
class PolarizabilityTensor:
    zeta: np.ndarray
    dzeta_dk: np.ndarray = None

    def __post_init__(self):
        zeta = np.array(self.zeta, dtype=complex)
        if zeta.shape != (2, 2):
            raise InvalidInputError(f"zeta must be 2x2, got shape {zeta.shape}")
        dz = np.zeros((2, 2), complex) if self.dzeta_dk is None else np.array(self.dzeta_dk, dtype=complex)
        if dz.shape != (2, 2):
            raise InvalidInputError("dzeta_dk must be 2x2")
        if not (np.all(np.isfinite(zeta)) and np.all(np.isfinite(dz))):
            raise InvalidInputError("polarizability has non-finite entries")
        zeta.setflags(write=False)
        dz.setflags(write=False)
        object.__setattr__(self, "zeta", zeta)
        object.__setattr__(self, "dzeta_dk", dz)

    def __add__(self, other):
        return PolarizabilityTensor(self.zeta + other.zeta, self.dzeta_dk + other.dzeta_dk)

    def scaled(self, factor):
        return PolarizabilityTensor(factor * self.zeta, factor * self.dzeta_dk)


@lru_cache(maxsize=None)
def _unit_chi(two_jg, two_je):
    scheme = LevelScheme(Fraction(two_jg, 2), Fraction(two_je, 2))
    d = [scheme.dipole(q) for q in JONES_Q]
    # chi[i, j, p, r] = sum_e d_p[e, i] d_r[e, j]
    chi = np.einsum("pei,rej->ijpr", np.array(d), np.array(d))
    chi.setflags(write=False)
    return chi


def chi_operator(scheme):
    """Full polarizability operator, shape ``(n_g, n_g, 2, 2)``, blocks ``<i|chi|j>``."""
    return scheme.zeta0 * _unit_chi(int(2 * scheme.j_ground), int(2 * scheme.j_excited))


def chi_element(scheme, m_i, m_j):
    """The 2x2 block ``<m_i|chi|m_j>`` in the (sigma+, sigma-) basis."""
    i, j = scheme.ground_index(m_i), scheme.ground_index(m_j)
    return chi_operator(scheme)[i, j]


def polarizability(scheme, rho):
    """``zeta = Tr(rho chi)`` together with its wavenumber derivative.

    ``rho`` may be a :class:`GroundDensityMatrix` or any square array of the
    right size; the map is linear so trace-zero perturbations are accepted.
    """
    entries = rho.entries if isinstance(rho, GroundDensityMatrix) else np.asarray(rho, dtype=complex)
    n = scheme.n_ground
    if entries.shape != (n, n):
        raise InvalidInputError(
            f"density matrix shape {entries.shape} does not match J={scheme.j_ground}")
    unit = _unit_chi(int(2 * scheme.j_ground), int(2 * scheme.j_excited))
    shape = np.einsum("ji,ijpr->pr", entries, unit)
    return PolarizabilityTensor(scheme.zeta0 * shape, scheme.dzeta0_dk * shape)


@lru_cache(maxsize=None)
def _spin_matrices(two_j):
    j = two_j / 2
    m = -j + np.arange(two_j + 1)
    jz = np.diag(m).astype(complex)
    # <m+1|J+|m> = sqrt(j(j+1) - m(m+1))
    jp = np.diag(np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] + 1)), k=-1).astype(complex)
    jx = (jp + jp.conj().T) / 2
    jy = (jp - jp.conj().T) / 2j
    for a in (jx, jy, jz):
        a.setflags(write=False)
    return jx, jy, jz


def spin_matrices(j):
    """``(Jx, Jy, Jz)`` in the ascending-``m`` basis, Condon-Shortley phases."""
    return _spin_matrices(int(2 * as_angular_momentum(j)))
