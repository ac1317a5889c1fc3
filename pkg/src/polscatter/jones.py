"""Jones-vector field modes and 2x2-block transfer tensors.

Four modes surround a thin scatterer::

        A <--  |  <-- C
        B -->  |  --> D

``B`` and ``C`` are incoming, ``A`` and ``D`` outgoing. Each side is
described by the pair (leftward, rightward) = ``(A, B)`` on the left and
``(C, D)`` on the right. A :class:`TransferTensor` ``M`` carries the left
pair to the right pair, ``(C, D) = M (A, B)``, so a chain of elements
composes as ``M_n ... M_2 M_1``.

With this orientation a thin scatterer of polarizability ``zeta`` has
``M = [[1 - i zeta, -i zeta], [i zeta, 1 + i zeta]]`` and reflects with
``r = i zeta / (1 - i zeta)``; ``Im zeta > 0`` absorbs.

Amplitudes are in the circular basis ``(sigma+, sigma-)`` unless tagged
``basis="linear"``, in which case they are ``(x, y)`` components and are
rotated with :data:`LINEAR_TO_CIRCULAR` before any arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .atom import PolarizabilityTensor
from .errors import InvalidInputError, SingularSystemError

SQRT2 = np.sqrt(2.0)

# (E+, E-) = U (Ex, Ey) with E+- the q = +-1 spherical components,
# e_{+1} = -(x + iy)/sqrt2, e_{-1} = (x - iy)/sqrt2.
LINEAR_TO_CIRCULAR = np.array([[-1.0, 1.0j], [1.0, 1.0j]]) / SQRT2
LINEAR_TO_CIRCULAR.setflags(write=False)

BASES = ("circular", "linear")


@dataclass(frozen=True)
class JonesVector:
    """Two complex amplitudes at wavenumber ``k`` (sqrt of photon flux)."""

    mu: complex
    nu: complex
    k: float
    basis: str = "circular"

    def __post_init__(self):
        if self.basis not in BASES:
            raise InvalidInputError(f"basis must be one of {BASES}, got {self.basis!r}")
        mu, nu = complex(self.mu), complex(self.nu)
        if not np.all(np.isfinite([mu, nu, self.k])):
            raise InvalidInputError("Jones vector has non-finite entries")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "k", float(self.k))

    @classmethod
    def from_array(cls, amplitudes, k, basis="circular"):
        mu, nu = np.asarray(amplitudes, dtype=complex)
        return cls(mu, nu, k, basis)

    @classmethod
    def zero(cls, k):
        return cls(0, 0, k)

    @property
    def vector(self):
        return np.array([self.mu, self.nu])

    @property
    def norm2(self):
        return abs(self.mu) ** 2 + abs(self.nu) ** 2

    def to_circular(self):
        if self.basis == "circular":
            return self
        return JonesVector.from_array(LINEAR_TO_CIRCULAR @ self.vector, self.k)

    def _check(self, other):
        if self.basis != other.basis:
            raise InvalidInputError(f"basis mismatch: {self.basis} vs {other.basis}")
        if self.k != other.k:
            raise InvalidInputError(f"wavenumber mismatch: {self.k} vs {other.k}")

    def __add__(self, other):
        self._check(other)
        return JonesVector(self.mu + other.mu, self.nu + other.nu, self.k, self.basis)

    def __sub__(self, other):
        self._check(other)
        return JonesVector(self.mu - other.mu, self.nu - other.nu, self.k, self.basis)

    def __mul__(self, factor):
        return JonesVector(factor * self.mu, factor * self.nu, self.k, self.basis)

    __rmul__ = __mul__


@dataclass(frozen=True)
class ModeQuartet:
    a_out: JonesVector
    b_in: JonesVector
    c_in: JonesVector
    d_out: JonesVector

    def __post_init__(self):
        for mode in (self.a_out, self.c_in, self.d_out):
            self.b_in._check(mode)

    @property
    def k(self):
        return self.b_in.k


def _block(x):
    arr = np.array(x, dtype=complex)
    if arr.ndim == 0:
        arr = arr * np.eye(2)
    if arr.shape != (2, 2):
        raise InvalidInputError(f"expected a 2x2 block, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TransferTensor:
    m11: np.ndarray
    m12: np.ndarray
    m21: np.ndarray
    m22: np.ndarray

    def __post_init__(self):
        for name in ("m11", "m12", "m21", "m22"):
            object.__setattr__(self, name, _block(getattr(self, name)))

    @classmethod
    def identity(cls):
        return cls(np.eye(2), np.zeros((2, 2)), np.zeros((2, 2)), np.eye(2))

    @classmethod
    def from_matrix(cls, matrix):
        m = np.asarray(matrix, dtype=complex)
        if m.shape != (4, 4):
            raise InvalidInputError(f"expected 4x4 matrix, got {m.shape}")
        return cls(m[:2, :2], m[:2, 2:], m[2:, :2], m[2:, 2:])

    @property
    def matrix(self):
        return np.block([[self.m11, self.m12], [self.m21, self.m22]])

    def __matmul__(self, other):
        return TransferTensor.from_matrix(self.matrix @ other.matrix)


def transfer_tensor(zeta):
    """Transfer tensor of a thin scatterer with 2x2 polarizability ``zeta``."""
    if isinstance(zeta, PolarizabilityTensor):
        zeta = zeta.zeta
    z = _block(zeta)
    one = np.eye(2)
    return TransferTensor(one - 1j * z, -1j * z, 1j * z, one + 1j * z)


def compose(left, right):
    """Tensor of ``left`` followed (to its right) by ``right``."""
    return right @ left


@dataclass(frozen=True)
class ScatteringBlocks:
    """Input-output form: ``A = r_left B + t_back C``, ``D = t_fwd B + r_right C``."""

    r_left: np.ndarray
    t_back: np.ndarray
    t_fwd: np.ndarray
    r_right: np.ndarray

    @classmethod
    def identity(cls):
        z, one = np.zeros((2, 2), complex), np.eye(2, dtype=complex)
        return cls(z, one, one, z)

    def apply(self, b, c):
        """Outgoing ``(a, d)`` arrays for incoming ``b``, ``c`` arrays."""
        return self.r_left @ b + self.t_back @ c, self.t_fwd @ b + self.r_right @ c


def scattering_blocks(tensor, element="scatterer"):
    try:
        t_back = np.linalg.inv(tensor.m11)
    except np.linalg.LinAlgError:
        raise SingularSystemError(
            f"{element}: m11 block is singular, no input-output solution", element) from None
    if np.linalg.cond(tensor.m11) > 1e14:
        raise SingularSystemError(f"{element}: m11 block is numerically singular", element)
    r_left = -t_back @ tensor.m12
    r_right = tensor.m21 @ t_back
    t_fwd = tensor.m22 + tensor.m21 @ r_left
    return ScatteringBlocks(r_left, t_back, t_fwd, r_right)


def star(left, right, element="system"):
    """Combine the scattering blocks of two elements placed side by side."""
    one = np.eye(2)
    loop = one - left.r_right @ right.r_left
    if np.linalg.cond(loop) > 1e14:
        raise SingularSystemError(f"{element}: resonant loop between elements is singular", element)
    inv = np.linalg.inv(loop)
    # u: rightward amplitude between the two, w: leftward
    u_from_b = inv @ left.t_fwd
    u_from_c = inv @ left.r_right @ right.t_back
    w_from_b = right.r_left @ u_from_b
    w_from_c = right.r_left @ u_from_c + right.t_back
    return ScatteringBlocks(
        r_left=left.r_left + left.t_back @ w_from_b,
        t_back=left.t_back @ w_from_c,
        t_fwd=right.t_fwd @ u_from_b,
        r_right=right.r_right + right.t_fwd @ u_from_c,
    )


def scatter(tensor, b_in, c_in, element="scatterer"):
    """Outgoing modes of ``tensor`` illuminated by ``b_in`` (from the left) and ``c_in``."""
    b_in._check(c_in)
    b, c = b_in.to_circular(), c_in.to_circular()
    blocks = scattering_blocks(tensor, element)
    a, d = blocks.apply(b.vector, c.vector)
    return ModeQuartet(
        JonesVector.from_array(a, b.k), b, c, JonesVector.from_array(d, b.k))
