"""Immobile linear optical elements and single-atom self-consistent systems.

Elements are thin and sit at ``position`` on the beam axis; free propagation
between consecutive positions is inserted automatically. Input amplitudes
``b_in`` and ``c_in`` and the outputs are referenced to ``x = 0``, i.e. a
rightward mode reads ``b_in exp(ikx)`` and a leftward one ``c_in exp(-ikx)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .atom import polarizability
from .bloch import LocalField, steady_state
from .errors import (ConvergenceError, InvalidInputError, SingularSystemError,
                     UnsupportedConfigurationError)
from .jones import (LINEAR_TO_CIRCULAR, JonesVector, ModeQuartet, ScatteringBlocks,
                    TransferTensor, compose, scattering_blocks, star, transfer_tensor)

KINDS = ("atom", "mirror", "waveplate", "gap", "rotator")


def _per_polarization(value, name):
    arr = np.broadcast_to(np.asarray(value, dtype=complex), (2,)).copy()
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class Element:
    """One element of a linear optical system.

    mirror: ``reflectivity`` (scalar or per (sigma+, sigma-)), optional
    ``transmission`` (default: the lossless value); waveplate: ``retardance``
    and fast-axis ``angle``; rotator: ``angle``; gap: ``length``.
    """

    kind: str
    position: float = 0.0
    reflectivity: object = None
    transmission: object = None
    retardance: float = 0.0
    angle: float = 0.0
    length: float = 0.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown element kind {self.kind!r}; expected one of {KINDS}")
        if not np.isfinite(self.position):
            raise InvalidInputError("element position must be finite")
        if self.kind == "mirror":
            if self.reflectivity is None:
                raise InvalidInputError("mirror needs a reflectivity")
            r = _per_polarization(self.reflectivity, "reflectivity")
            if np.any(np.abs(r) > 1 + 1e-15):
                raise InvalidInputError(f"|reflectivity| must be <= 1, got {np.abs(r)}")
            if self.transmission is not None:
                t = _per_polarization(self.transmission, "transmission")
                if np.any(np.abs(r) ** 2 + np.abs(t) ** 2 > 1 + 1e-12):
                    raise InvalidInputError("mirror would create energy: |r|^2 + |t|^2 > 1")
        if self.kind == "gap" and not self.length >= 0:
            raise InvalidInputError(f"gap length must be >= 0, got {self.length}")

    @property
    def name(self):
        return self.label or f"{self.kind}@{self.position:g}"


def atom(position=0.0):
    return Element("atom", position)


def mirror(position, reflectivity, transmission=None):
    return Element("mirror", position, reflectivity=reflectivity, transmission=transmission)


def waveplate(position, retardance, angle=0.0):
    return Element("waveplate", position, retardance=retardance, angle=angle)


def rotator(position, angle):
    return Element("rotator", position, angle=angle)


def gap(length, position=0.0):
    return Element("gap", position, length=length)


def _rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def _to_circular(jones_cartesian):
    u = LINEAR_TO_CIRCULAR
    return u @ jones_cartesian @ u.conj().T


def _propagation(length, k):
    phase = np.exp(1j * k * length) * np.eye(2)
    return ScatteringBlocks(np.zeros((2, 2), complex), phase, phase, np.zeros((2, 2), complex))


def _jones_blocks(cartesian):
    # reciprocal element: the counter-propagating beam sees the transpose
    zero = np.zeros((2, 2), complex)
    return ScatteringBlocks(zero, _to_circular(cartesian.T), _to_circular(cartesian), zero)


def element_blocks(e, k, zeta=None):
    """Scattering blocks of a single element (works for perfect reflectors)."""
    if e.kind == "gap":
        return _propagation(e.length, k)
    if e.kind == "mirror":
        r = _per_polarization(e.reflectivity, "reflectivity")
        if e.transmission is None:
            mag = np.abs(r)
            t = np.where(mag > 0, 1j * np.exp(1j * np.angle(r)) * np.sqrt(np.clip(1 - mag ** 2, 0, None)),
                         1)
        else:
            t = _per_polarization(e.transmission, "transmission")
        return ScatteringBlocks(np.diag(r), np.diag(t), np.diag(t), np.diag(r))
    if e.kind == "waveplate":
        plate = _rotation(e.angle) @ np.diag([1, np.exp(1j * e.retardance)]) @ _rotation(-e.angle)
        return _jones_blocks(plate)
    if e.kind == "rotator":
        return _jones_blocks(_rotation(e.angle))
    # atom
    return scattering_blocks(transfer_tensor(np.zeros((2, 2)) if zeta is None else zeta), e.name)


def blocks_to_tensor(blocks, element="element"):
    t_back = blocks.t_back
    if np.linalg.cond(t_back) > 1e14:
        raise SingularSystemError(
            f"{element}: no transfer tensor for a perfectly reflecting element", element)
    inv = np.linalg.inv(t_back)
    return TransferTensor(inv, -inv @ blocks.r_left, blocks.r_right @ inv,
                          blocks.t_fwd - blocks.r_right @ inv @ blocks.r_left)


def element_tensor(e, k, zeta=None):
    """Transfer tensor of ``e`` at wavenumber ``k`` (``zeta`` is used by atoms)."""
    return blocks_to_tensor(element_blocks(e, k, zeta), e.name)


def _check_order(elements):
    positions = [e.position for e in elements]
    if any(b <= a for a, b in zip(positions, positions[1:])):
        raise InvalidInputError(f"element positions must be strictly increasing, got {positions}")


def _chain(elements, k, zeta=None):
    """Blocks, referenced to x = 0 on both sides, in left-to-right order."""
    out, x = [], 0.0
    for e in elements:
        out.append((_propagation(e.position - x, k), "free space"))
        out.append((element_blocks(e, k, zeta), e.name))
        x = e.position
    out.append((_propagation(-x, k), "free space"))
    return out


def system_tensor(elements, k, zeta=None):
    """Composed transfer tensor of the whole (ordered) system, references at x = 0."""
    _check_order(elements)
    total = TransferTensor.identity()
    for blocks, name in _chain(elements, k, zeta):
        total = compose(total, blocks_to_tensor(blocks, name))
    return total


def _reduce(parts):
    total = ScatteringBlocks.identity()
    for blocks, name in parts:
        total = star(total, blocks, name)
    return total


@dataclass(frozen=True)
class SystemSolution:
    """Converged state of a single atom embedded in a linear optical system.

    ``atom_modes`` are the four modes immediately around the atom, referenced
    to the atom's position; ``quartet`` holds the system's boundary modes.
    """

    local_field: LocalField
    atom_modes: ModeQuartet
    quartet: ModeQuartet
    rho: object
    iterations: int
    residual: float


class _Linearized:
    """The system with everything except the atom reduced to two-ports."""

    def __init__(self, elements, b_in, c_in):
        _check_order(elements)
        atoms = [i for i, e in enumerate(elements) if e.kind == "atom"]
        if len(atoms) != 1:
            raise UnsupportedConfigurationError(
                f"exactly one atom is supported, found {len(atoms)}")
        b_in._check(c_in)
        self.k = k = b_in.k
        self.b = b_in.to_circular().vector
        self.c = c_in.to_circular().vector
        idx = atoms[0]
        self.atom = elements[idx]
        x_atom = self.atom.position
        left, x = [], 0.0
        for e in elements[:idx]:
            left += [(_propagation(e.position - x, k), "free space"), (element_blocks(e, k), e.name)]
            x = e.position
        left.append((_propagation(x_atom - x, k), "free space"))
        right, x = [], x_atom
        for e in elements[idx + 1:]:
            right += [(_propagation(e.position - x, k), "free space"), (element_blocks(e, k), e.name)]
            x = e.position
        right.append((_propagation(-x, k), "free space"))
        self.left, self.right = _reduce(left), _reduce(right)

    def solve(self, zeta):
        L, R = self.left, self.right
        S = element_blocks(self.atom, self.k, zeta)
        one = np.eye(2)
        lhs = np.block([[one - L.r_right @ S.r_left, -L.r_right @ S.t_back],
                        [-R.r_left @ S.t_fwd, one - R.r_left @ S.r_right]])
        rhs = np.concatenate([L.t_fwd @ self.b, R.t_back @ self.c])
        if np.linalg.cond(lhs) > 1e14:
            raise SingularSystemError(f"{self.atom.name}: self-consistent field equations are singular",
                                      self.atom.name)
        bc = np.linalg.solve(lhs, rhs)
        b_loc, c_loc = bc[:2], bc[2:]
        a_loc, d_loc = S.apply(b_loc, c_loc)
        a_out = L.r_left @ self.b + L.t_back @ a_loc
        d_out = R.t_fwd @ d_loc + R.r_right @ self.c
        k = self.k
        atom_modes = ModeQuartet(*(JonesVector.from_array(v, k) for v in (a_loc, b_loc, c_loc, d_loc)))
        quartet = ModeQuartet(*(JonesVector.from_array(v, k) for v in (a_out, self.b, self.c, d_out)))
        local = LocalField(*(b_loc + c_loc), k, self.atom.position)
        return local, atom_modes, quartet


def solve_system(elements, b_in, c_in, scheme, detuning=0.0, damping=0.0, tol=1e-12,
                 max_iter=200, initial_rho=None):
    """Self-consistent fields and ground state of one atom in a linear system.

    The atom is driven by the field incident on it from both sides. Starting
    from the steady state in the atom-free fields (or ``initial_rho``), the
    ground state, the atom's polarizability and the fields are updated in turn
    until the density matrix moves by less than ``tol``. ``damping`` mixes
    that fraction of the previous density matrix into each update.
    """
    if not 0 <= damping < 1:
        raise InvalidInputError("damping must lie in [0, 1)")
    system = _Linearized(elements, b_in, c_in)
    if initial_rho is None:
        local, _, _ = system.solve(None)
        rho = steady_state(scheme, local, detuning)
    else:
        rho = initial_rho
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        local, atom_modes, quartet = system.solve(polarizability(scheme, rho))
        new = steady_state(scheme, local, detuning)
        residual = float(np.linalg.norm(new.entries - rho.entries))
        if residual < tol:
            return SystemSolution(local, atom_modes, quartet, new, iteration, residual)
        if damping:
            rho = type(new)(damping * rho.entries + (1 - damping) * new.entries, scheme.j_ground)
        else:
            rho = new
    raise ConvergenceError(
        f"no convergence after {max_iter} iterations (last residual {residual:.3e})", residual)
