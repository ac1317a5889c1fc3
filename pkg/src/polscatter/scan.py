"""Position/velocity scans over a :class:`~polscatter.scenario.Scenario`."""
from __future__ import annotations

import dataclasses
import io
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .atom import polarizability
from .bloch import LinPerpLin, SigmaPlusMinus, steady_state_profile
from .forces import force_expansion
from .optics import solve_system

HBAR_SI = 1.054571817e-34
C_SI = 299792458.0

_PROFILES = {"lin_perp_lin": LinPerpLin, "sigma_plus_minus": SigmaPlusMinus}


def _m_label(m):
    return f"+{m}" if m > 0 else str(m)


def columns(scenario):
    scheme = scenario.scheme
    pops = [f"pop({_m_label(m)})" for m in scheme.ground_m]
    return ["x", "kx", "v", "total", "position_term", "friction_term", *pops,
            "coherence_re", "coherence_im", "error"]


def _named_point(scenario, scheme, kx, v):
    profile = _PROFILES[scenario.configuration](scenario.amplitude, scenario.k)
    x = kx / scenario.k
    rho, drho = steady_state_profile(scheme, profile, x, scenario.detuning)
    lag = -v * scenario.tau_p * drho
    b, cc = profile.beams()
    phase = np.exp(1j * scenario.k * x)
    b_loc, c_loc = b * phase, cc * np.conj(phase)
    return rho + lag, b_loc, c_loc, polarizability(scheme, rho), polarizability(scheme, lag)


def _custom_point(scenario, scheme, kx, v):
    elements = scenario.element_list()
    b_in, c_in = scenario.beams()
    x = kx / scenario.k

    def at(pos):
        placed = [dataclasses.replace(e, position=pos) if e.kind == "atom" else e for e in elements]
        placed.sort(key=lambda e: e.position)
        return solve_system(placed, b_in, c_in, scheme, scenario.detuning)

    sol = at(x)
    rho = sol.rho.entries
    lag = np.zeros_like(rho)
    if v != 0:
        h = 1e-6 / scenario.k
        lag = -v * scenario.tau_p * (at(x + h).rho.entries - at(x - h).rho.entries) / (2 * h)
    modes = sol.atom_modes
    return rho + lag, modes.b_in, modes.c_in, polarizability(scheme, rho), polarizability(scheme, lag)


def scan_point(scenario, kx, v, units="natural"):
    """One row of the scan table as a dict of numbers.

    ``position_term`` is the force on an atom at rest at ``x``; ``friction_term``
    collects everything proportional to ``v``: the lag of the ground state
    behind its local steady state and the Doppler term. ``coherence_*`` is
    ``<+j|rho|-j>``.
    """
    hbar, c = (HBAR_SI, C_SI) if units == "si" else (1.0, 1.0)
    scheme = scenario.scheme
    if scenario.configuration == "custom":
        rho, b_loc, c_loc, zeta_rest, zeta_lag = _custom_point(scenario, scheme, kx, v)
    else:
        rho, b_loc, c_loc, zeta_rest, zeta_lag = _named_point(scenario, scheme, kx, v)
    rest = force_expansion(zeta_rest, b_loc, c_loc, v, hbar=hbar, c=c)
    lagged = force_expansion(zeta_lag, b_loc, c_loc, 0.0, hbar=hbar, c=c)
    position = rest.position_term
    friction = lagged.position_term + rest.friction_term
    row = {"x": kx / scenario.k, "kx": kx, "v": v, "total": position + friction,
           "position_term": position, "friction_term": friction}
    for i, m in enumerate(scheme.ground_m):
        row[f"pop({_m_label(m)})"] = rho[i, i].real
    top = rho[-1, 0]
    row["coherence_re"], row["coherence_im"] = top.real, top.imag
    row["error"] = ""
    return row


def _safe_point(args):
    scenario, kx, v, units = args
    try:
        return scan_point(scenario, kx, v, units)
    except Exception as exc:  # recorded per row, the scan carries on
        return {"x": kx / scenario.k, "kx": kx, "v": v,
                "error": f"{type(exc).__name__}: {exc}"}


def run_scan(scenario, units="natural", threads=1):
    """Rows for every ``(x, v)`` grid point, x-major."""
    if units not in ("natural", "si"):
        raise ValueError(f"units must be 'natural' or 'si', got {units!r}")
    jobs = [(scenario, float(kx), float(v), units)
            for kx in scenario.x_grid.values() for v in scenario.v_grid.values()]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_safe_point, jobs))
    return [_safe_point(job) for job in jobs]


def _fmt(value):
    if isinstance(value, str):
        return value.replace("\n", " ").replace(",", ";")
    return "%.17g" % value


def to_csv(scenario, rows, units="natural"):
    cols = columns(scenario)
    out = io.StringIO()
    out.write(f"# scenario_sha256={scenario.digest()} schema_version={scenario.schema_version}"
              f" units={units}\n")
    out.write(",".join(cols) + "\n")
    for row in rows:
        out.write(",".join(_fmt(row[c]) if c in row else "" for c in cols) + "\n")
    return out.getvalue()


def read_csv(text):
    """Parse scan CSV back into rows (numbers as floats)."""
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        row = {}
        for key, raw in zip(header, line.split(",")):
            if key == "error":
                row[key] = raw
            elif raw != "":
                row[key] = float(raw)
        rows.append(row)
    return rows

