import json
import math

import numpy as np
import pytest

from polscatter import LinPerpLin, ScenarioValidationError, parse_scenario, run_scan
from polscatter.cli import main
from polscatter.scan import HBAR_SI, columns, read_csv, scan_point, to_csv

MINIMAL = "schema_version: 1\n"

SIGMA = """
schema_version: 1
configuration: sigma_plus_minus
atom: {zeta0: 1.0e-3, dzeta0_dk_imag: 2.0e-3}
scan:
  x: {points: 5}
  v: {start: -0.05, stop: 0.05, points: 3}
"""

CUSTOM = """
schema_version: 1
configuration: custom
atom: {zeta0: 0.01}
beam:
  basis: linear
  b_in: [[1, 0], [0, 0]]
elements:
  - {kind: atom}
  - {kind: waveplate, position: 2.0, retardance: 0.785398, angle: 0.3}
  - {kind: mirror, position: 3.0, reflectivity: {re: -0.9, im: 0.1}}
scan:
  x: {start: 0.0, stop: 1.5, points: 4}
  v: {start: -0.01, stop: 0.01, points: 3}
"""


def test_minimal_scenario_defaults():
    s = parse_scenario(MINIMAL)
    assert s.configuration == "lin_perp_lin"
    assert (s.j_ground, s.j_excited) == ("1/2", "3/2")
    assert s.zeta0 == 1e-4 and s.tau_p == 1.0
    assert len(s.x_grid.values()) == 64 and s.x_grid.values()[-1] < math.pi
    v = s.v_grid.values()
    assert len(v) == 21 and v[0] == pytest.approx(-0.1) and v[-1] == pytest.approx(0.1)


def test_sigma_scenario_defaults_to_one_to_two():
    s = parse_scenario(SIGMA)
    assert (s.j_ground, s.j_excited) == ("1", "2")
    assert columns(s)[6:9] == ["pop(-1)", "pop(0)", "pop(+1)"]


def test_json_is_accepted():
    s = parse_scenario(json.dumps({"schema_version": 1, "tau_p": 2.0}))
    assert s.tau_p == 2.0
    assert s.v_grid.values()[-1] == pytest.approx(0.05)


def test_negative_tau_p():
    with pytest.raises(ScenarioValidationError, match="tau_p must be positive"):
        parse_scenario("schema_version: 1\ntau_p: -1\n")


def test_all_problems_are_reported_together():
    doc = """
schema_version: 2
configuration: lin_perp_lin
colour: red
atom: {j_ground: 0.25, zeta0: nope}
beam: {k: -1}
tau_p: 0
scan: {x: {points: 0}}
"""
    with pytest.raises(ScenarioValidationError) as err:
        parse_scenario(doc)
    text = str(err.value)
    for fragment in ("schema_version must be 1", "unknown key 'colour'", "j_ground", "zeta0 must be a number",
                     "beam.k=-1.0 outside legal range", "tau_p must be positive",
                     "scan.x.points"):
        assert fragment in text
    assert len(err.value.errors) == 7


def test_custom_only_keys_are_rejected_elsewhere():
    with pytest.raises(ScenarioValidationError, match="only allowed"):
        parse_scenario("schema_version: 1\nelements: [{kind: atom}]\n")


def test_custom_needs_one_atom():
    doc = CUSTOM.replace("  - {kind: atom}\n", "")
    with pytest.raises(ScenarioValidationError, match="exactly one atom"):
        parse_scenario(doc)


def test_bad_mirror_is_reported_with_its_index():
    doc = CUSTOM.replace("{re: -0.9, im: 0.1}", "1.5")
    with pytest.raises(ScenarioValidationError, match=r"elements\[2\]"):
        parse_scenario(doc)


def test_malformed_yaml():
    with pytest.raises(ScenarioValidationError, match="malformed"):
        parse_scenario("schema_version: [1\n")


def test_lin_perp_lin_examples():
    s = parse_scenario("schema_version: 1\nscan: {x: {points: 1}, v: {points: 1, start: 0, stop: 0}}\n")
    row = scan_point(s, np.pi / 8, 0.0)
    assert row["total"] == pytest.approx(-2 / 3 * s.zeta0, rel=1e-12)
    assert row["friction_term"] == 0
    assert scan_point(s, 0.0, 0.0)["total"] == pytest.approx(0, abs=1e-18)
    assert row["pop(-1/2)"] + row["pop(+1/2)"] == pytest.approx(1)


def test_lin_perp_lin_friction_column():
    s = parse_scenario(MINIMAL)
    row = scan_point(s, np.pi / 4, 0.05)
    # sin^2(2kx) = 1
    assert row["friction_term"] == pytest.approx(-8 / 3 * s.zeta0 * 0.05, rel=1e-12)


def test_sigma_plus_minus_at_rest_is_force_free():
    s = parse_scenario(SIGMA)
    for kx in s.x_grid.values():
        row = scan_point(s, kx, 0.0)
        assert row["total"] == pytest.approx(0, abs=1e-18)
        assert row["pop(0)"] == pytest.approx(8 / 34)
        assert complex(row["coherence_re"], row["coherence_im"]) * np.exp(-2j * kx) == pytest.approx(5 / 34)


def test_sigma_plus_minus_friction_sign_follows_dzeta_dk():
    damped = parse_scenario(SIGMA)
    assert scan_point(damped, 0.3, 0.05)["total"] < 0 < scan_point(damped, 0.3, -0.05)["total"]
    heated = parse_scenario(SIGMA.replace("dzeta0_dk_imag: 2.0e-3", "dzeta0_dk_imag: -2.0e-3"))
    assert scan_point(heated, 0.3, 0.05)["total"] > 0


def test_single_point_scan():
    s = parse_scenario("schema_version: 1\nscan: {x: {points: 1}, v: {points: 1, start: 0, stop: 0}}\n")
    rows = run_scan(s)
    assert len(rows) == 1 and rows[0]["total"] == pytest.approx(0, abs=1e-18)


def test_scan_shape_and_ordering():
    s = parse_scenario(SIGMA)
    rows = run_scan(s)
    assert len(rows) == 15
    assert [r["kx"] for r in rows[:3]] == [0.0] * 3
    assert [r["v"] for r in rows[:3]] == list(s.v_grid.values())


def test_threads_do_not_change_results():
    s = parse_scenario(CUSTOM)
    assert to_csv(s, run_scan(s, threads=4)) == to_csv(s, run_scan(s, threads=1))


def test_csv_round_trip_is_exact():
    s = parse_scenario(SIGMA)
    rows = run_scan(s)
    text = to_csv(s, rows)
    assert text.startswith(f"# scenario_sha256={s.digest()} schema_version=1 units=natural\n")
    back = read_csv(text)
    for orig, parsed in zip(rows, back):
        for key in columns(s):
            assert parsed[key] == orig[key]


def test_si_units_scale_forces_by_hbar():
    s = parse_scenario(MINIMAL)
    nat = scan_point(s, 0.3, 0.05)
    si = scan_point(s, 0.3, 0.05, units="si")
    assert si["position_term"] == pytest.approx(HBAR_SI * nat["position_term"], rel=1e-12)
    with pytest.raises(ValueError):
        run_scan(s, units="cgs")


def test_custom_scan_runs(tmp_path):
    s = parse_scenario(CUSTOM)
    rows = run_scan(s)
    assert len(rows) == 12
    assert all(r["error"] == "" for r in rows)
    assert all(np.isfinite(r["total"]) for r in rows)


def test_custom_at_rest_matches_free_atom_limit():
    # with no mirror the custom path must reproduce the named lin-perp-lin row
    doc = """
schema_version: 1
configuration: custom
atom: {zeta0: 0.0}
beam:
  b_in: [[0.5, -0.5], [0.5, -0.5]]
  c_in: [[-0.5, 0.5], [0.5, -0.5]]
elements: [{kind: atom}]
"""
    s = parse_scenario(doc)
    named = parse_scenario(MINIMAL)
    b, c = s.beams()
    ref_b, ref_c = LinPerpLin().beams()
    np.testing.assert_allclose(b.vector, ref_b.vector, atol=1e-15)
    np.testing.assert_allclose(c.vector, ref_c.vector, atol=1e-15)
    for kx in (0.2, 1.0):
        custom = scan_point(s, kx, 0.02)
        ref = scan_point(named, kx, 0.02)
        assert custom["pop(-1/2)"] == pytest.approx(ref["pop(-1/2)"], abs=1e-8)


def _write(tmp_path, text, name="scenario.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_cli_success(tmp_path, capsys):
    out = tmp_path / "out.csv"
    assert main(["scan", str(_write(tmp_path, SIGMA)), "--out", str(out), "--threads", "2"]) == 0
    rows = read_csv(out.read_text())
    assert len(rows) == 15


def test_cli_stdout(tmp_path, capsys):
    assert main(["scan", str(_write(tmp_path, MINIMAL.replace("1\n", "1\nscan: {x: {points: 2}}\n")))]) == 0
    text = capsys.readouterr().out
    assert text.count("\n") == 2 + 2 * 21


def test_cli_validation_error(tmp_path, capsys):
    assert main(["scan", str(_write(tmp_path, "schema_version: 1\ntau_p: -1\n"))]) == 1
    assert "tau_p must be positive" in capsys.readouterr().err


def test_cli_missing_file(tmp_path, capsys):
    assert main(["scan", str(tmp_path / "absent.yaml")]) == 1


def test_cli_solver_error_exit_code(tmp_path, capsys):
    # J=1 -> 0 in linearly polarized light has two dark states
    doc = "schema_version: 1\natom: {j_ground: 1, j_excited: 0}\nscan: {x: {points: 2}, v: {points: 1, start: 0, stop: 0}}\n"
    out = tmp_path / "out.csv"
    assert main(["scan", str(_write(tmp_path, doc)), "--out", str(out)]) == 2
    rows = read_csv(out.read_text())
    assert all(r["error"].startswith("DarkStateMultiplicityError") for r in rows)
    assert "2 of 2 rows failed" in capsys.readouterr().err


def test_cli_rejects_bad_threads(tmp_path):
    assert main(["scan", str(_write(tmp_path, MINIMAL)), "--threads", "0"]) == 1
