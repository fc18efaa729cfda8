import math
import os
import subprocess

import pytest

import berrytop


def test_rashba_berry_phase_is_pi():
    assert berrytop.berry_phase("rashba") == pytest.approx(math.pi, abs=1e-6)
    assert berrytop.berry_phase("dresselhaus") == pytest.approx(-math.pi, abs=1e-6)
    assert berrytop.berry_phase("bilayer", turns=2) == pytest.approx(4 * math.pi, abs=1e-6)


def test_field_and_curvature():
    assert berrytop.field("monolayer", (3, 4, 0)) == pytest.approx((3, 4, 0))
    assert berrytop.curvature("identity", (0, 0, 2)) == pytest.approx((0, 0, 0.25))
    omega = berrytop.curvature("gapped-rashba", (1, 0, 0))
    assert omega[2] == pytest.approx(0.5 / 1.25**1.5, rel=1e-8)
    assert berrytop.gauge("rashba", (1, 0, 0), chart="north") == pytest.approx((0, 1, 0))


def test_custom_spec_dict():
    spec = {"name": "g", "params": {"delta": 0.5}, "bx": "ky", "by": "-kx", "bz": "delta"}
    assert berrytop.field(spec, (1, 2, 3)) == pytest.approx((2, -1, 0.5))
    assert berrytop.field(spec, (1, 2, 3), params={"delta": 2.0})[2] == pytest.approx(2.0)


def test_parse_errors_carry_position_and_component():
    with pytest.raises(berrytop.ParseError) as info:
        berrytop.parse_expression("kx + * ky")
    assert info.value.args[1] == 5
    with pytest.raises(berrytop.ParseError) as info:
        berrytop.field({"bx": "ky", "by": "kq"}, (1, 0, 0))
    assert info.value.args[2] == "by"
    assert berrytop.parse_expression("kx + ky*kz") == "(+ kx (* ky kz))"


def test_unknown_system_raises():
    with pytest.raises(berrytop.BerryError):
        berrytop.field("graphite", (1, 0, 0))
    with pytest.raises(ValueError):
        berrytop.curvature("rashba", (0, 0, 0))


def test_fluxes_and_winding():
    assert berrytop.flux_sphere_monopole() == pytest.approx(4 * math.pi, abs=1e-4)
    assert berrytop.flux_disk("gapped-rashba", 50.0) / (2 * math.pi) == pytest.approx(1.0, abs=1e-2)
    assert berrytop.winding_number("bilayer") == 2


def test_hopf_pullback():
    a_theta, a_phi = berrytop.hopf_pullback("north", math.pi / 2, 0.3)
    assert a_phi == pytest.approx(0.5, abs=1e-8)
    assert berrytop.hopf_pullback("south", math.pi / 2, 0.3)[1] == pytest.approx(-0.5, abs=1e-8)


def test_map_grid_shape_and_nan():
    grid = berrytop.map_grid("rashba", "curvature", "z=0", 1.0, 3)
    assert grid.shape == (9, 7)
    assert math.isnan(grid[4, 6])
    assert grid[0, 0] == -1.0 and grid[0, 1] == -1.0


def test_ensemble_is_antisymmetric_and_deterministic():
    a = berrytop.ensemble_separation("gapped-rashba", steps=2000, n_particles=20, seed=3)
    b = berrytop.ensemble_separation("gapped-rashba", steps=2000, n_particles=20, seed=3)
    assert a == b
    assert a["mean_transverse_aligned"] == pytest.approx(-a["mean_transverse_anti"], rel=1e-12)
    assert a["separation"] != 0


def test_verify_suite_report():
    report = berrytop.verify("phases")
    assert report["passed"] is True
    assert all(c["criterion"] == 3 for c in report["checks"])


def test_run_cli_in_process():
    code, out, err = berrytop.run_cli(["winding", "--system", "rashba"])
    assert code == 0
    assert '"winding": 1' in out
    code, _, err = berrytop.run_cli(["map", "--grid", "1"])
    assert code == 2 and "--grid" in err


@pytest.mark.skipif("BERRYTOP_CLI" not in os.environ, reason="CLI binary path not provided")
def test_cli_binary_exit_codes():
    exe = os.environ["BERRYTOP_CLI"]
    ok = subprocess.run([exe, "berry", "--system", "rashba", "--loop", "circle:r=1", "--steps", "4096"],
                        capture_output=True, text=True)
    assert ok.returncode == 0
    assert '"winding": 1' in ok.stdout
    bad = subprocess.run([exe, "berry", "--system", "rashba", "--steps", "x"], capture_output=True, text=True)
    assert bad.returncode == 2
    assert "--steps" in bad.stderr
