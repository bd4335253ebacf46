import csv
import io
import json

import numpy as np
import pytest

from diracaim.cli import main
from diracaim.coulomb import coulomb_energy
from diracaim.models import channel_from_k


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def jrows(text):
    return json.loads(text)["rows"]


class TestExitCodes:
    def test_bad_flag(self, capsys):
        assert run(capsys, "table1", "--format", "xml")[0] == 2

    def test_missing_subcommand(self, capsys):
        assert run(capsys)[0] == 2

    def test_negative_r0(self, capsys):
        assert run(capsys, "coulomb", "--r0", "-1")[0] == 2

    def test_unphysical_coupling(self, capsys):
        code, _, err = run(capsys, "coulomb", "--A", "1.2")
        assert code == 2 and "coupling" in err.lower()

    def test_no_bound_spectrum(self, capsys):
        assert run(capsys, "solve", "--B1", "0.3", "--B2", "0.2")[0] == 2

    def test_label_outside_three_dimensions(self, capsys):
        assert run(capsys, "solve", "--state", "1s1/2", "--d", "5")[0] == 2

    def test_non_convergence(self, capsys):
        code, _, err = run(capsys, "solve", "--family", "confined", "--Emin", "1.3", "--Emax", "1.4")
        assert code == 3 and "no convergence" in err

    def test_help(self, capsys):
        assert run(capsys, "--help")[0] == 0


class TestCoulomb:
    def test_ground_state(self, capsys):
        code, out, _ = run(capsys, "coulomb", "--format", "csv")
        assert code == 0
        (row,) = rows(out)
        assert float(row["E_exact"]) == pytest.approx(0.866025404, abs=1e-9)
        assert abs(float(row["E_aim"]) - float(row["E_exact"])) <= 1e-9

    def test_five_dimensions(self, capsys):
        code, out, _ = run(capsys, "coulomb", "--d", "5", "--format", "json")
        (row,) = jrows(out)
        assert code == 0 and row["k_d"] == -2
        assert row["gamma"] == pytest.approx(3.75 ** 0.5, rel=1e-8)

    def test_negative_sign(self, capsys):
        _, plus, _ = run(capsys, "coulomb", "--n", "1", "--format", "json")
        _, minus, _ = run(capsys, "coulomb", "--n", "1", "--sign", "-", "--format", "json")
        assert jrows(minus)[0]["E_exact"] == -jrows(plus)[0]["E_exact"]
        assert jrows(minus)[0]["E_aim"] == pytest.approx(-jrows(plus)[0]["E_aim"], abs=1e-9)


class TestTables:
    def test_table1_rows(self, capsys):
        code, out, _ = run(capsys, "table1", "--Z", "50", "80", "--format", "csv")
        assert code == 0
        r50, r80 = rows(out)
        assert float(r80["E"]) == pytest.approx(0.828543, abs=5e-7)
        assert float(r80["keV"]) == pytest.approx(-87.6152, abs=5e-4)
        assert float(r50["keV_oracle"]) == pytest.approx(-30.8546, abs=5e-4)

    def test_table1_empty(self, capsys):
        code, out, _ = run(capsys, "table1", "--Z", "--format", "csv")
        assert code == 0 and out.strip() == "Z,E,keV,E_oracle,keV_oracle,depth,r0,status"

    def test_table2_selected_rows(self, capsys):
        code, out, _ = run(capsys, "table2", "--format", "json")
        assert code == 0
        data = {(r["k"], r["n"]): r for r in jrows(out)}
        assert len(data) == 15
        assert data[(2, 2)]["label"] == "4d3/2"
        assert data[(-3, 0)]["label"] == "3d5/2" and round(data[(-3, 0)]["E"], 5) == 2.04506
        assert data[(-1, 0)]["label"] == "1s1/2" and round(data[(-1, 0)]["E"], 5) == 1.25819
        assert all(r["status"] == "ok" for r in data.values())


class TestFormats:
    def test_determinism(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(capsys, "coulomb", "--n", "2", "--format", "csv", "--out", str(a))[0] == 0
        assert run(capsys, "coulomb", "--n", "2", "--format", "csv", "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_json_round_trip(self, capsys):
        _, out_json, _ = run(capsys, "coulomb", "--n", "1", "--format", "json")
        _, out_csv, _ = run(capsys, "coulomb", "--n", "1", "--format", "csv")
        (j,), (c,) = jrows(out_json), rows(out_csv)
        assert set(j) == set(c)
        for key, value in j.items():
            if isinstance(value, float):
                assert value == float(c[key])
        assert json.loads(out_json)["columns"] == list(c)

    def test_nine_significant_digits(self, capsys):
        _, out, _ = run(capsys, "coulomb", "--format", "csv")
        assert rows(out)[0]["E_exact"] == "0.866025404"

    def test_pretty(self, capsys):
        code, out, _ = run(capsys, "coulomb", "--format", "pretty")
        assert code == 0 and "E_exact" in out.splitlines()[0]


class TestConfig:
    def test_file_with_override(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# Coulomb probe\nn = 2\nA = 0.3\nformat = json\n")
        _, out, _ = run(capsys, "coulomb", "--config", str(cfg))
        (row,) = jrows(out)
        assert row["n"] == 2
        assert row["E_exact"] == pytest.approx(coulomb_energy(channel_from_k(-1, 2), 0.3), abs=1e-9)
        _, out, _ = run(capsys, "coulomb", "--config", str(cfg), "--A", "0.6")
        assert jrows(out)[0]["E_exact"] == pytest.approx(
            coulomb_energy(channel_from_k(-1, 2), 0.6), abs=1e-9)

    def test_malformed_file(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("just words\n")
        assert run(capsys, "coulomb", "--config", str(cfg))[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "coulomb", "--config", str(tmp_path / "none.cfg"))[0] == 2


class TestSolve:
    def test_label(self, capsys):
        code, out, _ = run(capsys, "solve", "--state", "3p3/2", "--format", "json", "--oracle")
        (row,) = jrows(out)
        assert code == 0 and row["label"] == "3p3/2"
        assert row["E"] == pytest.approx(2.19096, abs=5e-6)
        assert abs(row["E"] - row["E_oracle"]) < 5e-5

    def test_screened(self, capsys):
        code, out, _ = run(capsys, "solve", "--family", "screened", "--Z", "40", "--format", "json")
        assert code == 0 and jrows(out)[0]["E"] == pytest.approx(0.962675, abs=5e-7)


class TestWavefunction:
    @staticmethod
    @pytest.fixture(scope="class")
    def files(tmp_path_factory):
        base = tmp_path_factory.mktemp("wf") / "p32"
        code = main(["wavefunction", "--state", "3p3/2", "--a0", "1.7746", "--format", "csv",
                     "--out", str(base)])
        assert code == 0
        return {name: rows(open(f"{base}_{name}.csv").read())
                for name in ("coefficients", "radial", "orbit")}

    def test_coefficients(self, files):
        coef = files["coefficients"]
        assert len(coef) == 16
        assert float(coef[0]["a_k"]) == pytest.approx(1.7746)
        assert float(coef[1]["a_k"]) == pytest.approx(3.34842, rel=1e-3)
        assert float(coef[0]["b_k"]) == pytest.approx(-0.22540, rel=1e-3)

    def test_radial_grid(self, files):
        r = np.array([float(x["r"]) for x in files["radial"]])
        G = np.array([float(x["G"]) for x in files["radial"]])
        F = np.array([float(x["F"]) for x in files["radial"]])
        assert len(r) == 400 and r[0] > 0 and r[-1] == pytest.approx(8.0)
        assert np.all(np.diff(r) > 0)
        assert np.all(np.isfinite(G)) and np.all(np.isfinite(F))

    def test_orbit_starts_at_origin(self, files):
        F0, G0 = float(files["orbit"][0]["F"]), float(files["orbit"][0]["G"])
        Gmax = max(abs(float(x["G"])) for x in files["orbit"])
        # first sample is r = 0.02, where r^gamma is ~1e-3
        assert abs(G0) < 1e-2 * Gmax and abs(F0) < 1e-2 * Gmax

    @pytest.mark.xfail(strict=True, reason="the 3p3/2 state still carries ~2e-3 of its peak at r=8, "
                                           "so the far end of an (0, 8] orbit cannot be within 1e-6 of the origin")
    def test_orbit_endpoints_within_tolerance(self, files):
        first, last = files["orbit"][0], files["orbit"][-1]
        for p in (first, last):
            assert abs(float(p["F"])) < 1e-6 and abs(float(p["G"])) < 1e-6
