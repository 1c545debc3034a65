import json
import math

import numpy as np
import pytest

from pseudoquant.cli import EXIT_INPUT, EXIT_OK, run


def out_of(capsys):
    return capsys.readouterr().out.strip()


class TestCommutator:
    def test_canonical_pair(self, capsys):
        assert run(["commutator", "--a", "p1", "--b", "q1"]) == EXIT_OK
        assert out_of(capsys) == "-i*hbar"

    def test_formal(self, capsys):
        assert run(["commutator", "--a", "p1", "--b", "q1", "--formal"]) == EXIT_OK
        assert out_of(capsys) == "1"

    def test_json_output(self, capsys):
        assert run(["commutator", "--a", "p1", "--b", "q1", "--json"]) == EXIT_OK
        data = json.loads(out_of(capsys))
        assert data["text"] == "-i*hbar"
        assert data["order"] == 0

    def test_pullback_problem(self, capsys, tmp_path):
        prob = {
            "chart": {"pairs": [["l", "phi_l"]]},
            "pullback": {
                "target": {"pairs": [["z", "phi_z"]]},
                "theta": "standard",
                "map": {"z": "2*l", "phi_z": "phi_l"},
            },
        }
        path = tmp_path / "cylinder.json"
        path.write_text(json.dumps(prob))
        code = run(
            ["commutator", "--problem", str(path), "--a", "z", "--b", "phi_z", "--formal"]
        )
        assert code == EXIT_OK
        assert out_of(capsys) == "0"  # lambda = 1/2: the commutator vanishes


class TestErrors:
    def test_unknown_subcommand(self, capsys):
        assert run(["bogus"]) == EXIT_INPUT
        assert "error:" in capsys.readouterr().err

    def test_bad_expression_reports_column(self, capsys):
        assert run(["commutator", "--a", "p1 $", "--b", "q1"]) == EXIT_INPUT
        assert "column" in capsys.readouterr().err

    def test_missing_required_argument(self, capsys):
        assert run(["commutator", "--a", "p1"]) == EXIT_INPUT
        capsys.readouterr()

    def test_no_subcommand_prints_help(self, capsys):
        assert run([]) == EXIT_INPUT
        assert "usage" in capsys.readouterr().out.lower()


class TestQuantiseAndPreserve:
    def test_quantise_momentum(self, capsys):
        assert run(["quantise", "--observable", "p1"]) == EXIT_OK
        assert "-i*hbar" in out_of(capsys)

    def test_preserve_single(self, capsys):
        assert run(["preserve", "--observable", "p1^2"]) == EXIT_OK
        data = json.loads(out_of(capsys))
        assert data["preserves"] is False
        assert data["residuals"]

    def test_preserve_grid_standard(self, capsys):
        assert run(["preserve", "--grid", "2,2"]) == EXIT_OK
        rows = [l for l in out_of(capsys).splitlines() if not l.startswith("#")]
        table = {}
        for row in rows[1:]:
            m, n, ok, cnt = row.split(",")
            table[(int(m), int(n))] = ok == "true"
        assert all(table[(m, n)] == (m <= 1) for (m, n) in table)

    def test_preserve_grid_polarised_scaled(self, capsys):
        code = run(
            [
                "preserve",
                "--grid",
                "1,1",
                "--case",
                "polarised-scaled",
                "--deformation",
                "b1^2",
            ]
        )
        assert code == EXIT_OK
        rows = [l for l in out_of(capsys).splitlines() if not l.startswith("#")][1:]
        verdicts = {tuple(r.split(",")[:2]): r.split(",")[2] for r in rows}
        assert verdicts[("0", "0")] == "true"
        assert verdicts[("1", "0")] == "false"


class TestBks:
    def test_classify_table(self, capsys):
        assert run(["bks", "classify", "--n", "1", "--m-max", "1"]) == EXIT_OK
        out = out_of(capsys)
        assert "# converges=false" in out
        assert "Diverges" in out

    def test_pair_profile(self, capsys):
        assert run(["bks", "pair", "--n", "2", "--beta", "0:1:0.5"]) == EXIT_OK
        out = out_of(capsys)
        rows = [l for l in out.splitlines() if not l.startswith("#")][1:]
        assert len(rows) == 3
        b0 = rows[0].split(",")
        # at beta = 0 the coefficient is -1/2 (hbar = 1) and purely real
        assert float(b0[1]) == pytest.approx(-0.5, abs=1e-9)
        assert abs(float(b0[2])) < 1e-9
        # the scaled column removes the (1+2 beta^2)^{-3/2} profile
        for row in rows:
            assert float(row.split(",")[3]) == pytest.approx(-0.5, abs=1e-6)

    def test_pair_rejects_momentum(self, capsys):
        assert run(["bks", "pair", "--n", "1", "--kind", "momentum"]) == EXIT_INPUT
        capsys.readouterr()


class TestEvolve:
    def test_short_run_with_snapshots(self, capsys, tmp_path):
        snap = tmp_path / "snaps.bin"
        csv = tmp_path / "series.csv"
        code = run(
            [
                "evolve",
                "--n",
                "0",
                "--grid",
                "-15:15:256",
                "--dt",
                "0.002",
                "--steps",
                "20",
                "--init",
                "gaussian:q0=0,p0=0.5,sigma=1",
                "--csv",
                str(csv),
                "--snapshots",
                str(snap),
                "--snap-every",
                "10",
            ]
        )
        assert code == EXIT_OK
        lines = csv.read_text().strip().splitlines()
        data_rows = [l for l in lines if not l.startswith("#")][1:]
        assert len(data_rows) == 21
        # free evolution conserves the L2 norm to roundoff
        norms = [float(r.split(",")[1]) for r in data_rows]
        assert max(norms) - min(norms) < 1e-12
        arr = np.fromfile(snap, dtype="<f8").reshape(-1, 2 * 256)
        assert arr.shape[0] == 3  # initial + steps 10 and 20
        psi0 = arr[0, 0::2] + 1j * arr[0, 1::2]
        assert np.sum(np.abs(psi0) ** 2) * (30 / 255) == pytest.approx(1.0, abs=1e-6)

    def test_bad_grid(self, capsys):
        assert run(["evolve", "--n", "0", "--grid", "1:2"]) == EXIT_INPUT
        capsys.readouterr()

    def test_bad_init(self, capsys):
        assert run(["evolve", "--n", "0", "--init", "delta:q0=0"]) == EXIT_INPUT
        capsys.readouterr()


class TestBsCount:
    def test_range(self, capsys):
        assert run(["bs-count", "--E", "1..5"]) == EXIT_OK
        rows = [l for l in out_of(capsys).splitlines() if not l.startswith("#")][1:]
        got = {int(r.split(",")[0]): (int(r.split(",")[1]), int(r.split(",")[2])) for r in rows}
        assert got == {1: (1, 0), 2: (3, 3), 3: (5, 8), 4: (7, 15), 5: (9, 24)}

    def test_points_file(self, capsys, tmp_path):
        pts = tmp_path / "points.csv"
        assert run(["bs-count", "--E", "2", "--points", str(pts)]) == EXIT_OK
        capsys.readouterr()
        rows = pts.read_text().strip().splitlines()[1:]
        vals = sorted(float(r.split(",")[1]) for r in rows)
        assert vals == pytest.approx([-math.sqrt(2), 0.0, math.sqrt(2)])

    def test_bad_range(self, capsys):
        assert run(["bs-count", "--E", "5..2"]) == EXIT_INPUT
        capsys.readouterr()


class TestVerifyExitCodes:
    @staticmethod
    def _results(statuses):
        from pseudoquant.verify import CheckResult

        return [CheckResult(f"c{i}", "anchor", s, "details") for i, s in enumerate(statuses)]

    def test_flags_exit_zero_without_strict(self, capsys, monkeypatch):
        import pseudoquant.verify as verify

        monkeypatch.setattr(
            verify, "run_all", lambda seed=None: self._results([verify.PASS, verify.FLAG])
        )
        assert run(["verify-paper"]) == EXIT_OK
        assert run(["verify-paper", "--strict"]) == 3
        capsys.readouterr()

    def test_fail_exits_two(self, capsys, monkeypatch):
        import pseudoquant.verify as verify

        monkeypatch.setattr(
            verify, "run_all", lambda seed=None: self._results([verify.PASS, verify.FAIL])
        )
        assert run(["verify-paper"]) == 2
        capsys.readouterr()


class TestDeterminism:
    def test_byte_identical_reruns(self, capsys):
        cmd = ["bks", "pair", "--n", "2", "--beta", "0:2:0.25"]
        assert run(cmd) == EXIT_OK
        first = capsys.readouterr().out
        assert run(cmd) == EXIT_OK
        second = capsys.readouterr().out
        assert first == second
