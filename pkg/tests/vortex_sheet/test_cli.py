import json
import math
import shutil
import textwrap
from pathlib import Path

import pytest
import yaml

from vortex_sheet.cli import (
    EXIT_INVALID,
    EXIT_IO,
    EXIT_OK,
    EXIT_VERIFY_FAILED,
    load_frozen_file,
    main,
    parse_args,
    verify_table,
)
from vortex_sheet.config import config
from vortex_sheet.constsym import Frequency
from vortex_sheet.engine.basic_check import CHECK_FAILURE_TEXT, CHECK_SKIPPED_TEXT, CHECK_SUCCESS_TEXT, CheckResult
from vortex_sheet.frozen import frozen_delta
from vortex_sheet.lopatinskii import delta, root_polynomial

from tests.vortex_sheet.helpers import sheet_config_data, stable_sheet

REPO_ROOT = Path(__file__).resolve().parents[2]
Z1_NEWTONIAN = math.sqrt(5.0 - math.sqrt(17.0))


def write_config(tmp_path, **overrides):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(sheet_config_data(**overrides)), encoding="utf-8")
    return path


def error_payload(stderr):
    return json.loads([line for line in stderr.splitlines() if line.startswith("{")][-1])


class TestParseArgs(object):
    def test_commands(self):
        for command in ("classify", "sweep", "scan-delta", "frozen", "verify"):
            args = parse_args([command, "--config", "run.yaml"])
            assert args.command == command
            assert args.config == Path("run.yaml")
            assert args.out is None and args.seed is None

    def test_frozen_file_option(self):
        args = parse_args(["frozen", "--config", "run.yaml", "--frozen-file", "p.json", "--seed", "3"])
        assert args.frozen_file == Path("p.json")
        assert args.seed == 3

    def test_config_required(self):
        with pytest.raises(SystemExit):
            parse_args(["classify"])

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as error:
            parse_args(["--version"])
        assert error.value.code == 0
        assert capsys.readouterr().out.startswith("vortex-sheet ")


class TestClassify(object):
    def test_newtonian(self, tmp_path, capsys):
        path = write_config(tmp_path, eos={"kind": "linear", "sigma": 1.0}, epsilon=0.0, v_bar=2.0)
        assert main(["classify", "--config", str(path)]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert list(payload)[:3] == ["M", "M_c", "regime"]
        assert payload["regime"] == "weakly_stable"
        assert payload["M"] == 2.0
        assert payload["M_c"] == pytest.approx(math.sqrt(2.0))
        assert payload["z1"] == pytest.approx(Z1_NEWTONIAN, rel=1e-12)
        assert payload["Cbar"] == [1.0, 1.0, 2.0]
        assert payload["ordering_chain"]["passed"] is True
        assert payload["interior_root"] is None
        assert payload["triple_root"] is None

    def test_unstable(self, tmp_path, capsys):
        path = write_config(tmp_path, v_bar=0.5)
        assert main(["classify", "--config", str(path)]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["regime"] == "violently_unstable"
        assert payload["z1"] is None
        assert payload["ordering_chain"] is None
        assert payload["interior_root"]["gamma"] > 0.0
        assert payload["interior_root"]["residual"] < 1e-10

    def test_out_file(self, tmp_path, capsys):
        path = write_config(tmp_path)
        out = tmp_path / "reports" / "classify.json"
        assert main(["classify", "--config", str(path), "--out", str(out)]) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(out.read_text(encoding="utf-8"))["z1"] == pytest.approx(root_polynomial(stable_sheet()).z1)

    def test_output_path_from_config(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        path = write_config(tmp_path, output={"path": "from_config.json"})
        assert main(["classify", "--config", str(path)]) == EXIT_OK
        assert (tmp_path / "from_config.json").exists()


class TestErrors(object):
    def test_light_speed(self, tmp_path, capsys):
        path = write_config(tmp_path, v_bar=1.2)
        assert main(["classify", "--config", str(path)]) == EXIT_INVALID
        payload = error_payload(capsys.readouterr().err)
        assert payload["code"] == EXIT_INVALID
        assert "velocity exceeds light speed" in payload["error"]

    def test_schema_error(self, tmp_path, capsys):
        path = tmp_path / "run.yaml"
        path.write_text("epsilon: 1.0\nv_bar: 0.8\n", encoding="utf-8")
        assert main(["sweep", "--config", str(path)]) == EXIT_INVALID
        assert error_payload(capsys.readouterr().err)["error"] == "eos must be defined on the root"

    def test_bad_yaml(self, tmp_path, capsys):
        path = tmp_path / "run.yaml"
        path.write_text("eos: [unclosed\n", encoding="utf-8")
        assert main(["classify", "--config", str(path)]) == EXIT_INVALID

    def test_missing_file(self, tmp_path, capsys):
        assert main(["classify", "--config", str(tmp_path / "absent.yaml")]) == EXIT_IO
        assert error_payload(capsys.readouterr().err)["code"] == EXIT_IO


class TestSweepAndScan(object):
    def test_sweep_csv(self, tmp_path, capsys):
        path = write_config(tmp_path, sweep=[{"param": "v_bar", "min": 0.5, "max": 0.9, "count": 5}])
        assert main(["sweep", "--config", str(path)]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "param1,param2,M,Mc,regime,z1,z2,slack_min"
        assert len(lines) == 6
        assert lines[1].startswith("0.5,,")
        assert ",violently_unstable,," in lines[1]

    def test_scan_csv(self, tmp_path):
        path = write_config(tmp_path, scan={"resolution": 8})
        out = tmp_path / "scan.csv"
        assert main(["scan-delta", "--config", str(path), "--out", str(out)]) == EXIT_OK
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "gamma,delta,eta,re_delta,im_delta,abs_delta"
        assert len(lines) == 65
        gamma, d, eta, re, im, magnitude = (float(x) for x in lines[10].split(","))
        assert complex(re, im) == pytest.approx(delta(stable_sheet(), Frequency(gamma, d, eta)))


class TestFrozen(object):
    def test_zero_amplitude(self, tmp_path, capsys):
        path = write_config(tmp_path, frozen={"amplitude": 0.0})
        assert main(["frozen", "--config", str(path)]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["frequency"] == {"gamma": 1.0, "delta": 0.0, "eta": 1.0}
        report = payload["reports"][0]
        z1 = root_polynomial(stable_sheet()).z1
        assert report["roots"]["1"] == pytest.approx(z1, abs=1e-10)
        assert report["roots"]["-1"] == pytest.approx(-z1, abs=1e-10)
        assert report["p_degree"] == 5
        reference = delta(stable_sheet(), Frequency(1.0, 0.0, 1.0))
        assert complex(report["delta"]["re"], report["delta"]["im"]) == pytest.approx(reference, rel=1e-10)

    def test_perturbed_samples_are_seeded(self, tmp_path, capsys):
        path = write_config(tmp_path, frozen={"amplitude": 1.0e-3, "samples": 2})
        assert main(["frozen", "--config", str(path), "--seed", "11"]) == EXIT_OK
        first = json.loads(capsys.readouterr().out)
        assert main(["frozen", "--config", str(path), "--seed", "11"]) == EXIT_OK
        second = json.loads(capsys.readouterr().out)
        assert len(first["reports"]) == 2
        assert first == second
        assert first["amplitude"] == 1.0e-3

    def test_frozen_file(self, tmp_path, capsys):
        shutil.copy(REPO_ROOT / "bin" / "frozen_point.json", tmp_path / "point.json")
        path = write_config(tmp_path, frozen={"file": "point.json"})
        assert main(["frozen", "--config", str(path)]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["amplitude"] is None
        assert [p["side"] for p in payload["reports"][0]["points"]] == ["+", "-"]

    def test_load_frozen_file(self, tmp_path):
        cfg = stable_sheet()
        pairs, f = load_frozen_file(REPO_ROOT / "bin" / "frozen_point.json", cfg)
        assert len(pairs) == 1 and pairs[0].boundary
        assert (f.gamma, f.delta, f.eta) == (1.0, 0.0, 1.0)
        report = frozen_delta(pairs[0], f, with_roots=False)
        assert report.delta == pytest.approx(delta(cfg, f), rel=1e-10)

    def test_frozen_file_off_constraint(self, tmp_path, capsys):
        data = json.loads((REPO_ROOT / "bin" / "frozen_point.json").read_text(encoding="utf-8"))
        data["points"][0]["phi_t"] = 1e-3
        (tmp_path / "point.json").write_text(json.dumps(data), encoding="utf-8")
        path = write_config(tmp_path)
        args = ["frozen", "--config", str(path), "--frozen-file", str(tmp_path / "point.json")]
        assert main(args) == EXIT_INVALID
        assert "eikonal" in error_payload(capsys.readouterr().err)["error"]

    def test_frozen_file_one_side(self, tmp_path, capsys):
        data = json.loads((REPO_ROOT / "bin" / "frozen_point.json").read_text(encoding="utf-8"))
        data["points"] = data["points"][:1]
        (tmp_path / "point.json").write_text(json.dumps(data), encoding="utf-8")
        path = write_config(tmp_path, frozen={"file": "point.json"})
        assert main(["frozen", "--config", str(path)]) == EXIT_INVALID
        assert error_payload(capsys.readouterr().err)["error"] == "frozen file needs exactly two points"

    @pytest.mark.parametrize(
        "frequency, message",
        [
            ({"gamma": 1.0, "eta": 1.0}, "frozen file frequency must have a 'delta' field"),
            ({"gamma": 1.0, "delta": "0", "eta": 1.0}, "frozen file frequency 'delta' must be a number"),
            ({"gamma": True, "delta": 0.0, "eta": 1.0}, "frozen file frequency 'gamma' must be a number"),
            ([1.0, 0.0, 1.0], "frozen file frequency must be a mapping"),
        ],
    )
    def test_frozen_file_bad_frequency(self, tmp_path, capsys, frequency, message):
        data = json.loads((REPO_ROOT / "bin" / "frozen_point.json").read_text(encoding="utf-8"))
        data["frequency"] = frequency
        (tmp_path / "point.json").write_text(json.dumps(data), encoding="utf-8")
        path = write_config(tmp_path, frozen={"file": "point.json"})
        assert main(["frozen", "--config", str(path)]) == EXIT_INVALID
        assert error_payload(capsys.readouterr().err)["error"] == message

    def test_frozen_file_unknown_side(self, tmp_path, capsys):
        data = json.loads((REPO_ROOT / "bin" / "frozen_point.json").read_text(encoding="utf-8"))
        data["points"][1]["side"] = "left"
        (tmp_path / "point.json").write_text(json.dumps(data), encoding="utf-8")
        path = write_config(tmp_path, frozen={"file": "point.json"})
        assert main(["frozen", "--config", str(path)]) == EXIT_INVALID
        assert "unknown side label 'left'" in error_payload(capsys.readouterr().err)["error"]


class TestVerify(object):
    def test_table(self):
        results = [
            CheckResult("OrderingCheck", "lopatinskii", CHECK_SUCCESS_TEXT),
            CheckResult("TripleRootCheck", "lopatinskii", CHECK_SKIPPED_TEXT),
            CheckResult("ZeroPerturbationCheck", "frozen", CHECK_FAILURE_TEXT, "m1 does not vanish"),
        ]
        lines = verify_table(results).splitlines()
        assert lines[0].split() == ["property", "module", "status", "detail"]
        assert lines[1].split() == ["OrderingCheck", "lopatinskii", "PASS"]
        assert lines[2].split()[2] == "SKIP"
        assert lines[3].split()[:3] == ["ZeroPerturbationCheck", "frozen", "FAIL"]
        assert lines[3].endswith("m1 does not vanish")

    def test_all_properties_hold(self, tmp_path, capsys):
        path = write_config(tmp_path, verify={"samples": 10}, scan={"resolution": 80}, seed=5)
        out = tmp_path / "verify.json"
        assert main(["verify", "--config", str(path), "--out", str(out)]) == EXIT_OK
        table = capsys.readouterr().out
        assert "FAIL" not in table
        results = json.loads(out.read_text(encoding="utf-8"))
        assert {r["status"] for r in results} <= {"PASS", "SKIP"}
        assert "TripleRootCheck" in {r["property"] for r in results if r["status"] == "SKIP"}

    def test_failing_property(self, tmp_path, capsys, monkeypatch):
        checks = tmp_path / "checks"
        checks.mkdir()
        (checks / "always_fails.py").write_text(
            textwrap.dedent(
                """
                from vortex_sheet.engine.basic_check import BasicCheck


                class AlwaysFailsCheck(BasicCheck):
                    MODULE = "custom"

                    def check(self):
                        return "never holds"
                """
            ),
            encoding="utf-8",
        )
        monkeypatch.setattr(config, "checks_location", str(checks))
        path = write_config(tmp_path)
        assert main(["verify", "--config", str(path)]) == EXIT_VERIFY_FAILED
        captured = capsys.readouterr()
        assert "AlwaysFailsCheck" in captured.out
        assert error_payload(captured.err)["error"] == "property AlwaysFailsCheck failed: never holds"
