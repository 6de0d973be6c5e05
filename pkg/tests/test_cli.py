import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from vgenera.cli import WorkspaceConfig, run
from vgenera.errors import ValidationError
from vgenera.multiseq import GenusSpec, MultiplicativeSequence, genus_from_spec
from vgenera.scalars import scalar_from_json
from vgenera.series import TruncatedSeries, builtin_series
from vgenera.vertical import FormalFibration, base_class_from_json, vertical_genus


def ok(argv):
    code, out, err = run(argv)
    assert code == 0, err
    return out


def fails(argv, code=2):
    rc, out, err = run(argv)
    assert rc == code, (out, err)
    return err


def test_coeffs_a_hat():
    lines = ok(["coeffs", "--genus", "a_hat", "--max-degree", "8"]).splitlines()
    assert lines == ["K_0 = 1", "K_1 = -(1/24)*b1", "K_2 = (7*b1^2 - 4*b2)/5760"]


def test_coeffs_signature():
    assert "K_1 = (1/3)*b1" in ok(["coeffs", "--genus", "signature", "--max-degree", "4"]).splitlines()


def test_coeffs_trivial():
    assert ok(["coeffs", "--genus", "trivial"]) == "K_0 = 1\n"


def test_coeffs_todd_uses_chern_weights():
    lines = ok(["coeffs", "--genus", "todd", "--max-degree", "4"]).splitlines()
    assert lines == ["K_0 = 1", "K_1 = (1/2)*b1", "K_2 = (b2 + b1^2)/12"]


@pytest.mark.parametrize(
    "genus,expr,value",
    [("signature", "CP2^2", "1"), ("a_hat", "CP4", "3/128"), ("a_hat", "3*CP2^2 - 2*CP4", "0"), ("todd", "CP3*CP1", "1"), ("a_hat", "CP2", "-1/8")],
)
def test_eval(genus, expr, value):
    assert ok(["eval", "--genus", genus, expr]) == value + "\n"
    assert ok(["eval", "--genus", genus, "--manifold-expr", expr]) == value + "\n"


def test_eval_witten_prints_a_q_expansion():
    assert ok(["eval", "--genus", "witten", "--q-order", "2", "CP2"]) == "(-1/8 + 3*q + 9*q^2)\n"


def test_vertical_flagship():
    out = ok(["vertical", "--genus", "a_hat", "--fibration", "id=pi1,q=2", "--fibration", "id=pi2,q=3", "--max-degree", "8"])
    assert "deg 3: (1/576)·p[1](pi1)·p[1](pi2)  [OK]" in out
    assert out.rstrip().endswith("result: OK")


def test_vertical_single_fibration():
    out = ok(["vertical", "--genus", "a_hat", "--fibration", "id=pi1,q=2", "--max-degree", "4"])
    assert "deg 2: -(1/24)·p[1](pi1)" in out


def test_vertical_trivial_genus_has_no_positive_degree_lines():
    out = ok(["vertical", "--genus", "trivial", "--fibration", "id=pi1,q=2"])
    assert "deg " not in out


def test_vertical_todd_with_chern_fibrations():
    out = ok(["vertical", "--genus", "todd", "--fibration", "id=a,q=1", "--fibration", "id=b,q=2,sign=-1", "--max-degree", "6"])
    assert "[MISMATCH]" not in out and "result: OK" in out


@pytest.mark.parametrize(
    "argv,field",
    [
        (["coeffs", "--genus", "a_hat", "--order", "3"], "series_order"),
        (["coeffs", "--genus", "signature", "--q-order", "2"], "q_order"),
        (["coeffs", "--max-degree", "-4"], "max_degree"),
        (["coeffs", "--genus", "elliptic"], "genus"),
        (["coeffs", "--seed", "-1"], "seed"),
        (["vertical", "--fibration", "id=pi1"], "fibration"),
        (["vertical"], "fibrations"),
        (["vertical", "--fibration", "id=a,q=1", "--fibration", "id=a,q=2"], "fibrations"),
        (["vertical", "--genus", "a_hat", "--order", "8", "--fibration", "id=a,q=7", "--fibration", "id=b,q=7"], "series_order"),
        (["eval", "--genus", "a_hat", "--max-degree", "4", "CP4"], "max_degree"),
        (["eval", "--genus", "a_hat"], "expression"),
        (["eval", "--genus", "a_hat", "CP2", "--manifold-expr", "CP2"], "expression"),
    ],
)
def test_usage_errors_name_the_field(argv, field):
    err = fails(argv)
    assert f"error: {field}" in err


def test_parse_errors_carry_positions():
    assert "position 6" in fails(["eval", "CP2 + CP4"])
    assert "position 4" in fails(["eval", "CP2 CP2"])


def test_argparse_errors_exit_two(capsys):
    assert run(["bogus"])[0] == 2
    assert run(["coeffs", "--format", "yaml"])[0] == 2
    assert run(["coeffs", "--max-degree", "eight"])[0] == 2


def test_config_file_with_flag_overrides(tmp_path):
    cfg = tmp_path / "ws.json"
    cfg.write_text(json.dumps({"genus": "signature", "max_degree": 4, "fibrations": [{"id": "pi1", "fibre_dim": 2, "sign": 1}]}))
    assert ok(["coeffs", "--config", str(cfg)]).splitlines()[-1] == "K_1 = (1/3)*b1"
    assert ok(["coeffs", "--config", str(cfg), "--genus", "a_hat"]).splitlines()[-1] == "K_1 = -(1/24)*b1"
    assert len(ok(["coeffs", "--config", str(cfg), "--max-degree", "8"]).splitlines()) == 3
    assert "deg 2: (1/3)·p[1](pi1)" in ok(["vertical", "--config", str(cfg)])
    assert "pi9" in ok(["vertical", "--config", str(cfg), "--fibration", "id=pi9,q=2"])


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert "config" in fails(["coeffs", "--config", str(bad)])
    unknown = tmp_path / "unknown.json"
    unknown.write_text(json.dumps({"genre": "a_hat"}))
    assert "genre" in fails(["coeffs", "--config", str(unknown)])
    assert "cannot read" in fails(["coeffs", "--config", str(tmp_path / "missing.json")])


def test_genus_file(tmp_path):
    path = tmp_path / "genus.json"
    path.write_text(json.dumps({"cp_values": ["1", "1", "1"]}))
    assert ok(["coeffs", "--genus", str(path), "--max-degree", "8"]) == ok(["coeffs", "--genus", "signature", "--max-degree", "8"])
    e_path = tmp_path / "e.json"
    e_path.write_text(json.dumps({"variables": "chern", "f_series": [str(c) for c in builtin_series("todd_Q", 6).coeffs]}))
    assert ok(["eval", "--genus", str(e_path), "CP3"]) == "1\n"


def test_workspace_config_invariants():
    with pytest.raises(ValidationError, match="series_order"):
        WorkspaceConfig(series_order=4, max_degree=8)
    with pytest.raises(ValidationError, match="fibrations"):
        WorkspaceConfig(fibrations=(FormalFibration("a", 1), FormalFibration("a", 2)))
    cfg = WorkspaceConfig(genus=GenusSpec.named("witten"), q_order=3, fibrations=(FormalFibration("a", 1),))
    assert cfg.genus.q_order == 3
    assert WorkspaceConfig.from_json(cfg.to_json()) == cfg


def _json(argv):
    return json.loads(ok(argv + ["--format", "json"]))


@pytest.mark.parametrize("genus", ["a_hat", "signature", "todd", "witten"])
def test_coeffs_json_round_trip_and_agreement_with_text(genus):
    extra = ["--q-order", "2"] if genus == "witten" else []
    argv = ["coeffs", "--genus", genus, "--max-degree", "12"] + extra
    doc = _json(argv)
    spec = GenusSpec.from_json(doc["genus"])
    f, ms = genus_from_spec(spec, 12 // (2 if genus == "todd" else 4))
    back = MultiplicativeSequence.from_json(doc["k_table"], spec.variables)
    assert back.table == ms.table
    assert back.render_lines() == ok(argv).splitlines()
    series = TruncatedSeries.from_json(doc["f_series"])
    assert series.truncate(f.order) == f


def test_eval_json_matches_text():
    argv = ["eval", "--genus", "a_hat", "CP2^2 + 1/3*CP4"]
    doc = _json(argv)
    assert scalar_from_json(doc["value"]) == F(ok(argv).strip())
    assert doc["element"]["degree"] == 8


def test_vertical_json_round_trip():
    argv = ["vertical", "--genus", "a_hat", "--fibration", "id=pi1,q=2", "--fibration", "id=pi2,q=3", "--max-degree", "8"]
    doc = _json(argv)
    fibs = [FormalFibration.from_json(f) for f in doc["fibrations"]]
    ms = genus_from_spec(GenusSpec.named("a_hat"), 3)[1]
    assert base_class_from_json(doc["product"], fibs) == vertical_genus(ms, fibs, 8)
    assert doc["multiplicativity"]["ok"] is True
    row = doc["multiplicativity"]["rows"][0]
    assert row["degree"] == 3 and row["product"] == row["cup"]
    assert base_class_from_json(row["product"], fibs).render() in ok(argv)


def test_json_output_is_a_single_document():
    out = ok(["coeffs", "--format", "json"])
    json.loads(out)
    assert out.count("\n{") == 0


def test_console_entry_point_writes_utf8():
    proc = subprocess.run(
        [sys.executable, "-m", "vgenera", "vertical", "--genus", "a_hat", "--fibration", "id=pi1,q=2", "--max-degree", "4"],
        capture_output=True,
        env={"PYTHONIOENCODING": "ascii", "PATH": ""},
    )
    assert proc.returncode == 0
    assert "-(1/24)·p[1](pi1)" in proc.stdout.decode("utf-8")


def test_entry_point_exit_code_for_usage_error():
    proc = subprocess.run([sys.executable, "-m", "vgenera", "eval", "CP2 +"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert "position 5" in proc.stderr
