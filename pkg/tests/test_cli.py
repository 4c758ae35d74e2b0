import io
import json
import subprocess
import sys

import pytest

from hklab.cli import RunConfig, load_config, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def test_formulas_ehk():
    assert call("formulas", "ehk", "--m", "2") == (0, "29/18\n")
    code, text = call("formulas", "multi", "--ms", "2,2")
    assert text.split() == ["3145/2046", "947/2046"]
    code, text = call("formulas", "monsky", "--m-lambda", "3", "--decimal", "5")
    assert text.strip() == "193/64 ~ 3.01563"


def test_pairs_csv_rows():
    code, text = call("pairs", "--m", "3", "--c", "4", "--csv")
    lines = text.strip().split("\n")
    assert code == 0 and len(lines) == 1 + 9
    assert [int(l.split(",")[3]) for l in lines[1:]] == list(range(9))


def test_verify_exit_and_report():
    code, text = call("verify", "--max-n", "3", "--max-degree", "3")
    assert code == 0
    records = [json.loads(l) for l in text.strip().split("\n")]
    assert records[-1]["summary"]["failed"] == 0
    assert all(r["pass"] for r in records[:-1])


def test_verify_extended_and_lemmas():
    code, text = call("verify", "--max-n", "2", "--max-degree", "2", "--extended", "--lemmas")
    assert code == 0
    assert any(json.loads(l).get("j") == 0 for l in text.splitlines())


def test_hk_records(tmp_path):
    code, text = call("hk", "--alpha", "gf2^2:0x2", "--n", "2", "--jmax", "2")
    recs = [json.loads(l) for l in text.splitlines()]
    assert recs == [
        {"alpha": "gf2^2:0x2", "e": 44, "j": 1, "m_alpha": 2, "n": 2},
        {"alpha": "gf2^2:0x2", "e": 64, "j": 2, "m_alpha": 2, "n": 2},
    ]
    batch = tmp_path / "tasks.json"
    batch.write_text(json.dumps([{"alpha": "gf2^1:0x1", "n": 1},
                                 {"alpha": "gf2^1:0x1", "n": 2, "variant": "smoothed"}]))
    code, text = call("hk", "--batch", str(batch))
    assert [json.loads(l)["e"] for l in text.splitlines()] == [8, 408]


def test_bracket_outputs():
    code, text = call("bracket", "--m", "2", "--n", "2", "--j", "1")
    assert json.loads(text) == {"bracket": 20, "j": 1, "n": 2, "state": "B_2 + 2C"}
    code, text = call("bracket", "--m", "1", "--n", "3", "--sum", "--format", "text")
    assert text == "n=3  sum=56\n"


def test_field_and_hadamard():
    code, text = call("field", "--degree", "2")
    assert json.loads(text) == {"degree": 2, "modulus": "0x7"}
    code, text = call("field", "--reps", "3", "--all-elements")
    assert len(text.split()) == 6
    assert call("hadamard", "[1,2,4]", "[1,3,5]") == (0, "[1, 6, 20]\n")


def test_usage_errors(capsys):
    assert call("nonsense")[0] == 2
    assert call("formulas", "ehk", "--bogus")[0] == 2
    assert call("hadamard", "[1]", "[1,2]")[0] == 2
    assert call("field", "--alpha", "gf2^2:0x9")[0] == 2
    assert "error" in capsys.readouterr().err


def test_config(tmp_path, monkeypatch):
    monkeypatch.delenv("HKLAB_WORKERS", raising=False)
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\nmax_n = 2\nmax_degree=2\nextended_j0 = true\n")
    c = load_config(str(cfg))
    assert (c.max_n, c.max_degree, c.extended_j0, c.worker_count) == (2, 2, True, 1)
    monkeypatch.setenv("HKLAB_WORKERS", "4")
    assert load_config(str(cfg)).worker_count == 4
    code, text = call("--config", str(cfg), "verify")
    assert code == 0 and json.loads(text.splitlines()[-1])["summary"]["points"] == 2 * (2 + 4)
    cfg.write_text("max_n = 0\n")
    assert call("--config", str(cfg), "verify")[0] == 2
    with pytest.raises(ValueError):
        RunConfig(worker_count=0)


def test_deterministic_output():
    argv = ("verify", "--max-n", "2", "--max-degree", "3")
    assert call(*argv) == call(*argv)
    assert call(*argv, "--workers", "2") == call(*argv)


def test_entry_point_module():
    res = subprocess.run([sys.executable, "-m", "hklab", "formulas", "ehk", "--m", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "767/476\n"
