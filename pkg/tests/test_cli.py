import json
import subprocess
import sys

import pytest

from assocoipahedron.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_all(capsys):
    code, out, _ = run(capsys, "count", "--alpha", "oioi", "--method", "all")
    assert code == 0
    assert out.strip() == "recursion=6 closed=6 brute=6 AGREE"


def test_count_point(capsys):
    code, out, _ = run(capsys, "count", "--alpha", "oo", "--method", "recursion")
    assert code == 0 and out.strip() == "recursion=1"


def test_count_no_outgoing(capsys):
    code, _, err = run(capsys, "count", "--alpha", "iiii")
    assert code == 2
    assert "NoOutgoingLabel" in err


def test_count_closed_not_available(capsys):
    code, out, _ = run(capsys, "count", "--alpha", "ooio")
    assert code == 0
    assert out.strip() == "recursion=10 closed=n/a brute=10 AGREE"


def test_count_brute_over_cap(capsys):
    code, out, _ = run(capsys, "count", "--alpha", "o" + "i" * 11)
    assert code == 0 and "brute=skipped" in out
    code, _, err = run(capsys, "count", "--alpha", "o" + "i" * 11, "--method", "brute")
    assert code == 2 and "CapExceeded" in err


def test_missing_alpha(capsys):
    code, _, err = run(capsys, "count")
    assert code == 2 and "--alpha" in err


def test_bad_choice_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--alpha", "oioi", "--suite", "nope"])
    assert exc.value.code == 2


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--alpha", "oioi", "--suite", "all")
    assert code == 0
    lines = out.strip().splitlines()
    assert [ln.split(":")[0] for ln in lines] == ["euler", "boundary", "dims", "hT", "rotation", "hull"]
    assert all(": PASS" in ln for ln in lines)


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--alpha", "ooio", "--suite", "boundary")
    assert code == 0 and out.startswith("boundary: PASS")


def test_verify_failure_exit_code(capsys, monkeypatch):
    import assocoipahedron.complex as cx

    monkeypatch.setattr(cx, "euler_characteristic", lambda c: 7)
    code, out, _ = run(capsys, "verify", "--alpha", "oioi", "--suite", "euler")
    assert code == 1 and "FAIL" in out


def test_realize_json(capsys):
    code, out, _ = run(capsys, "realize", "--alpha", "oioi")
    data = json.loads(out)
    assert code == 0 and len(data["vertices"]) == 6
    assert set(data["vertices"][0]) == {"tree", "v", "w"}


def test_complex_json(capsys):
    code, out, _ = run(capsys, "complex", "--alpha", "ooo")
    assert code == 0 and json.loads(out)["f_vector"] == [3, 3, 1]


def test_table_tsv(capsys):
    code, out, _ = run(capsys, "table", "--bound", "2")
    rows = [ln.split("\t") for ln in out.strip().splitlines()]
    assert code == 0
    assert rows[2] == ["1", "2", "6", "18"]


def test_table_json(capsys):
    code, out, _ = run(capsys, "table", "--bound", "3", "--format", "json")
    data = json.loads(out)
    assert data["rows"][1][1] == 6 and data["closed_form_disagreements"] == []


def test_export_off(capsys):
    code, out, _ = run(capsys, "export", "--alpha", "ooio", "--format", "off")
    assert code == 0
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert lines[0] == "OFF" and lines[1] == "10 7 15"


def test_export_off_too_big(capsys):
    code, out, err = run(capsys, "export", "--alpha", "oiiiiii", "--format", "off")
    assert code == 2 and out == "" and "FormatUnsupported" in err


def test_export_six_gon_allowed(capsys):
    code, _, _ = run(capsys, "export", "--alpha", "oiiiii", "--format", "off")
    assert code == 0


def test_polygon_file(capsys, tmp_path):
    p = tmp_path / "quad.json"
    p.write_text("[[0, 0], [3, 0], [4, 2], [1, 5]]")
    code, out, _ = run(capsys, "realize", "--alpha", "oioi", "--polygon", "file", str(p))
    assert code == 0
    data = json.loads(out)
    assert data["polygon"] == [["0", "0"], ["3", "0"], ["4", "2"], ["1", "5"]]
    code, _, err = run(capsys, "realize", "--alpha", "ooo", "--polygon", "file", str(p))
    assert code == 2 and "corners" in err


def test_polygon_file_missing(capsys, tmp_path):
    code, _, err = run(capsys, "realize", "--alpha", "oioi", "--polygon", "file", str(tmp_path / "nope.json"))
    assert code == 2


def test_output_is_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["complex", "--alpha", "ooio", "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    offs = [tmp_path / "a.off", tmp_path / "b.off"]
    for p in offs:
        assert main(["export", "--alpha", "oiioi", "--format", "off", "--out", str(p)]) == 0
    assert offs[0].read_bytes() == offs[1].read_bytes()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "assocoipahedron", "count", "--alpha", "oioi"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert res.stdout.strip() == "recursion=6 closed=6 brute=6 AGREE"
