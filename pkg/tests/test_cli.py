import json

import pytest

from cschur.cli import main


LEFT = '{"r":1,"kind":"xi","entries":[[0,0,1],[2,1,1],[2,2,3]]}'
RIGHT = '{"r":1,"kind":"xi","entries":[[0,0,1],[1,2,1],[2,2,3]]}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_weyl_length(capsys):
    code, out, _ = run(capsys, "weyl", "length", "--d", "2", "--word", "0,1,0")
    assert code == 0
    assert json.loads(out)["lengths"] == [3, 2, 0, 1]


def test_schur_mul_diff_mode(capsys):
    code, out, _ = run(
        capsys,
        "schur-mul",
        "--method",
        "formula",
        "--diff",
        "oracle",
        "--left",
        LEFT,
        "--right",
        RIGHT,
    )
    assert code == 0
    assert json.loads(out)["identical"] is True


def test_schur_mul_json_deterministic(capsys):
    code1, out1, _ = run(capsys, "schur-mul", "--left", LEFT, "--right", RIGHT)
    code2, out2, _ = run(capsys, "schur-mul", "--left", LEFT, "--right", RIGHT)
    assert code1 == code2 == 0
    assert out1 == out2


def test_schur_mul_latex(capsys):
    code, out, _ = run(
        capsys, "--format", "latex", "schur-mul", "--left", LEFT, "--right", RIGHT
    )
    assert code == 0
    assert "e_{[" in out


def test_margin_mismatch_is_domain_error(capsys):
    code, _, err = run(capsys, "schur-mul", "--left", LEFT, "--right", LEFT)
    assert code == 2
    assert "domain error" in err


def test_bad_matrix_json_is_usage_error(capsys):
    code, _, err = run(capsys, "schur-mul", "--left", "{", "--right", RIGHT)
    assert code == 2
    assert "usage error" in err


def test_canonical_cli(capsys):
    code, out, _ = run(
        capsys,
        "canonical",
        "--L0", "1", "--L1", "1", "--Ld", "1",
        "--matrix", RIGHT,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["weight"] == [1, 1, 1]


def test_stab_mul_cli(capsys):
    code, out, _ = run(capsys, "stab-mul", "--left", LEFT, "--right", RIGHT)
    assert code == 0
    assert json.loads(out)["algebra"]["type"] == "stab"
    code, out, _ = run(
        capsys, "stab-mul", "--left", LEFT, "--right", RIGHT, "--pi", "symbolic"
    )
    assert code == 0
    assert "coefficient" in out


def test_stab_canonical_cli(capsys):
    mat = '{"r":1,"kind":"xitilde","entries":[[0,0,1],[0,2,1],[1,1,-2],[2,2,3]]}'
    code, out, _ = run(
        capsys,
        "stab-canonical",
        "--L0", "1", "--L1", "1", "--Ld", "1",
        "--matrix", mat,
        "--p-budget", "12",
    )
    assert code == 0
    assert len(json.loads(out)["terms"]) >= 1


def test_iqg_check_cli(capsys):
    code, out, _ = run(capsys, "iqg-check", "--type", "jj", "--r", "1", "--window", "1")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_corpus_roundtrip(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CSCHUR_CORPUS_DIR", str(tmp_path))
    code, out, _ = run(capsys, "corpus", "generate", "--r", "1", "--d", "2", "--band", "1")
    assert code == 0 and "wrote" in out
    first = (tmp_path / "oracle-r1-d2-band1.json").read_bytes()
    code, out, _ = run(capsys, "corpus", "generate", "--r", "1", "--d", "2", "--band", "1")
    assert code == 0
    assert (tmp_path / "oracle-r1-d2-band1.json").read_bytes() == first
    code, out, _ = run(capsys, "corpus", "verify", "--r", "1", "--d", "2", "--band", "1")
    assert code == 0
    assert "0 mismatches" in out
