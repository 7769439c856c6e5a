#!/usr/bin/env python3
"""Test the command-line front-end end to end on the point and P2"""

import json

import pytest

from cli import main
from conftest import ALGEBRA_DIR


@pytest.fixture(autouse=True)
def algebra_dir(monkeypatch):
    monkeypatch.setenv("SYMPROD_ALGEBRA_DIR", str(ALGEBRA_DIR))
    monkeypatch.setenv("SYMPROD_UNSAFE_CAPS", "false")


def test_algebra_validate(capsys):
    assert main(["algebra", "validate", "point"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["name"] == "point"
    assert out["dim"] == 1
    assert out["euler"] == "1/1*1"
    assert out["euler_integral"] == "1/1"
    assert len(out["sha256"]) == 64


def test_unknown_algebra_exits_2():
    assert main(["algebra", "validate", "enriques"]) == 2


def test_product_on_the_point(capsys):
    assert main(["product", "--algebra", "point", "--n", "3", "--x", '{"1": [2]}', "--y", '{"1": [2]}']) == 0
    assert json.loads(capsys.readouterr().out) == {"-": "12/1", "1(3)": "4/1"}


def test_bad_partition_function_exits_2():
    assert main(["product", "--algebra", "point", "--n", "3", "--x", "{not json"]) == 2


def test_product_of_element_files(tmp_path, capsys):
    lhs, swap = tmp_path / "lhs.json", tmp_path / "swap.json"
    # x ⊗ 1 on the identity is not S_2-invariant
    lhs.write_text(json.dumps([{"perm": [0, 1], "payload": [{"indices": ["x", "1"], "coeff": "1/1"}]}]))
    swap.write_text(json.dumps([{"perm": [1, 0], "payload": [{"indices": ["1"], "coeff": "1/1"}]}]))
    args = ["product", "--algebra", "P2", "--n", "2", "--t", "3"]

    assert main(args + ["--lhs", str(lhs), "--rhs", str(swap)]) == 0
    assert json.loads(capsys.readouterr().out) == [{"perm": [1, 0], "payload": [{"indices": [1], "coeff": "1/1"}]}]

    assert main(args + ["--lhs", str(swap), "--rhs", str(swap)]) == 0
    diagonal = [{"indices": [i, 2 - i], "coeff": "3/1"} for i in range(3)]
    assert json.loads(capsys.readouterr().out) == [{"perm": [0, 1], "payload": diagonal}]


def test_element_files_must_come_in_pairs(tmp_path):
    lhs = tmp_path / "lhs.json"
    lhs.write_text("[]")
    assert main(["product", "--algebra", "P2", "--n", "2", "--lhs", str(lhs)]) == 2
    assert main(["product", "--algebra", "P2", "--n", "2", "--lhs", str(lhs), "--rhs", str(tmp_path / "missing.json")]) == 2


def test_fock_apply(capsys):
    assert main(["fock", "apply", "--algebra", "P2", "--ops", "p(-1,x)"]) == 0
    assert json.loads(capsys.readouterr().out) == {"1": {"x(1)": "1/1"}}


def test_walg_on_the_point_is_rejected(tmp_path):
    assert main(["verify", "walg", "--algebra", "point", "--max-n", "1", "--store", str(tmp_path)]) == 2


def test_caps_are_enforced(tmp_path):
    assert main(["verify", "jucys", "--algebra", "point", "--max-n", "9", "--store", str(tmp_path)]) == 2


def test_verify_then_export(tmp_path, capsys):
    report = tmp_path / "heisenberg.json"
    argv = ["verify", "heisenberg", "--algebra", "point", "--max-n", "2", "--max-mode", "1", "--workers", "2", "--output", str(report)]
    assert main(argv) == 0
    assert "cases pass" in capsys.readouterr().out
    data = json.loads(report.read_text())
    assert data["suite"] == "heisenberg"
    assert all(c["pass"] for c in data["cases"])
    assert [c["id"] for c in data["cases"]] == sorted(c["id"] for c in data["cases"])
    meta = json.loads((tmp_path / "heisenberg.meta.json").read_text())
    assert meta["workers"] == 2
    assert len(meta["report_sha256"]) == 64

    exported = tmp_path / "heisenberg.csv"
    assert main(["export", str(report), "--format", "csv", "--output", str(exported)]) == 0
    lines = exported.read_text().splitlines()
    assert lines[0] == "id,pass,residual"
    assert len(lines) == len(data["cases"]) + 1


def test_stable_tabulate_to_csv(tmp_path):
    output = tmp_path / "point.csv"
    argv = ["stable", "tabulate", "--algebra", "point", "--max-norm", "1", "--output", str(output), "--store", str(tmp_path / "store")]
    assert main(argv) == 0
    lines = output.read_text().splitlines()
    assert lines[0] == "rho,sigma,nu,coeff"
    assert "-,-,-,1/1" in lines


def test_export_rejects_missing_and_unknown_artifacts(tmp_path):
    assert main(["export", str(tmp_path / "missing.json")]) == 2
    other = tmp_path / "other.json"
    other.write_text('{"hello": 1}')
    assert main(["export", str(other)]) == 2


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-v"]))
