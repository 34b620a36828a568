from __future__ import annotations

import pytest

from bachflat.cli import fixture_text, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def machine(text: str) -> dict[str, str]:
    return dict(line.split(" = ", 1) for line in text.splitlines() if " = " in line)


def test_report_thm1_exact(capsys):
    code, out, _ = run(capsys, "report", "thm1.dsys", "--backend", "exact", "--format", "machine")
    assert code == 0
    kv = machine(out)
    assert kv["flags.bach_flat"] == "true"
    assert kv["flags.einstein"] == "false"
    assert kv["flags.sd_flat"] == "false" and kv["flags.asd_flat"] == "false"
    assert kv["flags.obstruction"] == "INCONSISTENT"
    assert kv["bach.norm2"] == "0"
    assert kv["ricci.11"] == "-3/2"


def test_report_abelian(capsys):
    code, out, _ = run(capsys, "report", "abelian", "--format", "machine")
    kv = machine(out)
    assert code == 0
    assert all(kv[f"flags.{k}"] == "true" for k in ("einstein", "bach_flat", "sd_flat", "asd_flat"))
    assert kv["scalar_curvature"] == "0"


def test_report_ch2(capsys):
    kv = machine(run(capsys, "report", "ch2.dsys", "--format", "machine")[1])
    assert kv["flags.einstein"] == "true" and kv["flags.bach_flat"] == "true"


def test_report_text_and_float(capsys):
    code, out, _ = run(capsys, "report", "thm2", "--backend", "float")
    assert code == 0 and "backend: float" in out and "Bach-flat:          true" in out


def test_machine_output_is_deterministic(capsys):
    a = run(capsys, "report", "thm1", "--format", "machine")[1]
    b = run(capsys, "report", "thm1", "--format", "machine")[1]
    assert a == b
    keys = [line.split(" = ")[0] for line in a.splitlines()]
    assert len(keys) == len(set(keys))


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.txt"
    code, out, _ = run(capsys, "report", "g11", "--format", "machine", "--out", str(target))
    assert code == 0 and out == ""
    assert "flags.bach_flat = true" in target.read_text()


@pytest.mark.parametrize(
    "fixture, prop, code",
    [
        ("thm2.dsys", "bach-flat", 0),
        ("thm1.dsys", "einstein", 1),
        ("g11.dsys", "half-flat", 0),
        ("thm1.dsys", "ce-obstruction", 0),
        ("ch2.dsys", "ce-obstruction", 1),
        ("thm1.dsys", "half-flat", 1),
    ],
)
def test_check(capsys, fixture, prop, code):
    got, out, _ = run(capsys, "check", fixture, prop)
    assert got == code
    assert out.count("\n") == 1


def test_family_template_needs_parameters(capsys):
    code, _, err = run(capsys, "report", "family")
    assert code == 2 and "--alpha" in err
    code, out, _ = run(capsys, "report", "family", "--alpha", "1/2", "--beta", "1/2", "--format", "machine")
    assert code == 0 and machine(out)["flags.einstein"] == "true"


def test_parse_error_exit(capsys, tmp_path):
    f = tmp_path / "bad.dsys"
    f.write_text("d e1 = 0\nd e2 = e1^e3 +\n")
    code, _, err = run(capsys, "report", str(f))
    assert code == 2 and "line 2" in err


def test_missing_file(capsys):
    assert run(capsys, "report", "nope.dsys")[0] == 2


def test_jacobi_exit(capsys, tmp_path):
    f = tmp_path / "nj.dsys"
    f.write_text("d e1 = e2^e3\nd e2 = e1^e3\nd e3 = e1^e2\nd e4 = e1^e4\n")
    code, _, err = run(capsys, "report", str(f))
    assert code == 3 and "(2,3,4,4)" in err


def test_field_exit_and_fallback(capsys):
    args = ["family", "--alpha", "sqrt(2)", "--beta", "sqrt(3)+sqrt(5)"]
    code, _, err = run(capsys, "report", *args, "--backend", "exact")
    assert code == 4 and "field" in err
    code, out, err = run(capsys, "report", *args, "--format", "machine")
    assert code == 0 and "warning" in err and machine(out)["backend"] == "float"


def test_family_solve(capsys):
    code, out, _ = run(capsys, "family", "solve")
    assert code == 0
    assert "8 solutions in 3 classes" in out
    assert "verified" in out


def test_family_solve_machine(capsys):
    a = run(capsys, "family", "solve", "--format", "machine")[1]
    b = run(capsys, "family", "solve", "--format", "machine")[1]
    assert a == b
    kv = machine(a)
    assert kv["solutions.count"] == "8" and kv["classes.count"] == "3"
    labels = {kv[f"class.{i}.label"] for i in (1, 2, 3)}
    assert labels == {"HYPERHERMITIAN", "EINSTEIN_CH2", "NONTRIVIAL"}


def test_family_grid(capsys):
    code, out, _ = run(capsys, "family", "grid", "--range", "-1.5", "1.5", "-1.5", "1.5", "--res", "301")
    assert code == 0
    assert "8 refined minima" in out
    assert "unexplained" not in out


def test_family_grid_bad_range(capsys):
    assert run(capsys, "family", "grid", "--range", "1", "0", "0", "1")[0] == 2


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "2", "3")
    assert code == 0
    assert out.count("[PASS]") == 2 and "s)" in out


def test_fixture_lookup():
    assert "sqrt(5)" in fixture_text("rescaled")
    with pytest.raises(KeyError):
        fixture_text("nothing")
