"""End-to-end command-line behavior, run in-process through main()."""

import json

import pytest

from conftest import FIXTURES, GOLDEN

import asdimlab.engine
from asdimlab.bounds import InconsistentBoundError
from asdimlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_no_arguments_is_a_usage_error(capsys):
    assert main([]) == 2
    capsys.readouterr()


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    assert "bound" in out and "catalog" in out and "cover" in out


def test_bound_text(capsys):
    code, out, err = run(capsys, "bound", str(FIXTURES / "d3_h3.mfd"))
    assert code == 0 and err == ""
    assert "group: Lattice(H3,3,cocompact)" in out
    assert "bound: 3..3" in out
    assert "verdict: Aspherical" in out


def test_bound_text_golden(capsys):
    code, out, err = run(capsys, "bound", str(FIXTURES / "d3_h3.mfd"), "--trace")
    assert code == 0
    assert out == (GOLDEN / "h3_text.txt").read_text()


def test_bound_structured_golden(capsys):
    code, out, err = run(
        capsys, "bound", str(FIXTURES / "five_summands.mfd"), "--format", "structured", "--trace"
    )
    assert code == 0
    assert out == (GOLDEN / "five_summands_structured.json").read_text()


def test_structured_payload_shape(capsys):
    code, out, _ = run(capsys, "bound", str(FIXTURES / "alex_empty.mfd"), "--format", "structured")
    assert code == 0
    payload = json.loads(out)
    assert list(payload) == ["input", "group", "bound", "verdict", "consequences", "trace"]
    assert payload["input"]["digest"].startswith("sha256:")
    assert payload["bound"] == {"lower": 3, "upper": "3"}
    assert payload["trace"] is None
    kinds = [c["kind"] for c in payload["consequences"]]
    assert kinds == ["CoarseBaumConnes", "Novikov", "ZeroInSpectrum", "NoPSCMetric"]


def test_bound_missing_file(capsys):
    code, out, err = run(capsys, "bound", str(FIXTURES / "does_not_exist.mfd"))
    assert code == 2
    assert "error:" in err


@pytest.mark.parametrize(
    "name,line,col",
    [("dim5.mfd", 1, 5), ("unknown_geometry.mfd", 2, 9), ("outside_cases.mfd", 2, 7)],
)
def test_bound_diagnostics_carry_positions(capsys, name, line, col):
    path = FIXTURES / "bad" / name
    code, out, err = run(capsys, "bound", str(path))
    assert code == 2
    assert f"{path}:{line}:{col}: error: " in err


def test_catalog_text(capsys):
    code, out, _ = run(capsys, "catalog", "--dim", "4")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 19
    assert lines[0].startswith("S4")
    assert any("R-NAGATA" in line for line in lines)


def test_catalog_structured_golden(capsys):
    code, out, _ = run(capsys, "catalog", "--dim", "3", "--format", "structured")
    assert code == 0
    assert out == (GOLDEN / "catalog_dim3.json").read_text()


def test_catalog_rejects_bad_dim(capsys):
    assert main(["catalog", "--dim", "5"]) == 2
    capsys.readouterr()


def test_cover_build_stdout_golden(capsys):
    code, out, _ = run(capsys, "cover", "build", "--rank", "1", "-D", "2", "--radius", "8")
    assert code == 0
    assert out == (GOLDEN / "brick_r1.txt").read_text()


def test_cover_build_verify_cycle(tmp_path, capsys):
    target = tmp_path / "w.txt"
    code, out, _ = run(
        capsys, "cover", "build", "--rank", "2", "-D", "3", "--radius", "9", "-o", str(target)
    )
    assert code == 0
    assert "wrote" in out
    code, out, _ = run(capsys, "cover", "verify", str(target))
    assert code == 0
    assert out.startswith("OK:")


def test_cover_verify_invalid_is_exit_1(tmp_path, capsys):
    target = tmp_path / "w.txt"
    run(capsys, "cover", "build", "--rank", "1", "-D", "2", "--radius", "8", "-o", str(target))
    text = target.read_text()
    # overstate the diameter record: still well-formed, no longer valid
    lines = text.splitlines()
    lines[3] = "B 99"
    target.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "cover", "verify", str(target))
    assert code == 1
    assert "violation:" in out
    assert out.rstrip().endswith("violation(s)")


def test_cover_verify_format_error_is_exit_2(tmp_path, capsys):
    target = tmp_path / "w.txt"
    target.write_text("coarse-witness v9\ngroup=FreeAbelian(1) radius=2\nD 2\nB 3\n")
    code, out, err = run(capsys, "cover", "verify", str(target))
    assert code == 2
    assert f"{target}:1: error: " in err


def test_cover_build_bad_rank(capsys):
    code, out, err = run(capsys, "cover", "build", "--rank", "9", "-D", "2", "--radius", "5")
    assert code == 2
    assert "error:" in err


def test_cover_search(capsys, tmp_path):
    code, out, _ = run(
        capsys, "cover", "search", "--group", "FreeAbelian(1)", "--radius", "4",
        "-D", "2", "-B", "3",
    )
    assert code == 0
    assert out.strip() == "k=2"
    saved = tmp_path / "witness.txt"
    code, out, _ = run(
        capsys, "cover", "search", "--group", "FreeAbelian(1)", "--radius", "4",
        "-D", "1", "-B", "8", "-o", str(saved),
    )
    assert code == 0
    assert out.strip() == "k=1"
    code, out, _ = run(capsys, "cover", "verify", str(saved))
    assert code == 0


def test_cover_search_no_cover_within_kmax(capsys):
    code, out, _ = run(
        capsys, "cover", "search", "--group", "FreeAbelian(1)", "--radius", "4",
        "-D", "2", "-B", "3", "--k-max", "1",
    )
    assert code == 1
    assert out.strip() == "k=none"


def test_cover_search_budget_exit(capsys):
    code, out, err = run(
        capsys, "cover", "search", "--group", "FreeAbelian(1)", "--radius", "30",
        "-D", "1", "-B", "2",
    )
    assert code == 2
    assert "24 points" in err


def test_inconsistent_bound_maps_to_exit_3(capsys, monkeypatch):
    def explode(expr, aspherical_dim=None):
        raise InconsistentBoundError("lower bound 4 exceeds upper bound 0")

    monkeypatch.setattr(asdimlab.engine, "bound", explode)
    code, out, err = run(capsys, "bound", str(FIXTURES / "d3_h3.mfd"))
    assert code == 3
    assert "inconsistent" in err
