import json
import subprocess
import sys

import pytest

from unitorus import analysis, cli
from unitorus import io as gio
from unitorus.gallery import u_n_on_torus
from unitorus.hodge import TorusModel
from unitorus.linalg import ExactMatrix


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


def write(tmp_path, gf, name="g.json"):
    path = tmp_path / name
    gio.dump(gf, path)
    return str(path)


def single(matrix, n):
    return gio.GroupFile(TorusModel.square(n), [matrix])


def test_gallery_u_n_3(tmp_path, capsys):
    path = tmp_path / "u3.json"
    code, rep = run(["gallery", "u_n", "3", "--write", str(path)], capsys)
    assert code == 0
    assert {e["key"]: e["computed"] for e in rep["expected"]}["nilpotency_class"] == 2
    code, rep = run(["analyze-group", str(path)], capsys)
    assert code == 0
    assert rep["group"]["nilpotency_class"] == 2 and rep["group"]["derived_length"] == 2


@pytest.mark.parametrize("argv", [["gallery", "u_n", "4"], ["gallery", "affine", "5", "2"],
                                  ["gallery", "eisenstein", "3"], ["gallery", "full_jordan", "3"],
                                  ["gallery", "subtorus", "3"]])
def test_gallery_cases_pass(argv, capsys):
    code, rep = run(argv, capsys)
    assert code == 0, rep["violations"]
    assert all(e["ok"] for e in rep["expected"])


def test_trivial_group_has_class_zero(tmp_path, capsys):
    code, rep = run(["analyze-group", write(tmp_path, single(ExactMatrix.identity(4), 2))], capsys)
    assert code == 0 and rep["group"]["nilpotency_class"] == 0


def test_minus_identity_reports_order_two(tmp_path, capsys):
    code, rep = run(["analyze-group", write(tmp_path, single(-ExactMatrix.identity(2), 1))], capsys)
    assert code == 0
    assert rep["generators"][0]["diagnostic"] == {"error": "NotUnipotent", "N": 2}
    assert "power_subgroup" in rep


def test_hyperbolic_generator_is_undetermined(tmp_path, capsys):
    m = ExactMatrix([[2, 1], [1, 1]]).kron(ExactMatrix.identity(2))
    code, rep = run(["analyze-group", write(tmp_path, single(m, 2))], capsys)
    assert code == 4 and rep["undetermined"]


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema_version": 1, "torus": {"n": 1, "J": [["0", "-1"], ["1", "0"]]},
                               "generators": [{"matrix": [[1, 1], [0, 1]]}], "metadata": {}}))
    code, rep = run(["analyze-group", str(bad)], capsys)
    assert code == 2
    assert rep["issues"][0]["invariant"] == "MJ=JM"
    code, rep = run(["growth", str(tmp_path / "missing.json")], capsys)
    assert code == 2


def test_violation_exit_code(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, gio.from_case(u_n_on_torus(2)))

    def broken(*args, **kwargs):
        return {"degrees": [], "h11_exponent": 1, "h11_even": False, "passed": False}

    monkeypatch.setattr(analysis, "verify_growth_bounds", broken)
    code, rep = run(["growth", path], capsys)
    assert code == 3 and rep["violations"]


def test_growth_csv_and_words(tmp_path, capsys):
    path = write(tmp_path, gio.from_case(u_n_on_torus(3)))
    csv = tmp_path / "g.csv"
    code, rep = run(["growth", path, "--pq", "1,1", "--max-word-len", "2", "--csv", str(csv), "--samples", "3"],
                    capsys)
    assert code == 0
    assert len(rep["elements"]) > 3
    lines = csv.read_text().splitlines()
    assert lines[0].startswith("element,p,q") and len(lines) == 1 + len(rep["elements"])


def test_decompose_single_generator(tmp_path, capsys):
    path = write(tmp_path, gio.from_case(u_n_on_torus(3)))
    code, rep = run(["decompose", path, "--generator", "0", "--hr-samples", "3", "--family-scale", "1/3"], capsys)
    assert code == 0
    assert rep["sequences"]["g0"]["s"] == [1]


def test_bad_flags(capsys):
    with pytest.raises(SystemExit):
        cli.main(["growth", "x.json", "--pq", "1"])
    with pytest.raises(SystemExit):
        cli.main(["decompose", "x.json", "--family-scale", "2"])
    capsys.readouterr()


def test_gallery_is_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        assert cli.main(["gallery", "u_n", "3", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_fuzz_is_independent_of_jobs(tmp_path):
    outs = []
    for jobs in ("1", "2"):
        out = tmp_path / f"f{jobs}.json"
        assert cli.main(["fuzz", "--n", "2", "--count", "4", "--seed", "9", "--jobs", jobs, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "unitorus", "gallery", "u_n", "2"], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["case"] == "u_n_2"
