import json
import subprocess
import sys

import pytest

from conftest import four_point_example, type22
from yangbaxter.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    S = four_point_example()
    B0, _, S0 = type22(0)
    _, _, S1 = type22(1)
    paths = {}
    for name, obj in {"sec5": S, "s0": S0, "s1": S1, "b0": B0}.items():
        p = tmp_path / f"{name}.json"
        p.write_text(obj.to_json())
        paths[name] = str(p)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"sigma": [[0, 0], [1, 1]], "tau": [[0, 1], [0, 1]]}))
    paths["bad"] = str(bad)
    badbrace = tmp_path / "badbrace.json"
    badbrace.write_text(json.dumps({"add": [[0, 1, 2, 3], [1, 2, 3, 0], [2, 3, 0, 1], [3, 0, 1, 2]],
                                    "mul": [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 1, 0], [3, 2, 0, 1]]}))
    paths["badbrace"] = str(badbrace)
    (tmp_path / "junk.json").write_text("{not json")
    paths["junk"] = str(tmp_path / "junk.json")
    return paths


def test_validate(capsys, files):
    code, out, _ = run(capsys, "validate", files["s0"])
    assert code == 0 and json.loads(out)["involutive"] is True
    code, out, _ = run(capsys, "validate", files["bad"])
    assert code == 1 and json.loads(out)["error"] == "NonBijectiveRow"
    code, out, _ = run(capsys, "validate", files["b0"])
    assert code == 0 and json.loads(out)["is_brace"] is True


def test_validate_brace_failure(capsys, files):
    code, out, _ = run(capsys, "validate", files["badbrace"])
    data = json.loads(out)
    # Z/4 against a relabelled copy of itself
    assert code == 1 and data["kind"] == "brace"
    assert data["error"] == "BraceAxiomFailure" and len(data["witness"]) == 3


def test_analyze_section_example(capsys, files):
    code, out, _ = run(capsys, "analyze", files["sec5"])
    data = json.loads(out)
    assert code == 0
    assert data["mpl"] == "NotMultipermutation"
    assert [0] in data["subsolutions"]


def test_analyze_type22(capsys, files):
    code, out, _ = run(capsys, "analyze", files["s0"])
    data = json.loads(out)
    assert data["mpl"] == data["mpl_prime"] == 2
    assert data["type"] == [2, 2]
    assert data["permutation_group"]["abelian_invariants"] == [4]
    assert data["automorphisms"]["abelian_invariants"] == [2, 2]
    assert data["subsolutions"] == []


def test_text_format(capsys, files):
    code, out, _ = run(capsys, "analyze", files["s0"], "--format", "text")
    assert code == 0
    assert "mpl: 2" in out and "involutive: yes" in out


def test_construct(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "--type", "2:1,1", "--matrix", "0")
    data = json.loads(out)
    assert code == 0 and len(data["solution"]["sigma"]) == 4
    m = tmp_path / "m.txt"
    m.write_text("2 1\n0 2\n")
    code, out, _ = run(capsys, "construct", "--type", "2:1,1", "--matrix", str(m))
    assert code == 0 and json.loads(out)["matrix"] == [[2, 1], [0, 2]]
    m.write_text("2 3\n0 2\n")
    code, _, err = run(capsys, "construct", "--type", "2:1,1", "--matrix", str(m))
    assert code == 1
    code, _, _ = run(capsys, "construct", "--type", "2:1,1", "--matrix", "9")
    assert code == 2


def test_enumerate(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--type", "2:1,1,1", "--verify-formula", "--verify-iso",
                       "--emit-dir", str(tmp_path / "out"))
    data = json.loads(out)
    assert code == 0 and data["class_count"] == 3 and data["formula_agrees"] and data["iso_verified"]
    assert len(list((tmp_path / "out").glob("*.solution.json"))) == 3


def test_enumerate_cap(capsys):
    code, _, err = run(capsys, "enumerate", "--type", "2:3,3,3", "--orbit-cap", "10")
    assert code == 3 and "cap" in err


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--p", "2", "--d", "2", "--mpl-le", "2")
    assert code == 0 and out.strip() == "3"
    code, out, _ = run(capsys, "count", "--p", "2", "--d", "3", "--mpl-le", "3")
    assert out.strip() == "6"
    assert run(capsys, "count", "--p", "4", "--d", "2", "--mpl-le", "2")[0] == 2
    assert run(capsys, "count", "--p", "2", "--d", "-1", "--mpl-le", "2")[0] == 2
    assert run(capsys, "count", "--p", "2", "--d", "2", "--mpl-le", "5")[0] == 2


def test_iso(capsys, files):
    code, out, _ = run(capsys, "iso", files["s0"], files["s0"])
    assert code == 0 and json.loads(out)["witness"] is not None
    code, out, _ = run(capsys, "iso", files["s0"], files["s1"])
    assert code == 1 and json.loads(out)["isomorphic"] is False
    assert run(capsys, "iso", files["s0"], files["b0"])[0] == 2


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--size", "4")
    assert code == 0 and json.loads(out)["count"] == 3
    assert run(capsys, "oracle", "--size", "7")[0] == 3


def test_usage_errors(capsys, files, tmp_path):
    assert run(capsys, "analyze", files["junk"])[0] == 2
    assert run(capsys, "analyze", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "enumerate", "--type", "4:1")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys)[0] == 2


def test_deterministic_output():
    cmd = [sys.executable, "-m", "yangbaxter", "enumerate", "--type", "2:2,1,1"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
