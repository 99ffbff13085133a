import json
import subprocess
import sys

import pytest

from coxperv import io, linalg
from coxperv.cli import main
from coxperv.coxeter import build_system
from coxperv.facets import enumerate_facets
from coxperv.perversity import make_rank_one_Z2


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def write_example(tmp_path, capsys, *argv):
    path = tmp_path / "module.json"
    code, _, _ = run(["example", *argv, "--out", str(path)], capsys)
    assert code == 0
    return path


@pytest.mark.parametrize("name, order, facets, opp, rel", [("A1", 2, 3, 1, 6), ("A2", 6, 13, 4, 60)])
def test_system_summary(name, order, facets, opp, rel, capsys):
    code, out, _ = run(["system", name], capsys)
    data = json.loads(out)
    assert code == 0
    assert (data["order"], data["facets"], data["opposition_data"], data["relation5_data"]) == (order, facets, opp, rel)


def test_system_from_json_file(tmp_path, capsys):
    path = tmp_path / "b2.json"
    path.write_text(json.dumps({"m": [[1, 4], [4, 1]]}))
    code, out, _ = run(["system", str(path)], capsys)
    assert code == 0 and json.loads(out)["order"] == 8


def test_malformed_json_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{ not json")
    code, _, err = run(["system", str(path)], capsys)
    assert code == 2 and err.startswith("error:")
    code, _, err = run(["check", str(path), "--type", "A1"], capsys)
    assert code == 2


def test_infinite_group_exits_2(capsys):
    code, _, err = run(["system", "--type", '{"m": [[1,3,3],[3,1,3],[3,3,1]]}'], capsys)
    assert code == 2 and "error" in err


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["system", "A1", "--bogus"])
    assert exc.value.code == 2


def test_rank_one_example_file(tmp_path, capsys):
    path = write_example(tmp_path, capsys, "rank-one", "--mu", "2")
    data = json.loads(path.read_text())
    assert data["e"]["1"] == [["1", "0"], ["0", "1"]]
    assert data["e"]["0"] == [["1", "0"], ["0", "0"]]
    assert data["rho"]["0"] == [["2", "3"], ["-1", "-2"]]
    m = io.module_from_json(data)
    assert linalg.equal(m.rho[0], make_rank_one_Z2(2).rho[0])


def test_trivial_b2_example_is_one_dimensional(tmp_path, capsys):
    data = json.loads(write_example(tmp_path, capsys, "trivial", "--type", "B2").read_text())
    assert data["dim"] == 1 and sorted(data["e"]) == ["0", "1", "2", "3"]


def test_local_system_reflection_example(tmp_path, capsys):
    data = json.loads(write_example(tmp_path, capsys, "local-system", "--type", "A2", "--rep", "reflection").read_text())
    assert data["dim"] == 2
    assert all(e == [["1", "0"], ["0", "1"]] for e in data["e"].values())
    assert data["rho"]["0"] != data["rho"]["1"]


def test_check_rank_one_pass(tmp_path, capsys):
    path = write_example(tmp_path, capsys, "rank-one", "--mu", "2")
    code, out, _ = run(["check", str(path)], capsys)
    data = json.loads(out)
    assert code == 0 and data["perverse"]["verdict"] == "pass"
    assert data["monodromy"]["mu"]["0"] == [["2"]]


def test_check_rank_one_fail(tmp_path, capsys):
    path = write_example(tmp_path, capsys, "rank-one", "--mu", "0")
    code, out, _ = run(["check", str(path)], capsys)
    witness = json.loads(out)["perverse"]["witness"]
    assert code == 1
    assert witness["family"] == "invertible" and witness["label"] == "∅|_0∅"


def test_check_skyscraper_sign_a2_with_oracle(tmp_path, capsys):
    path = write_example(tmp_path, capsys, "skyscraper", "--type", "A2", "--rep", "sign")
    code, out, _ = run(["check", str(path), "--geometric-oracle"], capsys)
    data = json.loads(out)
    assert code == 0 and data["oracle"]["agrees"] is True


def test_shape_mismatch_exits_3(tmp_path, capsys):
    path = write_example(tmp_path, capsys, "rank-one", "--mu", "2")
    data = json.loads(path.read_text())
    data["rho"]["0"] = [["1"]]
    path.write_text(json.dumps(data))
    code, _, err = run(["check", str(path)], capsys)
    assert code == 3 and "shape" in err


def test_invalid_module_fails_with_presentation_witness(tmp_path, capsys):
    path = write_example(tmp_path, capsys, "rank-one", "--mu", "2")
    data = json.loads(path.read_text())
    data["e"]["0"] = [["2", "0"], ["0", "0"]]
    path.write_text(json.dumps(data))
    code, out, _ = run(["check", str(path)], capsys)
    assert code == 1
    assert json.loads(out)["perverse"]["witness"]["relation"] == "idempotent-product"


@pytest.mark.parametrize("cmd", ["facets", "oppositions", "relations"])
def test_enumeration_commands(cmd, capsys):
    code, out, _ = run([cmd, "--type", "A2"], capsys)
    data = json.loads(out)
    assert code == 0
    if cmd == "facets":
        assert len(data["facets"]) == 13
    elif cmd == "oppositions":
        assert len(data) == 4
    else:
        assert data["count"] == 60


def test_oracle_and_monodromy_commands(tmp_path, capsys):
    path = write_example(tmp_path, capsys, "local-system", "--type", "A2")
    code, out, _ = run(["oracle", str(path)], capsys)
    assert code == 0 and json.loads(out)["transitive"]["verdict"] == "pass"
    code, out, _ = run(["monodromy", str(path)], capsys)
    assert code == 0 and json.loads(out)["braid"] == "pass"


def test_random_example_depends_on_seed(capsys):
    a = run(["example", "random", "--type", "A2", "--seed", "5"], capsys)[1]
    b = run(["example", "random", "--type", "A2", "--seed", "5"], capsys)[1]
    c = run(["example", "random", "--type", "A2", "--seed", "6"], capsys)[1]
    assert a == b and a != c


def test_no_floats_in_output(tmp_path, capsys):
    path = write_example(tmp_path, capsys, "random", "--type", "B2", "--seed", "2")
    _, out, _ = run(["check", str(path)], capsys)

    def walk(x):
        assert not isinstance(x, float)
        for v in (x.values() if isinstance(x, dict) else x if isinstance(x, list) else []):
            walk(v)

    walk(json.loads(out))


def test_byte_identical_across_processes(tmp_path):
    module = tmp_path / "m.json"
    cmd = [sys.executable, "-m", "coxperv.cli"]
    subprocess.run(cmd + ["example", "random", "--type", "A2", "--seed", "3", "--out", str(module)], check=True)
    outs = [subprocess.run(cmd + ["check", str(module), "--jobs", str(j)], capture_output=True).stdout for j in (1, 2, 1)]
    assert outs[0] == outs[1] == outs[2] and outs[0]


def test_facet_json_round_trip():
    a2 = build_system("A2")
    for f in enumerate_facets(a2):
        assert io.parse_facet(a2, io.facet_json(a2, f)) == f
