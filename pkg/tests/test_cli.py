import json
import subprocess
import sys

import pytest

from helpers import DATA, EX1_APPROX, PSI2, w
from lcabs import cli
from lcabs.automata import Fsm, canonical_form, parse_word
from lcabs.errors import InternalInconsistency
from lcabs.lcomplete import ApproxMachine
from lcabs.relations import Relation
from lcabs.windows import WindowSet

EX1_FILE = str(DATA / "ex1.quant.json")
PSI1_FILE = str(DATA / "psi1.fsm.json")
C_FILE = str(DATA / "c.fsm.json")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if code == 0 and out else None), err


def statuses(report):
    return {item["item"]: item["status"] for item in report["items"]}


def test_windows_quantizer(capsys):
    code, data, _ = run(capsys, "windows", "--l", "1", EX1_FILE)
    assert code == 0
    assert data["initial"] == ["m2 m1", "p2 p1"]
    assert len(data["recurring"]) == 6
    assert WindowSet.from_json(data) == WindowSet.from_json(json.loads(json.dumps(data)))


@pytest.mark.parametrize(
    "l, initial, recurring",
    [(1, ["a b", "a c"], ["a b", "a c", "b a", "c a"]), (0, ["a"], ["a", "b", "c"])],
)
def test_windows_psi1(capsys, l, initial, recurring):
    code, data, _ = run(capsys, "windows", "--l", str(l), PSI1_FILE)
    assert code == 0
    assert data["initial"] == initial and data["recurring"] == recurring


def test_approximate_with_dot(capsys, tmp_path):
    dot = tmp_path / "out.dot"
    code, data, _ = run(capsys, "approximate", "--l", "1", EX1_FILE, "--dot", str(dot))
    assert code == 0
    approx = ApproxMachine.from_json(data)
    assert canonical_form(approx.fsm) == canonical_form(EX1_APPROX)
    assert approx.l == 1
    assert dot.read_text().startswith("digraph")


def test_approximate_psi1_levels(capsys):
    _, data, _ = run(capsys, "approximate", "--l", "1", PSI1_FILE)
    assert canonical_form(Fsm.from_json(data)) == canonical_form(PSI2)
    _, flat, _ = run(capsys, "approximate", "--l", "0", PSI1_FILE)
    assert flat["initial"] == ["#"] and len(flat["transitions"]) == 4


def test_report_examples(capsys):
    _, psi, _ = run(capsys, "report", "--l", "1", PSI1_FILE)
    assert statuses(psi) == {"i": "pass", "ii": "pass", "iii": "pass", "iv": "pass", "v": "pass", "vi": "fail"}
    _, c2, _ = run(capsys, "report", "--l", "2", C_FILE)
    assert statuses(c2)["vi"] == "pass"
    code, ex, _ = run(capsys, "report", "--l", "1", EX1_FILE, "--mode", "point")
    assert code == 0
    assert ex["flags"] == ["l-complete-without-RX-simulation"]
    cx = ex["items"][-1]["counterexample"]
    assert (cx["left"], cx["right"], cx["symbol"], cx["replay"]) == ("-1", "6", "m1", "p2 p1")


def test_check_lcomplete(capsys):
    _, one, _ = run(capsys, "check-lcomplete", "--l", "1", C_FILE)
    assert one["status"] == "fail" and one["counterexample"]["replay"] == "a a a"
    _, two, _ = run(capsys, "check-lcomplete", "--l", "2", C_FILE)
    assert two == {"l": 2, "status": "pass"}


def test_reach(capsys):
    _, point, _ = run(capsys, "reach", EX1_FILE, "--mode", "point", "--past", "m1")
    assert point["states"] == ["-6", "1"] and point["text"] == "{-6} ∪ {1}"
    _, start, _ = run(capsys, "reach", EX1_FILE, "--mode", "set", "--past", "^", "--k", "0")
    assert start["text"] == "[-10,-4) ∪ (4,10]"
    _, psi, _ = run(capsys, "reach", PSI1_FILE, "--past", "a", "--k", "1")
    assert psi["states"] == ["xi1", "xi3"] and "text" not in psi


def test_relations_and_check_sim(capsys, tmp_path):
    code, data, _ = run(capsys, "relations", "--l", "1", PSI1_FILE)
    assert code == 0
    rl = Relation.from_json(data["Rl"])
    assert rl.pairs == {("xi1", "a"), ("xi3", "a"), ("xi2", "b"), ("xi2", "c")}
    assert Relation.from_json(json.loads(json.dumps(rl.to_json()))) == rl
    rel_file = tmp_path / "rl.json"
    rel_file.write_text(json.dumps(data["Rl"]))
    _, ok, _ = run(capsys, "check-sim", "--l", "1", PSI1_FILE, "--relation", str(rel_file), "--flavor", "l-initial")
    assert ok["status"] == "pass"
    inv_file = tmp_path / "rl_inv.json"
    inv_file.write_text(json.dumps(rl.inverse().to_json()))
    _, bad, _ = run(
        capsys, "check-sim", "--l", "1", PSI1_FILE, "--relation", str(inv_file),
        "--flavor", "l-initial", "--direction", "approx-sys",
    )
    cx = bad["counterexample"]
    assert bad["status"] == "fail" and (cx["left"], cx["right"], cx["symbol"]) == ("a", "xi3", "b")


def test_relations_carry_intervals(capsys):
    _, data, _ = run(capsys, "relations", "--l", "1", EX1_FILE, "--mode", "set")
    assert data["RX"]["concretization"]
    assert len(data["RX"]["pairs"]) == 8


def test_paths_and_budget(capsys, monkeypatch):
    _, data, _ = run(capsys, "paths", "--depth", "2", PSI1_FILE)
    assert data["words"] == ["^", "a", "a b", "a c"]
    assert {parse_word(t) for t in data["words"]} == {(), w("a"), w("a b"), w("a c")}
    code, _, err = run(capsys, "--budget", "5", "paths", "--depth", "12", EX1_FILE)
    assert code == 2 and "budget" in err.lower()
    monkeypatch.setenv("LCABS_NODE_BUDGET", "5")
    code, _, _ = run(capsys, "paths", "--depth", "12", EX1_FILE)
    assert code == 2


def test_output_file(capsys, tmp_path):
    target = tmp_path / "w.json"
    code, _, _ = run(capsys, "-o", str(target), "windows", "--l", "1", PSI1_FILE)
    assert code == 0
    assert WindowSet.from_json(json.loads(target.read_text())).initial == {w("a b"), w("a c")}


def test_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "windows", "--l", "1", str(tmp_path / "missing.json"))
    assert code == 2 and err
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(capsys, "windows", "--l", "1", str(broken))[0] == 2
    blocked = tmp_path / "blocked.json"
    unit = {"lo": 0, "hi": 1, "lo_closed": True, "hi_closed": True}
    blocked.write_text(json.dumps({"domain": unit, "symbols": {"g": unit}, "initial_values": [0]}))
    code, _, err = run(capsys, "windows", "--l", "1", str(blocked))
    assert code == 2 and "no exit endpoints" in err
    dead = tmp_path / "dead.json"
    dead.write_text(json.dumps(Fsm({"s", "t"}, {"a"}, {"s"}, {("s", "a", "t")}).to_json()))
    assert run(capsys, "windows", "--l", "1", str(dead))[0] == 2


def test_internal_inconsistency_exit_code(capsys, monkeypatch):
    def broken(*_):
        raise InternalInconsistency("routes disagree")

    monkeypatch.setattr(cli, "theorem1_report", broken)
    code, _, err = run(capsys, "report", "--l", "1", PSI1_FILE)
    assert code == 3 and "routes disagree" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "lcabs", "check-lcomplete", "--l", "1", PSI1_FILE],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "pass"
