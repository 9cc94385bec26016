import io
import json

import pytest

from corgal import COUNTEREXAMPLE_DOCUMENT, TRAIN_DOCUMENT, parse_model, models_equal
from corgal.cli import main

GOAL = "K b (p & q & r) & ~K a (p & q & r) & ~K c (p & q & r)"


@pytest.fixture()
def train_path(tmp_path):
    path = tmp_path / "train.model"
    path.write_text(TRAIN_DOCUMENT)
    return str(path)


@pytest.fixture()
def counter_path(tmp_path):
    path = tmp_path / "counter.model"
    path.write_text(COUNTEREXAMPLE_DOCUMENT)
    return str(path)


class TestCheck:
    def test_true_verdict(self, train_path, capsys):
        code = main(["check", "--model", train_path, "--state", "w",
                     "--formula", "[! ~p] K c ~p"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "true"

    def test_false_verdict(self, counter_path, capsys):
        code = main(["check", "--model", counter_path, "--state", "pqr",
                     "--formula", f"<[{{a}}]> <[{{b}}]> ({GOAL})"])
        assert code == 1
        assert capsys.readouterr().out.strip() == "false"

    def test_state_defaults_to_designated(self, train_path, capsys):
        code = main(["check", "--model", train_path, "--formula", "~p"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "true"

    def test_malformed_formula(self, train_path, capsys):
        code = main(["check", "--model", train_path, "--state", "w",
                     "--formula", "[! ~p K c"])
        assert code == 2
        err = capsys.readouterr().err
        assert "line 1" in err and "column" in err

    def test_unknown_state(self, train_path, capsys):
        code = main(["check", "--model", train_path, "--state", "zz",
                     "--formula", "p"])
        assert code == 2

    def test_cap_exceeded(self, counter_path, capsys):
        code = main(["check", "--model", counter_path, "--state", "pqr", "--cap", "5",
                     "--formula", f"<[{{a,b}}]> ({GOAL})"])
        assert code == 3

    def test_trace(self, counter_path, capsys):
        code = main(["check", "--model", counter_path, "--state", "pqr", "--trace",
                     "--formula", f"<[{{a,b}}]> ({GOAL})"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("true")
        assert "<[G]>" in out

    def test_formula_from_stdin(self, train_path, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO("K a ~p"))
        code = main(["check", "--model", train_path, "--state", "w"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "true"

    def test_byte_identical_reruns(self, counter_path, capsys):
        args = ["check", "--model", counter_path, "--state", "pqr", "--trace",
                "--formula", f"<[{{a,b}}]> ({GOAL})"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        second = capsys.readouterr().out
        assert first == second


class TestWitness:
    def test_witness_printed_and_rechecked(self, counter_path, capsys):
        code = main(["witness", "--model", counter_path, "--state", "pqr",
                     "--formula", f"<[{{a,b}}]> ({GOAL})"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("true")
        assert "witness: " in out

    def test_silence_witness(self, train_path, capsys):
        code = main(["witness", "--model", train_path, "--state", "w",
                     "--formula", "<{a,b}, top> (~K c ~p & ~K c p)"])
        assert code == 0
        out = capsys.readouterr().out
        assert "witness: " in out and "none" not in out

    def test_not_quantified(self, train_path, capsys):
        code = main(["witness", "--model", train_path, "--state", "w",
                     "--formula", "K a ~p"])
        assert code == 2


class TestContract:
    def test_writes_quotient_and_map(self, tmp_path, capsys):
        doc = {
            "agents": ["a"],
            "atoms": ["p"],
            "states": ["x", "y"],
            "valuation": {"x": [], "y": []},
            "partitions": {"a": [["x"], ["y"]]},
            "designated": "y",
        }
        src = tmp_path / "twin.model"
        src.write_text(json.dumps(doc))
        out = tmp_path / "contracted.model"
        code = main(["contract", "--model", str(src), "--out", str(out)])
        assert code == 0
        quotient = parse_model(out.read_text())
        assert quotient.states == ("x",)
        mapping = capsys.readouterr().out
        assert "y -> x" in mapping

    def test_contracted_model_round_trips(self, counter_path, tmp_path, capsys):
        out = tmp_path / "out.model"
        main(["contract", "--model", counter_path, "--out", str(out)])
        from corgal import counterexample_model

        assert models_equal(parse_model(out.read_text()), counterexample_model())


class TestTranslate:
    def test_example(self, capsys):
        code = main(["translate", "--formula", "[! p] K a p"])
        assert code == 0
        assert capsys.readouterr().out.strip() == "p -> K a (p -> p)"

    def test_group_operator_rejected(self, capsys):
        code = main(["translate", "--formula", "[{a}] p"])
        assert code == 2


class TestSuite:
    def test_repro_suite(self, capsys):
        code = main(["suite", "repro"])
        assert code == 0
        out = capsys.readouterr().out
        assert "suite repro" in out
        assert '"passed": true' in out

    def test_small_axiom_suite(self, capsys):
        code = main(["suite", "axioms", "--count", "3", "--seed", "1"])
        assert code == 0

    def test_unknown_suite_rejected(self, capsys):
        with pytest.raises(SystemExit):
            main(["suite", "nonsense"])
