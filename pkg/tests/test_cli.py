import json

import pytest

from glpstar.cli import run
from glpstar.kripke import check_jstar_frame, check_strong_persistence, model_check
from glpstar.parsing import parse_formula, parse_model


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestDecideCommand:
    def test_theorem(self, capsys):
        code, out, _ = invoke(capsys, "decide", "--system", "glpstar", "<1>p:1 -> p:1")
        assert code == 0
        assert out.strip().splitlines()[0] == "theorem"

    def test_nontheorem_with_files(self, capsys, tmp_path):
        cm = tmp_path / "cm.model"
        dot = tmp_path / "cm.dot"
        code, out, _ = invoke(
            capsys, "decide", "--system", "jstar",
            "--countermodel", str(cm), "--dot", str(dot), "<1>p -> <0>p",
        )
        assert code == 1
        assert out.strip().splitlines()[0] == "non-theorem"
        model = parse_model(cm.read_text())
        assert len(model.worlds) == 2
        assert check_jstar_frame(model) == []
        assert check_strong_persistence(model) == []
        assert not model_check(model, model.root, parse_formula("~<1>p | <0>p"))
        assert dot.read_text().startswith("digraph")
        # the emitted file re-validates and re-falsifies through the CLI too
        code, out, _ = invoke(capsys, "validate", "--model", str(cm))
        assert code == 0 and out.strip() == "valid"
        code, out, _ = invoke(
            capsys, "modelcheck", "--model", str(cm), "--world", model.root, "~<1>p | <0>p"
        )
        assert code == 1 and out.strip() == "false"

    def test_json_format(self, capsys):
        code, out, _ = invoke(
            capsys, "decide", "--system", "glpstar", "--format", "json", "<0>T"
        )
        assert code == 1
        payload = json.loads(out)
        assert payload["verdict"] == "non-theorem"
        assert payload["countermodel"]["worlds"] == ["w0"]
        assert payload["stats"]["candidates"] > 0

    def test_formula_file(self, capsys, tmp_path):
        path = tmp_path / "batch.formulas"
        path.write_text("# two queries\n<1>p:1 -> p:1\n<0>T\n")
        code, out, _ = invoke(capsys, "decide", "--system", "glpstar", f"@{path}")
        assert code == 1
        lines = out.strip().splitlines()
        assert lines[0].startswith("theorem")
        assert lines[1].startswith("non-theorem")

    def test_bad_formula_usage_error(self, capsys):
        code, _, err = invoke(capsys, "decide", "--system", "glpstar", "p &")
        assert code == 2
        assert "error" in err

    def test_resource_limit_exit(self, capsys):
        code, _, err = invoke(
            capsys, "decide", "--system", "glpstar", "--candidate-cap", "2",
            "<0>p & <1>q",
        )
        assert code == 3
        assert "resource" in err

    def test_verbose_stats(self, capsys):
        code, _, err = invoke(
            capsys, "decide", "--system", "glpstar", "--verbose", "<1>p -> <0>p"
        )
        assert code == 0
        assert "candidates" in err


class TestOtherCommands:
    def test_sort(self, capsys):
        code, out, _ = invoke(capsys, "sort", "~p:2")
        assert code == 0 and out.strip() == "3"

    def test_sort_omega(self, capsys):
        code, out, _ = invoke(capsys, "sort", "~p")
        assert code == 0 and out.strip() == "w"

    def test_closure(self, capsys):
        code, out, _ = invoke(capsys, "closure", "<1>p:0")
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 9  # eight members plus the level line
        assert lines[-1] == "levels: 1"

    def test_reduce(self, capsys):
        code, out, _ = invoke(capsys, "reduce", "--kind", "m", "<2>p & <0>q")
        assert code == 0
        assert out.strip() == "(~<1>q | <0>q) & (~<2>q | <0>q)"

    def test_reduce_rtheta_defaults_to_occurring(self, capsys):
        code, out, _ = invoke(capsys, "reduce", "--kind", "rtheta", "<0>v:0")
        assert code == 0
        assert out.strip() == "~<0>v:0 | v:0"

    def test_modelcheck_and_validate(self, capsys, tmp_path):
        path = tmp_path / "m.model"
        path.write_text("worlds a b\nrel 1: a b\nval p:w = {b}\n")
        code, out, _ = invoke(capsys, "modelcheck", "--model", str(path), "--world", "a", "<1>p")
        assert code == 0 and out.strip() == "true"
        code, out, _ = invoke(capsys, "modelcheck", "--model", str(path), "<1>p")
        assert code == 1 and out.strip() == "false"
        code, out, _ = invoke(capsys, "validate", "--model", str(path))
        assert code == 0 and out.strip() == "valid"

    def test_validate_reports_violations(self, capsys, tmp_path):
        path = tmp_path / "bad.model"
        path.write_text("worlds a\nrel 0: a a\n")
        code, out, _ = invoke(capsys, "validate", "--model", str(path))
        assert code == 1
        assert "irreflexivity" in out

    def test_checkproof(self, capsys, tmp_path):
        good = tmp_path / "good.proof"
        good.write_text(
            "system glpsstar\ngoal <0>T\n"
            "1. T -> <0>T ; ax refl\n2. T ; ax taut\n3. <0>T ; mp 2 1\n"
        )
        code, out, _ = invoke(capsys, "checkproof", str(good))
        assert code == 0 and out.strip() == "accepted"
        bad = tmp_path / "bad.proof"
        bad.write_text("system jstar\ngoal <1>p -> <0>p\n1. <1>p -> <0>p ; ax mono\n")
        code, out, _ = invoke(capsys, "checkproof", str(bad))
        assert code == 1 and out.startswith("rejected at line 1")

    def test_oracle(self, capsys):
        code, out, _ = invoke(capsys, "oracle", "--max-worlds", "2", "<0>T")
        assert code == 1
        assert "countermodel found" in out
        code, out, _ = invoke(capsys, "oracle", "--max-worlds", "2", "T")
        assert code == 0
        assert "no countermodel" in out

    def test_json_agreement_with_text(self, capsys):
        code_t, out_t, _ = invoke(capsys, "decide", "--system", "glpsstar", "<0>T")
        code_j, out_j, _ = invoke(
            capsys, "decide", "--system", "glpsstar", "--format", "json", "<0>T"
        )
        assert code_t == code_j == 0
        assert json.loads(out_j)["verdict"] == out_t.strip()

    def test_usage_error_unknown_command(self, capsys):
        assert run(["frobnicate"]) == 2
