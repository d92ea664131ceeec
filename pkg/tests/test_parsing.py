import random

import pytest

from glpstar.formulas import OMEGA, And, Dia, Neg, Or, Var, TOP, desugar
from glpstar.kripke import KripkeModel
from glpstar.parsing import (
    ParseError,
    export_dot,
    parse_formula,
    parse_formula_file,
    parse_model,
    render_formula,
    render_model,
)
from conftest import gen_sorted_formula


class TestParseFormula:
    def test_implication_desugars(self):
        assert parse_formula("<1>p:0 -> p:0") == Or(Neg(Dia(1, Var("p", 0))), Var("p", 0))

    def test_box_desugars(self):
        assert parse_formula("[2]~q:w") == Neg(Dia(2, Neg(Neg(Var("q", OMEGA)))))

    def test_sort_conflict(self):
        with pytest.raises(ParseError) as err:
            parse_formula("p:1 & p:2")
        assert "sorts" in str(err.value)

    def test_bare_variable_defaults_to_omega(self):
        assert parse_formula("p") == Var("p", OMEGA)

    def test_precedence(self):
        assert parse_formula("a & b | c") == Or(And(Var("a"), Var("b")), Var("c"))
        assert parse_formula("a | b & c") == Or(Var("a"), And(Var("b"), Var("c")))
        # implication associates to the right
        f = parse_formula("a -> b -> c")
        assert f == desugar(parse_formula("a -> (b -> c)"))

    def test_prefix_binds_tightest(self):
        assert parse_formula("~a & b") == And(Neg(Var("a")), Var("b"))
        assert parse_formula("<1>a | b") == Or(Dia(1, Var("a")), Var("b"))

    def test_unicode_aliases(self):
        assert parse_formula("◊1 p:0") == Dia(1, Var("p", 0))
        assert parse_formula("¬p ∧ ⊤") == And(Neg(Var("p")), TOP)

    def test_error_span_inside_input(self):
        text = "p & ???"
        with pytest.raises(ParseError) as err:
            parse_formula(text)
        span = err.value.span
        assert 0 <= span.start <= span.end <= len(text.encode())

    def test_error_span_on_unclosed_paren(self):
        with pytest.raises(ParseError) as err:
            parse_formula("(p & q")
        assert err.value.span.start <= len("(p & q".encode())

    def test_error_spans_always_inside_input(self):
        bad_inputs = [
            "", "p &", "& p", "p | | q", "<>p", "<1 p", "[2 p", "p:", "p:x",
            "p q", "(p", "p)", "p -", "~", "p & (q | )", "p:1 & p:w", "日本",
        ]
        for text in bad_inputs:
            with pytest.raises(ParseError) as err:
                parse_formula(text)
            span = err.value.span
            assert 0 <= span.start <= span.end <= len(text.encode("utf-8")), text

    def test_formula_file(self):
        text = "# corpus\n<0>T\n\np:1 -> p:1  # trailing comment\n"
        formulas = parse_formula_file(text)
        assert formulas == [Dia(0, TOP), Or(Neg(Var("p", 1)), Var("p", 1))]


class TestRenderFormula:
    def test_diamond(self):
        assert render_formula(Dia(1, Var("p", 0))) == "<1>p:0"

    def test_negated_conjunction(self):
        assert render_formula(Neg(And(Var("p", 0), Var("q", 0)))) == "~(p:0 & q:0)"

    def test_top(self):
        assert render_formula(TOP) == "T"

    def test_round_trip_random(self):
        rng = random.Random(11)
        for _ in range(300):
            f = gen_sorted_formula(rng, depth=4)
            assert parse_formula(render_formula(f)) == f


MODEL_TEXT = """
# two worlds
worlds a b
rel 1: a b
val p:0 = {b}
val q:w = {}
root a
"""


class TestParseModel:
    def test_basic(self):
        m = parse_model(MODEL_TEXT)
        assert m.worlds == ("a", "b")
        assert m.relations == {1: frozenset({("a", "b")})}
        assert m.valuation == {"p": frozenset({"b"}), "q": frozenset()}
        assert m.sorts == {"p": 0, "q": OMEGA}
        assert m.root == "a"

    def test_undeclared_world_in_relation(self):
        with pytest.raises(ParseError):
            parse_model("worlds a b\nrel 0: a c\n")

    def test_duplicate_world(self):
        with pytest.raises(ParseError):
            parse_model("worlds a a\n")

    def test_duplicate_valuation(self):
        with pytest.raises(ParseError):
            parse_model("worlds a\nval p:0 = {a}\nval p:1 = {}\n")

    def test_round_trip(self):
        m = parse_model(MODEL_TEXT)
        assert parse_model(render_model(m)) == m

    def test_round_trip_random(self):
        rng = random.Random(12)
        from conftest import gen_persistent_model

        for _ in range(25):
            m = gen_persistent_model(rng)
            assert parse_model(render_model(m)) == m


class TestExportDot:
    def test_single_world(self):
        m = KripkeModel(worlds=("a",), relations={}, valuation={}, sorts={})
        dot = export_dot(m)
        assert dot.startswith("digraph")
        assert '"a"' in dot

    def test_edge_label(self):
        m = KripkeModel(worlds=("a", "b"), relations={1: {("a", "b")}}, valuation={}, sorts={})
        dot = export_dot(m)
        assert '"a" -> "b" [label="1"]' in dot

    def test_highlight(self):
        m = KripkeModel(worlds=("a", "b"), relations={}, valuation={}, sorts={})
        dot = export_dot(m, highlight="a")
        a_line = next(line for line in dot.splitlines() if line.strip().startswith('"a"'))
        b_line = next(line for line in dot.splitlines() if line.strip().startswith('"b"'))
        assert "filled" in a_line and "filled" not in b_line

    def test_true_variables_annotated(self):
        m = KripkeModel(worlds=("a",), relations={}, valuation={"p": {"a"}}, sorts={"p": 0})
        assert "{p}" in export_dot(m)
