import json
from fractions import Fraction

import pytest

from pseudoquant.exprparse import (
    ExprSyntaxError,
    dump_problem,
    load_problem,
    one_form_entries,
    parse_one_form,
    parse_poly,
    standard_problem,
)
from pseudoquant.symcore import ChartError, ChartSpec, OneForm, Poly, Scalar, standard_potential


@pytest.fixture
def chart():
    return ChartSpec((("a1", "b1"),))


class TestParsePoly:
    def test_basic(self, chart):
        alpha, beta = Poly.var(chart, "a1"), Poly.var(chart, "b1")
        got = parse_poly("(1/2)*a1^2 + hbar*b1", chart)
        want = alpha * alpha * Poly.const(chart, Fraction(1, 2)) + Poly.hbar(chart) * beta
        assert got == want

    def test_imaginary_unit_and_decimals(self, chart):
        got = parse_poly("i*a1 - 0.25", chart)
        want = Poly.var(chart, "a1").scale(Scalar(0, 1)) - Poly.const(chart, Fraction(1, 4))
        assert got == want

    def test_unary_and_precedence(self, chart):
        assert parse_poly("-a1^2", chart) == -(Poly.var(chart, "a1") ** 2)
        assert parse_poly("2+3*4", chart) == Poly.const(chart, 14)
        assert parse_poly("(2+3)*4", chart) == Poly.const(chart, 20)

    def test_right_associative_power(self, chart):
        assert parse_poly("a1^2^3", chart) == Poly.var(chart, "a1") ** 8

    def test_str_round_trip(self, chart):
        alpha, beta = Poly.var(chart, "a1"), Poly.var(chart, "b1")
        cases = [
            alpha.scale(Scalar(1, -1)),
            alpha * beta * Poly.hbar(chart).scale(Scalar(Fraction(-3, 2))),
            beta**3 - Poly.const(chart, Fraction(5, 7)),
            Poly.zero(chart),
        ]
        for p in cases:
            assert parse_poly(str(p), chart) == p

    def test_errors_carry_columns(self, chart):
        with pytest.raises(ExprSyntaxError) as e:
            parse_poly("a1 + + ", chart)
        assert e.value.column == 8
        with pytest.raises(ExprSyntaxError) as e:
            parse_poly("a1 $ b1", chart)
        assert e.value.column == 4
        assert "column 4" in str(e.value)
        with pytest.raises(ExprSyntaxError):
            parse_poly("zz + 1", chart)
        with pytest.raises(ExprSyntaxError):
            parse_poly("(a1", chart)
        with pytest.raises(ExprSyntaxError):
            parse_poly("1.2.3", chart)

    def test_division_rules(self, chart):
        assert parse_poly("a1/2", chart) == Poly.var(chart, "a1").scale(Scalar(Fraction(1, 2)))
        with pytest.raises(ExprSyntaxError):
            parse_poly("a1/b1", chart)
        with pytest.raises(ExprSyntaxError):
            parse_poly("a1/0", chart)

    def test_power_rules(self, chart):
        with pytest.raises(ExprSyntaxError):
            parse_poly("a1^b1", chart)
        with pytest.raises(ExprSyntaxError):
            parse_poly("a1^(1/2)", chart)
        with pytest.raises(ExprSyntaxError):
            parse_poly("a1^-1", chart)


class TestOneForm:
    def test_standard_keyword(self, chart):
        assert parse_one_form("standard", chart) == standard_potential(chart)

    def test_entries_round_trip(self, chart):
        theta = OneForm.from_dict(
            chart, {"db1": Poly.var(chart, "a1") ** 2, "da1": Poly.const(chart, 3)}
        )
        assert parse_one_form(one_form_entries(theta), chart) == theta

    def test_bad_basis_name(self, chart):
        with pytest.raises(ChartError):
            parse_one_form([["a1", "q1"]], chart)
        with pytest.raises(ChartError):
            parse_one_form([["a1"]], chart)


class TestProblemFiles:
    def test_standard_problem(self):
        prob = standard_problem()
        assert prob.chart.coords == ("p1", "q1")
        assert prob.connection.theta == standard_potential(prob.chart)
        assert prob.polarisation is not None

    def test_load_dump_load(self):
        data = {
            "chart": {"pairs": [["p1", "q1"]]},
            "theta": "standard",
            "observables": {"H": "(1/2)*p1^2 + q1^2", "lin": "p1 - i*q1"},
            "pullback": {
                "target": {"pairs": [["z", "w"]]},
                "theta": "standard",
                "map": {"z": "2*p1", "w": "q1"},
            },
            "polarisation": True,
        }
        prob = load_problem(data)
        again = load_problem(dump_problem(prob))
        assert again.chart == prob.chart
        assert again.connection.theta == prob.connection.theta
        assert again.observables == prob.observables
        assert again.pullback.map.comps == prob.pullback.map.comps
        assert again.polarisation is not None

    def test_load_from_json_text_and_file(self, tmp_path):
        data = {"chart": {"pairs": [["a1", "b1"]]}, "observables": {"x": "b1^2"}}
        text = json.dumps(data)
        from_text = load_problem(text)
        path = tmp_path / "prob.json"
        path.write_text(text)
        from_file = load_problem(path)
        assert from_text.observables == from_file.observables
        assert from_text.chart == from_file.chart

    def test_missing_map_coordinate(self):
        with pytest.raises(ChartError):
            load_problem(
                {
                    "chart": {"pairs": [["p1", "q1"]]},
                    "pullback": {"target": {"pairs": [["z", "w"]]}, "map": {"z": "p1"}},
                }
            )

    def test_empty_chart_rejected(self):
        with pytest.raises(ChartError):
            load_problem({"chart": {"pairs": []}})
