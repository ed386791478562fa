import io
import json

import pytest

from shuffle_pbwd.cli import ExpressionError, parse_expression, run
from shuffle_pbwd.rootsys import RootSystem
from shuffle_pbwd.rootvec import FreeElement
from shuffle_pbwd.shuffle import ShuffleContext, ShuffleElement
from shuffle_pbwd.specmaps import SpecResult

G2 = ShuffleContext(RootSystem("G"))


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_roots_g2():
    code, out, _ = call("roots", "--type", "G2", "--json")
    assert code == 0
    assert [r["root"] for r in json.loads(out)["roots"]] == ["[1]", "[1,2]", "[1,2,1,2,2]", "[1,2,2]", "[1,2,2,2]", "[2]"]


def test_eval_psi_commutator():
    code, out, _ = call("eval", "--type", "G2", "--expr", "comm(e[1,0], e[2,0]; v^3)", "--psi")
    assert code == 0
    data = json.loads(out)
    assert data["numerator"] == {"terms": [{"exps": {"x:1:1": 1}, "coef": "1 - v^6"}]}
    assert ShuffleElement.from_json(data).to_json() == data


def test_eval_free_round_trip():
    code, out, _ = call("eval", "--type", "B", "--n", "2", "--expr", "2*e[1,0]*e[2,1] - v^-2*e[2,1]*e[1,0]", "--json")
    assert code == 0
    data = json.loads(out)
    ctx = ShuffleContext(RootSystem("B", 2))
    assert FreeElement.from_json(ctx, data["free"]).to_json() == data["free"]


def test_psi_round_trip_rational():
    code, out, _ = call("psi", "--type", "B", "--n", "2", "--flavor", "rational", "--expr", "x[1,0]*x[2,1]", "--json")
    assert code == 0
    data = json.loads(out)
    assert ShuffleElement.from_json(data).to_json() == data


def test_specialize_round_trip():
    code, out, _ = call("specialize", "--type", "G2", "--expr", "comm(e[1,0], e[2,0]; v^3)", "--d", "[1,2]:1", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["poly"]["terms"]
    assert SpecResult.from_json(data).to_json() == data


def test_kp():
    code, out, _ = call("kp", "--type", "G2", "--k", "1,2", "--json")
    assert code == 0
    assert len(json.loads(out)["partitions"]) == 3


def test_verify_exit_codes():
    code, out, _ = call("verify", "--suite", "diagonal", "--type", "B", "--n", "2", "--samples", "1", "--json")
    assert code == 0
    assert json.loads(out)["verdict"] == "pass"


def test_rtt_exit_codes():
    assert call("rtt", "ybe", "--n", "2", "--trials", "1")[0] == 0
    assert call("rtt", "ybe", "--n", "2", "--trials", "1", "--perturb")[0] == 1


def test_usage_errors_exit_2():
    assert call("roots")[0] == 2
    assert call("verify", "--suite", "diagonal", "--type", "B", "--n", "2", "--window", "3:1")[0] == 2
    assert call("kp", "--type", "G2", "--k", "1,2,3")[0] == 2


@pytest.mark.parametrize(
    "text,pos",
    [("e[1,0] + ", 9), ("e[1,0] * (e[2,0]", 16), ("e[3,0]", 2), ("hbar*e[1,0]", 0), ("e[1,0] $ e[2,0]", 7)],
)
def test_parse_error_positions(text, pos):
    with pytest.raises(ExpressionError) as info:
        parse_expression(G2, text)
    assert info.value.pos == pos
    assert f"position {pos}" in str(info.value)


def test_parse_error_reported_on_stderr():
    code, out, err = call("eval", "--type", "G2", "--expr", "e[1,0] + ")
    assert code == 2
    assert out == ""
    assert "parse error at position 9" in err


def test_expression_grammar():
    E = parse_expression(G2, "(e[1,0] + 1/2*e[1,1]) * v^(-3) * e[2,0]")
    assert len(E.terms) == 2
    R = ShuffleContext(RootSystem("G"), "rational")
    assert parse_expression(R, "hbar*x[1,0]").terms
