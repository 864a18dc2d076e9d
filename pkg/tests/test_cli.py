import io
import json
from pathlib import Path

import pytest

from pvspec.cli import run

FAMILY = str(Path(__file__).parent / "data" / "quartic_family.json")


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_expbound_bessel():
    code, out, _ = call("expbound", "--param", "a", "D^2+(1/x)*D+1-(a/x)^2")
    assert code == 0
    assert "N(L) = 1" in out


def test_dn():
    assert call("dn", "1")[:2] == (0, "64\n")
    assert call("dn", "2")[1].strip() == str(8**12)


def test_logindep_running_example():
    code, out, _ = call("logindep", "--quartic", "x^4+x+a", "--subst", "a=1,b=0", "b+eta", "b-eta")
    assert code == 0
    assert "verdict: independent" in out


def test_json_output_is_stable():
    args = ("genexp", "--param", "a", "--json", "D^2+(1/x)*D+1-(a/x)^2")
    first, second = call(*args), call(*args)
    assert first == second
    rec = json.loads(first[1])
    assert [p["point"] for p in rec["points"]] == ["0", "oo"]


def test_expsols_and_residues():
    code, out, _ = call("expsols", "--json", "D^2")
    assert json.loads(out)["solutions"] == ["0", "1/x"]
    code, out, _ = call("residues", "--json", "1/(x^2-2)")
    assert json.loads(out)["sum_of_traces"] == "0"


def test_adopen_and_jac():
    _, out, _ = call("adopen", "--param", "a,b", "--subst", "a=1,b=0", "--json", "(b^4+b+a)^2", "256*a^3-27")
    assert json.loads(out) == {"member": False, "witness": [229, -1], "values": ["1", "229"]}
    _, out, _ = call("jac", "--param", "a", "--adjoin", "s^2+3 as s", "--subst", "a=-(1+s)/4", "--json", "--", "-4*a", "1", "0", "1")
    assert json.loads(out)["order"] == 4


def test_gauge_relbound_verify():
    code, out, _ = call("gauge", "--json", '[["0","1"],["-1","-1/x"]]', "--lift", "det")
    assert json.loads(out)["logderivs"] == ["-1/x"]
    code, out, _ = call("relbound", "--json", '[["1/x"]]')
    assert json.loads(out)["N"] == 0
    assert call("verify", "logd(x^3)", "3/x")[0] == 0
    assert "identity holds" in call("verify", "logd(x^3)", "3/x")[1]


def test_family_check_lines():
    code, out, _ = call("family-check", "--json", FAMILY)
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["verdict"] for r in recs] == ["independent", "dependent", "independent", "DegenerateCurve"]
    assert recs[1]["certificate"]["d"] == [2, -2]


@pytest.mark.parametrize(
    "argv, name",
    [
        (("expbound", "D^2+*x"), "ParseError"),
        (("logindep", "--quartic", "x^4+x^2", "1/x"), "NotGenusOne"),
        (("expbound", "--param", "a", "--subst", "a=(", "D"), "ParseError"),
    ],
)
def test_errors_name_the_failure(argv, name):
    code, out, err = call(*argv)
    assert code == 1 and out == ""
    assert err.startswith(f"error: {name}")
