import json
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfrenorm.cli import RunConfig, cmd_beta, cmd_birkhoff, cmd_coproduct, main
from hopfrenorm.errors import CoverageError, ParseError
from hopfrenorm.io import (
    Report,
    character_document,
    data_path,
    load_catalog,
    parse_character,
)
from hopfrenorm.hopf import HopfAlgebra
from hopfrenorm.series import LaurentSeries

from helpers import algebra, rand_character

H2 = algebra("phi3_two_loop")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def structured(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "structured")
    assert code == 0
    return json.loads(out)


# -- subcommands on bundled data --------------------------------------------------------------

def test_coproduct(capsys):
    doc = structured(capsys, "coproduct", "--graph", "se1", "--graph", "se2")
    assert len(doc["results"]["se1"]) == 2
    terms = {(tuple(t["left"]), tuple(t["right"])): t["coefficient"] for t in doc["results"]["se2"]}
    assert terms == {((), ("se2",)): "1", (("se2",), ()): "1", (("se1",), ("se1",)): "1"}


def test_unknown_graph_name(capsys):
    code, _, err = run(capsys, "coproduct", "--graph", "nope")
    assert code == CoverageError.exit_code and "nope" in err


def test_antipode(capsys):
    doc = structured(capsys, "antipode", "--graph", "se2")
    got = {tuple(t["monomial"]): t["coefficient"] for t in doc["results"]["se2"]}
    assert got == {("se2",): "-1", ("se1", "se1"): "1"}


def test_birkhoff_primitive(capsys):
    doc = structured(capsys, "birkhoff", "--catalog", "phi3_one_loop", "--scheme", "primitive_one_loop")
    se1 = doc["results"]["se1"]
    assert se1["minus"]["series"] == [[-1, ["-1"]]]
    assert se1["plus"]["series"] == []
    assert doc["verdicts"]["reconstruction"] is True


def test_birkhoff_counit_scheme(tmp_path, capsys):
    path = tmp_path / "eps.json"
    path.write_text(json.dumps({"scheme_name": "eps", "truncation_order": 3,
                                "values": {n: [] for n in H2.generators()}}))
    doc = structured(capsys, "birkhoff", "--scheme", str(path))
    for r in doc["results"].values():
        assert r["minus"]["series"] == [] and r["plus"]["series"] == []


def test_birkhoff_missing_generator(tmp_path, capsys):
    path = tmp_path / "partial.json"
    path.write_text(json.dumps({"scheme_name": "p", "truncation_order": 3, "values": {"se1": [[-1, ["1"]]]}}))
    code, _, err = run(capsys, "birkhoff", "--scheme", str(path))
    assert code == 3 and "tri" in err


def test_beta_routes(capsys):
    doc = structured(capsys, "beta", "--catalog", "phi3_one_loop", "--scheme", "primitive_one_loop")
    assert doc["results"]["se1"] == {"residue": "1", "limit": "1"}
    assert doc["verdicts"]["routes_agree"] is True
    doc = structured(capsys, "beta", "--scheme", "holomorphic")
    assert {r["residue"] for r in doc["results"].values()} == {"0"}
    doc = structured(capsys, "beta", "--scheme", "nonlocal_counterexample")
    assert doc["verdicts"]["equisingular"] is False
    assert doc["results"]["se1"]["limit"] == "not-applicable"
    assert doc["results"]["se1"]["residue"] == "1"


def test_connection(capsys):
    doc = structured(capsys, "connection", "--catalog", "phi3_one_loop", "--scheme", "primitive_one_loop")
    se1 = doc["results"]["se1"]
    assert se1["a"]["series"] == [[-2, ["-1"]]] and se1["b"]["series"] == [[-1, ["1"]]]
    assert se1["flatness_residual"]["series"] == []
    code, _, err = run(capsys, "connection", "--scheme", "dimreg_toy", "--truncation", "0")
    assert code == ParseError.exit_code and "truncation" in err


def test_check_equisingular(capsys):
    assert structured(capsys, "check-equisingular", "--scheme", "dimreg_toy")["verdicts"]["equisingular"] is True
    doc = structured(capsys, "check-equisingular", "--scheme", "nonlocal_counterexample")
    assert doc["verdicts"]["equisingular"] is False
    assert doc["results"]["se1"]["ell_free"] is False


def test_gauge_compare(capsys):
    doc = structured(capsys, "gauge-compare", "--scheme", "dimreg_toy", "--scheme2", "dimreg_toy_twisted")
    v = doc["verdicts"]
    assert v["equivalent"] and v["counterterm_match"] and v["beta_match"] is True
    witness = parse_character(v["witness"], H2).character
    twist = parse_character(json.loads(data_path("holomorphic").read_text()), H2).character
    assert witness == twist
    doc = structured(capsys, "gauge-compare", "--scheme", "dimreg_toy", "--scheme2", "dimreg_toy")
    assert all(s == [] for s in doc["verdicts"]["witness"]["values"].values())
    doc = structured(capsys, "gauge-compare", "--scheme", "dimreg_toy", "--scheme2", "nonlocal_counterexample")
    assert doc["verdicts"]["equivalent"] is False and "se1" in doc["results"]["diffs"]


def test_gauge_compare_catalog_mismatch(tmp_path, capsys):
    code, _, err = run(capsys, "gauge-compare", "--catalog", "phi3_three_loop",
                       "--scheme", "dimreg_toy", "--scheme2", "dimreg_toy_twisted")
    assert code == 3


def test_human_output_and_decimal(capsys):
    code, out, _ = run(capsys, "birkhoff", "--scheme", "dimreg_toy", "--graph", "se2", "--decimal")
    assert code == 0 and "0.166667" in out and "took" in out
    code, out, _ = run(capsys, "beta", "--scheme", "dimreg_toy")
    assert "[routes_agree] True" in out


def test_missing_scheme_flag(capsys):
    code, _, err = run(capsys, "beta")
    assert code == ParseError.exit_code and "--scheme" in err


def test_argparse_errors_exit_two(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2


def test_resource_limit_exit_code(capsys):
    code, _, _ = run(capsys, "birkhoff", "--scheme", "dimreg_toy", "--pole-cap", "1")
    assert code == 4


# -- determinism and round trips ----------------------------------------------------------------------

ALL_COMMANDS = [
    ["coproduct"],
    ["antipode"],
    ["birkhoff", "--scheme", "dimreg_toy"],
    ["beta", "--scheme", "dimreg_toy"],
    ["connection", "--scheme", "dimreg_toy"],
    ["check-equisingular", "--scheme", "dimreg_toy"],
    ["gauge-compare", "--scheme", "dimreg_toy", "--scheme2", "dimreg_toy_twisted"],
]


@pytest.mark.parametrize("argv", ALL_COMMANDS, ids=lambda a: a[0])
def test_console_script_is_deterministic(argv):
    cmd = [sys.executable, "-m", "hopfrenorm.cli", *argv, "--format", "structured"]
    first = subprocess.run(cmd, capture_output=True, check=True)
    second = subprocess.run(cmd, capture_output=True, check=True)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    report = Report.from_json(first.stdout.decode())
    assert report.to_json().encode() == first.stdout


def test_report_round_trip():
    r = cmd_beta(RunConfig("beta", schemes=["dimreg_toy"]))
    again = Report.from_json(r.to_json())
    assert again == r and again.to_json() == r.to_json()
    r = cmd_coproduct(RunConfig("coproduct"))
    assert Report.from_json(r.to_json()) == r
    r = cmd_birkhoff(RunConfig("birkhoff", schemes=["dimreg_toy"], truncation=2))
    assert r.inputs["truncation"] == 2
    assert Report.from_json(r.to_json()) == r


def test_report_from_json_errors():
    with pytest.raises(ParseError):
        Report.from_json("[1, 2]")
    with pytest.raises(ParseError):
        Report.from_json("{")


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_character_file_round_trip(seed):
    g = rand_character(random.Random(seed), H2, ell=1)
    doc = character_document(g, "random")
    back = parse_character(json.dumps(doc), H2)
    assert back.scheme_name == "random" and back.truncation_order == g.order
    assert back.character == g
    assert character_document(back.character, "random") == doc


def test_character_file_errors():
    good = {"scheme_name": "s", "truncation_order": 2, "values": {n: [] for n in H2.generators()}}
    with pytest.raises(CoverageError):
        parse_character(dict(good, values={**good["values"], "nope": []}), H2)
    with pytest.raises(ParseError):
        parse_character({"scheme_name": "s", "values": {}}, H2)
    with pytest.raises(ParseError):
        parse_character(dict(good, truncation_order=-1), H2)
    with pytest.raises(ParseError):
        parse_character("not json", H2)


def test_truncation_flag_lowers_order():
    doc = json.loads(data_path("dimreg_toy").read_text())
    s = parse_character(doc, H2, truncation=2)
    assert s.truncation_order == 2
    assert s.character("se1") == LaurentSeries.monomial(-1, 1, 2)


def test_catalog_merge():
    merged = load_catalog([data_path("phi3_one_loop"), data_path("phi3_two_loop")])
    assert merged.names() == H2.catalog.names()
    assert HopfAlgebra(merged).antipode(H2.gen("se2")) == H2.antipode(H2.gen("se2"))
