import io
import json

import pytest

from effinsep.cli import main


@pytest.fixture
def cli(tmp_path):
    def call(*argv):
        out = io.StringIO()
        code = main(["--store", str(tmp_path), *argv], out)
        return code, out.getvalue()

    call.store = tmp_path
    return call


def test_pair_kleene(cli):
    code, text = cli("pair", "kleene")
    assert code == 0 and "pair kleene" in text and "UNPAIR" in text
    assert (cli.store / "pairs" / "kleene.json").exists()


def test_pair_value_needs_distinct_values(cli):
    assert cli("pair", "value", "0", "0")[0] == 2
    assert cli("pair", "value", "0", "1")[0] == 0


def test_pair_lift(cli):
    code, text = cli("pair", "lift", "--a", "5", "--b", "6")
    assert code == 0 and "lift" in text
    data = json.loads((cli.store / "pairs" / "lift-5-6.json").read_text())
    assert data["args"] == [[5], [6]]
    assert cli("pair", "lift", "--a", "5", "--b", "5")[0] == 2


def test_derive_route(cli):
    cli("pair", "kleene")
    code, text = cli("derive", "--from", "KP", "--to", "DU")
    assert code == 0
    hops = [line.split("[")[0].split() for line in text.splitlines() if line.startswith("  ")]
    assert hops == [["KP", "->", "CEI"], ["CEI", "->", "EI"], ["EI", "->", "WEI"], ["WEI", "->", "DU"]]


def test_derive_trivial_and_unknown(cli):
    cli("pair", "kleene")
    code, text = cli("derive", "--from", "EI", "--to", "EI")
    assert code == 0 and "0 edge(s)" in text
    assert cli("derive", "--from", "EI", "--to", "XYZ")[0] == 2


def test_verify_stored_witness(cli):
    cli("pair", "kleene")
    cli("derive", "--from", "KP", "--to", "EI")
    code, text = cli("verify", "--witness", "kleene-EI", "--fuel", "100000")
    assert code == 0 and text.rstrip().splitlines()[-1].startswith("PASS")
    rep = json.loads((cli.store / "reports" / "kleene-EI.json").read_text())
    assert len(rep) >= 3


@pytest.mark.parametrize("name", ["control-ei", "control-kp", "control-dg"])
def test_verify_broken_fixture(cli, name):
    code, text = cli("verify", "--witness", name)
    assert code == 1 and "FAIL" in text


def test_verify_zero_fuel(cli):
    code, text = cli("verify", "--witness", "control-kp", "--fuel", "0")
    assert code == 0 and "warning" in text and "unknown=" in text


def test_verify_missing_witness(cli):
    assert cli("verify", "--witness", "nope")[0] == 2


def test_independence_certifies(cli):
    code, text = cli("independence", "--A", "evens<=20", "--B", "odds<=20", "--fuel", "10000")
    assert code == 0
    assert "sentence P(21)" in text and "certified independent" in text


def test_independence_overlap(cli):
    assert cli("independence", "--A", "finite:1,2", "--B", "finite:2")[0] == 2


def test_independence_kleene_note(cli):
    code, text = cli("independence", "--A", "kleene:A", "--B", "kleene:B", "--fuel", "1000")
    assert code == 0 and "not oracle-certifiable" in text
