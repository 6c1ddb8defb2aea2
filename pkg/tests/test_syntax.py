import pytest
from hypothesis import given
from hypothesis import strategies as st

from effinsep.metamath import canonical, gn, parse, show, ungn
from effinsep.metamath.prover import entails
from effinsep.metamath.syntax import Not, Pred, SyntaxError_, free_vars, num


def test_known_codes():
    assert gn(parse("P(0)")) == 0
    assert gn(parse("P(5)")) == 40
    assert gn(parse("~P(7)")) == 64 * 7 + 2
    assert ungn(40) == Pred(num(5))


@given(st.integers(0, 10**6), st.sampled_from(["L0SP", "LR"]))
def test_numbering_is_bijective(c, lang):
    f = ungn(c, lang)
    assert not free_vars(f)
    assert gn(f, lang) == c


@given(st.integers(0, 10**5), st.sampled_from(["L0SP", "LR"]))
def test_show_parse_round_trip(c, lang):
    f = ungn(c, lang)
    assert canonical(parse(show(f)), lang) == f


def test_parse_forms():
    f = parse("all x.(P(x) -> ex y.y=x+2)")
    assert show(canonical(f)) == "all x0.(P(x0) -> ex x1.x1=x0+2)"
    assert parse("~(1=4)") == Not(parse("1=4"))
    assert show(parse("P(S(S(0)))")) == "P(2)"
    assert gn(parse("all x.R(x,x)"), "LR") == gn(parse("all y.R(y,y)"), "LR")


@pytest.mark.parametrize("text", ["P(x)", "all x.", "P(0", "2 ? 3"])
def test_parse_errors(text):
    with pytest.raises(SyntaxError_):
        parse(text)


def test_mixed_languages_have_no_code():
    with pytest.raises(SyntaxError_):
        gn(parse("R(0,1)"))
    with pytest.raises(SyntaxError_):
        gn(parse("all x.(R(x,x) & P(x))"))


# -- prover --------------------------------------------------------------------


@pytest.mark.parametrize(
    "text",
    [
        "(P(0) | ~P(0))",
        "(all x.P(x) -> P(3))",
        "(P(2) -> ex x.P(x))",
        "all x.x=x",
        "(all x.(P(x) -> P(x+1)) -> (P(0) -> P(2)))",
        "(ex x.all y.R(x,y) -> all y.ex x.R(x,y))",
        "all x.all y.(x=y -> (P(x) -> P(y)))",
    ],
)
def test_tautologies(text):
    proved, used = entails([], parse(text), 10**4)
    assert proved and used > 0


@pytest.mark.parametrize("text", ["P(0)", "(P(0) -> P(1))", "(all y.ex x.R(x,y) -> ex x.all y.R(x,y))"])
def test_non_theorems(text):
    assert entails([], parse(text), 2000)[0] is False


def test_premises_and_fuel():
    goal = parse("P(3)")
    prem = [parse("P(1)"), parse("all x.(P(x) -> P(x+2))")]
    assert entails(prem, goal, 10**4)[0]
    assert entails(prem, goal, 1)[0] is False
    assert entails([parse("~1=1")], goal, 100)[0]  # inconsistent premises
