"""Terms: construction, printing, parsing, substitution, enumeration."""

import pytest
from hypothesis import given, strategies as st

from bigsos.errors import ArityError, ParseError, UnknownOperatorError
from bigsos.terms import (App, Operator, Signature, UniversePolicy, Var,
                          check_term, enumerate_universe, is_closed, parse_term,
                          print_term, substitute, subterms, term_key, term_size,
                          variables)

SIG = Signature([
    Operator("f", 2),
    Operator("g", 1),
    Operator("h", 1, 1),   # one natural parameter
    Operator("c", 0),
    Operator("d", 0),
])


def t(text):
    return parse_term(text, SIG)


# --- construction and basics ---------------------------------------------------------


def test_signature_lookup():
    assert "f" in SIG
    assert "nope" not in SIG
    assert SIG["g"].arity == 1
    assert SIG.constants() == ("c", "d")
    with pytest.raises(KeyError):
        SIG["nope"]


def test_term_size_and_variables():
    term = t("f(g(c), x)")
    assert term_size(term) == 4
    assert variables(term) == frozenset({"x"})
    assert not is_closed(term)
    assert is_closed(t("f(c, d)"))


def test_subterms_preorder():
    term = t("f(g(c), d)")
    listed = [print_term(s) for s in subterms(term)]
    assert listed == ["f(g(c), d)", "g(c)", "c", "d"]


def test_check_term_rejects_bad_arity():
    with pytest.raises(ArityError):
        check_term(App("g", (), (App("c"), App("c"))), SIG)
    with pytest.raises(UnknownOperatorError):
        check_term(App("zzz", (), ()), SIG)


def test_term_key_total_order():
    terms = [t("f(c, d)"), t("c"), Var("x"), t("g(c)"), t("d")]
    ordered = sorted(terms, key=term_key)
    # smaller terms first; at equal size, App sorts before Var
    assert ordered == [t("c"), t("d"), Var("x"), t("g(c)"), t("f(c, d)")]


# --- printing and parsing ------------------------------------------------------------


def test_print_term_shapes():
    assert print_term(t("c")) == "c"
    assert print_term(t("f(c, g(d))")) == "f(c, g(d))"
    assert print_term(parse_term("h[3](c)", SIG)) == "h[3](c)"
    assert print_term(Var("x")) == "x"


def test_parse_rejects_garbage():
    for bad in ("", "f(c", "f(c,)", "q(c)", "f(c, d) extra", "g()"):
        with pytest.raises(ParseError):
            parse_term(bad, SIG)


def test_parse_param_arity_checked():
    with pytest.raises(ParseError):
        parse_term("h(c)", SIG)       # missing the [n] parameter
    with pytest.raises(ParseError):
        parse_term("g[1](c)", SIG)    # g takes no parameters


@st.composite
def closed_terms(draw, depth=3):
    if depth == 0:
        return App(draw(st.sampled_from(["c", "d"])))
    choice = draw(st.integers(0, 3))
    if choice == 0:
        return App(draw(st.sampled_from(["c", "d"])))
    if choice == 1:
        return App("g", (), (draw(closed_terms(depth=depth - 1)),))
    if choice == 2:
        return App("h", (draw(st.integers(0, 9)),),
                   (draw(closed_terms(depth=depth - 1)),))
    return App("f", (), (draw(closed_terms(depth=depth - 1)),
                         draw(closed_terms(depth=depth - 1))))


@given(closed_terms())
def test_print_parse_roundtrip(term):
    assert parse_term(print_term(term), SIG) == term


# --- substitution --------------------------------------------------------------------


def test_substitute_basic():
    term = t("f(x, g(y))")
    out = substitute(term, {"x": t("c"), "y": t("d")})
    assert out == t("f(c, g(d))")


def test_substitute_requires_total_binding():
    from bigsos.errors import UnboundVariableError
    with pytest.raises(UnboundVariableError):
        substitute(t("f(x, y)"), {"x": t("c")})


@given(closed_terms())
def test_substitute_identity_on_closed(term):
    assert substitute(term, {"x": App("d")}) == term


@given(closed_terms(), closed_terms())
def test_substitute_composes(a, b):
    # staged substitution (keeping y as itself first) equals the simultaneous one
    term = t("f(x, g(y))")
    seq = substitute(substitute(term, {"x": a, "y": Var("y")}), {"y": b})
    sim = substitute(term, {"x": a, "y": b})
    assert seq == sim


# --- universe enumeration ------------------------------------------------------------


def test_enumerate_universe_closure():
    seeds = [t("f(c, d)")]
    universe = enumerate_universe(SIG, seeds, UniversePolicy(max_count=50, max_size=6))
    # subterm-closed
    for term in universe:
        for sub in subterms(term):
            assert sub in universe
    assert t("f(c, d)") in universe
    assert t("c") in universe


def test_enumerate_universe_respects_bounds():
    universe = enumerate_universe(SIG, [t("c")],
                                  UniversePolicy(max_count=10, max_size=3))
    assert len(universe) <= 10
    assert all(term_size(u) <= 3 for u in universe)


def test_enumerate_universe_contains_all_small_terms():
    universe = enumerate_universe(SIG, [t("c")],
                                  UniversePolicy(max_count=500, max_size=3))
    # every closed unparameterized term of size <= 3 shows up
    for text in ("c", "d", "g(c)", "g(d)", "g(g(c))", "f(c, d)", "f(d, d)"):
        assert t(text) in universe


def test_enumerate_universe_deterministic():
    policy = UniversePolicy(max_count=40, max_size=5)
    one = enumerate_universe(SIG, [t("c"), t("d")], policy)
    two = enumerate_universe(SIG, [t("d"), t("c")], policy)
    assert one == two
