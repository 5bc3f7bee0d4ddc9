import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sephier.lang import (
    Alphabet,
    Automaton,
    Concat,
    Empty,
    Epsilon,
    Letter,
    RegexSyntaxError,
    Star,
    Union,
    accepts,
    compile,
    compile_regex,
    complement,
    concat,
    determinize,
    equivalent,
    is_empty,
    is_subword,
    left_quotient,
    load_language,
    minimize,
    parse_regex,
    product_intersect,
    regex_matches,
    right_quotient,
    shortest_word,
    union,
    upward_subword_closure,
    words_of,
)
from strategies import regexes, words

A = Alphabet.of("ab")
ALL6 = list(A.words(6))


def test_alphabet_contract():
    with pytest.raises(ValueError):
        Alphabet.of("")
    with pytest.raises(ValueError):
        Alphabet.of("aa")
    with pytest.raises(ValueError):
        Alphabet.of("aB")
    assert list(A.words(2)) == ["", "a", "b", "aa", "ab", "ba", "bb"]


def test_parse_examples():
    assert parse_regex("(ab)*", A) == Star(Concat(Letter("a"), Letter("b")))
    assert parse_regex("%e", A) == Epsilon()
    assert parse_regex("a|%0", A) == Union(Letter("a"), Empty())


@pytest.mark.parametrize("text,pos", [("(ab", 3), ("a|", 2), ("c", 0), ("a)", 1), ("%x", 0), ("*a", 0)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(RegexSyntaxError) as err:
        parse_regex(text, A)
    assert err.value.position == pos


def test_unknown_symbol_message():
    with pytest.raises(RegexSyntaxError, match="unknown symbol"):
        parse_regex("ac", A)


@given(regexes())
def test_pretty_print_round_trips(r):
    again = parse_regex(str(r), A)
    assert str(again) == str(r)
    assert all(regex_matches(again, w) == regex_matches(r, w) for w in A.words(5))


def test_compile_examples():
    assert not any(compile("%0", A).accepts(w) for w in ALL6)
    assert words_of(compile("%e", A), 6) == [""]
    ab = compile("(ab)*", A)
    for w in ["", "ab", "abab"]:
        assert ab.accepts(w)
    for w in ["a", "ba", "abba"]:
        assert not ab.accepts(w)


@given(regexes(max_leaves=10), words())
def test_compile_agrees_with_direct_matcher(r, w):
    assert compile_regex(r, A).accepts(w) == regex_matches(r, w)


@given(regexes())
def test_determinize_and_minimize_preserve_language(r):
    a = compile_regex(r, A)
    d = determinize(a)
    m = minimize(a)
    assert d.is_complete_dfa() and m.is_complete_dfa()
    assert m.state_count <= d.state_count
    for w in ALL6:
        assert d.accepts(w) == a.accepts(w) == m.accepts(w)


@given(regexes())
def test_complement_flips_membership(r):
    a = compile_regex(r, A)
    c = complement(a)
    assert all(c.accepts(w) != a.accepts(w) for w in ALL6)


@given(regexes(), regexes())
def test_boolean_operations(r1, r2):
    a, b = compile_regex(r1, A), compile_regex(r2, A)
    i, u = product_intersect(a, b), union(a, b)
    for w in A.words(5):
        assert i.accepts(w) == (a.accepts(w) and b.accepts(w))
        assert u.accepts(w) == (a.accepts(w) or b.accepts(w))


@given(regexes(max_leaves=6), regexes(max_leaves=6))
def test_concat_semantics(r1, r2):
    a, b = compile_regex(r1, A), compile_regex(r2, A)
    c = concat(a, b)
    for w in A.words(5):
        expected = any(a.accepts(w[:i]) and b.accepts(w[i:]) for i in range(len(w) + 1))
        assert c.accepts(w) == expected


def test_double_complement_examples():
    a = compile("(a|b)*a(a|b)*", A)
    assert equivalent(complement(complement(a)), a)


def test_quotient_examples():
    q = left_quotient(compile("(ab)*", A), "a")
    assert q.accepts("b") and q.accepts("bab") and not q.accepts("")
    assert is_empty(product_intersect(compile("(ab)*", A), compile("(a|b)*aa(a|b)*", A)))


@given(regexes(max_leaves=6))
def test_quotients_exhaustive(r):
    a = compile_regex(r, A)
    for w in A.words(3):
        lq, rq = left_quotient(a, w), right_quotient(a, w)
        for u in A.words(3):
            assert lq.accepts(u) == a.accepts(w + u)
            assert rq.accepts(u) == a.accepts(u + w)


def test_upward_closure_examples():
    up = upward_subword_closure(compile("ab", A))
    for w in A.words(6):
        assert up.accepts(w) == is_subword("ab", w)
    assert equivalent(upward_subword_closure(compile("%e", A)), compile("(a|b)*", A))
    assert equivalent(upward_subword_closure(compile("(ab)*", A)), compile("(a|b)*", A))


@given(regexes(max_leaves=6))
def test_upward_closure_is_upward_closed(r):
    up = upward_subword_closure(compile_regex(r, A))
    acc = [u for u in A.words(5) if up.accepts(u)]
    for u in acc:
        for v in A.words(6):
            if is_subword(u, v):
                assert up.accepts(v)


@given(regexes())
def test_emptiness_and_shortest_word(r):
    a = compile_regex(r, A)
    sw = shortest_word(a)
    assert is_empty(a) == (sw is None)
    if sw is not None:
        assert a.accepts(sw)
        assert not any(a.accepts(w) for w in A.words(len(sw) - 1)) if sw else True


def test_json_round_trip(tmp_path):
    data = {"alphabet": ["a", "b"], "states": 3, "initial": [0], "accepting": [2], "transitions": [[0, "a", 1], [1, "b", 2]]}
    a = Automaton.from_json(data)
    assert words_of(a, 4) == ["ab"]
    assert Automaton.from_json(a.to_json()).accepts("ab")
    p = tmp_path / "l.json"
    p.write_text(__import__("json").dumps(data))
    assert load_language(f"nfa:{p}", A).accepts("ab")
    with pytest.raises(ValueError):
        load_language("ab", A)


def test_automaton_validation():
    with pytest.raises(ValueError):
        Automaton.from_json({"alphabet": ["a"], "states": 1, "initial": [0], "accepting": [3], "transitions": []})
    with pytest.raises(ValueError):
        Automaton.from_json({"alphabet": ["a"], "states": 1, "initial": [0], "accepting": [], "transitions": [[0, "z", 0]]})


def test_is_subword():
    assert is_subword("", "")
    assert is_subword("ab", "aab")
    assert not is_subword("ab", "ba")
    for u, v in itertools.product(A.words(3), repeat=2):
        brute = any(
            "".join(v[i] for i in idx) == u for idx in itertools.combinations(range(len(v)), len(u))
        )
        assert is_subword(u, v) == brute
