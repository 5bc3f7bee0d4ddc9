import pytest

from sephier.lang import Alphabet, compile, complement, is_empty, product_intersect, upward_subword_closure
from sephier.decide import LEVELS, decide_covering, decide_separation, level, sigma1_oracle

A = Alphabet.of("ab")
L = lambda t: compile(t, A)  # noqa: E731
AB = L("(ab)*")
NOT_AB = complement(AB)


def test_level_registry():
    assert set(LEVELS) == {"sigma1", "sigma2", "sigma3", "dd12", "dd32"}
    assert level("sigma3", A).name == "pbpol:AT"
    assert level("pol:DD0", A).kind == "pol"
    for bad in ("sigma9", "foo:AT", "pol"):
        with pytest.raises(ValueError):
            level(bad, A)


@pytest.mark.parametrize("lv", sorted(LEVELS))
def test_trivial_cases(lv):
    spec = level(lv, A)
    assert decide_separation(spec, L("%0"), L("(a|b)*")).positive
    d = decide_separation(spec, L("a*"), L("a*"))
    assert not d.positive and d.reason == "L1 meets L2"
    assert decide_covering(spec, AB, [L("%0")]).positive


def test_sigma1_examples():
    s1 = level("sigma1", A)
    assert decide_separation(s1, L("(a|b)*a(a|b)*"), L("b*")).positive
    assert not decide_separation(s1, AB, NOT_AB).positive
    assert sigma1_oracle(L("(a|b)*a(a|b)*b(a|b)*"), L("a*"))
    assert not sigma1_oracle(AB, NOT_AB)


def test_ab_star_across_levels():
    assert not decide_separation(level("sigma2", A), AB, NOT_AB).positive
    assert decide_separation(level("sigma2", A), NOT_AB, AB).positive
    assert decide_separation(level("sigma3", A), AB, NOT_AB).positive
    assert decide_covering(level("sigma3", A), AB, [NOT_AB]).positive


def test_witness_for_sigma1():
    l1, l2 = L("(a|b)*ab(a|b)*"), L("b*a*")
    d = decide_separation(level("sigma1", A), l1, l2, witness=True)
    assert d.positive and d.witness["kind"] == "upward_subword_closure"
    up = upward_subword_closure(l1)
    assert is_empty(product_intersect(up, l2))


def test_json_schema():
    for d in (
        decide_separation(level("sigma2", A), AB, NOT_AB),
        decide_separation(level("sigma1", A), L("%0"), AB),
    ):
        js = d.to_json()
        assert set(js) == {"decision", "evidence", "witness", "stats"}
        assert set(js["stats"]) == {"S_size", "TT_size", "iterations"}
    row = decide_separation(level("sigma2", A), AB, NOT_AB).to_json()["evidence"]["blocking_row"]
    assert row["delta"] == [0]


def test_covering_multiple_languages():
    # the piece a+ meets a* but misses b*
    spec = level("sigma2", A)
    assert decide_covering(spec, L("aa*"), [L("b*"), L("a*")]).positive
    assert not decide_covering(spec, L("aa*"), [L("a*"), L("(a|b)*a")]).positive
    assert decide_covering(spec, L("aa*"), [L("b*"), L("%e")]).positive


def test_alphabet_mismatch():
    with pytest.raises(ValueError):
        decide_separation(level("sigma1", A), L("a"), compile("a", Alphabet.of("abc")))
