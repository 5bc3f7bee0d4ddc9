import itertools
import random

import pytest
from hypothesis import given

from sephier.basis import builtin_basis
from sephier.lang import Alphabet, CapExceeded, compile, compile_regex, minimize
from sephier.monoid import (
    Monoid,
    cyclic_group,
    make_c_compatible,
    morphism_for,
    omega_exponent,
    omega_power,
    transition_monoid,
    trivial_morphism,
)
from strategies import regexes

A = Alphabet.of("ab")


def tm(text):
    return transition_monoid(minimize(compile(text, A)))


def test_transition_monoid_sizes():
    assert tm("(a|b)*").monoid.size == 1
    assert tm("(ab)*").monoid.size == 6
    assert tm("(a|b)*a(a|b)*").monoid.size == 2


def test_cap_is_enforced():
    with pytest.raises(CapExceeded):
        transition_monoid(minimize(compile("(ab)*", A)), cap=3)


@given(regexes())
def test_recognition_and_morphism_law(r):
    a = compile_regex(r, A)
    alpha = transition_monoid(minimize(a))
    alpha.monoid.check_laws()
    for w in A.words(6):
        assert alpha.recognizes(w) == a.accepts(w)
    m = alpha.monoid
    short = list(A.words(3))
    for u, v in itertools.product(short, repeat=2):
        assert alpha.image(u + v) == m.mul(alpha.image(u), alpha.image(v))


def test_omega_power_examples():
    z3 = cyclic_group(3)
    assert omega_power(z3, 1) == 0
    assert omega_power(z3, 0) == 0
    m = tm("(ab)*").monoid
    for e in m.idempotents():
        assert omega_power(m, e) == e
    for x in range(m.size):
        e = omega_power(m, x)
        assert m.mul(e, e) == e
    assert omega_exponent(z3) == 3


def test_check_laws_rejects_bad_tables():
    with pytest.raises(ValueError):
        Monoid(((0, 1), (1, 1)), 1).check_laws()  # 1 is not neutral
    with pytest.raises(ValueError):
        Monoid(((0, 0, 0), (0, 2, 1), (0, 1, 1)), 1).check_laws()


def test_c_compatible_product_examples():
    base = tm("(a|b)*a(a|b)*")
    st0 = make_c_compatible(base, builtin_basis("ST0", A))
    assert st0.monoid.size == base.monoid.size
    assert set(st0.class_of) == {0}
    at = make_c_compatible(base, builtin_basis("AT", A))
    assert at.monoid.size <= 8
    at.monoid.check_laws()


@given(regexes())
def test_c_compatibility_contract(r):
    rng = random.Random(1)
    for name in ("ST0", "AT", "DD0"):
        basis = builtin_basis(name, A)
        lang = compile_regex(r, A)
        alpha = morphism_for(lang, basis)
        for _ in range(60):
            w = "".join(rng.choice("ab") for _ in range(rng.randint(0, 10)))
            assert alpha.class_of[alpha.image(w)] == basis.class_of_word(w)
        for w in A.words(6):
            assert alpha.recognizes(w) == lang.accepts(w)


def test_trivial_morphism():
    t = trivial_morphism(A)
    assert t.monoid.size == 1 and t.recognizes("abba")
    assert t.to_json()["size"] == 1
