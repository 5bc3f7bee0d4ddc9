import itertools
import random

from hypothesis import given
from hypothesis import strategies as st

from sephier.basis import builtin_basis, class_language
from sephier.lang import Alphabet, compile, compile_regex, concat, is_empty, product_intersect, random_regex, union
from sephier.monoid import Monoid
from sephier.rating import Hemiring, build_rating_map, rho_partial_sum, submasks
from strategies import regexes

A = Alphabet.of("ab")
ST0 = builtin_basis("ST0", A)
AT = builtin_basis("AT", A)


def test_no_languages_gives_single_component():
    rm = build_rating_map(ST0, [])
    assert rm.hemiring.width == 1
    assert rm.eps_image == 1
    assert rm.delta(rm.eps_image) == frozenset()


def test_contains_a_example():
    rm = build_rating_map(ST0, [compile("(a|b)*a(a|b)*", A)])
    h = rm.hemiring
    assert [m.size for m in h.components] == [1, 2]
    ra, rb = rm.canonical_image("a"), rm.canonical_image("b")
    assert ra != rb
    assert rb == rm.eps_image
    assert rm.delta(ra) == {0}
    assert rm.delta(rb) == frozenset()
    # z is a zero of M_1
    assert h.mul(ra, rb) == ra == h.mul(ra, ra)


def test_canonical_image_is_a_morphism():
    rm = build_rating_map(AT, [compile("(ab)*", A), compile("a*b", A)])
    h = rm.hemiring
    rng = random.Random(1)
    for _ in range(100):
        u = "".join(rng.choice("ab") for _ in range(rng.randint(0, 6)))
        v = "".join(rng.choice("ab") for _ in range(rng.randint(0, 6)))
        assert rm.canonical_image(u + v) == h.mul(rm.canonical_image(u), rm.canonical_image(v))
    assert rm.canonical_image("") == rm.eps_image


def test_hemiring_laws_exhaustive():
    # components Z2 and a 2-element semilattice: 2^4 elements
    z2 = Monoid(((0, 1), (1, 0)), 0)
    sl = Monoid(((0, 1), (1, 1)), 0)
    h = Hemiring([z2, sl])
    els = range(1 << h.width)
    for x, y in itertools.product(els, repeat=2):
        assert h.add(x, y) == h.add(y, x)
        assert h.add(x, x) == x
        assert h.mul(x, 0) == 0 == h.mul(0, x)
    for x, y, z in itertools.product(els, repeat=3):
        assert h.mul(h.mul(x, y), z) == h.mul(x, h.mul(y, z))
        assert h.mul(x, h.add(y, z)) == h.add(h.mul(x, y), h.mul(x, z))
        assert h.mul(h.add(x, y), z) == h.add(h.mul(x, z), h.mul(y, z))


def test_rho_trivial_values():
    rm = build_rating_map(AT, [compile("(a|b)*a(a|b)*", A)])
    assert rm.rho_of_regular(compile("%0", A)) == 0
    assert rm.rho_of_regular(compile("%e", A)) == rm.eps_image


def test_rho_of_class_matches_partial_sums():
    rm = build_rating_map(AT, [compile("(a|b)*a(a|b)*", A)])
    for c in range(AT.size):
        k = class_language(AT, c)
        assert rm.rho_of_class(c) == rho_partial_sum(rm, k, 6)
    # class {a} = a+ : one class value and the zero z of M_1
    a_class = AT.letter_class["a"]
    r = rm.rho_of_class(a_class)
    assert rm.class_of_element(r) == a_class
    assert r == rm.canonical_image("a")


@given(regexes())
def test_rho_agrees_with_enumeration(r):
    rm = build_rating_map(AT, [compile("(ab)*", A)])
    k = compile_regex(r, A)
    # every canonical element is reached by a word shorter than the monoid size
    assert rm.rho_of_regular(k) == rho_partial_sum(rm, k, rm.canonical.size)


@given(regexes(), regexes())
def test_rho_is_additive_and_multiplicative(r1, r2):
    rm = build_rating_map(ST0, [compile("a*b", A), compile("(a|b)*bb(a|b)*", A)])
    k1, k2 = compile_regex(r1, A), compile_regex(r2, A)
    h = rm.hemiring
    assert rm.rho_of_regular(union(k1, k2)) == h.add(rm.rho_of_regular(k1), rm.rho_of_regular(k2))
    assert rm.rho_of_regular(concat(k1, k2)) == h.mul(rm.rho_of_regular(k1), rm.rho_of_regular(k2))


def test_delta_contract_against_intersection():
    langs = [compile(x, A) for x in ("(ab)*", "(a|b)*aa(a|b)*", "b*")]
    rm = build_rating_map(AT, langs)
    rng = random.Random(7)
    for _ in range(50):
        k = compile_regex(random_regex(rng, "ab", 4), A)
        expect = {i for i, l in enumerate(langs) if not is_empty(product_intersect(k, l))}
        assert rm.delta(rm.rho_of_regular(k)) == expect


@given(regexes(max_leaves=5), st.text(alphabet="ab", max_size=6))
def test_word_image_below_language_value(r, w):
    rm = build_rating_map(AT, [compile("(ab)*", A)])
    k = compile_regex(r, A)
    if k.accepts(w):
        assert rm.hemiring.leq(rm.canonical_image(w), rm.rho_of_regular(k))


def test_max_idempotents_below_brute_force():
    z3 = Monoid(tuple(tuple((i + j) % 3 for j in range(3)) for i in range(3)), 0)
    sl = Monoid(((0, 1), (1, 1)), 0)
    h = Hemiring([z3, sl])
    for x in range(1 << h.width):
        below = [f for f in submasks(x) if h.is_idempotent(f)]
        maximal = {f for f in below if not any(f != g and h.leq(f, g) for g in below)}
        assert set(h.max_idempotents_below(x)) == maximal


def test_omega_is_idempotent_power():
    rm = build_rating_map(AT, [compile("(ab)*", A)])
    h = rm.hemiring
    for w in ["a", "ab", "ba", "aab"]:
        x = rm.canonical_image(w)
        e = h.omega(x)
        assert h.is_idempotent(e)
        assert e in {h.product([x] * n, rm.eps_image) for n in range(1, 13)}
