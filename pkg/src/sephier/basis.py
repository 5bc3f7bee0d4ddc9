"""Finite quotienting Boolean algebras given by a class monoid A* -> N.

A basis is the morphism sending a word to its equivalence class. Its languages
are the unions of classes, so the canonical preorder is class equality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .lang import Alphabet, Automaton, _build, trim
from .monoid import Monoid, generate, omega_exponent

BUILTIN = ("ST0", "AT", "DD0")
DEFAULT_STRATA_BUDGET = 10**6


@dataclass(frozen=True)
class Basis:
    name: str
    alphabet: Alphabet
    class_monoid: Monoid
    letter_class: dict[str, int]

    def __hash__(self):
        return hash((self.name, self.alphabet, self.class_monoid))

    @property
    def size(self) -> int:
        return self.class_monoid.size

    def class_of_word(self, word: str) -> int:
        m = self.class_monoid
        c = m.unit
        for a in word:
            c = m.table[c][self.letter_class[a]]
        return c

    def leq(self, u: str, v: str) -> bool:
        """Canonical preorder; discrete because the basis is a Boolean algebra."""
        return self.class_of_word(u) == self.class_of_word(v)

    def class_label(self, c: int) -> str:
        return self.class_monoid.label(c)

    def to_json(self) -> dict:
        m = self.class_monoid
        return {
            "classes": m.size,
            "unit": m.unit,
            "table": [list(r) for r in m.table],
            "letter_class": dict(self.letter_class),
        }


def builtin_basis(name: str, alphabet: Alphabet) -> Basis:
    name = name.upper()
    if name == "ST0":
        return Basis("ST0", alphabet, Monoid(((0,),), 0, ("A*",)), {a: 0 for a in alphabet})
    if name == "DD0":
        # class 0 = {eps}, class 1 = A+
        table = ((0, 1), (1, 1))
        return Basis("DD0", alphabet, Monoid(table, 0, ("eps", "A+")), {a: 1 for a in alphabet})
    if name == "AT":
        n = 1 << len(alphabet)
        table = tuple(tuple(x | y for y in range(n)) for x in range(n))
        labels = tuple(
            "{" + ",".join(a for i, a in enumerate(alphabet) if x >> i & 1) + "}"
            for x in range(n)
        )
        letters = {a: 1 << i for i, a in enumerate(alphabet)}
        return Basis("AT", alphabet, Monoid(table, 0, labels), letters)
    raise ValueError(f"unknown basis {name!r}; expected one of {BUILTIN}")


def custom_basis(data: dict | str, alphabet: Alphabet, name: str = "custom") -> Basis:
    """Load ``{"classes":N,"unit":u,"table":[[...]],"letter_class":{...}}``.

    Rejects tables that are not monoids and classes no word reaches (an empty
    class would not be a class of the equivalence).
    """
    if isinstance(data, str):
        data = json.loads(data)
    n = int(data["classes"])
    table = tuple(tuple(int(x) for x in row) for row in data["table"])
    if len(table) != n or any(len(r) != n for r in table):
        raise ValueError("basis table must be classes x classes")
    if any(not 0 <= x < n for r in table for x in r):
        raise ValueError("basis table entry out of range")
    monoid = Monoid(table, int(data["unit"]))
    monoid.check_laws()
    letter_class = {a: int(data["letter_class"][a]) for a in alphabet}
    elems, _, _ = generate(alphabet.letters, letter_class, monoid.unit, monoid.mul, n + 1)
    if len(elems) != n:
        raise ValueError(f"basis has {n - len(elems)} unreachable classes")
    return Basis(name, alphabet, monoid, letter_class)


def load_basis(spec: str, alphabet: Alphabet) -> Basis:
    if spec.upper() in BUILTIN:
        return builtin_basis(spec, alphabet)
    with open(spec) as fh:
        return custom_basis(json.load(fh), alphabet, name=spec)


def class_language(basis: Basis, class_id: int) -> Automaton:
    m = basis.class_monoid
    if not 0 <= class_id < m.size:
        raise ValueError(f"class {class_id} out of range")
    trans = [(c, a, m.table[c][basis.letter_class[a]]) for c in range(m.size) for a in basis.alphabet]
    # unit state first so the automaton is a complete DFA starting at 0
    return trim(_build(basis.alphabet, m.size, [m.unit], [class_id], trans, True))


def period(basis: Basis) -> int:
    return omega_exponent(basis.class_monoid)


def check_congruence(basis: Basis, rng, samples: int = 200, max_len: int = 6) -> bool:
    def word():
        return "".join(rng.choice(basis.alphabet.letters) for _ in range(rng.randint(0, max_len)))

    for _ in range(samples):
        u, up = word(), word()
        # force equal classes by reusing the same class through different words
        v = u if rng.random() < 0.5 else word()
        vp = up if rng.random() < 0.5 else word()
        if basis.class_of_word(u) == basis.class_of_word(v) and basis.class_of_word(
            up
        ) == basis.class_of_word(vp):
            if basis.class_of_word(u + up) != basis.class_of_word(v + vp):
                return False
    return True


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class StratumComparator:
    """Recursive test oracle for the stratum preorders of polynomial closure.

    u <=_k v holds when u and v share a basis class and, for k >= 1, every
    split u = x a y is matched by a split v = x' a y' with x <=_{k-1} x' and
    y <=_{k-1} y'. Exponential; memoized and guarded by a call budget.
    """

    basis: Basis
    k: int
    budget: int = DEFAULT_STRATA_BUDGET
    memo: dict = field(default_factory=dict)
    calls: int = 0

    def leq(self, u: str, v: str, k: int | None = None) -> bool:
        return self._leq(self.k if k is None else k, u, v)

    def _leq(self, k: int, u: str, v: str) -> bool:
        key = (k, u, v)
        if key in self.memo:
            return self.memo[key]
        self.calls += 1
        if self.calls > self.budget:
            raise BudgetExceeded(f"strata comparison exceeded {self.budget} calls")
        res = self.basis.leq(u, v)
        if res and k >= 1:
            for i, a in enumerate(u):
                x, y = u[:i], u[i + 1 :]
                if not any(
                    v[j] == a and self._leq(k - 1, x, v[:j]) and self._leq(k - 1, y, v[j + 1 :])
                    for j in range(len(v))
                ):
                    res = False
                    break
        self.memo[key] = res
        return res


def strata_leq(cmp: StratumComparator, u: str, v: str) -> bool:
    return cmp.leq(u, v)


def words_sharing_class(basis: Basis, words: Iterable[str]) -> dict[int, list[str]]:
    out: dict[int, list[str]] = {}
    for w in words:
        out.setdefault(basis.class_of_word(w), []).append(w)
    return out
