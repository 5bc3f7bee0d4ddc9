"""Finite idempotent hemirings and nice multiplicative rating maps.

An element of the hemiring is a tuple of subsets, one per component monoid,
packed into a single int: component i owns bits [offset_i, offset_i + |M_i|).
Addition is bitwise or, the order is bitwise inclusion, and multiplication is
the componentwise setwise product.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

from .basis import Basis, class_language
from .lang import Automaton, CapExceeded, minimize
from .monoid import DEFAULT_MONOID_CAP, Monoid, product_morphism, transition_monoid

DEFAULT_DOWNSET_CAP = 1 << 20
DEFAULT_IDEMPOTENT_SEARCH_CAP = 1 << 16


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def submasks(x: int) -> Iterator[int]:
    """All submasks of x, x itself first and 0 last."""
    sub = x
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & x


class Hemiring:
    def __init__(self, components: Sequence[Monoid]):
        self.components = tuple(components)
        self.offsets = []
        off = 0
        for m in self.components:
            self.offsets.append(off)
            off += m.size
        self.width = off
        self.masks = [((1 << m.size) - 1) << o for m, o in zip(self.components, self.offsets)]
        self.zero = 0
        self._leftmul = [dict() for _ in self.components]
        self.mul = lru_cache(maxsize=1 << 18)(self._mul)
        self._max_idem_cache: list[dict[int, list[int]]] = [dict() for _ in self.components]

    def __repr__(self):
        return f"Hemiring(sizes={[m.size for m in self.components]})"

    @property
    def size_log2(self) -> int:
        return self.width

    def component(self, x: int, i: int) -> int:
        return (x >> self.offsets[i]) & ((1 << self.components[i].size) - 1)

    def split(self, x: int) -> tuple[int, ...]:
        return tuple(self.component(x, i) for i in range(len(self.components)))

    def join(self, parts: Sequence[int]) -> int:
        out = 0
        for p, o in zip(parts, self.offsets):
            out |= p << o
        return out

    def singleton(self, values: Sequence[int]) -> int:
        return self.join([1 << v for v in values])

    def add(self, x: int, y: int) -> int:
        return x | y

    @staticmethod
    def leq(x: int, y: int) -> bool:
        return x & ~y == 0

    def _component_mul(self, i: int, a: int, b: int) -> int:
        table = self.components[i].table
        cache = self._leftmul[i]
        out = 0
        for s in _bits(a):
            key = (s, b)
            row = cache.get(key)
            if row is None:
                row = 0
                ts = table[s]
                for t in _bits(b):
                    row |= 1 << ts[t]
                cache[key] = row
            out |= row
        return out

    def _mul(self, x: int, y: int) -> int:
        out = 0
        for i, o in enumerate(self.offsets):
            m = (1 << self.components[i].size) - 1
            out |= self._component_mul(i, (x >> o) & m, (y >> o) & m) << o
        return out

    def product(self, xs: Sequence[int], unit: int) -> int:
        out = unit
        for x in xs:
            out = self.mul(out, x)
        return out

    def is_idempotent(self, x: int) -> bool:
        return self.mul(x, x) == x

    def omega(self, x: int, cap: int = 1 << 16) -> int:
        y = x
        for _ in range(cap):
            if self.mul(y, y) == y:
                return y
            y = self.mul(y, x)
        raise CapExceeded("idempotent power search", cap)

    def downset(self, x: int, cap: int = DEFAULT_DOWNSET_CAP) -> Iterator[int]:
        if 1 << bin(x).count("1") > cap:
            raise CapExceeded("hemiring downset", cap)
        return submasks(x)

    def max_idempotents_below(
        self, x: int, cap: int = DEFAULT_IDEMPOTENT_SEARCH_CAP
    ) -> list[int]:
        """Maximal idempotents f <= x.

        Idempotency is componentwise, and every use of these elements is
        monotone, so the maximal ones per component are combined freely.
        """
        per = [self._max_idem_component(i, self.component(x, i), cap) for i in range(len(self.components))]
        return [self.join(parts) for parts in itertools.product(*per)]

    def _max_idem_component(self, i: int, a: int, cap: int) -> list[int]:
        cache = self._max_idem_cache[i]
        if a in cache:
            return cache[a]
        mul = lambda p, q: self._component_mul(i, p, q)  # noqa: E731
        # every idempotent E <= a satisfies E <= E*E, hence lies in the greatest
        # such subset of a
        g = a
        while True:
            g2 = g & mul(g, g)
            if g2 == g:
                break
            g = g2
        if mul(g, g) == g:
            found = [g]
        else:
            elems = list(_bits(g))
            if len(elems) > cap.bit_length():
                raise CapExceeded("idempotent subset search", cap)
            found = []
            checked = 0
            for size in range(len(elems) - 1, -1, -1):
                for combo in itertools.combinations(elems, size):
                    e = 0
                    for b in combo:
                        e |= 1 << b
                    if any(e & ~f == 0 for f in found):
                        continue
                    checked += 1
                    if checked > cap:
                        raise CapExceeded("idempotent subset search", cap)
                    if mul(e, e) == e:
                        found.append(e)
        cache[a] = found
        return found

    def render(self, x: int, names: Sequence[Sequence[str]] | None = None) -> str:
        parts = []
        for i, m in enumerate(self.components):
            comp = self.component(x, i)
            labels = [names[i][j] if names else str(j) for j in _bits(comp)]
            parts.append("{" + ",".join(labels) + "}")
        return "(" + ", ".join(parts) + ")"


@dataclass
class RatingMap:
    basis: Basis
    hemiring: Hemiring
    letter_values: dict[str, tuple[int, ...]]
    finals: tuple[frozenset[int], ...]
    canonical: Monoid = field(repr=False)
    canonical_values: list[tuple[int, ...]] = field(repr=False)
    canonical_letter: dict[str, int] = field(repr=False)
    _class_cache: dict = field(default_factory=dict, repr=False)

    @property
    def alphabet(self):
        return self.basis.alphabet

    @property
    def language_count(self) -> int:
        return len(self.finals)

    def value_element(self, values: Sequence[int]) -> int:
        return self.hemiring.singleton(values)

    @property
    def eps_image(self) -> int:
        return self.hemiring.singleton(self.canonical_values[self.canonical.unit])

    @property
    def letter_image(self) -> dict[str, int]:
        return {a: self.hemiring.singleton(v) for a, v in self.letter_values.items()}

    def delta(self, r: int) -> frozenset[int]:
        h = self.hemiring
        return frozenset(
            i for i, fin in enumerate(self.finals) if any(s in fin for s in _bits(h.component(r, i + 1)))
        )

    def class_of_element(self, r: int) -> int | None:
        comp = self.hemiring.component(r, 0)
        if comp and comp & (comp - 1) == 0:
            return comp.bit_length() - 1
        return None

    def canonical_image(self, word: str) -> int:
        c = self.canonical
        x = c.unit
        for a in word:
            x = c.table[x][self.canonical_letter[a]]
        return self.hemiring.singleton(self.canonical_values[x])

    def word_images(self) -> list[int]:
        """The monoid of singleton images {rho(w) | w in A*}."""
        return [self.hemiring.singleton(v) for v in self.canonical_values]

    def rho_of_regular(self, k: Automaton) -> int:
        """Sum of rho(w) over w in L(k), via reachability in k x canonical monoid."""
        if k.alphabet != self.alphabet:
            raise ValueError("alphabet mismatch")
        c = self.canonical
        start = [(q, c.unit) for q in k.initial]
        seen = set(start)
        queue = deque(start)
        out = 0
        while queue:
            q, x = queue.popleft()
            if q in k.accepting:
                out |= self.hemiring.singleton(self.canonical_values[x])
            for a in self.alphabet:
                y = c.table[x][self.canonical_letter[a]]
                for q2 in k.successors(q, a):
                    if (q2, y) not in seen:
                        seen.add((q2, y))
                        queue.append((q2, y))
        return out

    def rho_of_class(self, class_id: int) -> int:
        if class_id not in self._class_cache:
            self._class_cache[class_id] = self.rho_of_regular(class_language(self.basis, class_id))
        return self._class_cache[class_id]

    def render(self, r: int) -> str:
        names = [[m.label(j) for j in range(m.size)] for m in self.hemiring.components]
        return self.hemiring.render(r, names)

    def to_json(self) -> dict:
        return {
            "component_sizes": [m.size for m in self.hemiring.components],
            "letter_images": {a: self.render(self.hemiring.singleton(v)) for a, v in self.letter_values.items()},
            "eps_image": self.render(self.eps_image),
            "canonical_monoid_size": self.canonical.size,
        }


def build_rating_map(
    basis: Basis, languages: Sequence[Automaton], monoid_cap: int = DEFAULT_MONOID_CAP
) -> RatingMap:
    """Component 0 is the basis class monoid; then one transition monoid per language."""
    alphabet = basis.alphabet
    parts: list = [(basis.class_monoid, basis.letter_class)]
    finals = []
    components = [basis.class_monoid]
    for lang in languages:
        if lang.alphabet != alphabet:
            raise ValueError("language alphabet differs from basis alphabet")
        m = transition_monoid(minimize(lang), monoid_cap)
        parts.append(m)
        finals.append(m.accepting)
        components.append(m.monoid)
    values, canonical, canonical_letter = product_morphism(alphabet, parts, monoid_cap)
    letter_values = {a: values[canonical_letter[a]] for a in alphabet}
    return RatingMap(
        basis,
        Hemiring(components),
        letter_values,
        tuple(finals),
        canonical,
        values,
        canonical_letter,
    )


def rho_partial_sum(rm: RatingMap, k: Automaton, max_len: int) -> int:
    """Sum of rho(w) over accepted words up to max_len (enumeration oracle)."""
    out = 0
    for w in rm.alphabet.words(max_len):
        if k.accepts(w):
            out |= rm.canonical_image(w)
    return out
