"""Finite monoids and morphisms from A* into them."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .lang import Alphabet, Automaton, CapExceeded, determinize

if TYPE_CHECKING:
    from .basis import Basis

DEFAULT_MONOID_CAP = 4096


@dataclass(frozen=True)
class Monoid:
    table: tuple[tuple[int, ...], ...]
    unit: int
    labels: tuple[str, ...] | None = None

    @property
    def size(self) -> int:
        return len(self.table)

    def __len__(self) -> int:
        return len(self.table)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def product(self, xs: Iterable[int]) -> int:
        out = self.unit
        for x in xs:
            out = self.table[out][x]
        return out

    def is_idempotent(self, x: int) -> bool:
        return self.table[x][x] == x

    def idempotents(self) -> list[int]:
        return [x for x in range(self.size) if self.table[x][x] == x]

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def check_laws(self) -> None:
        n = self.size
        t = self.table
        for x in range(n):
            if t[self.unit][x] != x or t[x][self.unit] != x:
                raise ValueError(f"unit {self.unit} is not neutral for {x}")
        for x in range(n):
            for y in range(n):
                xy = t[x][y]
                for z in range(n):
                    if t[xy][z] != t[x][t[y][z]]:
                        raise ValueError(f"not associative at ({x},{y},{z})")

    def to_json(self) -> dict:
        return {"size": self.size, "unit": self.unit, "table": [list(r) for r in self.table]}


def omega_power(m: Monoid, x: int) -> int:
    """The unique idempotent among the powers x, x^2, ..., x^|M|."""
    y = x
    for _ in range(m.size + 1):
        if m.table[y][y] == y:
            return y
        y = m.table[y][x]
    raise AssertionError("no idempotent power found; table is not a finite monoid")


def omega_exponent(m: Monoid) -> int:
    """Least p >= 1 such that x^p is idempotent for every element x."""
    p = 1
    while True:
        ok = True
        for x in range(m.size):
            y = x
            for _ in range(p - 1):
                y = m.table[y][x]
            if m.table[y][y] != y:
                ok = False
                break
        if ok:
            return p
        p += 1


def generate(
    letters: Sequence[str],
    gens: dict[str, object],
    unit: object,
    mul,
    cap: int = DEFAULT_MONOID_CAP,
) -> tuple[list[object], dict[object, int], dict[str, int]]:
    """BFS closure of ``gens`` under right multiplication by generators.

    Returns the element list (unit first), its index, and letter images.
    """
    elems = [unit]
    index = {unit: 0}
    queue = deque([unit])
    while queue:
        x = queue.popleft()
        for a in letters:
            y = mul(x, gens[a])
            if y not in index:
                if len(elems) >= cap:
                    raise CapExceeded("monoid size", cap)
                index[y] = len(elems)
                elems.append(y)
                queue.append(y)
    letter_image = {a: index[mul(unit, gens[a])] for a in letters}
    return elems, index, letter_image


def _table(elems, index, mul) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(index[mul(x, y)] for y in elems) for x in elems)


@dataclass(frozen=True)
class Morphism:
    alphabet: Alphabet
    monoid: Monoid
    letter_image: dict[str, int]
    accepting: frozenset[int]
    class_of: tuple[int, ...] | None = None

    def __hash__(self):
        return id(self)

    def image(self, word: str) -> int:
        m = self.monoid
        out = m.unit
        for a in word:
            out = m.table[out][self.letter_image[a]]
        return out

    def recognizes(self, word: str) -> bool:
        return self.image(word) in self.accepting

    @property
    def compatible(self) -> bool:
        return self.class_of is not None

    def to_json(self) -> dict:
        out = self.monoid.to_json()
        out["letter_image"] = dict(self.letter_image)
        out["accepting"] = sorted(self.accepting)
        out["class_of"] = list(self.class_of) if self.class_of is not None else None
        if self.monoid.labels:
            out["labels"] = list(self.monoid.labels)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def transition_monoid(a: Automaton, cap: int = DEFAULT_MONOID_CAP) -> Morphism:
    """Transition monoid of a complete DFA; state-transformations as tuples."""
    if not a.is_complete_dfa():
        a = determinize(a)
    n = a.state_count
    letters = a.alphabet.letters
    gens = {x: tuple(next(iter(a.successors(p, x))) for p in range(n)) for x in letters}
    ident = tuple(range(n))

    def compose(f, g):  # first f, then g
        return tuple(g[f[p]] for p in range(n))

    elems, index, letter_image = generate(letters, gens, ident, compose, cap)
    init = next(iter(a.initial))
    accepting = frozenset(i for i, f in enumerate(elems) if f[init] in a.accepting)
    labels = tuple("".join(map(str, f)) for f in elems)
    monoid = Monoid(_table(elems, index, compose), 0, labels)
    return Morphism(a.alphabet, monoid, letter_image, accepting)


def product_morphism(
    alphabet: Alphabet, parts: Sequence[Morphism | tuple[Monoid, dict[str, int]]], cap: int
) -> tuple[list[tuple[int, ...]], Monoid, dict[str, int]]:
    """Submonoid of the direct product generated by letter images."""
    mons = []
    imgs = []
    for part in parts:
        if isinstance(part, Morphism):
            mons.append(part.monoid)
            imgs.append(part.letter_image)
        else:
            mons.append(part[0])
            imgs.append(part[1])
    gens = {a: tuple(img[a] for img in imgs) for a in alphabet}
    unit = tuple(m.unit for m in mons)

    def mul(x, y):
        return tuple(m.table[i][j] for m, i, j in zip(mons, x, y))

    elems, index, letter_image = generate(alphabet.letters, gens, unit, mul, cap)
    monoid = Monoid(_table(elems, index, mul), 0)
    return elems, monoid, letter_image


def make_c_compatible(m: Morphism, basis: "Basis", cap: int = DEFAULT_MONOID_CAP) -> Morphism:
    """Pair each element with its basis class; keep only word images.

    The image submonoid is closed under multiplication, so no extra closing step
    is needed. Accepting elements are those whose first coordinate is accepting.
    """
    if basis.alphabet != m.alphabet:
        raise ValueError("basis and morphism alphabets differ")
    elems, monoid, letter_image = product_morphism(
        m.alphabet, [m, (basis.class_monoid, basis.letter_class)], cap
    )
    labels = tuple(
        f"{m.monoid.label(x)}|{basis.class_label(c)}" for x, c in elems
    )
    monoid = Monoid(monoid.table, monoid.unit, labels)
    accepting = frozenset(i for i, (x, _) in enumerate(elems) if x in m.accepting)
    class_of = tuple(c for _, c in elems)
    return Morphism(m.alphabet, monoid, letter_image, accepting, class_of)


def morphism_for(lang: Automaton, basis: "Basis", cap: int = DEFAULT_MONOID_CAP) -> Morphism:
    """C-compatible morphism recognizing ``lang`` (via its minimal DFA)."""
    from .lang import minimize

    return make_c_compatible(transition_monoid(minimize(lang), cap), basis, cap)


def cyclic_group(n: int) -> Monoid:
    return Monoid(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), 0)


def trivial_morphism(alphabet: Alphabet, accepting: bool = True) -> Morphism:
    return Morphism(
        alphabet,
        Monoid(((0,),), 0),
        {a: 0 for a in alphabet},
        frozenset([0]) if accepting else frozenset(),
    )


__all__ = [
    "Monoid",
    "Morphism",
    "omega_power",
    "omega_exponent",
    "transition_monoid",
    "make_c_compatible",
    "morphism_for",
    "cyclic_group",
    "trivial_morphism",
]
