"""Least Pol(C)-saturated subset of M x R by worklist saturation.

Sets that are downward closed in R are stored by their maximal elements: for
every monoid element s we keep an antichain of hemiring elements. This is exact:

* products of dominated pairs are dominated by products of maximal pairs;
* an idempotent (e, f) below a maximal (e, r) satisfies f <= r^omega, and
  (e, r^omega) is itself in the set (a power of (e, r)), so closing the single
  idempotent (e, r^omega) dominates closing every idempotent below (e, r).

The full downset can still be materialized for small instances.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .config import Caps
from .lang import CapExceeded
from .monoid import Morphism
from .rating import RatingMap


class Antichain:
    """Maximal elements of a downward-closed set of hemiring elements."""

    __slots__ = ("items",)

    def __init__(self, items: Iterable[int] = ()):
        self.items: set[int] = set()
        for x in items:
            self.insert(x)

    def dominates(self, x: int) -> bool:
        return any(x & ~y == 0 for y in self.items)

    def insert(self, x: int) -> bool:
        if self.dominates(x):
            return False
        self.items = {y for y in self.items if y & ~x != 0}
        self.items.add(x)
        return True

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __contains__(self, x: int) -> bool:
        return x in self.items


@dataclass
class Stats:
    iterations: int = 0
    insertions: int = 0

    def to_json(self) -> dict:
        return {"iterations": self.iterations, "insertions": self.insertions}


@dataclass
class ImprintSet:
    """A subset of M x R, downward closed in R, stored as per-element antichains."""

    alpha: Morphism
    rating: RatingMap
    maxima: dict[int, frozenset[int]]
    stats: Stats = field(default_factory=Stats)
    downclosed: bool = True

    def contains(self, s: int, r: int) -> bool:
        return any(r & ~y == 0 for y in self.maxima.get(s, ()))

    __contains__ = lambda self, pair: self.contains(*pair)  # noqa: E731

    def maximal_pairs(self) -> list[tuple[int, int]]:
        return sorted((s, r) for s, rs in self.maxima.items() for r in rs)

    def pairs(self, cap: int = 1 << 20) -> set[tuple[int, int]]:
        """Materialized downset; raises CapExceeded when too large."""
        h = self.rating.hemiring
        out: set[tuple[int, int]] = set()
        for s, r in self.maximal_pairs():
            for x in h.downset(r, cap):
                out.add((s, x))
                if len(out) > cap:
                    raise CapExceeded("materialized imprint", cap)
        return out

    def __len__(self) -> int:
        return sum(len(v) for v in self.maxima.values())

    def issubset(self, other: "ImprintSet") -> bool:
        return all(other.contains(s, r) for s, r in self.maximal_pairs())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ImprintSet):
            return NotImplemented
        return self.maxima == other.maxima

    def to_json(self) -> list:
        m = self.alpha.monoid
        return [
            {"s": s, "s_label": m.label(s), "r": self.rating.render(r), "delta": sorted(self.rating.delta(r))}
            for s, r in self.maximal_pairs()
        ]


class PairStore:
    """Mutable store of maximal pairs keyed by monoid element."""

    def __init__(self, size: int):
        self.by_s = [Antichain() for _ in range(size)]

    def insert(self, s: int, r: int) -> bool:
        return self.by_s[s].insert(r)

    def alive(self, s: int, r: int) -> bool:
        return r in self.by_s[s]

    def dominated(self, s: int, r: int) -> bool:
        return self.by_s[s].dominates(r)

    def snapshot(self) -> list[tuple[int, int]]:
        return [(s, r) for s, ac in enumerate(self.by_s) for r in ac]

    def freeze(self) -> dict[int, frozenset[int]]:
        return {s: frozenset(ac) for s, ac in enumerate(self.by_s) if len(ac)}


class Worklist:
    """FIFO, or a seeded random pop order for order-independence tests."""

    def __init__(self, seed: int | None = None):
        self.items: deque = deque()
        self.rng = random.Random(seed) if seed is not None else None

    def push(self, item) -> None:
        self.items.append(item)

    def pop(self):
        if self.rng is None:
            return self.items.popleft()
        i = self.rng.randrange(len(self.items))
        self.items[i], self.items[-1] = self.items[-1], self.items[i]
        return self.items.pop()

    def __bool__(self) -> bool:
        return bool(self.items)


def triv_seeds(alpha: Morphism, rm: RatingMap) -> Iterator[tuple[int, int]]:
    yield alpha.monoid.unit, rm.eps_image
    images = rm.letter_image
    for a in alpha.alphabet:
        yield alpha.letter_image[a], images[a]


def _check_inputs(alpha: Morphism, rm: RatingMap) -> None:
    if not alpha.compatible:
        raise ValueError("morphism must be C-compatible (carry class tags)")
    if alpha.alphabet != rm.alphabet:
        raise ValueError("morphism and rating map alphabets differ")


def pol_fixpoint(
    alpha: Morphism, rm: RatingMap, caps: Caps | None = None, order_seed: int | None = None
) -> ImprintSet:
    """Least subset of M x R containing the trivial pairs and closed under
    downset, multiplication and Pol-closure (e, f.rho([e]).f) for idempotents.
    """
    caps = caps or Caps()
    _check_inputs(alpha, rm)
    m = alpha.monoid
    h = rm.hemiring
    store = PairStore(m.size)
    work = Worklist(order_seed)
    stats = Stats()
    class_value = {}

    def add(s: int, r: int) -> None:
        if store.insert(s, r):
            stats.insertions += 1
            if stats.insertions > caps.iterations:
                raise CapExceeded("fixpoint additions", caps.iterations)
            work.push((s, r))

    for s, r in triv_seeds(alpha, rm):
        add(s, r)

    while work:
        s, r = work.pop()
        if not store.alive(s, r):
            continue
        stats.iterations += 1
        for s2, r2 in store.snapshot():
            add(m.table[s][s2], h.mul(r, r2))
            add(m.table[s2][s], h.mul(r2, r))
        if m.table[s][s] == s:
            c = alpha.class_of[s]
            if c not in class_value:
                class_value[c] = rm.rho_of_class(c)
            f = h.omega(r)
            add(s, h.mul(h.mul(f, class_value[c]), f))

    return ImprintSet(alpha, rm, store.freeze(), stats)


def imprint_of_language(S: ImprintSet, accepting: Iterable[int]) -> list[int]:
    """Maximal elements of {r | (s, r) in S, s accepting} (a downset)."""
    ac = Antichain()
    for s in accepting:
        for r in S.maxima.get(s, ()):
            ac.insert(r)
    return sorted(ac)


def audit_pol(S: ImprintSet, idempotent_cap: int | None = None) -> list[str]:
    """One more full pass of the three operations; returns any violations.

    Pol-closure is re-applied to every maximal idempotent below each maximal
    pair, not only the omega power used by the engine.
    """
    alpha, rm = S.alpha, S.rating
    m, h = alpha.monoid, rm.hemiring
    kw = {} if idempotent_cap is None else {"cap": idempotent_cap}
    problems = []
    for s, r in triv_seeds(alpha, rm):
        if not S.contains(s, r):
            problems.append(f"seed ({s},{r:#x}) missing")
    pairs = S.maximal_pairs()
    for s1, r1 in pairs:
        for s2, r2 in pairs:
            if not S.contains(m.table[s1][s2], h.mul(r1, r2)):
                problems.append(f"product of ({s1},{r1:#x}) and ({s2},{r2:#x}) missing")
    for e, r in pairs:
        if m.table[e][e] != e:
            continue
        x = rm.rho_of_class(alpha.class_of[e])
        for f in h.max_idempotents_below(r, **kw):
            if not S.contains(e, h.mul(h.mul(f, x), f)):
                problems.append(f"Pol-closure of ({e},{f:#x}) missing")
    return problems
