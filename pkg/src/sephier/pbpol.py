"""Least PBPol(C)-saturated pair (S, TT).

S is a subset of M x R and TT a subset of R x 2^(M x R). Both are stored by
maximal elements:

* S as in :mod:`sephier.pol` (per-s antichains of hemiring elements);
* TT as, for each r, an antichain (under inclusion of downsets) of sets T.
  A set T is itself downward closed in its second coordinate, since every seed
  and every product is, and is kept as its canonical maximal pairs.

Only T-subsets are taken downward in TT; the r coordinate always stays a product
of word images, so its basis class (component 0) is a single class.

Nested closure needs every idempotent (f, E) of TT. For a stored (f, T) with f
idempotent, (f, T^k) is in TT for all k and every idempotent E below T is below
T^omega, so closing (f, T^omega) dominates closing every such E.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .config import Caps
from .lang import CapExceeded
from .monoid import Morphism
from .pol import ImprintSet, PairStore, Stats, Worklist, _check_inputs, triv_seeds
from .rating import RatingMap

PairSet = frozenset  # frozenset[tuple[int, int]], canonical maximal pairs


def normalize(pairs: Iterable[tuple[int, int]]) -> PairSet:
    """Canonical form of the downset generated by ``pairs``."""
    by_s: dict[int, list[int]] = {}
    for s, r in pairs:
        bucket = by_s.setdefault(s, [])
        if any(r & ~y == 0 for y in bucket):
            continue
        bucket[:] = [y for y in bucket if y & ~r != 0]
        bucket.append(r)
    return frozenset((s, r) for s, rs in by_s.items() for r in rs)


@lru_cache(maxsize=1 << 16)
def _index(t: PairSet) -> dict[int, tuple[int, ...]]:
    out: dict[int, list[int]] = {}
    for s, r in t:
        out.setdefault(s, []).append(r)
    return {s: tuple(rs) for s, rs in out.items()}


def pairset_leq(t1: PairSet, t2: PairSet) -> bool:
    """Downset inclusion."""
    if t1 is t2 or t1 == t2:
        return True
    idx = _index(t2)
    for s, r in t1:
        rs = idx.get(s)
        if rs is None or not any(r & ~y == 0 for y in rs):
            return False
    return True


def pairset_contains(t: PairSet, s: int, r: int) -> bool:
    return any(s2 == s and r & ~y == 0 for s2, y in t)


def special_mult(alpha: Morphism, rm: RatingMap, t1: PairSet, t2: PairSet) -> PairSet:
    """{(s1 s2, r) | (s1, r1) in T1, (s2, r2) in T2, r <= r1 r2}, by maxima."""
    m, h = alpha.monoid.table, rm.hemiring
    return normalize((m[s1][s2], h.mul(r1, r2)) for s1, r1 in t1 for s2, r2 in t2)


def seed_pairset(alpha: Morphism, rm: RatingMap, word: str) -> tuple[int, PairSet]:
    r = rm.canonical_image(word)
    return r, frozenset([(alpha.image(word), r)])


def pairset_downset(rm: RatingMap, t: PairSet, cap: int = 1 << 20) -> frozenset:
    h = rm.hemiring
    return frozenset((s, x) for s, r in t for x in h.downset(r, cap))


@dataclass
class PbpolState:
    S: ImprintSet
    TT: dict[int, frozenset[PairSet]]
    stats: Stats = field(default_factory=Stats)

    def tt_items(self) -> list[tuple[int, PairSet]]:
        return sorted(((r, t) for r, ts in self.TT.items() for t in ts), key=lambda x: (x[0], sorted(x[1])))

    @property
    def tt_size(self) -> int:
        return sum(len(v) for v in self.TT.values())

    def tt_contains(self, r: int, t: PairSet) -> bool:
        return any(pairset_leq(t, t2) for t2 in self.TT.get(r, ()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PbpolState):
            return NotImplemented
        return self.S == other.S and self.TT == other.TT

    def tt_to_json(self) -> list:
        rm, m = self.S.rating, self.S.alpha.monoid
        return [
            {"r": rm.render(r), "T": [[m.label(s), rm.render(x)] for s, x in sorted(t)]}
            for r, t in self.tt_items()
        ]


class TTStore:
    def __init__(self):
        self.by_r: dict[int, list[PairSet]] = {}
        self.count = 0

    def insert(self, r: int, t: PairSet) -> bool:
        bucket = self.by_r.setdefault(r, [])
        if any(pairset_leq(t, t2) for t2 in bucket):
            return False
        kept = [t2 for t2 in bucket if not pairset_leq(t2, t)]
        self.count += len(kept) + 1 - len(bucket)
        kept.append(t)
        self.by_r[r] = kept
        return True

    def alive(self, r: int, t: PairSet) -> bool:
        return t in self.by_r.get(r, ())

    def snapshot(self) -> list[tuple[int, PairSet]]:
        return [(r, t) for r, ts in self.by_r.items() for t in ts]

    def freeze(self) -> dict[int, frozenset[PairSet]]:
        return {r: frozenset(ts) for r, ts in self.by_r.items() if ts}


def pairset_omega(alpha: Morphism, rm: RatingMap, t: PairSet, cap: int) -> PairSet:
    p = t
    for _ in range(cap):
        if special_mult(alpha, rm, p, p) == p:
            return p
        p = special_mult(alpha, rm, p, t)
    raise CapExceeded("idempotent power search in 2^(MxR)", cap)


def pbpol_fixpoint(
    alpha: Morphism, rm: RatingMap, caps: Caps | None = None, order_seed: int | None = None
) -> PbpolState:
    caps = caps or Caps()
    _check_inputs(alpha, rm)
    m = alpha.monoid
    h = rm.hemiring
    eps = rm.eps_image
    S = PairStore(m.size)
    TT = TTStore()
    work = Worklist(order_seed)
    stats = Stats()
    omega_cache: dict[PairSet, PairSet] = {}

    def bump():
        stats.insertions += 1
        if stats.insertions > caps.iterations:
            raise CapExceeded("fixpoint additions", caps.iterations)

    def add_s(s: int, r: int) -> None:
        if S.insert(s, r):
            bump()
            work.push(("S", s, r))
            # nested closure of every idempotent TT entry of this class is stale
            c = alpha.class_of[s]
            for r2, t2 in TT.snapshot():
                if rm.class_of_element(r2) == c and h.is_idempotent(r2):
                    work.push(("N", r2, t2))

    def add_t(r: int, t: PairSet) -> None:
        if TT.insert(r, t):
            bump()
            if TT.count > caps.tt_entries:
                raise CapExceeded("TT entries", caps.tt_entries)
            work.push(("T", r, t))

    for s, r in triv_seeds(alpha, rm):
        add_s(s, r)
    add_t(eps, frozenset([(m.unit, eps)]))
    for a in alpha.alphabet:
        r, t = seed_pairset(alpha, rm, a)
        add_t(r, t)

    while work:
        kind, x, y = work.pop()
        if kind == "S":
            s, r = x, y
            if not S.alive(s, r):
                continue
            stats.iterations += 1
            for s2, r2 in S.snapshot():
                add_s(m.table[s][s2], h.mul(r, r2))
                add_s(m.table[s2][s], h.mul(r2, r))
            continue

        r, t = x, y
        if not TT.alive(r, t):
            continue
        stats.iterations += 1
        if kind == "T":
            for r2, t2 in TT.snapshot():
                add_t(h.mul(r, r2), special_mult(alpha, rm, t, t2))
                add_t(h.mul(r2, r), special_mult(alpha, rm, t2, t))
            # PBPol-closure: idempotent (e, f) in T gives (e, f (r + rho(eps)) f)
            mid = r | eps
            for e, b in t:
                if m.table[e][e] != e:
                    continue
                for f in h.max_idempotents_below(b, caps.idempotent_search):
                    add_s(e, h.mul(h.mul(f, mid), f))
        if h.is_idempotent(r):
            c = rm.class_of_element(r)
            if t not in omega_cache:
                omega_cache[t] = pairset_omega(alpha, rm, t, caps.idempotent_search)
            E = omega_cache[t]
            same_class = normalize(p for p in S.snapshot() if alpha.class_of[p[0]] == c)
            add_t(r, special_mult(alpha, rm, special_mult(alpha, rm, E, same_class), E))

    S_set = ImprintSet(alpha, rm, S.freeze(), stats)
    return PbpolState(S_set, TT.freeze(), stats)


def audit_pbpol(state: PbpolState, idempotent_cap: int = 1 << 16) -> list[str]:
    """One more pass of all six operations over the stored maxima."""
    S = state.S
    alpha, rm = S.alpha, S.rating
    m, h = alpha.monoid, rm.hemiring
    eps = rm.eps_image
    problems = []
    for s, r in triv_seeds(alpha, rm):
        if not S.contains(s, r):
            problems.append(f"S seed ({s},{r:#x}) missing")
    pairs = S.maximal_pairs()
    for s1, r1 in pairs:
        for s2, r2 in pairs:
            if not S.contains(m.table[s1][s2], h.mul(r1, r2)):
                problems.append(f"S product ({s1},{r1:#x})({s2},{r2:#x}) missing")
    items = state.tt_items()
    for w in [""] + list(alpha.alphabet):
        r, t = seed_pairset(alpha, rm, w)
        if not state.tt_contains(r, t):
            problems.append(f"TT seed for {w!r} missing")
    for r1, t1 in items:
        for r2, t2 in items:
            if not state.tt_contains(h.mul(r1, r2), special_mult(alpha, rm, t1, t2)):
                problems.append("TT product missing")
    for r, t in items:
        for e, b in t:
            if m.table[e][e] != e:
                continue
            for f in h.max_idempotents_below(b, idempotent_cap):
                if not S.contains(e, h.mul(h.mul(f, r | eps), f)):
                    problems.append(f"PBPol-closure ({e},{f:#x}) from TT missing")
        if h.is_idempotent(r):
            c = rm.class_of_element(r)
            E = pairset_omega(alpha, rm, t, idempotent_cap)
            same = normalize(p for p in pairs if alpha.class_of[p[0]] == c)
            if not state.tt_contains(r, special_mult(alpha, rm, special_mult(alpha, rm, E, same), E)):
                problems.append("nested closure missing")
    return problems
