"""Experimental Pol(C)-cover synthesis and factorization forests.

Covers are built word by word. Every word w with alpha(w) = s and |w| <= L
gets a minimal-height factorization forest; the forest is then turned into an
expression by the inductive cover construction (leaves, binary nodes, and the
idempotent-node construction driven by idempotent occurrences in R). Distinct
expressions are collected. Coverage is therefore exact on the enumerated words
and nothing is claimed beyond the length bound.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Iterable, Sequence

from .basis import class_language
from .config import Caps
from .lang import Automaton, CapExceeded, concat, union, word_automaton
from .monoid import Morphism
from .pol import ImprintSet, pol_fixpoint
from .rating import RatingMap

# ----------------------------------------------------------------- forests


@dataclass(frozen=True)
class Forest:
    word: str
    kind: str  # "leaf" | "binary" | "idem"
    children: tuple["Forest", ...] = ()

    @property
    def height(self) -> int:
        return 0 if self.kind == "leaf" else 1 + max(c.height for c in self.children)

    @property
    def idem_height(self) -> int:
        if self.kind == "leaf":
            return 0
        return (self.kind == "idem") + max(c.idem_height for c in self.children)

    def check(self, alpha: Morphism) -> None:
        """Raise ValueError if some node is malformed."""
        if self.kind == "leaf":
            if len(self.word) > 1 or self.children:
                raise ValueError(f"bad leaf {self.word!r}")
            return
        if "".join(c.word for c in self.children) != self.word:
            raise ValueError("children do not spell the node word")
        if self.kind == "binary":
            if len(self.children) != 2:
                raise ValueError("binary node needs two children")
        elif self.kind == "idem":
            if len(self.children) < 3:
                raise ValueError("idempotent node needs three children or more")
            vals = {alpha.image(c.word) for c in self.children}
            if len(vals) != 1 or not alpha.monoid.is_idempotent(next(iter(vals))):
                raise ValueError("idempotent node children must share one idempotent image")
        else:
            raise ValueError(f"unknown node kind {self.kind!r}")
        for c in self.children:
            c.check(alpha)


def leaf(word: str) -> Forest:
    return Forest(word, "leaf")


def binary(left: Forest, right: Forest) -> Forest:
    return Forest(left.word + right.word, "binary", (left, right))


def idem(children: Sequence[Forest]) -> Forest:
    return Forest("".join(c.word for c in children), "idem", tuple(children))


def build_forest(alpha: Morphism, w: str) -> Forest:
    """A minimum-height forest for w (interval dynamic programming).

    Minimum height is at most 3|M|-1 by the factorization forest theorem.
    """
    n = len(w)
    m = alpha.monoid
    letter = alpha.letter_image
    val = [[m.unit] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        x = m.unit
        for j in range(i + 1, n + 1):
            x = m.table[x][letter[w[j - 1]]]
            val[i][j] = x

    @lru_cache(maxsize=None)
    def best(i: int, j: int) -> tuple[int, tuple]:
        if j - i <= 1:
            return 0, ("leaf",)
        h, plan = min((max(best(i, k)[0], best(k, j)[0]) + 1, ("bin", k)) for k in range(i + 1, j))
        e = val[i][j]
        if m.table[e][e] == e and j - i >= 3:
            ih, cuts = pieces(e, i, j, 3)
            if ih + 1 < h:
                h, plan = ih + 1, ("idem", cuts)
        return h, plan

    @lru_cache(maxsize=None)
    def pieces(e: int, i: int, j: int, c: int) -> tuple[float, tuple[int, ...]]:
        # split [i, j) into >= c nonempty pieces of image e; minimise the max height
        inf = (float("inf"), ())
        if c <= 1:
            out = (best(i, j)[0], (i, j)) if val[i][j] == e else inf
        else:
            out = inf
        for k in range(i + 1, j):
            if val[k][j] != e:
                continue
            left = pieces(e, i, k, max(c - 1, 1))
            if left[0] == float("inf"):
                continue
            cand = (max(left[0], best(k, j)[0]), left[1] + (j,))
            if cand[0] < out[0]:
                out = cand
        return out

    def make(i: int, j: int) -> Forest:
        _, plan = best(i, j)
        if plan[0] == "leaf":
            return leaf(w[i:j])
        if plan[0] == "bin":
            return binary(make(i, plan[1]), make(plan[1], j))
        cuts = plan[1]
        return idem([make(a, b) for a, b in zip(cuts, cuts[1:])])

    return make(0, n)


def prefix_forest(f: Forest, n: int) -> Forest:
    """Forest for f.word[:n]: height grows by at most 1, no new idempotent node."""
    if n >= len(f.word):
        return f
    if f.kind == "leaf" or n == 0:
        return leaf(f.word[:n])
    if f.kind == "binary":
        a, b = f.children
        if n <= len(a.word):
            return prefix_forest(a, n)
        return binary(a, prefix_forest(b, n - len(a.word)))
    done = 0
    for i, c in enumerate(f.children):
        if n <= done + len(c.word):
            break
        done += len(c.word)
    if i == 0:
        return prefix_forest(f.children[0], n)
    return binary(_group(f.children[:i]), prefix_forest(f.children[i], n - done))


def suffix_forest(f: Forest, n: int) -> Forest:
    """Forest for the suffix of f.word of length n."""
    if n >= len(f.word):
        return f
    if f.kind == "leaf" or n == 0:
        return leaf(f.word[len(f.word) - n :])
    if f.kind == "binary":
        a, b = f.children
        if n <= len(b.word):
            return suffix_forest(b, n)
        return binary(suffix_forest(a, n - len(b.word)), b)
    done = 0
    kids = f.children
    for i in range(len(kids) - 1, -1, -1):
        if n <= done + len(kids[i].word):
            break
        done += len(kids[i].word)
    if i == len(kids) - 1:
        return suffix_forest(kids[-1], n)
    return binary(suffix_forest(kids[i], n - done), _group(kids[i + 1 :]))


def _group(kids: Sequence[Forest]) -> Forest:
    # consecutive children of an idempotent node, regrouped
    if len(kids) == 1:
        return kids[0]
    if len(kids) == 2:
        return binary(kids[0], kids[1])
    return idem(kids)


def infix_forest(f: Forest, start: int, end: int) -> Forest:
    """Forest for f.word[start:end], height <= f.height + 2."""
    s = suffix_forest(f, len(f.word) - start)
    return prefix_forest(s, end - start)


# ------------------------------------------------------------- expressions


@dataclass(frozen=True)
class ClassAtom:
    class_id: int


@dataclass(frozen=True)
class LetterAtom:
    letter: str


@dataclass(frozen=True)
class ConcatExpr:
    parts: tuple


@dataclass(frozen=True)
class UnionExpr:
    parts: tuple


CoverExpr = ClassAtom | LetterAtom | ConcatExpr | UnionExpr


def cat(*parts) -> CoverExpr:
    flat = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, ConcatExpr) else (p,))
    return flat[0] if len(flat) == 1 else ConcatExpr(tuple(flat))


def render(expr: CoverExpr, basis) -> str:
    if isinstance(expr, ClassAtom):
        return f"[{basis.class_label(expr.class_id)}]"
    if isinstance(expr, LetterAtom):
        return expr.letter
    if isinstance(expr, ConcatExpr):
        return "".join(render(p, basis) if not isinstance(p, UnionExpr) else f"({render(p, basis)})" for p in expr.parts)
    return "|".join(render(p, basis) for p in expr.parts)


class ExprCompiler:
    """Compiles expressions to NFAs and evaluates rho compositionally."""

    def __init__(self, rm: RatingMap):
        self.rm = rm
        self._nfa: dict = {}
        self._rho: dict = {}

    def nfa(self, e: CoverExpr) -> Automaton:
        if e not in self._nfa:
            A = self.rm.alphabet
            if isinstance(e, ClassAtom):
                out = class_language(self.rm.basis, e.class_id)
            elif isinstance(e, LetterAtom):
                out = word_automaton(A, e.letter)
            elif isinstance(e, ConcatExpr):
                out = reduce(concat, (self.nfa(p) for p in e.parts))
            else:
                out = reduce(union, (self.nfa(p) for p in e.parts))
            self._nfa[e] = out
        return self._nfa[e]

    def rho(self, e: CoverExpr) -> int:
        if e not in self._rho:
            rm, h = self.rm, self.rm.hemiring
            if isinstance(e, ClassAtom):
                out = rm.rho_of_class(e.class_id)
            elif isinstance(e, LetterAtom):
                out = rm.letter_image[e.letter]
            elif isinstance(e, ConcatExpr):
                out = reduce(h.mul, (self.rho(p) for p in e.parts))
            else:
                out = reduce(lambda x, y: x | y, (self.rho(p) for p in e.parts))
            self._rho[e] = out
        return self._rho[e]


def idempotent_free_bound(hemiring, values: Iterable[int], cap: int = 1 << 16) -> int:
    """Smallest k such that every length-k sequence over ``values`` has a
    factor whose product is idempotent.

    Search over the sets of suffix products of idempotent-free sequences. That
    graph is acyclic (a cycle would give an infinite idempotent-free sequence),
    so k is one more than its longest path.
    """
    values = sorted(set(values))
    if not values:
        return 1
    idem = hemiring.is_idempotent
    longest: dict[frozenset, int] = {}
    stack_guard = [0]

    def extend(state: frozenset, x: int) -> frozenset | None:
        nxt = {hemiring.mul(p, x) for p in state} | {x}
        if any(idem(p) for p in nxt):
            return None
        return frozenset(nxt)

    def depth(state: frozenset) -> int:
        if state in longest:
            return longest[state]
        stack_guard[0] += 1
        if stack_guard[0] > cap:
            raise CapExceeded("idempotent-free sequence search", cap)
        best = 0
        for x in values:
            nxt = extend(state, x)
            if nxt is not None:
                best = max(best, 1 + depth(nxt))
        longest[state] = best
        return best

    return depth(frozenset()) + 1


@dataclass
class CoverResult:
    s: int
    h: int
    m: int
    exprs: list
    k_used: dict = field(default_factory=dict)
    words_covered: int = 0


class PolCoverSynthesizer:
    """Builds, per word, an expression following the inductive construction."""

    def __init__(self, alpha: Morphism, rm: RatingMap, caps: Caps | None = None, k: int | None = None):
        self.alpha, self.rm = alpha, rm
        self.caps = caps or Caps()
        self.k_fixed = k
        self.comp = ExprCompiler(rm)
        self.h = rm.hemiring
        self.eps_class = rm.basis.class_of_word("")
        self.k_used: dict[tuple[int, int], int] = {}
        self._expr: dict[tuple[str, int], CoverExpr] = {}
        self._forest: dict[str, Forest] = {}
        self._pool: dict[tuple[int, int], set] = {}  # (e, height) -> child expressions

    def forest(self, w: str) -> Forest:
        if w not in self._forest:
            self._forest[w] = build_forest(self.alpha, w)
        return self._forest[w]

    def base(self, w: str) -> CoverExpr:
        eps = ClassAtom(self.eps_class)
        return eps if w == "" else cat(eps, LetterAtom(w), eps)

    def prepare(self, words: Iterable[str]) -> None:
        """Build expressions in order of forest height. The k of an idempotent
        level is fixed on first use from the child values registered so far."""
        for w in sorted(set(words), key=lambda u: (self.forest(u).height, len(u), u)):
            self.expr_for(self.forest(w))

    def k_for(self, e: int, height: int) -> int:
        key = (e, height)
        if self.k_fixed is not None:
            self.k_used[key] = self.k_fixed
        elif key not in self.k_used:
            vals = [self.comp.rho(x) for hh in range(height + 1) for x in self._pool.get((e, hh), ())]
            self.k_used[key] = idempotent_free_bound(self.h, vals, self.caps.idempotent_search)
        return self.k_used[key]

    def expr_for(self, f: Forest) -> CoverExpr:
        key = (f.word, f.height)
        if key in self._expr:
            return self._expr[key]
        if f.kind == "leaf":
            out = self.base(f.word)
        elif f.kind == "binary":
            out = cat(self.expr_for(f.children[0]), self.expr_for(f.children[1]))
        else:
            out = self._idem_expr(f)
        self._expr[key] = out
        if len(self._expr) > self.caps.expressions:
            raise CapExceeded("cover expressions", self.caps.expressions)
        self._pool.setdefault((self.alpha.image(f.word), f.height), set()).add(out)
        return out

    def _idem_expr(self, f: Forest) -> CoverExpr:
        e = self.alpha.image(f.word)
        us = [self.expr_for(c) for c in f.children]
        for c, u in zip(f.children, us):
            self._pool.setdefault((e, c.height), set()).add(u)
        k = self.k_for(e, f.height - 1)
        rs = [self.comp.rho(u) for u in us]
        V = ClassAtom(self.alpha.class_of[e])
        return self._sequence(us, rs, 0, k, V)

    def _occurrence(self, rs, start, k, f=None):
        """First (i, q) with i >= start, q <= k and r_i...r_{i+q-1} idempotent
        (equal to f when given), ordered by end position."""
        h = self.h
        best = None
        for i in range(start, len(rs)):
            x = None
            for q in range(1, k + 1):
                if i + q > len(rs):
                    break
                x = rs[i + q - 1] if x is None else h.mul(x, rs[i + q - 1])
                if (f is None and h.is_idempotent(x)) or (f is not None and x == f):
                    if best is None or i + q < best[0] + best[1]:
                        best = (i, q, x)
                    break
        return best

    def _last_occurrence(self, rs, start, k, f):
        h = self.h
        for j in range(len(rs) - 1, start - 1, -1):
            x = None
            for r in range(1, k + 1):
                if j + r > len(rs):
                    break
                x = rs[j + r - 1] if x is None else h.mul(x, rs[j + r - 1])
                if x == f:
                    return j, r
        return None

    def _sequence(self, us, rs, start, k, V) -> CoverExpr:
        occ = self._occurrence(rs, start, k)
        if occ is None:
            return cat(*us[start:])
        i, q, f = occ
        last = self._last_occurrence(rs, i + q + 1, k, f)
        if last is None:
            head = us[start : i + q + 1]
            if i + q + 1 >= len(us):
                return cat(*head)
            return cat(*head, self._sequence(us, rs, i + q + 1, k, V))
        j, r = last
        head = list(us[start : i + q]) + [V] + list(us[j : j + r])
        if j + r >= len(us):
            return cat(*head)
        return cat(*head, self._sequence(us, rs, j + r, k, V))


def synthesize_pol_cover(
    alpha: Morphism,
    rm: RatingMap,
    s: int,
    h: int,
    m: int | None = None,
    caps: Caps | None = None,
    k: int | None = None,
    synth: PolCoverSynthesizer | None = None,
) -> CoverResult:
    """Expressions covering every word w with alpha(w) = s, |w| <= check_length,
    admitting a forest of height <= h. The base cover of (s, 0, 0) is always
    included. ``m`` is accepted for interface symmetry; Pol covers do not
    depend on it.
    """
    caps = caps or Caps()
    m = h if m is None else m
    synth = synth or PolCoverSynthesizer(alpha, rm, caps, k)
    every = list(alpha.alphabet.words(caps.check_length))
    # every image is prepared so that k is fixed from a full pool of child values
    synth.prepare(w for w in every if synth.forest(w).height <= h)
    eligible = [w for w in every if alpha.image(w) == s and synth.forest(w).height <= h]
    exprs: dict = {}
    for w in eligible:
        if len(w) <= 1:
            continue
        exprs.setdefault(synth.expr_for(synth.forest(w)), None)
    base = [synth.base(a) for a in alpha.alphabet if alpha.letter_image[a] == s]
    if s == alpha.monoid.unit:
        base.append(synth.base(""))
    for b in base:
        exprs.setdefault(b, None)
    return CoverResult(s, h, m, list(exprs), dict(synth.k_used), len(eligible))


@dataclass
class CoverReport:
    uncovered: list
    rho_values: list
    rho_mismatch: list
    outside_imprint: list
    checked_words: int

    @property
    def ok(self) -> bool:
        return not (self.uncovered or self.rho_mismatch or self.outside_imprint)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked_words": self.checked_words,
            "uncovered": self.uncovered,
            "rho_mismatch": self.rho_mismatch,
            "outside_imprint": self.outside_imprint,
            "rho_values": self.rho_values,
        }


def verify_cover(
    exprs: Sequence[CoverExpr],
    alpha: Morphism,
    s: int,
    length_bound: int,
    rm: RatingMap | None = None,
    S: ImprintSet | None = None,
    words: Iterable[str] | None = None,
) -> CoverReport:
    """Bounded coverage of alpha^-1(s); rho of each compiled expression is
    recomputed from its automaton and compared with the compositional value and
    (optionally) with the imprint S."""
    comp = ExprCompiler(rm) if rm is not None else None
    if exprs and comp is None:
        raise ValueError("verify_cover needs the rating map to compile class atoms")
    nfas = [comp.nfa(e) for e in exprs]
    if words is None:
        words = [w for w in alpha.alphabet.words(length_bound) if alpha.image(w) == s]
    words = list(words)
    uncovered = [w for w in words if not any(a.accepts(w) for a in nfas)]
    rho_values, mismatch, outside = [], [], []
    if rm is not None:
        for i, (e, a) in enumerate(zip(exprs, nfas)):
            r = rm.rho_of_regular(a)
            rho_values.append(rm.render(r))
            if r != comp.rho(e):
                mismatch.append(i)
            if S is not None and not S.contains(s, r):
                outside.append(i)
    return CoverReport(uncovered, rho_values, mismatch, outside, len(words))


def witness_for_language(
    alpha: Morphism,
    rm: RatingMap,
    caps: Caps | None = None,
    S: ImprintSet | None = None,
    k: int | None = None,
) -> dict:
    """Covers for every accepting element at the full forest height, verified."""
    caps = caps or Caps()
    t0 = time.time()
    S = S or pol_fixpoint(alpha, rm, caps)
    h = 3 * alpha.monoid.size - 1
    synth = PolCoverSynthesizer(alpha, rm, caps, k)
    out = []
    for s in sorted(alpha.accepting):
        res = synthesize_pol_cover(alpha, rm, s, h, caps=caps, synth=synth)
        rep = verify_cover(res.exprs, alpha, s, caps.check_length, rm, S)
        out.append(
            {
                "s": s,
                "s_label": alpha.monoid.label(s),
                "h": h,
                "expressions": [render(e, rm.basis) for e in res.exprs],
                "k_used": {f"{alpha.monoid.label(e)}@{hh}": v for (e, hh), v in sorted(res.k_used.items())},
                "report": rep.to_json(),
            }
        )
    return {"covers": out, "seconds": round(time.time() - t0, 3)}
