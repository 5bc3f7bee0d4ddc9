"""Regular-language engine: regexes, automata, Boolean operations, quotients."""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

DEFAULT_STATE_CAP = 1 << 16


class RegexSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class CapExceeded(RuntimeError):
    """A configured size cap was hit; the instance is too large for this build."""

    def __init__(self, what: str, limit: int):
        super().__init__(f"instance too large: {what} exceeds cap {limit}")
        self.what = what
        self.limit = limit


@dataclass(frozen=True)
class Alphabet:
    letters: tuple[str, ...]

    def __post_init__(self):
        if not self.letters:
            raise ValueError("alphabet must be non-empty")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("alphabet letters must be distinct")
        for a in self.letters:
            if len(a) != 1 or not ("a" <= a <= "z"):
                raise ValueError(f"letter {a!r} is not a lowercase ASCII letter")

    @classmethod
    def of(cls, letters: Iterable[str] | str) -> "Alphabet":
        return cls(tuple(letters))

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __contains__(self, a: object) -> bool:
        return a in self.letters

    def words(self, max_len: int, min_len: int = 0) -> Iterator[str]:
        """All words with min_len <= length <= max_len, shortest first."""
        for n in range(min_len, max_len + 1):
            for t in itertools.product(self.letters, repeat=n):
                yield "".join(t)


# --- regex syntax trees -------------------------------------------------------


@dataclass(frozen=True)
class Empty:
    def __str__(self):
        return "%0"


@dataclass(frozen=True)
class Epsilon:
    def __str__(self):
        return "%e"


@dataclass(frozen=True)
class Letter:
    symbol: str

    def __str__(self):
        return self.symbol


@dataclass(frozen=True)
class Union:
    left: "Regex"
    right: "Regex"

    def __str__(self):
        return f"{self.left}|{self.right}"


@dataclass(frozen=True)
class Concat:
    left: "Regex"
    right: "Regex"

    def __str__(self):
        return _wrap(self.left, Union) + _wrap(self.right, Union)


@dataclass(frozen=True)
class Star:
    child: "Regex"

    def __str__(self):
        if isinstance(self.child, (Union, Concat, Star)):
            return f"({self.child})*"
        return f"{self.child}*"


Regex = Empty | Epsilon | Letter | Union | Concat | Star


def _wrap(r: Regex, kind) -> str:
    return f"({r})" if isinstance(r, kind) else str(r)


def parse_regex(text: str, alphabet: Alphabet) -> Regex:
    """Parse ``text`` using the grammar::

        expr   := term ('|' term)*
        term   := factor+
        factor := atom '*'?
        atom   := LETTER | '%e' | '%0' | '(' expr ')'

    Whitespace is not allowed. Union and concatenation associate to the left.
    """
    pos = 0

    def peek() -> str | None:
        return text[pos] if pos < len(text) else None

    def expr() -> Regex:
        nonlocal pos
        node = term()
        while peek() == "|":
            pos += 1
            node = Union(node, term())
        return node

    def term() -> Regex:
        node = factor()
        while peek() is not None and peek() not in "|)":
            node = Concat(node, factor())
        return node

    def factor() -> Regex:
        nonlocal pos
        node = atom()
        if peek() == "*":
            pos += 1
            node = Star(node)
        return node

    def atom() -> Regex:
        nonlocal pos
        c = peek()
        if c is None:
            raise RegexSyntaxError("unexpected end of input", pos)
        if c == "(":
            pos += 1
            node = expr()
            if peek() != ")":
                raise RegexSyntaxError("expected ')'", pos)
            pos += 1
            return node
        if c == "%":
            nxt = text[pos + 1 : pos + 2]
            if nxt == "e":
                pos += 2
                return Epsilon()
            if nxt == "0":
                pos += 2
                return Empty()
            raise RegexSyntaxError("expected '%e' or '%0'", pos)
        if "a" <= c <= "z":
            if c not in alphabet:
                raise RegexSyntaxError(f"unknown symbol {c!r}", pos)
            pos += 1
            return Letter(c)
        raise RegexSyntaxError(f"unexpected character {c!r}", pos)

    tree = expr()
    if pos != len(text):
        raise RegexSyntaxError(f"unexpected character {text[pos]!r}", pos)
    return tree


def regex_matches(r: Regex, word: str) -> bool:
    """Direct recursive matcher, independent of any automaton construction."""
    memo: dict[tuple[int, int, int], bool] = {}
    nodes: list[Regex] = []
    ids: dict[int, int] = {}

    def nid(n: Regex) -> int:
        k = id(n)
        if k not in ids:
            ids[k] = len(nodes)
            nodes.append(n)
        return ids[k]

    def m(n: Regex, i: int, j: int) -> bool:
        key = (nid(n), i, j)
        if key in memo:
            return memo[key]
        memo[key] = False
        if isinstance(n, Empty):
            res = False
        elif isinstance(n, Epsilon):
            res = i == j
        elif isinstance(n, Letter):
            res = j == i + 1 and word[i] == n.symbol
        elif isinstance(n, Union):
            res = m(n.left, i, j) or m(n.right, i, j)
        elif isinstance(n, Concat):
            res = any(m(n.left, i, k) and m(n.right, k, j) for k in range(i, j + 1))
        else:
            res = i == j or any(
                m(n.child, i, k) and m(n, k, j) for k in range(i + 1, j + 1)
            )
        memo[key] = res
        return res

    return m(r, 0, len(word))


# --- automata -----------------------------------------------------------------


@dataclass(frozen=True)
class Automaton:
    alphabet: Alphabet
    state_count: int
    initial: frozenset[int]
    accepting: frozenset[int]
    transitions: frozenset[tuple[int, str, int]]
    deterministic: bool = False
    _delta: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        n = self.state_count
        delta: dict[tuple[int, str], frozenset[int]] = {}
        for p, a, q in self.transitions:
            if not (0 <= p < n and 0 <= q < n):
                raise ValueError(f"transition ({p},{a},{q}) out of range")
            if a not in self.alphabet:
                raise ValueError(f"symbol {a!r} not in alphabet")
            delta.setdefault((p, a), set()).add(q)
        for s in self.initial | self.accepting:
            if not 0 <= s < n:
                raise ValueError(f"state {s} out of range")
        if self.deterministic:
            if len(self.initial) != 1 or any(len(v) > 1 for v in delta.values()):
                raise ValueError("automaton flagged deterministic is not")
        object.__setattr__(self, "_delta", {k: frozenset(v) for k, v in delta.items()})

    def step(self, states: Iterable[int], a: str) -> frozenset[int]:
        out: set[int] = set()
        for p in states:
            out |= self._delta.get((p, a), frozenset())
        return frozenset(out)

    def successors(self, p: int, a: str) -> frozenset[int]:
        return self._delta.get((p, a), frozenset())

    def run(self, word: str, start: Iterable[int] | None = None) -> frozenset[int]:
        cur = frozenset(self.initial if start is None else start)
        for a in word:
            cur = self.step(cur, a)
        return cur

    def accepts(self, word: str) -> bool:
        return bool(self.run(word) & self.accepting)

    def is_complete_dfa(self) -> bool:
        return self.deterministic and all(
            (p, a) in self._delta for p in range(self.state_count) for a in self.alphabet
        )

    # JSON wire format: {"alphabet":[...],"states":n,"initial":[...],"accepting":[...],
    # "transitions":[[p,"a",q],...]}
    def to_json(self) -> dict:
        return {
            "alphabet": list(self.alphabet.letters),
            "states": self.state_count,
            "initial": sorted(self.initial),
            "accepting": sorted(self.accepting),
            "transitions": [list(t) for t in sorted(self.transitions)],
        }

    @classmethod
    def from_json(cls, data: dict | str, alphabet: Alphabet | None = None) -> "Automaton":
        if isinstance(data, str):
            data = json.loads(data)
        alpha = Alphabet.of(data["alphabet"])
        if alphabet is not None and alpha != alphabet:
            raise ValueError("automaton alphabet does not match session alphabet")
        return cls(
            alpha,
            int(data["states"]),
            frozenset(data["initial"]),
            frozenset(data["accepting"]),
            frozenset((int(p), str(a), int(q)) for p, a, q in data["transitions"]),
        )


def _build(alphabet, n, initial, accepting, trans, deterministic=False) -> Automaton:
    return Automaton(
        alphabet, n, frozenset(initial), frozenset(accepting), frozenset(trans), deterministic
    )


def empty_automaton(alphabet: Alphabet) -> Automaton:
    return _build(alphabet, 1, [0], [], [(0, a, 0) for a in alphabet], True)


def universal_automaton(alphabet: Alphabet) -> Automaton:
    return _build(alphabet, 1, [0], [0], [(0, a, 0) for a in alphabet], True)


def word_automaton(alphabet: Alphabet, word: str) -> Automaton:
    trans = [(i, a, i + 1) for i, a in enumerate(word)]
    return _build(alphabet, len(word) + 1, [0], [len(word)], trans)


def compile_regex(regex: Regex, alphabet: Alphabet) -> Automaton:
    """Thompson construction followed by epsilon elimination."""
    eps: list[set[int]] = []
    moves: list[list[tuple[str, int]]] = []

    def new() -> int:
        eps.append(set())
        moves.append([])
        return len(eps) - 1

    def frag(n: Regex) -> tuple[int, int]:
        s, t = new(), new()
        if isinstance(n, Epsilon):
            eps[s].add(t)
        elif isinstance(n, Letter):
            moves[s].append((n.symbol, t))
        elif isinstance(n, Union):
            for child in (n.left, n.right):
                cs, ct = frag(child)
                eps[s].add(cs)
                eps[ct].add(t)
        elif isinstance(n, Concat):
            ls, lt = frag(n.left)
            rs, rt = frag(n.right)
            eps[s].add(ls)
            eps[lt].add(rs)
            eps[rt].add(t)
        elif isinstance(n, Star):
            cs, ct = frag(n.child)
            eps[s] |= {cs, t}
            eps[ct] |= {cs, t}
        return s, t

    start, final = frag(regex)

    def closure(p: int) -> set[int]:
        seen = {p}
        stack = [p]
        while stack:
            for q in eps[stack.pop()]:
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return seen

    closures = [closure(p) for p in range(len(eps))]
    trans = set()
    for p in range(len(eps)):
        for q in closures[p]:
            for a, r in moves[q]:
                trans.add((p, a, r))
    accepting = [p for p in range(len(eps)) if final in closures[p]]
    return trim(_build(alphabet, len(eps), [start], accepting, trans))


def compile(regex: Regex | str, alphabet: Alphabet) -> Automaton:
    if isinstance(regex, str):
        regex = parse_regex(regex, alphabet)
    return compile_regex(regex, alphabet)


def trim(a: Automaton) -> Automaton:
    """Restrict to accessible states and renumber densely (initial first)."""
    order: list[int] = []
    seen: set[int] = set()
    queue = deque(sorted(a.initial))
    seen.update(a.initial)
    while queue:
        p = queue.popleft()
        order.append(p)
        for x in a.alphabet:
            for q in sorted(a.successors(p, x)):
                if q not in seen:
                    seen.add(q)
                    queue.append(q)
    if not order:
        return empty_automaton(a.alphabet)
    index = {p: i for i, p in enumerate(order)}
    trans = [(index[p], x, index[q]) for p, x, q in a.transitions if p in index]
    return _build(
        a.alphabet,
        len(order),
        [index[p] for p in a.initial],
        [index[p] for p in a.accepting if p in index],
        trans,
        a.deterministic,
    )


def determinize(a: Automaton, state_cap: int = DEFAULT_STATE_CAP) -> Automaton:
    """Subset construction; the result is complete (a sink state is kept)."""
    if a.is_complete_dfa():
        return a
    start = frozenset(a.initial)
    index = {start: 0}
    subsets = [start]
    trans = []
    i = 0
    while i < len(subsets):
        cur = subsets[i]
        for x in a.alphabet:
            nxt = a.step(cur, x)
            if nxt not in index:
                if len(subsets) >= state_cap:
                    raise CapExceeded("determinized state count", state_cap)
                index[nxt] = len(subsets)
                subsets.append(nxt)
            trans.append((i, x, index[nxt]))
        i += 1
    accepting = [j for j, sub in enumerate(subsets) if sub & a.accepting]
    return _build(a.alphabet, len(subsets), [0], accepting, trans, True)


def minimize(a: Automaton) -> Automaton:
    """Minimal complete DFA (Moore partition refinement)."""
    d = trim(determinize(a))
    n = d.state_count
    succ = [[next(iter(d.successors(p, x))) for x in d.alphabet] for p in range(n)]
    block = [1 if p in d.accepting else 0 for p in range(n)]
    while True:
        sig = [(block[p], tuple(block[q] for q in succ[p])) for p in range(n)]
        ids: dict = {}
        new = [ids.setdefault(s, len(ids)) for s in sig]
        if len(ids) == len(set(block)):
            break
        block = new
    # renumber so that the initial state is block 0
    init = next(iter(d.initial))
    order = {block[init]: 0}
    for p in range(n):
        order.setdefault(block[p], len(order))
    trans = {(order[block[p]], x, order[block[succ[p][k]]]) for p in range(n) for k, x in enumerate(d.alphabet)}
    accepting = {order[block[p]] for p in d.accepting}
    return _build(d.alphabet, len(order), [0], accepting, trans, True)


def complement(a: Automaton) -> Automaton:
    d = determinize(a)
    return _build(
        d.alphabet,
        d.state_count,
        d.initial,
        set(range(d.state_count)) - d.accepting,
        d.transitions,
        True,
    )


def _product(a: Automaton, b: Automaton, accept) -> Automaton:
    if a.alphabet != b.alphabet:
        raise ValueError("alphabet mismatch")
    starts = [(p, q) for p in sorted(a.initial) for q in sorted(b.initial)]
    index = {s: i for i, s in enumerate(starts)}
    queue = deque(starts)
    trans = []
    while queue:
        p, q = queue.popleft()
        i = index[(p, q)]
        for x in a.alphabet:
            for p2 in a.successors(p, x):
                for q2 in b.successors(q, x):
                    if (p2, q2) not in index:
                        index[(p2, q2)] = len(index)
                        queue.append((p2, q2))
                    trans.append((i, x, index[(p2, q2)]))
    accepting = [i for (p, q), i in index.items() if accept(p in a.accepting, q in b.accepting)]
    det = a.deterministic and b.deterministic
    return _build(a.alphabet, len(index), range(len(starts)), accepting, trans, det)


def product_intersect(a: Automaton, b: Automaton) -> Automaton:
    return _product(a, b, lambda x, y: x and y)


def union(a: Automaton, b: Automaton) -> Automaton:
    """Disjoint union of two NFAs."""
    if a.alphabet != b.alphabet:
        raise ValueError("alphabet mismatch")
    off = a.state_count
    trans = set(a.transitions) | {(p + off, x, q + off) for p, x, q in b.transitions}
    return _build(
        a.alphabet,
        a.state_count + b.state_count,
        set(a.initial) | {p + off for p in b.initial},
        set(a.accepting) | {p + off for p in b.accepting},
        trans,
    )


def concat(a: Automaton, b: Automaton) -> Automaton:
    if a.alphabet != b.alphabet:
        raise ValueError("alphabet mismatch")
    off = a.state_count
    trans = set(a.transitions) | {(p + off, x, q + off) for p, x, q in b.transitions}
    b_init = {p + off for p in b.initial}
    # a-states that reach an accepting state of a jump into b's initial successors
    for p, x, q in a.transitions:
        if q in a.accepting:
            for r in b_init:
                trans.add((p, x, r))
    initial = set(a.initial)
    if a.initial & a.accepting:
        initial |= b_init
    accepting = {p + off for p in b.accepting}
    if b.initial & b.accepting:
        accepting |= a.accepting
    return _build(a.alphabet, a.state_count + b.state_count, initial, accepting, trans)


def is_empty(a: Automaton) -> bool:
    seen = set(a.initial)
    stack = list(a.initial)
    while stack:
        p = stack.pop()
        if p in a.accepting:
            return False
        for x in a.alphabet:
            for q in a.successors(p, x):
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
    return True


def shortest_word(a: Automaton) -> str | None:
    """A shortest accepted word, or None when the language is empty."""
    prev: dict[int, tuple[int, str] | None] = {p: None for p in a.initial}
    queue = deque(sorted(a.initial))
    while queue:
        p = queue.popleft()
        if p in a.accepting:
            out = []
            while prev[p] is not None:
                p, x = prev[p]
                out.append(x)
            return "".join(reversed(out))
        for x in a.alphabet:
            for q in sorted(a.successors(p, x)):
                if q not in prev:
                    prev[q] = (p, x)
                    queue.append(q)
    return None


def accepts(a: Automaton, word: str) -> bool:
    return a.accepts(word)


def left_quotient(a: Automaton, word: str) -> Automaton:
    """Automaton for w^-1 L = {u | wu in L}."""
    start = a.run(word)
    return _build(a.alphabet, a.state_count, start, a.accepting, a.transitions)


def right_quotient(a: Automaton, word: str) -> Automaton:
    """Automaton for L w^-1 = {u | uw in L}."""
    accepting = [p for p in range(a.state_count) if a.run(word, [p]) & a.accepting]
    return _build(a.alphabet, a.state_count, a.initial, accepting, a.transitions)


def upward_subword_closure(a: Automaton) -> Automaton:
    """Words having some word of L(a) as a scattered subword."""
    loops = {(p, x, p) for p in range(a.state_count) for x in a.alphabet}
    return _build(
        a.alphabet, a.state_count, a.initial, a.accepting, set(a.transitions) | loops
    )


def is_subset(a: Automaton, b: Automaton) -> bool:
    return is_empty(product_intersect(a, complement(b)))


def equivalent(a: Automaton, b: Automaton) -> bool:
    return is_subset(a, b) and is_subset(b, a)


def is_subword(u: str, v: str) -> bool:
    it = iter(v)
    return all(c in it for c in u)


def words_of(a: Automaton, max_len: int) -> list[str]:
    return [w for w in a.alphabet.words(max_len) if a.accepts(w)]


def load_language(spec: str, alphabet: Alphabet) -> Automaton:
    """Resolve a CLI language spec: ``re:<regex>`` or ``nfa:<path to JSON>``."""
    if spec.startswith("re:"):
        return compile(spec[3:], alphabet)
    if spec.startswith("nfa:"):
        with open(spec[4:]) as fh:
            return Automaton.from_json(json.load(fh), alphabet)
    raise ValueError(f"language spec must start with 're:' or 'nfa:', got {spec!r}")


def random_regex(rng, alphabet: Sequence[str], depth: int) -> Regex:
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.08:
            return Epsilon()
        if roll < 0.1:
            return Empty()
        return Letter(rng.choice(list(alphabet)))
    kind = rng.choice(("union", "concat", "concat", "star"))
    if kind == "star":
        return Star(random_regex(rng, alphabet, depth - 1))
    left = random_regex(rng, alphabet, depth - 1)
    right = random_regex(rng, alphabet, depth - 1)
    return Union(left, right) if kind == "union" else Concat(left, right)


def random_nfa(rng, alphabet: Alphabet, max_states: int, density: float = 0.35) -> Automaton:
    n = rng.randint(1, max_states)
    trans = [
        (p, x, q)
        for p in range(n)
        for x in alphabet
        for q in range(n)
        if rng.random() < density
    ]
    accepting = [p for p in range(n) if rng.random() < 0.4]
    return _build(alphabet, n, [0], accepting, trans)
