"""Separation and covering deciders for Pol(C) and PBPol(C) levels."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .basis import Basis, builtin_basis, load_basis
from .config import Caps
from .lang import (
    Alphabet,
    Automaton,
    is_empty,
    product_intersect,
    upward_subword_closure,
)
from .monoid import morphism_for
from .pbpol import pbpol_fixpoint
from .pol import imprint_of_language, pol_fixpoint
from .rating import build_rating_map

LEVELS = {
    "sigma1": ("pol", "ST0"),
    "sigma2": ("pol", "AT"),
    "sigma3": ("pbpol", "AT"),
    "dd12": ("pol", "DD0"),
    "dd32": ("pbpol", "DD0"),
}


@dataclass(frozen=True)
class LevelSpec:
    kind: str
    basis: Basis

    def __post_init__(self):
        if self.kind not in ("pol", "pbpol"):
            raise ValueError(f"unknown closure kind {self.kind!r}")

    @property
    def name(self) -> str:
        return f"{self.kind}:{self.basis.name}"


def level(name: str, alphabet: Alphabet) -> LevelSpec:
    """Resolve ``sigma1`` ... ``dd32`` or ``pol:<basis>`` / ``pbpol:<basis>``.

    ``<basis>`` is ST0, AT, DD0 or a path to a custom basis JSON file.
    """
    if name in LEVELS:
        kind, bname = LEVELS[name]
        return LevelSpec(kind, builtin_basis(bname, alphabet))
    kind, sep, rest = name.partition(":")
    if not sep or kind not in ("pol", "pbpol"):
        raise ValueError(f"unknown class {name!r}")
    return LevelSpec(kind, load_basis(rest, alphabet))


@dataclass
class Decision:
    positive: bool
    blocking_row: dict | None = None
    witness: dict | None = None
    stats: dict = field(default_factory=lambda: {"S_size": 0, "TT_size": 0, "iterations": 0})
    reason: str = "fixpoint"

    def __bool__(self) -> bool:
        return self.positive

    def to_json(self) -> dict:
        evidence = {"reason": self.reason}
        if self.blocking_row is not None:
            evidence["blocking_row"] = self.blocking_row
        return {
            "decision": self.positive,
            "evidence": evidence,
            "witness": self.witness,
            "stats": dict(self.stats),
        }


@dataclass
class CoveringRun:
    """Everything computed for one covering instance (kept for audits)."""

    alpha: object
    rating: object
    S: object
    state: object = None


def run_fixpoint(level: LevelSpec, alpha, rm, caps: Caps, order_seed=None):
    if level.kind == "pol":
        S = pol_fixpoint(alpha, rm, caps, order_seed)
        return S, None
    state = pbpol_fixpoint(alpha, rm, caps, order_seed)
    return state.S, state


def decide_covering(
    level: LevelSpec,
    target: Automaton,
    against: Sequence[Automaton],
    caps: Caps | None = None,
    keep: list | None = None,
) -> Decision:
    """Is there a finite cover of ``target`` by level languages, none of which
    meets every language of ``against``?

    Decided by looking for a row (s, r) of the optimal pointed imprint with s
    accepting and delta(r) = all of ``against``.
    """
    caps = caps or Caps()
    if not against:
        raise ValueError("covering needs at least one language to avoid")
    basis = level.basis
    rm = build_rating_map(basis, against, caps.monoid)
    alpha = morphism_for(target, basis, caps.monoid)
    S, state = run_fixpoint(level, alpha, rm, caps)
    if keep is not None:
        keep.append(CoveringRun(alpha, rm, S, state))
    stats = {
        "S_size": len(S),
        "TT_size": state.tt_size if state is not None else 0,
        "iterations": S.stats.iterations,
    }
    full = frozenset(range(len(against)))
    accepting = sorted(alpha.accepting)
    for s in accepting:
        for r in sorted(S.maxima.get(s, ())):
            if rm.delta(r) == full:
                row = {
                    "s": s,
                    "s_label": alpha.monoid.label(s),
                    "r": rm.render(r),
                    "delta": sorted(full),
                }
                return Decision(False, row, stats=stats)
    return Decision(True, stats=stats)


def decide_separation(
    level: LevelSpec,
    l1: Automaton,
    l2: Automaton,
    caps: Caps | None = None,
    witness: bool = False,
    keep: list | None = None,
) -> Decision:
    """Is there a level language K with L1 inside K and K disjoint from L2?"""
    if l1.alphabet != l2.alphabet:
        raise ValueError("alphabet mismatch")
    if is_empty(l1):
        d = Decision(True, reason="empty L1")
    elif not is_empty(product_intersect(l1, l2)):
        d = Decision(False, reason="L1 meets L2")
    elif is_empty(l2):
        d = Decision(True, reason="empty L2")
    else:
        d = decide_covering(level, l1, [l2], caps, keep)
    if witness and d.positive and level.kind == "pol" and level.basis.name == "ST0":
        sep = upward_subword_closure(l1)
        d.witness = {"kind": "upward_subword_closure", "nfa": sep.to_json()}
    return d


def sigma1_oracle(l1: Automaton, l2: Automaton) -> bool:
    """Separable by a piecewise-upward language iff the upward closure of L1
    misses L2."""
    return is_empty(product_intersect(upward_subword_closure(l1), l2))
