"""Random instances and the differential check suite used by ``selftest``,
the experiment scripts and the acceptance tests."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .config import Caps
from .decide import decide_covering, decide_separation, level, sigma1_oracle
from .lang import (
    Alphabet,
    Automaton,
    CapExceeded,
    compile_regex,
    complement,
    product_intersect,
    random_nfa,
    random_regex,
)
from .pbpol import audit_pbpol
from .pol import audit_pol, pol_fixpoint

ALL_LEVELS = ("sigma1", "sigma2", "sigma3", "dd12", "dd32")
CHAINS = (("sigma1", "sigma2", "sigma3"), ("dd12", "dd32"))


@dataclass(frozen=True)
class InstanceConfig:
    alphabet: str = "ab"
    nfa_states: int = 4
    regex_depth: int = 4
    nfa_share: float = 0.5
    # most random pairs intersect, which short-circuits; bias towards disjoint ones
    disjoint_bias: float = 0.8


def random_language(rng: random.Random, cfg: InstanceConfig) -> Automaton:
    A = Alphabet.of(cfg.alphabet)
    if rng.random() < cfg.nfa_share:
        return random_nfa(rng, A, cfg.nfa_states)
    return compile_regex(random_regex(rng, cfg.alphabet, cfg.regex_depth), A)


def random_instance(rng: random.Random, cfg: InstanceConfig | None = None) -> tuple[Automaton, Automaton]:
    cfg = cfg or InstanceConfig()
    l1, l2 = random_language(rng, cfg), random_language(rng, cfg)
    if rng.random() < cfg.disjoint_bias:
        l2 = product_intersect(l2, complement(l1))
    return l1, l2


def instances(count: int, seed: int, cfg: InstanceConfig | None = None) -> list[tuple[Automaton, Automaton]]:
    rng = random.Random(seed)
    return [random_instance(rng, cfg) for _ in range(count)]


@dataclass
class InstanceOutcome:
    index: int
    separable: dict = field(default_factory=dict)  # level -> bool | None (None = cap)
    covering: dict = field(default_factory=dict)
    oracle: bool | None = None
    audit_problems: list = field(default_factory=list)
    inclusion_violations: list = field(default_factory=list)
    seconds: float = 0.0

    def completed(self, levels) -> bool:
        return all(self.separable.get(lv) is not None for lv in levels)


@dataclass
class Summary:
    outcomes: list
    seconds: float

    def _count(self, pred) -> int:
        return sum(1 for o in self.outcomes if pred(o))

    @property
    def oracle_mismatches(self) -> list[int]:
        return [
            o.index
            for o in self.outcomes
            if o.separable.get("sigma1") is not None and o.oracle is not None and o.separable["sigma1"] != o.oracle
        ]

    @property
    def coherence_mismatches(self) -> list[tuple[int, str]]:
        return [
            (o.index, lv)
            for o in self.outcomes
            for lv, v in o.separable.items()
            if v is not None and o.covering.get(lv) is not None and v != o.covering[lv]
        ]

    def monotonicity_violations(self) -> list[tuple[int, str, str]]:
        out = []
        for o in self.outcomes:
            for chain in CHAINS:
                for lo, hi in zip(chain, chain[1:]):
                    a, b = o.separable.get(lo), o.separable.get(hi)
                    if a is True and b is False:
                        out.append((o.index, lo, hi))
        return out

    def completed(self, levels) -> int:
        return self._count(lambda o: o.completed(levels))

    @property
    def audit_problems(self) -> list:
        return [(o.index, p) for o in self.outcomes for p in o.audit_problems]

    @property
    def inclusion_violations(self) -> list:
        return [(o.index, p) for o in self.outcomes for p in o.inclusion_violations]

    def report(self) -> dict:
        return {
            "instances": len(self.outcomes),
            "completed_all_levels": self.completed([lv for lv in ALL_LEVELS if any(lv in o.separable for o in self.outcomes)]),
            "oracle_mismatches": len(self.oracle_mismatches),
            "coherence_mismatches": len(self.coherence_mismatches),
            "monotonicity_violations": len(self.monotonicity_violations()),
            "audit_problems": len(self.audit_problems),
            "inclusion_violations": len(self.inclusion_violations),
            "seconds": round(self.seconds, 2),
        }


def check_instance(
    index: int,
    l1: Automaton,
    l2: Automaton,
    levels=ALL_LEVELS,
    caps: Caps | None = None,
    coherence: bool = True,
    audits: bool = True,
) -> InstanceOutcome:
    caps = caps or Caps()
    t0 = time.time()
    out = InstanceOutcome(index)
    A = l1.alphabet
    for lv in levels:
        spec = level(lv, A)
        try:
            out.separable[lv] = decide_separation(spec, l1, l2, caps).positive
        except CapExceeded:
            out.separable[lv] = None
        if not (coherence or audits):
            continue
        keep: list = []
        try:
            out.covering[lv] = decide_covering(spec, l1, [l2], caps, keep).positive
        except CapExceeded:
            out.covering[lv] = None
            continue
        if not audits:
            continue
        run = keep[0]
        if spec.kind == "pol":
            out.audit_problems += [f"{lv}: {p}" for p in audit_pol(run.S)]
        else:
            out.audit_problems += [f"{lv}: {p}" for p in audit_pbpol(run.state)]
            try:
                pol_S = pol_fixpoint(run.alpha, run.rating, caps)
            except CapExceeded:
                continue
            if not run.S.issubset(pol_S):
                out.inclusion_violations.append(f"{lv}: PBPol S not inside Pol S")
    out.oracle = sigma1_oracle(l1, l2)
    out.seconds = time.time() - t0
    return out


def run_differential(
    count: int = 200,
    seed: int = 0,
    levels=ALL_LEVELS,
    caps: Caps | None = None,
    cfg: InstanceConfig | None = None,
    coherence: bool = True,
    audits: bool = True,
) -> Summary:
    t0 = time.time()
    outcomes = [
        check_instance(i, l1, l2, levels, caps, coherence, audits)
        for i, (l1, l2) in enumerate(instances(count, seed, cfg))
    ]
    return Summary(outcomes, time.time() - t0)
