"""Synthesize and verify Pol covers for a few small morphisms."""

import argparse

from sephier.basis import builtin_basis
from sephier.config import Caps
from sephier.lang import Alphabet, compile
from sephier.monoid import morphism_for
from sephier.pol import pol_fixpoint
from sephier.rating import build_rating_map
from sephier.witness import witness_for_language

A = Alphabet.of("ab")
CASES = [
    ("ST0", "(a|b)*a(a|b)*", "b*"),
    ("DD0", "(a|b)(a|b)*", "(a|b)*b"),
    ("ST0", "a*", "b(a|b)*"),
    ("AT", "a*", "(a|b)*aa(a|b)*"),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check-length", type=int, default=6)
    ap.add_argument("--show", type=int, default=8, help="expressions printed per cover")
    args = ap.parse_args()
    caps = Caps(check_length=args.check_length)
    for bname, target, against in CASES:
        B = builtin_basis(bname, A)
        alpha = morphism_for(compile(target, A), B)
        rm = build_rating_map(B, [compile(against, A)])
        out = witness_for_language(alpha, rm, caps, pol_fixpoint(alpha, rm, caps))
        print(f"== {bname}  L={target}  against={against}  |M|={alpha.monoid.size}  ({out['seconds']}s)")
        for c in out["covers"]:
            rep = c["report"]
            print(f"  s={c['s_label']} h={c['h']} k={c['k_used']} exprs={len(c['expressions'])} "
                  f"checked={rep['checked_words']} ok={rep['ok']}")
            for e in c["expressions"][: args.show]:
                print("    " + e)


if __name__ == "__main__":
    main()
