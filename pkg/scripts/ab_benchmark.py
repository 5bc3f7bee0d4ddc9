"""(ab)* against its complement at every level, in both directions."""

import time

from sephier.decide import LEVELS, decide_separation, level, sigma1_oracle
from sephier.lang import Alphabet, compile, complement, is_empty, is_subset, product_intersect

A = Alphabet.of("ab")


def main():
    l1 = compile("(ab)*", A)
    l2 = complement(l1)
    print(f"{'level':8} {'L1|L2':>6} {'L2|L1':>6} {'S':>5} {'TT':>5} {'sec':>6}")
    for name in LEVELS:
        t0 = time.time()
        d12 = decide_separation(level(name, A), l1, l2)
        d21 = decide_separation(level(name, A), l2, l1)
        print(
            f"{name:8} {str(d12.positive):>6} {str(d21.positive):>6} "
            f"{d12.stats['S_size']:>5} {d12.stats['TT_size']:>5} {time.time() - t0:6.2f}"
        )
    print("subword oracle, L1|L2:", sigma1_oracle(l1, l2))
    sep = compile("b(a|b)*|(a|b)*a|(a|b)*aa(a|b)*|(a|b)*bb(a|b)*", A)
    print("explicit separator contains L2:", is_subset(l2, sep))
    print("explicit separator misses L1:", is_empty(product_intersect(sep, l1)))


if __name__ == "__main__":
    main()
