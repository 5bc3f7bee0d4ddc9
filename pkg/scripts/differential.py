"""Random differential run: oracle agreement, coherence, monotonicity, audits."""

import argparse
import json

from sephier.harness import ALL_LEVELS, InstanceConfig, run_differential


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--levels", default=",".join(ALL_LEVELS))
    ap.add_argument("--nfa-states", type=int, default=4)
    ap.add_argument("--regex-depth", type=int, default=4)
    ap.add_argument("--no-audits", action="store_true")
    ap.add_argument("--slowest", type=int, default=5, help="list the N slowest instances")
    args = ap.parse_args()
    cfg = InstanceConfig(nfa_states=args.nfa_states, regex_depth=args.regex_depth)
    s = run_differential(args.count, args.seed, tuple(args.levels.split(",")), cfg=cfg, audits=not args.no_audits)
    print(json.dumps(s.report(), indent=2))
    for o in sorted(s.outcomes, key=lambda o: -o.seconds)[: args.slowest]:
        print(f"instance {o.index}: {o.seconds:.2f}s {o.separable}")


if __name__ == "__main__":
    main()
