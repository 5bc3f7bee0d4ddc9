"""``sephier``: separation and covering for Pol(C) / PBPol(C) levels.

Exit codes: 0 positive, 1 negative, 2 error or cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

from . import FORMAT_VERSION, __version__
from .config import Caps
from .decide import decide_covering, decide_separation, level, sigma1_oracle
from .lang import Alphabet, CapExceeded, RegexSyntaxError, complement, load_language
from .monoid import morphism_for
from .rating import build_rating_map

CAP_FLAGS = {
    "monoid": "max monoid size",
    "downset": "max hemiring descendants enumerated",
    "tt_entries": "max stored TT entries",
    "iterations": "max fixpoint additions",
    "idempotent_search": "max candidates in idempotent searches",
    "expressions": "max cover expressions",
    "check_length": "word-length bound for cover verification",
}


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alphabet", default="ab", help="letters, e.g. 'ab' (default: ab)")
    p.add_argument("--json", action="store_true", help="JSON output")
    defaults = Caps()
    g = p.add_argument_group("caps")
    for name, help_ in CAP_FLAGS.items():
        g.add_argument(
            "--cap-" + name.replace("_", "-"),
            dest="cap_" + name,
            type=int,
            default=getattr(defaults, name),
            help=f"{help_} (default {getattr(defaults, name)})",
        )


def _add_dumps(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dump-monoid", action="store_true")
    p.add_argument("--dump-rating", action="store_true")
    p.add_argument("--dump-tt", action="store_true")
    p.add_argument("--dump-imprint", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sephier", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"sephier {__version__} (format {FORMAT_VERSION})")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("sep", help="decide separation of L1 from L2")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--l1", required=True)
    p.add_argument("--l2", required=True)
    p.add_argument("--witness", action="store_true")
    _add_common(p)
    _add_dumps(p)

    p = sub.add_parser("cover", help="decide covering of a target by level languages")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--against", action="append", required=True)
    _add_common(p)
    _add_dumps(p)

    p = sub.add_parser("imprint", help="print the optimal pointed imprint")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--lang", required=True)
    p.add_argument("--against", action="append", help="rating languages (default: complement of --lang)")
    _add_common(p)
    p.add_argument("--dump-tt", action="store_true")

    p = sub.add_parser("witness", help="synthesize and verify Pol(C) covers (experimental)")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--lang", required=True)
    p.add_argument("--against", action="append", help="rating languages (default: complement of --lang)")
    p.add_argument("--max-check-len", type=int, default=None)
    p.add_argument("--k", type=int, default=None, help="fixed idempotent search window")
    _add_common(p)

    p = sub.add_parser("oracle", help="independent subword-closure check for sigma1")
    p.add_argument("--l1", required=True)
    p.add_argument("--l2", required=True)
    _add_common(p)

    p = sub.add_parser("selftest", help="random differential suite")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--levels", default="sigma1,sigma2,sigma3,dd12,dd32")
    p.add_argument("--no-audits", action="store_true")
    _add_common(p)
    return ap


def caps_from(args) -> Caps:
    return Caps(**{f.name: getattr(args, "cap_" + f.name) for f in fields(Caps)})


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _dumps(args, runs) -> dict:
    out = {}
    if not runs:
        return out
    run = runs[0]
    if getattr(args, "dump_monoid", False):
        out["monoid"] = run.alpha.to_json()
    if getattr(args, "dump_rating", False):
        out["rating"] = run.rating.to_json()
    if getattr(args, "dump_imprint", False):
        out["imprint"] = run.S.to_json()
    if getattr(args, "dump_tt", False):
        out["tt"] = run.state.tt_to_json() if run.state is not None else []
    return out


def _decision_text(word: str, d) -> str:
    lines = [f"{word}: {'yes' if d.positive else 'no'} ({d.reason})"]
    if d.blocking_row:
        r = d.blocking_row
        lines.append(f"  blocking row: s={r['s_label']} r={r['r']} delta={r['delta']}")
    st = d.stats
    lines.append(f"  S={st['S_size']} TT={st['TT_size']} iterations={st['iterations']}")
    if d.witness:
        lines.append(f"  witness: {d.witness['kind']} ({d.witness['nfa']['states']} states)")
    return "\n".join(lines)


def cmd_sep(args) -> int:
    A = Alphabet.of(args.alphabet)
    spec = level(args.cls, A)
    l1, l2 = load_language(args.l1, A), load_language(args.l2, A)
    runs: list = []
    d = decide_separation(spec, l1, l2, caps_from(args), witness=args.witness, keep=runs)
    payload = d.to_json()
    payload.update(_dumps(args, runs))
    _emit(args, payload, _decision_text("separable", d))
    return 0 if d.positive else 1


def cmd_cover(args) -> int:
    A = Alphabet.of(args.alphabet)
    spec = level(args.cls, A)
    target = load_language(args.target, A)
    against = [load_language(x, A) for x in args.against]
    runs: list = []
    d = decide_covering(spec, target, against, caps_from(args), keep=runs)
    payload = d.to_json()
    payload.update(_dumps(args, runs))
    _emit(args, payload, _decision_text("coverable", d))
    return 0 if d.positive else 1


def _rating_inputs(args, A):
    lang = load_language(args.lang, A)
    against = [load_language(x, A) for x in args.against] if args.against else [complement(lang)]
    return lang, against


def cmd_imprint(args) -> int:
    from .decide import run_fixpoint

    A = Alphabet.of(args.alphabet)
    spec = level(args.cls, A)
    caps = caps_from(args)
    lang, against = _rating_inputs(args, A)
    rm = build_rating_map(spec.basis, against, caps.monoid)
    alpha = morphism_for(lang, spec.basis, caps.monoid)
    S, state = run_fixpoint(spec, alpha, rm, caps)
    payload = {"level": spec.name, "S": S.to_json(), "stats": S.stats.to_json()}
    if args.dump_tt and state is not None:
        payload["tt"] = state.tt_to_json()
    text = "\n".join(f"{row['s_label']}\t{row['r']}\tdelta={row['delta']}" for row in payload["S"])
    _emit(args, payload, text)
    return 0


def cmd_witness(args) -> int:
    from dataclasses import replace

    from .pol import pol_fixpoint
    from .witness import witness_for_language

    A = Alphabet.of(args.alphabet)
    spec = level(args.cls, A)
    if spec.kind != "pol":
        print("witness synthesis is only available for pol:<basis> levels", file=sys.stderr)
        return 2
    caps = caps_from(args)
    if args.max_check_len is not None:
        caps = replace(caps, check_length=args.max_check_len)
    lang, against = _rating_inputs(args, A)
    rm = build_rating_map(spec.basis, against, caps.monoid)
    alpha = morphism_for(lang, spec.basis, caps.monoid)
    S = pol_fixpoint(alpha, rm, caps)
    out = witness_for_language(alpha, rm, caps, S, k=args.k)
    ok = all(c["report"]["ok"] for c in out["covers"])
    out["ok"] = ok
    lines = []
    for c in out["covers"]:
        rep = c["report"]
        lines.append(f"s={c['s_label']} h={c['h']} expressions={len(c['expressions'])} ok={rep['ok']}")
        lines += ["  " + e for e in c["expressions"][:20]]
        if len(c["expressions"]) > 20:
            lines.append(f"  ... {len(c['expressions']) - 20} more")
    _emit(args, out, "\n".join(lines))
    return 0 if ok else 1


def cmd_oracle(args) -> int:
    A = Alphabet.of(args.alphabet)
    ok = sigma1_oracle(load_language(args.l1, A), load_language(args.l2, A))
    _emit(args, {"separable": ok}, "separable" if ok else "not separable")
    return 0 if ok else 1


def cmd_selftest(args) -> int:
    from .harness import InstanceConfig, run_differential

    levels = tuple(x for x in args.levels.split(",") if x)
    s = run_differential(
        args.count,
        args.seed,
        levels,
        caps_from(args),
        InstanceConfig(alphabet=args.alphabet),
        audits=not args.no_audits,
    )
    rep = s.report()
    failures = (
        rep["oracle_mismatches"]
        + rep["coherence_mismatches"]
        + rep["monotonicity_violations"]
        + rep["audit_problems"]
        + rep["inclusion_violations"]
    )
    rep["passed"] = failures == 0
    text = "\n".join(f"{k}: {v}" for k, v in rep.items())
    _emit(args, rep, text)
    return 0 if failures == 0 else 1


COMMANDS = {
    "sep": cmd_sep,
    "cover": cmd_cover,
    "imprint": cmd_imprint,
    "witness": cmd_witness,
    "oracle": cmd_oracle,
    "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except CapExceeded as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return 2
    except (RegexSyntaxError, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
