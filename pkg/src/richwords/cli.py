"""Command-line entry point: generation, checks, analysis, search, and the
reproduction targets. Exit codes: 0 success/pass, 1 check failure, 2 usage
or input error."""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .eertree import Antimorphism, Eertree, defect, export_palindrome_graph, first_unrich_prefix
from .generators import verify_equivalence, verify_lemma_identities, word_r
from .numeration import PellRep, decode, encode, is_high_power_period
from .repetitions import (
    R_CRITICAL_EXPONENT,
    SurdThreshold,
    compare_to_surd,
    critexp_bound_check,
    critical_exponent,
    high_power_periods,
    highest_power_exponent,
    parse_exponent,
    period_extension_table,
    predicted_highest_powers,
)
from .search import MODE_EXHAUSTIVE, SearchConfig, run_search

REPRODUCE_TARGETS = (
    "equivalence",
    "richness",
    "periods",
    "highestpowers",
    "critexp",
    "rt2",
    "rt3",
    "rt4-smoke",
    "squares",
)


def _fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _emit(args, payload: dict, passed: bool | None, text: list[str]) -> int:
    if getattr(args, "format", "text") == "json":
        envelope = {
            "tool": "richwords",
            "version": __version__,
            "command": args.command_echo,
            "config": args.config_echo,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "payload": payload,
        }
        if passed is not None:
            envelope["passed"] = passed
        print(json.dumps(envelope, indent=2))
    else:
        for line in text:
            print(line)
        if passed is not None:
            print("PASS" if passed else "FAIL")
    if passed is None:
        return 0
    return 0 if passed else 1


def _read_word(args) -> str:
    if getattr(args, "word", None):
        return args.word
    if getattr(args, "input", None):
        with open(args.input) as fh:
            return fh.read().strip()
    if getattr(args, "stdin", False):
        return sys.stdin.read().strip()
    raise ValueError("no input word: pass --word, --input FILE, or --stdin")


# ---------------------------------------------------------------- commands


def cmd_pell(args) -> int:
    if args.action == "encode":
        n = int(args.value)
        if n < 0:
            raise ValueError("cannot encode a negative integer")
        digits = str(encode(n))
        return _emit(args, {"n": n, "digits": digits}, None, [digits])
    rep = PellRep.from_string(args.value)
    value = decode(rep)
    return _emit(args, {"digits": args.value, "n": value}, None, [str(value)])


def cmd_generate(args) -> int:
    w = word_r(args.method_key, args.length)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(w + "\n")
        return _emit(args, {"length": len(w), "out": args.out}, None,
                     [f"wrote {len(w)} symbols to {args.out}"])
    return _emit(args, {"length": len(w), "word": w}, None, [w])


def cmd_verify_morphisms(args) -> int:
    rep_l = verify_lemma_identities(args.max_k)
    rep_e = verify_equivalence(args.max_k)
    payload = {
        "max_k": args.max_k,
        "nesting_identities": {"checked": rep_l.checked, "failures": rep_l.failures},
        "equivalence_identities": {"checked": rep_e.checked, "failures": rep_e.failures},
    }
    passed = rep_l.ok and rep_e.ok
    text = [
        f"nesting identities: {rep_l.checked} checked, {len(rep_l.failures)} failures",
        f"equivalence identities: {rep_e.checked} checked, {len(rep_e.failures)} failures",
    ]
    return _emit(args, payload, passed, text)


def cmd_check_rich(args) -> int:
    w = _read_word(args)
    bad = first_unrich_prefix(w)
    if bad is None:
        return _emit(args, {"length": len(w), "rich": True}, True, ["rich"])
    return _emit(args, {"length": len(w), "rich": False, "first_bad_prefix": bad},
                 False, [f"not rich at prefix length {bad}"])


def cmd_palgraph(args) -> int:
    t = Eertree()
    for a in args.word:
        t.append(a)
    g = export_palindrome_graph(t)
    if args.graph_format == "dot":
        dot = g.to_dot()
        return _emit(args, {"dot": dot}, None, [dot])
    args.format = "json"  # graph as machine-readable envelope
    return _emit(args, g.to_json_dict(), None, [])


def cmd_critical_exponent(args) -> int:
    w = _read_word(args)
    if args.max_length is not None:
        w = w[: args.max_length]
    if not w:
        raise ValueError("empty input word")
    e = critical_exponent(w)
    payload = {"length": len(w), "critical_exponent": _fraction_str(e),
               "approx": float(e)}
    return _emit(args, payload, None, [f"{_fraction_str(e)} ({float(e):.6f})"])


def cmd_defect(args) -> int:
    w = _read_word(args)
    letter_map = {a: a for a in set(w)}
    for pair in args.swap or []:
        if len(pair) != 2:
            raise ValueError(f"--swap takes two symbols, got {pair!r}")
        letter_map[pair[0]] = pair[1]
        letter_map[pair[1]] = pair[0]
    theta = Antimorphism(letter_map)
    d = defect(w, theta)
    payload = {"length": len(w), "defect": d,
               "swaps": sorted(p for p in (args.swap or []))}
    return _emit(args, payload, None, [str(d)])


def cmd_analyze_r(args) -> int:
    w = word_r("morphic-phi-tau", args.length)
    ext = period_extension_table(w)
    preds = [p for p in predicted_highest_powers(40) if p.period < args.length]
    rows = []
    for pred in preds:
        observed = int(ext[pred.period])
        e = Fraction(observed + pred.period, pred.period)
        rows.append({
            "period": pred.period,
            "period_pell": str(encode(pred.period)),
            "max_extension_observed": observed,
            "exponent": _fraction_str(e),
            "predicted_extension": pred.extension,
            "match": observed == pred.extension,
        })
    hp = sorted(high_power_periods(w, Fraction(5, 2)))
    payload = {
        "length": args.length,
        "high_power_periods": hp,
        "high_power_periods_pell": [str(encode(p)) for p in hp],
        "all_in_family": all(is_high_power_period(p) for p in hp),
        "repetitions": rows,
    }
    if args.table_format == "csv":
        lines = ["period,period_pell,max_extension_observed,exponent,predicted_extension,match"]
        for r in rows:
            lines.append(
                f"{r['period']},{r['period_pell']},{r['max_extension_observed']},"
                f"{r['exponent']},{r['predicted_extension']},{r['match']}"
            )
        lines.append(f"# high power periods: {hp}")
        return _emit(args, payload, None, lines)
    args.format = "json"
    return _emit(args, payload, None, [])


def _search_config(args) -> SearchConfig:
    if args.surd:
        if args.threshold:
            raise ValueError("give either --threshold or --surd, not both")
        threshold = SurdThreshold.parse(args.surd)
    elif args.threshold:
        threshold = parse_exponent(args.threshold)
    else:
        raise ValueError("a threshold is required: --threshold A/B or --surd A+Bsqrt2/C")
    return SearchConfig(
        alphabet_size=args.alphabet,
        threshold=threshold,
        mode=args.mode,
        max_depth=args.max_depth,
        node_budget=args.node_budget,
        checkpoint_interval=args.checkpoint_interval,
        split_depth=args.split_depth,
        workers=args.workers,
        engine=args.engine,
    )


def _result_payload(res) -> dict:
    return res.to_dict()


def cmd_search(args) -> int:
    config = _search_config(args)
    res = run_search(config, resume_path=args.resume, checkpoint_path=args.checkpoint)
    payload = _result_payload(res)
    text = [
        f"longest: {res.longest_length}",
        f"witness: {res.witness}",
        f"nodes explored: {res.nodes_explored}",
        f"exhausted: {res.exhausted}",
        f"wall time: {res.wall_time:.2f}s",
    ]
    return _emit(args, payload, None, text)


# ------------------------------------------------------------- reproduce


def _repro_equivalence(args) -> tuple[dict, bool, list[str]]:
    n = args.max_length or 100_000
    rep_l = verify_lemma_identities(12)
    rep_e = verify_equivalence(12)
    w1 = word_r("morphic-phi-tau", n)
    agree = w1 == word_r("morphic-f-g", n) == word_r("dfao", n)
    head_ok = w1[:15] == "001001100100110"
    passed = rep_l.ok and rep_e.ok and agree and head_ok
    payload = {
        "prefix_length": n,
        "three_way_agreement": agree,
        "first_15": w1[:15],
        "identity_failures": rep_l.failures + rep_e.failures,
    }
    text = [f"three-way agreement on {n} symbols: {agree}",
            f"first 15 symbols: {w1[:15]}",
            f"identity failures: {rep_l.failures + rep_e.failures}"]
    return payload, passed, text


def _repro_richness(args) -> tuple[dict, bool, list[str]]:
    n = args.max_length or 50_000
    w = word_r("morphic-phi-tau", n)
    bad = first_unrich_prefix(w)
    payload = {"prefix_length": n, "first_bad_prefix": bad}
    text = [f"checked {n} appends, every prefix rich: {bad is None}"]
    return payload, bad is None, text


def _observed_family(args) -> tuple[str, dict[int, int]]:
    n = args.max_length or 20_000
    w = word_r("morphic-phi-tau", n)
    ext = period_extension_table(w)
    obs = {p.period: int(ext[p.period])
           for p in predicted_highest_powers(40) if p.period < n}
    return w, obs


def _repro_periods(args) -> tuple[dict, bool, list[str]]:
    n = args.max_length or 20_000
    w = word_r("morphic-phi-tau", n)
    hp = sorted(high_power_periods(w, Fraction(5, 2)))
    in_family = all(is_high_power_period(p) for p in hp)
    required = {7, 17, 41}
    has_required = required <= set(hp) if n >= 20_000 else True
    payload = {
        "prefix_length": n,
        "periods": hp,
        "pell_digits": [str(encode(p)) for p in hp],
        "all_in_family": in_family,
        "contains_required": sorted(required & set(hp)),
    }
    text = [f"periods with exponent >= 5/2 in r[:{n}]: {hp}",
            f"all of the form P_n + P_(n-1): {in_family}"]
    return payload, in_family and has_required, text


def _repro_highestpowers(args) -> tuple[dict, bool, list[str]]:
    n = args.max_length or 20_000
    w, obs = _observed_family(args)
    preds = {p.period: p.extension for p in predicted_highest_powers(40) if p.period < n}
    matched = {p for p, s in obs.items() if s == preds[p]}
    exceeded = {p for p, s in obs.items() if s > preds[p]}
    required = {7, 17, 41}
    ok = not exceeded and (required <= matched if n >= 20_000 else bool(matched))
    payload = {
        "prefix_length": n,
        "observed_extension": obs,
        "predicted_extension": preds,
        "matched_periods": sorted(matched),
        "exceeded_periods": sorted(exceeded),
    }
    text = [f"periods matching predictions exactly: {sorted(matched)}",
            f"periods exceeding predictions: {sorted(exceeded)}"]
    return payload, ok, text


def _repro_critexp(args) -> tuple[dict, bool, list[str]]:
    n = args.max_length or 20_000
    w = word_r("morphic-phi-tau", n)
    ext = period_extension_table(w)
    below = all(
        compare_to_surd(Fraction(int(ext[p]) + p, p), R_CRITICAL_EXPONENT) == "less"
        for p in range(1, len(w))
    )
    exps = [highest_power_exponent(m) for m in range(1, 22)]
    increasing = all(a < b for a, b in zip(exps, exps[1:]))
    bounds = all(critexp_bound_check(m) for m in range(4, 21))
    largest_m = max(
        m for m in range(1, 40)
        if (pred := predicted_highest_powers(m)[-1]).period <= n
    )
    e_m = highest_power_exponent(largest_m)
    gap_small = R_CRITICAL_EXPONENT.compare_rational(e_m + Fraction(1, 1000)) < 0
    ce = critical_exponent(w)
    passed = below and increasing and bounds and gap_small
    payload = {
        "prefix_length": n,
        "measured_critical_exponent": _fraction_str(ce),
        "approx": float(ce),
        "all_exponents_below_threshold": below,
        "sequence_strictly_increasing": increasing,
        "algebraic_bounds_hold": bounds,
        "largest_m": largest_m,
        "limit_gap_below_1e-3": gap_small,
    }
    text = [
        f"measured critical exponent of r[:{n}]: {_fraction_str(ce)} ({float(ce):.6f})",
        f"all factor exponents < 2+sqrt(2)/2: {below}",
        f"exponent sequence increasing and within 1e-3 at m={largest_m}: "
        f"{increasing and gap_small}",
    ]
    return payload, passed, text


def _repro_search(args, k: int, threshold: Fraction, expected: int,
                  max_depth: int) -> tuple[dict, bool, list[str]]:
    config = SearchConfig(
        alphabet_size=k,
        threshold=threshold,
        mode=MODE_EXHAUSTIVE,
        max_depth=max_depth,
        node_budget=args.node_budget,
        workers=args.workers,
    )
    res = run_search(config)
    passed = res.exhausted and res.longest_length == expected
    payload = _result_payload(res)
    payload["expected_longest"] = expected
    text = [f"k={k}, threshold {_fraction_str(threshold)}: longest "
            f"{res.longest_length} (expected {expected}), nodes {res.nodes_explored}, "
            f"exhausted {res.exhausted}, {res.wall_time:.1f}s"]
    return payload, passed, text


def _repro_rt4(args) -> tuple[dict, bool, list[str]]:
    config = SearchConfig(
        alphabet_size=4,
        threshold=Fraction(11, 5),
        max_depth=1200,
        node_budget=args.node_budget or 3_000_000,
        workers=args.workers,
    )
    res = run_search(config)
    passed = res.longest_length >= 1000 and not res.exhausted
    payload = _result_payload(res)
    text = [f"k=4, threshold 11/5: reached depth {res.longest_length} in "
            f"{res.nodes_explored} nodes, exhausted {res.exhausted}"]
    return payload, passed, text


def _repro_squares(args) -> tuple[dict, bool, list[str]]:
    out = {}
    passed = True
    text = []
    for k in (2, 3):
        config = SearchConfig(alphabet_size=k, threshold=Fraction(2),
                              max_depth=100, node_budget=args.node_budget)
        res = run_search(config)
        out[f"k{k}"] = _result_payload(res)
        passed = passed and res.exhausted
        text.append(f"k={k}: longest square-free rich word {res.longest_length} "
                    f"(tree exhausted: {res.exhausted})")
    return out, passed, text


def cmd_reproduce(args) -> int:
    handlers = {
        "equivalence": _repro_equivalence,
        "richness": _repro_richness,
        "periods": _repro_periods,
        "highestpowers": _repro_highestpowers,
        "critexp": _repro_critexp,
        "rt2": lambda a: _repro_search(a, 2, Fraction(27, 10), 1339, 1500),
        "rt3": lambda a: _repro_search(a, 3, Fraction(9, 4), 114, 300),
        "rt4-smoke": _repro_rt4,
        "squares": _repro_squares,
    }
    payload, passed, text = handlers[args.target](args)
    payload["target"] = args.target
    return _emit(args, payload, passed, text)


# ------------------------------------------------------------------ main


def _build_parser() -> argparse.ArgumentParser:
    default_format = os.environ.get("RICHWORDS_FORMAT", "text")
    if default_format not in ("text", "json"):
        default_format = "text"
    top = argparse.ArgumentParser(
        prog="richwords",
        description="Rich words: generation, richness checks, repetition "
        "analysis, and repetition-threshold search.",
    )
    top.add_argument("--format", choices=("text", "json"), default=default_format,
                     help="output format for results (env RICHWORDS_FORMAT)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pell", help="Pell number system encode/decode")
    p.add_argument("action", choices=("encode", "decode"))
    p.add_argument("value")
    p.set_defaults(func=cmd_pell)

    p = sub.add_parser("generate", help="emit a prefix of the word r")
    p.add_argument("--method", choices=("phi-tau", "f-g", "dfao"), default="phi-tau")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--out", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify-morphisms", help="check the generator identities")
    p.add_argument("--max-k", type=int, default=12)
    p.set_defaults(func=cmd_verify_morphisms)

    p = sub.add_parser("check-rich", help="test palindromic richness of a word")
    p.add_argument("--word")
    p.add_argument("--input", help="read the word from a file")
    p.add_argument("--stdin", action="store_true", help="read the word from stdin")
    p.set_defaults(func=cmd_check_rich)

    p = sub.add_parser("palgraph", help="emit the palindrome graph of a word")
    p.add_argument("--word", required=True)
    p.add_argument("--format", dest="graph_format", choices=("dot", "json"),
                   default="dot")
    p.set_defaults(func=cmd_palgraph)

    p = sub.add_parser("critical-exponent", help="largest factor exponent of a word")
    p.add_argument("--word")
    p.add_argument("--input")
    p.add_argument("--stdin", action="store_true")
    p.add_argument("--max-length", type=int)
    p.set_defaults(func=cmd_critical_exponent)

    p = sub.add_parser("defect", help="palindromic defect of a word")
    p.add_argument("--word")
    p.add_argument("--input")
    p.add_argument("--stdin", action="store_true")
    p.add_argument("--swap", action="append",
                   help="two symbols exchanged by the antimorphism, e.g. --swap 01")
    p.set_defaults(func=cmd_defect)

    p = sub.add_parser("analyze-r", help="repetition structure of an r-prefix")
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--format", dest="table_format", choices=("json", "csv"),
                   default="json")
    p.set_defaults(func=cmd_analyze_r)

    p = sub.add_parser("search", help="backtracking search for long feasible words")
    p.add_argument("--alphabet", type=int, required=True)
    p.add_argument("--threshold", help="forbid exponents >= this rational, as A/B")
    p.add_argument("--surd", help="forbid exponents >= (A+B*sqrt2)/C, as A+Bsqrt2/C")
    p.add_argument("--mode", choices=("exhaustive", "lyndon"), default="exhaustive")
    p.add_argument("--max-depth", type=int)
    p.add_argument("--node-budget", type=int)
    p.add_argument("--checkpoint", help="write resumable state to this file")
    p.add_argument("--checkpoint-interval", type=int)
    p.add_argument("--resume", help="resume from a checkpoint file")
    p.add_argument("--split-depth", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--engine", choices=("auto", "python", "numba"), default="auto")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("reproduce", help="run one named reproduction and report pass/fail")
    p.add_argument("target", choices=REPRODUCE_TARGETS)
    p.add_argument("--max-length", type=int, help="scale down the prefix length")
    p.add_argument("--node-budget", type=int, help="scale down the search size")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_reproduce)

    return top


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    args.command_echo = argv
    config_echo = {k: v for k, v in vars(args).items()
                   if k not in ("func", "command_echo", "config_echo") and v is not None}
    config_echo.pop("func", None)
    args.config_echo = {k: (str(v) if isinstance(v, Fraction) else v)
                        for k, v in config_echo.items()}
    if args.command == "generate":
        args.method_key = {"phi-tau": "morphic-phi-tau", "f-g": "morphic-f-g",
                           "dfao": "dfao"}[args.method]
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
