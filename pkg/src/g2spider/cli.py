"""Command-line interface: ``g2spider {reduce,eval-braid,decompose,verify}``.

Input files hold one record per line; ``-`` reads standard input.

* web combinations: JSON lines ``{"coeff": "...", "web": "web { ... }"}`` or
  bare ``web { ... }`` lines (coefficient 1);
* braid algebra elements: JSON lines ``{"coeff": "...", "word": "B3: s1"}``
  or bare words (coefficient 1), summed.

``--format text`` writes the same line formats; ``--format json`` writes one
JSON document carrying ``"schema": 1``.  Exit status is 0 on success, 1 when
a verification fails (or a step budget runs out) and 2 on usage or parse
errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Sequence

from .braid import BraidAlgebraElement, BraidError, BraidEvaluator, parse_braid, parse_word_body
from .checks import SUITES, SuiteConfig, run_suite
from .qfield import format_rf, parse_point, parse_rf
from .rewrite import BudgetExceeded, Reducer
from .web import WebCombo, WebError, parse_web, print_web

SCHEMA = 1
CACHE_ENV = "G2SPIDER_CACHE"


class UsageError(ValueError):
    pass


@dataclass
class Config:
    cache: str | None = None
    budget: int | None = None
    seed: int = 0
    q0: object = None
    format: str = "text"


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def read_combo(text: str) -> WebCombo:
    out = WebCombo()
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("{"):
                rec = json.loads(line)
                out.add(parse_web(rec["web"]), parse_rf(str(rec.get("coeff", "1"))))
            else:
                out.add(parse_web(line), 1)
        except (KeyError, json.JSONDecodeError, WebError, ValueError) as exc:
            raise UsageError(f"line {ln}: {exc}") from None
    return out


def read_element(text: str, n: int | None) -> BraidAlgebraElement:
    out = None
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("{"):
                rec = json.loads(line)
                word, coeff = rec["word"], parse_rf(str(rec.get("coeff", "1")))
            else:
                word, coeff = line, parse_rf("1")
            w = parse_braid(word) if word.lstrip().startswith("B") else None
            if w is None:
                if n is None:
                    raise UsageError("bare word bodies need --n")
                w = parse_word_body(n, word)
        except (KeyError, json.JSONDecodeError, BraidError, ValueError) as exc:
            raise UsageError(f"line {ln}: {exc}") from None
        if out is None:
            out = BraidAlgebraElement(w.n)
        if w.n != out.n:
            raise UsageError(f"line {ln}: strand count {w.n} differs from {out.n}")
        out = out + BraidAlgebraElement(w.n, {w.letters: coeff})
    if out is None:
        if n is None:
            raise UsageError("empty input needs --n")
        out = BraidAlgebraElement.identity(n)
    return out


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _combo_doc(cmd: str, combo: WebCombo) -> dict:
    return {
        "schema": SCHEMA,
        "command": cmd,
        "terms": [{"coeff": format_rf(c), "web": print_web(w)} for w, c in combo.items()],
    }


def _element_doc(cmd: str, el: BraidAlgebraElement) -> dict:
    return {
        "schema": SCHEMA,
        "command": cmd,
        "strands": el.n,
        "terms": [{"coeff": format_rf(c), "word": str(w)} for w, c in el.items()],
    }


def _emit(cfg: Config, doc: dict, text: str, out) -> None:
    if cfg.format == "json":
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        out.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _reducer(cfg: Config) -> Reducer:
    return Reducer(cache_path=cfg.cache, budget=cfg.budget)


def cmd_reduce(args, cfg: Config, out) -> int:
    combo = read_combo(_read(args.input))
    red = _reducer(cfg)
    res = red.reduce(combo) if len(combo) else WebCombo()
    red.flush()
    _emit(cfg, _combo_doc("reduce", res), res.to_jsonl(), out)
    return 0


def cmd_eval_braid(args, cfg: Config, out) -> int:
    el = read_element(_read(args.input), args.n)
    red = _reducer(cfg)
    res = BraidEvaluator(red).evaluate(el)
    red.flush()
    _emit(cfg, _combo_doc("eval-braid", res), res.to_jsonl(), out)
    return 0


def cmd_decompose(args, cfg: Config, out) -> int:
    from .surject import Decomposer, SurjectionError, build_catalog

    combo = read_combo(_read(args.input))
    red = _reducer(cfg)
    ev = BraidEvaluator(red)
    arity = None
    for w, _ in combo.items():
        if w.bottom != w.top:
            raise UsageError(f"not an endomorphism: {w.bottom} -> {w.top}")
        arity = w.bottom
    cat_path = cfg.cache + ".catalog.json" if cfg.cache else None
    dec = Decomposer(build_catalog(ev, path=cat_path), red, budget=cfg.budget)
    try:
        fact = dec.decompose(combo)
    except SurjectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    ok = ev.evaluate(fact) == red.reduce(combo) if fact.terms else not len(red.reduce(combo))
    el = fact.expand() if fact.terms else BraidAlgebraElement(arity or 0)
    red.flush()
    if not ok:
        print("error: round trip check failed", file=sys.stderr)
        return 1
    _emit(cfg, _element_doc("decompose", el), el.to_jsonl(), out)
    return 0


def cmd_verify(args, cfg: Config, out) -> int:
    checks = run_suite(args.suite, SuiteConfig(seed=cfg.seed, q0=cfg.q0, budget=cfg.budget))
    passed = all(c.passed for c in checks)
    doc = {
        "schema": SCHEMA,
        "command": "verify",
        "suite": args.suite,
        "passed": passed,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
    }
    lines = [f"{'PASS' if c.passed else 'FAIL'} {args.suite}/{c.name}: {c.detail}\n" for c in checks]
    lines.append(f"{'PASS' if passed else 'FAIL'} {args.suite}\n")
    _emit(cfg, doc, "".join(lines), out)
    return 0 if passed else 1


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    cache = common.add_mutually_exclusive_group()
    cache.add_argument("--cache", metavar="PATH", help=f"reduction cache file (default: ${CACHE_ENV} if set)")
    cache.add_argument("--no-cache", action="store_true", help="do not read or write any cache")
    common.add_argument("--budget", type=_positive, metavar="STEPS", help="maximum number of rewrite/peel steps")
    common.add_argument("--seed", type=_seed, default=0, help="seed for randomized checks")
    common.add_argument("--q0", metavar="POINT", help="specialization point: 3/2, zeta8 or root(q^4-q^2+1)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(prog="g2spider", description="Exact computations with G2 webs and braids.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("reduce", parents=[common], help="expand web combinations in the web basis")
    r.add_argument("input", help="web combination file, or - for stdin")
    r.set_defaults(func=cmd_reduce)
    e = sub.add_parser("eval-braid", parents=[common], help="image of a braid algebra element")
    e.add_argument("input", help="braid word file, or - for stdin")
    e.add_argument("--n", type=int, help="strand count for bare word bodies")
    e.set_defaults(func=cmd_eval_braid)
    d = sub.add_parser("decompose", parents=[common], help="braid algebra preimage of endomorphism webs")
    d.add_argument("input", help="web combination file, or - for stdin")
    d.set_defaults(func=cmd_decompose)
    v = sub.add_parser("verify", parents=[common], help="run a self-check suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.set_defaults(func=cmd_verify)
    return p


def make_config(args) -> Config:
    cache = None if args.no_cache else (args.cache or os.environ.get(CACHE_ENV) or None)
    q0 = None
    if args.q0 is not None:
        try:
            q0 = parse_point(args.q0)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --q0: {exc}") from None
    return Config(cache=cache, budget=args.budget, seed=args.seed, q0=q0, format=args.format)


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(args)
        return args.func(args, cfg, out)
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
