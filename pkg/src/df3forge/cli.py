"""``df3forge`` command line.

Exit codes: 0 success or property holds, 1 check failed or property
refuted, 2 usage, parse or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import pairing as PC
from . import pipeline as PL
from . import syntax as S

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None


def read_statement(text: str, lang: str):
    """A formula (or equation / term for ``eq``) in plain or shared format."""
    body = "\n".join(S.iter_formula_lines(text))
    if text.lstrip().startswith("# df3-forge shared") or body.startswith("lang "):
        f = S.parse_shared(text)
        S._check_lang(f, S._norm_lang(lang))
        return f
    if S._norm_lang(lang) == S.EQ:
        return S.parse_term(body) if "=" not in body else S.parse(S.EQ, body)
    return S.parse(lang, body)


def write_statement(obj) -> str:
    """Plain text when it fits, otherwise the shared format."""
    if isinstance(obj, S.Formula):
        try:
            return S.render(obj) + "\n"
        except S.FormulaTooLarge:
            return S.render_shared(obj)
    return S.render(obj) + "\n"


# ---------------------------------------------------------------------------
# commands

def cmd_parse(args) -> int:
    text = _read(args.input) if args.input else args.text
    if text is None:
        raise UsageError("give a formula or --in FILE")
    f = read_statement(text, args.lang)
    if args.shared and isinstance(f, S.Formula):
        sys.stdout.write(S.render_shared(f))
    else:
        sys.stdout.write(S.render(f, pretty=args.pretty) + "\n"
                         if isinstance(f, S.Formula) else write_statement(f))
    return OK


_FROM = ("fol", "l3", "fmd3", "modal", "eq")
_TO = ("fmd3", "modal", "eq")


def translate(f, src: str, dst: str):
    """Translate a parsed statement between presentations."""
    if src == "fol":
        f = PL.tr(f, stats=False)[0]
    elif src == "l3":
        f = PL.h(f)
    elif src == "modal":
        f = PL.modal_to_fmd3(f)
    elif src == "eq":
        if isinstance(f, S.Equation):
            raise UsageError("translate takes a term, not an equation")
        f = PL.equation_to_fmd3(f)
    if dst == "modal":
        f = PL.fmd3_to_modal(f)
    elif dst == "eq":
        f = PL.fmd3_to_equation(f)
    return f


def cmd_translate(args) -> int:
    f = read_statement(_read(args.input), args.src)
    t0 = time.perf_counter()
    out = translate(f, args.src, args.dst)
    report = PL.report_for(f, out, t0)
    text = write_statement(out)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if args.report:
        _write(args.report, json.dumps(report.to_dict(args.out), indent=2, sort_keys=True) + "\n")
    return OK


def _read_hyps(path: str, system: str) -> dict:
    from .proofs.schemas import SYSTEM_LANG

    hyps = {}
    for line in S.iter_formula_lines(_read(path)):
        name, sep, text = line.partition(":=")
        if not sep:
            raise UsageError(f"hypothesis line needs 'name := formula': {line!r}")
        hyps[name.strip()] = S.parse(SYSTEM_LANG[system], text.strip())
    return hyps


def cmd_check_proof(args) -> int:
    from .proofs.checker import check_proof, parse_proof

    system = args.system.upper() if args.system else None
    text = _read(args.proof)
    hyps = None
    if args.hyps:
        if system is None:
            raise UsageError("--hyps needs --system")
        hyps = _read_hyps(args.hyps, system)
    proof = parse_proof(text, system, hyps)
    verdict = check_proof(proof, hyps)
    if verdict.accepted:
        print(f"accepted: {len(proof.lines)} lines in {proof.system}")
        return OK
    line, reason = verdict.first_failure
    print(f"rejected at line {line}: {reason}")
    return FAILED


def cmd_modelcheck(args) -> int:
    from .semantics.models import Model, valid_in_model

    try:
        m = Model.from_json(_read(args.model))
    except (ValueError, KeyError, TypeError) as e:
        raise UsageError(f"bad model file: {e}") from None
    f = read_statement(_read(args.formula), args.lang)
    holds = valid_in_model(m, f)
    print("true" if holds else "false")
    return OK if holds else FAILED


def cmd_oracle(args) -> int:
    from .semantics.hf import TriState, hf_oracle_report

    f = read_statement(_read(args.formula), args.lang)
    rep = hf_oracle_report(f, args.rank, args.margin)
    print(f"{rep.verdict.name} (V_{args.rank - 1}: {rep.small_n} elements, "
          f"V_{args.rank}: {rep.big_n} elements, outer block over {rep.restricted_n})")
    return OK if rep.verdict == TriState.TRUE_STABLE else FAILED


def cmd_dump_ax(args) -> int:
    b = PC.ax_build(PL.default_params(), strong=args.strong)
    _write(args.out, S.render_shared(b.formula))
    shared, tree, dep = S.dag_stats(b.formula)
    print(json.dumps({"formula": "SAx" if args.strong else "Ax", "output_file": args.out,
                      "conjuncts": b.counts, "H": len(PC.H), "nodes_shared": shared,
                      "nodes_tree": str(tree), "depth": dep}, sort_keys=True))
    return OK


def model_counts() -> dict:
    from .semantics.kripke import count_frames
    from .semantics.models import count_models

    return {f"models n=2 {{{sig}}}": count_models(2, sig) for sig in ("P", "in", "P+in")} | {
        "frames <= 4 worlds": count_frames(4)}


def cmd_stats(args) -> int:
    out = model_counts()
    out["|H|"] = len(PC.H)
    if args.formula:
        f = read_statement(_read(args.formula), args.lang)
        if isinstance(f, S.Formula):
            shared, tree, dep = S.dag_stats(f)
            out |= {"lang": f.lang, "free": sorted(S.free_vars(f)), "nodes_shared": shared,
                    "nodes_tree": tree, "depth": dep}
    for k, v in out.items():
        print(f"{k}: {v}")
    return OK


def cmd_selftest(args) -> int:
    from . import checks

    extra = checks.BROKEN_SCHEMA if args.inject_broken_schema else None
    for k, v in model_counts().items():
        print(f"{k}: {v}")
    results = []
    for run in checks.acceptance_suite(args.level, extra):
        r = run()
        results.append(r)
        print(r.line(), flush=True)
    failed = [r.key for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed"
          + (f"; failed: {', '.join(failed)}" if failed else ""))
    return FAILED if failed else OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="df3forge", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    a = sub.add_parser("parse", help="parse and print a formula canonically")
    a.add_argument("text", nargs="?")
    a.add_argument("--lang", default="fmd3")
    a.add_argument("--in", dest="input")
    a.add_argument("--pretty", action="store_true")
    a.add_argument("--shared", action="store_true", help="print the shared DAG format")
    a.set_defaults(fn=cmd_parse)

    a = sub.add_parser("translate", help="translate between presentations")
    a.add_argument("--from", dest="src", choices=_FROM, required=True)
    a.add_argument("--to", dest="dst", choices=_TO, required=True)
    a.add_argument("--in", dest="input", required=True)
    a.add_argument("--out")
    a.add_argument("--report", help="write a JSON translation report")
    a.set_defaults(fn=cmd_translate)

    a = sub.add_parser("check-proof", help="check a proof file")
    a.add_argument("--proof", required=True)
    a.add_argument("--system")
    a.add_argument("--hyps", help="file of 'name := formula' lines")
    a.set_defaults(fn=cmd_check_proof)

    a = sub.add_parser("modelcheck", help="is a formula valid in a finite model")
    a.add_argument("--model", required=True)
    a.add_argument("--formula", required=True)
    a.add_argument("--lang", default="fmd3")
    a.set_defaults(fn=cmd_modelcheck)

    a = sub.add_parser("oracle", help="hereditarily finite stability oracle")
    a.add_argument("--formula", required=True)
    a.add_argument("--lang", default="fol")
    a.add_argument("--rank", type=int, default=4)
    a.add_argument("--margin", type=int, default=1)
    a.set_defaults(fn=cmd_oracle)

    a = sub.add_parser("dump-ax", help="write Ax (or SAx) in the shared format")
    a.add_argument("--out", required=True)
    a.add_argument("--strong", action="store_true", help="SAx instead of Ax")
    a.set_defaults(fn=cmd_dump_ax)

    a = sub.add_parser("stats", help="enumeration counts and formula statistics")
    a.add_argument("--formula")
    a.add_argument("--lang", default="fmd3")
    a.set_defaults(fn=cmd_stats)

    a = sub.add_parser("selftest", help="run the property suites")
    a.add_argument("--level", choices=("quick", "full"), default="quick")
    a.add_argument("--inject-broken-schema", action="store_true", help=argparse.SUPPRESS)
    a.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code not in (0, None) else OK
    from .proofs.checker import LanguageMismatch, MalformedLine
    from .semantics.hf import RankTooLarge

    try:
        return args.fn(args)
    except (UsageError, S.FormulaSyntaxError, S.LanguageViolation, MalformedLine,
            LanguageMismatch, RankTooLarge, PL.NotASentence, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
