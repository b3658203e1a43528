"""Command-line entry points: enumerate / transform / check-equiv / index / nsf-check.

Exit codes: 0 success, 1 check-equiv difference or nsf-check violation,
2 parse or validation error, 3 truncated result under --strict.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Tuple

from . import constructions, engine, fileformat, verifier
from .fileformat import GswParseError
from .model import CdSystem, HcdSystem, Mode, ProgrammedGrammar, Rule

EXIT_OK = 0
EXIT_DIFF = 1
EXIT_PARSE = 2
EXIT_TRUNCATED = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_PARSE):
        super().__init__(message)
        self.code = code


def _load(path: str) -> fileformat.GrammarFile:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise CliError("cannot read %s: %s" % (path, err))
    try:
        return fileformat.parse_file(text)
    except GswParseError as err:
        raise CliError("%s: %s" % (path, err))


def _bounds(args) -> engine.Bounds:
    form_len = args.max_form_len if args.max_form_len else args.max_len
    try:
        return engine.Bounds(args.max_len, form_len, args.max_inner_steps)
    except ValueError as err:
        raise CliError(str(err))


def _mode_for(gf: fileformat.GrammarFile, flag: Optional[str]) -> Optional[Mode]:
    if flag is not None:
        try:
            return fileformat.parse_mode(flag)
        except GswParseError as err:
            raise CliError(str(err))
    return gf.uniform_mode


def _enumerate(gf: fileformat.GrammarFile, mode_flag, bounds, with_traces=False):
    grammar = gf.grammar
    mode = None
    if isinstance(grammar, CdSystem) and not isinstance(grammar, HcdSystem):
        mode = _mode_for(gf, mode_flag)
        if mode is None:
            raise CliError("a cdgs file needs a mode (file 'mode' line or --mode)")
    try:
        return engine.enumerate_grammar(grammar, bounds, mode=mode, with_traces=with_traces), mode
    except ValueError as err:
        raise CliError(str(err))


def _parse_word(text: str, grammar) -> Tuple[str, ...]:
    names = sorted((s.name for s in grammar.terminals), key=len, reverse=True)
    parts = text.split()
    if all(p in names for p in parts):
        return tuple(parts)
    if len(parts) != 1:
        raise CliError("word symbols %r not in the terminal alphabet" % text)
    # greedy longest-match segmentation of a glued word like "aabb"
    out: List[str] = []
    rest = parts[0]
    while rest:
        for name in names:
            if rest.startswith(name):
                out.append(name)
                rest = rest[len(name):]
                break
        else:
            raise CliError("cannot segment word %r over the terminal alphabet" % text)
    return tuple(out)


def _cmd_enumerate(args) -> int:
    gf = _load(args.file)
    result, _ = _enumerate(gf, args.mode, _bounds(args))
    for word in result.language.words:
        print(" ".join(word))
    if result.language.truncated and args.strict:
        print("TRUNCATED", file=sys.stderr)
        return EXIT_TRUNCATED
    return EXIT_OK


def _linear_from_component(grammar, index_k: Optional[int]):
    if not isinstance(grammar, CdSystem) or isinstance(grammar, HcdSystem):
        raise CliError("source grammar must be a single-component cdgs file")
    if grammar.degree != 1:
        raise CliError("source grammar must have exactly one component")
    fields = dict(
        nonterminals=grammar.nonterminals,
        terminals=grammar.terminals,
        axiom=grammar.axiom,
        rules=grammar.components[0],
    )
    try:
        if index_k is None:
            return constructions.LinearGrammar(**fields)
        return constructions.IndexedCfGrammar(index=index_k, **fields)
    except ValueError as err:
        raise CliError(str(err))


def _cmd_transform(args) -> int:
    name = args.name
    uniform_mode = None
    try:
        if name == "finite-to-cd1":
            if not args.words:
                raise CliError("finite-to-cd1 needs at least one --words entry")
            out = constructions.finite_to_cd1(
                [tuple(w.split()) for w in args.words], args.k or 1
            )
        elif name in ("linear-to-cd2", "cf-to-cd2"):
            gf = _load(_require_file(args))
            if name == "linear-to-cd2":
                out = constructions.linear_to_cd2(
                    _linear_from_component(gf.grammar, None)
                )
            else:
                if args.k is None:
                    raise CliError("cf-to-cd2 needs --k (the index bound)")
                out = constructions.cf_indexk_to_cd2(
                    _linear_from_component(gf.grammar, args.k)
                )
        elif name == "cd-to-programmed":
            gf = _load(_require_file(args))
            if not isinstance(gf.grammar, CdSystem) or isinstance(gf.grammar, HcdSystem):
                raise CliError("cd-to-programmed needs a cdgs file")
            if args.k is None:
                raise CliError("cd-to-programmed needs --k")
            out = constructions.cd_to_programmed(gf.grammar, args.k, args.variant)
        elif name == "prolong":
            gf = _load(_require_file(args))
            if not isinstance(gf.grammar, CdSystem) or isinstance(gf.grammar, HcdSystem):
                raise CliError("prolong needs a cdgs file")
            if args.ell is None:
                raise CliError("prolong needs --ell")
            out = constructions.prolong(gf.grammar, args.ell)
        elif name == "nsf-to-cdgs":
            gf = _load(_require_file(args))
            if not isinstance(gf.grammar, ProgrammedGrammar):
                raise CliError("nsf-to-cdgs needs a programmed file")
            if args.m is None or args.mode is None:
                raise CliError("nsf-to-cdgs needs --m and --mode")
            target = fileformat.parse_mode(args.mode)
            out = constructions.nsf_programmed_to_cdgs(gf.grammar, args.m, target)
            uniform_mode = target
        elif name == "example1":
            out = constructions.build_example1(args.k if args.k is not None else 2)
        elif name == "snk":
            if args.n is None or args.k is None:
                raise CliError("snk needs --n and --k")
            out = constructions.build_snk_cdgs(args.n, args.k, args.variant)
            uniform_mode = constructions.snk_mode(args.k, args.variant)
        elif name == "anbnambm":
            out = constructions.build_anbnambm()
        elif name == "s3":
            out = constructions.build_s3_cd3()
        else:
            raise CliError("unknown transform %r" % name)
    except (ValueError, GswParseError) as err:
        raise CliError(str(err))
    text = fileformat.serialize(out, uniform_mode=uniform_mode)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def _require_file(args) -> str:
    if not args.file:
        raise CliError("transform %r needs a source grammar file" % args.name)
    return args.file


def _cmd_check_equiv(args) -> int:
    gf_a, gf_b = _load(args.file_a), _load(args.file_b)
    bounds = _bounds(args)
    res_a, _ = _enumerate(gf_a, args.mode_a or args.mode, bounds)
    res_b, _ = _enumerate(gf_b, args.mode_b or args.mode, bounds)
    report = verifier.bounded_equal(res_a.language, res_b.language)
    for line in report.lines():
        print(line)
    if args.strict and (res_a.language.truncated or res_b.language.truncated):
        print("TRUNCATED", file=sys.stderr)
        return EXIT_TRUNCATED
    return EXIT_OK if report.equal else EXIT_DIFF


def _cmd_index(args) -> int:
    gf = _load(args.file)
    grammar = gf.grammar
    bounds = _bounds(args)
    mode = None
    if isinstance(grammar, CdSystem) and not isinstance(grammar, HcdSystem):
        mode = _mode_for(gf, args.mode)
        if mode is None:
            raise CliError("a cdgs file needs a mode (file 'mode' line or --mode)")
    word = _parse_word(args.word, grammar)
    try:
        result = engine.word_index(grammar, word, bounds, mode=mode)
    except ValueError as err:
        raise CliError(str(err))
    if result.index is None:
        print("UNKNOWN")
    else:
        print(result.index)
    if args.strict and result.truncated:
        print("TRUNCATED", file=sys.stderr)
        return EXIT_TRUNCATED
    return EXIT_OK


def _cmd_nsf_check(args) -> int:
    gf = _load(args.file)
    if not isinstance(gf.grammar, ProgrammedGrammar):
        raise CliError("nsf-check needs a programmed grammar file")
    report = verifier.nsf_check(gf.grammar, args.depth)
    for line in report.lines():
        print(line)
    if report.inconclusive:
        print("INCONCLUSIVE")
    return EXIT_OK if report.holds else EXIT_DIFF


def _add_bounds_args(p, max_len_required=True):
    p.add_argument("--max-len", type=int, required=max_len_required)
    p.add_argument("--max-form-len", type=int, default=None)
    p.add_argument("--max-inner-steps", type=int, default=None)
    p.add_argument("--strict", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gsw",
        description="Workbench for cooperating distributed grammar systems, "
        "hybrid derivation modes and programmed grammars.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="print the bounded language, length-lex")
    p.add_argument("file")
    p.add_argument("--mode", default=None)
    _add_bounds_args(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("transform", help="apply a construction and write a grammar file")
    p.add_argument("name")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--variant", choices=constructions._VARIANTS,
                   default=constructions.VARIANT_EXACTLY)
    p.add_argument("--mode", default=None)
    p.add_argument("--words", action="append", default=[],
                   help="a word as space-separated symbols; repeatable")
    p.set_defaults(func=_cmd_transform)

    p = sub.add_parser("check-equiv", help="compare two bounded languages")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--mode", default=None, help="mode override for both files")
    p.add_argument("--mode-a", default=None)
    p.add_argument("--mode-b", default=None)
    _add_bounds_args(p)
    p.set_defaults(func=_cmd_check_equiv)

    p = sub.add_parser("index", help="minimum derivation index of a word")
    p.add_argument("file")
    p.add_argument("--word", required=True)
    p.add_argument("--mode", default=None)
    _add_bounds_args(p)
    p.set_defaults(func=_cmd_index)

    p = sub.add_parser("nsf-check", help="check nonterminal separation form")
    p.add_argument("file")
    p.add_argument("--depth", type=int, default=16)
    p.set_defaults(func=_cmd_nsf_check)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as err:
        print("error: %s" % err, file=sys.stderr)
        return err.code


if __name__ == "__main__":
    sys.exit(main())
