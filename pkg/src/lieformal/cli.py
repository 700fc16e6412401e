"""Command-line entry point: ``lieformal {bracket,tilde-pi,schouten-square,verify}``.

Exit codes: 0 success / all checks pass, 1 counterexample (or a
non-Poisson bivector for ``schouten-square``), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .checks import SUITES, run_check
from .parsing import ParseError, parse_form, render_canonical
from .poisson import PoissonStructure, koszul_bracket, tilde_pi
from .symcore import DimensionMismatch

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _word_length(text: str) -> int:
    v = int(text)
    if not 1 <= v <= 4:
        raise argparse.ArgumentTypeError("must be between 1 and 4")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lieformal", description="Exact Poisson brackets of forms and formality checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("structure", help="Poisson structure JSON file, or a bundled fixture name")
        sp.add_argument("--format", choices=("text", "json"), default="text")

    for name, helptext in (("bracket", "Koszul bracket of two forms"),
                           ("tilde-pi", "the tilde-pi operator on two forms")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("expr1")
        sp.add_argument("expr2")

    sp = sub.add_parser("schouten-square", help="Schouten square of the bivector")
    common(sp)

    sp = sub.add_parser("verify", help="run a randomized identity suite")
    sp.add_argument("check", choices=sorted(SUITES))
    common(sp)
    sp.add_argument("--trials", type=_positive, default=50)
    sp.add_argument("--seed", type=_seed, default=0)
    sp.add_argument("--max-word-length", type=_word_length, default=3)
    sp.add_argument("--max-poly-degree", type=_nonneg, default=2)
    return p


def load_structure(ref: str) -> PoissonStructure:
    """A JSON file path, or the name of a bundled fixture (with or without ``.json``)."""
    path = Path(ref)
    if path.is_file():
        return PoissonStructure.load(path)
    from . import FIXTURES

    bundled = FIXTURES / (path.name if path.suffix == ".json" else f"{path.name}.json")
    if path.parent == Path(".") and bundled.is_file():
        return PoissonStructure.load(bundled)
    raise UsageError(f"no such structure file: {ref}")


def _emit(out, fmt: str, text_lines: Sequence[str], payload: dict) -> None:
    if fmt == "json":
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        for line in text_lines:
            out.write(line + "\n")


def _run(args, out) -> int:
    S = load_structure(args.structure)
    if args.command in ("bracket", "tilde-pi"):
        a = parse_form(args.expr1, S.dim)
        b = parse_form(args.expr2, S.dim)
        fn = koszul_bracket if args.command == "bracket" else tilde_pi
        text = render_canonical(fn(S, a, b))
        _emit(out, args.format, [text], {"command": args.command, "result": text})
        return EXIT_OK
    if args.command == "schouten-square":
        sq = S.schouten_square
        verdict = "POISSON" if S.is_poisson else "NOT-POISSON"
        text = render_canonical(sq)
        _emit(out, args.format, [text, verdict],
              {"command": "schouten-square", "result": text, "poisson": S.is_poisson})
        return EXIT_OK if S.is_poisson else EXIT_FAIL
    rep = run_check(args.check, S, args.trials, args.seed, args.max_word_length, args.max_poly_degree)
    status = "PASS" if rep.passed else "FAIL"
    lines = [f"{status} {rep.check} seed={rep.seed} trials={rep.trials} "
             f"max-word-length={args.max_word_length} max-poly-degree={args.max_poly_degree}"]
    if rep.counterexample:
        lines.append(f"counterexample: {rep.counterexample}")
    _emit(out, args.format, lines, rep.as_dict())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cli_run(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _run(args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
    except (DimensionMismatch, ValueError, KeyError, TypeError, OSError) as exc:
        err.write(f"error: {exc}\n")
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    return EXIT_USAGE


def main() -> None:
    sys.exit(cli_run())


if __name__ == "__main__":
    main()
