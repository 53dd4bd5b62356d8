"""Command-line front end.

Without ``--model``/``--formula`` the tool runs the interactive session;
with both it performs one batch check.  ``hmmcheck oracle ...`` runs the
brute-force reference evaluator instead of the elimination pipeline.

Exit codes: 0 ok, 2 input error, 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .checker import SatResult, model_check
from .lexer import ParseError
from .model import SatMode
from .parser import load_model, parse_state_formula

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_USAGE = 64

PROMPT_MODEL = "Enter the file name where the HMM is located."
PROMPT_MODE = (
    "Would you like to consider each state as if it were the initial state, "
    "i.e., as if it had initial distribution value equal to 1? y/n: "
)
PROMPT_FORMULA = "Enter the POCTL* formula we are interested in."
PROMPT_AGAIN = "Do you want to continue checking more specifications? y/n: "


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def format_probs(probs) -> str:
    return "[" + ",".join(repr(float(p)) for p in probs) + "]"


def format_states(states, zero_based=False) -> str:
    shift = 0 if zero_based else 1
    return "[" + ",".join(str(s + shift) for s in sorted(states)) + "]"


def format_result(result: SatResult, zero_based=False) -> str:
    lines = ["The states that satisfy it are:"]
    if result.probs is not None:
        lines.append(f"(Probability of satisfaction of each state:{format_probs(result.probs)})")
    lines.append(format_states(result.states, zero_based))
    return "\n".join(lines)


def result_json(result: SatResult, mode: SatMode, formula: str) -> dict:
    return {
        "states": sorted(int(s) for s in result.states),
        "probs": None if result.probs is None else [float(p) for p in result.probs],
        "mode": mode.value,
        "formula": formula,
    }


def _describe(err: Exception) -> str:
    if isinstance(err, ParseError):
        return err.diagnostic()
    if isinstance(err, FileNotFoundError):
        return f"file not found: {err.filename}"
    if isinstance(err, OSError):
        return f"cannot read {err.filename}: {err.strerror}"
    return f"error: {err}"


def run_interactive(stdin=None, stdout=None, zero_based=False) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout

    def say(text, end="\n"):
        stdout.write(text + end)
        stdout.flush()

    def ask(text, end="\n"):
        say(text, end)
        line = stdin.readline()
        if not line:
            raise EOFError
        return line.strip()

    try:
        while True:
            path = ask(PROMPT_MODEL)
            try:
                h = load_model(path)
            except (OSError, ValueError) as e:
                say(_describe(e))
                continue
            while True:
                answer = ask(PROMPT_MODE, end="")
                mode = SatMode.PER_STATE if answer.lower().startswith("y") else SatMode.WEIGHTED
                while True:
                    text = ask(PROMPT_FORMULA)
                    try:
                        result = model_check(h, parse_state_formula(text), mode)
                    except ValueError as e:
                        say(_describe(e))
                        continue
                    break
                say(format_result(result, zero_based))
                if not ask(PROMPT_AGAIN, end="").lower().startswith("y"):
                    return EXIT_OK
    except EOFError:
        return EXIT_OK


def _common_args(p: argparse.ArgumentParser):
    p.add_argument("--model", metavar="PATH", help=".poctl model file")
    p.add_argument("--formula", metavar="STRING", help="state formula, e.g. 'P[<0.1](X_{1}a)'")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--per-state", dest="mode", action="store_const", const=SatMode.PER_STATE,
                   help="treat each state as the initial state (default)")
    g.add_argument("--weighted", dest="mode", action="store_const", const=SatMode.WEIGHTED,
                   help="weight by the model's initial distribution")
    p.add_argument("--json", action="store_true", help="machine-readable output (0-based states)")
    p.add_argument("--zero-based", action="store_true", help="print 0-based state indices")
    p.set_defaults(mode=SatMode.PER_STATE)


def _check_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hmmcheck", description="Model checker for probabilistic temporal properties of HMMs.")
    _common_args(p)
    p.add_argument("--verbose", action="store_true", help="trace each elimination step on stderr")
    return p


def _oracle_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hmmcheck oracle", description="Brute-force reference evaluator.")
    _common_args(p)
    p.add_argument("--horizon", type=int, metavar="N", help="truncation depth for unbounded until")
    return p


def _stderr_trace(record):
    print(json.dumps(record), file=sys.stderr)


def run_batch(args, oracle=False) -> int:
    try:
        h = load_model(args.model)
        f = parse_state_formula(args.formula)
        if oracle:
            from .oracle import oracle_result
            result = oracle_result(h, f, args.mode, args.horizon)
        else:
            trace = _stderr_trace if getattr(args, "verbose", False) else None
            result = model_check(h, f, args.mode, trace=trace)
    except (OSError, ValueError) as e:
        print(_describe(e), file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        print(json.dumps(result_json(result, args.mode, args.formula)))
    else:
        print(format_result(result, args.zero_based))
    return EXIT_OK


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    oracle = bool(argv) and argv[0] == "oracle"
    parser = _oracle_parser() if oracle else _check_parser()
    args = parser.parse_args(argv[1:] if oracle else argv)
    if args.model is None and args.formula is None and not oracle:
        return run_interactive(zero_based=args.zero_based)
    if args.model is None or args.formula is None:
        parser.error("--model and --formula are required together")
    return run_batch(args, oracle=oracle)


if __name__ == "__main__":
    sys.exit(main())
