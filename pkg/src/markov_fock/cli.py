"""
Command Line Module

Entry point of the ``markov-fock`` command. Every subcommand reads the
environment configuration, lets its flags override individual fields and
writes structured output to stdout or to --output.

Exit codes: 0 success, 1 failed verification or convexity breach, 2 domain
error, 3 precision budget exhausted, 64 usage error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from typing import Sequence

from . import export
from .cohn import christoffel_word
from .config import LOG_LEVELS, OUTPUT_FORMATS, RunConfig, load_config, parse_triple
from .errors import ConvexityViolation, DomainError, MarkovFockError, PrecisionError
from .farey import ContinuedFraction, Fraction, Side
from .fock_norm import (
    HomologyClass,
    beta,
    corner_gap,
    geodesic_length,
    hole_length,
    irrational_slope_bracket,
    one_sided_derivative,
    psi,
    stable_norm,
    unit_ball,
)
from .markov import TreeCache, enumerate_tree, markov_number, surface_from_config
from .verify import SUITES, run_suites

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_DOMAIN = 2
EXIT_PRECISION = 3
EXIT_USAGE = 64

COMMANDS = (
    "markov", "tree", "fock", "length", "norm", "beta",
    "ball", "derivative", "corner", "irrational", "verify",
)


class UsageError(Exception):
    """Raised instead of argparse's own exit on bad command lines."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


# flag name -> RunConfig field
_OVERRIDES = {
    "a": "a",
    "fricke_c": "fricke_c",
    "seed_triple": "seed_triple",
    "precision": "precision",
    "digit_budget": "digit_budget",
    "depth": "depth",
    "max_q": "max_q",
    "format": "output_format",
    "output": "output",
    "seed": "seed",
    "threads": "threads",
    "max_retries": "max_retries",
    "count": "count",
    "log_level": "log_level",
}


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--a", type=int, help="Use the a-family surface with this a >= 1.")
    common.add_argument("--fricke-c", dest="fricke_c", help="Constant c < 0 of a real Fricke surface.")
    common.add_argument("--seed-triple", dest="seed_triple", type=parse_triple,
                        help="Real seed X,Y,Z on the Fricke surface.")
    common.add_argument("--precision", help="Target absolute error (default 1e-30).")
    common.add_argument("--digit-budget", dest="digit_budget", type=int,
                        help="Largest tree value, in decimal digits.")
    common.add_argument("--depth", type=int, help="Tree or approach depth.")
    common.add_argument("--max-q", dest="max_q", type=int, help="Largest denominator or coordinate.")
    common.add_argument("--format", choices=OUTPUT_FORMATS, help="Output format.")
    common.add_argument("--output", help="Write to this path instead of stdout.")
    common.add_argument("--seed", type=int, help="Seed of the random property inputs.")
    common.add_argument("--threads", type=int, help="Worker processes for batch commands.")
    common.add_argument("--max-retries", dest="max_retries", type=int,
                        help="Precision retries before giving up.")
    common.add_argument("--log-level", dest="log_level", type=str.upper, choices=LOG_LEVELS,
                        help="Logging level on stderr.")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="markov-fock",
        description="Markov numbers, Fock's function and the stable norm of the punctured torus.",
    )
    common = _common_flags()
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    p = command("markov", "Markov number (or a-family value) at p/q in [0, 1/2].")
    p.add_argument("--frac", required=True)
    p.add_argument("--word", action="store_true", help="Also print the Christoffel word.")

    command("tree", "Enumerate the tree of triples to --depth.")

    p = command("fock", "Fock's function psi at p/q.")
    p.add_argument("--frac", required=True)

    p = command("length", "Length of the simple closed geodesic of slope p/q.")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--frac")
    group.add_argument("--hole", action="store_true", help="Length of the boundary geodesic instead.")

    for name, help_text in (("norm", "Stable norm of a homology class."),
                            ("beta", "Mather's beta function of a homology class.")):
        p = command(name, help_text)
        p.add_argument("--class", dest="homology", required=True)

    command("ball", "Boundary of the stable-norm unit ball up to --max-q.")

    p = command("derivative", "Certified one-sided derivative of psi at p/q.")
    p.add_argument("--frac", required=True)
    p.add_argument("--side", choices=(Side.LEFT.value, Side.RIGHT.value), default=Side.RIGHT.value)

    p = command("corner", "Certified corner gap of psi at p/q.")
    p.add_argument("--frac", required=True)

    p = command("irrational", "Slope brackets of psi at a periodic continued fraction.")
    p.add_argument("--cf", required=True)

    p = command("verify", "Run property suites.")
    p.add_argument("--suite", action="append", choices=SUITES + ("all",),
                   help="Suite to run; repeatable (default all).")
    p.add_argument("--count", type=int, help="Random pairs for the fricke suite.")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {
        field: getattr(args, flag)
        for flag, field in _OVERRIDES.items()
        if getattr(args, flag, None) is not None
    }
    config = dataclasses.replace(load_config(), **overrides)
    config.validate()
    return config


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _structured(payload: dict, config: RunConfig) -> str:
    """JSON object, or a one-row CSV table with the payload keys as header."""
    if config.output_format == "csv":
        return export.render_csv(list(payload), [list(payload.values())])
    return export.render_json(payload)


def cmd_markov(args, config: RunConfig, cache: TreeCache) -> str:
    s = surface_from_config(config)
    x = Fraction.parse(args.frac)
    value = markov_number(x, s, cache, config.digit_budget)
    payload = {"fraction": x, "surface": s, "value": value}
    if args.word:
        payload["word"] = str(christoffel_word(x, s))
    if args.format is None:
        # bare scalar unless a format is asked for
        lines = [str(value)] + ([payload["word"]] if args.word else [])
        return "\n".join(lines) + "\n"
    return _structured(payload, config)


def cmd_tree(args, config: RunConfig, cache: TreeCache) -> str:
    s = surface_from_config(config)
    nodes = enumerate_tree(s, config.depth)
    if config.output_format == "csv":
        return export.render_csv(*export.tree_table(nodes))
    return export.render_json_lines(export.tree_records(nodes, s))


def cmd_fock(args, config: RunConfig, cache: TreeCache) -> str:
    s = surface_from_config(config)
    result = psi(Fraction.parse(args.frac), s, config.precision, cache, config.digit_budget)
    return _structured(result.to_json(), config)


def cmd_length(args, config: RunConfig, cache: TreeCache) -> str:
    s = surface_from_config(config)
    if args.hole:
        return _structured({"surface": s, "hole_length": hole_length(s, config.precision)}, config)
    x = Fraction.parse(args.frac)
    length = geodesic_length(x, s, config.precision, cache, config.digit_budget)
    return _structured({"fraction": x, "surface": s, "length": length}, config)


def cmd_norm(args, config: RunConfig, cache: TreeCache) -> str:
    s = surface_from_config(config)
    h = HomologyClass.parse(args.homology)
    value = stable_norm(h, s, config.precision, cache, config.digit_budget)
    return _structured({"class": h, "surface": s, "norm": value}, config)


def cmd_beta(args, config: RunConfig, cache: TreeCache) -> str:
    s = surface_from_config(config)
    h = HomologyClass.parse(args.homology)
    return _structured({"class": h, "surface": s, "beta": beta(h, s, config.precision, cache)}, config)


def cmd_ball(args, config: RunConfig, cache: TreeCache) -> str:
    s = surface_from_config(config)
    points = unit_ball(s, config.max_q, config.precision, config.threads)
    if config.output_format == "csv":
        return export.render_csv(*export.ball_table(points))
    payload = [{"class": [h.h1, h.h2], "x": x, "y": y} for h, (x, y) in points]
    return export.render_json({"surface": s, "max_q": config.max_q, "points": payload})


def _bracket_payload(bracket) -> dict:
    return {
        "side": bracket.side,
        "lower": export.bound_str(bracket.lower, "down"),
        "upper": export.bound_str(bracket.upper, "up"),
        "enclosure": bracket.enclosure,
        "slopes": [
            {"depth": p.depth, "approach": p.approach, "slope": p.slope}
            for p in bracket.slopes.quotients
        ],
    }


def cmd_derivative(args, config: RunConfig, cache: TreeCache) -> str:
    s = surface_from_config(config)
    x = Fraction.parse(args.frac)
    bracket = one_sided_derivative(
        x, Side(args.side), config.depth, s, config.precision, config.max_retries, cache, config.digit_budget
    )
    if config.output_format == "csv":
        return export.render_csv(*export.slope_table(bracket.slopes))
    return export.render_json({"fraction": x, "surface": s, **_bracket_payload(bracket)})


def cmd_corner(args, config: RunConfig, cache: TreeCache) -> str:
    s = surface_from_config(config)
    result = corner_gap(
        Fraction.parse(args.frac), config.depth, s, config.precision, config.max_retries, cache,
        config.digit_budget, config.threads,
    )
    payload = {
        "fraction": result.x,
        "surface": s,
        "depth": result.depth,
        "gap": result.gap,
        "lower": export.bound_str(result.lower, "down"),
        "upper": export.bound_str(result.upper, "up"),
        "certified_positive": result.certified_positive,
    }
    if config.output_format == "csv":
        return _structured(payload, config)
    payload["left"] = _bracket_payload(result.left)
    payload["right"] = _bracket_payload(result.right)
    return export.render_json(payload)


def cmd_irrational(args, config: RunConfig, cache: TreeCache) -> str:
    s = surface_from_config(config)
    cf = ContinuedFraction.parse(args.cf)
    sequence = irrational_slope_bracket(
        cf, config.depth, s, config.precision, cache, config.digit_budget, config.max_retries
    )
    if config.output_format == "csv":
        return export.render_csv(*export.bracket_table(sequence))
    brackets = [
        {
            "depth": b.depth,
            "lower": export.bound_str(b.lower.lower, "down"),
            "upper": export.bound_str(b.upper.upper, "up"),
            "width": b.width,
        }
        for b in sequence.brackets
    ]
    secants = [{"depth": p.depth, "convergent": p.approach, "slope": p.slope} for p in sequence.quotients]
    return export.render_json({
        "cf": cf,
        "surface": s,
        "truncated": sequence.truncated,
        "secants": secants,
        "brackets": brackets,
    })


_HANDLERS = {
    "markov": cmd_markov,
    "tree": cmd_tree,
    "fock": cmd_fock,
    "length": cmd_length,
    "norm": cmd_norm,
    "beta": cmd_beta,
    "ball": cmd_ball,
    "derivative": cmd_derivative,
    "corner": cmd_corner,
    "irrational": cmd_irrational,
}


def main(argv: Sequence[str] | None = None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        # tree values routinely exceed the default 4300-digit conversion limit
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)

    try:
        config = config_from_args(args)
    except ValueError as exc:
        sys.stderr.write(f"markov-fock: {exc}\n")
        return EXIT_DOMAIN

    logging.basicConfig(
        level=getattr(logging, config.log_level.upper()),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    )

    try:
        if args.command == "verify":
            report = run_suites(args.suite or ["all"], config)
            export.emit(report.render(), config.output)
            return EXIT_OK if report.passed else EXIT_FAILED
        cache = TreeCache()
        export.emit(_HANDLERS[args.command](args, config, cache), config.output)
        return EXIT_OK
    except DomainError as exc:
        logger.error(f"Domain error: {exc}")
        sys.stderr.write(f"markov-fock: {exc}\n")
        return EXIT_DOMAIN
    except PrecisionError as exc:
        logger.error(f"Precision budget exhausted: {exc}")
        sys.stderr.write(f"markov-fock: {exc}\n")
        return EXIT_PRECISION
    except ConvexityViolation as exc:
        logger.error(f"Convexity violated: {exc}")
        sys.stderr.write(f"markov-fock: {exc}\n")
        return EXIT_FAILED
    except MarkovFockError as exc:
        sys.stderr.write(f"markov-fock: {exc}\n")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
