#!/usr/bin/env python3
"""
Omega Ideals Command Line

Batch front door of the library: every subcommand reads JSON descriptions of
ideals, sets, sequences and matrices (inline or from a file), runs one library
operation and writes a single JSON document to stdout. Traces can be written
as CSV with --out. Logging goes to stderr and debug/omega_ideals.log.

Exit codes: 0 decided, 1 usage error, 2 invalid description, 3 Unknown under
--require-decision, 4 construction error.
"""

import os
import sys
import json
import logging
import argparse
import traceback
from pathlib import Path

from dotenv import load_dotenv

from omega_ideals.duality.adversary import adversary_construct
from omega_ideals.duality.pairing import DualPair
from omega_ideals.duality.witnesses import (
    bk_report, positive_witness, verify_boundedness, witness_growth,
)
from omega_ideals.ideals.classify import fk_classify, noninclusion_report
from omega_ideals.ideals.families import ideal_from_json
from omega_ideals.ideals.membership import density_trace, dual_member, member
from omega_ideals.ideals.tallness import (
    SCHEDULES, is_tall, nontall_witness, tall_subset_report,
)
from omega_ideals.ideals.verdicts import UNKNOWN
from omega_ideals.sequences.seq import HorizonParams, Named, seq_from_json
from omega_ideals.sequences.spaces import (
    classify_indicator, classify_space, ideal_limit_estimate,
)
from omega_ideals.sets.setexpr import from_json as set_from_json
from omega_ideals.summability.matrices import (
    check_regularity, matrix_from_json, pringsheim_zero_estimate,
)
from omega_ideals.summability.transforms import (
    cA_membership_estimate, check_tall_subspace, eval_seminorms, transform_prefix,
)
from omega_ideals.utils.converters import dump_document, parse_rational, write_trace_csv
from omega_ideals.utils.errors import InvalidSpec, OmegaIdealsError

logger = logging.getLogger("omega_ideals")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_UNDECIDED = 3


class UsageError(Exception):
    pass


class CommandLineParser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting on bad arguments."""

    def error(self, message):
        raise UsageError(message)


def configure_logging():
    """Configure logging from OMEGA_IDEALS_LOG_LEVEL and OMEGA_IDEALS_LOG_FILE."""
    level = getattr(logging, os.getenv("OMEGA_IDEALS_LOG_LEVEL", "INFO").upper(), logging.INFO)
    log_file = os.getenv("OMEGA_IDEALS_LOG_FILE", "debug/omega_ideals.log")
    handlers = [logging.StreamHandler(sys.stderr)]
    if log_file:
        # Create debug directory if it doesn't exist
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.insert(0, logging.FileHandler(log_file))
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def load_json(text, what):
    """
    Parse a JSON argument given inline or as a path to a file.

    Raises:
        InvalidSpec: If the text is neither valid JSON nor a readable JSON file
    """
    source = text
    if not text.lstrip().startswith(("{", "[")):
        path = Path(text)
        if not path.is_file():
            raise InvalidSpec(f"{what}: {text!r} is neither inline JSON nor a file")
        source = path.read_text(encoding="utf-8")
    try:
        return json.loads(source)
    except json.JSONDecodeError as e:
        raise InvalidSpec(f"{what}: malformed JSON ({e})") from e


def _ideal(args, name="ideal"):
    return ideal_from_json(load_json(getattr(args, name), f"--{name.replace('_', '-')}"))


def _set(args, name="set"):
    return set_from_json(load_json(getattr(args, name), f"--{name}"))


def _seq(args, name="seq"):
    return seq_from_json(load_json(getattr(args, name), f"--{name}"))


def _matrix(args):
    return matrix_from_json(load_json(args.matrix, "--matrix"))


def _rational(text, what):
    try:
        return parse_rational(text)
    except ValueError as e:
        raise InvalidSpec(f"{what}: {e}") from e


def _decided(verdict):
    return verdict != UNKNOWN


# Each command returns (document, decided, trace)

def cmd_member(args, params):
    ideal, s = _ideal(args), _set(args)
    result = dual_member(ideal, s, params) if args.dual else member(ideal, s, params)
    return result.to_json(), result.decided, result.trace


def cmd_tall(args, params):
    ideal = _ideal(args)
    if args.set:
        chosen = tall_subset_report(ideal, _set(args), params, args.schedule)
        return chosen.to_json(), True, chosen.trace
    report = is_tall(ideal, params)
    return report.to_json(), report.decided, report.trace


def cmd_fk_classify(args, params):
    report = fk_classify(_ideal(args), params)
    return report.to_json(), report.verdict != "undecided", report.tallness.trace


def cmd_density(args, params):
    trace = density_trace(_ideal(args), _set(args), params.rows)
    return {"trace": [[n, v] for n, v in trace]}, True, trace


def cmd_witness_positive(args, params):
    if args.set:
        s = _set(args)
    elif args.ideal:
        s = nontall_witness(_ideal(args), params)
    else:
        raise UsageError("witness-positive needs --set or --ideal")
    dual = positive_witness(s, params.depth, params)
    growth = witness_growth(dual)
    doc = {"pair": dual.to_json(), "growth": [[n, v] for n, v in growth]}
    if args.v:
        if not (args.ideal and args.bound and args.declared):
            raise UsageError("--v needs --ideal, --bound and --declared")
        check = verify_boundedness(
            dual, _seq(args, "v"), _ideal(args), _rational(args.bound, "--bound"),
            _set(args, "declared"), params.depth, params)
        doc["boundedness"] = check.to_json()
    return doc, True, growth


def cmd_witness_adversary(args, params):
    ideal = _ideal(args)
    if args.pair:
        dual = DualPair.from_json(load_json(args.pair, "--pair"), params.depth)
    else:
        dual = DualPair("diagonal", Named("constant", 1))
    recursion = "paperLiteral" if args.paper_literal else "corrected"
    result = adversary_construct(ideal, dual, params.steps, params, recursion)
    return result.to_json(), True, result.trace


def cmd_noninclusion(args, params):
    report = noninclusion_report(_ideal(args, "tall"), _ideal(args, "nontall"), params)
    return report.to_json(), True, report.trace


def cmd_matrix_check(args, params):
    a = _matrix(args)
    regularity = check_regularity(a, params)
    pringsheim = pringsheim_zero_estimate(a, params)
    doc = {"regularity": regularity.to_json(), "pringsheim": pringsheim.to_json()}
    decided = regularity.decided and pringsheim.decided
    if args.ideal or args.j_ideal:
        if not (args.ideal and args.j_ideal):
            raise UsageError("--ideal and --j-ideal must be given together")
        subspace = check_tall_subspace(a, _ideal(args), _ideal(args, "j_ideal"), params)
        doc["tallSubspace"] = subspace.to_json()
        decided = decided and _decided(subspace.verdict)
    return doc, decided, pringsheim.trace


def cmd_matrix_transform(args, params):
    a, x = _matrix(args), _seq(args)
    if args.ideal:
        result = cA_membership_estimate(a, _ideal(args), x, params)
        return result.to_json(), result.decided, result.trace
    values = transform_prefix(a, x, params.rows, params)
    trace = list(enumerate(values))
    return {"transform": values}, True, trace


def cmd_seminorm(args, params):
    p, q, stabilized = eval_seminorms(_matrix(args), _seq(args), args.row, params)
    return {"p": p, "q": q, "stabilized": stabilized}, True, ()


def cmd_classify_indicator(args, params):
    report = classify_indicator(_ideal(args), _set(args), params)
    return report.to_json(), _decided(report.verdict), report.member.trace


def cmd_classify_space(args, params):
    ideal, x = _ideal(args), _seq(args)
    if args.eta is not None or args.tolerance is not None:
        if args.eta is None or args.tolerance is None:
            raise UsageError("--eta and --tolerance must be given together")
        result = ideal_limit_estimate(
            ideal, x, _rational(args.eta, "--eta"), _rational(args.tolerance, "--tolerance"), params)
        return result.to_json(), result.decided, result.trace
    report = classify_space(ideal, x, params)
    decided = all(flag.decided for flag in report.flags.values())
    return report.to_json(), decided, report.c.trace


def cmd_bk_counterexample(args, params):
    report = bk_report(_ideal(args), _seq(args, "y"), params)
    return report.to_json(), True, report.ratios


COMMANDS = {
    "member": cmd_member,
    "tall": cmd_tall,
    "fk-classify": cmd_fk_classify,
    "density": cmd_density,
    "witness-positive": cmd_witness_positive,
    "witness-adversary": cmd_witness_adversary,
    "noninclusion": cmd_noninclusion,
    "matrix-check": cmd_matrix_check,
    "matrix-transform": cmd_matrix_transform,
    "seminorm": cmd_seminorm,
    "classify-indicator": cmd_classify_indicator,
    "classify-space": cmd_classify_space,
    "bk-counterexample": cmd_bk_counterexample,
}


def build_parser():
    common = CommandLineParser(add_help=False)
    common.add_argument("--require-decision", action="store_true",
                        help="Exit with code 3 when the verdict is Unknown")
    common.add_argument("--out", help="Write the trace as CSV (n,value) to this path")
    common.add_argument("--N", type=int, help="Index horizon")
    common.add_argument("--rows", type=int, help="Trace length")
    common.add_argument("--epsilon", help="Tolerance, e.g. 1/100")
    common.add_argument("--recurrence", help="Recurrence fraction in (0, 1]")
    common.add_argument("--scan-limit", type=int, help="Elements of B scanned")
    common.add_argument("--steps", type=int, help="Adversary steps")
    common.add_argument("--depth", type=int, help="Positive witness depth")

    parser = CommandLineParser(prog="omega-ideals", description="Ideals on ω, tallness and FK duality witnesses")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CommandLineParser)

    def add(name, help_text, **arguments):
        command = sub.add_parser(name, parents=[common], help=help_text)
        for flag, options in arguments.items():
            command.add_argument(f"--{flag.replace('_', '-')}", **options)
        return command

    required = {"required": True}
    add("member", "Decide membership of a set in an ideal", ideal=required, set=required,
        dual={"action": "store_true", "help": "Decide membership in the dual filter"})
    add("tall", "Decide tallness, or select a tall subset of --set", ideal=required, set={},
        schedule={"choices": SCHEDULES, "default": "geometric"})
    add("fk-classify", "Decide whether c(I) admits a locally convex FK topology", ideal=required)
    add("density", "Density trace of a set under an ideal's functional", ideal=required, set=required)
    add("witness-positive", "Positive witness pair over a set or a non-tall ideal's witness",
        set={}, ideal={}, v={}, bound={}, declared={})
    add("witness-adversary", "Adversary construction for a tall ideal", ideal=required, pair={},
        paper_literal={"action": "store_true", "help": "Use the displayed recursion instead of the corrected one"})
    add("noninclusion", "Sequence in c00(tall) outside ℓ∞(nontall)", tall=required, nontall=required)
    add("matrix-check", "Regularity and Pringsheim estimates of a matrix", matrix=required,
        ideal={}, j_ideal={})
    add("matrix-transform", "Transform prefix, or c_A(I) membership with --ideal", matrix=required,
        seq=required, ideal={})
    add("seminorm", "Seminorms p_n and q_n of a sequence", matrix=required, seq=required,
        row={"type": int, "required": True})
    add("classify-indicator", "I-convergence of an indicator sequence", ideal=required, set=required)
    add("classify-space", "Classify a sequence into c00, c0, c and ℓ∞ of an ideal", ideal=required,
        seq=required, eta={}, tolerance={})
    add("bk-counterexample", "Counterexample to domination by a sequence y", ideal=required, y=required)
    return parser


def horizon_from_args(args):
    config = {}
    for field_name, flag in (("N", "N"), ("rows", "rows"), ("epsilon", "epsilon"),
                             ("recurrence", "recurrence"), ("scan_limit", "scan_limit"),
                             ("steps", "steps"), ("depth", "depth")):
        value = getattr(args, flag)
        if value is not None:
            config[field_name] = value
    return HorizonParams.from_env(config)


def emit(document):
    print(dump_document(document))


def run(argv=None):
    """
    Parse arguments, dispatch one command and emit its JSON document.

    Args:
        argv (list, optional): Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        int: The process exit code
    """
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        params = horizon_from_args(args)
        logger.info(f"Running {args.command} with {params}")
        document, decided, trace = COMMANDS[args.command](args, params)
        if args.out and trace:
            write_trace_csv(args.out, trace)
        emit(document)
        if not decided and args.require_decision:
            logger.info("Verdict is Unknown and a decision was required")
            return EXIT_UNDECIDED
        return EXIT_OK
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        emit({"error": "UsageError", "detail": str(e)})
        return EXIT_USAGE
    except OmegaIdealsError as e:
        logger.error(f"{e.name}: {e}")
        emit(e.to_json())
        return e.exit_code
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        logger.error(traceback.format_exc())
        emit({"error": "InternalError", "detail": str(e)})
        return EXIT_USAGE


def main():
    # Load environment variables
    load_dotenv()
    sys.exit(run())


if __name__ == "__main__":
    main()
