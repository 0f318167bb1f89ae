#!/usr/bin/env python3
"""
Converter Utilities

This module converts between the exact rationals used by the library and the
strings that appear in JSON documents and CSV traces. Rationals always leave
the library in canonical "p/q" form (lowest terms, q > 0) so that identical
inputs produce byte-identical output.
"""

import re
import csv
import json
import logging
from fractions import Fraction

# Configure module logger
logger = logging.getLogger(__name__)

RATIONAL_PATTERN = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$')
DECIMAL_PATTERN = re.compile(r'^\s*([+-]?\d*[.,]\d+(?:[eE][+-]?\d+)?)\s*$')


def parse_rational(value):
    """
    Parse a rational number from an int, a Fraction or a string.

    Accepted strings are "p", "p/q" and decimals such as "0.25" or "0,25"
    (decimals are converted exactly, never through binary floating point).

    Args:
        value (int | Fraction | str): The value to parse

    Returns:
        Fraction: The parsed value

    Raises:
        ValueError: If the value is not a rational literal
    """
    if isinstance(value, bool):
        raise ValueError(f"Not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"Not a rational: {value!r}")

    match = RATIONAL_PATTERN.match(value)
    if match:
        numerator = int(match.group(1))
        denominator = int(match.group(2)) if match.group(2) else 1
        if denominator == 0:
            raise ValueError(f"Zero denominator in {value!r}")
        return Fraction(numerator, denominator)

    match = DECIMAL_PATTERN.match(value)
    if match:
        # Replace comma with period for decimal parsing
        return Fraction(match.group(1).replace(',', '.'))

    raise ValueError(f"Could not parse rational from: {value!r}")


def format_rational(value):
    """
    Format a rational in canonical form.

    Args:
        value (int | Fraction): The value to format

    Returns:
        str: "p/q" in lowest terms with q > 0, or "p" when q = 1
    """
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_jsonable(obj):
    """
    Recursively convert a document so that it can be passed to json.dumps.

    Fractions become canonical rational strings, tuples become lists and objects
    exposing ``to_json`` are serialized through it.

    Args:
        obj: Any document built from dicts, lists, tuples, scalars and library values

    Returns:
        A structure made only of dicts, lists, strings, ints, bools and None
    """
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, dict):
        return {str(key): to_jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if isinstance(obj, float):
        logger.warning(f"Float {obj} reached the serialization boundary, converting exactly")
        return format_rational(Fraction(obj))
    raise TypeError(f"Cannot serialize {type(obj).__name__}")


def dump_document(obj):
    """
    Serialize a document deterministically (sorted keys, canonical rationals).

    Args:
        obj: The document

    Returns:
        str: The JSON text
    """
    return json.dumps(to_jsonable(obj), sort_keys=True, ensure_ascii=False)


def write_trace_csv(path, trace):
    """
    Write a numeric trace as CSV with columns n, value.

    Args:
        path (str | Path): Output file
        trace (list): Pairs (n, value)
    """
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["n", "value"])
        for n, value in trace:
            writer.writerow([n, format_rational(value)])
    logger.info(f"Wrote {len(trace)} trace rows to {path}")
