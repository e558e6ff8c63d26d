"""Argument types and flags shared by the subcommand routers."""
import argparse

from penner_series import SYMBOLIC

FORMATS = ("json", "text")


def size_type(text: str):
    """--N: a positive integer or 'sym'."""
    if text == SYMBOLIC:
        return SYMBOLIC
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or '{SYMBOLIC}', got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"matrix size must be >= 1, got {value}")
    return value


def int_at_least(minimum: int):
    def parse(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be >= {minimum}, got {value}")
        return value
    parse.__name__ = f"int>={minimum}"
    return parse


def add_format_argument(parser, choices=FORMATS, default="json"):
    parser.add_argument("--format", choices=choices, default=default, help=f"output format (default {default})")


__all__ = ["FORMATS", "size_type", "int_at_least", "add_format_argument"]
