"""Dyck normal form, Chomsky-Schützenberger languages and regular approximations."""

from pathlib import Path

from ._core import (
    ParseError,
    RefineError,
    approx,
    approx_words,
    language,
    member,
    normalize,
    regex_r,
    regex_rm,
    to_cnf,
    to_dyck,
    traces,
    verify,
)


def load(path):
    """Grammar text from a file."""
    return Path(path).read_text()


__all__ = [
    "ParseError",
    "RefineError",
    "approx",
    "approx_words",
    "language",
    "load",
    "member",
    "normalize",
    "regex_r",
    "regex_rm",
    "to_cnf",
    "to_dyck",
    "traces",
    "verify",
]
