"""Plain-text state files and CSV output.

State file layout::

    # optional comments
    density2q
    [0.5, 0] [0, 0] [0, 0] [0.5, 0]
    ...

The first token names the kind (``density2q``, ``pure2q`` or ``pure3q``);
the rest is a whitespace-insensitive sequence of ``[re, im]`` pairs, a
row-major 4x4 matrix for ``density2q`` and an amplitude vector otherwise.
"""
from __future__ import annotations

import csv
import math
import re
from typing import Iterable, TextIO

import numpy as np

from .qmat import DensityMatrix, PureState

__all__ = [
    "StateFileError",
    "STATE_KINDS",
    "parse_state_file",
    "read_state_file",
    "format_state_file",
    "format_value",
    "write_csv",
]

STATE_KINDS = {"density2q": 16, "pure2q": 4, "pure3q": 8}

_PAIR = re.compile(r"\[\s*([^\s,\[\]]+)\s*,\s*([^\s,\[\]]+)\s*\]")
_NUM = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")


class StateFileError(ValueError):
    pass


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _first_token(s: str) -> str:
    m = re.match(r"\S+", s)
    return m.group(0) if m else "<end of file>"


def parse_state_file(text: str) -> DensityMatrix | PureState:
    """Parse state-file text into a validated state.

    Raises
    ------
    StateFileError
        On malformed input; the message quotes the first offending token.
    InvalidStateError
        When the numbers parse but do not form a valid state.
    """
    body = _strip_comments(text).strip()
    kind = _first_token(body)
    if kind.endswith(":"):
        kind = kind[:-1]
    if kind not in STATE_KINDS:
        raise StateFileError(f"bad token {kind!r}: expected a kind, one of {sorted(STATE_KINDS)}")
    rest = body[len(_first_token(body)) :]
    values: list[complex] = []
    pos = 0
    while True:
        while pos < len(rest) and rest[pos].isspace():
            pos += 1
        if pos >= len(rest):
            break
        m = _PAIR.match(rest, pos)
        if not m:
            raise StateFileError(f"bad token {_first_token(rest[pos:])!r}: expected [re, im]")
        parts = []
        for g in (1, 2):
            tok = m.group(g)
            if not _NUM.fullmatch(tok):
                raise StateFileError(f"bad token {tok!r}: not a number")
            parts.append(float(tok))
        values.append(complex(*parts))
        pos = m.end()
    need = STATE_KINDS[kind]
    if len(values) != need:
        raise StateFileError(f"{kind} needs {need} entries, found {len(values)}")
    arr = np.array(values, dtype=complex)
    if kind == "density2q":
        return DensityMatrix(arr.reshape(4, 4), (2, 2))
    dims = (2, 2) if kind == "pure2q" else (2, 2, 2)
    return PureState(arr, dims)


def read_state_file(path) -> DensityMatrix | PureState:
    with open(path, encoding="utf-8") as fh:
        return parse_state_file(fh.read())


def format_state_file(state: DensityMatrix | PureState) -> str:
    if isinstance(state, DensityMatrix):
        kind, rows = "density2q", state.mat
    else:
        kind = {(2, 2): "pure2q", (2, 2, 2): "pure3q"}[state.dims]
        rows = state.amplitudes[None, :]
    lines = [kind]
    for row in rows:
        lines.append(" ".join(f"[{format_value(z.real)}, {format_value(z.imag)}]" for z in row))
    return "\n".join(lines) + "\n"


def format_value(x) -> str:
    """17 significant digits for floats, plain text for ints and strings."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r} cannot be written")
        return format(float(x), ".17g")
    return str(x)


def write_csv(fh: TextIO, header: list[str], rows: Iterable[list]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_value(v) for v in row])
