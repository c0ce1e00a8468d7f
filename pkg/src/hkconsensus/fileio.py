"""Text formats shared by the CLI: vector files and tidy CSV emission."""

from __future__ import annotations

import sys
import warnings
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .errors import InputFormatError
from .graph import Graph


def read_vector_file(source, graph: Graph, name: str = "vector") -> np.ndarray:
    """Read "<label> <value>" lines into a dense vector over graph nodes.

    Nodes absent from the file default to 0 (with a warning), which keeps
    sparse seeds convenient. Unknown labels and duplicates are errors.
    """
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, Path):
        text = source.read_text(encoding="utf-8")
    else:
        text = str(source)
    values = np.zeros(graph.n)
    seen: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise InputFormatError(f"{name}: expected '<label> <value>' at line {lineno}")
        label, value = tokens
        idx = graph.index_of(label)
        if idx in seen:
            raise InputFormatError(f"{name}: duplicate entry for {label!r} at line {lineno}")
        try:
            values[idx] = float(value)
        except ValueError:
            raise InputFormatError(f"{name}: bad numeric value at line {lineno}") from None
        seen.add(idx)
    missing = graph.n - len(seen)
    if missing:
        warnings.warn(f"{name}: {missing} node(s) not listed; defaulting to 0", stacklevel=2)
    return values


def format_value(v: float) -> str:
    """Decimal text with 10 significant digits; deterministic across platforms."""
    return f"{float(v):.10g}"


def write_csv(handle, comments, header, rows) -> None:
    """Comment lines ('# ' prefixed), one header row, then data rows."""
    for comment in comments:
        handle.write(f"# {comment}\n")
    handle.write(",".join(header) + "\n")
    for row in rows:
        handle.write(",".join(str(c) if isinstance(c, str) else format_value(c) for c in row))
        handle.write("\n")


@contextmanager
def open_output(path):
    """File handle for --out PATH, or stdout when path is None."""
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            yield handle
