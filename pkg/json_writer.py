"""Result persistence for the command-line tool.

Results are JSON documents carrying a "schema" field, with big integers
already converted to decimal strings by the to_json() methods. Files are
written to a temporary sibling first and renamed into place, so a reader
never sees a half-written result.
"""

import csv
import io
import json
import os
import sys
import tempfile
from collections.abc import Iterable, Sequence

from logging_config import get_logger


def dumps(payload: dict) -> str:
    """Serialize a result with two-space indentation, keys in insertion order."""
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write text to path through a temporary file in the same directory.

    Raises:
        OSError: If the directory is not writable; no partial file is left behind.
    """
    directory = os.path.dirname(os.path.abspath(path))
    handle, temp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="") as temp_file:
            temp_file.write(text)
        os.replace(temp_path, path)
    except OSError:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise


def write_json(payload: dict, output_path: str | None = None) -> None:
    """Write payload as JSON to output_path, or to stdout when no path is given."""
    text = dumps(payload)
    if output_path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    write_atomic(output_path, text)
    get_logger().info("Wrote %s", output_path)


def format_csv(rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerows(rows)
    return buffer.getvalue()


def write_csv(path: str, rows: Iterable[Sequence[str]]) -> None:
    """Write rows (header first) as CSV."""
    write_atomic(path, format_csv(rows))
    get_logger().info("Wrote %s", path)
