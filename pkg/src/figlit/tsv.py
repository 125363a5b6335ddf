"""TAB-separated record helpers shared by every file format.

Free-text fields that are not the last column are escaped so a literal
TAB or newline in an utterance cannot shift columns.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def escape(text: str) -> str:
    if not any(c in text for c in _ESCAPES):
        return text
    return "".join(_ESCAPES.get(c, c) for c in text)


def unescape(text: str) -> str:
    if "\\" not in text:
        return text
    out = []
    it = iter(text)
    for c in it:
        if c == "\\":
            nxt = next(it, "")
            out.append(_UNESCAPES.get(nxt, "\\" + nxt))
        else:
            out.append(c)
    return "".join(out)


def iter_records(lines: Iterable[str], maxsplit: int = -1) -> Iterator[tuple[int, list[str]]]:
    """Yield ``(lineno, fields)``, skipping blank lines and ``#`` comments."""
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        yield lineno, line.split("\t", maxsplit) if maxsplit >= 0 else line.split("\t")


def format_record(fields: Iterable[object]) -> str:
    return "\t".join(escape(str(f)) for f in fields) + "\n"


def write_records(path: str | Path, rows: Iterable[Iterable[object]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        for row in rows:
            fp.write(format_record(row))


def read_lines(path: str | Path) -> list[str]:
    # str.splitlines() would also break on U+2028, U+0085 etc.
    with open(path, encoding="utf-8", newline="") as fp:
        text = fp.read()
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines
