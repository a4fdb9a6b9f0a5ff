"""Plain CSV caches for a_p tables and per-d Euler data.

Files are ASCII, comma separated, ``\\n`` terminated, header first, with no
trailing blank line. Writes go to a temporary file in the same directory
followed by :func:`os.replace`, so a concurrent reader sees either the old
or the new complete file.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

from .errors import CacheCorrupted, UsageError

__all__ = ["resolve_cache_dir", "TableCache", "write_csv_atomic", "read_int_csv"]

ENV_VAR = "TWISTLAB_CACHE"
DEFAULT_DIR = ".twistlab-cache"


def resolve_cache_dir(flag: str | os.PathLike | None = None) -> Path:
    if flag:
        return Path(flag)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else Path(DEFAULT_DIR)


def write_csv_atomic(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)] + [",".join(str(v) for v in row) for row in rows]
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="") as fh:
            fh.write("\n".join(lines))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_int_csv(path: Path, header: Sequence[str]) -> list[tuple[int, ...]]:
    """Rows of an all-integer CSV; any malformed line raises CacheCorrupted."""
    path = Path(path)
    with open(path, encoding="ascii", newline="") as fh:
        text = fh.read()
    lines = text.split("\n")
    if lines[0] != ",".join(header):
        raise CacheCorrupted(path, 1, lines[0])
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(header):
            raise CacheCorrupted(path, lineno, line)
        try:
            rows.append(tuple(int(v) for v in parts))
        except ValueError:
            raise CacheCorrupted(path, lineno, line) from None
    return rows


class TableCache:
    """Directory of ``ap_<curve>.csv`` and ``euler_d<d>.csv`` tables."""

    def __init__(self, root: str | os.PathLike | None = None):
        self.root = resolve_cache_dir(root)

    def _path(self, name: str) -> Path:
        return self.root / f"{name}.csv"

    def load_ap(self, curve: str) -> dict[int, int]:
        path = self._path(f"ap_{curve}")
        if not path.exists():
            return {}
        return {p: ap for p, ap in read_int_csv(path, ("p", "ap"))}

    def store_ap(self, curve: str, table: dict[int, int]) -> None:
        write_csv_atomic(self._path(f"ap_{curve}"), ("p", "ap"), sorted(table.items()))

    def load_euler(self, d: int) -> dict[int, tuple[int, int]]:
        path = self._path(f"euler_d{d}")
        if not path.exists():
            return {}
        return {p: (a1, a2) for p, a1, a2 in read_int_csv(path, ("p", "a1", "a2"))}

    def store_euler(self, d: int, table: dict[int, tuple[int, int]]) -> None:
        rows = [(p, a1, a2) for p, (a1, a2) in sorted(table.items())]
        write_csv_atomic(self._path(f"euler_d{d}"), ("p", "a1", "a2"), rows)

    def check_writable(self) -> None:
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise UsageError(f"cache directory {self.root} is not writable: {exc}") from exc
