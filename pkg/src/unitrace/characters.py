"""Irreducible characters of the symmetric group.

Values come from the Murnaghan-Nakayama rule, implemented on beta-sets
(first-column hook lengths): removing a rim hook of length ``k`` is moving a
bead from position ``b`` to ``b - k``, with sign ``(-1)^(beads jumped)``.

Full tables can be persisted as plain text::

    # unitrace-character-table order=revlex-1 m=3 sha256=<hex of body>
    3 0 0 1
    3 0 1 1
    ...

one ``m mu-index lambda-index value`` line per entry.
"""

from __future__ import annotations

import hashlib
import logging
import os
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from pathlib import Path

from .partitions import (
    CANONICAL_ORDER,
    Partition,
    class_size,
    enumerate_partitions,
    identity_type,
    partition_index,
)

log = logging.getLogger(__name__)

DEFAULT_TABLE_CEILING = 24
CACHE_ENV = "UNITRACE_CACHE_DIR"


class CacheChecksumError(RuntimeError):
    """A cache file failed validation."""


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "unitrace"


def character(mu: Partition, lam: Partition) -> int:
    """chi^mu evaluated on the class of cycle type ``lam``."""
    if mu.weight != lam.weight:
        raise ValueError(f"weight mismatch: |{mu}|={mu.weight} but |{lam}|={lam.weight}")
    return _mn(_beta_set(mu), lam.parts)


def _beta_set(mu: Partition) -> tuple[int, ...]:
    ell = mu.length
    return tuple(sorted(mu[i] + ell - 1 - i for i in range(ell)))


@lru_cache(maxsize=None)
def _mn(beta: tuple[int, ...], cycles: tuple[int, ...]) -> int:
    if not cycles:
        return 1
    k, rest = cycles[0], cycles[1:]
    occupied = set(beta)
    total = 0
    for b in beta:
        target = b - k
        if target < 0 or target in occupied:
            continue
        jumped = sum(1 for c in beta if target < c < b)
        new_beta = tuple(sorted(target if c == b else c for c in beta))
        value = _mn(_normalise(new_beta), rest)
        total += -value if jumped % 2 else value
    return total


def _normalise(beta: tuple[int, ...]) -> tuple[int, ...]:
    # Leading beads at 0,1,2,... are empty rows; strip them so equal shapes share cache keys.
    shift = 0
    while shift < len(beta) and beta[shift] == shift:
        shift += 1
    return tuple(b - shift for b in beta[shift:])


@dataclass(frozen=True)
class CharacterTable:
    """Square table ``values[i][j] = chi^{partitions[i]}_{partitions[j]}``."""

    m: int
    partitions: tuple[Partition, ...]
    values: tuple[tuple[int, ...], ...]
    index: dict[Partition, int] = field(repr=False, compare=False)

    def __call__(self, mu: Partition, lam: Partition) -> int:
        return self.values[self.index[mu]][self.index[lam]]

    def row(self, mu: Partition) -> tuple[int, ...]:
        return self.values[self.index[mu]]

    def dimension(self, mu: Partition) -> int:
        return self(mu, identity_type(self.m))

    def check_orthogonality(self) -> bool:
        """Both orthogonality relations, in exact integer arithmetic."""
        sizes = [class_size(lam) for lam in self.partitions]
        n = len(self.partitions)
        order = factorial(self.m)
        for a in range(n):
            for b in range(a, n):
                rows = sum(g * x * y for g, x, y in zip(sizes, self.values[a], self.values[b]))
                if rows != (order if a == b else 0):
                    return False
                cols = sum(self.values[i][a] * self.values[i][b] for i in range(n))
                if cols * sizes[a] != (order if a == b else 0):
                    return False
        return True


_tables: dict[int, CharacterTable] = {}
_lock = threading.Lock()


def character_table(
    m: int,
    cache: str | os.PathLike | None = None,
    *,
    max_weight: int = DEFAULT_TABLE_CEILING,
    recompute_on_corrupt: bool = True,
) -> CharacterTable:
    """Full character table of S_m.

    ``cache`` may be a file or a directory (file name ``chartable-m{m}.txt``).
    A valid file is loaded; a missing one is written after computing.  A file
    that fails its checksum raises :class:`CacheChecksumError` unless
    ``recompute_on_corrupt`` is set, in which case it is rebuilt and
    overwritten.
    """
    if not 1 <= m <= max_weight:
        raise ValueError(f"m={m} outside [1, {max_weight}]")
    path = _cache_path(cache, m) if cache is not None else None
    if path is None:
        table = _tables.get(m)
        if table is not None:
            return table
    with _lock:
        if path is None and m in _tables:
            return _tables[m]
        table = None
        if path is not None and path.exists():
            try:
                table = load_table(path)
                if table.m != m:
                    raise CacheChecksumError(f"{path} holds m={table.m}, expected {m}")
            except CacheChecksumError:
                if not recompute_on_corrupt:
                    raise
                log.warning("character table cache %s is corrupt; recomputing", path)
                table = None
        if table is None:
            table = _m_table(m) if m not in _tables else _tables[m]
            if path is not None:
                save_table(table, path)
        _tables.setdefault(m, table)
        return table


def _m_table(m: int) -> CharacterTable:
    parts = tuple(enumerate_partitions(m))
    values = tuple(tuple(character(mu, lam) for lam in parts) for mu in parts)
    return CharacterTable(m, parts, values, partition_index(m))


def _cache_path(cache, m: int) -> Path:
    p = Path(cache)
    if p.is_dir() or p.suffix == "":
        return p / f"chartable-m{m}.txt"
    return p


def _body(table: CharacterTable) -> str:
    n = len(table.partitions)
    return "".join(
        f"{table.m} {i} {j} {table.values[i][j]}\n" for i in range(n) for j in range(n)
    )


def save_table(table: CharacterTable, path: str | os.PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = _body(table)
    digest = hashlib.sha256(body.encode()).hexdigest()
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(
        f"# unitrace-character-table order={CANONICAL_ORDER} m={table.m} sha256={digest}\n" + body
    )
    tmp.replace(path)


def load_table(path: str | os.PathLike) -> CharacterTable:
    text = Path(path).read_text()
    header, _, body = text.partition("\n")
    fields = dict(f.split("=", 1) for f in header.lstrip("# ").split()[1:] if "=" in f)
    if not header.startswith("# unitrace-character-table"):
        raise CacheChecksumError(f"{path}: not a character table file")
    if fields.get("order") != CANONICAL_ORDER:
        raise CacheChecksumError(f"{path}: partition order {fields.get('order')!r} is stale")
    if hashlib.sha256(body.encode()).hexdigest() != fields.get("sha256"):
        raise CacheChecksumError(f"{path}: checksum mismatch")
    m = int(fields["m"])
    parts = tuple(enumerate_partitions(m))
    n = len(parts)
    grid = [[0] * n for _ in range(n)]
    lines = body.splitlines()
    if len(lines) != n * n:
        raise CacheChecksumError(f"{path}: expected {n * n} entries, found {len(lines)}")
    for line in lines:
        mm, i, j, v = (int(t) for t in line.split())
        if mm != m:
            raise CacheChecksumError(f"{path}: entry for m={mm}")
        grid[i][j] = v
    return CharacterTable(m, parts, tuple(map(tuple, grid)), partition_index(m))
