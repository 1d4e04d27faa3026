"""Coxeter matrices and their JSON encoding.

The document schema is ``{"rank": n, "m": [[...], ...]}`` where an
infinite order is written as ``0`` or the string ``"inf"``.  Extra keys
(``name``, ``gamma``, ``notes``, ``aliases``) are tolerated so preset files
share the schema.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Sequence

from coxrep.errors import (
    AsymmetricMatrixError,
    DiagonalError,
    MalformedMatrixError,
    OffDiagonalError,
)

INF = math.inf


def _decode_order(value: Any, i: int, j: int) -> float | int:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "∞"):
            return INF
        raise MalformedMatrixError(f"m[{i}][{j}]: unrecognised order {value!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedMatrixError(f"m[{i}][{j}]: order must be an integer, got {value!r}")
    if isinstance(value, float):
        if math.isinf(value) and value > 0:
            return INF
        if not value.is_integer():
            raise MalformedMatrixError(f"m[{i}][{j}]: order must be an integer, got {value!r}")
        value = int(value)
    return INF if value == 0 and i != j else value


@dataclass(frozen=True)
class CoxeterMatrix:
    """Validated presentation data of a Coxeter system.

    ``m[i][j]`` is an ``int`` or ``math.inf``.
    """

    rank: int
    m: tuple[tuple[float | int, ...], ...]

    def __post_init__(self):
        n = self.rank
        if not isinstance(n, int) or n < 1:
            raise MalformedMatrixError(f"rank must be a positive integer, got {n!r}")
        if len(self.m) != n or any(len(row) != n for row in self.m):
            raise MalformedMatrixError(f"m must be a {n}x{n} array")
        for i in range(n):
            if self.m[i][i] != 1:
                raise DiagonalError(f"m[{i}][{i}] = {self.m[i][i]!r}, must be 1")
        for i in range(n):
            for j in range(i + 1, n):
                if self.m[i][j] != self.m[j][i]:
                    raise AsymmetricMatrixError(
                        f"m[{i}][{j}] = {self.m[i][j]!r} but m[{j}][{i}] = {self.m[j][i]!r}"
                    )
                if self.m[i][j] < 2:
                    raise OffDiagonalError(f"m[{i}][{j}] = {self.m[i][j]!r}, must be >= 2")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> "CoxeterMatrix":
        decoded = tuple(
            tuple(_decode_order(v, i, j) for j, v in enumerate(row)) for i, row in enumerate(rows)
        )
        return cls(len(decoded), decoded)

    def order(self, i: int, j: int) -> float | int:
        return self.m[i][j]

    def is_finite_entry(self, i: int, j: int) -> bool:
        return self.m[i][j] != INF

    def to_json(self) -> dict:
        rows = [[0 if v == INF else int(v) for v in row] for row in self.m]
        return {"rank": self.rank, "m": rows}


def parse_coxeter_matrix(text: str | dict) -> CoxeterMatrix:
    """Parse and validate a Coxeter matrix document (JSON text or a decoded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedMatrixError(f"not valid JSON: {exc}") from exc
    else:
        doc = text
    if not isinstance(doc, dict):
        raise MalformedMatrixError("document must be a JSON object")
    if "rank" not in doc or "m" not in doc:
        raise MalformedMatrixError("document needs both 'rank' and 'm'")
    rank, rows = doc["rank"], doc["m"]
    if isinstance(rank, bool) or not isinstance(rank, int) or rank < 1:
        raise MalformedMatrixError(f"rank must be a positive integer, got {rank!r}")
    if not isinstance(rows, list) or len(rows) != rank or any(
        not isinstance(row, list) or len(row) != rank for row in rows
    ):
        raise MalformedMatrixError(f"m must be a {rank}x{rank} nested list")
    return CoxeterMatrix.from_rows(rows)
