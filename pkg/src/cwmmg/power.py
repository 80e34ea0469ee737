from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

KINDS = ("ss", "bz", "hp", "dp")


@dataclass(frozen=True)
class PowerProfile:
    """Exact per-player values of one power index (indexed by player id)."""

    kind: str
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown index kind {self.kind!r}; expected one of {KINDS}")

    def __getitem__(self, j: int) -> Fraction:
        return self.values[j]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def total(self, members: Iterable[int] | None = None) -> Fraction:
        """Sum of values over ``members`` (all players when omitted)."""
        if members is None:
            return sum(self.values, Fraction(0))
        return sum((self.values[j] for j in members), Fraction(0))


def check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise ValueError(f"unknown index kind {kind!r}; expected one of {KINDS}")
    return kind
