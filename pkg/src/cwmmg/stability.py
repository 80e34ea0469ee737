"""Stable coalitions by minimum power sum, proportional allocation, and the
winner-quality ratio.

The stable coalitions are the MWCs whose members' index values have the
smallest total ``min_theta``.  A whole structure is stable exactly when one
of its blocks is winning with total ``min_theta``: such a block is a stable
coalition, possibly padded with players whose index value is zero (null
players), since padding changes nobody's payoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import ConsistencyError, DegeneratePowerError, PreconditionError
from .model import Game, PartitionStructure, as_coalition, is_winning, power, validate_partition, winner_of
from .oracle import canonical_order, partitions_of_mask, mask_of, members_of
from .power import PowerProfile


@dataclass(frozen=True)
class StabilityReport:
    kind: str
    min_theta: Fraction
    stable_coalitions: tuple[frozenset, ...]
    winner_ratio: Fraction
    allocation: tuple[Fraction, ...]

    @property
    def representative(self) -> frozenset:
        return self.stable_coalitions[0]


def theta(powers: PowerProfile, c: Iterable[int]) -> Fraction:
    return powers.total(c)


def allocate(game: Game, pi: PartitionStructure, powers: PowerProfile) -> tuple[Fraction, ...]:
    """Winner's members split 1 in proportion to their index values; all others get 0."""
    validate_partition(game, pi)
    if len(powers) != game.n:
        raise ConsistencyError(f"power profile has {len(powers)} entries, game has {game.n} players")
    out = [Fraction(0)] * game.n
    winner = winner_of(game, pi)
    if winner is None:
        return tuple(out)
    total = theta(powers, winner)
    if total == 0:
        raise DegeneratePowerError(
            f"winning block {sorted(winner)} has zero total power; proportional split undefined"
        )
    for j in winner:
        out[j] = powers[j] / total
    return tuple(out)


def winner_ratio(game: Game, c: Iterable[int]) -> Fraction:
    c = as_coalition(game, c)
    if not is_winning(game, c):
        raise PreconditionError(f"coalition {sorted(c)} is losing")
    return Fraction(power(game, c), game.total_power)


def representative_structure(game: Game, c: frozenset) -> PartitionStructure:
    """``{C, N \\ C}``, or ``{N}`` when C is everyone."""
    rest = game.grand - c
    return PartitionStructure.of(game, [c, rest] if rest else [c])


def cstable_coalitions(game: Game, mwc, powers: PowerProfile) -> StabilityReport:
    coalitions = [frozenset(c) for c in mwc]
    if not coalitions:
        raise ConsistencyError("empty MWC list; every game with q(N) > 0 has an MWC")
    if len(powers) != game.n:
        raise ConsistencyError(f"power profile has {len(powers)} entries, game has {game.n} players")
    sums = [theta(powers, c) for c in coalitions]
    best = min(sums)
    stable = tuple(canonical_order(c for c, s in zip(coalitions, sums) if s == best))
    rep = stable[0]
    return StabilityReport(
        kind=powers.kind,
        min_theta=best,
        stable_coalitions=stable,
        winner_ratio=winner_ratio(game, rep),
        allocation=allocate(game, representative_structure(game, rep), powers),
    )


def stable_structures(game: Game, mwc, powers: PowerProfile) -> list[PartitionStructure]:
    """All stable partitions of N in canonical order (exponential in n).

    Each is ``{C + Z} + rest`` where C is a stable coalition, Z a set of
    zero-power players outside C, and rest any partition of what remains.
    """
    report = cstable_coalitions(game, mwc, powers)
    zero = [j for j in range(game.n) if powers[j] == 0]
    blocks = set()
    for c in report.stable_coalitions:
        pad = [j for j in zero if j not in c]
        for bits in range(1 << len(pad)):
            blocks.add(c | {pad[i] for i in range(len(pad)) if (bits >> i) & 1})
    found = list(structures_containing(game, blocks))
    return sorted(found, key=PartitionStructure.canonical)


def structures_containing(game: Game, coalitions) -> Iterator[PartitionStructure]:
    """Every partition of N having one of ``coalitions`` as a block (exponential)."""
    seen = set()
    full = (1 << game.n) - 1
    for c in coalitions:
        cm = mask_of(c)
        for rest in partitions_of_mask(full & ~cm):
            pi = PartitionStructure(
                tuple(sorted([frozenset(c)] + [members_of(b) for b in rest], key=sorted))
            )
            key = pi.canonical()
            if key not in seen:
                seen.add(key)
                yield pi
