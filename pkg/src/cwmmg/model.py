"""Core game types and the winning / swing / minimality predicates.

A coalition's competitive power is the sum over dimensions of the
componentwise maxima of its members' weight vectors.  A coalition wins
when its power strictly exceeds the power of its complement; ties lose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import (
    InvalidGameError,
    InvalidPartitionError,
    MalformedCoalitionError,
    PreconditionError,
)

MAX_WEIGHT = 2**32 - 1

Coalition = frozenset  # frozenset[int] of dense player ids


@dataclass(frozen=True)
class PlayerVector:
    id: int
    w: tuple[int, ...]
    name: Optional[str] = field(default=None, compare=False)

    @property
    def label(self) -> str:
        return self.name if self.name is not None else f"p{self.id + 1}"


@dataclass(frozen=True)
class Game:
    players: tuple[PlayerVector, ...]
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidGameError(f"dimension k must be >= 1, got {self.k}")
        if not self.players:
            raise InvalidGameError("a game needs at least one player")
        for idx, p in enumerate(self.players):
            if p.id != idx:
                raise InvalidGameError(f"player ids must be dense: position {idx} has id {p.id}")
            if len(p.w) != self.k:
                raise InvalidGameError(
                    f"player {p.label} has {len(p.w)} weights, expected k={self.k}"
                )
            for c in p.w:
                if not isinstance(c, int) or isinstance(c, bool):
                    raise InvalidGameError(f"player {p.label} has non-integer weight {c!r}")
                if c < 0 or c > MAX_WEIGHT:
                    raise InvalidGameError(
                        f"player {p.label} weight {c} outside [0, {MAX_WEIGHT}]"
                    )
        if self.total_power == 0:
            raise InvalidGameError("all-zero game: q(N) must be positive")

    @classmethod
    def from_weights(
        cls, weights: Iterable[Sequence[int]], names: Optional[Sequence[Optional[str]]] = None
    ) -> "Game":
        rows = [tuple(int(c) for c in w) for w in weights]
        if not rows:
            raise InvalidGameError("a game needs at least one player")
        if names is None:
            names = [None] * len(rows)
        players = tuple(PlayerVector(i, w, nm) for i, (w, nm) in enumerate(zip(rows, names)))
        return cls(players, len(rows[0]))

    @property
    def n(self) -> int:
        return len(self.players)

    @cached_property
    def weights(self) -> tuple[tuple[int, ...], ...]:
        return tuple(p.w for p in self.players)

    @cached_property
    def grand(self) -> frozenset:
        return frozenset(range(self.n))

    @cached_property
    def total_power(self) -> int:
        return sum(max(w[i] for w in self.weights) for i in range(self.k))

    def canonical_bytes(self) -> bytes:
        """Byte encoding of the weight matrix; names are metadata and excluded."""
        rows = ";".join(",".join(str(c) for c in w) for w in self.weights)
        return f"k={self.k}|{rows}".encode()


@dataclass(frozen=True)
class CoalitionProfile:
    qvec: tuple[int, ...]
    qsum: int
    busy_per_dim: tuple[frozenset, ...]
    busy: frozenset


@dataclass(frozen=True)
class PartitionStructure:
    blocks: tuple[frozenset, ...]

    @classmethod
    def of(cls, game: Game, blocks: Iterable[Iterable[int]]) -> "PartitionStructure":
        pi = cls(tuple(sorted((frozenset(b) for b in blocks), key=sorted)))
        validate_partition(game, pi)
        return pi

    def canonical(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(b)) for b in self.blocks))

    def __contains__(self, block: object) -> bool:
        return block in self.blocks


def as_coalition(game: Game, members: Iterable[int]) -> frozenset:
    """Validate ``members`` against ``game`` and return it as a frozenset."""
    items = list(members)
    c = frozenset(items)
    if len(c) != len(items):
        raise MalformedCoalitionError(f"duplicate members in {sorted(items)}")
    for j in c:
        if not isinstance(j, int) or not 0 <= j < game.n:
            raise MalformedCoalitionError(f"member {j!r} outside 0..{game.n - 1}")
    return c


def power(game: Game, members: Iterable[int]) -> int:
    """q(C) without the busy-set bookkeeping; the empty coalition has power 0."""
    w = game.weights
    total = 0
    members = list(members)
    if not members:
        return 0
    for i in range(game.k):
        total += max(w[j][i] for j in members)
    return total


def coalition_profile(game: Game, c: Iterable[int]) -> CoalitionProfile:
    c = as_coalition(game, c)
    w = game.weights
    if not c:
        zeros = (0,) * game.k
        return CoalitionProfile(zeros, 0, tuple(frozenset() for _ in range(game.k)), frozenset())
    qvec = tuple(max(w[j][i] for j in c) for i in range(game.k))
    per_dim = tuple(frozenset(j for j in c if w[j][i] == qvec[i]) for i in range(game.k))
    return CoalitionProfile(qvec, sum(qvec), per_dim, frozenset().union(*per_dim))


def complement(game: Game, c: Iterable[int]) -> frozenset:
    return game.grand - frozenset(c)


def is_winning(game: Game, c: Iterable[int]) -> bool:
    c = as_coalition(game, c)
    return power(game, c) > power(game, game.grand - c)


def is_swing(game: Game, c: Iterable[int], j: int) -> bool:
    c = as_coalition(game, c)
    if j not in c:
        raise PreconditionError(f"player {j} is not a member of {sorted(c)}")
    if not is_winning(game, c):
        raise PreconditionError(f"coalition {sorted(c)} is losing")
    return not is_winning(game, c - {j})


def is_mwc(game: Game, c: Iterable[int]) -> bool:
    c = as_coalition(game, c)
    if not c:
        return False
    w = game.weights
    dims = range(game.k)
    # per dimension: best and runner-up inside C (with multiplicity), best outside
    best, count, second, out = [0] * game.k, [0] * game.k, [0] * game.k, [0] * game.k
    for j in range(game.n):
        wj = w[j]
        if j in c:
            for i in dims:
                v = wj[i]
                if v > best[i]:
                    second[i], best[i], count[i] = best[i], v, 1
                elif v == best[i]:
                    count[i] += 1
                elif v > second[i]:
                    second[i] = v
        else:
            for i in dims:
                if wj[i] > out[i]:
                    out[i] = wj[i]
    if sum(best) <= sum(out):
        return False
    # single removals suffice because the game is monotone
    for j in c:
        wj = w[j]
        kept = sum(second[i] if wj[i] == best[i] and count[i] == 1 else best[i] for i in dims)
        rest = sum(max(out[i], wj[i]) for i in dims)
        if kept > rest:
            return False
    return True


def validate_partition(game: Game, pi: PartitionStructure) -> None:
    seen: set[int] = set()
    for block in pi.blocks:
        if not block:
            raise InvalidPartitionError("partition contains an empty block")
        as_coalition(game, block)
        if seen & block:
            raise InvalidPartitionError(f"blocks overlap on {sorted(seen & block)}")
        seen |= block
    if seen != game.grand:
        missing = sorted(game.grand - seen)
        raise InvalidPartitionError(f"partition does not cover players {missing}")


def winner_of(game: Game, pi: PartitionStructure) -> Optional[frozenset]:
    """The block with strictly greatest power, or None on a tie or all-zero blocks."""
    validate_partition(game, pi)
    ranked = sorted(((power(game, b), b) for b in pi.blocks), key=lambda t: -t[0])
    top_q, top = ranked[0]
    if top_q <= 0:
        return None
    if len(ranked) > 1 and ranked[1][0] == top_q:
        return None
    return top
