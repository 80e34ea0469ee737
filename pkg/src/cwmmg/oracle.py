"""Exponential ground truth for games of any dimension.

Every coalition is a bitmask over player ids (bit j set means player j is a
member).  The full table of coalition powers is built with numpy by
doubling, so n = 20 costs about a million entries per dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional

import numpy as np

from .errors import OracleLimitError
from .model import Game, PartitionStructure, is_winning
from .power import PowerProfile, check_kind

DEFAULT_LIMIT = 20
RECURSIVE_LIMIT = 7


def mask_of(members) -> int:
    m = 0
    for j in members:
        m |= 1 << j
    return m


def members_of(mask: int) -> frozenset:
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return frozenset(out)


def canonical_order(coalitions) -> list:
    return sorted(coalitions, key=lambda c: tuple(sorted(c)))


def _check_limit(game: Game, limit: int) -> None:
    if game.n > limit:
        hint = " (use the fast two-dimensional path)" if game.k == 2 else ""
        raise OracleLimitError(
            f"oracle enumeration limited to n <= {limit}, game has n = {game.n}{hint}"
        )


@dataclass(frozen=True)
class CoalitionTable:
    """Power, winning flag, and size of all 2**n coalitions, indexed by mask."""

    n: int
    q: np.ndarray
    win: np.ndarray
    size: np.ndarray

    def with_bit(self, arr: np.ndarray, j: int) -> np.ndarray:
        return arr.reshape(-1, 2, 1 << j)[:, 1, :]

    def without_bit(self, arr: np.ndarray, j: int) -> np.ndarray:
        return arr.reshape(-1, 2, 1 << j)[:, 0, :]


def coalition_table(game: Game, limit: int = DEFAULT_LIMIT) -> CoalitionTable:
    _check_limit(game, limit)
    n = game.n
    q = np.zeros(1 << n, dtype=np.int64)
    for i in range(game.k):
        col = np.zeros(1, dtype=np.int64)
        for j in range(n):
            col = np.concatenate([col, np.maximum(col, game.weights[j][i])])
        q += col
    size = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        size = np.concatenate([size, size + 1])
    # complement of mask is full ^ mask, which reverses the index order
    win = q > q[::-1]
    return CoalitionTable(n, q, win, size)


def _mwc_mask(table: CoalitionTable) -> np.ndarray:
    minimal = table.win.copy()
    for j in range(table.n):
        without = table.without_bit(table.win, j)
        view = minimal.reshape(-1, 2, 1 << j)
        view[:, 1, :] &= ~without
    return minimal


def enumerate_mwc(game: Game, limit: int = DEFAULT_LIMIT) -> list:
    """All minimal winning coalitions, sorted by member tuple."""
    table = coalition_table(game, limit)
    masks = np.flatnonzero(_mwc_mask(table))
    return canonical_order(members_of(int(m)) for m in masks)


def winning_coalitions(game: Game, limit: int = DEFAULT_LIMIT) -> list:
    table = coalition_table(game, limit)
    return canonical_order(members_of(int(m)) for m in np.flatnonzero(table.win))


def winning_count(game: Game, limit: int = DEFAULT_LIMIT) -> int:
    return int(coalition_table(game, limit).win.sum())


@dataclass(frozen=True)
class SwingFamily:
    """WC_j (coalitions where j is swing) and MWC_j for one player j."""

    player: int
    wc_count_by_size: tuple[int, ...]
    mwc: tuple[frozenset, ...]
    wc: Optional[tuple[frozenset, ...]] = None

    @property
    def wc_count(self) -> int:
        return sum(self.wc_count_by_size)


def _swing_masks(table: CoalitionTable, j: int) -> np.ndarray:
    """Boolean array over masks *containing* j: True where j is swing."""
    return table.with_bit(table.win, j) & ~table.without_bit(table.win, j)


def swing_family(
    game: Game, j: int, limit: int = DEFAULT_LIMIT, with_coalitions: bool = False
) -> SwingFamily:
    table = coalition_table(game, limit)
    swing = _swing_masks(table, j)
    sizes = table.with_bit(table.size, j)[swing]
    by_size = np.bincount(sizes.ravel(), minlength=game.n + 1)
    minimal = _mwc_mask(table)
    mwc = canonical_order(
        members_of(int(m)) for m in np.flatnonzero(minimal) if (int(m) >> j) & 1
    )
    wc = None
    if with_coalitions:
        idx = np.arange(1 << game.n).reshape(-1, 2, 1 << j)[:, 1, :][swing]
        wc = tuple(canonical_order(members_of(int(m)) for m in idx))
    return SwingFamily(j, tuple(int(c) for c in by_size), tuple(mwc), wc)


def all_indices_oracle(game: Game, limit: int = DEFAULT_LIMIT) -> dict[str, PowerProfile]:
    """All four indices straight from their definitions, in one enumeration."""
    table = coalition_table(game, limit)
    n = game.n
    minimal = _mwc_mask(table)
    mwc_masks = [int(m) for m in np.flatnonzero(minimal)]
    nfact = factorial(n)
    ss, bz, hp, dp = [], [], [], []
    for j in range(n):
        swing = _swing_masks(table, j)
        sizes = table.with_bit(table.size, j)[swing]
        by_size = np.bincount(sizes.ravel(), minlength=n + 1)
        ss_num = sum(int(by_size[s]) * factorial(s - 1) * factorial(n - s) for s in range(1, n + 1))
        ss.append(Fraction(ss_num, nfact))
        bz.append(Fraction(int(by_size.sum()), 1 << (n - 1)))
        mine = [m for m in mwc_masks if (m >> j) & 1]
        hp.append(Fraction(len(mine)))
        dp.append(sum((Fraction(1, bin(m).count("1")) for m in mine), Fraction(0)))
    return {
        "ss": PowerProfile("ss", tuple(ss)),
        "bz": PowerProfile("bz", tuple(bz)),
        "hp": PowerProfile("hp", tuple(hp)),
        "dp": PowerProfile("dp", tuple(dp)),
    }


def index_oracle(game: Game, kind: str, limit: int = DEFAULT_LIMIT) -> PowerProfile:
    return all_indices_oracle(game, limit)[check_kind(kind)]


# --- C-stability by direct recursion over partition space -------------------


def _submasks(mask: int):
    """Nonempty submasks of ``mask`` in increasing numeric order."""
    subs = []
    s = mask
    while s:
        subs.append(s)
        s = (s - 1) & mask
    subs.reverse()
    return subs


@lru_cache(maxsize=None)
def partitions_of_mask(mask: int) -> tuple[tuple[int, ...], ...]:
    """All set partitions of ``mask``; each block list is ordered by lowest member."""
    if mask == 0:
        return ((),)
    low = mask & -mask
    rest = mask ^ low
    out = []
    for extra in [0] + _submasks(rest):
        block = low | extra
        for tail in partitions_of_mask(rest & ~extra):
            out.append((block,) + tail)
    return tuple(out)


class _CStability:
    """Evaluates the recursive stability definition for one game and power profile.

    ``memo`` caches the stable sub-partitions of a free set keyed on the free
    set and the largest power among the fixed outside blocks, which is all the
    payoffs of free players can depend on.  With ``memo=False`` every call
    carries the literal outside blocks and nothing is cached.
    """

    def __init__(self, game: Game, powers: PowerProfile, memo: bool = True):
        self.game = game
        self.n = game.n
        self.memo = memo
        full = (1 << self.n) - 1
        self.q = [0] * (full + 1)
        self.theta = [Fraction(0)] * (full + 1)
        for m in range(1, full + 1):
            low = (m & -m).bit_length() - 1
            rest = m & (m - 1)
            self.theta[m] = self.theta[rest] + powers[low]
        w = game.weights
        for m in range(1, full + 1):
            mem = [j for j in range(self.n) if (m >> j) & 1]
            self.q[m] = sum(max(w[j][i] for j in mem) for i in range(game.k))
        self.powers = powers
        self._cache: dict = {}

    def payoffs(self, blocks, outside) -> dict[int, Fraction]:
        """Proportional payoffs for members of ``blocks`` in blocks + outside."""
        everything = list(blocks) + list(outside)
        best = max((self.q[b] for b in everything), default=0)
        leaders = [b for b in everything if self.q[b] == best]
        winner = leaders[0] if best > 0 and len(leaders) == 1 else 0
        out = {}
        for b in blocks:
            for j in range(self.n):
                if (b >> j) & 1:
                    if b == winner and self.theta[b] > 0:
                        out[j] = self.powers[j] / self.theta[b]
                    else:
                        out[j] = Fraction(0)
        return out

    def _members(self, mask: int) -> list[int]:
        return [j for j in range(self.n) if (mask >> j) & 1]

    def stable_subpartitions(self, free: int, outside: tuple[int, ...]):
        """C-stable partitions of ``free`` w.r.t. the fixed ``outside`` blocks."""
        if self.memo:
            key = (free, max((self.q[b] for b in outside), default=0))
            hit = self._cache.get(key)
            if hit is not None:
                return hit
        parts = partitions_of_mask(free)
        if bin(free).count("1") <= 1:
            result = parts
        else:
            deviations = self._deviations(free, outside)
            result = tuple(p for p in parts if not self._blocked(p, outside, deviations))
        if self.memo:
            self._cache[key] = result
        return result

    def _deviations(self, free: int, outside: tuple[int, ...]):
        """For each nonempty C within ``free``: the worst payoff of each member of C
        over every sub-partition the remaining free players may answer with."""
        table = []
        for c in _submasks(free):
            rest = free & ~c
            answer_outside = outside + (c,)
            responses = self.stable_subpartitions(rest, answer_outside)
            if not responses:
                responses = partitions_of_mask(rest)
            members = self._members(c)
            worst = None
            for pi1 in responses:
                pay = self.payoffs(pi1 + (c,), outside)
                if worst is None:
                    worst = {j: pay[j] for j in members}
                else:
                    for j in members:
                        if pay[j] < worst[j]:
                            worst[j] = pay[j]
            table.append((c, members, worst))
        return table

    def _blocked(self, partition, outside, deviations) -> bool:
        current = self.payoffs(partition, outside)
        for _c, members, worst in deviations:
            if all(worst[j] > current[j] for j in members):
                return True
        return False

    def stable_structures(self) -> list:
        full = (1 << self.n) - 1
        deviations = self._deviations(full, ())
        out = []
        for p in partitions_of_mask(full):
            if not any(is_winning(self.game, members_of(b)) for b in p):
                continue
            if not self._blocked(p, (), deviations):
                out.append(p)
        return out


def cstable_structures_oracle(
    game: Game,
    kind: str | PowerProfile,
    limit: int = RECURSIVE_LIMIT,
    memo: bool = True,
) -> list[PartitionStructure]:
    """Every partition of N satisfying the recursive stability definition literally.

    ``kind`` names an index (computed here by enumeration) or is a ready
    whole-game PowerProfile.  A winning block whose members all have zero
    power pays every player 0.
    """
    if game.n > limit:
        raise OracleLimitError(
            f"recursive stability oracle limited to n <= {limit}, game has n = {game.n}"
        )
    powers = kind if isinstance(kind, PowerProfile) else index_oracle(game, kind)
    checker = _CStability(game, powers, memo=memo)
    found = [
        PartitionStructure(tuple(sorted((members_of(b) for b in p), key=sorted)))
        for p in checker.stable_structures()
    ]
    return sorted(found, key=PartitionStructure.canonical)
