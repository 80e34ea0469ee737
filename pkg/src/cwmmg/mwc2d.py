"""Minimal winning coalitions of a two-dimensional game in O(n log n).

Notation used throughout the module: ``A1``/``A2`` are the players attaining
the grand-coalition maximum in dimension 1/2, ``M`` the remaining (idle)
players.  When ``A1`` and ``A2`` are disjoint every winning coalition either

* contains all of ``A1`` and none of ``A2`` (side 1),
* contains all of ``A2`` and none of ``A1`` (side 2), or
* meets both busy sets (side 3).

A side-1 coalition is classified by its *leader*: the first idle member in
decreasing second-coordinate order (ties by id) whose second coordinate beats
``q2(A1)``; coalitions with no such member have no leader.  Fixing the leader
fixes the coalition's strength, so the winning coalitions of one leader are
exactly ``base | E`` for every subset ``E`` of a free set, and ``base`` is the
only candidate MWC for that leader.  Side 2 is the mirror image.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .errors import DimensionError, PreconditionError
from .model import Game, is_mwc, is_winning

_INF = float("inf")


def _require_2d(game: Game) -> None:
    if game.k != 2:
        raise DimensionError(f"fast path requires k = 2, game has k = {game.k}")


@dataclass(frozen=True)
class BusySplit:
    game: Game
    a1: frozenset
    a2: frozenset
    idle_by_first: tuple[int, ...]   # decreasing first coordinate, ties by id
    idle_by_second: tuple[int, ...]  # decreasing second coordinate, ties by id
    q1N: int
    q2N: int
    q1A2: int
    q2A1: int

    @property
    def m(self) -> int:
        return len(self.idle_by_first)

    @property
    def m1(self) -> int:
        return len(self.a1)

    @property
    def m2(self) -> int:
        return len(self.a2)

    @property
    def idle(self) -> frozenset:
        return frozenset(self.idle_by_first)

    @property
    def disjoint(self) -> bool:
        return not (self.a1 & self.a2)

    def second_index(self) -> dict[int, int]:
        """Player id -> 1-based position in the second-coordinate order (l(i))."""
        return {p: r + 1 for r, p in enumerate(self.idle_by_second)}


def split_busy(game: Game) -> BusySplit:
    _require_2d(game)
    w = game.weights
    q1N = max(v[0] for v in w)
    q2N = max(v[1] for v in w)
    a1 = frozenset(j for j in range(game.n) if w[j][0] == q1N)
    a2 = frozenset(j for j in range(game.n) if w[j][1] == q2N)
    idle = [j for j in range(game.n) if j not in a1 and j not in a2]
    by_first = tuple(sorted(idle, key=lambda j: (-w[j][0], j)))
    by_second = tuple(sorted(idle, key=lambda j: (-w[j][1], j)))
    return BusySplit(
        game=game,
        a1=a1,
        a2=a2,
        idle_by_first=by_first,
        idle_by_second=by_second,
        q1N=q1N,
        q2N=q2N,
        q1A2=max(w[j][0] for j in a2),
        q2A1=max(w[j][1] for j in a1),
    )


@dataclass(frozen=True)
class SideTable:
    """Candidate data for one side, indexed by anchor position.

    Anchors run over the idle players in decreasing *opposite* coordinate;
    ``own`` is the idle order by decreasing *own* coordinate, and
    ``cutoff[r]`` is the length of the prefix that anchor r forces in.
    """

    side: int
    own: tuple[int, ...]          # idle players, decreasing own coordinate
    anchors: tuple[int, ...]      # idle players, decreasing opposite coordinate
    cutoff: tuple[int, ...]       # x(i) for side 1, y(i) for side 2
    excl_max_other: tuple[int, ...]  # opposite-coordinate max of prefix minus anchor (-1 if empty)
    in_prefix: tuple[bool, ...]   # anchor itself lies inside its prefix (mu == 0)
    busy: tuple[bool, ...]        # anchor leads its candidate
    winning: tuple[bool, ...]
    swing: tuple[bool, ...]
    free_size: tuple[int, ...]    # |E| for busy anchors, 0 otherwise
    lone_cutoff: int              # prefix length of the leaderless candidate
    lone_feasible: bool           # leaderless coalitions can win at all
    lone_free_size: int

    @property
    def mu(self) -> tuple[int, ...]:
        return tuple(0 if f else 1 for f in self.in_prefix)


@dataclass(frozen=True)
class CandidateTable:
    split: BusySplit
    side1: SideTable
    side2: SideTable

    def side(self, t: int) -> SideTable:
        return self.side1 if t == 1 else self.side2

    def x(self) -> dict[int, int]:
        return dict(zip(self.side1.anchors, self.side1.cutoff))

    def y(self) -> dict[int, int]:
        return dict(zip(self.side2.anchors, self.side2.cutoff))


def _top2_prefix(order, rank):
    """Smallest and second-smallest ``rank`` over each prefix of ``order``."""
    best1 = [_INF]
    best2 = [_INF]
    b1 = b2 = _INF
    for p in order:
        r = rank[p]
        if r < b1:
            b1, b2 = r, b1
        elif r < b2:
            b2 = r
        best1.append(b1)
        best2.append(b2)
    return best1, best2


def _side_table(split: BusySplit, side: int) -> SideTable:
    w = split.game.weights
    o, t = (0, 1) if side == 1 else (1, 0)
    if side == 1:
        own, anchors = split.idle_by_first, split.idle_by_second
        q_own, q_oth, q_oth_base, q_own_rival = split.q1N, split.q2N, split.q2A1, split.q1A2
    else:
        own, anchors = split.idle_by_second, split.idle_by_first
        q_own, q_oth, q_oth_base, q_own_rival = split.q2N, split.q1N, split.q1A2, split.q2A1
    m = len(own)
    shift = q_own - q_oth
    arank = {p: r for r, p in enumerate(anchors)}
    orank = {p: r for r, p in enumerate(own)}
    best1, best2 = _top2_prefix(own, arank)

    own_u = [w[p][o] for p in own]
    cutoff, excl, in_pref, busy, winning, swing, free = [], [], [], [], [], [], []
    c = 0
    for r, p in enumerate(anchors):
        vp = w[p][t]
        thr = vp + shift
        while c < m and own_u[c] >= thr:
            c += 1
        cutoff.append(c)
        inside = orank[p] < c
        in_pref.append(inside)
        lead = best2[c] if best1[c] == r else best1[c]
        ex = w[anchors[lead]][t] if lead != _INF else -1
        excl.append(ex)
        is_busy = vp > q_oth_base and lead > r
        busy.append(is_busy)
        # complement's own-coordinate max is below thr, so only the rival busy set can tie
        winning.append(q_own_rival < thr)
        # swing: A_t(N) | (prefix - anchor) must lose once the anchor leaves
        reduced_other = ex if ex > q_oth_base else q_oth_base
        reduced_rival = q_own_rival
        if w[p][o] > reduced_rival:
            reduced_rival = w[p][o]
        if c < m and own_u[c] > reduced_rival:
            reduced_rival = own_u[c]
        swing.append(q_own + reduced_other <= q_oth + reduced_rival)
        if is_busy:
            forced_others = c - 1 if inside else c
            free.append((m - 1 - r) - forced_others)
        else:
            free.append(0)

    thr0 = q_oth_base + shift
    c0 = 0
    while c0 < m and own_u[c0] >= thr0:
        c0 += 1
    lead0 = best1[c0]
    prefix_ok = lead0 == _INF or w[anchors[lead0]][t] <= q_oth_base
    lone_ok = prefix_ok and q_own_rival < thr0
    low_count = sum(1 for p in anchors if w[p][t] <= q_oth_base)
    return SideTable(
        side=side,
        own=own,
        anchors=anchors,
        cutoff=tuple(cutoff),
        excl_max_other=tuple(excl),
        in_prefix=tuple(in_pref),
        busy=tuple(busy),
        winning=tuple(winning),
        swing=tuple(swing),
        free_size=tuple(free),
        lone_cutoff=c0,
        lone_feasible=lone_ok,
        lone_free_size=(low_count - c0) if lone_ok else 0,
    )


def build_candidates(split: BusySplit) -> CandidateTable:
    if not split.disjoint:
        raise PreconditionError("candidate tables need disjoint busy sets A1(N), A2(N)")
    return CandidateTable(split, _side_table(split, 1), _side_table(split, 2))


@dataclass(frozen=True)
class MwcEntry:
    """One MWC in compact form.

    family "mwc1"/"mwc2": A_t(N) | {anchor} | first ``cutoff`` players of the
    side's own-coordinate idle order (anchor None: no idle leader).
    family "mwc3": A_t(N) | {extra}, ``extra`` from the opposite busy set.
    family "busy": A_t(N) alone (overlapping busy sets).
    """

    family: str
    side: int
    anchor: Optional[int]
    cutoff: int
    extra: Optional[int]
    size: int


@dataclass(frozen=True)
class MwcCollection:
    game: Game
    split: BusySplit
    table: Optional[CandidateTable]
    entries: tuple[MwcEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def n1(self) -> int:
        return sum(1 for e in self.entries if e.family == "mwc1")

    @property
    def n2(self) -> int:
        return sum(1 for e in self.entries if e.family == "mwc2")

    def busy_set(self, side: int) -> frozenset:
        return self.split.a1 if side == 1 else self.split.a2

    def materialize(self, e: MwcEntry) -> frozenset:
        base = self.busy_set(e.side)
        if e.family == "busy":
            return base
        if e.family == "mwc3":
            return base | {e.extra}
        own = self.table.side(e.side).own
        members = set(base)
        members.update(own[: e.cutoff])
        if e.anchor is not None:
            members.add(e.anchor)
        return frozenset(members)

    def coalitions(self) -> list[frozenset]:
        """Materialized MWCs in canonical (sorted member tuple) order."""
        return sorted((self.materialize(e) for e in self.entries), key=lambda c: tuple(sorted(c)))

    @cached_property
    def tau(self) -> dict[int, tuple[int, int]]:
        """Per idle player: 1-based index of the first side-t entry whose prefix holds it.

        Entries of one side are ordered by non-decreasing cutoff; a player in no
        prefix gets n_t + 1.
        """
        if self.table is None:
            return {}
        out = {}
        per_side = []
        for t in (1, 2):
            cuts = sorted(e.cutoff for e in self.entries if e.family == f"mwc{t}")
            own = self.table.side(t).own
            first = {}
            k = 0
            for pos, p in enumerate(own):
                while k < len(cuts) and cuts[k] <= pos:
                    k += 1
                first[p] = k + 1
            per_side.append(first)
        for p in self.split.idle:
            out[p] = (per_side[0][p], per_side[1][p])
        return out

    @cached_property
    def sigma(self) -> dict[int, tuple[int, int]]:
        """Per idle player: 1 when it anchors a side-t MWC without lying in its prefix."""
        out = {p: [0, 0] for p in self.split.idle}
        for e in self.entries:
            if e.family in ("mwc1", "mwc2") and e.anchor is not None:
                own = self.table.side(e.side).own
                if e.anchor not in own[: e.cutoff]:
                    out[e.anchor][e.side - 1] = 1
        return {p: (a, b) for p, (a, b) in out.items()}


def _side_entries(split: BusySplit, st: SideTable) -> list[MwcEntry]:
    base = split.m1 if st.side == 1 else split.m2
    fam = f"mwc{st.side}"
    out = []
    for r, p in enumerate(st.anchors):
        if st.busy[r] and st.winning[r] and st.swing[r]:
            size = base + st.cutoff[r] + (0 if st.in_prefix[r] else 1)
            out.append(MwcEntry(fam, st.side, p, st.cutoff[r], None, size))
    if st.lone_feasible:
        out.append(MwcEntry(fam, st.side, None, st.lone_cutoff, None, base + st.lone_cutoff))
    return out


def _busy_set_wins(split: BusySplit, side: int) -> bool:
    w = split.game.weights
    if side == 1:
        rival = max([split.q1A2] + [w[p][0] for p in split.idle_by_first[:1]])
        return split.q1N + split.q2A1 > split.q2N + rival
    rival = max([split.q2A1] + [w[p][1] for p in split.idle_by_second[:1]])
    return split.q2N + split.q1A2 > split.q1N + rival


def _cross_entries(split: BusySplit) -> list[MwcEntry]:
    """Minimal coalitions meeting both busy sets: A_t(N) plus one opposite player."""
    game = split.game
    out = []
    for side, whole, part in ((1, split.a1, split.a2), (2, split.a2, split.a1)):
        if _busy_set_wins(split, side):
            continue  # whole busy set already wins, so the extra player is null
        if len(whole) >= 2:
            # dropping one member of `whole` still wins iff `part` is a singleton
            ok = len(part) != 1
        else:
            ok = None
        for x in sorted(part):
            if ok is None:
                keep = not is_winning(game, {x})
            else:
                keep = ok
            if keep:
                out.append(MwcEntry("mwc3", side, None, 0, x, len(whole) + 1))
    if len(split.a1) == 1 and len(split.a2) == 1 and len(out) == 2:
        out = out[:1]  # A1 | {b} and A2 | {a} are the same pair
    return out


def _overlap_entries(split: BusySplit) -> list[MwcEntry]:
    # overlapping busy sets: the winning coalitions are exactly the supersets
    # of A1(N) or of A2(N), so the MWCs are the minimal ones among the two
    a1, a2 = split.a1, split.a2
    out = []
    if a1 <= a2:
        out.append(MwcEntry("busy", 1, None, 0, None, len(a1)))
    elif a2 < a1:
        out.append(MwcEntry("busy", 2, None, 0, None, len(a2)))
    else:
        out.append(MwcEntry("busy", 1, None, 0, None, len(a1)))
        out.append(MwcEntry("busy", 2, None, 0, None, len(a2)))
    return out


def compute_mwc2(game: Game, verify: bool = False) -> MwcCollection:
    """All MWCs of a two-dimensional game.

    With ``verify=True`` every produced coalition is re-checked with
    ``is_mwc`` and the n + 1 bound is asserted (slow; for tests).
    """
    split = split_busy(game)
    if not split.disjoint:
        coll = MwcCollection(game, split, None, tuple(_overlap_entries(split)))
    else:
        table = build_candidates(split)
        entries = _side_entries(split, table.side1) + _side_entries(split, table.side2)
        entries += _cross_entries(split)
        coll = MwcCollection(game, split, table, tuple(entries))
    if verify:
        mats = coll.coalitions()
        if len(set(mats)) != len(mats):
            raise AssertionError("duplicate MWC produced")
        for c in mats:
            if not is_mwc(game, c):
                raise AssertionError(f"non-minimal coalition produced: {sorted(c)}")
        if not mwc_count_bound_check(coll, game.n):
            raise AssertionError(f"|MWC| = {len(coll)} exceeds n + 1 = {game.n + 1}")
    return coll


def mwc_count_bound_check(collection: MwcCollection, n: int) -> bool:
    return len(collection) <= n + 1
