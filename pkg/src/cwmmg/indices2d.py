"""Exact power indices for two-dimensional games.

Holler-Packel and Deegan-Packel come straight from the compact MWC
collection in linear time.  Banzhaf and Shapley-Shubik use the winning
coalition structure: a disjoint union of signed families, each family being
``{base | E : E subset of free}``.  For a player j,

    swings_j = #{winning C containing j} - #{winning C not containing j}

because removing j from a winning coalition in which j is null is a
bijection onto the winning coalitions without j.  Each family contributes
in closed form: ``2**|free|`` coalitions, and a Shapley weight
``sum_k C(f, k) (b+k-1)! (n-b-k)! = n! (b-1)! (n-b-f)! / (n-f)!``
(a Beta integral), so the whole profile costs O(n) per family.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional

from .errors import ConsistencyError, DimensionError, PreconditionError
from .model import Game
from .mwc2d import BusySplit, CandidateTable, MwcCollection, build_candidates, compute_mwc2, split_busy
from .power import PowerProfile, check_kind


def _check_collection(game: Game, mwc: MwcCollection) -> None:
    if game.k != 2:
        raise DimensionError(f"fast path requires k = 2, game has k = {game.k}")
    if mwc.game is not game and mwc.game != game:
        raise ConsistencyError("MWC collection was computed for a different game")


def _membership_sums(game: Game, mwc: MwcCollection, weight, zero):
    """Sum of ``weight(entry)`` over the MWCs containing each player."""
    n = game.n
    total = [zero] * n
    bulk = {1: zero, 2: zero}
    for e in mwc.entries:
        v = weight(e)
        bulk[e.side] += v
        if e.extra is not None:
            total[e.extra] += v
    for j in mwc.split.a1:
        total[j] += bulk[1]
    for j in mwc.split.a2:
        total[j] += bulk[2]
    if mwc.table is None:
        return total
    for t in (1, 2):
        own = mwc.table.side(t).own
        side_entries = sorted(
            (e for e in mwc.entries if e.family == f"mwc{t}"), key=lambda e: e.cutoff
        )
        # suffix sums: entries with cutoff > position hold that position's player
        suffix = [zero] * (len(side_entries) + 1)
        for s in range(len(side_entries) - 1, -1, -1):
            suffix[s] = suffix[s + 1] + weight(side_entries[s])
        tau = mwc.tau
        for p in own:
            first = tau[p][t - 1]  # 1-based index of first covering entry
            total[p] += suffix[first - 1]
        for e in side_entries:
            if e.anchor is not None and mwc.sigma[e.anchor][t - 1]:
                total[e.anchor] += weight(e)
    return total


def hp2(game: Game, mwc: Optional[MwcCollection] = None) -> PowerProfile:
    """Holler-Packel: number of MWCs containing each player."""
    if mwc is None:
        mwc = compute_mwc2(game)
    _check_collection(game, mwc)
    counts = _membership_sums(game, mwc, lambda e: 1, 0)
    return PowerProfile("hp", tuple(Fraction(c) for c in counts))


def dp2(game: Game, mwc: Optional[MwcCollection] = None) -> PowerProfile:
    """Deegan-Packel: sum of 1/|C| over the MWCs containing each player."""
    if mwc is None:
        mwc = compute_mwc2(game)
    _check_collection(game, mwc)
    sums = _membership_sums(game, mwc, lambda e: Fraction(1, e.size), Fraction(0))
    return PowerProfile("dp", tuple(sums))


# --- winning-coalition structure -------------------------------------------


@dataclass(frozen=True)
class WcFamily:
    """Signed family ``{base | E : E subset of free}``; everyone else is excluded."""

    sign: int
    label: str               # "wc1", "wc2", "wc3", "overlap"
    anchor: Optional[int]    # idle leader for wc1/wc2 families
    base: frozenset
    free: frozenset

    @property
    def count(self) -> int:
        return self.sign * (1 << len(self.free))


@dataclass(frozen=True)
class WcStructure:
    game: Game
    split: BusySplit
    table: Optional[CandidateTable]
    families: tuple[WcFamily, ...]

    def side_families(self, t: int) -> tuple[WcFamily, ...]:
        return tuple(f for f in self.families if f.label == f"wc{t}")

    def anchors(self, t: int) -> tuple[int, ...]:
        """Idle leaders with a nonempty family on side t."""
        return tuple(f.anchor for f in self.side_families(t) if f.anchor is not None)

    def free_set(self, t: int, anchor: int) -> frozenset:
        for f in self.side_families(t):
            if f.anchor == anchor:
                return f.free
        raise KeyError(anchor)

    def winning_count(self) -> int:
        return sum(f.count for f in self.families)

    def coalitions(self) -> list[frozenset]:
        """Expand every family (exponential; only for small games)."""
        out: dict[frozenset, int] = {}
        for f in self.families:
            free = sorted(f.free)
            for mask in range(1 << len(free)):
                c = f.base | {free[i] for i in range(len(free)) if (mask >> i) & 1}
                out[c] = out.get(c, 0) + f.sign
        return sorted((c for c, v in out.items() if v), key=lambda c: tuple(sorted(c)))


def _leader_families(split: BusySplit, table: CandidateTable, t: int) -> list[WcFamily]:
    st = table.side(t)
    whole = split.a1 if t == 1 else split.a2
    w = split.game.weights
    other = 1 if t == 1 else 0
    base_other = split.q2A1 if t == 1 else split.q1A2
    label = f"wc{t}"
    out = []
    for r, p in enumerate(st.anchors):
        if not (st.busy[r] and st.winning[r]):
            continue
        forced = set(st.own[: st.cutoff[r]])
        forced.add(p)
        free = frozenset(q for q in st.anchors[r + 1 :] if q not in forced)
        out.append(WcFamily(1, label, p, whole | forced, free))
    if st.lone_feasible:
        forced = frozenset(st.own[: st.lone_cutoff])
        free = frozenset(q for q in st.anchors if w[q][other] <= base_other) - forced
        out.append(WcFamily(1, label, None, whole | forced, free))
    return out


def wc_structure(
    game: Game, split: Optional[BusySplit] = None, table: Optional[CandidateTable] = None
) -> WcStructure:
    if game.k != 2:
        raise DimensionError(f"fast path requires k = 2, game has k = {game.k}")
    if split is None:
        split = split_busy(game)
    if split.game is not game and split.game != game:
        raise ConsistencyError("busy split was computed for a different game")
    everyone = game.grand
    a1, a2 = split.a1, split.a2
    if not split.disjoint:
        if table is not None:
            raise PreconditionError("candidate tables need disjoint busy sets")
        fams = (
            WcFamily(1, "overlap", None, a1, everyone - a1),
            WcFamily(1, "overlap", None, a2, everyone - a2),
            WcFamily(-1, "overlap", None, a1 | a2, everyone - (a1 | a2)),
        )
        return WcStructure(game, split, None, fams)
    if table is None:
        table = build_candidates(split)
    fams = _leader_families(split, table, 1) + _leader_families(split, table, 2)
    # coalitions meeting both busy sets win iff they contain A1 or A2 entirely
    both = a1 | a2
    fams += [
        WcFamily(1, "wc3", None, a1, everyone - a1),
        WcFamily(-1, "wc3", None, a1, everyone - both),
        WcFamily(1, "wc3", None, a2, everyone - a2),
        WcFamily(-1, "wc3", None, a2, everyone - both),
        WcFamily(-1, "wc3", None, both, everyone - both),
    ]
    return WcStructure(game, split, table, tuple(fams))


def _swing_totals(game: Game, structure: WcStructure) -> tuple[list[int], list[int]]:
    """Per-player swing counts and Shapley numerators (scaled by n!)."""
    if structure.game is not game and structure.game != game:
        raise ConsistencyError("WC structure was computed for a different game")
    n = game.n
    fact = [1] * (n + 1)
    for i in range(1, n + 1):
        fact[i] = fact[i - 1] * i
    counts = [0] * n
    shap = [0] * n
    for fam in structure.families:
        b, f = len(fam.base), len(fam.free)
        # member of base: every coalition of the family contains j
        in_count = fam.sign << f
        in_weight = fam.sign * fact[n] // fact[n - f] * fact[b - 1] * fact[n - b - f]
        # excluded: every coalition is a winning set without j
        out_count = fam.sign << f
        out_weight = (
            fam.sign * fact[n] // fact[n - f] * fact[b] * fact[n - 1 - b - f]
            if b + f < n
            else 0
        )
        # free players are null in every member of the family
        for j in fam.base:
            counts[j] += in_count
            shap[j] += in_weight
        if b + f < n:
            for j in range(n):
                if j not in fam.base and j not in fam.free:
                    counts[j] -= out_count
                    shap[j] -= out_weight
    return counts, shap


def bz2(game: Game, structure: Optional[WcStructure] = None) -> PowerProfile:
    if structure is None:
        structure = wc_structure(game)
    counts, _ = _swing_totals(game, structure)
    denom = 1 << (game.n - 1)
    return PowerProfile("bz", tuple(Fraction(c, denom) for c in counts))


def ss2(game: Game, structure: Optional[WcStructure] = None) -> PowerProfile:
    if structure is None:
        structure = wc_structure(game)
    _, shap = _swing_totals(game, structure)
    nfact = factorial(game.n)
    return PowerProfile("ss", tuple(Fraction(s, nfact) for s in shap))


def bz_ss2(game: Game, structure: Optional[WcStructure] = None) -> tuple[PowerProfile, PowerProfile]:
    """Both swing-based indices from one pass over the families."""
    if structure is None:
        structure = wc_structure(game)
    counts, shap = _swing_totals(game, structure)
    denom = 1 << (game.n - 1)
    nfact = factorial(game.n)
    return (
        PowerProfile("bz", tuple(Fraction(c, denom) for c in counts)),
        PowerProfile("ss", tuple(Fraction(s, nfact) for s in shap)),
    )


def indices2d(game: Game, kind: str) -> PowerProfile:
    """Fast index of the given kind for a two-dimensional game."""
    check_kind(kind)
    if kind == "hp":
        return hp2(game)
    if kind == "dp":
        return dp2(game)
    if kind == "bz":
        return bz2(game)
    return ss2(game)


def all_indices2d(game: Game) -> dict[str, PowerProfile]:
    mwc = compute_mwc2(game)
    bz, ss = bz_ss2(game)
    return {"ss": ss, "bz": bz, "hp": hp2(game, mwc), "dp": dp2(game, mwc)}
