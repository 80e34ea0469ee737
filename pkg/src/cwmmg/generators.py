"""Reproducible game factories: the tightness family, seeded random games,
and the checked-in fixtures.

Random coordinates come from numpy's PCG64 bit generator (raw 64-bit
words, whose stream numpy keeps stable across releases), mapped onto
``[0, max_coord]`` by rejection so the draw is exactly uniform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from .errors import GameFileError, ParameterError
from .model import Game

PRNG_NAME = "pcg64-raw-reject/v1"

FIXTURES = (
    "G1", "G2", "G3", "G4", "G5", "G6", "T2", "remark1_k1",
    "two_player_w2", "two_player_w10", "two_player_w1000000",
)


@dataclass(frozen=True)
class GeneratorSpec:
    family: str                 # "tight", "random" or "fixture"
    t: Optional[int] = None
    n: Optional[int] = None
    k: Optional[int] = None
    max_coord: Optional[int] = None
    seed: Optional[int] = None
    name: Optional[str] = None

    def __post_init__(self) -> None:
        if self.family == "tight":
            if self.t is None or self.t < 2:
                raise ParameterError(f"tight family needs t >= 2, got {self.t}")
        elif self.family == "random":
            _check_random(self.n, self.k, self.max_coord, self.seed)
        elif self.family == "fixture":
            if self.name not in FIXTURES:
                raise ParameterError(f"unknown fixture {self.name!r}; known: {', '.join(FIXTURES)}")
        else:
            raise ParameterError(f"unknown generator family {self.family!r}")

    def build(self) -> Game:
        if self.family == "tight":
            return gen_tight(self.t)
        if self.family == "random":
            return gen_random(self.n, self.k, self.max_coord, self.seed)
        return load_fixture(self.name)


def gen_tight(t: int) -> Game:
    """Game with n = 2t+3 players and exactly n+1 MWCs."""
    if t < 2:
        raise ParameterError(f"tight family needs t >= 2, got {t}")
    n = 2 * t + 3
    big = n * n
    weights = [(big, 0), (big, 0), (0, big), (0, big)]
    names = ["p1", "p2", "p3", "p4"]
    for j in range(t, 1, -1):
        weights.append((j, 0))
        names.append(f"x{j}")
    for j in range(t, 1, -1):
        weights.append((0, j))
        names.append(f"y{j}")
    weights.append((1, 1))
    names.append("z")
    return Game.from_weights(weights, names)


def _check_random(n, k, max_coord, seed) -> None:
    if n is None or n < 1:
        raise ParameterError(f"random games need n >= 1, got {n}")
    if k is None or k < 1:
        raise ParameterError(f"random games need k >= 1, got {k}")
    if max_coord is None or max_coord < 1:
        raise ParameterError(f"random games need max_coord >= 1, got {max_coord}")
    if max_coord > 2**32 - 1:
        raise ParameterError(f"max_coord {max_coord} exceeds 2**32 - 1")
    if seed is None or seed < 0:
        raise ParameterError(f"seed must be a non-negative integer, got {seed}")


def _uniform_ints(bits: np.random.PCG64, count: int, bound: int) -> list[int]:
    """``count`` uniform integers in [0, bound) from raw 64-bit words."""
    limit = (1 << 64) // bound * bound
    out: list[int] = []
    while len(out) < count:
        raw = bits.random_raw(count - len(out))
        out.extend(int(r) % bound for r in raw.tolist() if r < limit)
    return out


def gen_random(n: int, k: int, max_coord: int, seed: int) -> Game:
    """n players with i.i.d. uniform coordinates in [0, max_coord]; all-zero draws are redrawn."""
    _check_random(n, k, max_coord, seed)
    bits = np.random.PCG64(seed)
    while True:
        flat = _uniform_ints(bits, n * k, max_coord + 1)
        if any(flat):
            break
    return Game.from_weights([flat[i * k : (i + 1) * k] for i in range(n)])


def game_from_document(doc: dict) -> Game:
    """Build a Game from a parsed game-file mapping ``{k, players: [{id?, w}]}``."""
    if not isinstance(doc, dict):
        raise GameFileError("game file must be a JSON object")
    if "k" not in doc:
        raise GameFileError("game file: missing field 'k'")
    k = doc["k"]
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise GameFileError(f"game file: field 'k' must be a positive integer, got {k!r}")
    players = doc.get("players")
    if not isinstance(players, list) or not players:
        raise GameFileError("game file: field 'players' must be a non-empty list")
    weights, names = [], []
    for idx, entry in enumerate(players):
        if not isinstance(entry, dict) or "w" not in entry:
            raise GameFileError(f"game file: players[{idx}] needs a 'w' array")
        label = entry.get("id", f"p{idx + 1}")
        if not isinstance(label, str):
            raise GameFileError(f"game file: players[{idx}].id must be a string")
        w = entry["w"]
        if not isinstance(w, list):
            raise GameFileError(f"game file: player {label}: 'w' must be an array")
        if len(w) != k:
            raise GameFileError(f"game file: player {label}: 'w' has length {len(w)}, expected k={k}")
        for c in w:
            if not isinstance(c, int) or isinstance(c, bool):
                raise GameFileError(f"game file: player {label}: non-integer weight {c!r}")
            if c < 0:
                raise GameFileError(f"game file: player {label}: negative weight {c}")
            if c > 2**32 - 1:
                raise GameFileError(f"game file: player {label}: weight {c} exceeds 2**32 - 1")
        weights.append(tuple(w))
        names.append(label)
    if not any(any(w) for w in weights):
        raise GameFileError("game file: all-zero game (q(N) must be positive)")
    return Game.from_weights(weights, names)


def game_to_document(game: Game) -> dict:
    return {
        "k": game.k,
        "players": [{"id": p.label, "w": list(p.w)} for p in game.players],
    }


def load_fixture(name: str) -> Game:
    if name not in FIXTURES:
        raise ParameterError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    text = resources.files("cwmmg.fixtures").joinpath(f"{name}.json").read_text()
    return game_from_document(json.loads(text))
