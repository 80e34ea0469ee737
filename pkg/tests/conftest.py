from fractions import Fraction as F

import pytest

from cwmmg import Game, load_fixture


@pytest.fixture(scope="session")
def fx():
    """Checked-in fixture games by name."""
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = load_fixture(name)
        return cache[name]

    return get


def game(*rows):
    return Game.from_weights(rows)


def fr(*xs):
    return tuple(F(x) for x in xs)
