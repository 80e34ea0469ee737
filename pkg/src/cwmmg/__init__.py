"""Exact analysis of complementary weighted multiple majority games.

The two-dimensional fast path (``compute_mwc2``, ``hp2``, ``dp2``, ``bz2``,
``ss2``) is checked against an exponential oracle that works in any
dimension.
"""

from .errors import (
    ConsistencyError,
    CwmmgError,
    DegeneratePowerError,
    DimensionError,
    GameFileError,
    InvalidGameError,
    InvalidPartitionError,
    MalformedCoalitionError,
    OracleLimitError,
    ParameterError,
    PreconditionError,
)
from .generators import GeneratorSpec, gen_random, gen_tight, load_fixture
from .indices2d import all_indices2d, bz2, bz_ss2, dp2, hp2, indices2d, ss2, wc_structure
from .model import (
    Coalition,
    CoalitionProfile,
    Game,
    PartitionStructure,
    PlayerVector,
    coalition_profile,
    is_mwc,
    is_swing,
    is_winning,
    power,
    winner_of,
)
from .mwc2d import MwcCollection, compute_mwc2
from .oracle import (
    all_indices_oracle,
    cstable_structures_oracle,
    enumerate_mwc,
    index_oracle,
    swing_family,
    winning_coalitions,
    winning_count,
)
from .power import KINDS, PowerProfile
from .stability import (
    StabilityReport,
    allocate,
    cstable_coalitions,
    stable_structures,
    winner_ratio,
)

__version__ = "0.1.0"
