"""Regional versus national winner-take-all voting under concentrated noise.

The package simulates elections on rectangular cell grids, injects
block-concentrated or salt-and-pepper noise, computes analytic robustness
bounds for both voting schemes, searches for minimal overturning noise,
and carries a small eigen-decomposition matching lab that plays the same
regional winner-take-all game with image patterns instead of votes.
"""

from regionvote.grid import (
    Cell,
    DimensionMismatchError,
    Grid,
    GridDims,
    Partition,
    cells_of_region,
    enumerate_partitions,
    region_of,
)
from regionvote.noise import (
    BlockNoiseSpec,
    BlockOverlapError,
    NoiseArea,
    NoiseReport,
    PackResult,
    PlacementInfeasibleError,
    SaltPepperSpec,
    apply_block_noise,
    apply_salt_pepper,
    orthomeasure,
    pack_blocks,
    random_anchor_placement,
)
from regionvote.voting import (
    ElectionResult,
    GlobalTally,
    RegionalTally,
    tally_global,
    tally_multicandidate,
    tally_regional,
)

__version__ = "0.1.0"

__all__ = [
    "Cell",
    "GridDims",
    "Grid",
    "Partition",
    "DimensionMismatchError",
    "region_of",
    "enumerate_partitions",
    "cells_of_region",
    "BlockNoiseSpec",
    "SaltPepperSpec",
    "NoiseArea",
    "NoiseReport",
    "PackResult",
    "BlockOverlapError",
    "PlacementInfeasibleError",
    "apply_block_noise",
    "apply_salt_pepper",
    "random_anchor_placement",
    "orthomeasure",
    "pack_blocks",
    "GlobalTally",
    "RegionalTally",
    "ElectionResult",
    "tally_global",
    "tally_regional",
    "tally_multicandidate",
    "__version__",
]
