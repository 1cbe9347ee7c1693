"""Counter-keyed random streams.

Every stochastic draw in this package is a pure function of
``(master_seed, stream_id, stream_index, draw_position)``.  Streams are
Philox counter generators whose 128-bit key packs the three ids, so any
single simulation can be regenerated in isolation and sampling work can
be split across workers in any order without changing a single bit of
the result.
"""

from __future__ import annotations

import numpy as np

# Stream ids partition the key space by purpose.
STREAM_EDGES = 1        # per-edge live draws (independent-edge models)
STREAM_NODES = 2        # per-node incoming-edge choice (threshold models)
STREAM_UNITS = 3        # per-group / per-ungrouped-edge draws (grouped models)
STREAM_MIXTURE = 4      # mixture component choice
STREAM_RRS_TARGET = 5   # reverse-search target node choice
STREAM_RRS_EDGES = 6    # reverse-search marginal edge flips
STREAM_RANKS = 7        # sketch rank assignment
STREAM_FAMILY = 8       # benchmark instance generation

MAX_MASTER_SEED = 2**64 - 1
_MAX_INDEX = 2**48
_MAX_STREAM = 2**16


def check_master_seed(master_seed) -> int:
    if isinstance(master_seed, bool) or not isinstance(master_seed, (int, np.integer)):
        raise ValueError("master seed must be an integer")
    if not 0 <= master_seed <= MAX_MASTER_SEED:
        raise ValueError("master seed must be in [0, 2**64)")
    return int(master_seed)


def stream(master_seed: int, stream_id: int, index: int = 0) -> np.random.Generator:
    """Generator keyed by ``(master_seed, stream_id, index)``."""
    master_seed = check_master_seed(master_seed)
    if not 0 <= index < _MAX_INDEX:
        raise ValueError("stream index out of range")
    if not 0 <= stream_id < _MAX_STREAM:
        raise ValueError("stream id out of range")
    key = np.empty(2, dtype=np.uint64)
    key[0] = np.uint64(master_seed)
    key[1] = (np.uint64(stream_id) << np.uint64(48)) | np.uint64(index)
    return np.random.Generator(np.random.Philox(key=key))


def uniforms(master_seed: int, stream_id: int, index: int, count: int) -> np.ndarray:
    """Uniform [0, 1) draws; position ``p`` of this vector is reproducible."""
    return stream(master_seed, stream_id, index).random(count)


def derive_seed(master_seed: int, *key: int) -> int:
    """Derive an independent child master seed for a sub-experiment.

    Children with distinct ``key`` tuples are statistically independent
    of each other and of the parent's own streams.
    """
    master_seed = check_master_seed(master_seed)
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])
