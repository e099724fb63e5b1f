"""Counter-based random streams.

Every random decision in the package is drawn from a Philox generator keyed
by ``(root_seed, stream, *counters)``. A stage can therefore be replayed in
isolation: the backward-shortcut samples of path 7 at scale 3 come from
``derive(seed, "backward", 7, 3)`` no matter what ran before.
"""

import numpy as np

STREAMS = {
    "paths": 1,
    "hierarchy": 2,
    "backward": 3,
    "large-beta": 4,
    "folklore": 5,
    "shortcut": 6,
    "generate": 7,
    "verify": 8,
}


def derive(seed: int, stream: str, *counters: int) -> np.random.Generator:
    """Return an independent generator for ``stream`` under ``seed``."""
    if stream not in STREAMS:
        raise ValueError(f"unknown random stream {stream!r}")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    ss = np.random.SeedSequence(
        entropy=int(seed), spawn_key=(STREAMS[stream], *(int(c) for c in counters))
    )
    return np.random.Generator(np.random.Philox(ss))
