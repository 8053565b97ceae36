"""Counter-based random streams keyed by (seed, stream, index).

Each draw builds its own Philox generator whose key is (seed, stream) and
whose counter starts at the symbol index in the third word, so a value
depends only on those three integers and never on evaluation order.
"""

import numpy as np

from .model import Scenario

_MASK64 = (1 << 64) - 1

NOISE_STREAM = 0
SYMBOL_STREAM = 1


def keyed_generator(seed: int, stream: int, index: int) -> np.random.Generator:
    key = np.array([int(seed) & _MASK64, int(stream) & _MASK64], dtype=np.uint64)
    counter = np.array([0, 0, int(index) & _MASK64, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(counter=counter, key=key))


def symbol_indices(scn: Scenario) -> np.ndarray:
    """Constellation index of each of the scenario's K transmitted symbols."""
    m = scn.constellation.order
    return np.array([int(keyed_generator(scn.seed, SYMBOL_STREAM, k).integers(m))
                     for k in range(scn.n_symbols)], dtype=np.int64)


def symbol_stream(scn: Scenario) -> tuple[np.ndarray, np.ndarray]:
    """(indices, complex symbols) for the scenario's transmission."""
    idx = symbol_indices(scn)
    return idx, scn.constellation.points[idx]
