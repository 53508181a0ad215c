"""Counter-based random numbers, addressable by (seed, stream, index, slot).

Every random quantity in the package is a pure function of an integer seed
plus a short tuple of counters, hashed through the splitmix64 finalizer.
Sample i of a Monte Carlo run can be regenerated in isolation from
(seed, i), so parallel workers produce identical results regardless of
scheduling, and any record can be replayed exactly.

Streams keep unrelated uses of the same seed statistically independent.
Each call site uses a fixed arity, so there is no variable-length ambiguity.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

# stream identifiers; disjoint by construction
STREAM_COMPLETION = 0x01  # per-move sample completions
STREAM_TOSS = 0x02        # coin tosses in self-play
STREAM_TABLE = 0x03       # random team-captains payoff tables
STREAM_TREE = 0x04        # optimal tree-game simulation coins
STREAM_SERVICE = 0x05     # HTTP service sessions
STREAM_PROBE = 0x06       # miscellaneous test probes

_U = np.uint64


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


def key(seed: int, *counters: int) -> int:
    """Collapse (seed, counters...) into one well-mixed 64-bit value."""
    h = mix64((seed & MASK64) ^ GOLDEN)
    for c in counters:
        h = mix64((h + GOLDEN) ^ (c & MASK64))
    return h


def uniform(seed: int, *counters: int) -> float:
    """One uniform float in [0, 1) addressed by (seed, counters...)."""
    return (key(seed, *counters) >> 11) * 2.0**-53


def _mix_array(z: np.ndarray) -> np.ndarray:
    # modular 64-bit wraparound is the point here, so silence overflow noise
    with np.errstate(over="ignore"):
        z = (z ^ (z >> _U(30))) * _U(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> _U(27))) * _U(0x94D049BB133111EB)
        return z ^ (z >> _U(31))


def uniform_block(seed: int, stream: int, index: int, n: int) -> np.ndarray:
    """Uniforms for slots 0..n-1 of sample `index` on `stream`; shape (n,)."""
    h = _U((key(seed, stream, index) + GOLDEN) & MASK64)
    slots = np.arange(n, dtype=np.uint64)
    return (_mix_array(h ^ slots) >> _U(11)) * 2.0**-53


def uniform_matrix(seed: int, stream: int, index0: int, count: int, n: int) -> np.ndarray:
    """Uniforms for samples index0..index0+count-1, slots 0..n-1; shape (count, n).

    Row i equals uniform_block(seed, stream, index0 + i, n) bit for bit, which
    is what lets chunked and single-sample code paths agree exactly.
    """
    h = _U((key(seed, stream) + GOLDEN) & MASK64)
    idx = np.arange(index0, index0 + count, dtype=np.uint64)
    hrow = _mix_array(h ^ idx)
    slots = np.arange(n, dtype=np.uint64)
    with np.errstate(over="ignore"):
        grid = (hrow[:, None] + _U(GOLDEN)) ^ slots[None, :]
    return (_mix_array(grid) >> _U(11)) * 2.0**-53
