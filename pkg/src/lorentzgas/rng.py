"""Counter-based random number streams for reproducible parallel Monte Carlo.

Every trajectory owns a SplitMix64 stream whose initial state is derived from
(master_seed, experiment_id, trajectory_id) by a fixed 64-bit mixing function,
so results are bit-identical for any worker count and any single record can be
replayed in isolation.

Stream derivation (all arithmetic mod 2^64):

    state0 = fmix64(master_seed XOR fmix64(experiment_id XOR fmix64(trajectory_id + GOLDEN)))

where fmix64 is the SplitMix64 output finalizer

    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
    z ^= z >> 27; z *= 0x94D049BB133111EB
    z ^= z >> 31

and GOLDEN = 0x9E3779B97F4A7C15. The stream itself is SplitMix64: each call
advances state += GOLDEN and outputs fmix64(state). Uniform doubles take the
top 53 bits: (z >> 11) * 2^-53.

Scenery values are pure hashes of (scenery_seed, site): with key the packed
site integer (see pack_site), h = fmix64(scenery_seed XOR fmix64(key + GOLDEN));
Rademacher uses the top bit of h, Gaussian uses Box-Muller on two uniforms
drawn from the two-step SplitMix64 stream seeded at h.
"""

from __future__ import annotations

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1

# site key packing: obstacle index in 8 bits, each signed cell coordinate in
# 28 bits (offset binary); desk-scale walks stay far below 2^27 cells.
CELL_BITS = 28
CELL_OFFSET = 1 << (CELL_BITS - 1)
_CELL_MASK = (1 << CELL_BITS) - 1


def fmix64(z: int) -> int:
    """SplitMix64 finalizer on a 64-bit integer."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def derive_stream_seed(master_seed: int, experiment_id: int, trajectory_id: int) -> int:
    """Initial SplitMix64 state for one trajectory of one experiment."""
    h = fmix64((trajectory_id + GOLDEN) & _MASK)
    h = fmix64((experiment_id ^ h) & _MASK)
    return fmix64((master_seed ^ h) & _MASK)


class SplitMix64:
    """Tiny deterministic generator; mirrors the jitted kernel stream exactly.

    Implements the ``random()`` subset of the numpy Generator API that the
    dynamics layer consumes, so pure-Python trajectories can be driven by the
    same streams as the compiled kernels.
    """

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & _MASK
        return fmix64(self.state)

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 1.1102230246251565e-16


def pack_site(obstacle: int, lx: int, ly: int) -> int:
    """Pack (obstacle, cell) into the 64-bit site key used by hash counting."""
    if not (-CELL_OFFSET <= lx < CELL_OFFSET and -CELL_OFFSET <= ly < CELL_OFFSET):
        raise OverflowError(f"cell ({lx}, {ly}) outside the 28-bit packing range")
    return (
        ((obstacle & 0xFF) << (2 * CELL_BITS))
        | ((lx + CELL_OFFSET) << CELL_BITS)
        | (ly + CELL_OFFSET)
    )


def unpack_site(key: int) -> tuple[int, int, int]:
    obstacle = (key >> (2 * CELL_BITS)) & 0xFF
    lx = ((key >> CELL_BITS) & _CELL_MASK) - CELL_OFFSET
    ly = (key & _CELL_MASK) - CELL_OFFSET
    return obstacle, lx, ly


def scenery_value(scenery_seed: int, site_key: int, law: str, sigma: float = 1.0) -> float:
    """Deterministic scenery variable attached to one site (O(1) memory)."""
    h = fmix64((scenery_seed ^ fmix64((site_key + GOLDEN) & _MASK)) & _MASK)
    if law == "rademacher":
        return sigma if h >> 63 else -sigma
    if law == "gaussian":
        g = SplitMix64(h)
        u1 = ((g.next_u64() >> 11) + 1) * 1.1102230246251565e-16  # (0, 1]
        u2 = (g.next_u64() >> 11) * 1.1102230246251565e-16
        return sigma * float(np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2))
    raise ValueError(f"unknown scenery law {law!r}")
