"""Shared corpus generators for the test suite.

Plain functions rather than fixtures: the property tests want explicit seeded
`random.Random` instances so every run exercises the same corpus.
"""

import random


def random_cone(rng: random.Random, rank: int):
    """A small random cone, occasionally with forced lineality."""
    from torolog.cones import RationalCone

    gens = []
    for _ in range(rng.randint(1, rank + 2)):
        v = tuple(rng.randint(-4, 4) for _ in range(rank))
        if any(v):
            gens.append(v)
    if gens and rng.random() < 0.3:
        flipped = rng.choice(gens)
        gens.append(tuple(-x for x in flipped))
    return RationalCone(rank, tuple(gens))


def random_monoid(rng: random.Random, rank: int, allow_units: bool = True):
    """A small random toric monoid; sometimes includes a unit pair."""
    from torolog.monoids import ToricMonoid

    gens = []
    for _ in range(rng.randint(1, rank + 2)):
        v = tuple(rng.randint(-3, 3) for _ in range(rank))
        if any(v):
            gens.append(v)
    if not gens:
        gens.append((1,) + (0,) * (rank - 1))
    if allow_units and rng.random() < 0.25:
        flipped = rng.choice(gens)
        gens.append(tuple(-x for x in flipped))
    return ToricMonoid(rank, tuple(gens))
