"""Seeded random instances for tests, demos and the ``random`` subcommand."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .core import Instance


def random_instance(
    m: int,
    n: int,
    p_range=(1, 10),
    density: float = 1.0,
    seed: int = 0,
    balancing: bool = False,
    gamma_band=None,
    values: Optional[list] = None,
) -> Instance:
    """Random unrelated instance; the same arguments always give the same instance.

    Each (machine, job) entry is finite with probability ``density``; a job
    that ends up with no finite entry is redrawn. ``balancing`` caps every
    job at two eligible machines. ``gamma_band`` draws integer times from
    ``[gamma, 3 gamma]`` instead of ``p_range``, and ``values`` draws from a
    fixed list.
    """
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    if m < 1 or n < 0:
        raise ValueError("need at least one machine")
    rng = random.Random(seed)
    if values is not None:
        pool = [Fraction(v) for v in values]
        draw = lambda: rng.choice(pool)
    elif gamma_band is not None:
        gamma = Fraction(gamma_band)
        # integer multiples of 1/den(gamma) keep the band exact
        den = gamma.denominator
        lo, hi = int(gamma * den), int(3 * gamma * den)
        draw = lambda: Fraction(rng.randint(lo, hi), den)
    else:
        lo, hi = p_range
        draw = lambda: Fraction(rng.randint(lo, hi))
    times = []
    for _ in range(n):
        while True:
            machines = [i for i in range(m) if rng.random() < density]
            if balancing and len(machines) > 2:
                machines = sorted(rng.sample(machines, 2))
            if machines:
                break
        times.append({i: draw() for i in machines})
    return Instance(m, n, tuple(times))
