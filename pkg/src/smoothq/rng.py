"""Seeded uniform streams.

Every random draw in the package comes from one documented construction so
that streams are reproducible bit for bit:

* the integer ``seed`` and an optional replicate index ``r`` are hashed by
  :class:`numpy.random.SeedSequence` (``entropy=seed, spawn_key=(r,)``);
* the resulting key drives the counter-based Philox4x64-10 generator;
* each raw 64-bit output ``w`` becomes the uniform ``((w >> 11) + 0.5) / 2**53``,
  which lies strictly inside (0, 1), so inverse-transform sampling never
  hits an infinite quantile.

Replicate ``r`` therefore owns an independent stream that does not depend on
how many other replicates exist or in which order they are generated.
"""

import numpy as np

from .errors import DomainError

_INV_2_53 = 1.0 / 9007199254740992.0


def bit_generator(seed, replicate=None):
    """Philox generator keyed by ``(seed, replicate)``."""
    if int(seed) != seed or seed < 0:
        raise DomainError(f"seed must be a non-negative integer, got {seed!r}")
    spawn_key = () if replicate is None else (int(replicate),)
    return np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=spawn_key))


def uniforms(seed, n, replicate=None):
    """Return ``n`` uniforms on the open interval (0, 1)."""
    raw = bit_generator(seed, replicate).random_raw(n)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _INV_2_53
