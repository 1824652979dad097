"""Pinned, platform-independent random streams.

Every stream is Philox4x64-10 (counter based) with the 128-bit key
``(seed, stream_id)`` and the counter starting at zero, as implemented by
``numpy.random.Philox``.  Raw 64-bit outputs are consumed strictly in order.

Derived quantities:

* uniform on [0, 1):  (raw >> 11) * 2**-53
* standard normal:    Marsaglia's polar method on consecutive pairs of
  uniforms mapped to [-1, 1).  A pair (u, v) is accepted when
  0 < s = u*u + v*v < 1 and then yields u*m and v*m with
  m = sqrt(-2 ln(s) / s), in that order.  Rejected pairs are skipped.

The normals produced from a stream therefore depend only on the key, never
on how many values are drawn per call.  Large jobs are split into chunks of
:data:`CHUNK` items; chunk ``i`` uses ``stream_id = base + i`` (mod 2**64),
so results do not depend on the number of workers.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from .errors import DomainError

CHUNK = 65536
_U64 = 2 ** 64
_TO_UNIT = 2.0 ** -53


@dataclass(frozen=True)
class SeedSpec:
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or isinstance(v, bool) \
                    or not 0 <= v < _U64:
                raise DomainError(f"{name} must be an unsigned 64-bit integer")

    def chunk(self, index: int) -> "SeedSpec":
        return SeedSpec(self.seed, (self.stream_id + index) % _U64)


class Stream:
    """Single-owner generator over one (seed, stream_id) key."""

    def __init__(self, spec: SeedSpec):
        self.spec = spec
        self._bits = np.random.Philox(key=int(spec.seed) + (int(spec.stream_id) << 64))

    def raw(self, n: int) -> np.ndarray:
        return self._bits.random_raw(n)

    def uniform(self, n: int) -> np.ndarray:
        return (self.raw(n) >> np.uint64(11)).astype(np.float64) * _TO_UNIT

    def normals(self, n: int) -> np.ndarray:
        out = np.empty(n)
        filled = 0
        while filled < n:
            need = n - filled
            # acceptance is pi/4 and each accepted pair gives two normals
            pairs = int(need * 0.64) + 64
            u = 2.0 * self.uniform(2 * pairs) - 1.0
            x, y = u[0::2], u[1::2]
            s = x * x + y * y
            ok = (s > 0.0) & (s < 1.0)
            x, y, s = x[ok], y[ok], s[ok]
            m = np.sqrt(-2.0 * np.log(s) / s)
            z = np.empty(2 * x.size)
            z[0::2] = x * m
            z[1::2] = y * m
            take = min(need, z.size)
            out[filled:filled + take] = z[:take]
            filled += take
        return out


def chunked(total: int, base: SeedSpec, work: Callable[[int, SeedSpec], np.ndarray],
            workers: int = 1) -> List[np.ndarray]:
    """Run ``work(size, seed_spec)`` per chunk and return results in chunk order."""
    sizes = [min(CHUNK, total - start) for start in range(0, total, CHUNK)]
    jobs = [(size, base.chunk(i)) for i, size in enumerate(sizes)]
    if workers <= 1 or len(jobs) == 1:
        return [work(size, spec) for size, spec in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: work(*job), jobs))
