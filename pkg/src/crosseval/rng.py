"""Counter-based SplitMix64 streams.

Every random draw in crosseval comes from here so that results are
reproducible bit-for-bit across platforms and numpy versions. A stream is
identified by ``(seed, name)``; the i-th 64-bit word of the stream is::

    key  = mix64(seed XOR blake2b_64(name))
    x[i] = mix64(key + (i + 1) * 0x9E3779B97F4A7C15)      (mod 2**64)

where ``mix64`` is the SplitMix64 finalizer. Because words are a pure
function of their counter, streams never depend on call order.

Uniforms take the top 53 bits (``[0, 1)``); normals use Box-Muller with
both the cosine and sine branches, evaluated with :mod:`math` rather than
numpy's vectorized transcendental functions, whose last-ulp results vary
across SIMD code paths.
"""

import hashlib
import math

import numpy as np

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_MASK64 = (1 << 64) - 1


def mix64(x):
    """SplitMix64 finalizer applied elementwise to a uint64 array."""
    x = np.asarray(x, dtype=np.uint64).copy()
    x ^= x >> np.uint64(30)
    x *= _M1
    x ^= x >> np.uint64(27)
    x *= _M2
    x ^= x >> np.uint64(31)
    return x


def _name_hash(name):
    digest = hashlib.blake2b(str(name).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


class Stream:
    """A named, seeded, counter-addressed stream of 64-bit words."""

    def __init__(self, seed, name=""):
        self.seed = int(seed)
        self.name = str(name)
        raw = (self.seed & _MASK64) ^ _name_hash(self.name)
        self._key = mix64(np.array([raw], dtype=np.uint64))[0]

    def words(self, n, start=0):
        """Return words ``start .. start+n-1`` as a uint64 array."""
        counters = np.arange(start + 1, start + n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            return mix64(self._key + counters * GAMMA)

    def uniform(self, n, start=0):
        """``n`` doubles in ``[0, 1)`` with 53 random bits each."""
        return (self.words(n, start) >> np.uint64(11)).astype(np.float64) * 2.0**-53

    def normal(self, n, mean=0.0, stddev=1.0):
        """``n`` draws from Normal(mean, stddev**2) via Box-Muller."""
        pairs = (n + 1) // 2
        u = self.uniform(2 * pairs).tolist()
        out = []
        for i in range(pairs):
            radius = math.sqrt(-2.0 * math.log(1.0 - u[2 * i]))
            angle = 2.0 * math.pi * u[2 * i + 1]
            out.append(radius * math.cos(angle))
            out.append(radius * math.sin(angle))
        z = np.array(out[:n], dtype=np.float64)
        return mean + stddev * z

    def sample_indices(self, n, k):
        """Choose ``k`` of ``range(n)`` uniformly without replacement.

        Partial Fisher-Yates shuffle; the returned indices are sorted.
        """
        if not 0 <= k <= n:
            raise ValueError(f"cannot draw {k} items from {n}")
        idx = list(range(n))
        u = self.uniform(k).tolist()
        for i in range(k):
            j = i + min(int(u[i] * (n - i)), n - i - 1)
            idx[i], idx[j] = idx[j], idx[i]
        return np.sort(np.array(idx[:k], dtype=np.int64))
