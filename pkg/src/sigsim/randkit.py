"""Counter-based random streams and Box-Muller normal deviates.

Every group of every trial gets its own stream.  The stream seed is a
SplitMix64 mix of the master seed and a packed ``(size, trial, group)`` key,
and the stream itself is SplitMix64 in counter mode, so any group's samples
can be regenerated without replaying the ones before it.  That is what lets
trials run in any order, on any number of workers, with identical output.

Uniforms carry 53 bits.  Normals come in Box-Muller pairs; the second deviate
of a pair is cached and handed out by the next call.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DomainError

__all__ = [
    "StreamKey",
    "Stream",
    "mix64",
    "pack_key",
    "derive_stream",
    "group_samples",
]

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_TWO_POW_M53 = 2.0**-53
_TWO_PI = 2.0 * math.pi

_SIZE_BITS = 16
_TRIAL_BITS = 47


def mix64(z):
    """SplitMix64 output finalizer on a 64-bit unsigned integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class StreamKey:
    """Address of one sample group: which size, which trial, left or right."""

    size_index: int
    trial_index: int
    group_index: int

    def __post_init__(self):
        if not 0 <= self.size_index < (1 << _SIZE_BITS):
            raise DomainError(f"size_index out of range: {self.size_index}")
        if not 0 <= self.trial_index < (1 << _TRIAL_BITS):
            raise DomainError(f"trial_index out of range: {self.trial_index}")
        if self.group_index not in (0, 1):
            raise DomainError(f"group_index must be 0 or 1, got {self.group_index}")


def pack_key(key):
    # Bit layout: size (16) | trial (47) | group (1).  Injective over valid keys.
    return (key.size_index << (_TRIAL_BITS + 1)) | (key.trial_index << 1) | key.group_index


def _splitmix_step(state):
    return mix64((state + GOLDEN_GAMMA) & MASK64)


def derive_stream(master, key):
    """Seed of the stream for ``key`` under master seed ``master``.

    The master seed is hashed first, then one SplitMix64 step is taken from
    ``packed_key XOR hashed_master``.  Without the first hash, nearby master
    seeds (0, 1, 2, ...) would only permute the key grid and replay the same
    pairs.  For a fixed master the map is a bijection of the packed key, so
    distinct keys never share a seed.
    """
    return _splitmix_step(pack_key(key) ^ _splitmix_step(master & MASK64))


_U_GAMMA = np.uint64(GOLDEN_GAMMA)
_U_MIX1 = np.uint64(_MIX1)
_U_MIX2 = np.uint64(_MIX2)
_U_ONE = np.uint64(1)
_U_11 = np.uint64(11)
_U_27 = np.uint64(27)
_U_30 = np.uint64(30)
_U_31 = np.uint64(31)


@njit(cache=True, nogil=True)
def _uniform_at(seed, counter):
    z = seed + counter * _U_GAMMA
    z = (z ^ (z >> _U_30)) * _U_MIX1
    z = (z ^ (z >> _U_27)) * _U_MIX2
    z = z ^ (z >> _U_31)
    return float(z >> _U_11) * _TWO_POW_M53


@njit(cache=True, nogil=True)
def _normal_pair(seed, counter):
    # Box-Muller on the uniforms at counter+1 and counter+2.  The scalar API
    # calls this too, so both paths share one set of libm roundings.
    u1 = _uniform_at(seed, counter + _U_ONE)
    u2 = _uniform_at(seed, counter + _U_ONE + _U_ONE)
    r = math.sqrt(-2.0 * math.log(1.0 - u1))
    theta = _TWO_PI * u2
    return r * math.cos(theta), r * math.sin(theta)


@njit(cache=True, nogil=True)
def _fill_normals(seed, counter, mean, sd, out):
    # Writes len(out) deviates; returns the advanced counter and the unused
    # second deviate of the last pair (NaN if none).
    n = out.shape[0]
    spare = np.nan
    i = 0
    while i < n:
        z0, z1 = _normal_pair(seed, counter)
        counter += _U_ONE + _U_ONE
        out[i] = mean + sd * z0
        if i + 1 < n:
            out[i + 1] = mean + sd * z1
        else:
            spare = z1
        i += 2
    return counter, spare


class Stream:
    """A single-owner generator positioned at ``counter`` on stream ``seed``."""

    def __init__(self, seed):
        self.seed = seed & MASK64
        self.counter = 0
        self._spare = None

    def next_uint64(self):
        self.counter += 1
        return mix64(self.seed + self.counter * GOLDEN_GAMMA)

    def next_uniform01(self):
        """Uniform deviate on [0, 1) with 53 random bits."""
        return (self.next_uint64() >> 11) * _TWO_POW_M53

    def next_normal(self, mean=0.0, sd=1.0):
        if not sd > 0:
            raise DomainError(f"sd must be positive, got {sd!r}")
        if self._spare is not None:
            z, self._spare = self._spare, None
            return mean + sd * z
        z0, z1 = _normal_pair(np.uint64(self.seed), np.uint64(self.counter))
        self.counter += 2
        self._spare = z1
        return mean + sd * z0

    def normals(self, n, mean=0.0, sd=1.0, out=None):
        """``n`` deviates, identical to ``n`` successive :meth:`next_normal` calls."""
        if not sd > 0:
            raise DomainError(f"sd must be positive, got {sd!r}")
        if out is None:
            out = np.empty(n, dtype=np.float64)
        elif out.shape != (n,) or out.dtype != np.float64:
            raise ValueError("out must be a float64 vector of length n")
        start = 0
        if n and self._spare is not None:
            out[0] = mean + sd * self._spare
            self._spare = None
            start = 1
        counter, spare = _fill_normals(
            np.uint64(self.seed), np.uint64(self.counter), float(mean), float(sd), out[start:]
        )
        self.counter = int(counter)
        self._spare = None if math.isnan(spare) else float(spare)
        return out


def group_samples(master, key, n, mean=0.0, sd=1.0, out=None):
    """The ``n`` samples of one group, a pure function of its arguments."""
    return Stream(derive_stream(master, key)).normals(n, mean, sd, out)
