"""SplitMix64 random stream shared by every stochastic stage.

The generator is fully specified (Steele, Lea & Flood 2014), so a seed gives
the same stream on every platform.  Kernels compiled with numba carry the
state as a one-element ``uint64`` array; :class:`SplitMix64` wraps the same
arithmetic for cold Python paths.
"""
import numba
import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


def make_state(seed):
    return np.array([int(seed) & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)


@numba.njit(cache=True)
def next_u64(state):
    state[0] += _GOLDEN
    z = state[0]
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@numba.njit(cache=True)
def next_double(state):
    """Uniform double in [0, 1) from the top 53 bits."""
    return (next_u64(state) >> _S11) * _INV53


@numba.njit(cache=True)
def next_below(state, n):
    """Integer in [0, n)."""
    k = int(next_double(state) * n)
    return k if k < n else n - 1


class SplitMix64:
    """Python-side view of the stream; interchangeable with the kernels."""

    def __init__(self, seed):
        self.state = make_state(seed)

    def next_u64(self):
        return int(next_u64(self.state))

    def random(self):
        return float(next_double(self.state))

    def below(self, n):
        return int(next_below(self.state, n))

    def sample_without_replacement(self, n, k):
        """First ``k`` entries of a partial Fisher-Yates shuffle of ``range(n)``."""
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:k]
