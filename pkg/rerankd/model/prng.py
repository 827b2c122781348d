'''
The splitmix64 generator used for deterministic weight initialization.

State ``i`` of the generator (counting from 1) is ``seed + i * GAMMA`` modulo
2**64, which lets us produce whole blocks of draws with numpy at once.
'''
import numpy as np

__all__ = ['SplitMix64']

GAMMA = 0x9E3779B97F4A7C15
MIX1 = 0xBF58476D1CE4E5B9
MIX2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1


class SplitMix64(object):
    '''
    A splitmix64 stream.

    Parameters
    ----------
    seed : int
        Initial state, reduced modulo 2**64 (negative seeds are allowed).
    '''
    def __init__(self, seed):
        self.seed = int(seed) & MASK64
        self.position = 0

    def next_uint64(self, count):
        '''
        The next ``count`` raw 64-bit outputs as a ``uint64`` array.
        '''
        steps = np.arange(self.position + 1, self.position + count + 1,
                          dtype=np.uint64)
        self.position += count
        with np.errstate(over='ignore'):
            z = np.uint64(self.seed) + steps * np.uint64(GAMMA)
            z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX1)
            z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX2)
            z = z ^ (z >> np.uint64(31))
        return z

    def next_double(self, count):
        '''
        The next ``count`` draws from ``[0, 1)``, ``(z >> 11) * 2**-53``.
        '''
        z = self.next_uint64(count)
        return (z >> np.uint64(11)).astype(np.float64) * 2.0 ** -53

    def uniform(self, count, scale):
        '''
        The next ``count`` draws from ``[-scale, scale)``, ``(2u - 1) * scale``.
        '''
        return (2.0 * self.next_double(count) - 1.0) * scale
