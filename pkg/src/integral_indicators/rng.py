"""Counter-based random numbers keyed by array coordinates.

Philox4x64-10 evaluated over numpy arrays of counters, so a draw depends
only on ``(seed, stream, a, b)`` and never on evaluation order or chunking.
"""

from __future__ import annotations

import numpy as np

_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)

_MUL0 = np.uint64(0xD2E7470EE14C6C93)
_MUL1 = np.uint64(0xCA5A826395121157)
_WEYL0 = np.uint64(0x9E3779B97F4A7C15)
_WEYL1 = np.uint64(0xBB67AE8584CAA73B)

_ROUNDS = 10
_TWO_PI = 2.0 * np.pi
_INV_2_53 = 1.0 / 9007199254740992.0


def _mulhilo(a: np.uint64, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # 64x64 -> 128 bit product from four 32x32 partial products.
    a_lo, a_hi = a & _M32, a >> _S32
    b_lo, b_hi = b & _M32, b >> _S32
    p00 = a_lo * b_lo
    p01 = a_lo * b_hi
    p10 = a_hi * b_lo
    p11 = a_hi * b_hi
    mid = (p00 >> _S32) + (p01 & _M32) + (p10 & _M32)
    hi = p11 + (p01 >> _S32) + (p10 >> _S32) + (mid >> _S32)
    lo = a * b
    return hi, lo


def philox4x64(counter, key) -> tuple[np.ndarray, ...]:
    """Philox4x64-10 block function.

    ``counter`` is four broadcast-compatible uint64 arrays, ``key`` two.
    Returns the four output words.
    """
    with np.errstate(over="ignore"):
        c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) for c in counter)
        c0, c1, c2, c3 = np.broadcast_arrays(c0, c1, c2, c3)
        k0 = np.uint64(key[0])
        k1 = np.uint64(key[1])
        for r in range(_ROUNDS):
            if r:
                k0 = k0 + _WEYL0
                k1 = k1 + _WEYL1
            hi0, lo0 = _mulhilo(_MUL0, c0)
            hi1, lo1 = _mulhilo(_MUL1, c2)
            c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return c0, c1, c2, c3


def _to_unit(words: np.ndarray) -> np.ndarray:
    # top 53 bits -> (0, 1]
    return ((words >> np.uint64(11)).astype(np.float64) + 1.0) * _INV_2_53


def uniform(seed: int, stream: int, a, b) -> np.ndarray:
    """Uniform draws in (0, 1] keyed by coordinates ``(a, b)``."""
    words = philox4x64((stream, a, b, 0), (seed, 0))
    return _to_unit(words[0])


def normal(seed: int, stream: int, a, b) -> np.ndarray:
    """Standard normal draws keyed by coordinates ``(a, b)`` (Box-Muller)."""
    w0, w1, _, _ = philox4x64((stream, a, b, 0), (seed, 0))
    u1 = _to_unit(w0)
    u2 = _to_unit(w1)
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(_TWO_PI * u2)
