"""Pure-Python (numpy) twins of the compiled kernels.

``singer_exponent_scan`` replaces the sequential group walk by a blocked
order-3 linear recurrence: seed a block of states, then jump whole blocks
with a precomputed matrix power, so the O(p^3) scan runs inside numpy.
"""

import numpy as np

BACKEND = "python"

_TWO_PI = 2.0 * np.pi
_SEED_BLOCK = 1 << 16


def _mat_pow(M: np.ndarray, e: int, p: int) -> np.ndarray:
    R = np.eye(3, dtype=np.int64)
    while e:
        if e & 1:
            R = (R @ M) % p
        M = (M @ M) % p
        e >>= 1
    return R


def singer_exponent_scan(p: int, c0: int, c1: int, c2: int, q: int) -> np.ndarray:
    """Residues {i mod q : x^i has zero x^2-coefficient}, i in [0, p^3-1)."""
    order = p ** 3 - 1
    block = min(_SEED_BLOCK, order)
    states = np.empty((3, block), dtype=np.int64)
    a0, a1, a2 = 1, 0, 0
    for i in range(block):
        states[0, i], states[1, i], states[2, i] = a0, a1, a2
        a0, a1, a2 = (c0 * a2) % p, (a0 + c1 * a2) % p, (a1 + c2 * a2) % p
    step = np.array([[0, 0, c0], [1, 0, c1], [0, 1, c2]], dtype=np.int64)
    jump = _mat_pow(step, block, p)
    hits = np.zeros(q, dtype=bool)
    base = 0
    while base < order:
        nvalid = min(block, order - base)
        idx = base + np.nonzero(states[2, :nvalid] == 0)[0]
        hits[idx % q] = True
        base += nvalid
        if base < order:
            states = (jump @ states) % p
    return np.nonzero(hits)[0].astype(np.int64)


def direct_grid_eval(freqs: np.ndarray, coeffs: np.ndarray, m: int,
                     offset: float) -> np.ndarray:
    """Direct summation on the uniform grid j/m + offset, j = 0..m-1.

    Grid phases use integer reduction (f*j mod m) to match the compiled
    kernel bit-for-bit in the exactness that matters.
    """
    out = np.zeros(m, dtype=np.complex128)
    j = np.arange(m, dtype=np.int64)
    for f, c in zip(freqs, coeffs):
        base = np.fmod(float(f) * offset, 1.0)
        phase = _TWO_PI * (base + ((int(f) * j) % m) / m)
        out += c * (np.cos(phase) + 1j * np.sin(phase))
    return out


def direct_angle_eval(freqs: np.ndarray, coeffs: np.ndarray,
                      angles: np.ndarray) -> np.ndarray:
    """Direct summation at arbitrary turn angles."""
    out = np.zeros(len(angles), dtype=np.complex128)
    angles = np.asarray(angles, dtype=float)
    for f, c in zip(freqs, coeffs):
        phase = _TWO_PI * np.fmod(float(f) * angles, 1.0)
        out += c * (np.cos(phase) + 1j * np.sin(phase))
    return out
