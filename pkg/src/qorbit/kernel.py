"""Periodic sinc interpolation kernel.

S(N, u) = (1/N) * sum_{m=0}^{N-1} exp(2 pi i m u / N)

is the unique N-periodic function bandlimited to the N lowest nonnegative
frequencies that is 1 at u = 0 and 0 at every other integer.  Closed form:

S(N, u) = exp(i pi u (N-1)/N) * sin(pi u) / (N sin(pi u / N))

Conventions pinned here:
  * the argument is reduced modulo N before evaluation (S is exactly
    N-periodic), which keeps the trig arguments small and well conditioned;
  * exact integer arguments return exactly 1.0 (u = 0 mod N) or exactly 0.0,
    with no rounding residue;
  * the removable singularity of the sin ratio at u = 0 mod N is evaluated
    through its limit (np.sinc), never by dividing near-zeros.

All kernel functions accept scalar or array `u` and vectorize elementwise.
`kernel_direct_sum` is the literal term-by-term sum and serves as the
independent reference the closed form is tested against.
"""

from __future__ import annotations

import numpy as np

from .errors import TooLargeError

MAX_DIRECT_TERMS = 10**6


def _check_size(n: int) -> None:
    if n < 1:
        raise ValueError(f"kernel size must be a positive integer, got {n}")


def periodic_sinc(n: int, u):
    """Evaluate S(n, u), the n-state periodic sinc, at real argument(s) u.

    Returns a complex scalar for scalar input, else a complex ndarray of the
    same shape.  Exactly 1.0 at u = 0 (mod n) and exactly 0.0 at the other
    integers.
    """
    _check_size(n)
    u_arr = np.asarray(u, dtype=float)
    r = u_arr - n * np.round(u_arr / n)  # reduced to [-n/2, n/2], exact for integers
    ratio = np.sinc(r) / np.sinc(r / n)
    value = np.exp(1j * np.pi * r * (n - 1) / n) * ratio
    exact = r == np.round(r)
    if np.any(exact):
        kron = np.where(np.round(r) % n == 0, 1.0 + 0.0j, 0.0 + 0.0j)
        value = np.where(exact, kron, value)
    if np.isscalar(u) or np.ndim(u) == 0:
        return complex(value)
    return value


def periodic_sinc_shifted(n: int, u, k: int):
    """Evaluate S_k(n, u) = exp(2 pi i k u / n) * S(n, u).

    The shift moves the band to frequencies k .. k+n-1; k = 0 recovers
    periodic_sinc.  The phase is evaluated at the reduced argument, which is
    equivalent (the shift phase is n-periodic in u for integer k).
    """
    _check_size(n)
    u_arr = np.asarray(u, dtype=float)
    r = u_arr - n * np.round(u_arr / n)
    value = np.exp(2j * np.pi * k * r / n) * periodic_sinc(n, r)
    if np.isscalar(u) or np.ndim(u) == 0:
        return complex(value)
    return value


def sinc_limit(u):
    """Large-n limit of S(n, u): exp(i pi u) * sin(pi u) / (pi u), 1 at u = 0."""
    u_arr = np.asarray(u, dtype=float)
    value = np.exp(1j * np.pi * u_arr) * np.sinc(u_arr)
    if np.isscalar(u) or np.ndim(u) == 0:
        return complex(value)
    return value


def kernel_direct_sum(n: int, u: float, k: int = 0) -> complex:
    """Literal sum (1/n) * sum_{m=k}^{k+n-1} exp(2 pi i m u / n).

    Reference implementation; O(n) per call, capped at n <= 10**6.
    """
    _check_size(n)
    if n > MAX_DIRECT_TERMS:
        raise TooLargeError(f"direct sum capped at {MAX_DIRECT_TERMS} terms, got {n}")
    m = np.arange(k, k + n)
    return complex(np.exp(2j * np.pi * m * u / n).sum() / n)
