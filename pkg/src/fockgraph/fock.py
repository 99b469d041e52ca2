"""Single-mode truncated Fock-space kernel.

Coherent-state amplitudes, exact displacement-operator matrix elements on a
photon-number ladder truncated at a finite occupation, and a brute-force
matrix-exponential oracle used to cross-check the closed forms.

Matrix elements are taken from the infinite-dimensional closed forms, so
truncation error never enters through an entry itself, only through later
matrix products.  The ``trusted_cutoff`` heuristic marks the sub-block of
occupations on which such products still approximate the untruncated values.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.special import gammaln

__all__ = [
    "coherent_state",
    "coherent_overlap",
    "displacement_matrix",
    "displacement_compose_phase",
    "expm_displacement_oracle",
    "laguerre_sequence",
    "min_oracle_buffer",
    "trusted_cutoff",
]


def _require_cutoff(cutoff: int) -> None:
    if cutoff < 1:
        raise ValueError(f"cutoff must be >= 1, got {cutoff}")


def laguerre_sequence(count: int, order: int, x: float) -> np.ndarray:
    """Associated Laguerre values L_n^(order)(x) for n = 0..count.

    Uses the three-term recurrence ascending in n, which is stable at the
    scales this package works at (n <= 64, arguments up to a few hundred).
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    vals = np.empty(count + 1, dtype=float)
    vals[0] = 1.0
    if count >= 1:
        vals[1] = 1.0 + order - x
    for n in range(1, count):
        vals[n + 1] = ((2 * n + 1 + order - x) * vals[n] - (n + order) * vals[n - 1]) / (n + 1)
    return vals


def _integer_powers(base: complex, count: int) -> np.ndarray:
    """[base**0, ..., base**count] by repeated multiplication.

    Repeated complex multiplication keeps conj(base)**k bitwise equal to
    conj(base**k), which the displacement adjoint symmetry relies on.
    """
    out = np.empty(count + 1, dtype=complex)
    out[0] = 1.0
    for k in range(1, count + 1):
        out[k] = out[k - 1] * base
    return out


def coherent_state(alpha: complex, cutoff: int) -> np.ndarray:
    """Fock amplitudes exp(-|a|^2/2) a^n / sqrt(n!) for n = 0..cutoff.

    Magnitudes are assembled in log space (log-factorials), so large n never
    overflows.  The squared norm falls short of 1 by exactly the
    Poisson(|a|^2) tail beyond the cutoff.
    """
    _require_cutoff(cutoff)
    alpha = complex(alpha)
    if alpha == 0:
        out = np.zeros(cutoff + 1, dtype=complex)
        out[0] = 1.0
        return out
    n = np.arange(cutoff + 1)
    mag = abs(alpha)
    log_mag = -0.5 * mag * mag + n * math.log(mag) - 0.5 * gammaln(n + 1.0)
    return np.exp(log_mag + 1j * n * cmath.phase(alpha))


def coherent_overlap(alpha: complex, beta: complex) -> complex:
    """Overlap <beta|alpha> = exp(-|a|^2/2 - |b|^2/2 + conj(b)*a).

    Inner products are antilinear in the first slot throughout the package.
    The squared modulus is exp(-|a - b|^2).
    """
    alpha = complex(alpha)
    beta = complex(beta)
    exponent = -0.5 * abs(alpha) ** 2 - 0.5 * abs(beta) ** 2 + beta.conjugate() * alpha
    return cmath.exp(exponent)


def displacement_compose_phase(alpha: complex, beta: complex) -> complex:
    """Unit-modulus phase in D(a)D(b) = phase * D(a+b)."""
    alpha = complex(alpha)
    beta = complex(beta)
    return cmath.exp(0.5 * (alpha * beta.conjugate() - alpha.conjugate() * beta))


def displacement_matrix(alpha: complex, cutoff: int, include_gaussian: bool = True) -> np.ndarray:
    """Exact matrix elements <m|D(alpha)|n> on the truncated ladder.

    For m >= n the associated-Laguerre closed form gives
    sqrt(n!/m!) * alpha^(m-n) * exp(-|alpha|^2/2) * L_n^(m-n)(|alpha|^2);
    the upper triangle follows from D(alpha)^dag = D(-alpha).  Factorial
    ratios are taken in log space.

    With ``include_gaussian=False`` the exp(-|alpha|^2/2) prefactor is left
    out; quadrature code folds that factor into the radial weight instead.
    """
    _require_cutoff(cutoff)
    alpha = complex(alpha)
    dim = cutoff + 1
    s = abs(alpha) ** 2
    lower_pow = _integer_powers(alpha, cutoff)
    upper_pow = _integer_powers(-alpha.conjugate(), cutoff)
    out = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        n = np.arange(dim - k)
        ratio = np.exp(0.5 * (gammaln(n + 1.0) - gammaln(n + k + 1.0)))
        lag = laguerre_sequence(cutoff - k, k, s)
        out[n + k, n] = ratio * lower_pow[k] * lag
        if k:
            out[n, n + k] = ratio * upper_pow[k] * lag
    if include_gaussian:
        out *= math.exp(-0.5 * s)
    return out


def trusted_cutoff(cutoff: int, amplitude: float) -> int:
    """Highest occupation still trusted after displacing by ``amplitude``.

    Displacement adds a mean of |a|^2 photons with Poisson spread; dropping
    the mean plus ~3 standard deviations from the cutoff leaves the block
    where truncated products agree with the untruncated operator.
    """
    a = float(amplitude)
    if a < 0:
        raise ValueError("amplitude must be nonnegative")
    return max(0, cutoff - math.ceil(a * a + 3.0 * a))


def min_oracle_buffer(alpha: complex) -> int:
    """Smallest inflation of the cutoff accepted by the expm oracle."""
    a = abs(complex(alpha))
    return 2 * math.ceil(a * a + 3.0 * a) + 4


def expm_displacement_oracle(alpha: complex, cutoff: int, buffer: int) -> np.ndarray:
    """Displacement matrix by truncated-generator exponentiation.

    Builds alpha*adag - conj(alpha)*a at cutoff + buffer, exponentiates by
    scaling-and-squaring Taylor summation, and restricts to the top-left
    (cutoff+1) x (cutoff+1) block.  Independent of the Laguerre closed form,
    which is exactly why it serves as the oracle for it.
    """
    _require_cutoff(cutoff)
    needed = min_oracle_buffer(alpha)
    if buffer < needed:
        raise ValueError(f"buffer {buffer} too small for |alpha|={abs(complex(alpha)):.3f}; need >= {needed}")
    alpha = complex(alpha)
    dim = cutoff + buffer + 1
    lower = np.diag(np.sqrt(np.arange(1.0, dim)), 1)  # annihilation
    generator = alpha * lower.conj().T - alpha.conjugate() * lower
    return _expm_taylor(generator)[: cutoff + 1, : cutoff + 1]


def _expm_taylor(matrix: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(matrix, 1)
    squarings = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    scaled = matrix / (2.0**squarings)
    dim = matrix.shape[0]
    result = np.eye(dim, dtype=complex)
    term = np.eye(dim, dtype=complex)
    for j in range(1, 64):
        term = term @ scaled / j
        result = result + term
        if np.max(np.abs(term)) < 1e-20:
            break
    for _ in range(squarings):
        result = result @ result
    return result
