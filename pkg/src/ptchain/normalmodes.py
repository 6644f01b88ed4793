"""Exact spectrum of the chain from its normal modes.

The quadratic form ``M(ig)`` is diagonalised by a complex orthogonal
transformation, so ``H`` separates into N modes with complex frequencies
``Omega_k = sqrt(mu_k)`` and every level is ``sum_k (n_k + 1/2) Omega_k``.
Because ``W M(ig)* W^-1 = M(ig)`` for the sign-alternation operators, the
``mu_k`` come in conjugate pairs (or are real); a level is real exactly when
its quanta are symmetric under that pairing.

Mode ``k`` is the ``k``-th eigenvalue of ``M`` in (real, imag) order, so
level multi-indices here count quanta per *mode*, not per oscillator.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ComputationError
from .hamiltonian import MultiIndex, OscillatorChain, multi_indices_up_to, quadratic_form
from .linalg import eig_tridiag_complex_symmetric, spectral_order

PAIRING_RTOL = 1e-9
REALITY_RTOL = 1e-9


class PairingError(ComputationError):
    """A mode eigenvalue has no conjugate partner within tolerance."""


class UnstableSpectrumError(ComputationError):
    """Some mode is an inverted oscillator (real mu <= 0)."""


class ClassificationError(ComputationError):
    """Pairing-based classification contradicts the computed energy."""


class Reality(str, enum.Enum):
    REAL = "Real"
    COMPLEX_PAIRED = "ComplexPaired"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class NormalModeSpectrum:
    mu: np.ndarray
    omega_modes: np.ndarray
    pairing: tuple[int, ...]
    unstable: bool
    tol: float
    chain: OscillatorChain | None = field(default=None, repr=False)

    @property
    def n_modes(self) -> int:
        return len(self.mu)

    def self_paired(self, k: int) -> bool:
        return self.pairing[k] == k


@dataclass(frozen=True)
class EigenLevel:
    idx: MultiIndex
    energy: complex
    reality: Reality
    partner: MultiIndex | None = None


def principal_sqrt(z):
    """Square root with Re >= 0, and Im >= 0 on the cut."""
    r = np.sqrt(np.asarray(z, dtype=complex))
    flip = (r.real == 0.0) & (r.imag < 0.0)
    return np.where(flip, -r, r)


def pair_modes(mu: Sequence[complex], tol: float) -> tuple[int, ...]:
    """Greedy conjugate pairing; each mode in index order takes the nearest
    unpaired ``mu_j`` to ``conj(mu_k)`` (itself included)."""
    mu = np.asarray(mu, dtype=complex)
    n = len(mu)
    pairing = [-1] * n
    for k in range(n):
        if pairing[k] >= 0:
            continue
        free = [j for j in range(n) if pairing[j] < 0]
        dist = np.abs(mu[free] - np.conj(mu[k]))
        best = int(np.argmin(dist))
        if dist[best] > tol:
            raise PairingError(
                f"mode {k} (mu={mu[k]:.6g}) has no conjugate partner within {tol:.3g}"
            )
        j = free[best]
        pairing[k] = j
        pairing[j] = k
    return tuple(pairing)


def mode_frequencies(chain: OscillatorChain, tol: float | None = None, backend=None) -> NormalModeSpectrum:
    """Diagonalise ``M(ig)`` and pair the modes.

    ``tol`` defaults to ``1e-9 * max|mu|`` and governs both the conjugate
    pairing and the instability test.
    """
    m = quadratic_form(chain).entries
    res = eig_tridiag_complex_symmetric(np.diag(m), np.diag(m, 1), backend=backend)
    mu = res.values
    if tol is None:
        tol = PAIRING_RTOL * float(np.max(np.abs(mu)))
    pairing = pair_modes(mu, tol)
    unstable = bool(np.any((mu.real <= 0.0) & (np.abs(mu.imag) <= tol)))
    return NormalModeSpectrum(
        mu=mu,
        omega_modes=principal_sqrt(mu),
        pairing=pairing,
        unstable=unstable,
        tol=tol,
        chain=chain,
    )


def _check_idx(spec: NormalModeSpectrum, idx: Sequence[int]) -> MultiIndex:
    idx = tuple(int(n) for n in idx)
    if len(idx) != spec.n_modes:
        raise ValueError(f"multi-index {idx} has wrong length for {spec.n_modes} modes")
    if any(n < 0 for n in idx):
        raise ValueError(f"occupation numbers must be non-negative: {idx}")
    return idx


def level_energy(spec: NormalModeSpectrum, idx: Sequence[int]) -> complex:
    """``sum_k (n_k + 1/2) Omega_k``."""
    if spec.unstable:
        raise UnstableSpectrumError("spectrum has an inverted mode; lattice energies undefined")
    idx = _check_idx(spec, idx)
    om = spec.omega_modes
    re = math.fsum(om[k].real * (n + 0.5) for k, n in enumerate(idx))
    im = math.fsum(om[k].imag * (n + 0.5) for k, n in enumerate(idx))
    return complex(re, im)


def _is_real(e: complex) -> bool:
    return abs(e.imag) <= REALITY_RTOL * (1.0 + abs(e.real))


def classify_level(spec: NormalModeSpectrum, idx: Sequence[int]) -> EigenLevel:
    idx = _check_idx(spec, idx)
    e = level_energy(spec, idx)
    partner = tuple(idx[spec.pairing[k]] for k in range(spec.n_modes))
    if partner == idx:
        if not _is_real(e):
            raise ClassificationError(f"level {idx} is pairing-symmetric but E={e!r} is not real")
        return EigenLevel(idx, e, Reality.REAL)
    ep = level_energy(spec, partner)
    if abs(e - ep.conjugate()) > REALITY_RTOL * (1.0 + abs(e)):
        raise ClassificationError(f"levels {idx} and {partner} are not complex conjugates")
    return EigenLevel(idx, e, Reality.COMPLEX_PAIRED, partner)


def spectrum_lattice(spec: NormalModeSpectrum, k_max: int) -> list[EigenLevel]:
    """Every level with at most ``k_max`` total quanta, sorted by (Re E, Im E)."""
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    levels = [classify_level(spec, idx) for idx in multi_indices_up_to(spec.n_modes, k_max)]
    order = spectral_order([lv.energy for lv in levels])
    return [levels[i] for i in order]


def lowest_levels(spec: NormalModeSpectrum, count: int) -> list[EigenLevel]:
    """Lattice deep enough to contain the ``count`` levels of smallest Re E.

    Adding a quantum raises Re E by at least ``min Re Omega``, so shells are
    added until the next one cannot undercut the current ``count``-th level.
    """
    if count < 1:
        raise ValueError("count must be positive")
    step = float(np.min(spec.omega_modes.real))
    if step <= 0:
        raise UnstableSpectrumError("non-positive Re Omega; levels are unbounded below")
    e0 = level_energy(spec, (0,) * spec.n_modes).real
    k = 0
    while True:
        levels = spectrum_lattice(spec, k)
        if len(levels) >= count:
            kth = sorted(lv.energy.real for lv in levels)[count - 1]
            if e0 + (k + 1) * step > kth:
                return levels
        k += 1


def symmetrize_pairs(spec: NormalModeSpectrum) -> NormalModeSpectrum:
    """Project ``mu`` onto an exactly conjugation-closed set using the pairing.

    The exact spectrum is closed under conjugation, but near an exceptional
    point roundoff moves coalescing modes by ~sqrt(eps) in arbitrary
    directions. Each pair is replaced by the conjugate pair closest to it, and
    self-paired modes by their real part.
    """
    mu = spec.mu.copy()
    for k, p in enumerate(spec.pairing):
        if p == k:
            mu[k] = mu[k].real
        elif k < p:
            mid = 0.5 * (spec.mu[k] + np.conj(spec.mu[p]))
            mu[k], mu[p] = mid, np.conj(mid)
    return NormalModeSpectrum(
        mu=mu,
        omega_modes=principal_sqrt(mu),
        pairing=spec.pairing,
        unstable=spec.unstable,
        tol=spec.tol,
        chain=spec.chain,
    )
