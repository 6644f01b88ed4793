"""Rayleigh-Schroedinger perturbation theory in the coupling constant.

Coefficients are computed for the real family ``H0 + lam H'`` (so everything
stays in real arithmetic); the physical chain is recovered by substituting
``lam = i g``. Wavefunction corrections live on the Fock hypercube as
N-dimensional tensors and ``H'`` is applied one position operator at a time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ComputationError, UnsupportedError, ValidationError
from .focksolver import FockBasis, position_matrix, unperturbed_energies, x_element
from .hamiltonian import (
    DEGENERACY_RTOL,
    MultiIndex,
    OscillatorChain,
    enumerate_multi_indices,
    h0_energy,
)
from .linalg import eig_dense

MAX_ORDER = 8
SPLITTING_ATOL = 1e-10


class DegenerateLevelError(UnsupportedError):
    """Nondegenerate perturbation theory was requested for a degenerate level."""


class Verdict(str, enum.Enum):
    PREDICT_REAL = "PredictReal"
    PREDICT_COMPLEX = "PredictComplex"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SeriesCoefficients:
    """``coeffs[j]`` multiplies ``lam**j``."""

    level: MultiIndex
    coeffs: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def partial_sum(self, lam: complex, order: int | None = None) -> complex:
        order = self.order if order is None else order
        return sum(c * lam**j for j, c in enumerate(self.coeffs[: order + 1]))


@dataclass(frozen=True)
class RealityPrediction:
    """First-order verdict for one level.

    ``first_order_splitting`` lists the eigenvalues of ``H'`` on the whole
    degenerate subspace; ``level_shift`` is the one belonging to this level,
    so its first-order energy is ``E0 + i g level_shift``.
    """

    level: MultiIndex
    degenerate: bool
    first_order_splitting: tuple[float, ...]
    level_shift: float
    verdict: Verdict


def _apply_coupling(psi: np.ndarray, xs: list[np.ndarray]) -> np.ndarray:
    out = np.zeros_like(psi)
    for j in range(len(xs) - 1):
        t = np.moveaxis(np.tensordot(xs[j], psi, axes=(1, j)), 0, j)
        out += np.moveaxis(np.tensordot(xs[j + 1], t, axes=(1, j + 1)), 0, j + 1)
    return out


def _check_nondegenerate(energies: np.ndarray, pos: int, e0: float) -> None:
    close = np.abs(energies - e0) <= DEGENERACY_RTOL * abs(e0)
    close[pos] = False
    if np.any(close):
        raise DegenerateLevelError(
            f"unperturbed energy {e0} is degenerate; use degenerate_first_order"
        )


def rs_coefficients(chain: OscillatorChain, level, order: int, cutoff: int) -> SeriesCoefficients:
    """Energy series coefficients ``E^(0..order)`` of a nondegenerate level.

    ``level`` counts quanta per oscillator. ``chain.g`` is ignored.
    """
    level = tuple(int(n) for n in level)
    if not 1 <= order <= MAX_ORDER:
        raise ValidationError(f"order must be in 1..{MAX_ORDER}, got {order}")
    if len(level) != chain.n_osc:
        raise ValidationError(f"level {level} does not match N={chain.n_osc}")
    if any(n > cutoff - order for n in level):
        raise ValidationError(
            f"level {level} too close to cutoff {cutoff} for order {order}"
        )
    basis = FockBasis.hypercube(chain.n_osc, cutoff)
    shape = (cutoff + 1,) * chain.n_osc
    e_diag = unperturbed_energies(chain, basis).reshape(shape)
    e0 = h0_energy(chain, level)
    _check_nondegenerate(e_diag.ravel(), basis.index(level), e0)

    xs = [position_matrix(cutoff, w) for w in chain.omegas]
    denom = e0 - e_diag
    denom[level] = 1.0  # component is projected out below

    psi = [np.zeros(shape)]
    psi[0][level] = 1.0
    energies = [e0]
    for k in range(1, order + 1):
        v_prev = _apply_coupling(psi[k - 1], xs)
        energies.append(float(v_prev[level]))
        if k == order:
            break
        rhs = v_prev - sum(energies[j] * psi[k - j] for j in range(1, k + 1))
        nxt = rhs / denom
        nxt[level] = 0.0
        psi.append(nxt)
    return SeriesCoefficients(level, tuple(energies))


def odd_order_check(coeffs: SeriesCoefficients, tol: float) -> bool:
    """True when every odd-power coefficient is at most ``tol * max(1, |E0|)``."""
    scale = tol * max(1.0, abs(coeffs.coeffs[0]))
    return all(abs(c) <= scale for c in coeffs.coeffs[1::2])


def _degenerate_block(chain: OscillatorChain, states: list[MultiIndex]) -> np.ndarray:
    w = chain.omegas
    pos = {s: i for i, s in enumerate(states)}
    block = np.zeros((len(states), len(states)))
    for col, s in enumerate(states):
        for j in range(chain.n_osc - 1):
            for d in (-1, 1):
                t = list(s)
                t[j] += d
                t[j + 1] -= d
                row = pos.get(tuple(t))
                if row is None:
                    continue
                block[row, col] += x_element(t[j], s[j], w[j]) * x_element(t[j + 1], s[j + 1], w[j + 1])
    return block


def _real_eigenvalues(block: np.ndarray) -> np.ndarray:
    vals = eig_dense(block).values
    if np.any(np.abs(vals.imag) > 1e-12 * max(1.0, np.abs(vals).max())):
        raise ComputationError("symmetric block produced complex eigenvalues")
    return np.sort(vals.real)


def degenerate_first_order(chain: OscillatorChain, k: int) -> list[RealityPrediction]:
    """First-order analysis of the level with ``k`` quanta in an equal-frequency chain.

    Returns one prediction per level of the cluster, labelled by quanta per
    first-order mode (modes ordered by increasing shift, which matches the
    normal-mode ordering for ``g > 0``).
    """
    if not chain.equal_frequencies:
        raise UnsupportedError("degenerate analysis needs all frequencies equal")
    if k < 0:
        raise ValidationError("k must be non-negative")
    n = chain.n_osc
    states = enumerate_multi_indices(n, k)
    splitting = _real_eigenvalues(_degenerate_block(chain, states))
    one_body = _real_eigenvalues(_degenerate_block(chain, enumerate_multi_indices(n, 1)))
    shifts = {idx: float(np.dot(idx, one_body)) for idx in states}
    # H' restricted to the shell is a one-body operator, so its spectrum is
    # the set of sums of one-body shifts
    if not np.allclose(np.sort(list(shifts.values())), splitting, atol=1e-9):
        raise ComputationError("degenerate block spectrum is not built from one-body shifts")
    degenerate = len(states) > 1
    out = []
    for idx in states:
        s = shifts[idx]
        if abs(s) <= SPLITTING_ATOL:
            s = 0.0
        if not degenerate:
            verdict = Verdict.PREDICT_REAL
        elif s != 0.0:
            verdict = Verdict.PREDICT_COMPLEX
        else:
            verdict = Verdict.INCONCLUSIVE
        out.append(RealityPrediction(idx, degenerate, tuple(splitting.tolist()), s, verdict))
    return out


def _degeneracy_partners(chain: OscillatorChain, level: MultiIndex) -> list[MultiIndex]:
    """Other multi-indices with the same unperturbed energy."""
    e0 = h0_energy(chain, level)
    limit = e0 * (1 + DEGENERACY_RTOL)
    rest = [0.5 * math.fsum(chain.omegas[j:]) for j in range(chain.n_osc + 1)] + [0.0]
    out = []

    def walk(prefix, energy):
        j = len(prefix)
        if j == chain.n_osc:
            if abs(energy - e0) <= DEGENERACY_RTOL * e0 and tuple(prefix) != level:
                out.append(tuple(prefix))
            return
        n = 0
        # lowest reachable total: remaining oscillators in their ground state
        while energy + chain.omegas[j] * (n + 0.5) + rest[j + 1] <= limit:
            walk(prefix + [n], energy + chain.omegas[j] * (n + 0.5))
            n += 1

    walk([], 0.0)
    return out


def reality_predictor(chain: OscillatorChain, level) -> RealityPrediction:
    """Small-``g`` prediction of whether ``level`` stays real.

    Equal frequencies go through :func:`degenerate_first_order` (level in
    first-order mode labels). Otherwise the level must be nondegenerate, in
    which case only even powers of ``g`` appear and it is predicted real.
    """
    level = tuple(int(n) for n in level)
    if len(level) != chain.n_osc:
        raise ValidationError(f"level {level} does not match N={chain.n_osc}")
    if chain.equal_frequencies:
        for pred in degenerate_first_order(chain, sum(level)):
            if pred.level == level:
                return pred
        raise ComputationError(f"level {level} missing from its degenerate cluster")
    if _degeneracy_partners(chain, level):
        raise UnsupportedError(
            f"level {level} is degenerate for unequal frequencies {chain.omegas}"
        )
    return RealityPrediction(level, False, (0.0,), 0.0, Verdict.PREDICT_REAL)
