"""Truncated Fock-basis representation of the chain Hamiltonian.

Basis states are products of single-oscillator eigenstates with every
occupation ``n_j <= cutoff`` (a hypercube, not a total-quanta simplex). The
coupling ``x_j x_{j+1}`` only connects states that differ by one quantum in
each of two neighbouring oscillators, so the matrix is assembled directly
from ladder-operator position elements.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionLimitError, ValidationError
from .hamiltonian import MultiIndex, OscillatorChain
from .linalg import EigenResult, eig_dense, greedy_match
from .normalmodes import EigenLevel

MAX_FOCK_DIM = 4096


def x_element(n_row: int, n_col: int, omega: float) -> float:
    """``<n_row| x |n_col>`` for an oscillator of frequency ``omega`` (hbar = m = 1)."""
    if omega <= 0:
        raise ValidationError(f"omega must be positive, got {omega}")
    if n_row == n_col - 1:
        return math.sqrt(n_col / (2.0 * omega))
    if n_row == n_col + 1:
        return math.sqrt((n_col + 1) / (2.0 * omega))
    return 0.0


def position_matrix(cutoff: int, omega: float) -> np.ndarray:
    """Matrix of ``x`` on levels ``0..cutoff``."""
    n = np.arange(1, cutoff + 1)
    off = np.sqrt(n / (2.0 * omega))
    return np.diag(off, 1) + np.diag(off, -1)


@dataclass(frozen=True, eq=False)
class FockBasis:
    n_osc: int
    cutoff: int
    states: tuple[MultiIndex, ...] = field(repr=False)

    @classmethod
    def hypercube(cls, n_osc: int, cutoff: int) -> "FockBasis":
        if n_osc < 1 or cutoff < 1:
            raise ValidationError(f"need n_osc >= 1 and cutoff >= 1, got ({n_osc}, {cutoff})")
        dim = (cutoff + 1) ** n_osc
        if dim > MAX_FOCK_DIM:
            raise DimensionLimitError(
                f"Fock dimension (cutoff+1)^N = {dim} exceeds limit {MAX_FOCK_DIM}"
            )
        states = tuple(itertools.product(range(cutoff + 1), repeat=n_osc))
        return cls(n_osc, cutoff, states)

    def __len__(self):
        return len(self.states)

    def index(self, state) -> int:
        """Position of ``state`` in the lexicographic ordering."""
        base = self.cutoff + 1
        pos = 0
        for n in state:
            if not 0 <= n <= self.cutoff:
                raise KeyError(state)
            pos = pos * base + n
        return pos

    def as_array(self) -> np.ndarray:
        return np.array(self.states, dtype=np.int64).reshape(len(self), self.n_osc)


@dataclass(frozen=True, eq=False)
class FockHamiltonian:
    basis: FockBasis
    matrix: np.ndarray = field(repr=False)


def unperturbed_energies(chain: OscillatorChain, basis: FockBasis) -> np.ndarray:
    return (basis.as_array() + 0.5) @ np.asarray(chain.omegas)


def coupling_operator(chain: OscillatorChain, basis: FockBasis) -> np.ndarray:
    """Real matrix of ``sum_j x_j x_{j+1}`` in the truncated basis."""
    states = basis.as_array()
    dim = len(basis)
    base = basis.cutoff + 1
    weights = base ** np.arange(chain.n_osc - 1, -1, -1)
    out = np.zeros((dim, dim))
    cols = np.arange(dim)

    def xe(n_row, n_col, omega):
        # vectorised x_element for n_row = n_col +- 1
        up = n_row == n_col + 1
        return np.where(up, np.sqrt((n_col + 1) / (2 * omega)), np.sqrt(n_col / (2 * omega)))

    for j in range(chain.n_osc - 1):
        wj, wk = chain.omegas[j], chain.omegas[j + 1]
        for d1 in (-1, 1):
            for d2 in (-1, 1):
                t = states.copy()
                t[:, j] += d1
                t[:, j + 1] += d2
                ok = (t[:, j] >= 0) & (t[:, j] <= basis.cutoff) & (t[:, j + 1] >= 0) & (t[:, j + 1] <= basis.cutoff)
                val = xe(t[ok, j], states[ok, j], wj) * xe(t[ok, j + 1], states[ok, j + 1], wk)
                out[t[ok] @ weights, cols[ok]] += val
    return out


def build_fock_hamiltonian(chain: OscillatorChain, cutoff: int, lam: complex | None = None) -> FockHamiltonian:
    """``H0 + lam * H'`` on the hypercube basis; ``lam`` defaults to ``i * chain.g``."""
    basis = FockBasis.hypercube(chain.n_osc, cutoff)
    lam = chain.coupling if lam is None else lam
    h = np.diag(unperturbed_energies(chain, basis)).astype(complex)
    if chain.n_osc > 1 and lam != 0:
        h += lam * coupling_operator(chain, basis)
    return FockHamiltonian(basis, h)


def fock_spectrum(chain: OscillatorChain, cutoff: int, backend=None) -> EigenResult:
    return eig_dense(build_fock_hamiltonian(chain, cutoff).matrix, backend=backend)


def w1_signs(basis: FockBasis) -> np.ndarray:
    """Diagonal of the operator flipping every odd-numbered coordinate: (-1)^(sum_j j n_j)."""
    j = np.arange(1, basis.n_osc + 1)
    return np.where((basis.as_array() @ j) % 2 == 0, 1.0, -1.0)


@dataclass(frozen=True)
class MatchReport:
    pairs: tuple[tuple[MultiIndex, complex, complex, float], ...]
    max_distance: float
    passed: bool
    n_levels: int
    tol: float
    unmatched: int = 0


def match_spectra(fock: EigenResult, exact: list[EigenLevel], n_levels: int, tol: float) -> MatchReport:
    """Compare the ``n_levels`` exact levels of smallest |Re E| with Fock eigenvalues.

    Levels left without a Fock partner (too few eigenvalues) count as a
    failure in the report.
    """
    if n_levels < 1 or n_levels > len(exact):
        raise ValueError(f"n_levels={n_levels} must be between 1 and {len(exact)}")
    chosen = sorted(exact, key=lambda lv: abs(lv.energy.real))[:n_levels]
    pairs = greedy_match([lv.energy for lv in chosen], fock.values)
    rows = tuple(
        (chosen[i].idx, chosen[i].energy, complex(fock.values[j]), d) for i, j, d in pairs
    )
    unmatched = n_levels - len(rows)
    max_d = max((r[3] for r in rows), default=math.inf)
    return MatchReport(
        pairs=rows,
        max_distance=max_d,
        passed=unmatched == 0 and max_d <= tol,
        n_levels=n_levels,
        tol=tol,
        unmatched=unmatched,
    )


def spectrum_negation_check(chain: OscillatorChain, cutoff: int, tol: float, backend=None) -> bool:
    """Whether H(ig) and H(-ig) have the same truncated spectrum within ``tol``."""
    plus = fock_spectrum(chain, cutoff, backend=backend).values
    minus = fock_spectrum(chain.with_g(-chain.g), cutoff, backend=backend).values
    pairs = greedy_match(plus, minus)
    if len(pairs) != len(plus):
        return False
    return all(d <= tol * max(1.0, abs(plus[i])) for i, _, d in pairs)
