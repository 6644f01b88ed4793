"""Chains of harmonic oscillators with imaginary nearest-neighbour coupling.

The Hamiltonian (units with hbar = m = 1) is::

    H = 1/2 sum_j (p_j^2 + w_j^2 x_j^2) + lam sum_{j<N} x_j x_{j+1},   lam = i g

Writing the potential as ``1/2 x . M(lam) . x`` gives the tridiagonal complex
symmetric matrix ``M`` with ``w_j^2`` on the diagonal and ``lam`` next to it.
Multi-indices (occupation numbers ``n_1..n_N``) are plain tuples of ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

import numpy as np

from .errors import ValidationError

MultiIndex = tuple[int, ...]

# relative tolerance used to decide that two unperturbed energies coincide
DEGENERACY_RTOL = 1e-12


@dataclass(frozen=True)
class OscillatorChain:
    """N oscillators with frequencies ``omegas`` and coupling ``lam = i*g``."""

    n_osc: int
    omegas: tuple[float, ...]
    g: float = 0.0

    def __post_init__(self):
        if isinstance(self.n_osc, bool) or not isinstance(self.n_osc, (int, np.integer)):
            raise ValidationError(f"n_osc must be an integer, got {self.n_osc!r}")
        if self.n_osc < 1:
            raise ValidationError(f"n_osc must be >= 1, got {self.n_osc}")
        omegas = tuple(float(w) for w in self.omegas)
        if len(omegas) != self.n_osc:
            raise ValidationError(
                f"expected {self.n_osc} frequencies, got {len(omegas)}"
            )
        for w in omegas:
            if not math.isfinite(w) or w <= 0.0:
                raise ValidationError(f"frequencies must be finite and positive, got {w}")
        g = float(self.g)
        if not math.isfinite(g):
            raise ValidationError(f"coupling g must be finite, got {self.g}")
        object.__setattr__(self, "n_osc", int(self.n_osc))
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "g", g)

    @property
    def coupling(self) -> complex:
        return 1j * self.g

    @property
    def equal_frequencies(self) -> bool:
        w0 = self.omegas[0]
        return all(abs(w - w0) <= DEGENERACY_RTOL * w0 for w in self.omegas)

    def with_g(self, g: float) -> "OscillatorChain":
        return replace(self, g=g)

    def with_omega(self, j: int, value: float) -> "OscillatorChain":
        omegas = list(self.omegas)
        omegas[j] = value
        return replace(self, omegas=tuple(omegas))


def build_chain(n_osc: int, omegas: Sequence[float], g: float) -> OscillatorChain:
    """Validated chain; raises :class:`ValidationError` on bad input."""
    return OscillatorChain(n_osc, tuple(omegas), g)


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """Complex symmetric (not Hermitian) matrix of the potential energy."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValidationError(f"quadratic form must be square, got {m.shape}")
        if not np.array_equal(m, m.T):
            raise ValidationError("quadratic form must be symmetric")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def isclose(self, other: "QuadraticForm", atol: float = 0.0) -> bool:
        return self.dim == other.dim and bool(
            np.all(np.abs(self.entries - other.entries) <= atol)
        )

    def __repr__(self):
        return f"QuadraticForm(dim={self.dim})"


def coupling_pattern(n_osc: int) -> np.ndarray:
    """Real matrix of the nearest-neighbour coupling: ones on the first off-diagonals."""
    c = np.zeros((n_osc, n_osc))
    j = np.arange(n_osc - 1)
    c[j, j + 1] = c[j + 1, j] = 1.0
    return c


def quadratic_form_at(chain: OscillatorChain, lam: complex) -> QuadraticForm:
    """Form for an arbitrary coupling constant ``lam``; ``chain.g`` is ignored.

    Real ``lam`` gives the Hermitian family used for perturbation series.
    """
    m = np.diag(np.square(chain.omegas)).astype(complex)
    return QuadraticForm(m + lam * coupling_pattern(chain.n_osc))


def quadratic_form(chain: OscillatorChain) -> QuadraticForm:
    return quadratic_form_at(chain, chain.coupling)


def h0_energy(chain: OscillatorChain, idx: Sequence[int]) -> float:
    """Uncoupled energy ``sum_j w_j (n_j + 1/2)``."""
    if len(idx) != chain.n_osc:
        raise ValidationError(f"multi-index {tuple(idx)} has wrong length for N={chain.n_osc}")
    if any(n < 0 for n in idx):
        raise ValidationError(f"occupation numbers must be non-negative: {tuple(idx)}")
    return math.fsum(w * (n + 0.5) for w, n in zip(chain.omegas, idx))


def level_degeneracy(n_osc: int, k: int) -> int:
    """Number of ways to distribute ``k`` quanta over ``n_osc`` equal oscillators."""
    if n_osc < 1 or k < 0:
        raise ValidationError(f"need n_osc >= 1 and k >= 0, got ({n_osc}, {k})")
    return math.comb(k + n_osc - 1, n_osc - 1)


def _compositions(n: int, k: int) -> Iterator[MultiIndex]:
    if n == 1:
        yield (k,)
        return
    for first in range(k + 1):
        for rest in _compositions(n - 1, k - first):
            yield (first,) + rest


def enumerate_multi_indices(n_osc: int, k: int) -> list[MultiIndex]:
    """All multi-indices with total ``k``, lexicographically ordered."""
    if n_osc < 1 or k < 0:
        raise ValidationError(f"need n_osc >= 1 and k >= 0, got ({n_osc}, {k})")
    return list(_compositions(n_osc, k))


def multi_indices_up_to(n_osc: int, k_max: int) -> list[MultiIndex]:
    return [idx for k in range(k_max + 1) for idx in enumerate_multi_indices(n_osc, k)]


def parse_multi_index(text: str) -> MultiIndex:
    """``"2,0,1"`` -> ``(2, 0, 1)``."""
    try:
        idx = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValidationError(f"bad multi-index {text!r}") from None
    if any(n < 0 for n in idx):
        raise ValidationError(f"occupation numbers must be non-negative: {text!r}")
    return idx


def format_multi_index(idx: Sequence[int]) -> str:
    return ",".join(str(n) for n in idx)
