"""Real/complex phase diagrams of the chain spectrum in parameter space."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ComputationError, ValidationError
from .hamiltonian import OscillatorChain, multi_indices_up_to
from .normalmodes import PairingError, Reality, classify_level, mode_frequencies, symmetrize_pairs

DEFAULT_K_MAX = 4
# pairing tolerance used when a point sits on an exceptional point, where
# coalescing modes are only resolved to ~sqrt(eps)
EP_PAIRING_RTOL = 1e-6


class Phase(str, enum.Enum):
    ALL_REAL = "AllReal"
    SOME_COMPLEX = "SomeComplex"
    UNSTABLE = "Unstable"

    def __str__(self):
        return self.value


def _spectrum(chain: OscillatorChain):
    # labels only need the pairing, so snap pairs onto exact conjugates; this
    # keeps classification stable at and next to exceptional points
    try:
        spec = mode_frequencies(chain)
    except PairingError:
        mu_scale = sum(w * w for w in chain.omegas) + 2 * abs(chain.g)
        spec = mode_frequencies(chain, tol=EP_PAIRING_RTOL * mu_scale)
    return symmetrize_pairs(spec)


def classify_point(chain: OscillatorChain, k_max: int = DEFAULT_K_MAX) -> Phase:
    """Unstable, AllReal (every level up to ``k_max`` quanta real) or SomeComplex."""
    spec = _spectrum(chain)
    if spec.unstable:
        return Phase.UNSTABLE
    if all(spec.self_paired(k) for k in range(spec.n_modes)):
        # all mu real positive: the whole lattice is real
        return Phase.ALL_REAL
    for idx in multi_indices_up_to(spec.n_modes, k_max):
        if classify_level(spec, idx).reality is not Reality.REAL:
            return Phase.SOME_COMPLEX
    return Phase.ALL_REAL


def _axis_index(name: str, n_osc: int) -> int | None:
    """``None`` for the coupling axis, else the 0-based oscillator index."""
    if name == "g":
        return None
    if name.startswith("omega_"):
        try:
            j = int(name[len("omega_") :])
        except ValueError:
            j = 0
        if 1 <= j <= n_osc:
            return j - 1
    raise ValidationError(f"axis must be 'g' or 'omega_j' with 1 <= j <= {n_osc}, got {name!r}")


def with_param(chain: OscillatorChain, name: str, value: float) -> OscillatorChain:
    j = _axis_index(name, chain.n_osc)
    return chain.with_g(value) if j is None else chain.with_omega(j, value)


@dataclass(frozen=True)
class BoundaryPoint:
    axis: str
    lo: float
    hi: float
    lo_label: Phase
    hi_label: Phase
    fixed: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True, eq=False)
class PhaseDiagram:
    axes: tuple[tuple[str, tuple[float, ...]], tuple[str, tuple[float, ...]]]
    cells: tuple[tuple[Phase, ...], ...]
    k_max: int
    boundary_points: tuple[BoundaryPoint, ...] = ()

    def rows(self):
        """``(axis1 value, axis2 value, label)`` in axis-1-major order."""
        (_, v1), (_, v2) = self.axes
        for i, a in enumerate(v1):
            for j, b in enumerate(v2):
                yield a, b, self.cells[i][j]


def scan(
    base: OscillatorChain,
    axis1: tuple[str, Sequence[float]],
    axis2: tuple[str, Sequence[float]],
    k_max: int = DEFAULT_K_MAX,
    workers: int = 1,
) -> PhaseDiagram:
    """Label every grid point; output order is independent of ``workers``."""
    name1, vals1 = axis1[0], tuple(float(v) for v in axis1[1])
    name2, vals2 = axis2[0], tuple(float(v) for v in axis2[1])
    for name in (name1, name2):
        _axis_index(name, base.n_osc)
    if name1 == name2:
        raise ValidationError("scan axes must differ")
    if not all(math.isfinite(v) for v in vals1 + vals2):
        raise ValidationError("axis values must be finite")
    points = [(a, b) for a in vals1 for b in vals2]

    def label(pt):
        a, b = pt
        chain = with_param(with_param(base, name1, a), name2, b)
        return classify_point(chain, k_max)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(label, points))
    else:
        flat = [label(p) for p in points]
    n2 = len(vals2)
    cells = tuple(tuple(flat[i * n2 : (i + 1) * n2]) for i in range(len(vals1)))
    return PhaseDiagram(((name1, vals1), (name2, vals2)), cells, k_max)


def refine_boundary(
    base: OscillatorChain,
    axis: str,
    lo: float,
    hi: float,
    k_max: int = DEFAULT_K_MAX,
    iterations: int = 40,
) -> BoundaryPoint:
    """Bisect between two differently labelled parameter values."""
    if iterations < 1:
        raise ValidationError("iterations must be positive")
    lab_lo = classify_point(with_param(base, axis, lo), k_max)
    lab_hi = classify_point(with_param(base, axis, hi), k_max)
    if lab_lo == lab_hi:
        raise ValidationError(f"both endpoints are {lab_lo}; nothing to bracket")
    if Phase.UNSTABLE in (lab_lo, lab_hi):
        raise ValidationError("bracket endpoints must not be Unstable")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        lab = classify_point(with_param(base, axis, mid), k_max)
        if lab == Phase.UNSTABLE:
            raise ComputationError(f"hit an unstable point at {axis}={mid}")
        if lab == lab_lo:
            lo = mid
        else:
            hi = mid
    fixed = {"g": base.g, **{f"omega_{j + 1}": w for j, w in enumerate(base.omegas)}}
    fixed.pop(axis, None)
    return BoundaryPoint(axis, lo, hi, lab_lo, lab_hi, fixed)


def two_by_two_boundary(omega_x: float, omega_y: float) -> float:
    """Coupling at which the two modes of an N=2 chain coalesce, |wx^2 - wy^2| / 2."""
    return abs(omega_x**2 - omega_y**2) / 2.0


def frontier(diagram: PhaseDiagram) -> list[tuple[float, float, float]]:
    """Along axis 1, the first label change for each axis-2 value.

    Returns ``(axis2 value, last axis1 value before the change, first after)``.
    """
    (_, v1), (_, v2) = diagram.axes
    out = []
    for j, b in enumerate(v2):
        column = [diagram.cells[i][j] for i in range(len(v1))]
        for i in range(1, len(v1)):
            if column[i] != column[i - 1]:
                out.append((b, v1[i - 1], v1[i]))
                break
    return out


def boundaries_from_diagram(
    base: OscillatorChain, diagram: PhaseDiagram, iterations: int = 30
) -> PhaseDiagram:
    """Refine every axis-1 frontier crossing found in ``diagram`` by bisection."""
    (name1, _), (name2, _) = diagram.axes
    points = []
    for b, lo, hi in frontier(diagram):
        chain = with_param(base, name2, b)
        try:
            points.append(refine_boundary(chain, name1, lo, hi, diagram.k_max, iterations))
        except ValidationError:
            continue
    return PhaseDiagram(diagram.axes, diagram.cells, diagram.k_max, tuple(points))


def grid(lo: float, hi: float, n: int) -> tuple[float, ...]:
    if n < 1:
        raise ValidationError("grid needs at least one point")
    return tuple(float(v) for v in np.linspace(lo, hi, n))
