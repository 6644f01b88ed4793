"""Signed-permutation symmetries of the chain and their antiunitary extensions.

A :class:`SignedPermutation` sends ``x_j -> s_j x_{perm[j]}`` (0-based), i.e.
it is the orthogonal matrix with ``S[j, perm[j]] = s_j``. It acts on the
potential's quadratic form by ``M -> S M S^T``; the kinetic term is invariant
under every signed permutation and under time reversal, so this captures the
whole Hamiltonian. Time reversal conjugates ``M``.

Composition follows function composition: ``compose(a, b)`` applies ``b``
first, and its matrix is ``S_a @ S_b``.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import ComputationError, UnsupportedError, ValidationError
from .hamiltonian import OscillatorChain, QuadraticForm, coupling_pattern, quadratic_form

MAX_GROUP_ORDER = 100_000


@dataclass(frozen=True)
class SignedPermutation:
    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        signs = tuple(int(s) for s in self.signs)
        if sorted(perm) != list(range(len(perm))):
            raise ValidationError(f"not a permutation of 0..{len(perm) - 1}: {perm}")
        if len(signs) != len(perm) or any(s not in (1, -1) for s in signs):
            raise ValidationError(f"signs must be +1/-1, one per coordinate: {signs}")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(n)), (1,) * n)

    @classmethod
    def from_matrix(cls, m) -> "SignedPermutation":
        m = np.asarray(m)
        perm, signs = [], []
        for row in m:
            nz = np.flatnonzero(row)
            if len(nz) != 1 or abs(row[nz[0]]) != 1:
                raise ValidationError("matrix is not a signed permutation")
            perm.append(int(nz[0]))
            signs.append(int(np.sign(row[nz[0]])))
        return cls(tuple(perm), tuple(signs))

    @property
    def n(self) -> int:
        return len(self.perm)

    def matrix(self) -> np.ndarray:
        s = np.zeros((self.n, self.n))
        s[np.arange(self.n), self.perm] = self.signs
        return s

    def inverse(self) -> "SignedPermutation":
        perm = [0] * self.n
        signs = [0] * self.n
        for j, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = j
            signs[p] = s
        return SignedPermutation(tuple(perm), tuple(signs))

    def __matmul__(self, other: "SignedPermutation") -> "SignedPermutation":
        return compose(self, other)


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    """Signed permutation with matrix ``S_a @ S_b`` (apply ``b`` first)."""
    if a.n != b.n:
        raise ValidationError(f"dimension mismatch: {a.n} vs {b.n}")
    perm = tuple(b.perm[p] for p in a.perm)
    signs = tuple(sa * b.signs[p] for sa, p in zip(a.signs, a.perm))
    return SignedPermutation(perm, signs)


@dataclass(frozen=True)
class AntiunitaryOp:
    """``S`` or ``S T``; ``conjugates`` marks the presence of time reversal."""

    unitary_part: SignedPermutation
    conjugates: bool = False

    @property
    def n(self) -> int:
        return self.unitary_part.n

    def __matmul__(self, other: "AntiunitaryOp") -> "AntiunitaryOp":
        # S is real, so T commutes with it and T^2 = 1
        return AntiunitaryOp(
            compose(self.unitary_part, other.unitary_part),
            self.conjugates != other.conjugates,
        )


def _as_op(x) -> AntiunitaryOp:
    return x if isinstance(x, AntiunitaryOp) else AntiunitaryOp(x, False)


def canonical_generators(n_osc: int) -> dict[str, SignedPermutation]:
    """``U1..U4`` (keep the coupling) and ``W1..W4`` (flip its sign).

    For a single oscillator there is no coupling and only ``U1``, ``U2`` are
    returned.
    """
    if n_osc < 1:
        raise ValidationError("n_osc must be >= 1")
    ident = tuple(range(n_osc))
    u1 = SignedPermutation.identity(n_osc)
    u2 = SignedPermutation(ident, (-1,) * n_osc)
    if n_osc == 1:
        return {"U1": u1, "U2": u2}
    u3 = SignedPermutation(tuple(reversed(ident)), (1,) * n_osc)
    # 1-based j: W1 flips odd j, W2 flips even j
    w1 = SignedPermutation(ident, tuple((-1) ** j for j in range(1, n_osc + 1)))
    w2 = SignedPermutation(ident, tuple((-1) ** (j + 1) for j in range(1, n_osc + 1)))
    return {
        "U1": u1,
        "U2": u2,
        "U3": u3,
        "U4": compose(u2, u3),
        "W1": w1,
        "W2": w2,
        "W3": compose(u3, w1),
        "W4": compose(u3, w2),
    }


def antiunitary_generators(n_osc: int) -> dict[str, AntiunitaryOp]:
    """``A_j = W_j T`` for the canonical ``W_j``."""
    gens = canonical_generators(n_osc)
    return {"A" + name[1:]: AntiunitaryOp(op, True) for name, op in gens.items() if name.startswith("W")}


def conjugate_form(m: QuadraticForm, s: SignedPermutation, conj: bool = False) -> QuadraticForm:
    """Quadratic form of the transformed Hamiltonian, ``S (M or M*) S^T``."""
    if m.dim != s.n:
        raise ValidationError(f"dimension mismatch: form {m.dim}, operator {s.n}")
    mat = np.conj(m.entries) if conj else m.entries
    # exact for signed permutations: pure reindexing and sign flips
    p = np.asarray(s.perm)
    sg = np.asarray(s.signs)
    return QuadraticForm(np.outer(sg, sg) * mat[np.ix_(p, p)])


class CommutantClass(str, enum.Enum):
    IN_G = "InG"
    IN_SW = "InSW"
    NEITHER = "Neither"

    def __str__(self):
        return self.value


def commutant_class(op: SignedPermutation, chain: OscillatorChain, rtol: float = 1e-12) -> CommutantClass:
    """Whether ``op`` commutes with both ``H0`` and ``H'`` (InG), commutes with
    ``H0`` and anticommutes with ``H'`` (InSW), or neither."""
    if op.n != chain.n_osc:
        raise ValidationError(f"dimension mismatch: operator {op.n}, chain {chain.n_osc}")
    m0 = QuadraticForm(np.diag(np.square(chain.omegas)))
    scale = rtol * max(chain.omegas) ** 2
    if not conjugate_form(m0, op).isclose(m0, atol=scale):
        return CommutantClass.NEITHER
    c = QuadraticForm(coupling_pattern(chain.n_osc))
    tc = conjugate_form(c, op).entries
    if np.array_equal(tc, c.entries):
        return CommutantClass.IN_G
    if np.array_equal(tc, -c.entries):
        return CommutantClass.IN_SW
    return CommutantClass.NEITHER


def antiunitary_invariance_check(a: AntiunitaryOp, chain: OscillatorChain, tol: float = 1e-14) -> bool:
    """Whether ``a`` leaves ``M(ig)`` invariant entrywise within ``tol``."""
    if not a.conjugates:
        raise ValidationError("antiunitary check requires an operator including time reversal")
    m = quadratic_form(chain)
    return conjugate_form(m, a.unitary_part, conj=True).isclose(m, atol=tol)


@dataclass(frozen=True, eq=False)
class GroupTable:
    elements: tuple[AntiunitaryOp, ...]
    cayley: np.ndarray = field(repr=False)
    label: str = ""

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity_index(self) -> int:
        n = self.elements[0].n
        return self.elements.index(AntiunitaryOp(SignedPermutation.identity(n), False))

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def inverse_index(self, i: int) -> int:
        return int(np.flatnonzero(self.cayley[i] == self.identity_index)[0])

    def element_order(self, i: int) -> int:
        e = self.identity_index
        k, cur = 1, i
        while cur != e:
            cur = int(self.cayley[cur, i])
            k += 1
        return k

    def order_multiset(self) -> dict[int, int]:
        return dict(sorted(Counter(self.element_order(i) for i in range(self.order)).items()))

    def index_of(self, op) -> int:
        return self.elements.index(_as_op(op))


def close_group(generators: Iterable, max_order: int = MAX_GROUP_ORDER) -> GroupTable:
    """Smallest set containing the generators and closed under composition.

    Accepts :class:`AntiunitaryOp` or :class:`SignedPermutation` generators;
    returns the table labelled by :func:`classify_group` when the order allows.
    """
    gens = [_as_op(g) for g in generators]
    if not gens:
        raise ValidationError("need at least one generator")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise ValidationError("generators act on different dimensions")
    bound = 2 ** n * math.factorial(n) * 2
    cap = min(max_order, bound)
    ident = AntiunitaryOp(SignedPermutation.identity(n), False)
    elements = [ident]
    seen = {ident: 0}
    for g in gens:
        if g not in seen:
            seen[g] = len(elements)
            elements.append(g)
    i = 0
    while i < len(elements):
        for g in gens:
            p = elements[i] @ g
            if p not in seen:
                if len(elements) >= cap:
                    raise ComputationError(f"group order exceeds cap {cap}")
                seen[p] = len(elements)
                elements.append(p)
        i += 1
    size = len(elements)
    cayley = np.empty((size, size), dtype=np.int64)
    for a, ea in enumerate(elements):
        for b, eb in enumerate(elements):
            cayley[a, b] = seen[ea @ eb]
    table = GroupTable(tuple(elements), cayley)
    _verify_group(table)
    label = classify_group(table) if size <= 16 else ""
    return GroupTable(tuple(elements), cayley, label)


def _verify_group(table: GroupTable) -> None:
    e = table.identity_index
    for i in range(table.order):
        row = table.cayley[i]
        if not np.any(row == e) or len(set(row.tolist())) != table.order:
            raise ComputationError("composition table is not a group table")


def classify_group(table: GroupTable) -> str:
    """Isomorphism class from order, commutativity and element orders.

    Elementary abelian groups of order 4 and 8 are reported as ``D2`` (the
    family D2 = C2v = C2h) and ``D2h``; non-abelian order 8 as ``C4v`` (= D4)
    or ``Q8``.
    """
    order = table.order
    if order > 16:
        raise UnsupportedError(f"classification supports order <= 16, got {order}")
    abelian = table.is_abelian()
    orders = table.order_multiset()
    involutions = orders.get(2, 0)
    if max(orders) <= 2:
        if order == 4:
            return "D2"
        if order == 8:
            return "D2h"
        return f"Z2^{order.bit_length() - 1}"
    if order == 8 and not abelian:
        if involutions == 5:
            return "C4v"
        if involutions == 1:
            return "Q8"
    return f"other(order={order}, abelian={abelian}, orders={orders})"


def g4_group(n_osc: int) -> GroupTable:
    gens = canonical_generators(n_osc)
    return close_group([gens[k] for k in ("U1", "U2", "U3", "U4") if k in gens])


def g8_group(n_osc: int) -> GroupTable:
    return close_group(canonical_generators(n_osc).values())


def antiunitary_group(n_osc: int) -> GroupTable:
    """``G_A``: the ``U_j`` together with ``A_j = W_j T``."""
    gens = canonical_generators(n_osc)
    ops = [AntiunitaryOp(op, name.startswith("W")) for name, op in gens.items()]
    return close_group(ops)


def describe_op(op) -> dict:
    op = _as_op(op)
    return {
        "perm": [p + 1 for p in op.unitary_part.perm],
        "signs": list(op.unitary_part.signs),
        "time_reversal": op.conjugates,
    }


def symmetry_report(chain: OscillatorChain) -> dict:
    """Everything the ``symmetry`` command prints, as plain data."""
    gens = canonical_generators(chain.n_osc)
    report: dict = {
        "generators": {name: describe_op(op) for name, op in gens.items()},
        "commutant_class": {name: str(commutant_class(op, chain)) for name, op in gens.items()},
    }
    groups: Mapping[str, GroupTable] = {
        "G4": g4_group(chain.n_osc),
        "G8": g8_group(chain.n_osc),
        "GA": antiunitary_group(chain.n_osc),
    }
    for key, table in groups.items():
        report[key] = {
            "order": table.order,
            "label": table.label,
            "abelian": table.is_abelian(),
            "elements": [describe_op(e) for e in table.elements],
            "cayley": table.cayley.tolist(),
        }
    report["antiunitary_invariance"] = {
        name: antiunitary_invariance_check(a, chain)
        for name, a in antiunitary_generators(chain.n_osc).items()
    }
    return report
