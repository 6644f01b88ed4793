import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ptchain import hamiltonian as hm
from ptchain.errors import ValidationError


def test_build_chain_valid():
    c = hm.build_chain(2, [1, 1], 0.5)
    assert c.n_osc == 2 and c.omegas == (1.0, 1.0) and c.coupling == 0.5j
    assert c.equal_frequencies


def test_single_oscillator_has_no_coupling():
    c = hm.build_chain(1, [1], 0.3)
    assert np.array_equal(hm.quadratic_form(c).entries, [[1.0]])


@pytest.mark.parametrize(
    "args",
    [(2, [1, 0], 0.1), (2, [1, -1], 0.1), (2, [1], 0.1), (0, [], 0.0), (2, [1, 1], math.nan), (2, [1, math.inf], 0)],
)
def test_build_chain_rejects(args):
    with pytest.raises(ValidationError):
        hm.build_chain(*args)


def test_quadratic_form_examples():
    m = hm.quadratic_form(hm.build_chain(2, [1, 1], 0.5)).entries
    assert np.array_equal(m, [[1, 0.5j], [0.5j, 1]])
    m = hm.quadratic_form(hm.build_chain(3, [1, 2, 3], 0.0)).entries
    assert np.array_equal(m, np.diag([1, 4, 9]))
    m = hm.quadratic_form(hm.build_chain(3, [1, 1, 1], 1.0)).entries
    assert np.array_equal(m, [[1, 1j, 0], [1j, 1, 1j], [0, 1j, 1]])


def test_quadratic_form_is_read_only_and_symmetric():
    q = hm.quadratic_form(hm.build_chain(4, [1, 2, 3, 4], 0.7))
    assert np.array_equal(q.entries, q.entries.T)
    with pytest.raises(ValueError):
        q.entries[0, 0] = 5
    with pytest.raises(ValidationError):
        hm.QuadraticForm(np.array([[1, 2], [3, 4]]))


def test_h0_energy_examples():
    assert hm.h0_energy(hm.build_chain(2, [1, 1], 0), (2, 1)) == 4
    assert hm.h0_energy(hm.build_chain(2, [1, math.sqrt(2)], 0), (0, 0)) == pytest.approx((1 + math.sqrt(2)) / 2, abs=1e-15)
    assert hm.h0_energy(hm.build_chain(3, [1, 1, 1], 0), (0, 0, 0)) == 1.5


def test_level_degeneracy_examples():
    assert hm.level_degeneracy(2, 3) == 4
    assert hm.level_degeneracy(3, 2) == 6
    assert all(hm.level_degeneracy(1, k) == 1 for k in range(10))


def test_enumerate_examples():
    assert hm.enumerate_multi_indices(2, 2) == [(0, 2), (1, 1), (2, 0)]
    assert hm.enumerate_multi_indices(3, 1) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert len(hm.enumerate_multi_indices(2, 3)) == 4


@given(st.integers(1, 5), st.integers(0, 8))
def test_enumeration_matches_degeneracy(n, k):
    idx = hm.enumerate_multi_indices(n, k)
    assert len(idx) == len(set(idx)) == hm.level_degeneracy(n, k)
    assert all(sum(i) == k and min(i) >= 0 for i in idx)
    assert idx == sorted(idx)


def test_multi_index_round_trip():
    assert hm.parse_multi_index("2,0,1") == (2, 0, 1)
    assert hm.format_multi_index((2, 0, 1)) == "2,0,1"
    for bad in ("", "1,-1", "a,b"):
        with pytest.raises(ValidationError):
            hm.parse_multi_index(bad)
