import math

import numpy as np
import pytest

from ptchain import perturbation as pt
from ptchain.errors import UnsupportedError
from ptchain.hamiltonian import build_chain, coupling_pattern

V = pt.Verdict
SQ2, SQ3 = math.sqrt(2), math.sqrt(3)


def exact_real_coupling(omegas, level, lam):
    # Hermitian family: real lam, modes from numpy's symmetric eigensolver;
    # for small lam the sorted modes follow the sorted oscillators
    m = np.diag(np.square(omegas)) + lam * coupling_pattern(len(omegas))
    om = np.sqrt(np.linalg.eigvalsh(m))
    order = np.argsort(np.argsort(omegas))
    return float(np.dot(np.asarray(level) + 0.5, om[order]))


def test_ground_state_coefficients():
    chain = build_chain(2, [1, SQ2], 0.0)
    c = pt.rs_coefficients(chain, (0, 0), 4, 4).coeffs
    assert c[0] == pytest.approx((1 + SQ2) / 2, abs=1e-15)
    assert c[1] == 0
    assert c[2] == pytest.approx(-1 / (4 * (2 + SQ2)), abs=1e-12)


@pytest.mark.parametrize("omegas", [(1.0, SQ2), (1.0, SQ2, SQ3), (0.7, 1.9, 1.3)])
@pytest.mark.parametrize("level_no", range(3))
def test_series_against_hermitian_oracle(omegas, level_no):
    chain = build_chain(len(omegas), omegas, 0.0)
    level = tuple(1 if j == level_no - 1 else 0 for j in range(len(omegas))) if level_no else (0,) * len(omegas)
    s = pt.rs_coefficients(chain, level, 6, max(level) + 6)
    errs = [abs(s.partial_sum(lam, 5) - exact_real_coupling(omegas, level, lam)) for lam in (0.1, 0.05)]
    # first omitted term is lam^6
    assert abs(errs[1] / errs[0] * 64 - 1) < 0.05
    assert max(abs(x) for x in s.coeffs[1::2]) <= 1e-12


def test_odd_order_check():
    chain = build_chain(2, [1, SQ2], 0.0)
    s = pt.rs_coefficients(chain, (0, 0), 3, 3)
    assert pt.odd_order_check(s, 1e-10)
    injected = pt.SeriesCoefficients(s.level, (s.coeffs[0], 1e-3, s.coeffs[2], s.coeffs[3]))
    assert not pt.odd_order_check(injected, 1e-10)
    assert pt.odd_order_check(pt.rs_coefficients(chain, (0, 0), 1, 1), 1e-10)


def test_degenerate_level_rejected():
    with pytest.raises(pt.DegenerateLevelError):
        pt.rs_coefficients(build_chain(2, [1, 1], 0.0), (1, 0), 2, 4)
    with pytest.raises(UnsupportedError):
        pt.reality_predictor(build_chain(2, [1, 2], 0.0), (2, 0))


def test_degenerate_first_order_one_quantum():
    preds = pt.degenerate_first_order(build_chain(2, [1, 1], 0.3), 1)
    assert [p.verdict for p in preds] == [V.PREDICT_COMPLEX] * 2
    assert np.allclose(preds[0].first_order_splitting, [-0.5, 0.5])


def test_degenerate_first_order_ground():
    (p,) = pt.degenerate_first_order(build_chain(2, [1, 1], 0.3), 0)
    assert not p.degenerate and p.verdict is V.PREDICT_REAL


def test_degenerate_first_order_two_quanta():
    preds = {p.level: p for p in pt.degenerate_first_order(build_chain(2, [1, 1], 0.3), 2)}
    assert np.allclose(preds[(1, 1)].first_order_splitting, [-1, 0, 1])
    assert preds[(1, 1)].verdict is V.INCONCLUSIVE
    assert preds[(2, 0)].verdict is V.PREDICT_COMPLEX
    assert preds[(0, 2)].verdict is V.PREDICT_COMPLEX


def test_first_order_shift_matches_exact_modes():
    # small g: E ~ E0 + i g * level_shift for the equal-frequency chain
    from ptchain import normalmodes as nm

    g = 1e-4
    chain = build_chain(3, [1, 1, 1], g)
    spec = nm.mode_frequencies(chain)
    for p in pt.degenerate_first_order(chain, 2):
        e = nm.level_energy(spec, p.level)
        assert abs(e.imag - g * p.level_shift) < 1e-6


def test_reality_predictor_examples():
    assert pt.reality_predictor(build_chain(2, [1, 1], 0.1), (2, 0)).verdict is V.PREDICT_COMPLEX
    for level in ((0, 0), (1, 0), (0, 1), (2, 1)):
        assert pt.reality_predictor(build_chain(2, [1, SQ2], 0.1), level).verdict is V.PREDICT_REAL
    assert pt.reality_predictor(build_chain(3, [1, 1, 1], 0.1), (0, 0, 0)).verdict is V.PREDICT_REAL


def test_cutoff_too_small():
    with pytest.raises(ValueError):
        pt.rs_coefficients(build_chain(2, [1, SQ2], 0.0), (1, 0), 4, 3)
