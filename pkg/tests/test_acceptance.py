"""End-to-end acceptance criteria.

Each test prints one ``PASS``/``FAIL`` line (visible with ``pytest -s`` or in
``-v`` output via the captured stdout section) and asserts its runtime budget.
"""

import math
import time

import numpy as np
import pytest

from ptchain import focksolver, hamiltonian, normalmodes, perturbation, phasescan, symmetry
from ptchain.hamiltonian import build_chain, enumerate_multi_indices, multi_indices_up_to
from ptchain.normalmodes import Reality


def report(name, ok, elapsed, budget, detail=""):
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    print(f"[{status}] {name}: {detail} ({elapsed:.3f}s / budget {budget}s)")
    assert ok, detail
    assert within, f"runtime {elapsed:.3f}s exceeds {budget}s"


def brute_force_compositions(n, k):
    # independent count: all tuples in the k-box with the right sum
    return sum(1 for t in np.ndindex(*([k + 1] * n)) if sum(t) == k)


def test_01_equal_frequency_reality_pattern():
    t0 = time.perf_counter()
    ok, worst = True, 0.0
    for g in (0.1, 0.3, 0.6):
        spec = normalmodes.mode_frequencies(build_chain(2, [1.0, 1.0], g))
        for m in range(5):
            for n in range(5):
                lv = normalmodes.classify_level(spec, (m, n))
                ok &= (lv.reality is Reality.REAL) == (m == n)
                if m != n:
                    ok &= lv.partner == (n, m)
                    other = normalmodes.level_energy(spec, (n, m))
                    worst = max(worst, abs(lv.energy - other.conjugate()))
    ok &= worst <= 1e-9
    report("1 reality pattern N=2", bool(ok), time.perf_counter() - t0, 1.0, f"max|E_mn-E_nm*|={worst:.2e}")


def test_02_ground_level_real():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(2, 7):
        for g in [round(0.1 * j, 10) for j in range(1, 10)]:
            spec = normalmodes.mode_frequencies(build_chain(n, [1.0] * n, g))
            e = normalmodes.level_energy(spec, (0,) * n)
            worst = max(worst, abs(e.imag) / (1 + abs(e.real)))
    report("2 ground state real", worst <= 1e-9, time.perf_counter() - t0, 1.0, f"max rel|Im E0|={worst:.2e}")


def test_03_degeneracy_count():
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 7):
        for k in range(13):
            expected = brute_force_compositions(n, k) if n <= 4 else len(enumerate_multi_indices(n, k))
            if hamiltonian.level_degeneracy(n, k) != expected:
                bad.append((n, k))
    # the formula itself, spot-checked against a hand count
    bad += [] if hamiltonian.level_degeneracy(3, 2) == 6 else [(3, 2)]
    report("3 level degeneracy", not bad, time.perf_counter() - t0, 1.0, f"mismatches={bad}")


def test_04_fock_vs_normal_modes():
    t0 = time.perf_counter()
    details, ok = [], True
    for n, cutoff, tol in ((2, 16, 1e-6), (3, 8, 1e-4)):
        chain = build_chain(n, [1.0] * n, 0.3)
        fock = focksolver.fock_spectrum(chain, cutoff)
        exact = normalmodes.lowest_levels(normalmodes.mode_frequencies(chain), 6)
        rep = focksolver.match_spectra(fock, exact, 6, tol)
        ok &= rep.passed
        details.append(f"N={n} max={rep.max_distance:.2e}")
    report("4 fock vs exact", ok, time.perf_counter() - t0, 30.0, ", ".join(details))


def test_05_group_structure():
    t0 = time.perf_counter()
    ok, labels = True, {}
    for n in range(2, 8):
        g4, g8 = symmetry.g4_group(n), symmetry.g8_group(n)
        labels[n] = (g4.label, g8.label)
        ok &= g4.order == 4 and g4.label == "D2"
        ok &= g8.order == 8 and g8.label == ("C4v" if n % 2 == 0 else "D2h")
        chain = build_chain(n, [1.0] * n, 0.4)
        gens = symmetry.canonical_generators(n)
        us = [v for k, v in gens.items() if k[0] == "U"]
        ws = [v for k, v in gens.items() if k[0] == "W"]
        for u in us:
            for w in ws:
                ok &= symmetry.commutant_class(symmetry.compose(u, w), chain) is symmetry.CommutantClass.IN_SW
        for w1 in ws:
            for w2 in ws:
                ok &= symmetry.commutant_class(symmetry.compose(w1, w2), chain) is symmetry.CommutantClass.IN_G
    report("5 group structure", bool(ok), time.perf_counter() - t0, 1.0, f"labels={labels}")


def test_06_antiunitary_invariance():
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    bad = []
    for n in range(2, 9):
        for _ in range(5):
            chain = build_chain(n, [1.0] * n, float(rng.uniform(-3, 3)))
            for name, a in symmetry.antiunitary_generators(n).items():
                if not symmetry.antiunitary_invariance_check(a, chain, 1e-14):
                    bad.append((n, name))
    report("6 antiunitary invariance", not bad, time.perf_counter() - t0, 1.0, f"failures={bad}")


def _lowest_nondegenerate_levels(omegas, count):
    chain = build_chain(len(omegas), omegas, 0.0)
    idx = multi_indices_up_to(len(omegas), 3)
    return sorted(idx, key=lambda i: hamiltonian.h0_energy(chain, i))[:count]


def test_07_even_series_and_error_scaling():
    t0 = time.perf_counter()
    ok, worst_odd, ratios = True, 0.0, []
    for omegas in ((1.0, math.sqrt(2)), (1.0, math.sqrt(2), math.sqrt(3))):
        chain0 = build_chain(len(omegas), omegas, 0.0)
        for level in _lowest_nondegenerate_levels(omegas, 4):
            series = perturbation.rs_coefficients(chain0, level, 5, max(level) + 5)
            worst_odd = max(worst_odd, max(abs(c) for c in series.coeffs[1::2]))
            errs = []
            for g in (0.1, 0.05):
                spec = normalmodes.mode_frequencies(chain0.with_g(g))
                # at small g the modes keep the ordering of the oscillators
                exact = normalmodes.level_energy(spec, level)
                errs.append(abs(series.partial_sum(1j * g, 4) - exact))
            ratio = errs[1] / errs[0]
            ratios.append(ratio)
            ok &= abs(ratio / 2**-6 - 1) <= 0.2
    ok &= worst_odd <= 1e-10
    detail = f"max|odd|={worst_odd:.1e} ratio*64 in [{min(ratios) * 64:.3f}, {max(ratios) * 64:.3f}]"
    report("7 even series", bool(ok), time.perf_counter() - t0, 60.0, detail)


def test_08_second_order_ground_coefficient():
    t0 = time.perf_counter()
    chain = build_chain(2, [1.0, math.sqrt(2)], 0.0)
    c2 = perturbation.rs_coefficients(chain, (0, 0), 2, 4).coeffs[2]
    expected = -1.0 / (4.0 * (2.0 + math.sqrt(2.0)))
    # closed-form 2x2 normal modes: E0(lam) = (sqrt(mu+) + sqrt(mu-)) / 2 with
    # mu = (a+b)/2 +- sqrt(((a-b)/2)^2 + lam^2); its lam^2 coefficient is
    # (d/dx) at x=0 of that expression with x = lam^2
    a, b = 1.0, 2.0
    closed = 0.5 * (1 / (2 * math.sqrt(b)) - 1 / (2 * math.sqrt(a))) / (b - a)
    ok = abs(c2 - expected) <= 1e-10 and abs(closed - expected) <= 1e-12
    report("8 E2 ground", ok, time.perf_counter() - t0, 1.0, f"E2={c2:.12f} expected={expected:.12f}")


def test_09_two_mode_boundary():
    t0 = time.perf_counter()
    rng = np.random.default_rng(9)
    worst = 0.0
    for wx, wy in rng.uniform(1, 2, size=(50, 2)):
        g_star = abs(wx**2 - wy**2) / 2
        chain = build_chain(2, [wx, wy], 0.0)
        bp = phasescan.refine_boundary(chain, "g", 0.0, 2.0, iterations=40)
        miss = max(0.0, bp.lo - g_star, g_star - bp.hi)
        worst = max(worst, miss, bp.width - 1e-8 if bp.width > 1e-8 else 0.0)
    report("9 exceptional-point boundary", worst <= 1e-8, time.perf_counter() - t0, 10.0, f"worst={worst:.2e}")


def test_10_spectrum_negation():
    t0 = time.perf_counter()
    cases = [
        (build_chain(2, [1.0, math.sqrt(2)], 0.4), 10),
        (build_chain(2, [1.0, 1.7], 0.9), 10),
        (build_chain(3, [1.0, 1.3, 0.8], 0.5), 6),
        (build_chain(3, [1.0, 1.0, 1.0], 1.0), 6),
    ]
    results = [focksolver.spectrum_negation_check(c, cut, 1e-8) for c, cut in cases]
    report("10 spectral reflection", all(results), time.perf_counter() - t0, 30.0, f"results={results}")
