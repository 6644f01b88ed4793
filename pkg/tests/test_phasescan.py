import math

import numpy as np
import pytest

from ptchain import phasescan as ps
from ptchain.errors import ValidationError
from ptchain.hamiltonian import build_chain

P = ps.Phase


def test_classify_point_examples():
    assert ps.classify_point(build_chain(2, [1, math.sqrt(2)], 0.3)) is P.ALL_REAL
    assert ps.classify_point(build_chain(2, [1, math.sqrt(2)], 0.7)) is P.SOME_COMPLEX
    for g in (0.01, 0.5, 2.0):
        assert ps.classify_point(build_chain(2, [1, 1], g)) is P.SOME_COMPLEX
    assert ps.classify_point(build_chain(3, [1, 2, 3], 0.0)) is P.ALL_REAL


def test_exceptional_point_itself():
    # mu coalesce at g = 0.5 for (1, sqrt 2); must classify without error
    assert ps.classify_point(build_chain(2, [1, math.sqrt(2)], 0.5)) in (P.ALL_REAL, P.SOME_COMPLEX)


def test_scan_frontier_tracks_two_mode_curve():
    base = build_chain(2, [1, 1], 0.0)
    g_axis = ps.grid(0, 1, 21)
    w_axis = ps.grid(1, 2, 21)
    d = ps.scan(base, ("g", g_axis), ("omega_2", w_axis))
    for j, w2 in enumerate(w_axis):
        g_star = (w2**2 - 1) / 2
        for i, g in enumerate(g_axis):
            if abs(g - g_star) > 1e-9:
                expected = P.ALL_REAL if g < g_star else P.SOME_COMPLEX
                assert d.cells[i][j] is expected, (g, w2)


def test_scan_is_independent_of_workers():
    base = build_chain(3, [1, 1.2, 1.4], 0.0)
    a = ps.scan(base, ("g", ps.grid(0, 0.6, 7)), ("omega_3", ps.grid(1, 2, 5)), workers=1)
    b = ps.scan(base, ("g", ps.grid(0, 0.6, 7)), ("omega_3", ps.grid(1, 2, 5)), workers=4)
    assert a.cells == b.cells and list(a.rows()) == list(b.rows())


def test_scan_trivial_cases():
    base = build_chain(2, [1, 1.5], 0.4)
    d = ps.scan(base, ("g", [0.4]), ("omega_1", [1.0]))
    assert d.cells == ((ps.classify_point(base),),)
    d = ps.scan(base, ("g", [0.0]), ("omega_2", ps.grid(0.5, 3, 9)))
    assert all(c is P.ALL_REAL for row in d.cells for c in row)


def test_scan_rejects_bad_axes():
    base = build_chain(2, [1, 1], 0.0)
    for a1, a2 in (("g", "g"), ("g", "omega_3"), ("x", "g")):
        with pytest.raises(ValidationError):
            ps.scan(base, (a1, [0.1]), (a2, [1.0]))


def test_refine_boundary_examples():
    bp = ps.refine_boundary(build_chain(2, [1, math.sqrt(2)], 0.0), "g", 0.0, 1.0, iterations=30)
    assert bp.lo <= 0.5 <= bp.hi and bp.width < 1e-9
    assert bp.lo_label is P.ALL_REAL and bp.hi_label is P.SOME_COMPLEX
    bp = ps.refine_boundary(build_chain(2, [1, 2], 0.0), "g", 0.0, 3.0)
    assert bp.lo <= 1.5 <= bp.hi
    with pytest.raises(ValidationError):
        ps.refine_boundary(build_chain(2, [1, 2], 0.0), "g", 0.0, 0.1)


def test_refine_along_frequency_axis():
    base = build_chain(2, [1, 1], 0.3)
    bp = ps.refine_boundary(base, "omega_2", 1.0, 2.0, iterations=40)
    # g = (w2^2 - 1) / 2 -> w2 = sqrt(1 + 2 g)
    assert abs(bp.value - math.sqrt(1.6)) < 1e-9
    assert bp.fixed == {"g": 0.3, "omega_1": 1.0}


def test_boundaries_from_diagram():
    base = build_chain(2, [1, 1], 0.0)
    d = ps.scan(base, ("g", ps.grid(0, 1, 11)), ("omega_2", ps.grid(1.2, 1.6, 3)))
    r = ps.boundaries_from_diagram(base, d, 35)
    assert len(r.boundary_points) == 3
    for bp in r.boundary_points:
        w2 = bp.fixed["omega_2"]
        assert abs(bp.value - ps.two_by_two_boundary(1.0, w2)) < 1e-9


def test_two_by_two_boundary():
    assert ps.two_by_two_boundary(1, math.sqrt(2)) == pytest.approx(0.5)
    assert ps.two_by_two_boundary(2, 1) == 1.5


@pytest.mark.parametrize("omegas", [(1.0, 2.0), (1.0, math.sqrt(2)), (1.3, 1.7), (2.0, 1.1)])
def test_exact_exceptional_points_on_every_backend(omegas, backend, monkeypatch):
    # coalescing modes carry ~sqrt(eps) noise whose direction depends on the kernel
    from ptchain import normalmodes

    monkeypatch.setattr(ps, "mode_frequencies", lambda c, tol=None: normalmodes.mode_frequencies(c, tol, backend))
    g_star = ps.two_by_two_boundary(*omegas)
    for g in (g_star, np.nextafter(g_star, 0), np.nextafter(g_star, 9)):
        assert ps.classify_point(build_chain(2, omegas, g)) is not P.UNSTABLE
    bp = ps.refine_boundary(build_chain(2, omegas, 0.0), "g", 0.0, 2 * g_star, iterations=45)
    assert bp.lo <= g_star <= bp.hi


def test_symmetrize_pairs_gives_exact_conjugates():
    from ptchain import normalmodes

    spec = normalmodes.mode_frequencies(build_chain(4, [1, 1.1, 0.9, 1.3], 0.8))
    sym = normalmodes.symmetrize_pairs(spec)
    for k, p in enumerate(sym.pairing):
        assert sym.mu[k] == np.conj(sym.mu[p])
    assert np.max(np.abs(sym.mu - spec.mu)) <= spec.tol
