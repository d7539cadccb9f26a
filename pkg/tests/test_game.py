import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ecoplan import game as gm
from ecoplan.errors import DomainError

G2 = gm.GameParams(2.0, 2.0)
LABELS = ["ESS", "Unstable", "Unstable", "ESS", "Saddle"]


def test_rhs_examples():
    assert gm.rhs((0.0, 0.37), gm.GameParams(3, 5))[0] == 0.0
    assert gm.rhs((0.5, 0.5), G2) == (0.0, 0.0)
    assert gm.rhs((0.5, 0.75), G2) == (0.125, 0.0)


def test_rhs_vanishes_at_equilibria():
    g = gm.GameParams(3.7, 1.9)
    for e in gm.equilibria(g):
        assert gm.rhs(e.point, g) == (0.0, 0.0) or np.allclose(gm.rhs(e.point, g), 0, atol=1e-16)


def test_jacobian_matches_finite_differences():
    g = gm.GameParams(2.5, 4.0)
    rng = np.random.default_rng(0)
    for _ in range(20):
        s = rng.uniform(0, 1, 2)
        h = 1e-6
        num = np.column_stack([
            (np.array(gm.rhs(s + h * e, g)) - np.array(gm.rhs(s - h * e, g))) / (2 * h) for e in np.eye(2)
        ])
        np.testing.assert_allclose(gm.jacobian(s, g), num, atol=1e-8)


def test_jacobian_examples():
    J = gm.jacobian((0, 0), gm.GameParams(7, 3))
    np.testing.assert_array_equal(J, [[-1, 0], [0, -1]])
    J5 = gm.jacobian((0.5, 0.5), G2)
    assert J5[0, 0] == 0 and J5[1, 1] == 0
    assert np.linalg.det(J5) == pytest.approx(-0.25)
    J2 = gm.jacobian((0, 1), gm.GameParams(3, 2))
    assert np.linalg.det(J2) == pytest.approx(2) and np.trace(J2) == pytest.approx(3)


def test_equilibria_u2_v2():
    eqs = gm.equilibria(G2)
    assert [e.label for e in eqs] == LABELS
    assert eqs[4].point == (0.5, 0.5)


def test_equilibria_u2_v4():
    q4 = gm.equilibria(gm.GameParams(2, 4))[3]
    assert (q4.det, q4.trace, q4.label) == (3.0, -4.0, "ESS")


@settings(max_examples=100, deadline=None)
@given(st.floats(1.0, 10.0, exclude_min=True), st.floats(1.0, 10.0, exclude_min=True))
def test_closed_forms(u, v):
    eqs = gm.equilibria(gm.GameParams(u, v))
    expected = [(1, -2), (u - 1, u), (v - 1, v), ((u - 1) * (v - 1), 2 - u - v),
                (-(1 - 1 / v) * (1 - 1 / u), 0)]
    for e, (d, t) in zip(eqs, expected):
        assert abs(e.det - d) <= 1e-12 and abs(e.trace - t) <= 1e-12
    assert [e.label for e in eqs] == LABELS


def test_domain_guard():
    for u, v in [(1, 2), (2, 1), (0.5, 3), (float("nan"), 2)]:
        with pytest.raises(DomainError):
            gm.GameParams(u, v)


def test_integrate_limits():
    assert gm.integrate((0.9, 0.9), G2).label == "Q4"
    assert gm.integrate((0.1, 0.1), G2).label == "Q1"
    fixed = gm.integrate((0.5, 0.5), G2)
    assert fixed.label == gm.UNDECIDED
    assert fixed.final == (0.5, 0.5)


def test_integrate_sign_of_invariant_line():
    # for u = v = 2, p + q - 1 keeps its sign along the flow
    rng = np.random.default_rng(3)
    for p0, q0 in rng.uniform(0.02, 0.98, (20, 2)):
        if abs(p0 + q0 - 1) < 0.02:
            continue
        tr = gm.integrate((p0, q0), G2)
        assert tr.label == ("Q4" if p0 + q0 > 1 else "Q1")


def test_rk4_accuracy_against_fine_step():
    g = gm.GameParams(3.0, 1.5)
    coarse = gm.integrate((0.3, 0.6), g, h=0.01, T=5)
    fine = gm.integrate((0.3, 0.6), g, h=0.001, T=5)
    assert abs(coarse.p[-1] - fine.p[-1]) < 1e-8 and abs(coarse.q[-1] - fine.q[-1]) < 1e-8


def test_edges_invariant():
    g = gm.GameParams(3.0, 4.0)
    for s0 in [(0.0, 0.3), (1.0, 0.3), (0.4, 0.0), (0.4, 1.0)]:
        tr = gm.integrate(s0, g, T=20)
        if s0[0] in (0.0, 1.0):
            assert (tr.p == s0[0]).all()
        else:
            assert (tr.q == s0[1]).all()


def test_symmetry_for_equal_payoffs():
    g = gm.GameParams(2.7, 2.7)
    a = gm.integrate((0.2, 0.7), g, T=20)
    b = gm.integrate((0.7, 0.2), g, T=20)
    np.testing.assert_allclose(a.p, b.q, atol=1e-12)
    np.testing.assert_allclose(a.q, b.p, atol=1e-12)


def test_separatrix():
    sep = gm.separatrix_polyline(G2)
    assert sep.vertices == ((0.0, 1.0), (0.5, 0.5), (1.0, 0.0))
    assert sep.predict(0.2, 0.2) == "Q1"
    assert sep.predict(0.9, 0.9) == "Q4"
    assert sep.distance(0.5, 0.5) == 0.0
    assert sep.distance(0.0, 0.0) == pytest.approx(np.sqrt(0.5))


def test_basin_small_grid():
    b = gm.basin_grid(G2, 2)
    assert b.labels.tolist() == [["Q1", "undecided"], ["undecided", "Q4"]]


def test_basin_half_split():
    b = gm.basin_grid(G2, 50)
    assert abs(b.q4_fraction - 0.5) <= 0.02
    assert b.q4_fraction == pytest.approx(b.q1_fraction)


def test_basin_monotone_in_payoff():
    fr = [gm.basin_grid(gm.GameParams(u, u), 20).q4_fraction for u in (1.5, 2, 3, 5)]
    assert fr == sorted(fr)
    assert gm.basin_grid(gm.GameParams(3, 3), 30).q4_fraction > gm.basin_grid(G2, 30).q4_fraction


def test_basin_monotone_in_each_payoff():
    vals = (1.5, 2, 3, 5)
    F = np.array([[gm.basin_grid(gm.GameParams(u, v), 16).q4_fraction for v in vals] for u in vals])
    assert (np.diff(F, axis=0) >= 0).all() and (np.diff(F, axis=1) >= 0).all()


def test_bad_resolution():
    with pytest.raises(ValueError):
        gm.basin_grid(G2, 1)


def test_integration_error_on_nonfinite():
    from ecoplan.errors import IntegrationError
    g = gm.GameParams(2.0, 2.0)
    object.__setattr__(g, "u", float("inf"))  # bypass validation to poison the vector field
    with pytest.raises(IntegrationError):
        gm.integrate((0.3, 0.4), g)
