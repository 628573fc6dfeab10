import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chardisc.errors import NonDominantWeight
from chardisc.root_system import SUPPORTED_GROUPS, build_tables, dual_weight, weyl_dimension
from chardisc.sampling import sample_haar
from chardisc.torus_chars import (
    TWO_PI,
    abs_weyl_denominator,
    character_ratio,
    character_value,
    character_values,
    character_weight_sum,
    dominant_weights_up_to,
    torus_point,
    weight_phase,
    weyl_denominator,
)

angles = st.floats(0.0, TWO_PI, allow_nan=False, exclude_max=True)


def haar_nonsingular(t, n, seed, floor=1e-6):
    pts = sample_haar(t, 4 * n, seed).points
    return pts[abs_weyl_denominator(t, pts) >= floor][:n]


def test_torus_point_canonical():
    th = torus_point([-1e-300, TWO_PI, 7.0])
    assert np.all((th >= 0) & (th < TWO_PI))
    assert th[1] == 0.0


def test_weight_phase_examples():
    assert weight_phase((0, 0), (1.3, 2.0)) == 0.0
    assert weight_phase((1, 1), (0.3, 0.5)) == pytest.approx(0.8, abs=1e-15)
    assert cmath.exp(1j * weight_phase((2,), (math.pi,))) == pytest.approx(1.0, abs=1e-12)


def test_weyl_denominator_examples():
    a1 = build_tables("A1")
    assert abs(weyl_denominator(a1, [math.pi])) < 1e-12
    assert weyl_denominator(a1, [math.pi / 2]) == pytest.approx(2j, abs=1e-12)
    assert abs(weyl_denominator(build_tables("A2"), [0.0, 0.0])) == 0.0


@pytest.mark.parametrize("group", SUPPORTED_GROUPS)
def test_denominator_modulus_matches(group):
    t = build_tables(group)
    th = np.random.default_rng(1).uniform(0, TWO_PI, (50, t.r))
    np.testing.assert_allclose(np.abs(weyl_denominator(t, th)), abs_weyl_denominator(t, th), atol=1e-10)


def test_character_examples():
    a1 = build_tables("A1")
    assert character_value(a1, (1,), [math.pi / 2]).value == pytest.approx(0.0, abs=1e-12)
    assert character_value(a1, (2,), [math.pi / 2]).value == pytest.approx(-1.0, abs=1e-12)
    theta = 0.7
    assert character_value(a1, (1,), [theta]).value == pytest.approx(2 * math.cos(theta))
    for g in SUPPORTED_GROUPS:
        t = build_tables(g)
        assert character_value(t, (0,) * t.r, np.full(t.r, 0.4)).value == pytest.approx(1.0)


@pytest.mark.parametrize("group", SUPPORTED_GROUPS)
def test_identity_gives_dimension(group):
    t = build_tables(group)
    for lam in dominant_weights_up_to(t, 2):
        cv = character_value(t, lam, np.zeros(t.r))
        assert cv.method == "weight_sum"
        assert cv.value == weyl_dimension(t, lam)


def test_singular_point_uses_weight_sum():
    a2 = build_tables("A2")
    th = [2 * math.pi / 3, 4 * math.pi / 3]  # central: every root phase is 0 mod 2pi
    cv = character_value(a2, (1, 0), th)
    assert cv.method == "weight_sum"
    assert cv.value == pytest.approx(3 * cmath.exp(2j * math.pi / 3), abs=1e-12)


def test_nondominant_rejected():
    with pytest.raises(NonDominantWeight):
        character_value(build_tables("A2"), (1, -1), [0.1, 0.2])


@pytest.mark.parametrize("group", SUPPORTED_GROUPS)
def test_branch_agreement_at_haar_points(group):
    t = build_tables(group)
    pts = haar_nonsingular(t, 50, 11)
    for lam in dominant_weights_up_to(t, 3):
        diff = np.abs(character_ratio(t, lam, pts) - character_weight_sum(t, lam, pts))
        assert diff.max() <= 1e-7


@pytest.mark.parametrize("group", SUPPORTED_GROUPS)
def test_weyl_invariance_and_conjugation(group):
    t = build_tables(group)
    rng = np.random.default_rng(5)
    lams = dominant_weights_up_to(t, 3)
    pts = haar_nonsingular(t, 50, 5)
    for th in pts:
        lam = lams[rng.integers(len(lams))]
        w = t.weyl[rng.integers(len(t.weyl))]
        # W acts on angles by the inverse transpose of its weight-space matrix
        s = np.array(w.matrix, dtype=float)
        th_w = torus_point(np.linalg.solve(s.T, th))
        v = character_value(t, lam, th).value
        assert character_value(t, lam, th_w).value == pytest.approx(v, abs=1e-8)
        vd = character_value(t, dual_weight(t, lam), th).value
        assert vd == pytest.approx(v.conjugate(), abs=1e-8)
        assert abs(v) <= weyl_dimension(t, lam) + 1e-8


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["A1", "A2", "C2", "G2"]), st.lists(angles, min_size=2, max_size=2),
       st.lists(st.integers(0, 3), min_size=2, max_size=2))
def test_character_bounded_by_dimension(group, theta, coords):
    t = build_tables(group)
    lam = tuple(coords[: t.r])
    v = character_values(t, lam, np.array(theta[: t.r]))
    assert abs(v) <= weyl_dimension(t, lam) + 1e-8


def test_vectorised_matches_scalar():
    t = build_tables("G2")
    th = np.vstack([np.zeros(2), np.random.default_rng(2).uniform(0, TWO_PI, (20, 2))])
    vec = character_values(t, (1, 1), th)
    for row, v in zip(th, vec):
        assert character_value(t, (1, 1), row).value == pytest.approx(v, abs=1e-9)


def test_dominant_weight_enumeration():
    assert dominant_weights_up_to(1, 5, include_trivial=False) == [(i,) for i in range(1, 6)]
    assert len(dominant_weights_up_to(2, 4, include_trivial=False)) == 14
    assert dominant_weights_up_to(3, 0, include_trivial=False) == []
    for r in (1, 2, 3):
        for d in range(6):
            assert len(dominant_weights_up_to(r, d)) == math.comb(d + r, r)


@pytest.mark.parametrize("group", ["A1", "A2"])
def test_orthonormality(group, grid_for):
    t = build_tables(group)
    grid = grid_for(group)
    lams = dominant_weights_up_to(t, 3)
    chars = np.array([character_values(t, lam, grid.nodes) for lam in lams])
    gram = (chars * grid.weights) @ chars.conj().T
    assert np.abs(gram - np.eye(len(lams))).max() <= 1e-2
