"""Tests for configuration sampling, separation constants and the
Large/Small classification."""

import math

import numpy as np
import pytest

from latticeforge import bisectors as bs
from latticeforge import minkowski as mk
from latticeforge.bisectors import ConfigConstants
from latticeforge.lorentz import dist_points as h_dist_points

ANGLE = 0.3
R = 0.5
R0 = 1.0


def small_batch(seed=0, n=64, **kwargs):
    rng = np.random.default_rng(seed)
    return bs.sample_batch(rng, n, ANGLE, R0, **kwargs)


def frame_gram(W):
    sig = mk.form_vector(W.shape[-2])
    return np.einsum("nik,i,nil->nkl", W.astype(np.longdouble), sig,
                     W.astype(np.longdouble)).astype(float)


def test_sampler_frames_orthonormal():
    b = small_batch(1, n=200)
    for name in ("H1", "H2", "H3", "g1", "g2", "g3", "g4"):
        W = getattr(b, name)
        k = W.shape[-1]
        target = np.diag([1.0] * (k - 1) + [-1.0])
        scale = np.abs(W).max(axis=(1, 2)) ** 2
        err = np.abs(frame_gram(W) - target).max(axis=(1, 2))
        assert np.all(err <= 1e-12 * np.maximum(scale, 1.0)), name


def test_sampler_pins_distances():
    b = small_batch(2, n=200, s23=1.25, s2=(0.5, 1.0))
    assert np.allclose(mk.dist_points(b.q2, b.p3), 1.25, atol=1e-10)
    assert np.all(b.s2 >= 0.5) and np.all(b.s2 <= 1.0)
    assert np.allclose(mk.dist_points(b.p2, b.q2), b.s2, atol=1e-10)
    assert np.allclose(mk.dist_points(b.q1, b.p2), b.s12, atol=1e-9)
    assert np.allclose(mk.dist_points(b.q3, b.p4), b.s34, atol=1e-9)


def test_sampler_geodesic_distances_match_feet():
    b = small_batch(3, n=200)
    assert np.allclose(mk.dist_subspaces_frames(b.g2, b.g3), b.s23,
                       atol=1e-8)
    assert np.allclose(mk.dist_subspaces_frames(b.g1, b.g2), b.s12,
                       atol=1e-8)
    assert np.allclose(mk.dist_subspaces_frames(b.g3, b.g4), b.s34,
                       atol=1e-8)


def test_sampler_consecutive_geodesics_at_least_R0():
    b = small_batch(4, n=200)
    for a, c in ((b.q1, b.p2), (b.q2, b.p3), (b.q3, b.p4)):
        assert np.all(mk.dist_points(a, c) >= R0 - 1e-9)


def test_sampler_containments():
    b = small_batch(5, n=100)
    sig = mk.form_vector(6)
    eps4 = np.array([1.0, 1.0, 1.0, -1.0])

    def contained(g, H):
        coef = np.einsum("nik,i,nil->nkl", H, sig, g)
        proj = np.einsum("nik,k,nkl->nil", H, eps4, coef)
        scale = np.abs(g).max(axis=(1, 2))
        return np.abs(proj - g).max(axis=(1, 2)) <= 1e-10 * scale

    assert np.all(contained(b.g1, b.H1))
    assert np.all(contained(b.g2, b.H2))
    assert np.all(contained(b.g3, b.H3))
    assert np.all(contained(b.g4, b.H3))
    # the shared geodesics lie in both neighbours
    assert np.all(contained(b.g2, b.H1))
    assert np.all(contained(b.g3, b.H2))


def test_sampler_dihedral_angles_respect_floor():
    b = small_batch(6, n=100)
    assert np.all(b.angle12 >= ANGLE - 1e-12)
    assert np.all(b.angle23 >= ANGLE - 1e-12)
    assert np.all(b.angle12 <= math.pi / 2 + 1e-12)


def test_sample_valid_enforces_condition4():
    rng = np.random.default_rng(7)
    b = bs.sample_valid(rng, 100, ANGLE, R0, R)
    assert len(b) == 100
    assert np.all(bs.dist_H1_H3(b) >= R)


def test_sample_valid_infeasible():
    rng = np.random.default_rng(8)
    with pytest.raises(bs.SamplerInfeasible):
        # d(H1, H3) <= d(gamma_2, gamma_3) = R0 < r: acceptance is zero
        bs.sample_valid(rng, 50, ANGLE, R0, 3.0, s23=R0, max_tries=5)


def test_materialized_configuration_validates():
    rng = np.random.default_rng(9)
    b = bs.sample_valid(rng, 8, ANGLE, R0, R, s2=(0.2, 1.0), s3=(0.2, 1.0),
                        s12=(R0, R0 + 1.0), s23=(R0, R0 + 1.0),
                        s34=(R0, R0 + 1.0))
    C = b.configuration(0, ANGLE, R, R0)
    report = bs.validate(C)
    assert report["ok"], report
    f = bs.feet(C)
    assert h_dist_points(f["q2"], f["p3"]) == pytest.approx(b.s23[0],
                                                           abs=1e-6)
    assert h_dist_points(f["p2"], f["q2"]) == pytest.approx(b.s2[0],
                                                           abs=1e-6)
    assert h_dist_points(f["q1"], f["p2"]) == pytest.approx(b.s12[0],
                                                           abs=1e-6)


def toy_constants():
    return ConfigConstants(angle_floor=ANGLE, r=R, R0=R0, R_star=1.0,
                           R1=2.0, rho1=0.2, R2=2.5, rho2=0.1, R3=2.2,
                           rho3=0.15)


def test_constants_aggregates():
    c = toy_constants()
    assert c.R4 == 2.5
    assert c.rho4 == 0.1
    with pytest.raises(ValueError):
        ConfigConstants(angle_floor=0.0, r=R, R0=R0, R_star=1, R1=1,
                        rho1=1, R2=1, rho2=1, R3=1, rho3=1)


def test_classify_thresholds():
    consts = toy_constants()
    rng = np.random.default_rng(10)
    # H2's vertex segment is d(q2, p3) = s23
    b = bs.sample_valid(rng, 4, ANGLE, R0, R, s23=3.0, s2=0.4, s3=0.4)
    C = b.configuration(0, ANGLE, R, R0)
    assert bs.classify(C, consts, ("H", 2)) == bs.LARGE
    b = bs.sample_valid(rng, 4, ANGLE, R0, R, s23=1.2, s2=0.4, s3=0.4)
    C = b.configuration(0, ANGLE, R, R0)
    assert bs.classify(C, consts, ("H", 2)) == bs.SMALL
    # gamma_2's segment is d(p2, q2) = s2
    b = bs.sample_valid(rng, 4, ANGLE, R0, R, s2=2.5, s3=0.4)
    C = b.configuration(0, ANGLE, R, R0)
    assert bs.classify(C, consts, ("gamma", 2)) == bs.LARGE
    with pytest.raises(ValueError):
        bs.classify(C, consts, ("H", 5))
    with pytest.raises(ValueError):
        bs.classify(C, consts, ("edge", 2))


def test_classify_isometry_invariant():
    consts = toy_constants()
    rng = np.random.default_rng(11)
    b = bs.sample_valid(rng, 4, ANGLE, R0, R, s23=3.0, s2=0.4, s3=0.4)
    C = b.configuration(0, ANGLE, R, R0)
    E = np.eye(6)
    M = mk.translation_along(E[5], E[2], 0.8)
    rot = np.eye(6)
    th = 0.6
    rot[0, 0] = rot[3, 3] = math.cos(th)
    rot[0, 3] = -math.sin(th)
    rot[3, 0] = math.sin(th)
    M = M @ rot
    assert mk.preserves_form(M)
    moved = bs.Configuration(
        H1=C.H1.transform(M), H2=C.H2.transform(M), H3=C.H3.transform(M),
        g1=C.g1.transform(M), g2=C.g2.transform(M), g3=C.g3.transform(M),
        g4=C.g4.transform(M), angle_floor=ANGLE, r=R, R0=R0)
    assert (bs.classify(moved, consts, ("H", 2))
            == bs.classify(C, consts, ("H", 2)))
    assert (bs.classify(moved, consts, ("gamma", 2))
            == bs.classify(C, consts, ("gamma", 2)))


def test_bisector_side_convention():
    b = small_batch(12, n=100, s2=(1.0, 2.0))
    u = bs._bis_normal(b.p2, b.q2)
    # p2 lies on the positive-phi side (Bis^-), q2 on the negative side
    assert np.all(mk.mdot(b.p2.astype(np.longdouble), u) > 0)
    assert np.all(mk.mdot(b.q2.astype(np.longdouble), u) < 0)


def test_find_R_star_separates():
    res = bs.find_R_star(ANGLE, R, R0, samples=400, audit=1200, seed=0)
    assert res.value >= R0
    assert res.violations == 0
    assert res.rho > 0
    # fresh draw at the threshold stays separated
    rng = np.random.default_rng(123)
    batch = bs.sample_batch(rng, 500, ANGLE, R0, s23=res.value)
    assert float(np.min(bs.dist_H1_H3(batch))) >= R


def test_find_R_star_distance_grows_with_separation():
    rng = np.random.default_rng(13)
    lo = bs.sample_batch(np.random.default_rng(13), 400, ANGLE, R0, s23=1.5)
    hi = bs.sample_batch(np.random.default_rng(13), 400, ANGLE, R0, s23=4.0)
    # common random numbers: per-sample monotone in the pinned distance
    assert np.all(bs.dist_H1_H3(hi) >= bs.dist_H1_H3(lo) - 1e-9)


def test_find_L1_margins_hold():
    res = bs.find_L1(ANGLE, R, R0, samples=400, audit=1200, seed=1)
    assert res.violations == 0
    assert res.rho > 0
    rng = np.random.default_rng(77)
    batch = bs.sample_valid(rng, 400, ANGLE, R0, R,
                            s2=(res.value, res.value + 2.0))
    m_g1, m_H3, d_bis = bs._margins_L1(batch)
    assert float(np.min(m_g1)) > 0
    assert float(np.min(m_H3)) > 0
    assert float(np.min(d_bis)) > 0


def test_find_L2_and_L3_margins_hold():
    l1 = bs.find_L1(ANGLE, R, R0, samples=400, audit=1200, seed=2)
    l2 = bs.find_L2(ANGLE, R, R0, l1.value, samples=400, audit=1200, seed=3)
    l3 = bs.find_L3(ANGLE, R, R0, l1.value, samples=400, audit=1200, seed=4)
    for res in (l2, l3):
        assert not res.vacuous
        assert res.violations == 0
        assert res.rho > 0


def test_L2_L3_vacuous_when_r_exceeds_R0():
    l2 = bs.find_L2(ANGLE, 1.5, R0, 2.0, samples=100, audit=100, seed=5)
    l3 = bs.find_L3(ANGLE, 1.5, R0, 2.0, samples=100, audit=100, seed=5)
    for res in (l2, l3):
        assert res.vacuous
        assert res.rho == math.inf
        assert res.audit_samples == 0


def test_compute_constants_end_to_end():
    c = bs.compute_constants(ANGLE, R, R0, samples=400, audit=1200, seed=0)
    assert c.violations == 0
    assert not c.vacuous
    assert c.R4 == max(c.R2, c.R3)
    assert c.rho4 == min(c.rho1, c.rho2, c.rho3)
    assert c.rho4 > 0
    assert c.R1 > 0 and c.R_star >= R0
