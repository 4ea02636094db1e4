"""End-to-end acceptance suite.

Each test pins one headline capability with its time budget: exact
quaternion arithmetic, reflections, the orthogonal-pair solver,
realification, the certified separation constants, the combination
certificate, the bisector-chain audit, the noncoherence witness, and
byte-identical CLI determinism.
"""

import math
import random
import time

import numpy as np
import pytest

from latticeforge import bisectors as bi
from latticeforge import cli
from latticeforge import combine as cb
from latticeforge import freegrp as fg
from latticeforge import hermitian as hm
from latticeforge.numbers import QuadraticField
from latticeforge.quaternions import Quat, QuatAlgebra
from latticeforge.lorentz import realify

QQ = QuadraticField(1)
K2 = QuadraticField(2)
HAM = QuatAlgebra(QQ, -1, -1)
MAT = QuatAlgebra(QQ, 1, 1)
DK2 = QuatAlgebra(K2, K2.gen(), -1)


def rand_quat(alg, rng, span=6):
    def comp():
        if alg.field.d == 1:
            return alg.field(rng.randint(-span, span), 0)
        return alg.field(rng.randint(-span, span),
                         rng.randint(-span, span))
    return Quat(alg, comp(), comp(), comp(), comp())


# -- 1: quaternion arithmetic ------------------------------------------

def test_quaternion_norm_and_regular_representation():
    start = time.time()
    rng = random.Random(101)
    for alg in (HAM, DK2):
        for _ in range(500):
            lam, mu = rand_quat(alg, rng), rand_quat(alg, rng)
            prod = lam * mu
            # norm multiplicativity, exact
            assert prod.norm() == lam.norm() * mu.norm()
            # left-regular representation: mat(lam) applied to the
            # component vector of mu gives the components of lam * mu
            m = lam.left_regular_matrix()
            cm = mu.components()
            oracle = [sum((m[r][c] * cm[c] for c in range(1, 4)),
                          m[r][0] * cm[0]) for r in range(4)]
            assert list(prod.components()) == oracle
    assert time.time() - start < 5.0


# -- 2: reflections ----------------------------------------------------

def _rand_regular(M, rng):
    while True:
        v = M.vector([rand_quat(M.algebra, rng, span=2)
                      for _ in range(M.dim)])
        if v.is_regular():
            return v


def test_reflection_suite():
    start = time.time()
    rng = random.Random(103)
    mods = [hm.SkewHermitianModule.diagonal(HAM, [HAM.i(), HAM.j(),
                                                  HAM.k()]),
            hm.SkewHermitianModule.diagonal(DK2, [DK2.i(), DK2.j(),
                                                  DK2.k()])]
    checked = 0
    for M in mods:
        e0, e1 = M.basis_vector(0), M.basis_vector(1)
        while checked < 100 or (checked < 200 and M is mods[1]):
            v = _rand_regular(M, rng)
            u = _rand_regular(M, rng)
            ru = hm.reflect(v, u)
            # involution and form preservation, exact
            assert hm.reflect(v, ru) == u
            assert hm.eval_form(ru, ru) == hm.eval_form(u, u)
            checked += 1

        def commute_on(u, v, w):
            return hm.reflect(u, hm.reflect(v, w)) \
                == hm.reflect(v, hm.reflect(u, w))

        # commutation criterion: orthogonal pair and colinear pair
        # commute on random probes; a generic pair does not
        probe = _rand_regular(M, rng)
        assert hm.eval_form(e0, e1).is_zero()
        assert commute_on(e0, e1, probe)
        assert commute_on(e0, e0.scale(M.algebra(3)), probe)
        v = M.vector([M.algebra.one(), M.algebra.one(), M.algebra.zero()])
        assert not hm.eval_form(e0, v).is_zero()
        assert any(not commute_on(e0, v, _rand_regular(M, rng))
                   for _ in range(12))
    assert checked >= 200
    assert time.time() - start < 5.0


# -- 3: orthogonal-pair solver -----------------------------------------

def test_orthogonal_pair_solver_random_instances():
    start = time.time()
    rng = random.Random(107)
    imag = [DK2.i(), DK2.j(), DK2.k(), DK2.i() + DK2.j(),
            DK2.j() + DK2.k()]
    solved = 0
    failures = []
    while solved + len(failures) < 100:
        entries = [imag[rng.randrange(len(imag))] for _ in range(3)]
        M = hm.SkewHermitianModule.diagonal(DK2, entries)
        p1 = _rand_regular(M, rng)
        p2 = _rand_regular(M, rng)
        try:
            u1, u2, trace = hm.lemma_L_solve(p1, p2)
        except (hm.DegenerateForm, hm.NullVectorError):
            continue
        except hm.SolverFailure as exc:
            # a failure must carry its scaling trace for the report
            assert "scalings" in str(exc)
            failures.append(str(exc))
            continue
        # all three orthogonality relations, exact
        assert hm.eval_form(p1, u1).is_zero()
        assert hm.eval_form(p2, u2).is_zero()
        assert hm.eval_form(u1, u2).is_zero()
        solved += 1
    assert solved > 0
    assert time.time() - start < 10.0


# -- 4: realification --------------------------------------------------

def test_realification_split_case_exact_gram():
    # the one-dimensional module over the split algebra with a negative
    # entry: exact cross-term bookkeeping gives twice the textbook
    # normalization, phi(x beta + y alpha) = -4xy
    start = time.time()
    R = realify(hm.SkewHermitianModule.diagonal(MAT, [MAT.i()]))
    assert np.allclose(R.phi, [[0, -2], [-2, 0]], atol=1e-12)
    assert R.signature == (1, 1)
    assert time.time() - start < 5.0


@pytest.mark.xfail(strict=True,
                   reason="the factor-1 normalization gives [[0,-2],"
                          "[-2,0]]; the -2xy display is off by two")
def test_realification_split_case_textbook_normalization():
    R = realify(hm.SkewHermitianModule.diagonal(MAT, [MAT.i()]))
    assert np.allclose(R.phi, [[0, -1], [-1, 0]], atol=1e-12)


def test_realification_positive_case_and_signature():
    start = time.time()
    # positive entry: phi = 2(x^2 + y^2) exactly
    R = realify(hm.SkewHermitianModule.diagonal(MAT, [MAT.k()]))
    assert np.allclose(R.phi, [[2, 0], [0, 2]], atol=1e-12)
    # diag(k, k, i) is Lorentzian (5, 1); eigenvalues as the oracle
    R6 = realify(hm.SkewHermitianModule.diagonal(
        MAT, [MAT.k(), MAT.k(), MAT.i()]))
    lam = np.linalg.eigvalsh(R6.phi)
    assert int(np.sum(lam > 1e-9)) == 5
    assert int(np.sum(lam < -1e-9)) == 1
    assert R6.signature == (5, 1)
    assert time.time() - start < 5.0


# -- 5: separation constants over the parameter grid -------------------

def test_constants_grid_zero_violations():
    start = time.time()
    grid_alpha = (math.pi / 6, math.pi / 4, math.pi / 3)
    grid_r = (0.2, 0.5, 1.0)
    grid_R0 = (0.5, 1.0, 2.0)
    for alpha in grid_alpha:
        for r in grid_r:
            for R0 in grid_R0:
                c = bi.compute_constants(alpha, r, R0, samples=2000,
                                         audit=10_000, seed=11)
                assert c.violations == 0, (alpha, r, R0)
                assert c.R_star > 0
                if not c.vacuous:
                    assert c.rho4 > 0
                    assert c.R4 >= c.R1 >= 0
    assert time.time() - start < 1800.0


# -- shared fixtures for the combination criteria ----------------------

class SchottkyConstants:
    """Constants for the bundled scenario's parameters (angle floor
    0.674741, r 0.4, R0 arccosh(25/16) = 1.016348, seed 11), as
    emitted by the constants search; regenerate with
    latticeforge constants --alpha 0.674741 --r 0.4 --R0 1.016348
    --seed 11."""

    angle_floor = 0.674741
    R_star = 2.14575783116665
    R1 = 3.007349380202632
    rho1 = 1.4017149177505164
    R2 = 5.56848811970393
    rho2 = 0.6660078326016031
    R3 = 5.397414660757216
    rho3 = 0.7773106471234108
    R4 = 5.56848811970393
    rho4 = 0.6660078326016031


@pytest.fixture(scope="module")
def schottky():
    return cb.make_schottky_scenario(steps=24)


@pytest.fixture(scope="module")
def schottky_phi(schottky):
    return cb.build_phi(schottky)


# -- 6: combination certificate ----------------------------------------

def test_certificate_depth_four_and_broken_scenario(schottky,
                                                    schottky_phi):
    start = time.time()
    C = SchottkyConstants
    cert = cb.certify(schottky, C, depth=4, faith_len=8)
    assert cert.status == "pass"
    assert cert.witness is None
    delta = min(2 * C.rho4, 0.4, schottky.R0)
    assert cert.delta == pytest.approx(delta)
    assert cert.min_separation[0] >= delta
    faith = cert.faithfulness_report
    assert faith["ok"] and faith["max_len"] == 8
    # every nonempty reduced word in four letters up to length 8
    assert faith["checked"] == sum(8 * 7 ** (n - 1) for n in range(1, 9))

    broken = cb.make_broken_scenario(steps=1)
    cert_b = cb.certify(broken, C, depth=2, faith_len=4)
    assert cert_b.status == "fail"
    assert cert_b.witness is not None
    assert time.time() - start < 900.0


# -- 7: bisector-chain audit -------------------------------------------

def test_bisector_chain_audit_length_eight(schottky_phi):
    start = time.time()
    C = SchottkyConstants
    rep = cb.bisector_chain_audit(schottky_phi, C, radius=3, max_len=8)
    assert rep["ok"], rep["failures"]
    assert rep["n_failures"] == 0
    assert rep["paths"] > 50_000
    assert rep["min_margin"] >= C.rho4
    assert rep["min_end_distance"] >= 2 * C.rho4
    assert time.time() - start < 900.0


# -- 8: noncoherence witness -------------------------------------------

def test_noncoherence_witness_rank_growth():
    start = time.time()
    psi = fg.ZHom(1, 1)
    ranks = []
    for n in (2, 4, 6, 8):
        g = fg.kernel_ball(psi, n)
        # brute-force oracle: fold the enumerated kernel words directly
        direct = fg.fold(list(fg.kernel_words(psi, n)))
        assert g.is_isomorphic(direct)
        ranks.append(g.rank)
    assert ranks == sorted(set(ranks))
    bounds = [fg.h2_lower_bound(psi, n, 2, 2) for n in (2, 4, 6, 8)]
    assert all(hi >= lo for lo, hi in zip(bounds, bounds[1:]))
    assert bounds[-1] > 0
    assert time.time() - start < 60.0


# -- 9: CLI determinism ------------------------------------------------

def test_cli_runs_are_byte_identical(tmp_path, schottky):
    scen = tmp_path / "scenario.json"
    scen.write_text(schottky.to_json())
    consts = tmp_path / "consts.csv"
    assert cli.main(["constants", "--alpha", "0.674741", "--r", "0.4",
                     "--R0", "1.016348", "--samples", "150",
                     "--audit", "300", "--seed", "11",
                     "--out", str(consts)]) == 0

    runs = {
        "constants": ["constants", "--alpha", "0.674741", "--r", "0.4",
                      "--R0", "1.016348", "--samples", "150",
                      "--audit", "300", "--seed", "11"],
        "certify": ["certify", str(scen), "--depth", "1",
                    "--faith-len", "4", "--constants", str(consts)],
        "witness": ["witness", "--psi", "1,1", "--ns", "2,4,6,8"],
    }
    for name, args in runs.items():
        o1 = tmp_path / f"{name}_1.out"
        o2 = tmp_path / f"{name}_2.out"
        assert cli.main(args + ["--out", str(o1)]) in (0, 1)
        assert cli.main(args + ["--out", str(o2)]) in (0, 1)
        assert o1.read_bytes() == o2.read_bytes(), name
