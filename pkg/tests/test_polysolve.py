"""Tests for system construction and the homotopy path tracker."""

import numpy as np
import pytest

from teneig.homotopy import (
    ACCEPT_RESIDUAL,
    CONVERGED,
    TrackerConfig,
    _materialize,
    group_into_classes,
    newton_refine,
    track_all,
)
from teneig.polysys import PolySystem, build_eigen_system, build_shifted_system
from teneig.tensor import EigenPair, Tensor, canonicalize, expected_count

CFG = TrackerConfig()


def rand_tensor(m, n, rng):
    arr = rng.standard_normal((n,) * m) + 1j * rng.standard_normal((n,) * m)
    return Tensor(m, n, arr)


def diag_tensor(a, m):
    a = np.asarray(a, dtype=complex)
    n = a.size
    arr = np.zeros((n,) * m, dtype=complex)
    for i in range(n):
        arr[(i,) * m] = a[i]
    return Tensor(m, n, arr)


def test_eigen_system_shape_and_degrees():
    rng = np.random.default_rng(1)
    for m, n in [(3, 2), (4, 3), (5, 2)]:
        sysA = build_eigen_system(rand_tensor(m, n, rng))
        assert sysA.neq == n and sysA.nvars == n + 1
        assert sysA.degrees == (m - 1,) * n
        assert sysA.total_degree == (m - 1) ** n
        # every equation homogeneous of degree m-1 in (x, lam)
        for eq in sysA.equations:
            assert all(sum(expo) == m - 1 for expo, _ in eq)


def test_eigen_system_evaluation_matches_contraction():
    rng = np.random.default_rng(2)
    A = rand_tensor(3, 3, rng)
    sysA = build_eigen_system(A)
    x = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    lam = complex(rng.standard_normal(), rng.standard_normal())
    u = np.concatenate([x, [lam]])
    from teneig.tensor import apply_power
    want = apply_power(A, x) - lam ** (A.m - 2) * x
    assert np.max(np.abs(sysA.evaluate(u) - want)) < 1e-12 * (1 + np.max(np.abs(want)))

    # jacobian agrees with finite differences
    J = sysA.jacobian(u)
    h = 1e-7
    for j in range(4):
        e = np.zeros(4)
        e[j] = h
        fd = (sysA.evaluate(u + e) - sysA.evaluate(u - e)) / (2 * h)
        assert np.max(np.abs(J[:, j] - fd)) < 1e-5 * (1 + np.max(np.abs(J[:, j])))


def test_shifted_system_is_square():
    rng = np.random.default_rng(3)
    A = rand_tensor(3, 2, rng)
    sysS = build_shifted_system(A, 0.7 + 0.2j)
    assert sysS.neq == sysS.nvars == 2
    x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    from teneig.tensor import apply_power
    want = apply_power(A, x) - (0.7 + 0.2j) * x
    assert np.max(np.abs(sysS.evaluate(x) - want)) < 1e-12 * (1 + np.max(np.abs(want)))


def test_polysystem_validation():
    with pytest.raises(ValueError):
        PolySystem(1, 2, ((((3, 0), 1.0),),), (2,))  # term degree above declared
    with pytest.raises(ValueError):
        PolySystem(2, 2, ((((1, 0), 1.0),),), (1, 1))  # count mismatch
    with pytest.raises(ValueError):
        build_eigen_system(Tensor(2, 9, np.eye(9, dtype=complex)))  # n > 8 at m=2


def test_start_solutions_satisfy_start_system():
    rng = np.random.default_rng(4)
    for m, n in [(3, 2), (4, 2), (3, 3)]:
        sysA = build_eigen_system(rand_tensor(m, n, rng))
        hom = _materialize(sysA, CFG)
        pts = hom.start_points()
        assert len(pts) == (m - 1) ** n
        for u0 in pts:
            H0, _ = hom.value_jac(u0, 0.0)
            assert np.max(np.abs(H0)) < 1e-12


def test_converged_endpoint_residuals():
    rng = np.random.default_rng(6)
    for m, n in [(3, 2), (3, 3)]:
        A = rand_tensor(m, n, rng)
        outs = track_all(build_eigen_system(A), CFG)
        assert all(o.status == CONVERGED for o in outs)
        for o in outs:
            assert o.residual <= ACCEPT_RESIDUAL
        cls, dg = group_into_classes(outs, A, CFG)
        assert dg.failed_paths == 0
        assert sum(c.multiplicity for c in cls) == expected_count(m, n)
        assert all(c.multiplicity == 1 for c in cls)
        assert dg.trivial_paths == 1


def test_seed_robustness():
    rng = np.random.default_rng(123)
    A = rand_tensor(4, 2, rng)
    sysA = build_eigen_system(A)
    cfg_b = TrackerConfig(seed=987654321)
    cls_a, _ = group_into_classes(track_all(sysA, CFG), A, CFG)
    cls_b, _ = group_into_classes(track_all(sysA, cfg_b), A, cfg_b)
    assert len(cls_a) == len(cls_b)
    for a, b in zip(cls_a, cls_b):
        assert abs(a.representative.lam - b.representative.lam) < 1e-6
        assert np.max(np.abs(a.representative.x - b.representative.x)) < 1e-6
        assert a.multiplicity == b.multiplicity


def test_cluster_orbit_structure():
    # each lam != 0 class collects exactly m-2 endpoints whose lam-tilde
    # values differ by powers of exp(2*pi*i/(m-2))
    rng = np.random.default_rng(42)
    A = rand_tensor(5, 2, rng)
    m, k = 5, 3
    outs = track_all(build_eigen_system(A), CFG)
    groups = {}
    for o in outs:
        u = o.endpoint
        x, lt = u[:2], u[2]
        if np.linalg.norm(x) <= 1e-8 * np.linalg.norm(u):
            continue
        cp = canonicalize(EigenPair(lt ** k, x), m)
        key = tuple(np.round([cp.lam.real, cp.lam.imag]
                             + list(np.round(cp.x, 6).view(float)), 6))
        groups.setdefault(key, []).append((x.copy(), lt))
    assert len(groups) == expected_count(5, 2)
    zeta = np.exp(2j * np.pi / k)
    for members in groups.values():
        assert len(members) == k
        x0, _ = members[0]
        j = int(np.argmax(np.abs(x0)))
        descaled = [lt * (x0[j] / x[j]) for x, lt in members]
        hits = set()
        for lt in descaled:
            r = lt / descaled[0]
            jz = int(np.argmin(np.abs(zeta ** np.arange(k) - r)))
            assert abs(zeta ** jz - r) < 1e-6
            hits.add(jz)
        assert hits == set(range(k))


def test_newton_refine_fixed_point_and_recovery():
    A = diag_tensor([1.0, 1.0], 3)
    sysA = build_eigen_system(A)
    patch = np.array([0.0, 0.0, 1.0], dtype=complex)  # chart lam-tilde = 1
    exact = np.array([1.0, 0.0, 1.0], dtype=complex)  # x=(1,0), lam-tilde=1
    out = newton_refine(sysA, exact, patch=patch)
    assert not out.singular
    assert np.max(np.abs(out.point - exact)) < 1e-12

    perturbed = exact + 1e-4
    rec = newton_refine(sysA, perturbed, patch=patch)
    assert np.max(np.abs(rec.point - exact)) < 1e-12
    assert rec.residual < 1e-12

    # the trivial solution x=0 is nonsingular when lam-tilde != 0
    tr = newton_refine(sysA, np.array([1e-3, -1e-3, 0.9 + 0.1j]), patch=patch)
    assert not tr.singular
    assert np.max(np.abs(tr.point[:2])) < 1e-12

    # square system needs no patch
    sysS = build_shifted_system(A, 1.0)
    sq = newton_refine(sysS, np.array([1.0 + 1e-5, 1e-5], dtype=complex))
    assert not sq.singular
    assert np.max(np.abs(sq.point - [1.0, 0.0])) < 1e-12


def test_matrix_case_accounting():
    rng = np.random.default_rng(7)
    M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    A = Tensor(2, 4, M)
    outs = track_all(build_eigen_system(A), CFG)
    assert len(outs) == 2 ** 4
    cls, dg = group_into_classes(outs, A, CFG)
    # Bezout 2^n splits as n finite roots + 1 trivial + rest at infinity
    assert len(cls) == 4
    assert dg.trivial_paths == 1
    assert dg.at_infinity == 2 ** 4 - 4 - 1
    assert not dg.positive_dimensional
    lams = sorted((c.representative.lam for c in cls), key=lambda z: (z.real, z.imag))
    want = sorted(np.linalg.eigvals(M), key=lambda z: (z.real, z.imag))
    assert np.max(np.abs(np.array(lams) - np.array(want))) < 1e-8


def test_matrix_identity_eigenspace():
    A = Tensor(2, 3, np.eye(3, dtype=complex))
    cls, dg = group_into_classes(track_all(build_eigen_system(A), CFG), A, CFG)
    assert dg.positive_dimensional
    assert len(cls) == 3
    for c in cls:
        assert abs(c.representative.lam - 1.0) < 1e-8


def test_zero_tensor_positive_dimensional():
    A = diag_tensor([0.0, 0.0], 3)
    cls, dg = group_into_classes(track_all(build_eigen_system(A), CFG), A, CFG)
    assert dg.positive_dimensional
    for c in cls:
        assert abs(c.representative.lam) < 1e-8


def test_multiplicity_division_m4():
    # m=4 clusters carry m-2 = 2 paths per class
    A = diag_tensor([1.0, 1.0], 4)
    outs = track_all(build_eigen_system(A), CFG)
    cls, dg = group_into_classes(outs, A, CFG)
    assert dg.degenerate_clusters == 0
    assert sum(c.multiplicity for c in cls) == 4
    for c in cls:
        assert c.cluster_size == 2 * c.multiplicity


def test_tracker_config_validation():
    with pytest.raises(ValueError):
        TrackerConfig(initial_step=-0.1)
    with pytest.raises(ValueError):
        TrackerConfig(gamma=0.5)  # |gamma| must be 1
    fresh = CFG.fresh()
    assert fresh.seed != CFG.seed
    assert fresh.cluster_radius == CFG.cluster_radius
