import itertools
import math

import numpy as np
import pytest

from quditmagic import dense, pauli, stabilizer, toric
from quditmagic.config import RunConfig


def test_build_rejects_small():
    with pytest.raises(toric.GeometryTooSmall):
        toric.build_toric(2, 1, 3)
    with pytest.raises(toric.GeometryTooSmall):
        toric.build_toric(1, 2, 2)


@pytest.mark.parametrize("q,Lx,Ly", [(2, 2, 2), (3, 2, 2), (2, 3, 2), (6, 2, 3)])
def test_code_group_order(q, Lx, Ly):
    lat, group = toric.build_toric(q, Lx, Ly)
    assert lat.n_edges == 2 * Lx * Ly
    assert group.order == q ** (2 * Lx * Ly - 2)


def test_all_generators_commute_dense():
    lat, group = toric.build_toric(2, 2, 2)
    mats = [pauli.to_dense(g) for g in group.gens]
    for A, B in itertools.combinations(mats, 2):
        assert np.allclose(A @ B, B @ A, atol=1e-10)


def test_logical_z_pair_commutes_with_code():
    lat, group = toric.build_toric(3, 2, 3)
    z1, z2 = toric.logical_z_pair(lat)
    for g in group.gens:
        assert pauli.commutation_exponent(z1, g) == 0
        assert pauli.commutation_exponent(z2, g) == 0
    # the loops are not themselves in the code group
    assert stabilizer.member(group, z1) == stabilizer.MEMBER_NO


@pytest.mark.parametrize("q", [2, 3])
def test_ground_space_dimension(q):
    code = toric.build_toric(q, 2, 2)
    rank = stabilizer.StabilizerProjectionState(code.group).rank
    assert rank == q * q


@pytest.mark.parametrize("q", [2, 3])
def test_ground_state_sectors(q):
    code = toric.build_toric(q, 2, 2)
    lat = code.lattice
    z1, z2 = toric.logical_z_pair(lat)
    omega = np.exp(2j * np.pi / q)
    states = {}
    for s1 in range(q):
        for s2 in range(q):
            v = toric.ground_state(code, (s1, s2))
            assert abs(np.linalg.norm(v) - 1) < 1e-10
            # every code stabilizer has expectation exactly 1
            for g in code.group.gens:
                assert abs(np.vdot(v, pauli.apply_to_state(g, v)) - 1) < 1e-9
            # logical sector eigenvalues
            assert abs(np.vdot(v, pauli.apply_to_state(z1, v)) - omega ** s1) < 1e-9
            assert abs(np.vdot(v, pauli.apply_to_state(z2, v)) - omega ** s2) < 1e-9
            states[(s1, s2)] = v
    # sectors are orthogonal
    for k1, k2 in itertools.combinations(states, 2):
        assert abs(np.vdot(states[k1], states[k2])) < 1e-9


def test_ground_state_matches_projector_oracle():
    # independent check: project a fixed vector with dense stabilizer projectors
    code = toric.build_toric(2, 2, 2)
    S = toric.ground_group(code, (0, 0))
    dim = 2 ** 8
    v = np.zeros(dim, dtype=complex)
    v[0] = 1.0
    for g, d in stabilizer.independent_generators(S):
        M = pauli.to_dense(g)
        proj = sum(np.linalg.matrix_power(M, k) for k in range(d)) / d
        v = proj @ v
    v /= np.linalg.norm(v)
    w = toric.ground_state(code, (0, 0))
    assert abs(abs(np.vdot(v, w)) - 1) < 1e-9


def test_anyon_string_trivial_type_identity():
    lat, _ = toric.build_toric(3, 3, 4)
    path = toric.primal_path(lat, [(0, 0), (1, 0), (2, 0)])
    s = toric.anyon_string(lat, toric.AnyonType(0, 0), path)
    assert not any(s.a) and not any(s.b)


def test_anyon_string_requires_matching_path():
    lat, _ = toric.build_toric(2, 3, 4)
    primal = toric.primal_path(lat, [(0, 0), (1, 0)])
    with pytest.raises(toric.InvalidPath):
        toric.anyon_string(lat, toric.AnyonType(0, 1), primal)
    dual = toric.dual_path(lat, [(0, 0), (1, 0)])
    with pytest.raises(toric.InvalidPath):
        toric.anyon_string(lat, toric.AnyonType(1, 0), dual)


def test_path_rejects_nonadjacent():
    lat, _ = toric.build_toric(2, 4, 4)
    with pytest.raises(toric.InvalidPath):
        toric.primal_path(lat, [(0, 0), (2, 0)])
    with pytest.raises(toric.InvalidPath):
        toric.dual_path(lat, [(0, 0), (1, 1)])
    with pytest.raises(toric.InvalidPath):
        toric.primal_walk(lat, (0, 0), ["+z"])


def test_open_string_syndrome():
    # an open e-string anticommutes with exactly its two endpoint vertices
    q = 3
    lat, group = toric.build_toric(q, 3, 4)
    path = toric.primal_path(lat, [(0, 0), (1, 0), (2, 0)])
    s = toric.anyon_string(lat, toric.AnyonType(1, 0), path)
    hits = []
    for y in range(4):
        for x in range(3):
            r = pauli.commutation_exponent(s, toric.vertex_operator(lat, x, y))
            if r != 0:
                hits.append((x, y, r))
    assert sorted((x, y) for x, y, _ in hits) == [(0, 0), (2, 0)]
    # and it commutes with every plaquette
    for y in range(4):
        for x in range(3):
            assert pauli.commutation_exponent(s, toric.plaquette_operator(lat, x, y)) == 0


def test_noncontractible_loop_commutes_everywhere():
    lat, group = toric.build_toric(2, 3, 3)
    loop = toric.primal_path(lat, [(x, 0) for x in range(3)] + [(0, 0)])
    s = toric.anyon_string(lat, toric.AnyonType(1, 0), loop)
    for g in group.gens:
        assert pauli.commutation_exponent(s, g) == 0


def test_walks_match_vertex_paths():
    lat, _ = toric.build_toric(2, 3, 4)
    byv = toric.primal_path(lat, [(0, 0), (1, 0), (1, 1)])
    byw = toric.primal_walk(lat, (0, 0), ["+x", "+y"])
    assert byv == byw
    byv2 = toric.dual_path(lat, [(0, 0), (1, 0)])
    byw2 = toric.dual_walk(lat, (0, 0), ["+x"])
    assert byv2 == byw2


@pytest.mark.parametrize("q", [2, 3])
def test_s_matrix_trivial_second_type(q):
    code = toric.build_toric(q, 2, 2)
    for a in range(q):
        for b in range(q):
            s = toric.s_matrix_element(code, toric.AnyonType(a, b), toric.AnyonType(0, 0))
            assert abs(s - 1.0) < 1e-12


@pytest.mark.parametrize("q", [2, 3])
def test_s_matrix_group_vs_dense_and_oracle(q):
    code = toric.build_toric(q, 2, 2)
    lat = code.lattice
    for a1, b1, a2, b2 in itertools.product(range(q), repeat=4):
        t1, t2 = toric.AnyonType(a1, b1), toric.AnyonType(a2, b2)
        s_group = toric.s_matrix_element(code, t1, t2)
        s_dense = toric.s_matrix_dense(code, t1, t2)
        s_oracle = toric.crossing_phase_oracle(lat, t1, t2)
        assert abs(s_group - s_dense) < 1e-9
        assert abs(s_group - s_oracle) < 1e-12


def test_s_matrix_deformation_invariance():
    code = toric.build_toric(3, 3, 3)
    lat = code.lattice
    base = toric.smatrix_paths(lat)
    deformed = toric.smatrix_paths(lat, deform_lower=True)
    group = toric.ground_group(code)
    for a1, b1, a2, b2 in [(1, 0, 0, 1), (1, 1, 2, 1), (2, 0, 0, 2)]:
        t1, t2 = toric.AnyonType(a1, b1), toric.AnyonType(a2, b2)
        s1 = toric.s_matrix_element(code, t1, t2, base, group)
        s2 = toric.s_matrix_element(code, t1, t2, deformed, group)
        assert abs(s1 - s2) < 1e-12


def test_smatrix_paths_need_room():
    lat = toric.ToricLattice(q=2, Lx=2, Ly=2)
    with pytest.raises(toric.GeometryTooSmall):
        toric.smatrix_paths(lat, deform_lower=True)


def test_crossing_numbers_default_geometry():
    lat = toric.ToricLattice(q=3, Lx=3, Ly=3)
    x1, x2 = toric.crossing_numbers(toric.smatrix_paths(lat))
    assert (x1, x2) == (1, -1)


@pytest.mark.parametrize("q,Lx,Ly", [(2, 2, 2), (2, 3, 2), (3, 2, 2)])
def test_quantization_check(q, Lx, Ly):
    report = toric.quantization_check(toric.build_toric(q, Lx, Ly))
    assert report.ok
    assert report.max_deviation < 1e-9
    assert report.convention in (-1, 1)
    assert len(report.entries) == q ** 4


def test_disk_reduction_is_locally_determined():
    # reduction of the dense ground state to a disk equals the projection
    # state of the supported subgroup: disks carry no extra information
    code = toric.build_toric(2, 2, 2)
    lat = code.lattice
    disk = sorted({lat.h_edge(0, 0), lat.v_edge(0, 0), lat.h_edge(0, 1), lat.v_edge(1, 0)})
    psi = toric.ground_state(code)
    rho = dense.partial_trace(dense.density_of(psi), 2, lat.n_edges, disk)
    sub = stabilizer.restrict(
        stabilizer.supported_subgroup(toric.ground_group(code), disk), disk
    )
    sigma = stabilizer.sps_dense(stabilizer.StabilizerProjectionState(sub))
    assert np.allclose(rho, sigma, atol=1e-9)


def test_ring_annulus_requires_space():
    with pytest.raises(toric.GeometryTooSmall):
        toric.ring_annulus(toric.ToricLattice(q=2, Lx=3, Ly=3))


def test_ring_annulus_structure():
    lat = toric.ToricLattice(q=2, Lx=3, Ly=4)
    ring = toric.ring_annulus(lat)
    assert len(ring.edges) == 8
    assert len(ring.thickened) == 9
    assert len(ring.strings) == 4
    assert all(len(b) == 1 for b in ring.balls)


def test_annulus_extreme_points_q2():
    code = toric.build_toric(2, 4, 4)
    report = toric.annulus_extreme_points(code)
    assert report.ok, report
    assert report.point_count == 4
    assert report.l_rank == 2
    assert report.vacuum_ok
    assert report.max_commutator < 1e-9
    assert report.pauli_connected
    assert report.anyon_matched
    assert report.min_match_fidelity > 1 - 1e-9
    assert report.dense_checked
    assert sorted(report.assignments) == [(i, j) for i in range(2) for j in range(2)]


def test_annulus_disk_region_is_not_annulus():
    code = toric.build_toric(2, 4, 4)
    lat = code.lattice
    disk = sorted({lat.h_edge(0, 0), lat.v_edge(0, 0), lat.v_edge(1, 0), lat.h_edge(0, 1)})
    with pytest.raises(toric.NotAnAnnulus):
        toric.annulus_extreme_points(code, annulus=disk, strings=[])
