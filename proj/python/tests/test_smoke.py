import os

import numpy as np
import pytest

import hcdr

DATA = os.environ.get("HCDR_DATA_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "data"))


def test_builtin_model_shape():
    m = hcdr.builtin_hcdr9dof()
    assert m.num_cables == 12
    assert m.num_joints == 3
    assert m.dof == 9


def test_mass_matrix_symmetric_positive_definite():
    m = hcdr.builtin_hcdr9dof()
    rng = np.random.default_rng(3)
    q = rng.uniform(-0.3, 0.3, 9)
    M = hcdr.mass_matrix(m, q)
    assert np.allclose(M, M.T, atol=1e-12)
    assert np.linalg.eigvalsh(M).min() > 0


def test_dynamics_round_trip_through_generalized_force():
    m = hcdr.builtin_hcdr9dof()
    q = np.zeros(9)
    q[0], q[2] = 0.05, 0.1
    qd = np.linspace(-0.1, 0.1, 9)
    qdd = np.linspace(0.2, -0.2, 9)
    tau = hcdr.inverse_dynamics(m, q, qd, qdd)
    M = hcdr.mass_matrix(m, q)
    # tau - M qdd is the velocity and gravity part, independent of qdd.
    tau2 = hcdr.inverse_dynamics(m, q, qd, 2 * qdd)
    assert np.allclose(tau2 - tau, M @ qdd, atol=1e-9)


def test_null_space_annihilated_by_structure_matrix():
    m = hcdr.builtin_hcdr9dof()
    A = hcdr.structure_matrix(m, np.zeros(3))
    N = hcdr.null_space(A)
    assert N.shape == (12, 6)
    assert np.linalg.norm(A @ N) <= 1e-10


def test_stiffness_map_grows_with_lower_tensions():
    grid = hcdr.stiffness_map(hcdr.builtin_hcdr9dof(), resolution=6)
    assert grid.shape == (36, 4)
    jk = grid[:, 2].reshape(6, 6)
    assert np.all(np.diff(jk, axis=0) >= 0)
    assert np.all(np.diff(jk, axis=1) >= 0)
    assert grid[:, 3].min() > 0


def test_rmse_constant_offset():
    ref = np.zeros((5, 2))
    path = ref.copy()
    path[:, 0] += 0.25
    r = hcdr.rmse(path, ref)
    assert r["rmse_2d_m"] == pytest.approx(0.25)
    assert r["rmse_z_m"] == 0.0


def test_errors_carry_category():
    with pytest.raises(hcdr.HcdrError, match="alignment"):
        hcdr.rmse(np.zeros((3, 2)), np.zeros((4, 2)))
    with pytest.raises(hcdr.HcdrError, match="parse"):
        hcdr.load_model("{not json")


def test_short_simulation_is_deterministic():
    m = hcdr.builtin_hcdr9dof()
    a = hcdr.simulate(m, "integrated2", t_end=0.1, seed=5, noise_std=np.array([0.5, 0.5, 0.01, 0.01]))
    b = hcdr.simulate(m, "integrated2", t_end=0.1, seed=5, noise_std=np.array([0.5, 0.5, 0.01, 0.01]))
    assert a["x"].shape == (11, 10)
    assert np.array_equal(a["x"], b["x"])
    assert np.array_equal(a["u"], b["u"])
    assert a["report"]["samples"] == 11


def test_case_study_waypoints():
    x, _ = hcdr.case_study_sample(3.0)
    assert x[8] == pytest.approx(0.6, abs=1e-12)
    x, _ = hcdr.case_study_sample(5.0)
    assert x[6] == pytest.approx(0.8, abs=1e-12)
