import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonlift.circuit import (
    BeamSplitter,
    Circuit,
    PhaseShifter,
    beam_splitter,
    compose,
    haar_random_unitary,
    mesh_circuit,
    mesh_pairs,
    mesh_parameters,
    phase_shifter,
    reck_decompose,
)
from photonlift.errors import ValidationError
from photonlift.linalg import unitarity_error

angles = st.floats(-10, 10, allow_nan=False)


def test_phase_shifter_examples():
    phi = 0.81
    np.testing.assert_allclose(phase_shifter(1, 1, phi), [[np.exp(1j * phi)]])
    np.testing.assert_array_equal(phase_shifter(4, 3, 0.0), np.eye(4))
    np.testing.assert_allclose(phase_shifter(2, 2, math.pi), np.diag([1, -1]), atol=1e-15)


def test_phase_shifter_index_errors():
    with pytest.raises(ValidationError):
        phase_shifter(3, 0, 0.1)
    with pytest.raises(ValidationError):
        phase_shifter(3, 4, 0.1)
    with pytest.raises(ValidationError):
        phase_shifter(3, 1, math.inf)


def test_beam_splitter_zero_angle_is_identity():
    np.testing.assert_array_equal(beam_splitter(3, 1, 3, 0.0, 1.2), np.eye(3))


def test_beam_splitter_block():
    theta, phi = 0.3, 1.1
    b = beam_splitter(3, 1, 3, theta, phi)
    c, s = math.cos(theta), math.sin(theta)
    expected = np.array(
        [[c, 0, np.exp(1j * phi) * s], [0, 1, 0], [-np.exp(-1j * phi) * s, 0, c]]
    )
    np.testing.assert_allclose(b, expected, atol=1e-16)


def test_beam_splitter_errors():
    with pytest.raises(ValidationError):
        beam_splitter(2, 1, 1, 0.1)
    with pytest.raises(ValidationError):
        beam_splitter(2, 1, 3, 0.1)


def test_balanced_splitter_from_elements(hadamard):
    c = Circuit(2, (BeamSplitter(1, 2, math.pi / 4, 0.0), PhaseShifter(2, math.pi)))
    assert np.max(np.abs(compose(c) - hadamard)) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(theta=angles, phi=angles, m=st.integers(2, 6), data=st.data())
def test_elements_are_unitary(theta, phi, m, data):
    a = data.draw(st.integers(1, m))
    b = data.draw(st.integers(1, m).filter(lambda x: x != a))
    assert unitarity_error(beam_splitter(m, a, b, theta, phi)) <= 1e-12
    assert unitarity_error(phase_shifter(m, a, phi)) <= 1e-12


def test_compose_examples():
    np.testing.assert_array_equal(compose(Circuit(3)), np.eye(3))
    c = Circuit(1, (PhaseShifter(1, 0.4), PhaseShifter(1, 1.1)))
    np.testing.assert_allclose(compose(c), [[np.exp(1.5j)]], atol=1e-15)


def test_compose_order_is_light_order():
    a = BeamSplitter(1, 2, 0.3, 0.2)
    b = BeamSplitter(2, 3, 0.7, -0.5)
    expected = b.matrix(3) @ a.matrix(3)
    np.testing.assert_allclose(compose(Circuit(3, (a, b))), expected, atol=1e-15)


def test_compose_matches_dense_product(rng):
    m = 5
    elements = []
    for _ in range(40):
        a, b = rng.choice(np.arange(1, m + 1), size=2, replace=False)
        elements.append(BeamSplitter(int(a), int(b), *rng.uniform(-3, 3, 2)))
        elements.append(PhaseShifter(int(a), rng.uniform(-3, 3)))
    dense = np.eye(m)
    for el in elements:
        dense = el.matrix(m) @ dense
    s = compose(Circuit(m, tuple(elements)))
    np.testing.assert_allclose(s, dense, atol=1e-13)
    assert unitarity_error(s) <= 1e-10 * len(elements)


def test_circuit_validation():
    with pytest.raises(ValidationError):
        Circuit(2, (BeamSplitter(1, 3, 0.1),))
    with pytest.raises(ValidationError):
        Circuit(2, (BeamSplitter(2, 2, 0.1),))
    with pytest.raises(ValidationError):
        Circuit(2, (PhaseShifter(1, math.nan),))


def test_reck_single_mode():
    c = reck_decompose([[np.exp(0.9j)]])
    assert c.elements == (PhaseShifter(1, pytest.approx(0.9)),)


@pytest.mark.parametrize("m", range(1, 7))
def test_reck_identity(m):
    c = reck_decompose(np.eye(m))
    assert np.max(np.abs(compose(c) - np.eye(m))) <= 1e-10
    assert all(el.theta == 0 for el in c.elements if isinstance(el, BeamSplitter))


@pytest.mark.parametrize("m", range(2, 9))
def test_reck_round_trip_and_counts(m):
    for seed in range(25):
        s = haar_random_unitary(m, seed=seed)
        c = reck_decompose(s)
        assert np.max(np.abs(compose(c) - s)) <= 1e-8
        assert c.count(BeamSplitter) == m * (m - 1) // 2
        assert c.count(PhaseShifter) <= m


def test_reck_round_trip_m5_many_seeds():
    worst = max(
        np.max(np.abs(compose(reck_decompose(s)) - s))
        for s in (haar_random_unitary(5, seed=k) for k in range(120))
    )
    assert worst <= 1e-8


def test_reck_of_composed_circuit(rng):
    # decomposing a composed circuit reproduces the matrix, not the elements
    m = 4
    elements = [BeamSplitter(1, 3, 0.4, 0.1), PhaseShifter(2, 0.3), BeamSplitter(4, 2, 1.2, -0.7)]
    s = compose(Circuit(m, tuple(elements)))
    assert np.max(np.abs(compose(reck_decompose(s)) - s)) <= 1e-8


def test_reck_rejects_non_unitary():
    with pytest.raises(ValidationError):
        reck_decompose(np.ones((3, 3)))


def test_mesh_layout_matches_reck():
    m = 5
    s = haar_random_unitary(m, seed=4)
    c = reck_decompose(s)
    params = mesh_parameters(c)
    assert params.shape == (m * m,)
    np.testing.assert_allclose(compose(mesh_circuit(m, params)), s, atol=1e-12)
    assert len(mesh_pairs(m)) == m * (m - 1) // 2


@pytest.mark.parametrize("m", [1, 2, 5, 9])
def test_haar_unitary_and_deterministic(m):
    for seed in range(10):
        s = haar_random_unitary(m, seed=seed)
        assert unitarity_error(s) <= 1e-12
        np.testing.assert_array_equal(s, haar_random_unitary(m, seed=seed))


def test_haar_single_mode_unimodular():
    z = haar_random_unitary(1, seed=3)[0, 0]
    assert abs(abs(z) - 1) < 1e-15


def test_haar_phase_distribution_is_uniform():
    # |S11|^2 ~ Beta(1, m-1) has mean 1/m; Haar on U(1) is a uniform phase
    m = 3
    vals = np.array([abs(haar_random_unitary(m, seed=k)[0, 0]) ** 2 for k in range(3000)])
    assert abs(vals.mean() - 1 / m) < 0.02
    phases = np.array([np.angle(haar_random_unitary(1, seed=k)[0, 0]) for k in range(3000)])
    assert abs(np.mean(np.cos(phases))) < 0.05 and abs(np.mean(np.sin(phases))) < 0.05


@pytest.mark.parametrize("m", range(1, 7))
def test_mesh_matrix_matches_composed_mesh(rng, m):
    from photonlift.circuit import mesh_matrix

    x = rng.uniform(-4, 4, m * m)
    np.testing.assert_allclose(mesh_matrix(m, x), compose(mesh_circuit(m, x)), atol=1e-15)


@pytest.mark.parametrize("m", range(1, 7))
def test_mesh_matrices_match_single_meshes(rng, m):
    from photonlift.circuit import mesh_matrices, mesh_matrix

    xs = rng.uniform(-4, 4, (5, m * m))
    stack = mesh_matrices(m, xs)
    for x, s in zip(xs, stack):
        np.testing.assert_allclose(s, mesh_matrix(m, x), atol=1e-15)
