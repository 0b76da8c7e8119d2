"""
Tests for the Jacobi eigensolver, exact evolution and the RK4 oracle.
"""
import os
import sys
import math
import unittest
import logging

import numpy as np

# Add the project root to the path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from super_jc.core.manifold import basis_vector, enumerate_manifold, excited, ground
from super_jc.core.hamiltonian import ModelParams, RealSymmetricMatrix, build_hamiltonian
from super_jc.core.propagator import (
    eigendecompose,
    evolve,
    excited_probability,
    nyquist_dt,
    occupation_trace,
    rk4_evolve,
)
from super_jc.errors import ConvergenceError, DimensionMismatchError, InvalidParameterError


def _random_case(rng):
    n_total = int(rng.integers(1, 6))
    p = ModelParams(
        delta1=float(rng.uniform(-15, 15)),
        delta2=float(rng.uniform(-15, 15)),
        lambda1=float(rng.uniform(0.5, 2)),
        lambda2=float(rng.uniform(0.5, 2)),
    )
    return enumerate_manifold(n_total), p


class TestEigendecompose(unittest.TestCase):
    """Test the Jacobi eigensolver against numpy."""

    def setUp(self):
        logging.disable(logging.CRITICAL)
        self.rng = np.random.default_rng(2024)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_matches_numpy(self):
        for _ in range(10):
            m, p = _random_case(self.rng)
            h = build_hamiltonian(m, p)
            d = eigendecompose(h)
            np.testing.assert_allclose(d.eigenvalues, np.linalg.eigvalsh(h.entries), atol=1e-10)
            v = d.eigenvectors
            np.testing.assert_allclose(v.T @ v, np.eye(m.dim), atol=1e-12)
            np.testing.assert_allclose(v @ np.diag(d.eigenvalues) @ v.T, h.entries, atol=1e-10)
            self.assertLessEqual(d.sweeps, 100)

    def test_ascending(self):
        d = eigendecompose(build_hamiltonian(enumerate_manifold(4), ModelParams(3.0, -1.0)))
        self.assertTrue(np.all(np.diff(d.eigenvalues) >= 0))

    def test_diagonal_input(self):
        d = eigendecompose(RealSymmetricMatrix(np.diag([3.0, 1.0, 2.0])))
        np.testing.assert_array_equal(d.eigenvalues, [1.0, 2.0, 3.0])
        self.assertEqual(d.sweeps, 0)

    def test_sweep_budget(self):
        h = build_hamiltonian(enumerate_manifold(3), ModelParams(1.0, 2.0))
        with self.assertRaises(ConvergenceError):
            eigendecompose(h, max_sweeps=0)


class TestEvolve(unittest.TestCase):
    """Test exact evolution and the derived observables."""

    def setUp(self):
        logging.disable(logging.CRITICAL)
        self.rng = np.random.default_rng(11)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_identity_at_zero(self):
        m = enumerate_manifold(2)
        d = eigendecompose(build_hamiltonian(m, ModelParams(1.0, 2.0)))
        psi0 = basis_vector(m, ground(2, 0))
        np.testing.assert_array_equal(evolve(d, psi0, 0.0), psi0)

    def test_group_property_and_norm(self):
        m, p = _random_case(self.rng)
        d = eigendecompose(build_hamiltonian(m, p))
        psi0 = basis_vector(m, m.states[0])
        direct = evolve(d, psi0, 7.5)
        stepped = evolve(d, evolve(d, psi0, 3.0), 4.5)
        np.testing.assert_allclose(direct, stepped, atol=1e-10)
        for t in (1.0, 100.0, 5000.0):
            self.assertAlmostEqual(np.linalg.norm(evolve(d, psi0, t)), 1.0, delta=1e-10)

    def test_dimension_mismatch(self):
        d = eigendecompose(build_hamiltonian(enumerate_manifold(2), ModelParams(1.0, 2.0)))
        with self.assertRaises(DimensionMismatchError):
            evolve(d, np.ones(3, dtype=complex), 1.0)

    def test_resonant_single_excitation(self):
        # Both modes resonant: the symmetric photon state couples with sqrt(2)
        m = enumerate_manifold(1)
        d = eigendecompose(build_hamiltonian(m, ModelParams(0.0, 0.0)))
        times = np.linspace(0.0, 10.0, 201)
        p_x = excited_probability(d, m, basis_vector(m, ground(1, 0)), times, chunk_size=50)
        np.testing.assert_allclose(p_x, 0.5 * np.sin(math.sqrt(2) * times) ** 2, atol=1e-12)

    def test_uniform_grid_matches_direct_evaluation(self):
        m = enumerate_manifold(5)
        d = eigendecompose(build_hamiltonian(m, ModelParams(5.298, 7.0)))
        psi0 = basis_vector(m, ground(5, 0))
        step = nyquist_dt(d)
        times = 40000.0 + np.arange(32768) * step
        p_x = excited_probability(d, m, psi0, times)
        for k in (0, 1, 4097, 32767):
            direct = excited_probability(d, m, psi0, [times[k]])[0]
            self.assertAlmostEqual(p_x[k], direct, delta=1e-9)

    def test_nyquist_dt(self):
        d = eigendecompose(build_hamiltonian(enumerate_manifold(1), ModelParams(0.0, 0.0)))
        self.assertAlmostEqual(nyquist_dt(d), math.pi / (4.0 * math.sqrt(2)))
        self.assertTrue(math.isinf(nyquist_dt(eigendecompose(RealSymmetricMatrix([[0.0]])))))

    def test_vacuum_trace(self):
        m = enumerate_manifold(0)
        d = eigendecompose(build_hamiltonian(m, ModelParams(1.0, 2.0)))
        trace = occupation_trace(d, m, basis_vector(m, ground(0, 0)), np.linspace(0, 10, 11))
        np.testing.assert_array_equal(trace.p_excited, np.zeros(11))

    def test_conservation(self):
        for _ in range(5):
            m, p = _random_case(self.rng)
            d = eigendecompose(build_hamiltonian(m, p))
            psi0 = basis_vector(m, m.states[int(self.rng.integers(m.dim))])
            trace = occupation_trace(d, m, psi0, np.linspace(0.0, 200.0, 2001))
            total = trace.p_excited + trace.n_mode1 + trace.n_mode2
            np.testing.assert_allclose(total, m.n_total, atol=1e-9)
            self.assertTrue(np.all((trace.p_excited >= 0) & (trace.p_excited <= 1)))

    def test_state_occupations(self):
        m = enumerate_manifold(2)
        d = eigendecompose(build_hamiltonian(m, ModelParams(4.62, 10.0)))
        states = list(m.states)
        trace = occupation_trace(d, m, basis_vector(m, ground(2, 0)), np.linspace(0, 50, 101), states=states)
        total = sum(trace.state_occupations[s] for s in states)
        np.testing.assert_allclose(total, 1.0, atol=1e-10)
        np.testing.assert_allclose(
            trace.state_occupations[excited(1, 0)] + trace.state_occupations[excited(0, 1)],
            trace.p_excited,
            atol=1e-12,
        )

    def test_unsorted_times(self):
        m = enumerate_manifold(1)
        d = eigendecompose(build_hamiltonian(m, ModelParams(0.0, 0.0)))
        with self.assertRaises(InvalidParameterError):
            occupation_trace(d, m, basis_vector(m, ground(1, 0)), [0.0, 2.0, 1.0])


class TestRK4Oracle(unittest.TestCase):
    """Test the exact propagator against the independent RK4 integrator."""

    def setUp(self):
        logging.disable(logging.CRITICAL)
        self.rng = np.random.default_rng(5)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_randomized_agreement(self):
        for _ in range(20):
            m, p = _random_case(self.rng)
            h = build_hamiltonian(m, p)
            psi0 = basis_vector(m, m.states[int(self.rng.integers(m.dim))])
            exact = evolve(eigendecompose(h), psi0, 50.0)
            integrated = rk4_evolve(h, psi0, 50.0, 1e-5)
            self.assertLessEqual(np.max(np.abs(exact - integrated)), 1e-7)

    def test_rk4_validation(self):
        h = build_hamiltonian(enumerate_manifold(1), ModelParams(0.0, 0.0))
        psi0 = basis_vector(enumerate_manifold(1), ground(1, 0))
        with self.assertRaises(InvalidParameterError):
            rk4_evolve(h, psi0, 1.0, 0.0)
        with self.assertRaises(DimensionMismatchError):
            rk4_evolve(h, np.ones(2, dtype=complex), 1.0, 0.01)
        np.testing.assert_array_equal(rk4_evolve(h, psi0, 0.0, 0.01), psi0)


if __name__ == '__main__':
    unittest.main()
