"""
Tests for the manifold Hamiltonian and state validation.
"""
import os
import sys
import math
import unittest
import logging

import numpy as np

# Add the project root to the path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from super_jc.core.manifold import enumerate_manifold, excited, ground, state_index
from super_jc.core.hamiltonian import (
    ModelParams,
    RealSymmetricMatrix,
    build_hamiltonian,
    expectation_excitation,
)
from super_jc.errors import DimensionMismatchError, InvalidParameterError, NormalizationError


class TestModelParams(unittest.TestCase):
    """Test parameter validation."""

    def setUp(self):
        logging.disable(logging.CRITICAL)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_rejects_bad_couplings(self):
        with self.assertRaises(InvalidParameterError):
            ModelParams(1.0, 2.0, 0.0, 1.0)
        with self.assertRaises(InvalidParameterError):
            ModelParams(1.0, 2.0, 1.0, -1.0)

    def test_rejects_non_finite(self):
        with self.assertRaises(ValueError):
            ModelParams(float('nan'), 2.0)
        with self.assertRaises(ValueError):
            ModelParams(1.0, float('inf'))

    def test_helpers(self):
        p = ModelParams(1.0, 2.0, 0.5, 2.0)
        self.assertEqual(p.flipped(), ModelParams(-1.0, -2.0, 0.5, 2.0))
        self.assertEqual(p.with_detunings(3, 4), ModelParams(3.0, 4.0, 0.5, 2.0))


class TestBuildHamiltonian(unittest.TestCase):
    """Test the Hamiltonian entries against hand-built matrices."""

    def setUp(self):
        logging.disable(logging.CRITICAL)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_one_excitation_resonant(self):
        h = build_hamiltonian(enumerate_manifold(1), ModelParams(0.0, 0.0))
        np.testing.assert_array_equal(h.entries, [[0, 0, 1], [0, 0, 1], [1, 1, 0]])

    def test_one_excitation_detuned(self):
        h = build_hamiltonian(enumerate_manifold(1), ModelParams(3.0, 10.0, 1.0, 2.0))
        np.testing.assert_array_equal(h.entries, [[3, 0, 1], [0, 10, 2], [1, 2, 0]])

    def test_two_excitations(self):
        m = enumerate_manifold(2)
        h = build_hamiltonian(m, ModelParams(4.62, 10.0)).entries
        np.testing.assert_allclose(np.diag(h), [9.24, 14.62, 20.0, 4.62, 10.0])

        expected = np.diag([9.24, 14.62, 20.0, 4.62, 10.0])
        # Brute force over all pairs: a photon of mode k is absorbed by the emitter
        for i, a in enumerate(m.states):
            for j, b in enumerate(m.states):
                if a.level.value != 'g' or b.level.value != 'x':
                    continue
                if (b.n1, b.n2) == (a.n1 - 1, a.n2):
                    expected[i, j] = expected[j, i] = math.sqrt(a.n1)
                if (b.n1, b.n2) == (a.n1, a.n2 - 1):
                    expected[i, j] = expected[j, i] = math.sqrt(a.n2)
        np.testing.assert_allclose(h, expected, atol=1e-15)
        self.assertAlmostEqual(h[state_index(m, ground(2, 0)), state_index(m, excited(1, 0))], math.sqrt(2))
        self.assertAlmostEqual(h[state_index(m, ground(0, 2)), state_index(m, excited(0, 1))], math.sqrt(2))
        self.assertAlmostEqual(h[state_index(m, ground(1, 1)), state_index(m, excited(0, 1))], 1.0)

    def test_exactly_symmetric(self):
        for n in (1, 3, 7):
            h = build_hamiltonian(enumerate_manifold(n), ModelParams(-2.3, 7.1, 0.7, 1.9)).entries
            self.assertTrue(np.array_equal(h, h.T))

    def test_matrix_is_read_only(self):
        h = build_hamiltonian(enumerate_manifold(1), ModelParams(1.0, 2.0))
        with self.assertRaises(ValueError):
            h.entries[0, 0] = 5.0

    def test_real_symmetric_matrix_validation(self):
        with self.assertRaises(InvalidParameterError):
            RealSymmetricMatrix([[0.0, 1.0], [2.0, 0.0]])
        with self.assertRaises(DimensionMismatchError):
            RealSymmetricMatrix([[0.0, 1.0, 2.0]])


class TestExpectationExcitation(unittest.TestCase):
    """Test the excitation number of manifold states."""

    def setUp(self):
        logging.disable(logging.CRITICAL)
        self.rng = np.random.default_rng(7)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_basis_vector(self):
        m = enumerate_manifold(2)
        psi = np.zeros(m.dim, dtype=complex)
        psi[0] = 1.0
        self.assertEqual(expectation_excitation(m, psi), 2.0)

    def test_random_state(self):
        m = enumerate_manifold(5)
        psi = self.rng.normal(size=m.dim) + 1j * self.rng.normal(size=m.dim)
        psi /= np.linalg.norm(psi)
        self.assertAlmostEqual(expectation_excitation(m, psi), 5.0, places=12)

    def test_unnormalized(self):
        m = enumerate_manifold(2)
        psi = np.ones(m.dim, dtype=complex)
        with self.assertRaises(NormalizationError):
            expectation_excitation(m, psi)
        self.assertAlmostEqual(expectation_excitation(m, psi, renormalize=True), 2.0, places=12)

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            expectation_excitation(enumerate_manifold(2), np.ones(3) / math.sqrt(3))


if __name__ == '__main__':
    unittest.main()
