"""
Tests for excitation manifolds and basis states.
"""
import os
import sys
import unittest
import logging

import numpy as np

# Add the project root to the path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from super_jc.core.manifold import (
    BasisState,
    Level,
    basis_vector,
    enumerate_manifold,
    excited,
    excited_indices,
    ground,
    photon_numbers,
    state_index,
)
from super_jc.errors import InvalidParameterError, StateNotInManifoldError


class TestBasisState(unittest.TestCase):
    """Test basis state construction and parsing."""

    def setUp(self):
        logging.disable(logging.CRITICAL)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_parse(self):
        self.assertEqual(BasisState.parse('g,2,0'), ground(2, 0))
        self.assertEqual(BasisState.parse(' X, 0, 1 '), excited(0, 1))
        self.assertEqual(str(ground(2, 0)), '|g,2,0>')

    def test_parse_rejects_garbage(self):
        for text in ('q,1,1', 'g,1', 'g,a,0', 'g,-1,0'):
            with self.assertRaises(InvalidParameterError):
                BasisState.parse(text)

    def test_excitation(self):
        self.assertEqual(ground(3, 2).excitation, 5)
        self.assertEqual(excited(3, 2).excitation, 6)

    def test_negative_photons(self):
        with self.assertRaises(InvalidParameterError):
            BasisState(Level.G, -1, 0)


class TestManifold(unittest.TestCase):
    """Test manifold enumeration and indexing."""

    def setUp(self):
        logging.disable(logging.CRITICAL)

    def tearDown(self):
        logging.disable(logging.NOTSET)

    def test_vacuum(self):
        m = enumerate_manifold(0)
        self.assertEqual(m.states, (ground(0, 0),))
        self.assertEqual(excited_indices(m).size, 0)

    def test_two_excitations(self):
        m = enumerate_manifold(2)
        self.assertEqual(
            m.states,
            (ground(2, 0), ground(1, 1), ground(0, 2), excited(1, 0), excited(0, 1)),
        )
        self.assertEqual(state_index(m, ground(2, 0)), 0)
        self.assertEqual(state_index(m, excited(0, 1)), 4)
        np.testing.assert_array_equal(excited_indices(m), [3, 4])

    def test_dimension(self):
        for n in range(1, 11):
            m = enumerate_manifold(n)
            self.assertEqual(m.dim, 2 * n + 1)
            self.assertTrue(all(s.excitation == n for s in m))
        self.assertEqual(len(enumerate_manifold(10)), 21)

    def test_index_roundtrip(self):
        m = enumerate_manifold(6)
        for i, s in enumerate(m.states):
            self.assertEqual(state_index(m, s), i)

    def test_state_outside_manifold(self):
        m = enumerate_manifold(2)
        with self.assertRaises(StateNotInManifoldError):
            state_index(m, ground(3, 0))
        self.assertNotIn(ground(3, 0), m)

    def test_negative_excitation(self):
        with self.assertRaises(InvalidParameterError):
            enumerate_manifold(-1)

    def test_basis_vector_and_photon_numbers(self):
        m = enumerate_manifold(2)
        psi = basis_vector(m, ground(1, 1))
        self.assertEqual(psi.dtype, np.complex128)
        np.testing.assert_array_equal(np.abs(psi), [0, 1, 0, 0, 0])
        n1, n2 = photon_numbers(m)
        np.testing.assert_array_equal(n1, [2, 1, 0, 1, 0])
        np.testing.assert_array_equal(n2, [0, 1, 2, 0, 1])


if __name__ == '__main__':
    unittest.main()
