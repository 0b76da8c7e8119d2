"""
Core module: excitation manifolds, the rotating-frame Hamiltonian and exact propagation.
"""
