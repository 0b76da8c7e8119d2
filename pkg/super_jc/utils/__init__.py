"""
Utilities module for the simulator.
"""
