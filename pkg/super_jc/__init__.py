"""
Two-mode Jaynes-Cummings simulator for few-photon SUPER excitation of a quantum emitter.
"""
__version__ = '0.1.0'
