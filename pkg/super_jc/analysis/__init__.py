"""
Analysis module: detuning scans, resonance peaks and the effective two-level reduction.
"""
