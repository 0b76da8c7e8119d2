"""
Serialization of simulation results: CSV and JSON tables, SVG plots.
"""
