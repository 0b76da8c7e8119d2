"""
Semiclassical module: a two-level emitter driven by classical one- or two-color fields.
"""
