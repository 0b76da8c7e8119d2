"""
Excitation manifolds of the two-mode Jaynes-Cummings model.

The interaction conserves N = n1 + n2 + |x><x|, so every simulation is confined to the
finite set of product states |level, n1, n2> sharing one value of N.
"""
import enum
import types
import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from super_jc.errors import InvalidParameterError, StateNotInManifoldError

logger = logging.getLogger(__name__)


class Level(enum.Enum):
    """Electronic state of the emitter."""

    G = 'g'
    X = 'x'


@dataclass(frozen=True, order=False)
class BasisState:
    """Product state |level, n1, n2>."""

    level: Level
    n1: int
    n2: int

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise InvalidParameterError(f"photon numbers must be non-negative, got {self}")

    @property
    def excitation(self):
        """Total excitation number n1 + n2 (+1 in the excited level)."""
        return self.n1 + self.n2 + (1 if self.level is Level.X else 0)

    @classmethod
    def parse(cls, text):
        """Build a state from text such as ``g,2,0`` or ``x,0,1``."""
        parts = [p.strip() for p in text.split(',')]
        if len(parts) != 3:
            raise InvalidParameterError(f"expected 'level,n1,n2', got {text!r}")
        try:
            level = Level(parts[0].lower())
            n1, n2 = int(parts[1]), int(parts[2])
        except ValueError as e:
            raise InvalidParameterError(f"cannot parse basis state {text!r}: {e}") from e
        return cls(level, n1, n2)

    def __str__(self):
        return f"|{self.level.value},{self.n1},{self.n2}>"


def ground(n1, n2):
    """Shorthand for |g, n1, n2>."""
    return BasisState(Level.G, n1, n2)


def excited(n1, n2):
    """Shorthand for |x, n1, n2>."""
    return BasisState(Level.X, n1, n2)


@dataclass(frozen=True)
class Manifold:
    """
    Ordered basis of one excitation manifold.

    Ground-level states come first with n1 descending, then excited-level states with n1
    descending, so |g, N, 0> is always at index 0.
    """

    n_total: int
    states: tuple
    index: types.MappingProxyType = field(repr=False, compare=False)

    @property
    def dim(self):
        return len(self.states)

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __contains__(self, state):
        return state in self.index


@lru_cache(maxsize=None)
def enumerate_manifold(n_total):
    """
    Enumerate the basis states with total excitation number n_total.

    Args:
        n_total: Conserved excitation number (>= 0)

    Returns:
        The Manifold, 2 * n_total + 1 states for n_total >= 1 and one state for n_total = 0
    """
    if n_total < 0:
        raise InvalidParameterError(f"n_total must be non-negative, got {n_total}")

    states = [ground(n1, n_total - n1) for n1 in range(n_total, -1, -1)]
    if n_total >= 1:
        states += [excited(n1, n_total - 1 - n1) for n1 in range(n_total - 1, -1, -1)]

    index = types.MappingProxyType({s: i for i, s in enumerate(states)})
    logger.debug(f"Enumerated manifold N={n_total} with {len(states)} states")
    return Manifold(n_total=n_total, states=tuple(states), index=index)


def state_index(m, s):
    """
    Position of a basis state in the manifold ordering.

    Raises:
        StateNotInManifoldError: if s carries a different excitation number
    """
    try:
        return m.index[s]
    except KeyError:
        raise StateNotInManifoldError(
            f"{s} has excitation {s.excitation}, manifold has N={m.n_total}"
        ) from None


def basis_vector(m, s):
    """Normalized complex state vector of a single basis state."""
    psi = np.zeros(m.dim, dtype=complex)
    psi[state_index(m, s)] = 1.0
    return psi


def excited_indices(m):
    """Indices of the excited-level states."""
    return np.array([i for i, s in enumerate(m.states) if s.level is Level.X], dtype=int)


def photon_numbers(m):
    """Photon numbers per basis state as two integer arrays (n1, n2)."""
    n1 = np.array([s.n1 for s in m.states], dtype=float)
    n2 = np.array([s.n2 for s in m.states], dtype=float)
    return n1, n2
