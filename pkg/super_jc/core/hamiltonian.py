"""
Rotating-frame two-mode Jaynes-Cummings Hamiltonian.

Within one manifold H - w0*N differs from H by a constant, so every matrix element depends
only on the detunings Delta_i = w_i - w0 and the couplings Lambda_i. All quantities are in
units of a reference coupling Lambda with hbar = 1; times carry units of 1/Lambda.
"""
import math
import logging
from dataclasses import dataclass, replace

import numpy as np

from super_jc import config
from super_jc.core.manifold import Level, excited, photon_numbers
from super_jc.errors import (
    DimensionMismatchError,
    InvalidParameterError,
    NormalizationError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelParams:
    """Detunings and couplings of the two modes, in units of Lambda."""

    delta1: float
    delta2: float
    lambda1: float = 1.0
    lambda2: float = 1.0

    def __post_init__(self):
        for name in ('delta1', 'delta2', 'lambda1', 'lambda2'):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"{name} must be finite")
        if self.lambda1 <= 0 or self.lambda2 <= 0:
            raise InvalidParameterError(
                f"couplings must be positive, got lambda1={self.lambda1}, lambda2={self.lambda2}"
            )

    def with_detunings(self, delta1, delta2):
        """Copy with new detunings and the same couplings."""
        return replace(self, delta1=float(delta1), delta2=float(delta2))

    def flipped(self):
        """Copy with both detunings negated."""
        return replace(self, delta1=-self.delta1, delta2=-self.delta2)


class RealSymmetricMatrix:
    """Dense real matrix that is exactly symmetric and read-only."""

    def __init__(self, entries):
        entries = np.array(entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] < 1:
            raise DimensionMismatchError(f"expected a non-empty square matrix, got {entries.shape}")
        if not np.array_equal(entries, entries.T):
            raise InvalidParameterError("matrix is not exactly symmetric")
        entries.setflags(write=False)
        self._entries = entries

    @property
    def entries(self):
        return self._entries

    @property
    def dim(self):
        return self._entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._entries
        return self._entries.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, RealSymmetricMatrix):
            return NotImplemented
        return np.array_equal(self._entries, other._entries)

    def __repr__(self):
        return f"RealSymmetricMatrix(dim={self.dim})"


def build_hamiltonian(m, p):
    """
    Build H' = H - w0*N restricted to a manifold.

    Diagonal entries are n1*Delta1 + n2*Delta2. |g,n1,n2> couples to |x,n1-1,n2> with
    Lambda1*sqrt(n1) and to |x,n1,n2-1> with Lambda2*sqrt(n2); there are no g-g or x-x
    couplings.

    Args:
        m: The Manifold
        p: ModelParams

    Returns:
        RealSymmetricMatrix in the manifold ordering
    """
    h = np.zeros((m.dim, m.dim))
    n1, n2 = photon_numbers(m)
    h[np.diag_indices(m.dim)] = n1 * p.delta1 + n2 * p.delta2

    for i, s in enumerate(m.states):
        if s.level is not Level.G:
            continue
        if s.n1 >= 1:
            j = m.index[excited(s.n1 - 1, s.n2)]
            h[i, j] = h[j, i] = p.lambda1 * math.sqrt(s.n1)
        if s.n2 >= 1:
            j = m.index[excited(s.n1, s.n2 - 1)]
            h[i, j] = h[j, i] = p.lambda2 * math.sqrt(s.n2)

    return RealSymmetricMatrix(h)


def check_state(m, psi, renormalize=False):
    """
    Validate a state vector against a manifold.

    Args:
        m: The Manifold
        psi: Complex amplitudes
        renormalize: Rescale an unnormalized vector instead of raising

    Returns:
        The (possibly renormalized) complex vector
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (m.dim,):
        raise DimensionMismatchError(f"state has shape {psi.shape}, manifold has {m.dim} states")
    norm = float(np.vdot(psi, psi).real)
    if abs(norm - 1.0) > config.NORMALIZATION_TOLERANCE:
        if not renormalize or norm == 0.0:
            raise NormalizationError(f"state norm is {norm:.12g}, expected 1")
        psi = psi / math.sqrt(norm)
    return psi


def expectation_excitation(m, psi, renormalize=False):
    """
    <N> for a state of the manifold; equals m.n_total for every valid state.

    Raises:
        DimensionMismatchError: if psi does not match the manifold
        NormalizationError: if psi is not normalized and renormalize is False
    """
    psi = check_state(m, psi, renormalize=renormalize)
    excitations = np.array([s.excitation for s in m.states], dtype=float)
    return float(np.sum(np.abs(psi) ** 2 * excitations))
