"""
Reduction of the two-photon scattering |g,n1,n2> <-> |x,n1-2,n2+1> to an effective two-level
system.

The reduced Hamiltonian keeps the six most relevant states, energies measured from the
initial state with detunings entering as +Delta (the opposite sign of build_hamiltonian,
whose spectrum is symmetric under Delta -> -Delta). Eliminating the four intermediate states
gives Stark-shifted energies E1, E2 and an effective Rabi frequency.
"""
import math
import logging
from dataclasses import dataclass

import numpy as np

from super_jc import config
from super_jc.core.hamiltonian import RealSymmetricMatrix
from super_jc.core.manifold import Level, BasisState, excited, ground
from super_jc.errors import (
    InsufficientPhotonsError,
    InvalidParameterError,
    NoResonanceError,
    SingularDetuningError,
)
from super_jc.semiclassical.two_level import rabi_analytic

logger = logging.getLogger(__name__)


def _check_photons(n1, n2):
    if n1 < 2:
        raise InsufficientPhotonsError(f"two-photon reduction needs n1 >= 2, got {n1}")
    if n2 < 0:
        raise InvalidParameterError(f"n2 must be non-negative, got {n2}")


def reduced_basis(n1, n2):
    """
    States kept by the reduction, in row order.

    |x,n1,n2-1>, |x,n1-1,n2>, |g,n1,n2>, |x,n1-2,n2+1>, |g,n1-1,n2+1>, |g,n1-2,n2+2>;
    the first is dropped when n2 = 0.
    """
    _check_photons(n1, n2)
    states = [
        excited(n1, n2 - 1) if n2 >= 1 else None,
        excited(n1 - 1, n2),
        ground(n1, n2),
        excited(n1 - 2, n2 + 1),
        ground(n1 - 1, n2 + 1),
        ground(n1 - 2, n2 + 2),
    ]
    return [s for s in states if s is not None]


def reduced_hamiltonian6(n1, n2, p):
    """
    Six-state Hamiltonian of the two-photon scattering chain.

    Diagonal (Delta2, Delta1, 0, 2 Delta1 - Delta2, Delta1 - Delta2, 2 Delta1 - 2 Delta2);
    couplings L2 sqrt(n2) (1-3), L1 sqrt(n1) (2-3), L2 sqrt(n2+1) (2-5),
    L1 sqrt(n1-1) (4-5), L2 sqrt(n2+2) (4-6). For n2 = 0 the first row and column are
    removed, leaving a 5x5 matrix.

    Raises:
        InsufficientPhotonsError: if n1 < 2
    """
    _check_photons(n1, n2)
    d1, d2 = p.delta1, p.delta2
    l1, l2 = p.lambda1, p.lambda2

    h = np.zeros((6, 6))
    h[np.diag_indices(6)] = [d2, d1, 0.0, 2 * d1 - d2, d1 - d2, 2 * d1 - 2 * d2]
    h[0, 2] = h[2, 0] = l2 * math.sqrt(n2)
    h[1, 2] = h[2, 1] = l1 * math.sqrt(n1)
    h[1, 4] = h[4, 1] = l2 * math.sqrt(n2 + 1)
    h[3, 4] = h[4, 3] = l1 * math.sqrt(n1 - 1)
    h[3, 5] = h[5, 3] = l2 * math.sqrt(n2 + 2)

    if n2 == 0:
        h = h[1:, 1:]
    return RealSymmetricMatrix(h)


def resonance_predict_appendix(n1, n2, p, delta1):
    """
    Delta2 = 2 Delta1 + L1^2 (2 n1 - 1) / Delta1 + L2^2 (n2 + 1) / Delta1.

    Only the couplings of p are used.

    Raises:
        InsufficientPhotonsError: if n1 < 2
        SingularDetuningError: at delta1 = 0
    """
    _check_photons(n1, n2)
    if delta1 == 0:
        raise SingularDetuningError("resonance prediction is singular at delta1 = 0")
    return (2.0 * delta1
            + p.lambda1 ** 2 * (2 * n1 - 1) / delta1
            + p.lambda2 ** 2 * (n2 + 1) / delta1)


def solve_appendix_delta1(n1, n2, p, delta2):
    """
    Invert resonance_predict_appendix for Delta1 at fixed Delta2.

    Returns the root of 2 Delta1^2 - Delta2 Delta1 + C = 0 that tends to Delta2 / 2.

    Raises:
        NoResonanceError: if the quadratic has no real root
    """
    _check_photons(n1, n2)
    c = p.lambda1 ** 2 * (2 * n1 - 1) + p.lambda2 ** 2 * (n2 + 1)
    discriminant = delta2 ** 2 - 8.0 * c
    if discriminant < 0:
        raise NoResonanceError(f"no real two-photon resonance at delta2={delta2:g}")
    return (delta2 + math.copysign(math.sqrt(discriminant), delta2)) / 4.0


@dataclass(frozen=True)
class EffectiveTwoLevel:
    """Effective Hamiltonian [[E1, Omega/2], [Omega/2, E2]] of |i> and |f>."""

    e1: float
    e2: float
    omega_eff: float
    predicted_delta2: float
    validity_ratio: float = 0.0

    @property
    def within_validity(self):
        return self.validity_ratio <= config.VALIDITY_RATIO_LIMIT

    @property
    def detuning(self):
        return self.e2 - self.e1

    @property
    def slow_period(self):
        """Period 2 pi / sqrt((E2 - E1)^2 + Omega_eff^2) of the effective Rabi oscillation."""
        return 2.0 * math.pi / math.hypot(self.detuning, self.omega_eff)

    def excited_probability(self, t):
        """Occupation of |f> starting from |i>."""
        return rabi_analytic(abs(self.omega_eff), self.detuning, t)

    def hamiltonian(self):
        return RealSymmetricMatrix([[self.e1, self.omega_eff / 2.0], [self.omega_eff / 2.0, self.e2]])


def adiabatic_elimination(n1, n2, p):
    """
    Effective two-level description of |g,n1,n2> <-> |x,n1-2,n2+1>.

    Omega_eff = 2 L1^2 L2 sqrt(n1-1) sqrt(n1) sqrt(n2+1) / (Delta1 (Delta1 - Delta2))
    E1 = -L2^2 n2 / Delta2 - L1^2 n1 / Delta1
    E2 = 2 Delta1 - Delta2 + L1^2 (n1-1) / (Delta2-Delta1) + L2^2 (n2+2) / (2 (Delta2-Delta1))

    The approximation needs L_i sqrt(n_i) << |Delta1 - Delta2|; a ratio above
    config.VALIDITY_RATIO_LIMIT is logged but still computed.

    Raises:
        SingularDetuningError: if Delta1 = 0, Delta2 = 0 or Delta1 = Delta2
    """
    _check_photons(n1, n2)
    d1, d2 = p.delta1, p.delta2
    l1, l2 = p.lambda1, p.lambda2
    if d1 == 0 or d2 == 0 or d1 == d2:
        raise SingularDetuningError(
            f"adiabatic elimination is singular at delta1={d1:g}, delta2={d2:g}"
        )

    omega_eff = (2.0 * l1 ** 2 * l2 * math.sqrt(n1 - 1) * math.sqrt(n1) * math.sqrt(n2 + 1)
                 / (d1 * (d1 - d2)))
    e1 = -l2 ** 2 * n2 / d2 - l1 ** 2 * n1 / d1
    e2 = 2.0 * d1 - d2 + l1 ** 2 * (n1 - 1) / (d2 - d1) + l2 ** 2 * (n2 + 2) / (2.0 * (d2 - d1))

    ratio = max(l1 * math.sqrt(n1), l2 * math.sqrt(n2)) / abs(d1 - d2)
    if ratio > config.VALIDITY_RATIO_LIMIT:
        logger.warning(
            f"Adiabatic elimination outside its validity range: "
            f"coupling / |delta1 - delta2| = {ratio:.3f} > {config.VALIDITY_RATIO_LIMIT}"
        )

    return EffectiveTwoLevel(
        e1=e1,
        e2=e2,
        omega_eff=omega_eff,
        predicted_delta2=resonance_predict_appendix(n1, n2, p, d1),
        validity_ratio=ratio,
    )


def n_photon_final_state(initial, order_n):
    """
    Final state of N-photon scattering: |g,n1,n2> -> |x, n1-N, n2+(N-1)>.

    Raises:
        InsufficientPhotonsError: if n1 < N
    """
    if initial.level is not Level.G:
        raise InvalidParameterError(f"initial state must be in the ground level, got {initial}")
    if order_n < 2:
        raise InvalidParameterError(f"scattering order must be >= 2, got {order_n}")
    if initial.n1 < order_n:
        raise InsufficientPhotonsError(
            f"{order_n}-photon scattering needs at least {order_n} photons in mode 1, {initial} has {initial.n1}"
        )
    return BasisState(Level.X, initial.n1 - order_n, initial.n2 + order_n - 1)


def dichromatic_predict(delta1, omega_rabi):
    """
    Coarse locator |Delta1| - Omega_Rabi of the broad opposite-sign resonance region.

    Omega_Rabi is the classical generalized Rabi frequency, supplied by the caller.
    """
    if not omega_rabi > 0:
        raise InvalidParameterError(f"omega_rabi must be positive, got {omega_rabi}")
    return abs(delta1) - omega_rabi
