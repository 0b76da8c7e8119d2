"""
Driven two-level system in the frame rotating at the transition frequency.

Basis (|g>, |x>). Each drive contributes -(1/2) Omega_i(t) exp(-i Delta_i t) to <x|H|g>,
and the conjugate to <g|H|x>. Integration is fixed-step RK4 starting in |g>.
"""
import enum
import math
import logging
from dataclasses import dataclass

import numpy as np

from super_jc import config
from super_jc.errors import InvalidParameterError

logger = logging.getLogger(__name__)


class Shape(enum.Enum):
    """Envelope shape of a drive."""

    CW_STEP = 'cw'
    GAUSSIAN = 'gaussian'


@dataclass(frozen=True)
class DriveField:
    """
    One classical field component.

    CW_STEP: Omega(t) = amplitude for t >= t_on, zero before.
    GAUSSIAN: Omega(t) = amplitude * exp(-(t - t_center)^2 / (2 duration^2)).
    """

    shape: Shape
    amplitude: float
    detuning: float
    t_on: float = 0.0
    t_center: float = 0.0
    duration: float = 1.0

    def __post_init__(self):
        if not self.amplitude > 0:
            raise InvalidParameterError(f"drive amplitude must be positive, got {self.amplitude}")
        if self.shape is Shape.GAUSSIAN and not self.duration > 0:
            raise InvalidParameterError(f"gaussian duration must be positive, got {self.duration}")

    @classmethod
    def cw(cls, amplitude, detuning, t_on=0.0):
        return cls(Shape.CW_STEP, amplitude, detuning, t_on=t_on)

    @classmethod
    def gaussian(cls, amplitude, detuning, t_center, duration):
        return cls(Shape.GAUSSIAN, amplitude, detuning, t_center=t_center, duration=duration)


@dataclass
class TwoLevelTrace:
    """Excited-state occupation sampled at every integration step."""

    times: np.ndarray
    p_excited: np.ndarray
    norm: np.ndarray = None


def drive_envelope(drive, t):
    """Envelope Omega(t) of one drive, vectorized over t."""
    t = np.asarray(t, dtype=float)
    if drive.shape is Shape.CW_STEP:
        return np.where(t >= drive.t_on, drive.amplitude, 0.0)
    return drive.amplitude * np.exp(-((t - drive.t_center) ** 2) / (2.0 * drive.duration ** 2))


def _coupling(drives, t):
    """<x|H|g> = -(1/2) sum_i Omega_i(t) exp(-i Delta_i t)."""
    total = np.zeros(np.shape(t), dtype=complex)
    for drive in drives:
        total += drive_envelope(drive, t) * np.exp(-1j * drive.detuning * np.asarray(t))
    return -0.5 * total


def _fastest_rate(drives):
    return max(max(abs(d.detuning), d.amplitude) for d in drives)


def default_dt(drives):
    """0.01 / max(Omega_i, |Delta_i|)."""
    return config.DT_DEFAULT_FACTOR / _fastest_rate(drives)


def simulate_two_level(drives, t_end, dt=None):
    """
    Integrate the driven two-level system from |g> with fixed-step RK4.

    Args:
        drives: One or two DriveField objects
        t_end: Final time
        dt: Step (default 0.01 / max rate); a warning is logged above 0.05 / max rate

    Returns:
        TwoLevelTrace with the occupation at every step, t = 0 included
    """
    drives = list(drives)
    if not 1 <= len(drives) <= 2:
        raise InvalidParameterError(f"expected one or two drives, got {len(drives)}")
    if t_end < 0:
        raise InvalidParameterError(f"t_end must be non-negative, got {t_end}")
    dt = dt if dt is not None else default_dt(drives)
    if dt <= 0:
        raise InvalidParameterError(f"dt must be positive, got {dt}")

    limit = config.DT_WARNING_FACTOR / _fastest_rate(drives)
    if dt > limit:
        logger.warning(f"Step {dt:.4g} exceeds accuracy limit {limit:.4g}; RK4 error may be visible")

    n_steps = max(1, int(math.ceil(t_end / dt - 1e-12))) if t_end > 0 else 0
    h = t_end / n_steps if n_steps else 0.0
    times = np.linspace(0.0, t_end, n_steps + 1)

    # Coupling at every step start, midpoint and end
    w_start = _coupling(drives, times)
    w_mid = _coupling(drives, times[:-1] + 0.5 * h).tolist()
    w_nodes = w_start.tolist()

    g, x = 1.0 + 0.0j, 0.0j
    p_excited = np.empty(n_steps + 1)
    norm = np.empty(n_steps + 1)
    p_excited[0], norm[0] = 0.0, 1.0

    for k in range(n_steps):
        w0, wm, w1 = w_nodes[k], w_mid[k], w_nodes[k + 1]
        # dg/dt = -i conj(w) x, dx/dt = -i w g
        k1g, k1x = -1j * w0.conjugate() * x, -1j * w0 * g
        g2, x2 = g + 0.5 * h * k1g, x + 0.5 * h * k1x
        k2g, k2x = -1j * wm.conjugate() * x2, -1j * wm * g2
        g3, x3 = g + 0.5 * h * k2g, x + 0.5 * h * k2x
        k3g, k3x = -1j * wm.conjugate() * x3, -1j * wm * g3
        g4, x4 = g + h * k3g, x + h * k3x
        k4g, k4x = -1j * w1.conjugate() * x4, -1j * w1 * g4
        g += h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g)
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        px = x.real ** 2 + x.imag ** 2
        p_excited[k + 1] = px
        norm[k + 1] = px + g.real ** 2 + g.imag ** 2

    logger.debug(f"Two-level RK4: {n_steps} steps, final norm {norm[-1]:.12f}")
    return TwoLevelTrace(times=times, p_excited=np.clip(p_excited, 0.0, 1.0), norm=norm)


def max_excitation(trace):
    """(max P_x, time of the maximum) of a trace."""
    k = int(np.argmax(trace.p_excited))
    return float(trace.p_excited[k]), float(trace.times[k])


def cw_rabi_frequency(omega, delta):
    """Generalized Rabi frequency sqrt(Omega^2 + Delta^2)."""
    return math.hypot(omega, delta)


def rabi_analytic(omega, delta, t):
    """
    Closed-form occupation of a CW drive switched on at t = 0.

    Returns:
        Omega^2 / (Omega^2 + Delta^2) * sin^2(sqrt(Omega^2 + Delta^2) t / 2), vectorized over t
    """
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega}")
    rate = cw_rabi_frequency(omega, delta)
    return omega ** 2 / rate ** 2 * np.sin(rate * np.asarray(t, dtype=float) / 2.0) ** 2


def super_resonance_pulsed(delta1, omega1_max):
    """Pulsed two-color resonance Delta2 = Delta1 + sqrt(Delta1^2 + Omega1_max^2)."""
    if not omega1_max > 0:
        raise InvalidParameterError(f"omega1_max must be positive, got {omega1_max}")
    return delta1 + math.hypot(delta1, omega1_max)


def super_resonance_cw(omega0, delta1):
    """
    CW two-color resonance: positive Delta2 with sqrt(Omega0^2 + Delta2^2) = 2 sqrt(Omega0^2 + Delta1^2).

    The magnitude is returned; both detunings share one sign.
    """
    if not omega0 > 0:
        raise InvalidParameterError(f"omega0 must be positive, got {omega0}")
    return math.sqrt(4.0 * (omega0 ** 2 + delta1 ** 2) - omega0 ** 2)
