"""
Exact time evolution inside a manifold, and an independent RK4 integrator used as oracle.

Exact evolution goes through the eigenbasis of the real symmetric Hamiltonian,
psi(t) = V exp(-i E t) V^T psi0, computed by cyclic Jacobi rotations. Long horizons are
therefore free of step accumulation.
"""
import math
import logging
from dataclasses import dataclass, field

import numpy as np

from super_jc import config
from super_jc.core.manifold import excited_indices, photon_numbers, state_index
from super_jc.errors import ConvergenceError, DimensionMismatchError, InvalidParameterError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and orthogonal eigenvectors (column k belongs to eigenvalue k)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int = 0

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    @property
    def spread(self):
        return float(self.eigenvalues[-1] - self.eigenvalues[0])


@dataclass
class OccupationTrace:
    """Excited-state and photon-number expectation values over time."""

    times: np.ndarray
    p_excited: np.ndarray
    n_mode1: np.ndarray
    n_mode2: np.ndarray
    n_total: int = 0
    state_occupations: dict = field(default_factory=dict)


def _rotate(a, v, p, q):
    """Apply one Jacobi rotation zeroing a[p, q]."""
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    if theta == 0.0:
        t = 1.0
    elif abs(theta) > 1e150:
        t = 1.0 / (2.0 * theta)
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q

    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, q] = a[q, p] = 0.0

    vec_p = v[:, p].copy()
    vec_q = v[:, q].copy()
    v[:, p] = c * vec_p - s * vec_q
    v[:, q] = s * vec_p + c * vec_q


def eigendecompose(h, max_sweeps=None, tolerance=None):
    """
    Diagonalize a real symmetric matrix with cyclic Jacobi rotations.

    Args:
        h: RealSymmetricMatrix (or anything convertible to a symmetric float array)
        max_sweeps: Sweep budget (default config.JACOBI_MAX_SWEEPS)
        tolerance: Stop when the off-diagonal norm is below tolerance * ||h||_F

    Returns:
        EigenDecomposition with ascending eigenvalues

    Raises:
        ConvergenceError: if the off-diagonal norm is still above threshold after the budget
    """
    max_sweeps = max_sweeps if max_sweeps is not None else config.JACOBI_MAX_SWEEPS
    tolerance = tolerance if tolerance is not None else config.JACOBI_TOLERANCE

    a = np.array(h, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    threshold = tolerance * np.linalg.norm(a, 'fro')

    sweeps = 0
    off = math.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))
    while off > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {off:.3e}, threshold {threshold:.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] != 0.0:
                    _rotate(a, v, p, q)
        sweeps += 1
        off = math.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))

    order = np.argsort(np.diag(a), kind='stable')
    eigenvalues = np.diag(a)[order].copy()
    eigenvectors = v[:, order].copy()
    eigenvalues.setflags(write=False)
    eigenvectors.setflags(write=False)
    logger.debug(f"Jacobi converged for dim {n} after {sweeps} sweeps")
    return EigenDecomposition(eigenvalues, eigenvectors, sweeps)


def _check_dim(d, psi0):
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (d.dim,):
        raise DimensionMismatchError(f"state has shape {psi0.shape}, decomposition has dim {d.dim}")
    return psi0


def evolve(d, psi0, t):
    """
    Propagate psi0 by time t: V diag(exp(-i E t)) V^T psi0.

    At t = 0 the input is returned unchanged.
    """
    psi0 = _check_dim(d, psi0)
    if t == 0:
        return psi0.copy()
    coeffs = d.eigenvectors.T @ psi0
    return d.eigenvectors @ (np.exp(-1j * d.eigenvalues * t) * coeffs)


def nyquist_dt(d):
    """Sampling step pi / (2 (E_max - E_min)); infinite when the spectrum is flat."""
    spread = d.spread
    if spread <= 0.0:
        return math.inf
    return math.pi / (2.0 * spread)


def _phases(times, energies):
    """
    exp(-i E t) for every time and eigenvalue, shape (len(times), len(energies)).

    On a uniform grid the phases follow from repeated multiplication by one step factor,
    restarted exactly at the first time of every call.
    """
    n = times.shape[0]
    if n > 2:
        step = times[1] - times[0]
        if step > 0 and np.allclose(np.diff(times), step, rtol=1e-9, atol=0.0):
            factors = np.empty((n, energies.size), dtype=complex)
            factors[0] = np.exp(-1j * energies * times[0])
            factors[1:] = np.exp(-1j * energies * step)
            return np.cumprod(factors, axis=0)
    return np.exp(-1j * np.outer(times, energies))


def amplitudes(d, psi0, times, rows=None):
    """
    Amplitudes psi_s(t) for every requested time, shape (len(times), len(rows)).

    Args:
        d: EigenDecomposition
        psi0: Initial state
        times: 1-D array of times
        rows: Basis indices to return (default all)
    """
    psi0 = _check_dim(d, psi0)
    times = np.asarray(times, dtype=float)
    vectors = d.eigenvectors if rows is None else d.eigenvectors[rows, :]
    coeffs = d.eigenvectors.T @ psi0
    phases = _phases(times, d.eigenvalues)
    return (phases * coeffs) @ vectors.T


def excited_probability(d, m, psi0, times, chunk_size=None):
    """
    P_x(t) for every time, evaluated in blocks of chunk_size samples.

    Returns:
        Real array of excited-state occupations clipped to [0, 1]
    """
    chunk_size = chunk_size or config.SAMPLE_CHUNK_SIZE
    times = np.atleast_1d(np.asarray(times, dtype=float))
    rows = excited_indices(m)
    result = np.zeros(times.shape[0])
    if rows.size == 0:
        return result
    for start in range(0, times.shape[0], chunk_size):
        block = amplitudes(d, psi0, times[start:start + chunk_size], rows)
        result[start:start + chunk_size] = np.sum(np.abs(block) ** 2, axis=1)
    return np.clip(result, 0.0, 1.0)


def occupation_trace(d, m, psi0, times, states=None):
    """
    Excited-state occupation and mode photon numbers along a time grid.

    Args:
        d: EigenDecomposition of the manifold Hamiltonian
        m: The Manifold
        psi0: Initial state vector
        times: Ascending time samples
        states: Optional basis states whose individual occupations are recorded

    Returns:
        OccupationTrace
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1:
        raise DimensionMismatchError("times must be a 1-D array")
    if np.any(np.diff(times) < 0):
        raise InvalidParameterError("times must be sorted ascending")

    populations = np.abs(amplitudes(d, psi0, times)) ** 2
    n1, n2 = photon_numbers(m)
    rows = excited_indices(m)

    trace = OccupationTrace(
        times=times,
        p_excited=np.clip(populations[:, rows].sum(axis=1), 0.0, 1.0),
        n_mode1=populations @ n1,
        n_mode2=populations @ n2,
        n_total=m.n_total,
    )
    for s in states or ():
        trace.state_occupations[s] = populations[:, state_index(m, s)]
    return trace


def rk4_evolve(h, psi0, t_end, dt):
    """
    Fixed-step classical RK4 integration of i dpsi/dt = H psi.

    For a constant Hamiltonian one RK4 step is the polynomial
    I + z + z^2/2 + z^3/6 + z^4/24 with z = -i H dt, so n steps are that matrix raised to
    the n-th power. The integration runs on H - c I, c the centre of the Gershgorin
    interval, and the phase exp(-i c t) is restored exactly. No renormalization is applied.

    Args:
        h: RealSymmetricMatrix
        psi0: Initial state
        t_end: Final time (>= 0)
        dt: Maximal step (> 0); the step is shortened so that t_end is hit exactly

    Returns:
        Complex state vector at t_end
    """
    if dt <= 0:
        raise InvalidParameterError(f"dt must be positive, got {dt}")
    if t_end < 0:
        raise InvalidParameterError(f"t_end must be non-negative, got {t_end}")

    a = np.array(h, dtype=float)
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (a.shape[0],):
        raise DimensionMismatchError(f"state has shape {psi0.shape}, matrix has dim {a.shape[0]}")
    if t_end == 0:
        return psi0.copy()

    radii = np.sum(np.abs(a), axis=1) - np.abs(np.diag(a))
    centre = 0.5 * (np.max(np.diag(a) + radii) + np.min(np.diag(a) - radii))
    shifted = a - centre * np.eye(a.shape[0])

    n_steps = int(math.ceil(t_end / dt - 1e-12))
    step = t_end / n_steps
    z = -1j * step * shifted
    z2 = z @ z
    z3 = z2 @ z
    propagator = np.eye(a.shape[0]) + z + z2 / 2.0 + z3 / 6.0 + (z3 @ z) / 24.0

    psi = np.linalg.matrix_power(propagator, n_steps) @ psi0
    psi = psi * np.exp(-1j * centre * t_end)
    drift = abs(float(np.vdot(psi, psi).real) - float(np.vdot(psi0, psi0).real))
    logger.debug(f"RK4 finished {n_steps} steps of {step:.3e}, norm drift {drift:.3e}")
    return psi
