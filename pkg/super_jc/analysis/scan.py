"""
Maximal excited-state occupation and 2-D detuning scans.

Every grid point is an independent diagonalization followed by a search for the maximum of
P_x(t) over [0, horizon]: a Nyquist-safe sample grid, then a bounded Brent/golden-section
refinement inside the interval bracketing the best sample.
"""
import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from super_jc import config
from super_jc.core.hamiltonian import build_hamiltonian
from super_jc.core.manifold import Level, basis_vector, enumerate_manifold, excited_indices
from super_jc.core.propagator import eigendecompose, evolve, excited_probability, nyquist_dt
from super_jc.errors import InvalidParameterError, ScanPointError, SuperJCError

logger = logging.getLogger(__name__)

NYQUIST_AUTO = 'nyquist-auto'


def default_horizon(n_total):
    """5000 / Lambda up to two excitations, 50000 / Lambda above."""
    if n_total <= 2:
        return config.DEFAULT_HORIZON_LOW_ORDER
    return config.DEFAULT_HORIZON_HIGH_ORDER


def _check_sampling(sampling):
    if sampling == NYQUIST_AUTO:
        return sampling
    if isinstance(sampling, (int, np.integer)) and not isinstance(sampling, bool) and sampling >= 2:
        return int(sampling)
    raise InvalidParameterError(f"sampling must be '{NYQUIST_AUTO}' or an integer >= 2, got {sampling!r}")


@dataclass(frozen=True)
class ScanGrid:
    """Detuning grid, fixed couplings, initial ground-level state and time horizon."""

    delta1_values: np.ndarray
    delta2_values: np.ndarray
    params: object
    initial_state: object
    horizon: float
    sampling: object = NYQUIST_AUTO

    def __post_init__(self):
        for name in ('delta1_values', 'delta2_values'):
            values = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            if values.ndim != 1 or values.size == 0:
                raise InvalidParameterError(f"{name} must be a non-empty 1-D sequence")
            if np.any(np.diff(values) <= 0):
                raise InvalidParameterError(f"{name} must be strictly ascending")
            if not np.all(np.isfinite(values)):
                raise InvalidParameterError(f"{name} must be finite")
            values.setflags(write=False)
            object.__setattr__(self, name, values)
        if self.initial_state.level is not Level.G:
            raise InvalidParameterError(f"initial state must be in the ground level, got {self.initial_state}")
        if not self.horizon > 0:
            raise InvalidParameterError(f"horizon must be positive, got {self.horizon}")
        object.__setattr__(self, 'sampling', _check_sampling(self.sampling))

    @property
    def shape(self):
        return (self.delta1_values.size, self.delta2_values.size)


@dataclass
class ScanResult:
    """Maximal occupation and its time on a ScanGrid (rows: delta1, columns: delta2)."""

    grid: ScanGrid
    max_occupation: np.ndarray
    argmax_time: np.ndarray
    degenerate_vicinity: np.ndarray
    metadata: dict = field(default_factory=dict)

    def cut_along_delta1(self, col=0):
        """Occupations along delta1 at one delta2 column."""
        return self.grid.delta1_values, self.max_occupation[:, col]

    def cut_along_delta2(self, row=0):
        """Occupations along delta2 at one delta1 row."""
        return self.grid.delta2_values, self.max_occupation[row, :]


def _sample_times(horizon, dt, sampling):
    if sampling == NYQUIST_AUTO:
        n_samples = int(math.ceil(horizon / dt)) + 1
    else:
        n_samples = sampling
    return n_samples, horizon / (n_samples - 1)


def _max_over_time(d, m, psi0, horizon, sampling):
    """Refined maximum of P_x(t) on [0, horizon] for one decomposition."""
    dt = nyquist_dt(d)
    if sampling == NYQUIST_AUTO and math.isinf(dt):
        return float(excited_probability(d, m, psi0, [0.0])[0]), 0.0

    n_samples, step = _sample_times(horizon, dt, sampling)
    best, best_k = -1.0, 0
    chunk = config.SAMPLE_CHUNK_SIZE
    for start in range(0, n_samples, chunk):
        times = np.arange(start, min(start + chunk, n_samples)) * step
        values = excited_probability(d, m, psi0, times)
        k = int(np.argmax(values))
        if values[k] > best:
            best, best_k = float(values[k]), start + k

    t_best = best_k * step
    if n_samples > 1 and best > 0.0:
        lo = max(best_k - 1, 0) * step
        hi = min(best_k + 1, n_samples - 1) * step
        res = minimize_scalar(
            lambda t: -excited_probability(d, m, psi0, [t])[0],
            bounds=(lo, hi),
            method='bounded',
            options={'xatol': config.GOLDEN_TOLERANCE},
        )
        if res.success and -res.fun > best:
            best, t_best = float(-res.fun), float(res.x)
    return min(best, 1.0), float(t_best)


def max_occupation(p, initial, horizon=None, sampling=NYQUIST_AUTO):
    """
    Maximal excited-state occupation reached from a ground-level basis state.

    Args:
        p: ModelParams
        initial: Ground-level BasisState
        horizon: Maximal evolution time (default depends on the excitation number)
        sampling: 'nyquist-auto' or a fixed number of time samples

    Returns:
        (max P_x, time of the maximum)
    """
    if initial.level is not Level.G:
        raise InvalidParameterError(f"initial state must be in the ground level, got {initial}")
    horizon = horizon if horizon is not None else default_horizon(initial.excitation)
    if not horizon > 0:
        raise InvalidParameterError(f"horizon must be positive, got {horizon}")
    sampling = _check_sampling(sampling)

    m = enumerate_manifold(initial.excitation)
    d = eigendecompose(build_hamiltonian(m, p))
    return _max_over_time(d, m, basis_vector(m, initial), horizon, sampling)


def dominant_final_state(p, initial, horizon=None):
    """
    Excited-level basis state holding the largest occupation at the time of maximal excitation.

    Returns:
        (BasisState, its occupation, time)
    """
    _, t_max = max_occupation(p, initial, horizon)
    m = enumerate_manifold(initial.excitation)
    d = eigendecompose(build_hamiltonian(m, p))
    psi = evolve(d, basis_vector(m, initial), t_max)
    rows = excited_indices(m)
    if rows.size == 0:
        raise InvalidParameterError(f"manifold of {initial} has no excited-level states")
    populations = np.abs(psi[rows]) ** 2
    k = int(np.argmax(populations))
    return m.states[rows[k]], float(populations[k]), t_max


def scan_detunings(g, workers=None):
    """
    Maximal occupation on every (delta1, delta2) grid point.

    Points are evaluated concurrently; results are placed by grid index.

    Args:
        g: ScanGrid
        workers: Thread count (default config.SCAN_WORKERS)

    Returns:
        ScanResult

    Raises:
        ScanPointError: carrying the coordinates of the first failing point
    """
    workers = workers if workers is not None else config.SCAN_WORKERS
    if workers < 1:
        raise InvalidParameterError(f"worker count must be positive, got {workers}")
    n_rows, n_cols = g.shape
    jobs = [(i, j) for i in range(n_rows) for j in range(n_cols)]
    logger.info(
        f"Scanning {n_rows}x{n_cols} grid from {g.initial_state} "
        f"(horizon {g.horizon:g}, sampling {g.sampling}, {workers} workers)"
    )

    def evaluate(job):
        i, j = job
        d1, d2 = float(g.delta1_values[i]), float(g.delta2_values[j])
        try:
            return max_occupation(g.params.with_detunings(d1, d2), g.initial_state, g.horizon, g.sampling)
        except SuperJCError as e:
            raise ScanPointError(i, j, d1, d2, e) from e

    occupation = np.zeros(g.shape)
    argmax_time = np.zeros(g.shape)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for (i, j), (value, t) in zip(jobs, pool.map(evaluate, jobs)):
            occupation[i, j] = value
            argmax_time[i, j] = t

    d1_grid, d2_grid = np.meshgrid(g.delta1_values, g.delta2_values, indexing='ij')
    degenerate = np.abs(d1_grid - d2_grid) < config.DEGENERATE_VICINITY

    logger.info(f"Scan finished, global maximum {occupation.max():.6f}")
    return ScanResult(
        grid=g,
        max_occupation=occupation,
        argmax_time=argmax_time,
        degenerate_vicinity=degenerate,
        metadata={
            'horizon': g.horizon,
            'sampling': g.sampling,
            'golden_tolerance': config.GOLDEN_TOLERANCE,
            'degenerate_vicinity_threshold': config.DEGENERATE_VICINITY,
        },
    )
