"""
Resonance peaks along detuning cuts.

The single-mode Rabi background 4 L1^2 n1 / (4 L1^2 n1 + Delta1^2) is fitted and subtracted,
peaks are taken from the residual by prominence, and each peak location and height is
refined by a parabola through the three samples around the maximum.
"""
import logging
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import curve_fit
from scipy.signal import find_peaks as _find_peaks
from scipy.signal import peak_widths

from super_jc import config
from super_jc.analysis.scan import ScanGrid, default_horizon, scan_detunings
from super_jc.errors import InvalidParameterError

logger = logging.getLogger(__name__)

ORDER_HEURISTIC = 'slope-heuristic'


@dataclass(frozen=True)
class ResonancePeak:
    """One resonance along a delta1 cut."""

    delta1: float
    height: float
    width: float
    order_n: int
    prominence: float = 0.0
    degenerate_vicinity: bool = False
    classification: str = ORDER_HEURISTIC


def lorentzian_background(delta1, width_sq):
    """width_sq / (width_sq + delta1^2)."""
    return width_sq / (width_sq + np.asarray(delta1) ** 2)


def fit_background(delta1, values, prior_width_sq, exclusion):
    """
    Least-squares Lorentzian width fitted to the samples close to the prior curve.

    Samples more than `exclusion` above the prior are left out of the fit.
    """
    keep = values - lorentzian_background(delta1, prior_width_sq) <= exclusion
    if np.count_nonzero(keep) < 2:
        return prior_width_sq
    try:
        popt, _ = curve_fit(
            lorentzian_background, delta1[keep], values[keep],
            p0=[prior_width_sq], bounds=(1e-12, np.inf),
        )
    except (RuntimeError, ValueError) as e:
        logger.debug(f"Background fit failed, keeping prior width: {e}")
        return prior_width_sq
    return float(popt[0])


def _parabolic(x, y, k):
    """Vertex of the parabola through samples k-1, k, k+1 (sample k if at the border)."""
    if k <= 0 or k >= len(y) - 1:
        return float(x[k]), float(y[k])
    denom = y[k - 1] - 2.0 * y[k] + y[k + 1]
    if denom == 0.0:
        return float(x[k]), float(y[k])
    offset = 0.5 * (y[k - 1] - y[k + 1]) / denom
    if offset >= 0:
        xv = x[k] + offset * (x[k + 1] - x[k])
    else:
        xv = x[k] + offset * (x[k] - x[k - 1])
    yv = y[k] - 0.25 * (y[k - 1] - y[k + 1]) * offset
    return float(xv), float(yv)


def predicted_line_delta1(order_n, delta2):
    """Asymptotic N-photon line (N - 1) Delta2 = N Delta1, solved for Delta1."""
    if order_n < 2:
        raise InvalidParameterError(f"scattering order must be >= 2, got {order_n}")
    return (order_n - 1) / order_n * delta2


def assign_orders(locations, delta2=None, max_order=None):
    """
    Scattering order for each peak location.

    Peaks sorted by position are matched to a contiguous run of candidate orders sorted by
    predicted position, minimizing the total distance; ties go to lower orders. Without
    delta2 the orders follow the ranking in |delta1|.
    """
    locations = list(locations)
    if not locations:
        return []
    if delta2 is None:
        ranking = sorted(range(len(locations)), key=lambda i: abs(locations[i]))
        orders = [0] * len(locations)
        for rank, i in enumerate(ranking):
            orders[i] = rank + 2
        return orders

    max_order = max_order if max_order is not None else len(locations) + 1
    candidates = sorted(range(2, max(max_order, 2) + 1), key=lambda n: predicted_line_delta1(n, delta2))
    predicted = {n: predicted_line_delta1(n, delta2) for n in candidates}
    by_position = sorted(range(len(locations)), key=lambda i: locations[i])

    orders = [0] * len(locations)
    if len(locations) > len(candidates):
        for i, loc in enumerate(locations):
            orders[i] = min(candidates, key=lambda n: (abs(loc - predicted[n]), n))
        return orders

    best = None
    for start in range(len(candidates) - len(locations) + 1):
        window = candidates[start:start + len(locations)]
        cost = sum(abs(locations[i] - predicted[n]) for i, n in zip(by_position, window))
        key = (round(cost, 12), min(window))
        if best is None or key < best[0]:
            best = (key, window)
    for i, n in zip(by_position, best[1]):
        orders[i] = n
    return orders


def _refine_candidate(x, residual, k, prom, width_sq, refine):
    """
    Rescan the interval between the neighbours of sample k.

    Returns:
        (location, height, width, prominence) on the finer samples; the prominence is the
        coarse one raised by the gain of the refined residual maximum
    """
    lo, hi = x[max(k - 1, 0)], x[min(k + 1, x.size - 1)]
    fine_x = np.linspace(lo, hi, config.PEAK_REFINE_POINTS)
    fine_y = np.asarray(refine(fine_x), dtype=float)
    fine_residual = fine_y - lorentzian_background(fine_x, width_sq)

    j = int(np.clip(np.argmax(fine_residual), 1, fine_x.size - 2))
    location, height = _parabolic(fine_x, fine_y, j)
    gain = (height - float(lorentzian_background(location, width_sq))) - residual[k]
    fine_step = float(fine_x[1] - fine_x[0])
    _, _, left, right = peak_widths(fine_residual, [j], rel_height=0.5)
    width = max(float((right[0] - left[0]) * fine_step), fine_step)
    return location, height, width, prom + gain


def find_peaks(cut_delta1, cut_values, background_exclusion=None, *, delta2=None, n1=None,
               lambda1=1.0, prominence=None, refine=None):
    """
    Resonance peaks on top of the single-mode Lorentzian background of a delta1 cut.

    High-order lines can be narrower than the cut spacing, so their sampled maximum falls
    short of the true height. With `refine` given, local maxima down to
    config.PEAK_CANDIDATE_PROMINENCE are rescanned between their neighbours before the
    prominence threshold is applied.

    Args:
        cut_delta1: Ascending delta1 samples (at least 5)
        cut_values: Maximal occupation at each sample
        background_exclusion: Residual above the prior background beyond which a sample is
            left out of the background fit
        delta2: Fixed delta2 of the cut, used for order assignment and the degenerate flag
        n1: Photons initially in mode 1 (background width and highest order)
        lambda1: Coupling of mode 1
        prominence: Minimal prominence above the background (default config.PEAK_PROMINENCE)
        refine: Optional callable mapping delta1 samples to maximal occupations

    Returns:
        List of ResonancePeak sorted by delta1; empty when nothing exceeds the prominence
    """
    x = np.asarray(cut_delta1, dtype=float)
    y = np.asarray(cut_values, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise InvalidParameterError("cut_delta1 and cut_values must be 1-D arrays of equal length")
    if x.size < 5:
        raise InvalidParameterError(f"a cut needs at least 5 samples, got {x.size}")
    exclusion = background_exclusion if background_exclusion is not None else config.BACKGROUND_EXCLUSION
    prominence = prominence if prominence is not None else config.PEAK_PROMINENCE
    floor = min(prominence, config.PEAK_CANDIDATE_PROMINENCE) if refine is not None else prominence

    prior = 4.0 * lambda1 ** 2 * (n1 if n1 else 1)
    width_sq = fit_background(x, y, prior, exclusion)
    residual = y - lorentzian_background(x, width_sq)

    indices, properties = _find_peaks(residual, prominence=floor)
    if indices.size == 0:
        logger.debug("No peak above prominence threshold")
        return []

    _, _, left_ips, right_ips = peak_widths(residual, indices, rel_height=0.5)
    samples = np.arange(x.size)
    step = float(np.min(np.diff(x)))

    located = []
    for k, left, right, prom in zip(indices, left_ips, right_ips, properties['prominences']):
        k = int(k)
        if prom < prominence:
            location, height, width, prom = _refine_candidate(x, residual, k, float(prom), width_sq, refine)
            if prom < prominence:
                logger.debug(f"Candidate at delta1={x[k]:.4f} stays below threshold after refinement")
                continue
            logger.debug(f"Refined candidate at delta1={location:.4f}, prominence {prom:.3f}")
        else:
            location, height = _parabolic(x, y, k)
            width = max(float(np.interp(right, samples, x) - np.interp(left, samples, x)), step)
        located.append((location, float(np.clip(height, 0.0, 1.0)), width, float(prom)))

    orders = assign_orders([loc for loc, *_ in located], delta2=delta2, max_order=n1)
    peaks = []
    for (location, height, width, prom), order_n in zip(located, orders):
        degenerate = delta2 is not None and abs(location - delta2) < config.DEGENERATE_VICINITY
        peaks.append(ResonancePeak(location, height, width, order_n, prom, degenerate))

    logger.debug(f"Found {len(peaks)} peaks: " + ', '.join(f"{p.delta1:.4f}" for p in peaks))
    return sorted(peaks, key=lambda p: p.delta1)


def cut_refiner(g, workers=None):
    """
    Callable rescanning the delta1 cut of a single-column ScanGrid at new delta1 samples.
    """
    def refine(delta1_values):
        fine = replace(g, delta1_values=np.asarray(delta1_values, dtype=float))
        return scan_detunings(fine, workers=workers).cut_along_delta1()[1]
    return refine


def locate_resonance(p, initial, delta1_values, horizon=None, workers=None):
    """
    Peak location and height of the maximal occupation over a delta1 window at p.delta2.

    Returns:
        (delta1 of the refined maximum, refined height)
    """
    horizon = horizon if horizon is not None else default_horizon(initial.excitation)
    grid = ScanGrid(
        delta1_values=np.asarray(delta1_values, dtype=float),
        delta2_values=np.array([p.delta2]),
        params=p,
        initial_state=initial,
        horizon=horizon,
    )
    x, y = scan_detunings(grid, workers=workers).cut_along_delta1()
    location, height = _parabolic(x, y, int(np.argmax(y)))
    return location, float(np.clip(height, 0.0, 1.0))
