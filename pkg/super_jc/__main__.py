"""
Command-line entry point for the two-mode Jaynes-Cummings simulator.
"""
import os
import sys
import math
import argparse
import logging

import numpy as np
import pandas as pd

# Enable relative imports
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from super_jc import __version__, config
from super_jc.utils.logger import setup_logging
from super_jc.errors import InvalidParameterError, SuperJCError
from super_jc.core.manifold import BasisState, Level, enumerate_manifold, basis_vector
from super_jc.core.hamiltonian import ModelParams, build_hamiltonian
from super_jc.core.propagator import eigendecompose, occupation_trace
from super_jc.semiclassical.two_level import (
    DriveField,
    max_excitation,
    rabi_analytic,
    simulate_two_level,
    super_resonance_cw,
    super_resonance_pulsed,
)
from super_jc.analysis.scan import NYQUIST_AUTO, ScanGrid, default_horizon, scan_detunings
from super_jc.analysis.peaks import cut_refiner, find_peaks, predicted_line_delta1
from super_jc.analysis.reduction import (
    adiabatic_elimination,
    dichromatic_predict,
    n_photon_final_state,
    reduced_basis,
    reduced_hamiltonian6,
    resonance_predict_appendix,
    solve_appendix_delta1,
)
from super_jc.output import svg
from super_jc.output.writers import write_cut, write_json, write_scan, write_table, write_trace

logger = logging.getLogger('super_jc')

# Keys of the parsed arguments that do not influence results
_NON_RESULT_KEYS = ('func', 'output', 'plot', 'format', 'log_level', 'log_file', 'workers')


def parse_range(text):
    """Parse ``start:stop:count`` (inclusive, linear) or a single number."""
    parts = text.split(':')
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1 or (count == 1 and start != stop):
                raise ValueError("count must be >= 1 (and start == stop for a single point)")
            values = np.linspace(start, stop, count)
            if not np.all(np.isfinite(values)):
                raise ValueError("range must be finite")
            return values
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}: {e}")
    raise argparse.ArgumentTypeError(f"invalid range {text!r}, expected start:stop:count")


def parse_lambdas(text):
    """Parse ``lambda1,lambda2``."""
    try:
        values = tuple(float(v) for v in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid couplings {text!r}, expected 'lambda1,lambda2'")
    if len(values) != 2 or not all(math.isfinite(v) and v > 0 for v in values):
        raise argparse.ArgumentTypeError(f"invalid couplings {text!r}, expected two positive numbers")
    return values


def parse_state(text):
    try:
        return BasisState.parse(text)
    except InvalidParameterError as e:
        raise argparse.ArgumentTypeError(str(e))


def finite_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid number {text!r}")
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"value must be finite, got {text!r}")
    return value


def positive_float(text):
    value = finite_float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"value must be positive, got {text!r}")
    return value


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"value must be a positive integer, got {text!r}")
    return value


def parse_sampling(text):
    if text == NYQUIST_AUTO:
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"sampling must be '{NYQUIST_AUTO}' or an integer >= 2")
    if value < 2:
        raise argparse.ArgumentTypeError(f"sampling must be >= 2, got {value}")
    return value


def _single(values, flag):
    if values.size != 1:
        raise InvalidParameterError(f"{flag} takes a single value for this command")
    return float(values[0])


def _run_config(args, **resolved):
    """Resolved configuration embedded in every output file."""
    cfg = {'version': __version__}
    for key, value in sorted(vars(args).items()):
        if key in _NON_RESULT_KEYS or value is None:
            continue
        if isinstance(value, np.ndarray):
            value = value.tolist()
        elif isinstance(value, BasisState):
            value = str(value)
        elif isinstance(value, list):
            value = [str(v) for v in value]
        cfg[key] = value
    cfg.update(resolved)
    return cfg


def _model(args, delta1=0.0, delta2=0.0):
    lambda1, lambda2 = args.lambdas
    return ModelParams(delta1, delta2, lambda1, lambda2)


def cmd_dynamics(args):
    p = _model(args, _single(args.d1, '--d1'), _single(args.d2, '--d2'))
    m = enumerate_manifold(args.initial.excitation)
    d = eigendecompose(build_hamiltonian(m, p))
    times = np.linspace(0.0, args.t_end, args.samples)
    trace = occupation_trace(d, m, basis_vector(m, args.initial), times, states=args.state)
    cfg = _run_config(args, n_total=m.n_total, dim=m.dim)

    if args.output:
        write_trace(trace, args.output, cfg, args.format)
    if args.plot:
        svg.line_plot(trace.times, {'P_x': trace.p_excited, '<n1>': trace.n_mode1, '<n2>': trace.n_mode2},
                      args.plot, x_label='t * Lambda', y_label='occupation',
                      title=f"dynamics from {args.initial}")
    k = int(np.argmax(trace.p_excited))
    print(f"N_tot={m.n_total} dim={m.dim} max P_x={trace.p_excited[k]:.6f} at t={trace.times[k]:.6g}")


def _scan_grid(args):
    lambda1, lambda2 = args.lambdas
    horizon = args.horizon if args.horizon is not None else default_horizon(args.initial.excitation)
    return ScanGrid(
        delta1_values=args.d1,
        delta2_values=args.d2,
        params=ModelParams(0.0, 0.0, lambda1, lambda2),
        initial_state=args.initial,
        horizon=horizon,
        sampling=args.sampling,
    )


def _peak_summary(peaks):
    if not peaks:
        return "no peaks above background"
    return "peaks at delta1/Lambda: " + ', '.join(
        f"{pk.delta1:.3f} (height {pk.height:.3f}, N={pk.order_n})" for pk in peaks
    )


def cmd_scan(args):
    g = _scan_grid(args)
    result = scan_detunings(g, workers=args.workers)
    cfg = _run_config(args, horizon=g.horizon, sampling=g.sampling)

    if args.output:
        write_scan(result, args.output, cfg, args.format)

    n_rows, n_cols = g.shape
    if n_cols == 1 and n_rows >= 5:
        x, y = result.cut_along_delta1()
        peaks = find_peaks(x, y, delta2=float(g.delta2_values[0]), n1=g.initial_state.n1,
                           lambda1=g.params.lambda1, refine=cut_refiner(g, args.workers))
        if args.plot:
            svg.line_plot(x, {'max P_x': y}, args.plot, markers=[pk.delta1 for pk in peaks],
                          title=f"delta2 = {g.delta2_values[0]:g} Lambda")
        print(_peak_summary(peaks))
        return

    if args.plot:
        if n_rows > 1 and n_cols > 1:
            svg.heatmap(result.max_occupation, g.delta2_values, g.delta1_values, args.plot,
                        title=f"max P_x from {g.initial_state}")
        else:
            x, y = (g.delta2_values, result.max_occupation[0, :]) if n_rows == 1 else result.cut_along_delta1()
            svg.line_plot(x, {'max P_x': y}, args.plot,
                          x_label='delta2 / Lambda' if n_rows == 1 else 'delta1 / Lambda')
    i, j = np.unravel_index(int(np.argmax(result.max_occupation)), g.shape)
    print(
        f"max P_x={result.max_occupation[i, j]:.6f} at delta1={g.delta1_values[i]:.4f}, "
        f"delta2={g.delta2_values[j]:.4f}, t={result.argmax_time[i, j]:.6g}"
    )


def cmd_cut(args):
    g = _scan_grid(args)
    if g.shape[1] != 1:
        raise InvalidParameterError("--d2 takes a single value for a cut")
    result = scan_detunings(g, workers=args.workers)
    x, y = result.cut_along_delta1()
    peaks = find_peaks(x, y, args.exclusion, delta2=float(g.delta2_values[0]), n1=g.initial_state.n1,
                       lambda1=g.params.lambda1, prominence=args.prominence,
                       refine=cut_refiner(g, args.workers))
    cfg = _run_config(args, horizon=g.horizon, sampling=g.sampling)
    if args.output:
        write_cut(x, y, args.output, cfg, args.format, peaks)
    if args.plot:
        svg.line_plot(x, {'max P_x': y}, args.plot, markers=[pk.delta1 for pk in peaks],
                      title=f"delta2 = {g.delta2_values[0]:g} Lambda")
    print(_peak_summary(peaks))


def cmd_rabi(args):
    t_end = args.t_end if args.t_end is not None else 20.0 * math.pi / args.omega
    trace = simulate_two_level([DriveField.cw(args.omega, args.delta)], t_end, args.dt)
    deviation = float(np.max(np.abs(trace.p_excited - rabi_analytic(args.omega, args.delta, trace.times))))
    cfg = _run_config(args, t_end=t_end, units='Omega0')
    if args.output:
        write_trace(trace, args.output, cfg, args.format, units='Omega0')
    if args.plot:
        svg.line_plot(trace.times, {'P_x': trace.p_excited}, args.plot,
                      x_label='t * Omega0', y_label='P_x', title='Rabi oscillation')
    peak, t_peak = max_excitation(trace)
    print(f"max P_x={peak:.6f} at t={t_peak:.6g}, max deviation from analytic={deviation:.3e}")


def cmd_super_cw(args):
    delta2 = super_resonance_cw(args.omega0, args.d1)
    if not args.simulate:
        print(f"{delta2:.4f}")
        return
    t_end = args.t_end if args.t_end is not None else 15.16 * math.pi / args.omega0
    drives = [DriveField.cw(args.omega0, args.d1), DriveField.cw(args.omega0, delta2)]
    trace = simulate_two_level(drives, t_end, args.dt)
    cfg = _run_config(args, delta2=delta2, t_end=t_end, units='Omega0')
    if args.output:
        write_trace(trace, args.output, cfg, args.format, units='Omega0')
    if args.plot:
        svg.line_plot(trace.times, {'P_x': trace.p_excited}, args.plot,
                      x_label='t * Omega0', y_label='P_x', title='two-colour excitation')
    peak, t_peak = max_excitation(trace)
    print(f"{delta2:.4f} max P_x={peak:.6f} at t={t_peak:.6g}")


def cmd_super_pulsed(args):
    print(f"{super_resonance_pulsed(args.d1, args.omega1_max):.4f}")


def cmd_predict(args):
    initial = args.initial
    if initial.level is not Level.G:
        raise InvalidParameterError(f"predictions start from a ground-level state, got {initial}")
    p = _model(args)
    parts = []
    if args.d1 is not None:
        parts.append(f"delta2={resonance_predict_appendix(initial.n1, initial.n2, p, args.d1):.4f}")
    if args.d2 is not None:
        parts.append(f"delta1={solve_appendix_delta1(initial.n1, initial.n2, p, args.d2):.4f}")
        if args.order is not None:
            parts.append(f"line delta1={predicted_line_delta1(args.order, args.d2):.4f}")
    if args.order is not None:
        parts.append(f"final state {n_photon_final_state(initial, args.order)}")
    if args.omega_rabi is not None:
        if args.d1 is None:
            raise InvalidParameterError("--omega-rabi needs --d1")
        parts.append(f"dichromatic delta2={dichromatic_predict(args.d1, args.omega_rabi):.4f}")
    if not parts:
        raise InvalidParameterError("predict needs --d1, --d2, --order or --omega-rabi")
    print('; '.join(parts))


def cmd_reduce(args):
    initial = args.initial
    p = _model(args, args.d1, args.d2)
    h6 = reduced_hamiltonian6(initial.n1, initial.n2, p)
    eff = adiabatic_elimination(initial.n1, initial.n2, p)
    states = [str(s) for s in reduced_basis(initial.n1, initial.n2)]
    cfg = _run_config(args)

    if args.output:
        if args.format == 'json':
            write_json({
                'config': cfg,
                'basis': states,
                'reduced_hamiltonian': h6.entries,
                'e1': eff.e1,
                'e2': eff.e2,
                'omega_eff': eff.omega_eff,
                'predicted_delta2': eff.predicted_delta2,
                'slow_period': eff.slow_period,
                'validity_ratio': eff.validity_ratio,
            }, args.output)
        else:
            df = pd.DataFrame(h6.entries, columns=states)
            df.insert(0, 'state', states)
            write_table(df, args.output, cfg, [
                f"e1: {eff.e1:.12g}", f"e2: {eff.e2:.12g}", f"omega_eff: {eff.omega_eff:.12g}",
                f"predicted_delta2: {eff.predicted_delta2:.12g}",
            ])
    print(
        f"E1={eff.e1:.6f} E2={eff.e2:.6f} Omega_eff={eff.omega_eff:.6g} "
        f"predicted delta2={eff.predicted_delta2:.4f} slow period={eff.slow_period:.6g}"
        + ("" if eff.within_validity else " (outside validity range)")
    )


def build_parser():
    """Argument parser with one subcommand per analysis."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", help=f"Log level (default: {config.LOG_LEVEL})", default=None)
    common.add_argument("--log-file", help="Also log to this file", default=None)

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", "--output", help="Result file", default=None)
    out.add_argument("--format", choices=('csv', 'json'), default='csv', help="Result format (default: csv)")
    out.add_argument("--plot", help="Write an SVG plot to this path", default=None)

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--initial", type=parse_state, default=BasisState.parse('g,2,0'),
                       help="Initial basis state 'level,n1,n2' (default: g,2,0)")
    model.add_argument("--lambda", dest="lambdas", type=parse_lambdas, default=(1.0, 1.0),
                       help="Couplings 'lambda1,lambda2' (default: 1,1)")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--d1", type=parse_range, required=True, help="Delta1 / Lambda, value or start:stop:count")
    grid.add_argument("--d2", type=parse_range, required=True, help="Delta2 / Lambda, value or start:stop:count")
    grid.add_argument("--horizon", type=positive_float, default=None,
                      help="Maximal evolution time (default: 5000, or 50000 above two excitations)")
    grid.add_argument("--sampling", type=parse_sampling, default=NYQUIST_AUTO,
                      help=f"'{NYQUIST_AUTO}' or a fixed number of time samples")
    grid.add_argument("--workers", type=positive_int, default=None,
                      help=f"Worker threads (default: {config.SCAN_WORKERS}, env SUPER_JC_WORKERS)")

    parser = argparse.ArgumentParser(
        prog="super-jc",
        description="Two-mode Jaynes-Cummings simulator for two-colour excitation of a quantum emitter",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dynamics", parents=[common, out, model], help="Occupation dynamics from a basis state")
    p.add_argument("--d1", type=parse_range, required=True, help="Delta1 / Lambda")
    p.add_argument("--d2", type=parse_range, required=True, help="Delta2 / Lambda")
    p.add_argument("--t-end", type=positive_float, default=100.0, help="Final time (default: 100)")
    p.add_argument("--samples", type=positive_int, default=1001, help="Number of time samples (default: 1001)")
    p.add_argument("--state", type=parse_state, action="append", default=None,
                   help="Record the occupation of this basis state (repeatable)")
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("scan", parents=[common, out, model, grid], help="Maximal occupation over a detuning grid")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("cut", parents=[common, out, model, grid], help="Delta1 cut with resonance peaks")
    p.add_argument("--exclusion", type=positive_float, default=None,
                   help=f"Background exclusion threshold (default: {config.BACKGROUND_EXCLUSION})")
    p.add_argument("--prominence", type=positive_float, default=None,
                   help=f"Minimal peak prominence (default: {config.PEAK_PROMINENCE})")
    p.set_defaults(func=cmd_cut)

    p = sub.add_parser("rabi", parents=[common, out], help="Single CW drive against the analytic Rabi formula")
    p.add_argument("--omega", type=positive_float, default=1.0, help="Rabi frequency (default: 1)")
    p.add_argument("--delta", type=finite_float, default=0.0, help="Detuning / Omega0 (default: 0)")
    p.add_argument("--t-end", type=positive_float, default=None, help="Final time (default: 20 pi / Omega)")
    p.add_argument("--dt", type=positive_float, default=None, help="RK4 step")
    p.set_defaults(func=cmd_rabi)

    p = sub.add_parser("super-cw", parents=[common, out], help="CW two-colour resonance Delta2")
    p.add_argument("--omega0", type=positive_float, required=True, help="Common Rabi frequency")
    p.add_argument("--d1", type=finite_float, required=True, help="Delta1 / Omega0")
    p.add_argument("--simulate", action="store_true", help="Simulate both drives at the predicted Delta2")
    p.add_argument("--t-end", type=positive_float, default=None, help="Final time (default: 15.16 pi / Omega0)")
    p.add_argument("--dt", type=positive_float, default=None, help="RK4 step")
    p.set_defaults(func=cmd_super_cw)

    p = sub.add_parser("super-pulsed", parents=[common], help="Pulsed two-colour resonance Delta2")
    p.add_argument("--d1", type=finite_float, required=True, help="Delta1 / Omega0")
    p.add_argument("--omega1-max", type=positive_float, required=True, help="Peak Rabi frequency of drive 1")
    p.set_defaults(func=cmd_super_pulsed)

    p = sub.add_parser("predict", parents=[common, model], help="Closed-form resonance predictors")
    p.add_argument("--d1", type=finite_float, default=None, help="Delta1 / Lambda; predicts Delta2")
    p.add_argument("--d2", type=finite_float, default=None, help="Delta2 / Lambda; predicts Delta1")
    p.add_argument("--order", type=int, default=None, help="Scattering order N")
    p.add_argument("--omega-rabi", type=positive_float, default=None, help="Classical Rabi frequency")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("reduce", parents=[common, out, model], help="Effective two-level reduction")
    p.add_argument("--d1", type=finite_float, required=True, help="Delta1 / Lambda")
    p.add_argument("--d2", type=finite_float, required=True, help="Delta2 / Lambda")
    p.set_defaults(func=cmd_reduce)

    return parser


def main(argv=None):
    """Main entry point. Returns the exit status."""
    args = build_parser().parse_args(argv)

    try:
        setup_logging(log_level=args.log_level, log_file=args.log_file)
        args.func(args)
    except SuperJCError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"error [{e.category}]: {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
