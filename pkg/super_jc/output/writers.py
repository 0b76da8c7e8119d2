"""
CSV and JSON writers for scans, cuts and time traces.

Every file carries the resolved run configuration: `#` comment lines ahead of the CSV table,
or a `config` block in JSON. Floats are written with a fixed format and no timestamps are
embedded, so identical runs produce byte-identical files.
"""
import os
import json
import logging

import numpy as np
import pandas as pd

from super_jc.errors import InvalidParameterError, OutputError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.12g'
FORMATS = ('csv', 'json')


def _jsonify(x):
    """Convert numpy and domain objects to JSON-native values."""
    if isinstance(x, (np.integer, np.floating, np.bool_)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    return str(x)


def _config_lines(run_config):
    return [
        f"# {key}: {json.dumps(value, default=_jsonify, sort_keys=True)}"
        for key, value in (run_config or {}).items()
    ]


def _ensure_parent(path):
    parent = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent):
        os.makedirs(parent, exist_ok=True)


def write_table(df, path, run_config=None, comments=()):
    """
    Write a DataFrame as CSV preceded by `#` comment lines.

    Raises:
        OutputError: if the file cannot be written
    """
    try:
        _ensure_parent(path)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            for line in _config_lines(run_config):
                f.write(line + '\n')
            for line in comments:
                f.write(f"# {line}\n")
            df.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {len(df)} rows to {path}")
    return path


def write_json(payload, path):
    """
    Write a mapping as indented JSON.

    Raises:
        OutputError: if the file cannot be written
    """
    try:
        _ensure_parent(path)
        with open(path, 'w', encoding='utf-8', newline='') as f:
            json.dump(payload, f, default=_jsonify, ensure_ascii=False, indent=2)
            f.write('\n')
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {path}")
    return path


def _check_format(fmt):
    if fmt not in FORMATS:
        raise InvalidParameterError(f"unknown output format {fmt!r}, expected one of {FORMATS}")


def scan_table(result):
    """Scan result as rows (delta1, delta2, max_occupation, t_at_max) in row-major grid order."""
    d1, d2 = np.meshgrid(result.grid.delta1_values, result.grid.delta2_values, indexing='ij')
    return pd.DataFrame({
        'delta1': d1.ravel(),
        'delta2': d2.ravel(),
        'max_occupation': result.max_occupation.ravel(),
        't_at_max': result.argmax_time.ravel(),
    })


def write_scan(result, path, run_config=None, fmt='csv'):
    """
    Write a ScanResult.

    CSV: config comment lines, then one row per grid point. Points with
    |delta1 - delta2| below the degenerate threshold are listed in a comment line.
    JSON: the ScanResult fields plus the config block.
    """
    _check_format(fmt)
    if fmt == 'json':
        payload = {
            'config': run_config or {},
            'delta1_values': result.grid.delta1_values,
            'delta2_values': result.grid.delta2_values,
            'max_occupation': result.max_occupation,
            'argmax_time': result.argmax_time,
            'degenerate_vicinity': result.degenerate_vicinity,
            'metadata': result.metadata,
        }
        return write_json(payload, path)

    comments = [f"{key}: {json.dumps(value, default=_jsonify)}" for key, value in result.metadata.items()]
    flagged = np.argwhere(result.degenerate_vicinity)
    if flagged.size:
        comments.append(
            f"degenerate_vicinity: {flagged.shape[0]} points with |delta1 - delta2| < "
            f"{result.metadata.get('degenerate_vicinity_threshold')}"
        )
    comments.append("units: detunings in Lambda, times in 1/Lambda")
    return write_table(scan_table(result), path, run_config, comments)


def trace_table(trace):
    """Time trace (quantized OccupationTrace or semiclassical TwoLevelTrace) as a DataFrame."""
    columns = {'t': trace.times, 'p_excited': trace.p_excited}
    if hasattr(trace, 'n_mode1'):
        columns['n_mode1'] = trace.n_mode1
        columns['n_mode2'] = trace.n_mode2
        for state, values in trace.state_occupations.items():
            columns[f"p[{state.level.value},{state.n1},{state.n2}]"] = values
    elif trace.norm is not None:
        columns['norm'] = trace.norm
    return pd.DataFrame(columns)


def write_trace(trace, path, run_config=None, fmt='csv', units='Lambda'):
    """Write a time trace as CSV or JSON."""
    _check_format(fmt)
    df = trace_table(trace)
    if fmt == 'json':
        payload = {'config': run_config or {}, 'units': units}
        payload.update({name: df[name].to_numpy() for name in df.columns})
        return write_json(payload, path)
    return write_table(df, path, run_config, [f"units: times in 1/{units}"])


def write_cut(delta1, values, path, run_config=None, fmt='csv', peaks=()):
    """Write a 1-D cut along delta1 with the detected peaks."""
    _check_format(fmt)
    df = pd.DataFrame({'delta1': np.asarray(delta1, dtype=float), 'max_occupation': np.asarray(values, dtype=float)})
    peak_rows = [
        {'delta1': pk.delta1, 'height': pk.height, 'width': pk.width, 'order_n': pk.order_n,
         'prominence': pk.prominence, 'degenerate_vicinity': pk.degenerate_vicinity,
         'classification': pk.classification}
        for pk in peaks
    ]
    if fmt == 'json':
        payload = {'config': run_config or {}, 'delta1_values': df['delta1'].to_numpy(),
                   'max_occupation': df['max_occupation'].to_numpy(), 'peaks': peak_rows}
        return write_json(payload, path)
    comments = [f"peak: {json.dumps(row, default=_jsonify)}" for row in peak_rows]
    return write_table(df, path, run_config, comments)
