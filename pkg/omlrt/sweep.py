"""
Frequency sweeps: parallel evaluation over the omega_pc grid and CSV output.
"""
import os
import io
import csv
import sys
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Dict, Any, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from omlrt.errors import ConfigError, StabilityError
from omlrt.models import SweepSpec, SWEEP_OUTPUTS
from omlrt.observables import observables_grid
from omlrt.params import validate
from omlrt.response import stability

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    'omega_pc', 'd_as', 'd_s', 'rho', 'r_power', 'r_power_approx', 'd_badag', 'd_ba',
    'g_aadag_re', 'g_aadag_im', 'g_aa_re', 'g_aa_im', 'g_badag_re', 'g_badag_im', 'g_ba_re', 'g_ba_im',
    'flag',
)
# Frequency argument of each Green's-function column.
GREENS_ARGUMENTS = {'g_aadag': '+omega_pc', 'g_aa': '-omega_pc', 'g_badag': '+omega_pc', 'g_ba': '-omega_pc'}
CHUNK_SIZE = 512
THREADS_ENV = 'OMLRT_THREADS'


def format_float(value: float) -> str:
    """17 significant digits, lowercase scientific notation."""
    return f"{value:.16e}"


def worker_count() -> int:
    """Number of sweep threads: OMLRT_THREADS if set, else min(8, cpu count)."""
    value = os.environ.get(THREADS_ENV)
    if value:
        try:
            count = int(value)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got '{value}'") from None
        if count < 1:
            raise ConfigError(f"{THREADS_ENV} must be >= 1, got {count}")
        return count
    return min(8, os.cpu_count() or 1)


def validate_spec(spec: SweepSpec) -> None:
    if not spec.omega_min < spec.omega_max:
        raise ConfigError(f"omega_min ({spec.omega_min}) must be below omega_max ({spec.omega_max})")
    if spec.n_points < 2:
        raise ConfigError(f"n_points must be >= 2, got {spec.n_points}")
    unknown = [name for name in spec.outputs if name not in SWEEP_OUTPUTS]
    if unknown:
        raise ConfigError(f"Unknown outputs: {', '.join(unknown)}")
    report = validate(spec.params)
    if not report.passed:
        raise ConfigError("Invalid parameters: " + "; ".join(report.violations))


def selected_columns(outputs) -> List[str]:
    columns = ['omega_pc']
    for name in CSV_COLUMNS[1:-1]:
        if name in outputs or (name.startswith('g_') and 'greens' in outputs):
            columns.append(name)
    columns.append('flag')
    return columns


def compute_sweep(spec: SweepSpec, max_workers: Optional[int] = None) -> Dict[str, np.ndarray]:
    """
    Evaluate every observable on the sweep grid.

    The grid is split into chunks evaluated on a thread pool; results are
    reassembled in grid order.
    """
    validate_spec(spec)
    grid = spec.grid()
    workers = max_workers or worker_count()
    chunks = [grid[i:i + CHUNK_SIZE] for i in range(0, len(grid), CHUNK_SIZE)]

    logger.info(f"Sweeping {len(grid)} points in {len(chunks)} chunks on {workers} threads")
    results: List[Optional[Dict[str, np.ndarray]]] = [None] * len(chunks)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(observables_grid, spec.params, chunk): i for i, chunk in enumerate(chunks)}
        progress = tqdm(as_completed(futures), total=len(futures), desc="sweep", unit="chunk",
                        disable=not sys.stderr.isatty())
        for future in progress:
            results[futures[future]] = future.result()

    values = {key: np.concatenate([chunk[key] for chunk in results]) for key in results[0]}
    n_singular = int(np.count_nonzero(values['singular']))
    if n_singular:
        logger.warning(f"{n_singular} singular grid points flagged")
    return values


def _header(spec: SweepSpec) -> List[Tuple[str, str]]:
    params = spec.params
    lines = [(name, repr(value)) for name, value in (
        ('delta', params.delta), ('omega_m', params.omega_m), ('g', params.g), ('gamma_m', params.gamma_m),
        ('kappa_cp', params.kappa_cp), ('eps_b', params.eps_b), ('eps_t', params.eps_t),
        ('kappa', params.kappa), ('zeta', complex(params.zeta)),
        ('omega_min', spec.omega_min), ('omega_max', spec.omega_max), ('n_points', spec.n_points),
    )]
    lines.extend((f"{name}_argument", argument) for name, argument in GREENS_ARGUMENTS.items())
    try:
        report = stability(params)
        lines.append(('stable', str(report.stable).lower()))
        lines.append(('margin', format_float(report.margin)))
    except StabilityError as e:
        logger.warning(f"Stability undetermined: {e}")
        lines.append(('stable', 'unknown'))
    return lines


def run_sweep(spec: SweepSpec, max_workers: Optional[int] = None) -> str:
    """Render a sweep as CSV text with a '#'-prefixed parameter header."""
    values = compute_sweep(spec, max_workers=max_workers)
    columns = selected_columns(spec.outputs)

    buffer = io.StringIO()
    for key, value in _header(spec):
        buffer.write(f"# {key} = {value}\n")
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)

    for i in range(len(values['omega_pc'])):
        singular = bool(values['singular'][i])
        row = []
        for column in columns:
            if column == 'flag':
                row.append('singular' if singular else 'ok')
            elif column == 'omega_pc':
                row.append(format_float(values['omega_pc'][i]))
            elif singular:
                row.append('nan')
            elif column.startswith('g_'):
                name, part = column.rsplit('_', 1)
                number = values[name][i]
                row.append(format_float(number.real if part == 're' else number.imag))
            else:
                row.append(format_float(values[column][i]))
        writer.writerow(row)

    return buffer.getvalue()


def write_sweep(spec: SweepSpec, out_dir: str, name: str = 'sweep', max_workers: Optional[int] = None) -> str:
    """Write '<name>.csv' into out_dir and return its path."""
    if os.path.basename(name) != name:
        raise ConfigError(f"Output name must not contain a path: {name}")
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{name}.csv")
    text = run_sweep(spec, max_workers=max_workers)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.info(f"Wrote {path}")
    return path


def parse_csv(text: str) -> Tuple[Dict[str, str], Dict[str, Any]]:
    """
    Split sweep CSV text into its header entries and columns.

    Numeric columns become float arrays; 'flag' stays a list of strings.
    """
    header: Dict[str, str] = {}
    body = []
    for line in text.splitlines():
        if line.startswith('#'):
            key, _, value = line[1:].partition('=')
            header[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)

    if not body:
        raise ConfigError("CSV has no column header")
    reader = csv.reader(body)
    names = next(reader)
    rows = list(reader)

    columns: Dict[str, Any] = {}
    for j, name in enumerate(names):
        cells = [row[j] for row in rows]
        columns[name] = cells if name == 'flag' else np.array([float(cell) for cell in cells])
    return header, columns


def read_csv(path: str) -> Tuple[Dict[str, str], Dict[str, Any]]:
    if not os.path.exists(path):
        raise ConfigError(f"CSV file not found: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        return parse_csv(f.read())
