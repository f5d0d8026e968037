"""
Command-line interface.

    omlrt sweep --config params.cfg --out results/
    omlrt figure --preset fig2 --out results/ --plot
    omlrt verify --config params.cfg --omega-pc 5.5
    omlrt stability --config params.cfg
    omlrt baseline --omega0 5 --kappa 1 [--sweep 0 10 2001 --out results/]

Exit codes: 0 success, 1 usage or configuration error, 2 numeric failure,
3 verification skipped because the parameters are unstable.
"""
import os
import sys
import json
import logging
import argparse
from typing import List, Optional

import numpy as np
from dotenv import load_dotenv

from omlrt.baseline import (
    baseline_sweep, bath_correlations, check_cavity, fwhm, green_single, thermal_occupation_ratio,
)
from omlrt.errors import ConfigError, ParameterError, OmlrtError
from omlrt.models import CavityParams, SweepSpec, SWEEP_OUTPUTS, complex_pair
from omlrt.observables import local_extrema
from omlrt.params import load_config, require_valid
from omlrt.plotting import emit_plot
from omlrt.presets import get_preset, preset_names
from omlrt.response import stability, static_determinant
from omlrt.sweep import run_sweep, write_sweep, parse_csv, format_float
from omlrt.timedomain import DEFAULT_DT
from omlrt.verify import run_verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_SKIPPED = 3

LOG_LEVEL_ENV = 'OMLRT_LOG_LEVEL'
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _write_text(out_dir: str, filename: str, text: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, filename)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.info(f"Wrote {path}")
    return path


def _spec_from_config(path: str) -> SweepSpec:
    params, sweep = load_config(path)
    missing = [key for key in ('omega_min', 'omega_max', 'n_points') if key not in sweep]
    if missing:
        raise ConfigError(f"Sweep needs {', '.join(missing)} in {path}")
    return SweepSpec(
        omega_min=sweep['omega_min'],
        omega_max=sweep['omega_max'],
        n_points=sweep['n_points'],
        params=params,
        outputs=sweep.get('outputs', SWEEP_OUTPUTS),
    )


def cmd_sweep(args) -> int:
    spec = _spec_from_config(args.config)
    write_sweep(spec, args.out, args.name)
    return EXIT_OK


def cmd_figure(args) -> int:
    preset = get_preset(args.preset)
    text = run_sweep(preset.spec)
    _write_text(args.out, f"{preset.name}.csv", text)

    _, table = parse_csv(text)
    summary = {
        'preset': preset.name,
        'description': preset.description,
        'sweep': preset.spec.to_dict(),
        'stability': stability(preset.spec.params).to_dict(),
    }
    for column in ('d_as', 'd_badag'):
        if column in table:
            maxima, minima = local_extrema(table[column])
            summary[f"{column}_maxima"] = [float(table['omega_pc'][i]) for i in maxima]
            summary[f"{column}_minima"] = [float(table['omega_pc'][i]) for i in minima]
    _write_text(args.out, f"{preset.name}.json", json.dumps(summary, indent=2))

    if args.plot:
        columns = args.columns.split(',') if args.columns else list(preset.plot_columns)
        emit_plot(text, columns, os.path.join(args.out, f"{preset.name}.svg"), title=preset.description)
    return EXIT_OK


def cmd_verify(args) -> int:
    params, _ = load_config(args.config)
    result = run_verify(params, args.omega_pc, dt=args.dt)
    print(json.dumps(result, indent=2))
    if result['status'] == 'skipped':
        return EXIT_SKIPPED
    return EXIT_OK if result['success'] else EXIT_NUMERIC


def cmd_stability(args) -> int:
    params, _ = load_config(args.config)
    require_valid(params)
    report = stability(params)
    output = report.to_dict()
    output['static_determinant'] = static_determinant(params)
    print(json.dumps(output, indent=2))
    return EXIT_OK


def cmd_baseline(args) -> int:
    params = CavityParams(omega0=args.omega0, kappa=args.kappa, eta=args.eta)
    check_cavity(params)

    if args.sweep:
        if not args.out:
            raise ConfigError("--sweep requires --out")
        omega_min, omega_max, n_points = args.sweep
        n_points = int(n_points)
        if not omega_min < omega_max or n_points < 2:
            raise ConfigError("--sweep needs OMIN < OMAX and N >= 2")
        rows = baseline_sweep(params, np.linspace(omega_min, omega_max, n_points))
        lines = ['omega,abs,re,im,rho']
        for i in range(n_points):
            lines.append(','.join(format_float(rows[key][i]) for key in ('omega', 'abs', 're', 'im', 'rho')))
        _write_text(args.out, 'baseline.csv', '\n'.join(lines) + '\n')
        return EXIT_OK

    grid = np.linspace(params.omega0 - 5 * params.kappa, params.omega0 + 5 * params.kappa, 10001)
    resonance = green_single(params, params.omega0)
    output = {
        'cavity': params.to_dict(),
        'green_at_resonance': complex_pair(resonance),
        'modulus_at_resonance': abs(resonance),
        'fwhm': fwhm(grid, green_single(params, grid)),
    }
    if args.thermal_ratio is not None:
        n_th = thermal_occupation_ratio(args.thermal_ratio)
        output['thermal_occupation'] = n_th
        output['bath_correlations'] = bath_correlations(n_th)
    print(json.dumps(output, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Linear response of a linearised optomechanical system")
    parser.add_argument("--verbose", action="store_true", help="Enable debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    sweep = subparsers.add_parser("sweep", help="Frequency sweep from a parameter file")
    sweep.add_argument("--config", required=True, help="Parameter file (key = value)")
    sweep.add_argument("--out", required=True, help="Output directory")
    sweep.add_argument("--name", default="sweep", help="Base name of the CSV file")
    sweep.set_defaults(func=cmd_sweep)

    figure = subparsers.add_parser("figure", help="Sweep a named figure preset")
    figure.add_argument("--preset", required=True, choices=preset_names())
    figure.add_argument("--out", required=True, help="Output directory")
    figure.add_argument("--plot", action="store_true", help="Also write an SVG plot")
    figure.add_argument("--columns", help="Comma-separated columns to plot (default: preset columns)")
    figure.set_defaults(func=cmd_figure)

    verify = subparsers.add_parser("verify", help="Check frequency-domain results in the time domain")
    verify.add_argument("--config", required=True, help="Parameter file (key = value)")
    verify.add_argument("--omega-pc", type=float, required=True, help="Probe-coupling detuning in units of kappa")
    verify.add_argument("--dt", type=float, default=DEFAULT_DT, help="Integration step in units of 1/kappa")
    verify.set_defaults(func=cmd_verify)

    stab = subparsers.add_parser("stability", help="Eigenvalues of the drift matrix")
    stab.add_argument("--config", required=True, help="Parameter file (key = value)")
    stab.set_defaults(func=cmd_stability)

    baseline = subparsers.add_parser("baseline", help="Single-mode cavity reference")
    baseline.add_argument("--omega0", type=float, required=True, help="Cavity resonance")
    baseline.add_argument("--kappa", type=float, required=True, help="Cavity damping rate")
    baseline.add_argument("--eta", type=float, default=0.0, help="Pump rate")
    baseline.add_argument("--sweep", type=float, nargs=3, metavar=("OMIN", "OMAX", "N"),
                          help="Write a CSV of the Green's function on this grid")
    baseline.add_argument("--out", help="Output directory for --sweep")
    baseline.add_argument("--thermal-ratio", type=float, help="hbar omega0 / k_B T of the bath")
    baseline.set_defaults(func=cmd_baseline)

    return parser


def setup_logging(verbose: bool = False) -> None:
    if verbose:
        level = logging.DEBUG
    else:
        level = getattr(logging, os.environ.get(LOG_LEVEL_ENV, 'INFO').upper(), logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT)


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    setup_logging(args.verbose)

    try:
        return args.func(args)
    except (ConfigError, ParameterError) as e:
        logger.error(str(e))
        return EXIT_USAGE
    except OmlrtError as e:
        logger.error(f"Numeric failure: {e}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
