"""
Parameter handling: validation, mean fields, unit normalisation and the
key-value configuration format read by the CLI.
"""
import os
import math
import logging
from typing import Dict, Any, Tuple, Mapping

from omlrt.errors import ConfigError, ParameterError, SingularDetuningError
from omlrt.models import SystemParams, MeanFields, ValidationReport, SWEEP_OUTPUTS

logger = logging.getLogger(__name__)

REQUIRED_KEYS = ('delta', 'omega_m', 'g', 'gamma_m', 'kappa_cp')
OPTIONAL_KEYS = ('eps_b', 'eps_t', 'kappa', 'zeta')
SWEEP_KEYS = ('omega_min', 'omega_max', 'n_points', 'outputs')

# Fields carrying a rate or a frequency; these scale with kappa.
RATE_KEYS = ('delta', 'omega_m', 'g', 'gamma_m', 'kappa_cp', 'zeta', 'omega_min', 'omega_max')


def validate(params: SystemParams) -> ValidationReport:
    """
    Check every invariant of a parameter set.

    Never raises; failures are listed in the returned report.
    """
    violations = []

    for name in ('delta', 'omega_m', 'g', 'gamma_m', 'kappa_cp', 'eps_b', 'eps_t', 'kappa'):
        value = getattr(params, name)
        if not math.isfinite(value):
            violations.append(f"{name} must be finite")
    if not all(math.isfinite(part) for part in (complex(params.zeta).real, complex(params.zeta).imag)):
        violations.append("zeta must be finite")

    if not params.kappa > 0:
        violations.append("kappa must be > 0")
    if not params.gamma_m > 0:
        violations.append("gamma_m must be > 0")
    if not params.omega_m > 0:
        violations.append("omega_m must be > 0")
    if params.g < 0:
        violations.append("g must be >= 0")
    if params.eps_b < 0:
        violations.append("eps_b must be >= 0")
    if params.eps_t < 0:
        violations.append("eps_t must be >= 0")
    if params.kappa_cp < 0:
        violations.append("kappa_cp must be >= 0")
    elif params.kappa_cp > params.kappa:
        violations.append("kappa_cp must be ≤ kappa")

    return ValidationReport(passed=not violations, violations=tuple(violations))


def require_valid(params: SystemParams) -> None:
    """Raise ParameterError if the parameter set fails validation."""
    report = validate(params)
    if not report.passed:
        raise ParameterError("Invalid parameters: " + "; ".join(report.violations))


def mean_fields(eta: float, g0: float, delta: float, omega_m: float, gamma_m: float) -> MeanFields:
    """
    Steady-state mean fields of the driven system.

    alpha = -eta/delta, beta = g0 alpha^2 / (omega_m - i gamma_m/2) and the
    effective coupling g0 alpha. beta uses the damped denominator.
    """
    if delta == 0:
        raise SingularDetuningError("delta must be non-zero to compute the optical mean field")

    alpha = -eta / delta
    beta = g0 * alpha ** 2 / complex(omega_m, -gamma_m / 2)
    return MeanFields(alpha=complex(alpha), beta=complex(beta), g_eff=g0 * alpha)


def effective_detuning(omega0: float, omega_c: float, g: float, omega_m: float) -> float:
    """Cavity detuning including the static radiation-pressure shift."""
    if omega_m <= 0:
        raise ParameterError("omega_m must be > 0")
    return omega0 - omega_c - 2 * g ** 2 / omega_m


def normalize(raw: Mapping[str, Any], kappa: float) -> SystemParams:
    """Build SystemParams from raw rates by dividing every rate by kappa."""
    if not kappa > 0:
        raise ConfigError(f"kappa must be > 0 to normalise, got {kappa}")

    values = {}
    for key, value in raw.items():
        if key not in REQUIRED_KEYS + OPTIONAL_KEYS:
            continue
        values[key] = value / kappa if key in RATE_KEYS else value
    values['kappa'] = 1.0

    missing = [key for key in REQUIRED_KEYS if key not in values]
    if missing:
        raise ConfigError(f"Missing parameters: {', '.join(missing)}")
    return SystemParams(**values)


def _parse_value(key: str, text: str, line_no: int) -> Any:
    try:
        if key == 'zeta':
            return complex(text.replace(' ', ''))
        if key == 'n_points':
            return int(text)
        if key == 'outputs':
            outputs = tuple(item.strip() for item in text.split(',') if item.strip())
            unknown = [item for item in outputs if item not in SWEEP_OUTPUTS]
            if unknown:
                raise ConfigError(f"line {line_no}: unknown outputs {', '.join(unknown)}")
            return outputs
        if key == 'units':
            if text not in ('kappa', 'raw'):
                raise ConfigError(f"line {line_no}: units must be 'kappa' or 'raw', got '{text}'")
            return text
        return float(text)
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"line {line_no}: cannot parse value for '{key}': {text}") from e


def parse_config_text(text: str) -> Tuple[SystemParams, Dict[str, Any]]:
    """
    Parse the key-value parameter format.

    Returns the (kappa-normalised) parameters and a dictionary of the sweep
    fields present in the text.
    """
    allowed = REQUIRED_KEYS + OPTIONAL_KEYS + SWEEP_KEYS + ('units',)
    entries: Dict[str, Any] = {}

    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(f"line {line_no}: expected 'key = value', got '{line}'")
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in allowed:
            raise ConfigError(f"line {line_no}: unknown key '{key}'")
        if key in entries:
            raise ConfigError(f"line {line_no}: duplicate key '{key}'")
        entries[key] = _parse_value(key, value, line_no)

    units = entries.pop('units', 'kappa')
    sweep = {key: entries.pop(key) for key in SWEEP_KEYS if key in entries}

    if units == 'raw':
        kappa = entries.get('kappa')
        if kappa is None:
            raise ConfigError("units = raw requires an explicit kappa")
        if not kappa > 0:
            raise ConfigError(f"kappa must be > 0 to normalise, got {kappa}")
        for key in ('omega_min', 'omega_max'):
            if key in sweep:
                sweep[key] = sweep[key] / kappa
        params = normalize(entries, kappa)
    else:
        if entries.get('kappa', 1.0) != 1.0:
            raise ConfigError(f"kappa = {entries['kappa']} needs units = raw; in kappa units it is 1 by definition")
        missing = [key for key in REQUIRED_KEYS if key not in entries]
        if missing:
            raise ConfigError(f"Missing parameters: {', '.join(missing)}")
        params = SystemParams(**entries)

    logger.debug(f"Parsed parameters: {params.to_dict()}")
    return params, sweep


def load_config(path: str) -> Tuple[SystemParams, Dict[str, Any]]:
    """Read a parameter file from disk."""
    if not os.path.exists(path):
        raise ConfigError(f"Config file not found: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        text = f.read()
    logger.info(f"Loading parameters from {path}")
    return parse_config_text(text)
