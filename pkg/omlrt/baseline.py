"""
Single-mode cavity with fixed mirrors, the exactly solvable reference case.
"""
import math
import logging
from typing import Dict

import numpy as np
from scipy.constants import hbar, k as k_boltzmann

from omlrt.errors import ParameterError
from omlrt.models import CavityParams
from omlrt.observables import window_half_width

logger = logging.getLogger(__name__)

# expm1 overflows a double a little above 709.
EXP_OVERFLOW = 700.0


def check_cavity(params: CavityParams) -> None:
    if not params.kappa > 0:
        raise ParameterError("kappa must be > 0")
    if not params.omega0 > 0:
        raise ParameterError("omega0 must be > 0")
    if params.eta < 0:
        raise ParameterError("eta must be >= 0")


def green_single(params: CavityParams, omega):
    """G_aadag(omega) = 1 / (omega - omega0 + i kappa/2). Accepts scalars or arrays."""
    if np.ndim(omega):
        return 1 / (np.asarray(omega, dtype=float) - params.omega0 + 0.5j * params.kappa)
    return 1 / complex(omega - params.omega0, params.kappa / 2)


def green_single_aa(params: CavityParams, omega) -> complex:
    # No initial jump feeds this function, so it vanishes at all times.
    return 0j


def response_single(params: CavityParams, omega_p: float) -> complex:
    """Amplitude of the exp(-i omega_p t) oscillation of <a(t)> under a pump of rate eta."""
    if not omega_p > 0:
        raise ParameterError("omega_p must be > 0")
    return params.eta * green_single(params, omega_p)


def baseline_sweep(params: CavityParams, omegas) -> Dict[str, np.ndarray]:
    check_cavity(params)
    w = np.asarray(omegas, dtype=float)
    greens = green_single(params, w)
    return {
        'omega': w,
        'abs': np.abs(greens),
        're': greens.real,
        'im': greens.imag,
        'rho': -(2 / np.pi) * greens.imag,
    }


def fwhm(omegas, greens) -> float:
    """Full width at half maximum of |G|^2 sampled on a grid."""
    power = np.abs(np.asarray(greens)) ** 2
    peak = int(np.argmax(power))
    return 2 * window_half_width(omegas, power, peak, power[peak] / 2)


def thermal_occupation_ratio(ratio: float) -> float:
    """Bose occupation 1/(exp(x) - 1) for x = hbar omega0 / k_B T."""
    if ratio <= 0:
        raise ParameterError(f"hbar omega0 / k_B T must be > 0, got {ratio}")
    if ratio > EXP_OVERFLOW:
        # 1/(e^x - 1) and e^-x agree to double precision here
        return math.exp(-ratio)
    return 1 / math.expm1(ratio)


def thermal_occupation(omega0_abs: float, temperature: float) -> float:
    """
    Mean thermal excitation number of a bath mode.

    omega0_abs in rad/s, temperature in kelvin. Zero temperature gives 0.
    """
    if not omega0_abs > 0:
        raise ParameterError("omega0_abs must be > 0")
    if temperature < 0:
        raise ParameterError("temperature must be >= 0")
    if temperature == 0:
        return 0.0
    return thermal_occupation_ratio(hbar * omega0_abs / (k_boltzmann * temperature))


def bath_correlations(n_th: float) -> Dict[str, float]:
    """White-noise input correlations of a thermal bath with occupation n_th."""
    return {
        'a_in_dag_a_in': n_th,
        'a_in_a_in_dag': n_th + 1,
        'commutator': 1.0,
    }
