"""
Retarded Green's functions and the probe observables built from them:
sideband amplitudes, spectral function, reflection, and the optical and
mechanical response signals.
"""
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.fft import fft, fftfreq
from scipy.signal import find_peaks

from omlrt.errors import SingularityError
from omlrt.models import SystemParams, GreensSet, ObservablePoint, ResponseSignal
from omlrt.params import require_valid
from omlrt.response import closed_forms, singular_mask, susceptibility_analytic

logger = logging.getLogger(__name__)

# Value of the step function at omega_pc = 0.
THETA_AT_ZERO = 0.5

CAUSALITY_OMEGA_MAX = 200.0
CAUSALITY_POINTS = 2 ** 16


def greens_at(params: SystemParams, omega: float) -> GreensSet:
    """Green's functions of both modes at one frequency."""
    chi = susceptibility_analytic(params, omega)
    return GreensSet(
        omega=float(omega),
        g_aadag=-1j * chi.chi_aa,
        g_aa=1j * chi.chi_aadag,
        g_badag=-1j * chi.chi_ba,
        g_ba=1j * chi.chi_badag,
    )


def greens_grid(params: SystemParams, omegas) -> Dict[str, np.ndarray]:
    """
    Green's functions on a grid.

    The 'singular' entry marks points where D vanishes; their values are
    not meaningful.
    """
    forms = closed_forms(params, omegas)
    return {
        'omega': forms['omega'],
        'g_aadag': -1j * forms['chi_aa'],
        'g_aa': 1j * forms['chi_aadag'],
        'g_badag': -1j * forms['chi_ba'],
        'g_ba': 1j * forms['chi_badag'],
        'singular': singular_mask(forms),
    }


def heaviside(x) -> np.ndarray:
    return np.heaviside(x, THETA_AT_ZERO)


def sideband_amplitudes(params: SystemParams, omega_pc: float) -> Tuple[float, float]:
    """Anti-Stokes and Stokes amplitudes (d_as, d_s) at one probe detuning."""
    require_valid(params)
    forward = greens_at(params, omega_pc)
    backward = forward if omega_pc == 0 else greens_at(params, -omega_pc)
    up = heaviside(omega_pc)
    down = heaviside(-omega_pc)
    d_as = abs(forward.g_aadag) * up + abs(backward.g_aa) * down
    d_s = abs(forward.g_aadag) * down + abs(backward.g_aa) * up
    return float(d_as), float(d_s)


def observables_grid(params: SystemParams, omegas) -> Dict[str, np.ndarray]:
    """
    Every observable on a grid of probe detunings, as arrays.

    Includes the four Green's functions (g_aa and g_ba evaluated at -omega_pc,
    the argument entering the sidebands) and a boolean 'singular' mask.
    """
    require_valid(params)
    w = np.asarray(omegas, dtype=float)
    forward = greens_grid(params, w)
    backward = greens_grid(params, -w)

    up = heaviside(w)
    down = heaviside(-w)
    g_aadag = forward['g_aadag']
    g_aa_neg = backward['g_aa']

    with np.errstate(invalid='ignore'):
        rho = -(2 / np.pi) * g_aadag.imag
        r_complex = 1 - 1j * params.kappa_cp * g_aadag
        result = {
            'omega_pc': w,
            'd_as': np.abs(g_aadag) * up + np.abs(g_aa_neg) * down,
            'd_s': np.abs(g_aadag) * down + np.abs(g_aa_neg) * up,
            'rho': rho,
            'r_complex': r_complex,
            'r_power': np.abs(r_complex) ** 2,
            'r_power_approx': 1 - params.kappa_cp * rho,
            'd_badag': np.abs(forward['g_badag']),
            'd_ba': np.abs(backward['g_ba']),
            'g_aadag': g_aadag,
            'g_aa': g_aa_neg,
            'g_badag': forward['g_badag'],
            'g_ba': backward['g_ba'],
        }
    result['singular'] = forward['singular'] | backward['singular']
    return result


def spectral_and_reflection(params: SystemParams, omega: float) -> ObservablePoint:
    """All observables at one frequency, including exact and approximate reflection."""
    values = observables_grid(params, np.array([omega]))
    if values['singular'][0]:
        raise SingularityError(f"D(omega) vanishes at omega={omega}")
    return _point_from_grid(values, 0)


def _point_from_grid(values: Dict[str, np.ndarray], index: int) -> ObservablePoint:
    return ObservablePoint(
        omega_pc=float(values['omega_pc'][index]),
        d_as=float(values['d_as'][index]),
        d_s=float(values['d_s'][index]),
        rho=float(values['rho'][index]),
        r_complex=complex(values['r_complex'][index]),
        r_power=float(values['r_power'][index]),
        r_power_approx=float(values['r_power_approx'][index]),
        d_badag=float(values['d_badag'][index]),
        d_ba=float(values['d_ba'][index]),
    )


def sweep_observables(params: SystemParams, omegas) -> List[Optional[Tuple[ObservablePoint, GreensSet]]]:
    """
    Observable points and Green's functions for each grid value.

    Singular grid points yield None.
    """
    values = observables_grid(params, omegas)
    rows = []
    for i in range(len(values['omega_pc'])):
        if values['singular'][i]:
            logger.warning(f"Singular point at omega_pc={values['omega_pc'][i]}")
            rows.append(None)
            continue
        greens = GreensSet(
            omega=float(values['omega_pc'][i]),
            g_aadag=complex(values['g_aadag'][i]),
            g_aa=complex(values['g_aa'][i]),
            g_badag=complex(values['g_badag'][i]),
            g_ba=complex(values['g_ba'][i]),
        )
        rows.append((_point_from_grid(values, i), greens))
    return rows


def optical_response(params: SystemParams, alpha: complex, omega_pc: float) -> ResponseSignal:
    """Cavity mean value with the two probe sidebands in the rotating frame."""
    zeta = complex(params.zeta)
    amp_neg = zeta.conjugate() * greens_at(params, omega_pc).g_aadag
    amp_pos = zeta * greens_at(params, -omega_pc).g_aa
    return ResponseSignal(mean_offset=complex(alpha), amp_neg=amp_neg, amp_pos=amp_pos, omega_pc=float(omega_pc))


def mechanical_response(params: SystemParams, beta: complex, omega_pc: float) -> ResponseSignal:
    """Mechanical mean value with the probe-driven sidebands."""
    zeta = complex(params.zeta)
    amp_neg = zeta.conjugate() * greens_at(params, omega_pc).g_badag
    amp_pos = zeta * greens_at(params, -omega_pc).g_ba
    return ResponseSignal(mean_offset=complex(beta), amp_neg=amp_neg, amp_pos=amp_pos, omega_pc=float(omega_pc))


def lab_frame_signal(signal: ResponseSignal, omega_c: float, times) -> np.ndarray:
    """
    Reconstruct the time trace of a response signal.

    omega_c is the carrier applied to the cavity field; pass 0 for the
    mechanical mode or for the rotating frame.
    """
    t = np.asarray(times, dtype=float)
    w = signal.omega_pc
    return (signal.mean_offset * np.exp(-1j * omega_c * t)
            + signal.amp_neg * np.exp(-1j * (omega_c + w) * t)
            + signal.amp_pos * np.exp(-1j * (omega_c - w) * t))


def causality_check(params: SystemParams, omega_max: float = CAUSALITY_OMEGA_MAX,
                    n_points: int = CAUSALITY_POINTS) -> float:
    """
    Relative weight of g_aadag at negative times.

    The bare cavity Lorentzian 1/(omega - delta + i kappa/2) is subtracted
    before the inverse transform and its exact causal inverse added back, so
    the slow 1/omega tail does not leak through the finite window. Returns
    max|G(tau < 0)| / max|G|.
    """
    require_valid(params)
    d_omega = 2 * omega_max / n_points
    omegas = -omega_max + d_omega * np.arange(n_points)
    greens = greens_grid(params, omegas)
    if np.any(greens['singular']):
        raise SingularityError("Singular point on the causality grid")

    bare = 1 / (omegas - params.delta + 0.5j * params.kappa)
    taus = 2 * np.pi * fftfreq(n_points, d_omega)
    correction = (d_omega / (2 * np.pi)) * np.exp(-1j * omegas[0] * taus) * fft(greens['g_aadag'] - bare)

    step = np.heaviside(taus, THETA_AT_ZERO)
    exact = -1j * step * np.exp((-1j * params.delta - params.kappa / 2) * np.maximum(taus, 0.0))
    g_time = correction + exact

    peak = np.max(np.abs(g_time))
    leak = np.max(np.abs(g_time[taus < 0]))
    ratio = float(leak / peak)
    logger.debug(f"Causality leak ratio {ratio:.3e}")
    return ratio


def local_extrema(values) -> Tuple[np.ndarray, np.ndarray]:
    """Indices of interior local maxima and minima."""
    y = np.asarray(values, dtype=float)
    maxima, _ = find_peaks(y)
    minima, _ = find_peaks(-y)
    return maxima, minima


def window_half_width(omegas, values, center: int, level: float) -> float:
    """
    Half the distance between the crossings of 'level' on either side of
    grid index 'center', linearly interpolated.
    """
    w = np.asarray(omegas, dtype=float)
    y = np.asarray(values, dtype=float) - level

    def crossing(direction: int) -> float:
        i = center
        while 0 <= i + direction < len(y):
            j = i + direction
            if y[j] == 0 or np.sign(y[j]) != np.sign(y[i]):
                return w[i] + (w[j] - w[i]) * y[i] / (y[i] - y[j])
            i = j
        raise ValueError(f"No crossing of level {level} found")

    return float((crossing(1) - crossing(-1)) / 2)
