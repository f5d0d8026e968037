"""
Time-domain integration of the Green's-function equations of motion and of
the probe-driven mean-field equations, used to check the frequency-domain
results independently.
"""
import math
import logging
from typing import Callable, Optional

import numpy as np
from scipy.fft import ifft, fftfreq, fftshift
from scipy.linalg import lstsq

from omlrt.errors import HorizonError, ParameterError, StepSizeError, UnstableSystemError
from omlrt.models import SystemParams, TimeSeries, Spectrum, SidebandFit
from omlrt.response import build_drift, stability

logger = logging.getLogger(__name__)

DEFAULT_DT = 1e-3
MIN_HORIZON = 200.0
MAX_STEPS = 1_000_000
# dt * max|chi0| must stay below this.
STEP_BOUND = 0.01
# Relative size of |G(T)| above which the FFT is flagged as truncated.
DECAY_TOLERANCE = 1e-6
# Homogeneous remainder left after the probe transient is discarded.
TRANSIENT_SUPPRESSION = 1e-11
MIN_FIT_SPAN = 20.0
MIN_FIT_PERIODS = 10

FFT_CONVENTION = "G(omega) = integral_0^T G(tau) exp(+i omega tau) dtau, trapezoidal"


def rk4_step(fn: Callable[[float, np.ndarray], np.ndarray], t: float, x: np.ndarray, h: float) -> np.ndarray:
    """One classical fourth-order Runge-Kutta step of dx/dt = fn(t, x)."""
    k1 = fn(t, x)
    k2 = fn(t + h / 2, x + h / 2 * k1)
    k3 = fn(t + h / 2, x + h / 2 * k2)
    k4 = fn(t + h, x + h * k3)
    return x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_propagator(drift: np.ndarray, h: float) -> np.ndarray:
    """
    RK4 step matrix for the autonomous system dx/dt = drift x.

    Equals 1 + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24, which is what rk4_step
    computes for a linear right-hand side.
    """
    ha = h * np.asarray(drift, dtype=complex)
    identity = np.eye(ha.shape[0], dtype=complex)
    ha2 = ha @ ha
    ha3 = ha2 @ ha
    return identity + ha + ha2 / 2 + ha3 / 6 + ha3 @ ha / 24


def max_step(params: SystemParams) -> float:
    """Largest step size accepted by the integrators."""
    return STEP_BOUND / np.max(np.abs(build_drift(params)))


def default_horizon(rate: float) -> float:
    return max(10 / abs(rate), MIN_HORIZON)


def _require_stable(params: SystemParams):
    report = stability(params)
    if not report.stable:
        raise UnstableSystemError(
            f"Unstable parameters (margin {report.margin:.6e}); time-domain integration refused",
            report=report,
        )
    return report


def decay_rate(params: SystemParams, margin: float) -> float:
    """
    Slowest decay rate of the modes reachable from the cavity.

    Without coupling the mechanical mode is never excited, so only the
    cavity rate kappa/2 matters.
    """
    if params.g_b == 0 and params.g_t == 0:
        return params.kappa / 2
    return abs(margin)


def _check_step(params: SystemParams, dt: float) -> None:
    if not dt > 0:
        raise StepSizeError(f"dt must be > 0, got {dt}")
    bound = max_step(params)
    if dt > bound:
        raise StepSizeError(f"dt={dt} exceeds the step bound {bound:.6e}")


def _step_count(horizon: float, dt: float) -> int:
    n_steps = int(round(horizon / dt))
    if n_steps > MAX_STEPS:
        logger.warning(f"Horizon {horizon} needs {n_steps} steps; truncating to {MAX_STEPS}")
        n_steps = MAX_STEPS
    return max(n_steps, 1)


def integrate_green_eom(params: SystemParams, which: str = 'a-dagger', horizon: Optional[float] = None,
                        dt: float = DEFAULT_DT) -> TimeSeries:
    """
    Integrate dG/dt = chi0 G for the vector Green's function.

    The delta source at t = 0 becomes the jump G(0+) = (-i, 0, 0, 0) for
    which='a-dagger' and (0, +i, 0, 0) for which='a'. The returned samples
    start at t = 0+.
    """
    if which not in ('a-dagger', 'a'):
        raise ParameterError(f"which must be 'a-dagger' or 'a', got '{which}'")

    report = _require_stable(params)
    _check_step(params, dt)

    rate = decay_rate(params, report.margin)
    minimum = 10 / rate
    if horizon is None:
        horizon = default_horizon(rate)
    elif horizon < minimum:
        logger.warning(f"Horizon {horizon} is shorter than 10 decay times ({minimum:.3e})")

    n_steps = _step_count(horizon, dt)
    propagator = rk4_propagator(build_drift(params), dt)

    samples = np.empty((n_steps + 1, 4), dtype=complex)
    samples[0] = (-1j, 0, 0, 0) if which == 'a-dagger' else (0, 1j, 0, 0)
    for k in range(n_steps):
        samples[k + 1] = propagator @ samples[k]

    logger.debug(f"Integrated {which} Green's function over {n_steps} steps of {dt}")
    return TimeSeries(
        dt=dt,
        samples=samples,
        metadata={'which': which, 'margin': report.margin, 'truncated': n_steps * dt < minimum},
    )


def fft_green(series: TimeSeries, pad_factor: int = 1) -> Spectrum:
    """
    One-sided Fourier transform of a Green's-function series.

    Uses the exp(+i omega tau) analysis convention on the FFT grid
    omega_j = 2 pi fftfreq(n, dt), sorted ascending. All four components are
    transformed; values has shape (n, 4).
    """
    samples = np.asarray(series.samples, dtype=complex)
    if samples.ndim == 1:
        samples = samples[:, None]
    dt = series.dt

    norms = np.linalg.norm(samples, axis=1)
    decay = float(norms[-1] / np.max(norms)) if np.max(norms) > 0 else 0.0

    weighted = samples.copy()
    weighted[0] *= 0.5
    n = len(weighted) * max(int(pad_factor), 1)

    values = dt * n * ifft(weighted, n=n, axis=0)
    omegas = 2 * np.pi * fftfreq(n, dt)

    metadata = {'convention': FFT_CONVENTION, 'dt': dt, 'decay': decay}
    if decay > DECAY_TOLERANCE:
        message = f"Series decayed only to {decay:.3e} of its peak; transform is truncated"
        logger.warning(message)
        metadata['warning'] = message

    return Spectrum(omegas=fftshift(omegas), values=fftshift(values, axes=0), metadata=metadata)


def log_norm_slope(series: TimeSeries, t_start: Optional[float] = None) -> float:
    """Least-squares slope of log|G(t)| over the tail of the series (default: second half)."""
    times = series.times
    if t_start is None:
        t_start = series.horizon / 2
    mask = times >= t_start
    norms = np.linalg.norm(series.samples[mask], axis=1)
    slope, _ = np.polyfit(times[mask], np.log(norms), 1)
    return float(slope)


def probe_oracle(params: SystemParams, omega_pc: float, horizon: Optional[float] = None,
                 dt: float = DEFAULT_DT) -> SidebandFit:
    """
    Drive the mean-field equations with the weak probe and extract both sidebands.

    Integrates du/dt = chi0 u + f(t) with
    f(t) = (-i zeta* exp(-i w t), +i zeta exp(+i w t), 0, 0) from rest, drops
    the transient and fits the cavity component to
    amp_neg exp(-i w t) + amp_pos exp(+i w t) over a whole number of probe
    periods.
    """
    if omega_pc == 0:
        raise ParameterError("omega_pc must be non-zero for the probe oracle")

    report = _require_stable(params)
    _check_step(params, dt)

    rate = decay_rate(params, report.margin)
    transient = max(10 / rate, math.log(1 / TRANSIENT_SUPPRESSION) / rate)
    period = 2 * np.pi / abs(omega_pc)
    if horizon is None:
        horizon = transient + max(MIN_FIT_SPAN, MIN_FIT_PERIODS * period)
    if horizon <= transient + period:
        raise ParameterError(f"horizon {horizon} leaves no full probe period after the transient {transient:.3e}")

    span = horizon - transient
    n_periods = int(math.floor(span / period))
    window_adjusted = not math.isclose(n_periods * period, span, rel_tol=1e-12)
    if window_adjusted:
        logger.debug(f"Fit window shortened to {n_periods} probe periods")

    n_steps = int(round(horizon / dt))
    if n_steps > MAX_STEPS:
        raise HorizonError(f"Probe horizon {horizon:.3e} needs {n_steps} steps, above the cap of {MAX_STEPS}")
    drift = build_drift(params)
    propagator = rk4_propagator(drift, dt)

    zeta = complex(params.zeta)
    tone_neg = np.array([-1j * zeta.conjugate(), 0, 0, 0], dtype=complex)
    tone_pos = np.array([0, 1j * zeta, 0, 0], dtype=complex)

    # Forcing contribution of one RK4 step started at t = 0 from rest; the
    # step started at t_k picks up the phase exp(-/+ i w t_k).
    kick_neg = rk4_step(lambda t, x: drift @ x + tone_neg * np.exp(-1j * omega_pc * t), 0.0, np.zeros(4, complex), dt)
    kick_pos = rk4_step(lambda t, x: drift @ x + tone_pos * np.exp(1j * omega_pc * t), 0.0, np.zeros(4, complex), dt)

    times = dt * np.arange(n_steps + 1)
    phase_neg = np.exp(-1j * omega_pc * times)
    phase_pos = np.exp(1j * omega_pc * times)

    cavity = np.empty(n_steps + 1, dtype=complex)
    state = np.zeros(4, dtype=complex)
    cavity[0] = 0
    for k in range(n_steps):
        state = propagator @ state + phase_neg[k] * kick_neg + phase_pos[k] * kick_pos
        cavity[k + 1] = state[0]

    end = times[-1]
    start = end - n_periods * period
    mask = times >= start - 1e-12
    t_fit = times[mask]
    basis = np.column_stack([np.exp(-1j * omega_pc * t_fit), np.exp(1j * omega_pc * t_fit)])
    coeffs, _, _, _ = lstsq(basis, cavity[mask])
    remainder = cavity[mask] - basis @ coeffs
    residual = float(np.sqrt(np.mean(np.abs(remainder) ** 2)))

    logger.debug(f"Probe fit at omega_pc={omega_pc}: residual {residual:.3e} over {n_periods} periods")
    return SidebandFit(
        amp_neg=complex(coeffs[0]),
        amp_pos=complex(coeffs[1]),
        residual=residual,
        n_periods=n_periods,
        window_start=float(t_fit[0]),
        window_adjusted=window_adjusted,
    )
