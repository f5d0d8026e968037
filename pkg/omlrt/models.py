from dataclasses import dataclass, field
from typing import Dict, List, Optional, Any, Tuple

import numpy as np

# Row/column order of every 4x4 matrix and 4-vector in the package.
FIELD_ORDER = ('a', 'a_dag', 'b', 'b_dag')

# A 4x4 complex numpy array indexed by FIELD_ORDER.
ComplexMatrix4 = np.ndarray

DEFAULT_ZETA = 1e-3

SWEEP_OUTPUTS = ('d_as', 'd_s', 'rho', 'r_power', 'r_power_approx', 'd_badag', 'd_ba', 'greens')


def complex_pair(value: complex) -> List[float]:
    """Serialise a complex number as [re, im] for JSON output."""
    value = complex(value)
    return [value.real, value.imag]


@dataclass(frozen=True)
class SystemParams:
    """Parameters of the linearised optomechanical system, in units of kappa."""
    delta: float
    omega_m: float
    g: float
    gamma_m: float
    kappa_cp: float
    eps_b: float = 1.0
    eps_t: float = 1.0
    kappa: float = 1.0
    zeta: complex = DEFAULT_ZETA

    @property
    def g_b(self) -> float:
        """Beam-splitter coupling g * eps_b."""
        return self.g * self.eps_b

    @property
    def g_t(self) -> float:
        """Two-mode-squeezing coupling g * eps_t."""
        return self.g * self.eps_t

    def to_dict(self) -> Dict[str, Any]:
        """Convert parameters to dictionary for JSON serialization."""
        return {
            'delta': self.delta,
            'omega_m': self.omega_m,
            'g': self.g,
            'gamma_m': self.gamma_m,
            'kappa_cp': self.kappa_cp,
            'eps_b': self.eps_b,
            'eps_t': self.eps_t,
            'kappa': self.kappa,
            'zeta': complex_pair(self.zeta),
        }


@dataclass(frozen=True)
class MeanFields:
    """Steady-state optical and mechanical mean fields."""
    alpha: complex
    beta: complex
    g_eff: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'alpha': complex_pair(self.alpha),
            'beta': complex_pair(self.beta),
            'g_eff': self.g_eff,
        }


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of parameter validation."""
    passed: bool
    violations: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {'passed': self.passed, 'violations': list(self.violations)}


@dataclass(frozen=True)
class SusceptibilitySet:
    """Closed-form susceptibilities at one frequency."""
    omega: float
    chi_m_minus: complex
    chi_m_plus: complex
    lambda_a: complex
    sigma_a: complex
    q_plus: complex
    q_minus_conj: complex
    d: complex
    chi_aa: complex
    chi_aadag: complex
    chi_ab: complex
    chi_abdag: complex
    chi_ba: complex
    chi_badag: complex

    def to_dict(self) -> Dict[str, Any]:
        result = {'omega': self.omega}
        for name in ('chi_m_minus', 'chi_m_plus', 'lambda_a', 'sigma_a', 'q_plus', 'q_minus_conj',
                     'd', 'chi_aa', 'chi_aadag', 'chi_ab', 'chi_abdag', 'chi_ba', 'chi_badag'):
            result[name] = complex_pair(getattr(self, name))
        return result


@dataclass(frozen=True)
class StabilityReport:
    """Eigenvalues of the drift matrix and the resulting stability verdict."""
    eigenvalues: Tuple[complex, ...]
    eigen_real_parts: Tuple[float, ...]
    stable: bool
    margin: float
    residual: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'eigenvalues': [complex_pair(ev) for ev in self.eigenvalues],
            'eigen_real_parts': list(self.eigen_real_parts),
            'stable': self.stable,
            'margin': self.margin,
            'residual': self.residual,
        }


@dataclass(frozen=True)
class GreensSet:
    """Retarded Green's functions of the cavity and mechanical modes at one frequency."""
    omega: float
    g_aadag: complex
    g_aa: complex
    g_badag: complex
    g_ba: complex

    def to_dict(self) -> Dict[str, Any]:
        return {
            'omega': self.omega,
            'g_aadag': complex_pair(self.g_aadag),
            'g_aa': complex_pair(self.g_aa),
            'g_badag': complex_pair(self.g_badag),
            'g_ba': complex_pair(self.g_ba),
        }


@dataclass(frozen=True)
class ObservablePoint:
    """Every probe observable at one probe-coupling detuning."""
    omega_pc: float
    d_as: float
    d_s: float
    rho: float
    r_complex: complex
    r_power: float
    r_power_approx: float
    d_badag: float
    d_ba: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'omega_pc': self.omega_pc,
            'd_as': self.d_as,
            'd_s': self.d_s,
            'rho': self.rho,
            'r_complex': complex_pair(self.r_complex),
            'r_power': self.r_power,
            'r_power_approx': self.r_power_approx,
            'd_badag': self.d_badag,
            'd_ba': self.d_ba,
        }


@dataclass(frozen=True)
class ResponseSignal:
    """Mean value plus the two rotating-frame sidebands of a driven mode."""
    mean_offset: complex
    amp_neg: complex
    amp_pos: complex
    omega_pc: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            'mean_offset': complex_pair(self.mean_offset),
            'amp_neg': complex_pair(self.amp_neg),
            'amp_pos': complex_pair(self.amp_pos),
            'omega_pc': self.omega_pc,
        }


@dataclass
class Spectrum:
    """Values on a frequency grid; values may have a trailing component axis."""
    omegas: np.ndarray
    values: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)


@dataclass
class TimeSeries:
    """Uniformly sampled trajectory of a complex 4-vector, t_k = k * dt."""
    dt: float
    samples: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(len(self.samples))

    @property
    def horizon(self) -> float:
        return self.dt * (len(self.samples) - 1)


@dataclass(frozen=True)
class SidebandFit:
    """Two-tone decomposition extracted from a driven trajectory."""
    amp_neg: complex
    amp_pos: complex
    residual: float
    n_periods: int
    window_start: float
    window_adjusted: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'amp_neg': complex_pair(self.amp_neg),
            'amp_pos': complex_pair(self.amp_pos),
            'residual': self.residual,
            'n_periods': self.n_periods,
            'window_start': self.window_start,
            'window_adjusted': self.window_adjusted,
        }


@dataclass(frozen=True)
class CavityParams:
    """Single-mode cavity with fixed mirrors."""
    omega0: float
    kappa: float = 1.0
    eta: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {'omega0': self.omega0, 'kappa': self.kappa, 'eta': self.eta}


@dataclass(frozen=True)
class SweepSpec:
    """A frequency sweep over omega_pc."""
    omega_min: float
    omega_max: float
    n_points: int
    params: SystemParams
    outputs: Tuple[str, ...] = SWEEP_OUTPUTS

    def grid(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.n_points)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'omega_min': self.omega_min,
            'omega_max': self.omega_max,
            'n_points': self.n_points,
            'params': self.params.to_dict(),
            'outputs': list(self.outputs),
        }


@dataclass(frozen=True)
class FigurePreset:
    """Named sweep behind one standard figure panel."""
    name: str
    spec: SweepSpec
    plot_columns: Tuple[str, ...]
    description: str = ''
    rwa: Optional[str] = None
