"""
omlrt: linear response of a linearised optomechanical system from retarded
Green's functions, with time-domain cross-checks.
"""
from omlrt.models import SystemParams, CavityParams, SweepSpec
from omlrt.params import validate, mean_fields, load_config
from omlrt.response import build_drift, susceptibility_numeric, susceptibility_analytic, stability
from omlrt.observables import greens_at, sideband_amplitudes, spectral_and_reflection
from omlrt.verify import run_verify

__version__ = "0.1.0"

__all__ = [
    'SystemParams', 'CavityParams', 'SweepSpec',
    'validate', 'mean_fields', 'load_config',
    'build_drift', 'susceptibility_numeric', 'susceptibility_analytic', 'stability',
    'greens_at', 'sideband_amplitudes', 'spectral_and_reflection',
    'run_verify',
]
