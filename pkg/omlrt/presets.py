"""
Named parameter sets for the standard figure panels.

All share omega_m = 5, gamma_m = 1e-4 and kappa_cp = 0.25 in units of kappa.
Red presets sit at delta = +omega_m, blue ones at delta = -omega_m, and the
sweep window is centred on the matching sign of omega_m.
"""
from typing import Dict, List

from omlrt.errors import ConfigError
from omlrt.models import SystemParams, SweepSpec, FigurePreset

OMEGA_M = 5.0
GAMMA_M = 1e-4
KAPPA_CP = 0.25

WIDE_HALF_SPAN = 3.0
WIDE_POINTS = 4001
NARROW_HALF_SPAN = 0.2
NARROW_POINTS = 8001

OPTICAL_COLUMNS = ('d_as', 'd_s')
REFLECTION_COLUMNS = ('rho', 'r_power')
MECHANICAL_COLUMNS = ('d_badag', 'd_ba')


def _preset(name: str, g: float, sign: int, columns, description: str, eps_t: float = 1.0,
            narrow: bool = False) -> FigurePreset:
    params = SystemParams(
        delta=sign * OMEGA_M,
        omega_m=OMEGA_M,
        g=g,
        gamma_m=GAMMA_M,
        kappa_cp=KAPPA_CP,
        eps_b=1.0,
        eps_t=eps_t,
    )
    half_span = NARROW_HALF_SPAN if narrow else WIDE_HALF_SPAN
    center = sign * OMEGA_M
    spec = SweepSpec(
        omega_min=center - half_span,
        omega_max=center + half_span,
        n_points=NARROW_POINTS if narrow else WIDE_POINTS,
        params=params,
    )
    return FigurePreset(name=name, spec=spec, plot_columns=tuple(columns), description=description,
                        rwa='beam-splitter only' if eps_t == 0 else None)


PRESETS: Dict[str, FigurePreset] = {
    preset.name: preset for preset in (
        _preset('fig2', 2.0, +1, OPTICAL_COLUMNS, "Normal-mode splitting, both interactions"),
        _preset('fig2-rwa', 2.0, +1, OPTICAL_COLUMNS, "Normal-mode splitting, beam-splitter term only", eps_t=0.0),
        _preset('fig3-red', 0.5, +1, OPTICAL_COLUMNS, "Intermediate coupling, red detuning"),
        _preset('fig3-blue', 0.5, -1, OPTICAL_COLUMNS, "Intermediate coupling, blue detuning"),
        _preset('fig4-red', 0.005, +1, REFLECTION_COLUMNS, "Weak coupling transparency window, red detuning",
                narrow=True),
        _preset('fig4-blue', 0.005, -1, REFLECTION_COLUMNS, "Weak coupling, blue detuning", narrow=True),
        _preset('fig6-red', 0.5, +1, MECHANICAL_COLUMNS, "Mechanical amplitudes, red detuning"),
        _preset('fig6-blue', 0.5, -1, MECHANICAL_COLUMNS, "Mechanical amplitudes, blue detuning"),
    )
}


def preset_names() -> List[str]:
    return list(PRESETS)


def get_preset(name: str) -> FigurePreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"Unknown preset '{name}'. Available: {', '.join(PRESETS)}") from None
