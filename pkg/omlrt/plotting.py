"""
SVG rendering of sweep CSV columns.
"""
import os
import logging
from typing import Dict, Any, Sequence, Optional

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

from omlrt.errors import ConfigError
from omlrt.sweep import parse_csv

logger = logging.getLogger(__name__)

PLOT_STYLES = ('lines',)
AXIS_LABELS = {
    'd_as': r'$\kappa|G_{aa^\dagger}(\omega_{pc})|$',
    'd_s': r'$\kappa|G_{aa}(-\omega_{pc})|$',
    'rho': r'$\kappa\rho$',
    'r_power': r'$R$',
    'r_power_approx': r'$1-\kappa_{cp}\rho$',
    'd_badag': r'$\kappa|G_{ba^\dagger}(\omega_{pc})|$',
    'd_ba': r'$\kappa|G_{ba}(-\omega_{pc})|$',
}


def plot_columns(columns: Dict[str, Any], names: Sequence[str], out_path: str, style: str = 'lines',
                 title: Optional[str] = None) -> str:
    """
    Draw the named columns against omega_pc and save an SVG.

    A single-row table is drawn with point markers.
    """
    if style not in PLOT_STYLES:
        raise ConfigError(f"Unknown plot style '{style}'")
    if not names:
        raise ConfigError("No columns selected for plotting")
    missing = [name for name in ['omega_pc', *names] if name not in columns or name == 'flag']
    if missing:
        raise ConfigError(f"Missing columns: {', '.join(missing)}")

    x = columns['omega_pc']
    marker = 'o' if len(x) == 1 else None

    plt.rcParams['svg.hashsalt'] = 'omlrt'
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        for name in names:
            ax.plot(x, columns[name], marker=marker, label=AXIS_LABELS.get(name, name))
        ax.set_xlabel(r'$\omega_{pc}/\kappa$')
        ax.legend()
        if title:
            ax.set_title(title)
        fig.tight_layout()
        fig.savefig(out_path, format='svg', metadata={'Date': None})
    finally:
        plt.close(fig)

    logger.info(f"Wrote {out_path}")
    return out_path


def emit_plot(csv_text: str, columns: Sequence[str], out_path: str, style: str = 'lines',
              title: Optional[str] = None) -> str:
    """Render columns of a sweep CSV document to out_path; nothing is recomputed."""
    _, table = parse_csv(csv_text)
    directory = os.path.dirname(out_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    return plot_columns(table, list(columns), out_path, style=style, title=title)
