"""
Linear response of the coupled cavity and mechanical modes.

The drift matrix acts on the fluctuation vector (da, da_dag, db, db_dag).
Susceptibilities come either from inverting (-i omega 1 - chi0) numerically
or from the closed forms in terms of the mechanical susceptibilities, the
effective modulation lambda_a and the self-energy sigma_a. Both paths agree
to rounding error and the numeric one is kept as a cross-check.
"""
import logging
from typing import Dict

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from omlrt.errors import SingularityError, StabilityError
from omlrt.models import SystemParams, SusceptibilitySet, StabilityReport, ComplexMatrix4
from omlrt.params import require_valid

logger = logging.getLogger(__name__)

SINGULAR_D = 1e-300
ROOT_RESIDUAL = 1e-9
# An inverse whose residual exceeds this is treated as a failed solve.
INVERSE_RESIDUAL = 1e-6

IDENTITY4 = np.eye(4, dtype=complex)


def build_drift(params: SystemParams) -> ComplexMatrix4:
    """Drift matrix chi0 of the linearised equations of motion."""
    k2 = params.kappa / 2
    m2 = params.gamma_m / 2
    gb = params.g_b
    gt = params.g_t
    d = params.delta
    wm = params.omega_m

    return np.array([
        [-k2 - 1j * d, 0, -1j * gb, -1j * gt],
        [0, -k2 + 1j * d, 1j * gt, 1j * gb],
        [-1j * gb, -1j * gt, -m2 - 1j * wm, 0],
        [1j * gt, 1j * gb, 0, -m2 + 1j * wm],
    ], dtype=complex)


def susceptibility_numeric(params: SystemParams, omega: float) -> ComplexMatrix4:
    """
    chi(omega) = (-i omega 1 - chi0)^-1 by LU factorisation with partial pivoting.

    One step of iterative refinement is applied. Raises SingularityError when
    a pivot vanishes or the refined inverse still misses the identity.
    """
    matrix = -1j * omega * IDENTITY4 - build_drift(params)
    if not np.all(np.isfinite(matrix)):
        raise SingularityError(f"Non-finite system matrix at omega={omega}")

    lu, piv = lu_factor(matrix, check_finite=False)
    if np.any(np.diag(lu) == 0):
        raise SingularityError(f"Singular system matrix at omega={omega}")

    inverse = lu_solve((lu, piv), IDENTITY4, check_finite=False)
    inverse = inverse + lu_solve((lu, piv), IDENTITY4 - matrix @ inverse, check_finite=False)

    residual = np.max(np.abs(matrix @ inverse - IDENTITY4))
    if not np.isfinite(residual) or residual > INVERSE_RESIDUAL:
        raise SingularityError(f"Inverse residual {residual:.3e} at omega={omega}")
    return inverse


def closed_forms(params: SystemParams, omegas) -> Dict[str, np.ndarray]:
    """
    Evaluate every closed-form susceptibility on a frequency grid.

    Returns arrays keyed like the SusceptibilitySet fields. Points with
    |D| below SINGULAR_D are not masked here; callers check 'd'.
    """
    w = np.asarray(omegas, dtype=float)
    k2 = params.kappa / 2
    m2 = params.gamma_m / 2
    gb = params.g_b
    gt = params.g_t

    def mech(x):
        minus = 1 / (m2 - 1j * (x - params.omega_m))
        plus = 1 / (m2 - 1j * (x + params.omega_m))
        return minus, plus

    def optical(x):
        minus, plus = mech(x)
        lam = gb * gt * (plus - minus)
        sigma = params.delta - 1j * gb ** 2 * minus + 1j * gt ** 2 * plus
        q = k2 - 1j * (x - sigma)
        return minus, plus, lam, sigma, q

    with np.errstate(divide='ignore', invalid='ignore'):
        chi_minus, chi_plus, lam, sigma, q = optical(w)
        _, _, lam_r, _, q_r = optical(-w)
        q_conj = np.conj(q_r)
        d = q * q_conj - lam * np.conj(lam_r)

        chi_aa = q_conj / d
        chi_aadag = lam / d
        chi_ab = 1j * chi_minus * (gt * lam - gb * q_conj) / d
        chi_abdag = 1j * chi_plus * (gb * lam - gt * q_conj) / d

        # optical entries at -omega enter the mechanical row
        d_r = q_r * np.conj(q) - lam_r * np.conj(lam)
        chi_aa_r = np.conj(q) / d_r
        chi_aadag_r = lam_r / d_r

        chi_ba = -1j * chi_minus * (gb * chi_aa + gt * np.conj(chi_aadag_r))
        chi_badag = -1j * chi_minus * (gb * chi_aadag + gt * np.conj(chi_aa_r))

    return {
        'omega': w,
        'chi_m_minus': chi_minus,
        'chi_m_plus': chi_plus,
        'lambda_a': lam,
        'sigma_a': sigma,
        'q_plus': q,
        'q_minus_conj': q_conj,
        'd': d,
        'chi_aa': chi_aa,
        'chi_aadag': chi_aadag,
        'chi_ab': chi_ab,
        'chi_abdag': chi_abdag,
        'chi_ba': chi_ba,
        'chi_badag': chi_badag,
    }


def singular_mask(forms: Dict[str, np.ndarray]) -> np.ndarray:
    """Grid points where D vanishes or the closed forms are not finite."""
    d = forms['d']
    bad = ~np.isfinite(d) | (np.abs(d) < SINGULAR_D)
    for name in ('chi_aa', 'chi_aadag', 'chi_ba', 'chi_badag'):
        bad |= ~np.isfinite(forms[name])
    return bad


def susceptibility_analytic(params: SystemParams, omega: float) -> SusceptibilitySet:
    """Closed-form susceptibilities at a single frequency."""
    require_valid(params)
    forms = closed_forms(params, np.array([omega]))
    if singular_mask(forms)[0]:
        raise SingularityError(f"D(omega) vanishes at omega={omega}")
    return SusceptibilitySet(
        omega=float(omega),
        **{name: complex(values[0]) for name, values in forms.items() if name != 'omega'}
    )


def characteristic_polynomial(params: SystemParams) -> np.ndarray:
    """
    Coefficients of det(lambda 1 - chi0), highest power first.

    Computed from traces with the Faddeev-LeVerrier recursion so that the
    eigenvalues can be found without an eigen-solver.
    """
    drift = build_drift(params)
    n = drift.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[0] = 1.0
    m = np.zeros_like(drift)
    for k in range(1, n + 1):
        m = drift @ m + coeffs[k - 1] * IDENTITY4
        coeffs[k] = -np.trace(drift @ m) / k
    return coeffs


def _polish_roots(coeffs: np.ndarray, roots: np.ndarray, iterations: int = 5) -> np.ndarray:
    derivative = np.polyder(coeffs)
    polished = []
    for root in roots:
        value = np.polyval(coeffs, root)
        for _ in range(iterations):
            slope = np.polyval(derivative, root)
            if slope == 0:
                break
            candidate = root - value / slope
            candidate_value = np.polyval(coeffs, candidate)
            if abs(candidate_value) >= abs(value):
                break
            root, value = candidate, candidate_value
        polished.append(root)
    return np.array(polished, dtype=complex)


def stability(params: SystemParams) -> StabilityReport:
    """Eigenvalues of chi0 from its characteristic polynomial and the stability verdict."""
    require_valid(params)
    coeffs = characteristic_polynomial(params)
    roots = _polish_roots(coeffs, np.roots(coeffs))

    scale = np.max(np.abs(coeffs))
    residual = float(np.max(np.abs(np.polyval(coeffs, roots)))) if len(roots) else np.inf
    if len(roots) != 4 or not np.isfinite(residual) or residual > ROOT_RESIDUAL * scale:
        raise StabilityError(
            f"Root finder did not converge (residual {residual:.3e})",
            diagnostics={
                'coefficients': [[c.real, c.imag] for c in coeffs],
                'roots': [[r.real, r.imag] for r in roots],
                'residual': residual,
            },
        )

    roots = roots[np.argsort(-roots.real)]
    real_parts = tuple(float(r.real) for r in roots)
    margin = max(real_parts)
    report = StabilityReport(
        eigenvalues=tuple(complex(r) for r in roots),
        eigen_real_parts=real_parts,
        stable=margin < 0,
        margin=margin,
        residual=residual / scale,
    )
    logger.debug(f"Stability margin {margin:.6e} ({'stable' if report.stable else 'unstable'})")
    return report


def static_determinant(params: SystemParams) -> float:
    """det(chi0); a sign change marks the static instability."""
    return float(np.real(np.linalg.det(build_drift(params))))
