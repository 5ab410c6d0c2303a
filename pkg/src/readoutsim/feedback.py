"""Coherent-feedback correction of the drive-induced qubit rotation.

The corrections are single-qubit unitaries
U = exp{i (cos(Sigma) sigma_y - sin(Sigma) sigma_x) theta} with
tan(theta) = lam |alpha| e^{-kappa tau / 2}; applied to the first-order
reduced-qubit map they restore |g> (or |e>) exactly.

Qubit matrices here use (g, e) component order with |e> at the +z pole of the
Bloch sphere (sigma_z = |e><e| - |g><g|); that is the orientation in which
the analytic (theta, Sigma) pair inverts the first-order map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dressed import Branch, drive_amplitude
from .hilbert import SystemParams

TWO_PI = 2.0 * math.pi

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)


@dataclass(frozen=True)
class CorrectionParams:
    """Rotation angle and axis phase of a feedback unitary."""

    theta: float
    sigma: float
    branch: Branch

    def __post_init__(self):
        if not 0.0 <= self.theta < math.pi / 2.0:
            raise ValueError("theta must lie in [0, pi/2)")
        if not 0.0 <= self.sigma < TWO_PI:
            raise ValueError("sigma must lie in [0, 2 pi)")


@dataclass(frozen=True)
class OptimizationResult:
    sigma_star: float
    theta_star: float
    fidelity_at_optimum: float
    grid_points_evaluated: int


def analytic_correction(branch: Branch, params: SystemParams, kappa: float,
                        t_d: float, tau: float) -> CorrectionParams:
    """First-order correction parameters after driving t_d and decaying tau.

    theta = arctan(lam |alpha(t_d)| e^{-kappa tau/2});
    Sigma_g = w_g t_d + w'_g tau + phi_eps + pi/2,
    Sigma_e = phi_eps + pi/2 + w_e t_d + w'_e tau  (mod 2 pi).
    """
    mag = abs(drive_amplitude(params, branch, t_d))
    amp = params.lam * mag * math.exp(-0.5 * kappa * tau)
    theta = math.atan(amp)
    if branch is Branch.G:
        sigma = params.omega_g * t_d + params.omega_g_prime * tau \
            + params.phi_epsilon + math.pi / 2.0
    else:
        sigma = params.phi_epsilon + math.pi / 2.0 + params.omega_e * t_d \
            + params.omega_e_prime * tau
    if theta < 0.0:  # negative lam folds into a pi shift of the axis
        theta = -theta
        sigma += math.pi
    return CorrectionParams(theta=theta, sigma=sigma % TWO_PI, branch=branch)


def correction_at_time(branch: Branch, params: SystemParams, kappa: float,
                       t: float) -> CorrectionParams:
    """Analytic correction for an arbitrary protocol time: during the drive
    the amplitude is the one accumulated so far (tau = 0); afterwards the
    full-pulse amplitude decays for tau = t - t_d."""
    if t <= params.t_d:
        return analytic_correction(branch, params, kappa, t, 0.0)
    return analytic_correction(branch, params, kappa, params.t_d, t - params.t_d)


def correction_unitary(cp: CorrectionParams) -> np.ndarray:
    """2x2 unitary exp{i (cos(Sigma) sigma_y - sin(Sigma) sigma_x) theta}.

    The generator squares to the identity, so the exponential closes to
    [[cos t, -sin t e^{i S}], [sin t e^{-i S}, cos t]] in (g, e) order.
    """
    c, s = math.cos(cp.theta), math.sin(cp.theta)
    ph = np.exp(1j * cp.sigma)
    return np.array([[c, -s * ph], [s * np.conj(ph), c]], dtype=complex)


def fidelity_uncorrected(rho_qubit: np.ndarray, branch: Branch) -> float:
    """Overlap <nu| rho |nu> with nu = g (G branch) or e (E branch)."""
    if rho_qubit.shape != (2, 2):
        raise ValueError("expected a 2x2 qubit state")
    i = 0 if branch is Branch.G else 1
    return float(np.real(rho_qubit[i, i]))


def fidelity_corrected(rho_qubit: np.ndarray, branch: Branch,
                       cp: CorrectionParams) -> float:
    """Overlap <nu| U rho U_dag |nu> after applying the correction."""
    u = correction_unitary(cp)
    return fidelity_uncorrected(u @ rho_qubit @ u.conj().T, branch)


def _fidelity_grid(rho_qubit: np.ndarray, branch: Branch,
                   thetas: np.ndarray, sigmas: np.ndarray) -> np.ndarray:
    """Vectorized F(theta, sigma); row i = thetas[i], column j = sigmas[j].

    With U as in correction_unitary,
    F_G = c^2 rho_gg + s^2 rho_ee - 2 c s Re(e^{i S} rho_eg),
    F_E = s^2 rho_gg + c^2 rho_ee + 2 c s Re(e^{i S} rho_eg).
    """
    r00 = float(np.real(rho_qubit[0, 0]))
    r11 = float(np.real(rho_qubit[1, 1]))
    r10 = complex(rho_qubit[1, 0])
    c = np.cos(thetas)[:, None]
    s = np.sin(thetas)[:, None]
    cross = np.real(np.exp(1j * sigmas)[None, :] * r10)
    if branch is Branch.G:
        return c * c * r00 + s * s * r11 - 2.0 * c * s * cross
    return s * s * r00 + c * c * r11 + 2.0 * c * s * cross


def optimize_correction(rho_qubit: np.ndarray, branch: Branch,
                        cp_analytic: CorrectionParams,
                        grid_sigma: int = 720,
                        grid_theta: int = 16) -> OptimizationResult:
    """Brute-force search over the rotation phase (and a small angle grid
    around the analytic amplitude), followed by a golden-section refinement
    of the phase.

    The candidate set always contains the identity (theta = 0), so the
    optimum never falls below the uncorrected fidelity.  Ties resolve to the
    smallest theta, then the smallest sigma.
    """
    if grid_sigma < 1 or grid_theta < 1:
        raise ValueError("grids must contain at least one point")
    thetas = np.unique(np.concatenate(
        [[0.0], cp_analytic.theta * np.linspace(0.0, 1.5, grid_theta)]))
    sigmas = TWO_PI * np.arange(grid_sigma) / grid_sigma

    grid = _fidelity_grid(rho_qubit, branch, thetas, sigmas)
    flat = int(np.argmax(grid))         # first max: smallest theta, then sigma
    i, j = divmod(flat, len(sigmas))
    best_theta = float(thetas[i])
    best_sigma = float(sigmas[j])
    best_f = float(grid[i, j])

    # golden-section pass on sigma around the winning grid cell
    if best_theta > 0.0:
        gr = (math.sqrt(5.0) - 1.0) / 2.0
        ds = TWO_PI / grid_sigma
        lo, hi = best_sigma - ds, best_sigma + ds

        def f_of_sigma(sig):
            return float(_fidelity_grid(rho_qubit, branch,
                                        np.array([best_theta]),
                                        np.array([sig]))[0, 0])

        x1 = hi - gr * (hi - lo)
        x2 = lo + gr * (hi - lo)
        f1, f2 = f_of_sigma(x1), f_of_sigma(x2)
        for _ in range(20):
            if hi - lo < 1e-6:
                break
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + gr * (hi - lo)
                f2 = f_of_sigma(x2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - gr * (hi - lo)
                f1 = f_of_sigma(x1)
        x_ref = 0.5 * (lo + hi)
        f_ref = f_of_sigma(x_ref)
        if f_ref > best_f:
            best_f = f_ref
            best_sigma = x_ref % TWO_PI

    return OptimizationResult(
        sigma_star=best_sigma % TWO_PI,
        theta_star=best_theta,
        fidelity_at_optimum=best_f,
        grid_points_evaluated=int(grid.size),
    )
