"""Analytic layer: dressed eigenstates, dressed coherent states, drive
amplitudes, and the first-order reduced-qubit maps with cavity decay.

Everything here is closed-form (first order in lam = g/Delta unless noted)
and serves as an independent oracle for the numerical evolution.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .hilbert import HilbertSpace, SystemParams, ladder_ops


class Branch(enum.Enum):
    """Qubit branch of the dressed ladder: G pairs with |g,n>-dominant
    eigenstates, E with |e,n-1>-dominant ones."""
    G = "g"
    E = "e"


@dataclass(frozen=True)
class DressedAmplitude:
    """Coherent amplitude riding on one dressed branch."""
    alpha: complex
    branch: Branch
    t_d: float      # drive duration that produced it (ns)
    tau: float = 0.0  # decay time already applied (ns)


def dressed_eigenstate(space: HilbertSpace, lam: float, branch: Branch,
                       n: int) -> np.ndarray:
    """First-order dressed eigenstate with total excitation n.

    G branch (n >= 0):  cos(lam sqrt(n)) |g,n> - sin(lam sqrt(n)) |e,n-1>
    E branch (n >= 1):  cos(lam sqrt(n)) |e,n-1> + sin(lam sqrt(n)) |g,n>
    """
    if branch is Branch.G:
        if not 0 <= n <= space.n_max:
            raise ValueError(f"G-branch index {n} outside [0, {space.n_max}]")
    else:
        if not 1 <= n <= space.n_max:
            raise ValueError(f"E-branch index {n} outside [1, {space.n_max}]")

    c = math.cos(lam * math.sqrt(n))
    s = math.sin(lam * math.sqrt(n))
    psi = np.zeros(space.dim, dtype=complex)
    if branch is Branch.G:
        psi[space.index(0, n)] = c
        if n >= 1:
            psi[space.index(1, n - 1)] = -s
    else:
        psi[space.index(1, n - 1)] = c
        psi[space.index(0, n)] = s
    return psi


def _poisson_amplitudes(alpha: complex, n_terms: int) -> np.ndarray:
    """Coherent-state amplitudes e^{-|a|^2/2} a^n / sqrt(n!), log-stabilized."""
    n = np.arange(n_terms)
    mag = np.abs(alpha)
    if mag == 0.0:
        w = np.zeros(n_terms, dtype=complex)
        w[0] = 1.0
        return w
    logw = -0.5 * mag * mag + n * math.log(mag) - 0.5 * gammaln(n + 1.0)
    return np.exp(logw) * np.exp(1j * n * np.angle(alpha))


def dressed_coherent_state(space: HilbertSpace, lam: float, branch: Branch,
                           alpha: complex) -> np.ndarray:
    """Poisson-weighted superposition of dressed eigenstates.

    G branch: sum_n w_n(alpha) * G_n.  E branch: sum_n w_n(alpha) * E_{n+1},
    i.e. the weight w_n multiplies the eigenstate whose dominant component is
    |e,n>.  Renormalized to unit norm after truncation; the truncation guard
    |alpha|^2 + 5|alpha| < n_max keeps the discarded tail negligible.
    """
    mag = abs(alpha)
    if mag * mag + 5.0 * mag >= space.n_max:
        raise ValueError(
            f"|alpha| = {mag:.3f} too large for n_max = {space.n_max}"
        )
    psi = np.zeros(space.dim, dtype=complex)
    if branch is Branch.G:
        w = _poisson_amplitudes(alpha, space.n_max + 1)
        for n in range(space.n_max + 1):
            psi += w[n] * dressed_eigenstate(space, lam, Branch.G, n)
    else:
        w = _poisson_amplitudes(alpha, space.n_max)
        for m in range(space.n_max):
            psi += w[m] * dressed_eigenstate(space, lam, Branch.E, m + 1)
    return psi / np.linalg.norm(psi)


def drive_amplitude(params: SystemParams, branch: Branch, t_d: float) -> complex:
    """Coherent amplitude created by a resonant drive of duration t_d.

    alpha_{g/e}(t_d) = -(2i eps*/chi) sin(chi t_d/2) e^{-i(omega_c -+ chi/2) t_d},
    evaluated through sinc so the chi -> 0 limit is -i eps* t_d.  Only defined
    for omega_d = omega_c.
    """
    if not math.isclose(params.omega_d, params.omega_c, rel_tol=1e-12):
        raise ValueError("drive amplitude formula requires omega_d = omega_c")
    if t_d < 0:
        raise ValueError("t_d must be nonnegative")
    chi = params.chi
    eps_c = np.conj(params.epsilon)
    envelope = -1j * eps_c * t_d * np.sinc(chi * t_d / (2.0 * np.pi))
    if branch is Branch.G:
        return complex(envelope * np.exp(-1j * (params.omega_c - chi / 2.0) * t_d))
    return complex(envelope * np.exp(-1j * (params.omega_c + chi / 2.0) * t_d))


def decayed_amplitude(amp: DressedAmplitude, kappa: float, tau: float,
                      params: SystemParams) -> complex:
    """Amplitude after tau of cavity decay: alpha e^{-kappa tau/2} e^{-i omega' tau}
    with omega' = omega_c - chi (G) or omega_c + chi (E)."""
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    omega_p = params.omega_g_prime if amp.branch is Branch.G else params.omega_e_prime
    return complex(amp.alpha * np.exp(-0.5 * kappa * tau) * np.exp(-1j * omega_p * tau))


def first_order_qubit_map(branch: Branch, params: SystemParams, t_d: float,
                          kappa: float, tau: float) -> np.ndarray:
    """Reduced qubit state (pure, 2-vector in (g, e) order) after driving for
    t_d and decaying for tau.

    G:  (|g> - lam |a| e^{-i(phi_eps+pi/2)} e^{-i w_g t_d} e^{-k tau/2} e^{-i w'_g tau} |e>)/sqrt(N)
    E:  (|e> + lam |a| e^{+i(phi_eps+pi/2)} e^{+i w_e t_d} e^{-k tau/2} e^{+i w'_e tau} |g>)/sqrt(N)
    with N = 1 + lam^2 |a|^2 e^{-kappa tau}.
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    mag = abs(drive_amplitude(params, branch, t_d))
    damp = math.exp(-0.5 * kappa * tau)
    lam = params.lam
    norm = math.sqrt(1.0 + lam * lam * mag * mag * damp * damp)
    psi = np.zeros(2, dtype=complex)
    if branch is Branch.G:
        phase = -(params.phi_epsilon + math.pi / 2.0) - params.omega_g * t_d \
            - params.omega_g_prime * tau
        psi[0] = 1.0
        psi[1] = -lam * mag * damp * np.exp(1j * phase)
    else:
        phase = (params.phi_epsilon + math.pi / 2.0) + params.omega_e * t_d \
            + params.omega_e_prime * tau
        psi[1] = 1.0
        psi[0] = lam * mag * damp * np.exp(1j * phase)
    return psi / norm


def dispersive_transform(space: HilbertSpace, lam: float) -> np.ndarray:
    """Unitary exp{lam (sigma_plus a - sigma_minus a_dag)} taking the lab frame
    to the dispersive frame."""
    a, a_dag, _, sigma_plus, sigma_minus = ladder_ops(space)
    gen = lam * (sigma_plus @ a - sigma_minus @ a_dag)
    return expm(gen)


def displaced_fock(space: HilbertSpace, beta: complex, n: int) -> np.ndarray:
    """Cavity-only state D(beta)|n> on the truncated cavity factor."""
    nc = space.n_cavity
    a_cav = np.diag(np.sqrt(np.arange(1, nc, dtype=float)), 1).astype(complex)
    d_op = expm(beta * a_cav.conj().T - np.conj(beta) * a_cav)
    v = np.zeros(nc, dtype=complex)
    v[n] = 1.0
    return d_op @ v


def undressed_excited_state(space: HilbertSpace, params: SystemParams,
                            t_d: float, g_phase: float = 0.0) -> np.ndarray:
    """State reached from bare |e,0> after a resonant drive of duration t_d.

    cos(lam) * [E-branch dressed coherent state with alpha_e(t_d)]
    - e^{i g_phase} sin(lam) * U_D_dag (|g> (x) e^{-i w'_g n t_d} D(alpha'_g)|1>),
    with alpha'_g(t_d) = eps* (e^{-i chi t_d} - 1)/chi.  The relative phase
    g_phase is not fixed by the analytics and defaults to zero; only
    phase-insensitive quantities should be compared against the numerics.
    """
    lam = params.lam
    chi = params.chi
    alpha_e = drive_amplitude(params, Branch.E, t_d)
    term1 = dressed_coherent_state(space, lam, Branch.E, alpha_e)

    # eps*(e^{-i chi t_d} - 1)/chi, sinc form for the chi -> 0 limit
    alpha_g_prime = (-1j * np.conj(params.epsilon) * t_d
                     * np.sinc(chi * t_d / (2.0 * np.pi))
                     * np.exp(-1j * chi * t_d / 2.0))
    cav = displaced_fock(space, alpha_g_prime, 1)
    phases = np.exp(-1j * params.omega_g_prime * t_d * np.arange(space.n_cavity))
    joint = np.zeros(space.dim, dtype=complex)
    joint[:space.n_cavity] = phases * cav      # qubit factor |g>
    u_d = dispersive_transform(space, lam)
    term2 = u_d.conj().T @ joint

    psi = math.cos(lam) * term1 - np.exp(1j * g_phase) * math.sin(lam) * term2
    return psi / np.linalg.norm(psi)


def dressed_ground_weight(space: HilbertSpace, lam: float,
                          psi: np.ndarray) -> float:
    """Population of the dressed ground branch: project onto qubit |g> in the
    dispersive frame."""
    u_d = dispersive_transform(space, lam)
    phi = u_d @ psi
    return float(np.sum(np.abs(phi[:space.n_cavity]) ** 2))
