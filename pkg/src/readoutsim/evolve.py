"""Time integration of the drive-then-decay protocol and observable extraction.

The integrator works in the frame rotating at the drive frequency with the
total excitation number, where the resonant drive is static and the slow
dispersive dynamics set the step size.  The transformation is exact: both
decay operators lower the conserved excitation number by exactly one quantum,
so every dissipator is invariant under the rotation, and sampled states are
rotated back to the lab frame.  A direct lab-frame mode is kept for
cross-checks at short times.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import FockCutoffError, IntegrationError
from .hilbert import (HilbertSpace, SystemParams, build_space, default_n_max,
                      ladder_ops)
from .lindblad import DecayModel, EigenLadder, eigenladder
from .dressed import Branch

CUTOFF_POPULATION_LIMIT = 1e-6


class InitialState(enum.Enum):
    BARE_GROUND = "bare_ground"          # |g,0>
    DRESSED_EXCITED = "dressed_excited"  # qubit-excited, zero-photon eigenvector
    BARE_EXCITED = "bare_excited"        # |e,0>


@dataclass(frozen=True)
class Protocol:
    """Drive-then-decay schedule sampled on a fixed grid."""

    initial_state: InitialState
    t_d: float
    t_end: float
    sample_dt: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.t_d <= self.t_end:
            raise ValueError("need 0 <= t_d <= t_end")
        if self.sample_dt <= 0.0:
            raise ValueError("sample_dt must be positive")

    def sample_times(self) -> np.ndarray:
        n = int(round(self.t_end / self.sample_dt))
        times = np.arange(n + 1) * self.sample_dt
        return times[times <= self.t_end + 1e-9 * self.sample_dt]


@dataclass(eq=False)
class Trajectory:
    """Sampled density matrices (lab frame) plus derived observables."""

    times: np.ndarray
    states: np.ndarray                       # (n_samples, dim, dim)
    observables: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.times)


def initial_state_vector(space: HilbertSpace, params: SystemParams,
                         which: InitialState,
                         ladder: EigenLadder | None = None) -> np.ndarray:
    if which is InitialState.BARE_GROUND:
        return space.ket(0, 0)
    if which is InitialState.BARE_EXCITED:
        return space.ket(1, 0)
    if ladder is None:
        ladder = eigenladder(space, params)
    return ladder.vector(Branch.E, 1)


def _excitation_numbers(space: HilbertSpace) -> np.ndarray:
    nc = space.n_cavity
    n = np.tile(np.arange(nc), 2).astype(float)
    n[nc:] += 1.0
    return n


def _rotating_pieces(space: HilbertSpace, params: SystemParams):
    """Static Hamiltonian and drive operator in the drive-rotating frame."""
    a, a_dag, _, sigma_plus, sigma_minus = ladder_ops(space)
    nc = space.n_cavity
    e_proj = np.kron(np.diag([0.0, 1.0]).astype(complex), np.eye(nc, dtype=complex))
    h0 = ((params.omega_c - params.omega_d) * (a_dag @ a)
          + (params.omega_q - params.omega_d) * e_proj
          + params.g * (sigma_minus @ a_dag + sigma_plus @ a))
    eps = params.epsilon
    w = eps * a + np.conj(eps) * a_dag
    return h0, w


def _lab_pieces(space: HilbertSpace, params: SystemParams):
    from .hilbert import jc_hamiltonian
    a, a_dag, *_ = ladder_ops(space)
    return jc_hamiltonian(space, params), a, a_dag


class _MasterRHS:
    """Vectorized master-equation right-hand side, precomputed per segment.

    rhs = K rho + rho K_dag + sum_m r_m x_m rho x_m_dag with
    K = -i H - (1/2) sum_m r_m x_m_dag x_m.
    """

    def __init__(self, h, jump_terms, dim):
        self.dim = dim
        k = -1j * h.astype(complex)
        self.xs = []
        for rate, x in jump_terms:
            k -= 0.5 * rate * (x.conj().T @ x)
            self.xs.append((rate, x, x.conj().T))
        self.k = k
        self.k_dag = k.conj().T

    def __call__(self, t, y):
        rho = y.reshape(self.dim, self.dim)
        out = self.k @ rho + rho @ self.k_dag
        for rate, x, x_dag in self.xs:
            out += rate * ((x @ rho) @ x_dag)
        return out.ravel()


class _LabMasterRHS:
    """Lab-frame right-hand side with the explicitly time-dependent drive."""

    def __init__(self, h_jc, a, a_dag, params, jump_terms, dim, drive_on):
        self.dim = dim
        self.h_jc = h_jc
        self.a = a
        self.a_dag = a_dag
        self.eps = params.epsilon
        self.omega_d = params.omega_d
        self.drive_on = drive_on
        self.xs = [(rate, x, x.conj().T) for rate, x in jump_terms]
        m = np.zeros((dim, dim), dtype=complex)
        for rate, x in jump_terms:
            m += 0.5 * rate * (x.conj().T @ x)
        self.half_m = m

    def __call__(self, t, y):
        rho = y.reshape(self.dim, self.dim)
        h = self.h_jc
        if self.drive_on:
            ph = self.eps * np.exp(1j * self.omega_d * t)
            h = h + ph * self.a + np.conj(ph) * self.a_dag
        out = -1j * (h @ rho - rho @ h) - (self.half_m @ rho + rho @ self.half_m)
        for rate, x, x_dag in self.xs:
            out += rate * ((x @ rho) @ x_dag)
        return out.ravel()


def _check_cutoff(space: HilbertSpace, diag_pops: np.ndarray, t: float) -> None:
    nc = space.n_cavity
    top = list(range(max(0, nc - 2), nc))
    pop = sum(float(diag_pops[s * nc + n]) for s in (0, 1) for n in top)
    if pop > CUTOFF_POPULATION_LIMIT:
        raise FockCutoffError(
            f"top Fock levels hold population {pop:.2e} > {CUTOFF_POPULATION_LIMIT:.0e} "
            f"at t = {t:g} ns; raise n_max"
        )


def _segments(protocol: Protocol):
    """Split the sample grid at the drive-off discontinuity.

    Every sample time is assigned to exactly one segment; the segment
    boundary state at t_d is continuous so the sample at t = t_d may sit on
    either side."""
    times = protocol.sample_times()
    t_d, t_end = protocol.t_d, protocol.t_end
    segs = []
    if t_d > 0.0:
        segs.append((0.0, min(t_d, t_end), True, times[times <= min(t_d, t_end)]))
        if t_end > t_d:
            segs.append((t_d, t_end, False, times[times > t_d]))
    else:
        segs.append((0.0, t_end, False, times))
    return times, segs


def integrate(model: DecayModel | None, params: SystemParams,
              protocol: Protocol, rel_tol: float = 1e-8,
              abs_tol: float = 1e-10, *, space: HilbertSpace | None = None,
              frame: str = "rotating", check_cutoff: bool = True) -> Trajectory:
    """Integrate the master equation (or the closed-system von Neumann
    equation when model is None) over the protocol with adaptive RK45.

    The step sequence restarts at the drive-off time so no step straddles the
    discontinuity.  Returns lab-frame density matrices on the sample grid with
    cavity occupation and qubit purity attached.
    """
    if model is not None and space is not None and model.space is not space:
        if model.space.n_max != space.n_max:
            raise ValueError("model and space disagree on n_max")
    if space is None:
        space = model.space if model is not None else build_space(default_n_max(params))
    if abs(protocol.t_d - params.t_d) > 1e-12:
        raise ValueError("protocol.t_d must match params.t_d")

    ladder = model.ladder if model is not None else None
    psi0 = initial_state_vector(space, params, protocol.initial_state, ladder)
    rho0 = np.outer(psi0, psi0.conj())
    jump_terms = model.jump_terms() if model is not None else []

    times, segs = _segments(protocol)
    dim = space.dim

    if frame == "rotating":
        h0, w = _rotating_pieces(space, params)
        rhs_on = _MasterRHS(h0 + w, jump_terms, dim)
        rhs_off = _MasterRHS(h0, jump_terms, dim)
    elif frame == "lab":
        h_jc, a, a_dag = _lab_pieces(space, params)
        rhs_on = _LabMasterRHS(h_jc, a, a_dag, params, jump_terms, dim, True)
        rhs_off = _LabMasterRHS(h_jc, a, a_dag, params, jump_terms, dim, False)
    else:
        raise ValueError(f"unknown frame {frame!r}")

    out = np.empty((len(times), dim, dim), dtype=complex)
    pos = 0
    y = rho0.ravel().copy()
    for t0, t1, drive_on, t_eval in segs:
        if t1 > t0:
            # always integrate through to t1 so the next segment starts there
            need_end = not len(t_eval) or t_eval[-1] < t1
            te = np.concatenate([t_eval, [t1]]) if need_end else t_eval
            sol = solve_ivp(rhs_on if drive_on else rhs_off, (t0, t1), y,
                            method="RK45", rtol=rel_tol, atol=abs_tol, t_eval=te)
            if not sol.success:
                raise IntegrationError(sol.message)
            for i in range(len(t_eval)):
                out[pos + i] = sol.y[:, i].reshape(dim, dim)
            pos += len(t_eval)
            y = sol.y[:, -1]
        else:
            for _ in range(len(t_eval)):
                out[pos] = y.reshape(dim, dim)
                pos += 1

    if frame == "rotating":
        n_ex = _excitation_numbers(space)
        for i, t in enumerate(times):
            p = np.exp(-1j * params.omega_d * t * n_ex)
            out[i] = (p[:, None] * out[i]) * p.conj()[None, :]

    if check_cutoff:
        for i, t in enumerate(times):
            _check_cutoff(space, np.real(np.diagonal(out[i])), t)

    traj = Trajectory(times=times, states=out)
    traj.observables["n_cav"] = np.array(
        [cavity_occupation(out[i]) for i in range(len(times))])
    traj.observables["purity"] = np.array(
        [purity(partial_trace_cavity(out[i])) for i in range(len(times))])
    return traj


def evolve_state(params: SystemParams, psi0: np.ndarray, protocol: Protocol,
                 rel_tol: float = 1e-10, abs_tol: float = 1e-12, *,
                 space: HilbertSpace | None = None) -> tuple:
    """Closed-system Schrodinger evolution of a pure state over the protocol
    (drive gated exactly as in integrate).  Returns (times, states) with
    lab-frame columns."""
    if space is None:
        space = build_space(default_n_max(params))
    if abs(protocol.t_d - params.t_d) > 1e-12:
        raise ValueError("protocol.t_d must match params.t_d")
    h0, w = _rotating_pieces(space, params)
    h_on = -1j * (h0 + w)
    h_off = -1j * h0

    def rhs_on(t, y):
        return h_on @ y

    def rhs_off(t, y):
        return h_off @ y

    times, segs = _segments(protocol)
    out = np.empty((len(times), space.dim), dtype=complex)
    pos = 0
    y = psi0.astype(complex).copy()
    for t0, t1, drive_on, t_eval in segs:
        if t1 > t0:
            sol = solve_ivp(rhs_on if drive_on else rhs_off, (t0, t1), y,
                            method="RK45", rtol=rel_tol, atol=abs_tol,
                            t_eval=np.concatenate([t_eval, [t1]])
                            if (not len(t_eval) or t_eval[-1] < t1) else t_eval)
            if not sol.success:
                raise IntegrationError(sol.message)
            for i in range(len(t_eval)):
                out[pos + i] = sol.y[:, i]
            pos += len(t_eval)
            y = sol.y[:, -1]
        else:
            for _ in range(len(t_eval)):
                out[pos] = y
                pos += 1

    n_ex = _excitation_numbers(space)
    for i, t in enumerate(times):
        out[i] = np.exp(-1j * params.omega_d * t * n_ex) * out[i]
    return times, out


def partial_trace_cavity(rho: np.ndarray) -> np.ndarray:
    """Reduced 2x2 qubit state, (g, e) ordering."""
    dim = rho.shape[0]
    if rho.shape != (dim, dim) or dim % 2:
        raise ValueError(f"expected a square even-dimension matrix, got {rho.shape}")
    nc = dim // 2
    return np.einsum("anbn->ab", rho.reshape(2, nc, 2, nc))


def cavity_occupation(rho: np.ndarray) -> float:
    """Tr[a_dag a rho]."""
    dim = rho.shape[0]
    nc = dim // 2
    diag = np.diagonal(rho)
    n = np.tile(np.arange(nc), 2)
    return float(np.real(np.sum(diag * n)))


def purity(rho_qubit: np.ndarray) -> float:
    """Tr[rho^2] of a qubit state."""
    if rho_qubit.shape != (2, 2):
        raise ValueError("purity expects a 2x2 density matrix")
    return float(np.real(np.trace(rho_qubit @ rho_qubit)))
