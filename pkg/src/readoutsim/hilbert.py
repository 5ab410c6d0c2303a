"""Truncated qubit-cavity Hilbert space and Hamiltonian constructors.

Units: hbar = 1, angular frequencies in rad/ns, durations in ns.  The
two-level system is ordered (g, e) with sigma_z |g> = +|g>, so the bare
qubit term -(omega_q/2) sigma_z puts the ground state at the lower energy.
Composite basis index: i = s*(n_max+1) + n with s = 0 for g, s = 1 for e,
and n the cavity photon number (qubit-major ordering).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SystemParams:
    """Physical constants of the driven qubit-cavity model (rad/ns, ns)."""

    omega_c: float          # cavity frequency
    omega_q: float          # qubit frequency
    g: float                # qubit-cavity coupling
    omega_d: float          # drive frequency
    epsilon_abs: float      # drive magnitude |epsilon|
    phi_epsilon: float      # drive phase
    t_d: float              # drive duration

    def __post_init__(self):
        if self.omega_c <= 0 or self.omega_q <= 0:
            raise ValueError("omega_c and omega_q must be positive")
        if self.omega_q == self.omega_c:
            raise ValueError("qubit and cavity are degenerate (Delta = 0)")
        if self.epsilon_abs < 0:
            raise ValueError("epsilon_abs must be nonnegative")
        if self.t_d < 0:
            raise ValueError("t_d must be nonnegative")
        if abs(self.lam) >= 1.0:
            raise ValueError(
                f"not in the dispersive regime: |g/Delta| = {abs(self.lam):.3f} >= 1"
            )

    # -- derived quantities ------------------------------------------------

    @property
    def delta(self) -> float:
        """Detuning omega_q - omega_c."""
        return self.omega_q - self.omega_c

    @property
    def lam(self) -> float:
        """Dispersive expansion parameter g/Delta."""
        return self.g / self.delta

    @property
    def chi(self) -> float:
        """Dispersive cavity pull g^2/Delta."""
        return self.g**2 / self.delta

    @property
    def omega_g(self) -> float:
        """Cavity frequency seen during the drive, qubit in g."""
        return self.omega_c - self.chi / 2.0

    @property
    def omega_e(self) -> float:
        """Cavity frequency seen during the drive, qubit in e."""
        return self.omega_c + self.chi / 2.0

    @property
    def omega_g_prime(self) -> float:
        """Free-decay cavity frequency, qubit in g."""
        return self.omega_c - self.chi

    @property
    def omega_e_prime(self) -> float:
        """Free-decay cavity frequency, qubit in e."""
        return self.omega_c + self.chi

    @property
    def epsilon(self) -> complex:
        """Complex drive amplitude |epsilon| e^{i phi_epsilon}."""
        return self.epsilon_abs * np.exp(1j * self.phi_epsilon)

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_ghz(cls, f_c, f_q, f_g, f_drive, phi_epsilon=0.0, t_d=20.0,
                 f_d=None) -> "SystemParams":
        """Build from ordinary frequencies in GHz (multiplied by 2*pi)."""
        return cls(
            omega_c=TWO_PI * f_c,
            omega_q=TWO_PI * f_q,
            g=TWO_PI * f_g,
            omega_d=TWO_PI * (f_c if f_d is None else f_d),
            epsilon_abs=TWO_PI * f_drive,
            phi_epsilon=phi_epsilon,
            t_d=t_d,
        )

    @classmethod
    def defaults(cls) -> "SystemParams":
        """Representative readout parameters: 5/6 GHz, lambda = 0.1,
        |epsilon|/2pi = 0.04 GHz, resonant drive for 20 ns."""
        return cls.from_ghz(f_c=5.0, f_q=6.0, f_g=0.1, f_drive=0.04, t_d=20.0)


@dataclass(frozen=True)
class HilbertSpace:
    """Qubit tensor cavity space truncated at n_max photons."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("n_max must be nonnegative")

    @property
    def n_cavity(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return 2 * (self.n_max + 1)

    def index(self, s: int, n: int) -> int:
        """Flat basis index of |s, n> (s = 0 for g, 1 for e)."""
        if s not in (0, 1):
            raise ValueError("qubit index must be 0 (g) or 1 (e)")
        if not 0 <= n <= self.n_max:
            raise ValueError(f"photon number {n} outside [0, {self.n_max}]")
        return s * self.n_cavity + n

    def ket(self, s: int, n: int) -> np.ndarray:
        """Bare basis vector |s, n>."""
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(s, n)] = 1.0
        return v


def build_space(n_max: int) -> HilbertSpace:
    """Truncated qubit-cavity space with dim = 2*(n_max+1)."""
    return HilbertSpace(n_max=int(n_max))


def max_drive_amplitude(params: SystemParams) -> float:
    """Envelope bound on the drive-induced coherent amplitude.

    (2|eps|/chi)|sin(chi t_d / 2)|, written through sinc so chi -> 0 is
    the linear-ring-up limit |eps| t_d.
    """
    return abs(params.epsilon_abs * params.t_d
               * np.sinc(params.chi * params.t_d / (2.0 * np.pi)))


def default_n_max(params: SystemParams) -> int:
    """Fock cutoff with super-exponential headroom over the pulse maximum."""
    a = max_drive_amplitude(params)
    return math.ceil(a * a + 5.0 * a + 10.0)


def ladder_ops(space: HilbertSpace):
    """Elementary operators (a, a_dag, sigma_z, sigma_plus, sigma_minus).

    Hard truncation: a_dag annihilates |n_max>.  sigma_plus = |e><g| on the
    qubit factor; sigma_z = +1 on g.
    """
    nc = space.n_cavity
    a_cav = np.diag(np.sqrt(np.arange(1, nc, dtype=float)), 1).astype(complex)
    id_cav = np.eye(nc, dtype=complex)
    sz_q = np.diag([1.0, -1.0]).astype(complex)       # (g, e) ordering
    sp_q = np.zeros((2, 2), dtype=complex)
    sp_q[1, 0] = 1.0                                  # |e><g|
    sm_q = sp_q.conj().T

    a = np.kron(np.eye(2, dtype=complex), a_cav)
    a_dag = a.conj().T
    sigma_z = np.kron(sz_q, id_cav)
    sigma_plus = np.kron(sp_q, id_cav)
    sigma_minus = np.kron(sm_q, id_cav)
    return a, a_dag, sigma_z, sigma_plus, sigma_minus


def number_op(space: HilbertSpace) -> np.ndarray:
    """Cavity photon number operator a_dag a."""
    nc = space.n_cavity
    return np.kron(np.eye(2, dtype=complex), np.diag(np.arange(nc, dtype=complex)))


def excitation_op(space: HilbertSpace) -> np.ndarray:
    """Total excitation number a_dag a + |e><e|, conserved by the coupling."""
    nc = space.n_cavity
    n_cav = np.diag(np.arange(nc, dtype=complex))
    e_proj = np.diag([0.0, 1.0]).astype(complex)
    return np.kron(np.eye(2, dtype=complex), n_cav) + np.kron(e_proj, np.eye(nc, dtype=complex))


def jc_hamiltonian(space: HilbertSpace, params: SystemParams) -> np.ndarray:
    """Jaynes-Cummings Hamiltonian
    omega_c a_dag a - (omega_q/2) sigma_z + g (sigma_minus a_dag + sigma_plus a).
    """
    a, a_dag, sigma_z, sigma_plus, sigma_minus = ladder_ops(space)
    h = (params.omega_c * (a_dag @ a)
         - 0.5 * params.omega_q * sigma_z
         + params.g * (sigma_minus @ a_dag + sigma_plus @ a))
    return h


def dispersive_hamiltonian(space: HilbertSpace, params: SystemParams) -> np.ndarray:
    """Second-order effective Hamiltonian
    omega_c a_dag a - ((omega_q+chi)/2) sigma_z - chi sigma_z a_dag a,
    diagonal in the bare basis.
    """
    a, a_dag, sigma_z, _, _ = ladder_ops(space)
    n = a_dag @ a
    chi = params.chi
    return (params.omega_c * n
            - 0.5 * (params.omega_q + chi) * sigma_z
            - chi * (sigma_z @ n))


def drive_hamiltonian(space: HilbertSpace, params: SystemParams, t: float,
                      form: str = "rwa") -> np.ndarray:
    """Classical cavity drive at time t.

    form="lab":  2 cos(omega_d t) (eps a + eps* a_dag)
    form="rwa":  eps e^{+i omega_d t} a + eps* e^{-i omega_d t} a_dag
    """
    a, a_dag, *_ = ladder_ops(space)
    eps = params.epsilon
    wd = params.omega_d
    if form == "lab":
        return 2.0 * np.cos(wd * t) * (eps * a + np.conj(eps) * a_dag)
    if form == "rwa":
        ph = np.exp(1j * wd * t)
        return eps * ph * a + np.conj(eps * ph) * a_dag
    raise ValueError(f"unknown drive form {form!r}")


def total_hamiltonian(space: HilbertSpace, params: SystemParams, t: float,
                      form: str = "rwa") -> np.ndarray:
    """Jaynes-Cummings plus the drive, gated on for 0 <= t < t_d."""
    h = jc_hamiltonian(space, params)
    if 0.0 <= t < params.t_d:
        h = h + drive_hamiltonian(space, params, t, form=form)
    return h


# -- linear-algebra checks ----------------------------------------------------

def hermiticity_defect(op: np.ndarray) -> float:
    """Max absolute element of A - A_dag."""
    return float(np.max(np.abs(op - op.conj().T))) if op.size else 0.0

def assert_hermitian(op: np.ndarray, tol: float = 1e-12) -> None:
    d = hermiticity_defect(op)
    if d > tol:
        raise ValueError(f"operator not Hermitian: defect {d:.3e} > {tol:.1e}")


def check_state_vector(psi: np.ndarray, tol: float = 1e-10) -> None:
    nr = np.linalg.norm(psi)
    if abs(nr - 1.0) > tol:
        raise ValueError(f"state norm {nr!r} deviates from 1 by more than {tol:.1e}")


def check_density_matrix(rho: np.ndarray, herm_tol: float = 1e-10,
                         trace_tol: float = 1e-8, eig_floor: float = -1e-8) -> None:
    d = hermiticity_defect(rho)
    if d > herm_tol:
        raise ValueError(f"density matrix not Hermitian: defect {d:.3e}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr!r} deviates from 1")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if w.min() < eig_floor:
        raise ValueError(f"density matrix has eigenvalue {w.min():.3e} below {eig_floor:.1e}")
