"""Dressed-basis decay operators and Lindblad master-equation right-hand sides.

The environment couples through a + a_dag.  In the ordered eigenbasis of the
coupled Hamiltonian the energy-lowering matrix elements split into two
classes: same-branch photon-lowering transitions (cavity decay, rate kappa)
and cross-branch photon-preserving transitions (Purcell decay, rate gamma_P).
The filtered equation keeps only the cavity class.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dressed import Branch
from .errors import EigenLabelError
from .hilbert import HilbertSpace, SystemParams, jc_hamiltonian, ladder_ops, total_hamiltonian

HBAR_OVER_KB = 7.63823e-3  # ns * K


def bose_occupation(omega: float, temperature: float) -> float:
    """Mean thermal photon number 1/(e^{hbar w / kB T} - 1); exactly 0 at T = 0."""
    if omega <= 0:
        raise ValueError("bose_occupation requires omega > 0")
    if temperature < 0:
        raise ValueError("temperature must be nonnegative")
    if temperature == 0.0:
        return 0.0
    return 1.0 / math.expm1(HBAR_OVER_KB * omega / temperature)


class DecayVariant(enum.Enum):
    FILTERED = "filtered"      # cavity decay only (Purcell-filtered output line)
    UNFILTERED = "unfiltered"  # cavity plus Purcell decay


@dataclass(frozen=True, eq=False)
class EigenLadder:
    """Eigen-decomposition of the coupled Hamiltonian, energy-ordered and
    branch-labeled.

    labels[i] = (Branch, n) with n the total excitation of level i; assignment
    is by maximum overlap with the bare basis (bare |g,n> -> (G, n), bare
    |e,n-1> -> (E, n))."""

    energies: np.ndarray           # (dim,), ascending
    vectors: np.ndarray            # (dim, dim), columns are eigenvectors
    labels: tuple                  # tuple of (Branch, int)
    index_of: dict = field(repr=False)  # (Branch, n) -> level index

    def vector(self, branch: Branch, n: int) -> np.ndarray:
        return self.vectors[:, self.index_of[(branch, n)]].copy()

    def energy(self, branch: Branch, n: int) -> float:
        return float(self.energies[self.index_of[(branch, n)]])


def eigenladder(space: HilbertSpace, params: SystemParams,
                min_overlap: float = 0.7) -> EigenLadder:
    """Diagonalize the coupled Hamiltonian and label every level by its
    dominant bare component.  Raises EigenLabelError when the dominant overlap
    falls below min_overlap (mixing too strong to label)."""
    h = jc_hamiltonian(space, params)
    energies, vectors = np.linalg.eigh(h)

    nc = space.n_cavity
    labels = []
    for i in range(space.dim):
        weights = np.abs(vectors[:, i]) ** 2
        j = int(np.argmax(weights))
        if weights[j] < min_overlap:
            raise EigenLabelError(
                f"level {i}: dominant bare overlap {weights[j]:.3f} < {min_overlap}"
            )
        s, n = divmod(j, nc)
        labels.append((Branch.G, n) if s == 0 else (Branch.E, n + 1))
        # fix the phase so the dominant component is real positive
        vectors[:, i] *= np.exp(-1j * np.angle(vectors[j, i]))

    if len(set(labels)) != space.dim:
        raise EigenLabelError("branch labeling is not a bijection")
    index_of = {lab: i for i, lab in enumerate(labels)}
    return EigenLadder(energies=energies, vectors=vectors,
                       labels=tuple(labels), index_of=index_of)


def transition_elements(ladder: EigenLadder, space: HilbertSpace) -> np.ndarray:
    """Matrix C with C[j, k] = <j| (a + a_dag) |k> in the energy-ordered
    eigenbasis; the physical (energy-lowering) pairs are the upper triangle
    j < k."""
    a, a_dag, *_ = ladder_ops(space)
    v = ladder.vectors
    return v.conj().T @ (a + a_dag) @ v


def _classify_pairs(ladder: EigenLadder):
    """Index pairs (j, k), j lower energy, for the two decay classes.

    Cavity: same branch, adjacent excitation (B, n) <-> (B, n+1).
    Purcell: (G, n) <-> (E, n+1), photon-number preserving in the bare picture.
    """
    cavity, purcell = [], []
    for (branch, n), j in ladder.index_of.items():
        up = ladder.index_of.get((branch, n + 1))
        if up is not None:
            cavity.append((min(j, up), max(j, up)))
        if branch is Branch.G:
            cross = ladder.index_of.get((Branch.E, n + 1))
            if cross is not None:
                purcell.append((min(j, cross), max(j, cross)))
    return sorted(cavity), sorted(purcell)


def decay_operators(ladder: EigenLadder, space: HilbertSpace,
                    lam: float | None = None):
    """Split the energy-lowering part of a + a_dag into the cavity-class and
    Purcell-class jump operators (a_C, a_P).

    Pairs outside both classes carry only O(lam^2) weight and are dropped; a
    warning is emitted if any dropped element exceeds 10 lam^2 (when lam is
    given)."""
    c = transition_elements(ladder, space)
    cavity, purcell = _classify_pairs(ladder)
    v = ladder.vectors
    dim = space.dim

    def assemble(pairs):
        op = np.zeros((dim, dim), dtype=complex)
        for j, k in pairs:
            op += c[j, k] * np.outer(v[:, j], v[:, k].conj())
        return op

    a_c = assemble(cavity)
    a_p = assemble(purcell)

    if lam is not None:
        mask = np.zeros((dim, dim), dtype=bool)
        for j, k in cavity + purcell:
            mask[j, k] = True
        upper = np.triu(np.ones((dim, dim), dtype=bool), 1)
        dropped = np.abs(np.where(upper & ~mask, c, 0.0))
        worst = dropped.max() if dropped.size else 0.0
        if worst > 10.0 * lam * lam:
            j, k = np.unravel_index(int(np.argmax(dropped)), dropped.shape)
            warnings.warn(
                f"dropped transition {ladder.labels[j]} -> {ladder.labels[k]} "
                f"has |C| = {worst:.3e} > 10 lam^2", stacklevel=2)
    return a_c, a_p


def purcell_rate(params: SystemParams, q_factor: float,
                 form: str = "appendix") -> float:
    """Cavity-mediated qubit decay rate.

    form="appendix": lam^2 omega_q / Q_F (default, the one attached to the
    simulated equation); form="main": lam^2 (omega_q + chi) / Q_F."""
    if q_factor <= 0:
        raise ValueError("q_factor must be positive")
    lam2 = params.lam ** 2
    if form == "appendix":
        return lam2 * params.omega_q / q_factor
    if form == "main":
        return lam2 * (params.omega_q + params.chi) / q_factor
    raise ValueError(f"unknown gamma_P form {form!r}")


def dissipator(x: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Lindblad dissipator D[x] rho = x rho x_dag - (1/2){x_dag x, rho}."""
    if x.shape != rho.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {rho.shape}")
    xr = x @ rho
    m = x.conj().T @ x
    return xr @ x.conj().T - 0.5 * (m @ rho + rho @ m)


@dataclass(frozen=True, eq=False)
class DecayModel:
    """Decay channels of the readout cavity and (optionally) the qubit.

    kappa = omega_c / Q_F; the Purcell rate and thermal occupations are fixed
    at construction.  The FILTERED variant never applies a_P."""

    space: HilbertSpace
    q_factor: float
    temperature: float
    kappa: float
    gamma_p: float
    variant: DecayVariant
    n_th_c: float
    n_th_q: float
    a_c: np.ndarray
    a_p: np.ndarray
    ladder: EigenLadder

    def jump_terms(self):
        """(rate, operator) pairs with nonzero rate for the active variant."""
        terms = [(self.kappa * (1.0 + self.n_th_c), self.a_c)]
        if self.n_th_c > 0.0:
            terms.append((self.kappa * self.n_th_c, self.a_c.conj().T))
        if self.variant is DecayVariant.UNFILTERED and self.gamma_p > 0.0:
            terms.append((self.gamma_p * (1.0 + self.n_th_q), self.a_p))
            if self.n_th_q > 0.0:
                terms.append((self.gamma_p * self.n_th_q, self.a_p.conj().T))
        return terms


def build_decay_model(space: HilbertSpace, params: SystemParams, *,
                      temperature: float = 0.0,
                      q_factor: float | None = None,
                      kappa_inv: float | None = None,
                      variant: DecayVariant = DecayVariant.FILTERED,
                      gamma_p_form: str = "appendix",
                      ladder: EigenLadder | None = None) -> DecayModel:
    """Construct a DecayModel from either a quality factor or 1/kappa in ns."""
    if (q_factor is None) == (kappa_inv is None):
        raise ValueError("specify exactly one of q_factor or kappa_inv")
    if kappa_inv is not None:
        if kappa_inv <= 0:
            raise ValueError("kappa_inv must be positive")
        q_factor = params.omega_c * kappa_inv
    if q_factor <= 0:
        raise ValueError("q_factor must be positive")
    kappa = params.omega_c / q_factor

    if ladder is None:
        ladder = eigenladder(space, params)
    a_c, a_p = decay_operators(ladder, space, lam=params.lam)
    return DecayModel(
        space=space,
        q_factor=q_factor,
        temperature=temperature,
        kappa=kappa,
        gamma_p=purcell_rate(params, q_factor, form=gamma_p_form),
        variant=variant,
        n_th_c=bose_occupation(params.omega_c, temperature),
        n_th_q=bose_occupation(params.omega_q, temperature),
        a_c=a_c,
        a_p=a_p,
        ladder=ladder,
    )


def me_rhs(model: DecayModel, params: SystemParams, rho: np.ndarray,
           t: float) -> np.ndarray:
    """Master-equation right-hand side in the lab frame:
    -i[H_T(t), rho] + kappa[(1+n_c) D[a_C] + n_c D[a_C_dag]] rho
    (+ the gamma_P terms for the unfiltered variant)."""
    if rho.shape != (model.space.dim, model.space.dim):
        raise ValueError(f"rho shape {rho.shape} does not match dim {model.space.dim}")
    h = total_hamiltonian(model.space, params, t)
    out = -1j * (h @ rho - rho @ h)
    for rate, x in model.jump_terms():
        out += rate * dissipator(x, rho)
    return out


def validity_horizon(params: SystemParams, n_photons: int):
    """Secular-approximation horizon (t_cavity, t_purcell) in ns.

    t = 1/w_max with w_max the largest quasi-degenerate transition splitting,
    N chi lam^2 for the cavity class and N chi for the Purcell class, taking
    chi in cyclic units (chi/2pi per ns).  Advisory only; proportionality
    constants set to 1."""
    if n_photons < 1:
        raise ValueError("n_photons must be >= 1")
    f_chi = abs(params.chi) / (2.0 * math.pi)
    lam2 = params.lam ** 2
    t_cavity = math.inf if f_chi * lam2 == 0 else 1.0 / (n_photons * f_chi * lam2)
    t_purcell = math.inf if f_chi == 0 else 1.0 / (n_photons * f_chi)
    return t_cavity, t_purcell
