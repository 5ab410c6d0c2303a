"""Simulator for dispersive qubit readout with dressed-state decay and
coherent-feedback correction."""

from .hilbert import (HilbertSpace, SystemParams, build_space, default_n_max,
                      dispersive_hamiltonian, drive_hamiltonian,
                      jc_hamiltonian, ladder_ops, total_hamiltonian)
from .dressed import (Branch, DressedAmplitude, decayed_amplitude,
                      dressed_coherent_state, dressed_eigenstate,
                      dispersive_transform, drive_amplitude,
                      first_order_qubit_map, undressed_excited_state)
from .lindblad import (DecayModel, DecayVariant, EigenLadder, bose_occupation,
                       build_decay_model, decay_operators, dissipator,
                       eigenladder, me_rhs, purcell_rate, transition_elements,
                       validity_horizon)
from .evolve import (InitialState, Protocol, Trajectory, cavity_occupation,
                     evolve_state, integrate, partial_trace_cavity, purity)
from .feedback import (CorrectionParams, OptimizationResult,
                       analytic_correction, correction_at_time,
                       correction_unitary, fidelity_corrected,
                       fidelity_uncorrected, optimize_correction)

__version__ = "0.1.0"
