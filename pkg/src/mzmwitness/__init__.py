"""Parity-measurement entanglement witnesses for Majorana pairing.

A six-site system split into subsystems {1, 3, 5} and {2, 4, 6} either hosts
three nonlocal Majorana pairs or six local Andreev bound states.  Measuring
all nine cross-cut pairs and combining the data with a fixed coefficient set
gives a witness value that is provably nonnegative for any Andreev product
state but negative on a sizable fraction (about 18%) of the Majorana sector,
so a single negative readout certifies nonlocal pairing.
"""

__version__ = "0.1.0"

from .fock import FockSpace, expectation, parity_op, partial_trace
from .states import (AbsSiteParams, AbsState, HybridState, MzmState, Pairing,
                     build_abs_state, build_hybrid_state, build_mzm_state,
                     decohere_across_cut, sample_mzm_uniform)
from .tunneling import (IslandQdModel, MeasurementOutcome,
                        effective_b_operator, exact_ground_energies,
                        perturbed_energies_fermion, perturbed_energies_mzm,
                        splitting_to_expectation)
from .witness import (CANONICAL_EVEN, CANONICAL_ODD, ChshSettings,
                      TunnelCouplings, WitnessParams, WitnessReport,
                      abs_witness_value, block_positivity_min,
                      candidate_bound_abs, candidate_bound_fermion,
                      ccnr_witness, chsh_witness_value, coupling_factor,
                      hybrid_witness_value, mzm_witness_closed_form,
                      mzm_witness_value, operator_schmidt)
from .protocol import (DetectionRecord, NoiseSpec, ProtocolConfig,
                       RandomMzmSource, analytic_negative_fraction,
                       apply_poisoning, monte_carlo_rate, poisoning_sweep,
                       run_repeat_protocol, run_single_shot)

__all__ = [name for name in dir() if not name.startswith("_")]
