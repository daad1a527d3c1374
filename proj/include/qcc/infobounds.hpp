// Holevo chi and entropy accounting along protocol executions.
//
// chi_trace walks a measurement-free program for every weighted Alice
// input, recording after each step the entropy of Bob's average reduced
// state and the Holevo chi of the ensemble his state forms over Alice's
// inputs. Declared prior EPR pairs are lowered to explicit setup steps
// (Bob prepares the pair and sends one half to Alice), so the walk
// starts at S = chi = 0 and every transmission is visible to the
// accounting.
//
// Only qubits tracked in quantum form enter the reduced states; basis
// registers fixed across the ensemble contribute nothing to S or chi.

#pragma once

#include "qcc/protovm.hpp"

namespace qcc {

struct Ensemble {
  std::vector<double> probs;
  std::vector<DensityOperator> states;
};

/// S(sum p_x rho_x) - sum p_x S(rho_x), in bits.
double holevo_chi(const Ensemble& ens);

struct ChiEntry {
  int step_index = 0;     // 0 is the initial entry before any step
  StepKind kind = StepKind::unitary;
  double entropy_bits = 0;  // S of Bob's average state
  double chi_bits = 0;
};

struct ChiTrace {
  std::vector<ChiEntry> entries;
  // Transmission counts as seen by the walk; setup sends for declared
  // prior entanglement count toward qubits_ba.
  int qubits_ab = 0;
  int qubits_ba = 0;
  int prior_pairs_lowered = 0;
};

using InputWeights = std::vector<std::pair<Bits, double>>;

/// Per-step S and chi of Bob's reduced state, for Alice's inputs
/// weighted by x_dist and Bob's input fixed to y. The program must be
/// measurement-free (its final designated measurement is not part of
/// the walk).
ChiTrace chi_trace(const ProtocolProgram& program, const InputWeights& x_dist, const Bits& y);

/// chi_trace under uniform Alice inputs.
ChiTrace chi_trace_uniform_x(const ProtocolProgram& program, const Bits& y);

/// Entry-wise average of the traces over all of Bob's inputs.
ChiTrace chi_trace_avg_y(const ProtocolProgram& program, const InputWeights& x_dist);

struct BoundsVerdict {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks the per-step laws of the accounting against a trace: local
/// unitaries leave S and chi unchanged (1e-9), any send changes S by at
/// most 1 (1e-7), sends toward Bob raise chi by at most 2 and sends
/// toward Alice never raise it (1e-7), and the final chi is at most
/// min(2 * n_AB, n_AB + n_BA) once setup sends are counted. The ledger
/// must agree with the walk's transmission counts.
BoundsVerdict check_chi_bounds(const ChiTrace& trace, const Ledger& ledger);

/// I(X:Y) in bits of a joint distribution given as rows (x) of outcome
/// probabilities (y). Entries must be non-negative and sum to 1 within
/// kTol.
double mutual_information(const std::vector<std::vector<double>>& joint);

}  // namespace qcc
