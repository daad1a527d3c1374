// Standard coding protocols: superdense coding of n classical bits,
// teleportation-based replacement of qubit sends by classical bits, and
// the two-way capacity construction that transmits n bits with a given
// (qubits Alice->Bob, qubits Bob->Alice) budget.

#pragma once

#include "qcc/protovm.hpp"

#include <optional>

namespace qcc {

struct CapacitySpec {
  int n = 0;     // bits Alice conveys to Bob
  int n_ab = 0;  // qubits Alice -> Bob
  int n_ba = 0;  // qubits Bob -> Alice

  bool operator==(const CapacitySpec&) const = default;
};

/// Text of the violated inequality, or nullopt when (n_ab, n_ba) admits
/// an exact transmission of n bits.
std::optional<std::string> capacity_violation(const CapacitySpec& spec);

/// Alice transmits her n input bits to Bob with probability 1 using
/// floor(n/2) prior EPR pairs and ceil(n/2) qubit sends (an odd final
/// bit travels as a basis-state qubit). Bob never sends a qubit.
ProtocolProgram build_superdense(int n);

/// Program for the spec's budget: Bob first distributes locally prepared
/// EPR pairs, Alice superdense-codes over them and sends the remaining
/// bits as basis states, and untouched qubits pad the ledger to exactly
/// (n_ab, n_ba). No prior entanglement. Throws std::invalid_argument
/// naming the violated inequality when the spec is infeasible.
ProtocolProgram build_capacity_protocol(const CapacitySpec& spec);

/// Replaces every qubit send with a teleportation gadget: one fresh EPR
/// pair, a Bell measurement by the sender, two classical bits in the
/// original direction, and Pauli corrections by the receiver. Output
/// distributions are preserved exactly. The input program must not send
/// classical bits, and qubit sends inside classical branches are not
/// supported.
ProtocolProgram teleport_simulate(const ProtocolProgram& qubit_program);

}  // namespace qcc
