// Inner-product protocols and the transformations built on them: the
// exact protocol over superdense coding, the clean-form rewrite, the
// Hadamard reduction attack that extracts the sender's whole input from
// a clean protocol, a coherent-noise fixture, the error/Fano
// calculators, and the interleaving construction that converts a
// classical bit protocol into a qubit protocol of doubled input size.

#pragma once

#include "qcc/protovm.hpp"

namespace qcc {

/// Inner product modulo two of two equal-length bit vectors.
int ip(const Bits& x, const Bits& y);

/// Target adapter for success_report / epsilon_of.
std::uint64_t ip_value(const Bits& x, const Bits& y);

/// Alice transmits x by superdense coding; Bob computes the inner
/// product with his input register into a dedicated output qubit.
/// Entirely unitary: input dependence enters through controls, so the
/// program stays valid on superposed input registers.
ProtocolProgram build_exact_ip(int n);

/// build_exact_ip(n) with an extra rotation by theta on the output
/// qubit; worst-case error is exactly sin^2(theta). Requires
/// 0 <= theta < pi/4.
ProtocolProgram make_noisy_exact_ip(int n, double theta);

/// Clean-form rewrite: a fresh answer qubit (Bob's first input-register
/// qubit in the result) is initialized to z, the program runs forward,
/// the old output is CNOT-ed onto the answer qubit, and the program runs
/// in reverse. Every other qubit returns to its initial state; a
/// (m1,m2)-qubit program becomes (m1+m2,m1+m2). If the program writes
/// to Bob's input register, the register is first copied into ancillas
/// and the body rewritten to use the copies. The input program must be
/// measurement-free with a single-qubit measured output owned by Bob.
ProtocolProgram make_clean(const ProtocolProgram& program);

struct AttackReport {
  Bits x;
  double recovery_probability = 0;  // P[Bob measures (1, x)]
  double euclidean_gap = 0;         // distance between final and ideal states
  double cos_theta = 0;             // overlap with the ideal final state
  double mutual_info_bound = 0;     // p*n - h(p) implied by the recovery probability
};

/// Runs the reduction attack against a clean IP program: Bob sets the
/// answer qubit to 1 and his input register to zero, conjugates the
/// protocol with Hadamard layers on those n+1 qubits, and measures
/// them. On an exact clean program the outcome is (1, x) with
/// probability 1.
AttackReport reduction_attack(const ProtocolProgram& clean_program, const Bits& x);

struct PairError {
  Bits x, y;
  double error = 0;
};

struct ErrorProfile {
  std::vector<PairError> per_pair;
  double epsilon = 0;  // worst case over input pairs
  double mean_error = 0;
};

/// Exhaustive per-pair error probabilities against the target.
ErrorProfile epsilon_of(const ProtocolProgram& program, const TargetFn& target);

/// Binary entropy in bits, with h(0) = h(1) = 0.
double binary_entropy(double p);

/// (1-2e)^2 n - h((1-2e)^2): the mutual-information lower bound granted
/// by a recovery probability of (1-2e)^2 on n uniform bits. Requires
/// 0 <= epsilon < 1/2.
double fano_bound(double epsilon, int n);

/// One-bit classical protocol for inner products of size one: Alice
/// sends x, Bob announces x AND y.
ProtocolProgram build_bit_ip1();

/// build_bit_ip1 whose announced answer is flipped with probability
/// epsilon (a rotated ancilla measured by Bob supplies the noise).
ProtocolProgram make_noisy_bit_ip1(double epsilon);

/// Runs two copies of a classical bit protocol on the two halves of a
/// doubled input, superdense-codes each pair of simultaneous bits into
/// one qubit, and XORs the two announced answers. The number of qubit
/// sends equals the bit count of the input program. The input program
/// must send bits only, all at the top level (a branch-dependent
/// communication pattern has no fixed pairing).
ProtocolProgram interleave_to_qubits(const ProtocolProgram& bit_program);

}  // namespace qcc
