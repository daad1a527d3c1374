// The two-bit protocols for inner products on two-bit inputs: the
// entangled two-classical-bit protocol built from the published sender
// and receiver rotations, its unentangled two-qubit variant, and an
// exhaustive enumeration of deterministic two-bit classical protocols
// that pins the best classical success under the hard distribution to
// exactly 7/9.

#pragma once

#include "qcc/protovm.hpp"
#include "qcc/rational.hpp"

#include <array>

namespace qcc {

/// Sender rotations A_{x1 x2}, indexed by the packed input (x1 is the
/// high bit). Unitarity is checked on first access.
const std::array<Unitary, 4>& sender_rotations();

/// Receiver rotations B_{y1 y2} for y in {01, 10, 11}, indexed by the
/// packed input; index 0 is unused (the receiver answers 0 outright).
/// B_11 is the bit flip.
const std::array<Unitary, 4>& receiver_rotations();

/// Single-qubit states |Q_{x1 x2}> the unentangled variant transmits.
/// Q_x is the receiver-side state left by the entangled protocol when
/// the sender applies A_x and measures 0.
std::array<StateVector, 4> qubit_codebook();

enum class CoinSource {
  shared_coin,  // the shared-coin primitive
  epr_pair,     // an extra EPR pair measured by both parties
};

/// Entangled protocol: a coin picks the sender; the sender rotates
/// their EPR half with A (indexed by their own input) and transmits the
/// measurement; a receiver holding 00 answers 0, otherwise rotates with
/// B, measures, and answers the XOR. Exactly two classical bits on
/// every path, one prior EPR pair (plus one more when the coin itself
/// is an EPR pair).
ProtocolProgram build_entangled_2bit(CoinSource coin = CoinSource::shared_coin);

enum class AnswerMode {
  qubit,  // the answer returns as a basis-state qubit (two quantum transmissions)
  bit,    // the answer returns as a classical bit (one qubit + one bit)
};

/// Unentangled variant: the sender transmits |Q_x> directly and the
/// receiver finishes as above. Same per-pair success as the entangled
/// protocol; zero prior entanglement.
ProtocolProgram build_qubit_2bit(AnswerMode mode = AnswerMode::qubit);

/// Rational weights over the 16 input pairs (x, y), each in {0..3}.
struct PairWeights {
  std::array<std::array<Rational, 4>, 4> w{};

  Rational total() const;
  void validate() const;  // weights sum to exactly 1, none negative
};

/// Zero weight when either side holds 00, else 1/9.
PairWeights pi_weights();
PairWeights uniform_weights();
PairWeights point_weights(int xv, int yv);

/// Deterministic two-bit protocol: a first speaker announces a function
/// of their input; depending on that bit a second speaker announces a
/// function of theirs; the output is read off the transcript.
struct ProtocolTree {
  Party first_speaker = Party::alice;
  std::array<int, 4> first_message{};  // bit per speaker input value
  struct BranchSpec {
    Party speaker = Party::alice;
    std::array<int, 4> message{};
  };
  std::array<BranchSpec, 2> second{};  // indexed by the first bit
  std::array<int, 4> output{};         // indexed by the transcript (b1 b2)
};

int tree_output(const ProtocolTree& tree, int xv, int yv);
Rational tree_success(const ProtocolTree& tree, const PairWeights& dist);

/// Canonical enumeration order; decode(encode(t)) == t.
std::uint64_t tree_count();
ProtocolTree decode_tree(std::uint64_t id);

struct EnumerationResult {
  Rational max_success;
  std::uint64_t argmax_id = 0;
  ProtocolTree argmax;
  std::uint64_t trees = 0;
};

/// Scores every deterministic two-bit protocol tree against the inner
/// product under the given weights, in exact rational arithmetic. Ties
/// resolve to the lowest tree id. jobs > 1 splits the id range across
/// threads; the result is identical regardless.
EnumerationResult enumerate_classical_2bit(const PairWeights& dist, int jobs = 1);

/// Best achievable success when the announced output may additionally
/// depend on one party's own input (computed by majority vote per
/// transcript/input cell, reported for comparison only).
Rational enumerate_classical_2bit_receiver_output(const PairWeights& dist);

/// The witness tree as an executable protocol program.
ProtocolProgram tree_to_program(const ProtocolTree& tree);

struct Section5Report {
  double entangled_min_success = 0;      // over all 16 pairs
  double qubit_min_success = 0;
  double max_table_difference = 0;       // between the two protocols' tables
  Rational classical_two_bit_max;        // under pi
  Rational three_bit_witness_success;    // under pi
  bool quantum_beats_classical = false;  // 2-bit quantum >= 4/5 > classical max
};

/// Bundles the section's claims: both quantum protocols reach 4/5 on
/// every pair, two classical bits cap at 7/9 under pi, and a three-bit
/// classical protocol (Alice sends x, Bob answers the inner product)
/// reaches success 1.
Section5Report verify_section5_claim();

}  // namespace qcc
