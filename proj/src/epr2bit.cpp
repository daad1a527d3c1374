#include "qcc/epr2bit.hpp"

#include "qcc/ipproto.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace qcc {

namespace {

Amplitude rt(int num, int den) { return Amplitude(std::sqrt(double(num) / double(den)), 0); }
Amplitude irt(int num, int den) { return Amplitude(0, std::sqrt(double(num) / double(den))); }

std::array<Unitary, 4> make_sender_rotations() {
  std::array<Unitary, 4> a;
  a[0] = Unitary(2, {rt(2, 5), -irt(3, 5),  //
                     -irt(3, 5), rt(2, 5)});
  a[1] = Unitary(2, {rt(4, 5), rt(3, 16) + irt(1, 80),  //
                     -rt(3, 16) + irt(1, 80), rt(4, 5)});
  a[2] = Unitary(2, {rt(4, 5), -rt(3, 16) + irt(1, 80),  //
                     rt(3, 16) + irt(1, 80), rt(4, 5)});
  a[3] = Unitary(2, {rt(1, 5), irt(4, 5),  //
                     irt(4, 5), rt(1, 5)});
  for (const auto& u : a)
    if (!u.is_unitary()) throw std::logic_error("sender rotation failed the unitarity check");
  return a;
}

std::array<Unitary, 4> make_receiver_rotations() {
  std::array<Unitary, 4> b;
  b[0] = Unitary::identity(2);  // unused: a receiver holding 00 answers directly
  b[1] = Unitary(2, {rt(3, 5), Amplitude(-0.5, 0) + irt(3, 20),  //
                     Amplitude(-0.5, 0) - irt(3, 20), -rt(3, 5)});
  b[2] = Unitary(2, {rt(3, 5), Amplitude(0.5, 0) + irt(3, 20),  //
                     Amplitude(-0.5, 0) + irt(3, 20), rt(3, 5)});
  b[3] = pauli_x();
  for (const auto& u : b)
    if (!u.is_unitary()) throw std::logic_error("receiver rotation failed the unitarity check");
  return b;
}

}  // namespace

const std::array<Unitary, 4>& sender_rotations() {
  static const std::array<Unitary, 4> a = make_sender_rotations();
  return a;
}

const std::array<Unitary, 4>& receiver_rotations() {
  static const std::array<Unitary, 4> b = make_receiver_rotations();
  return b;
}

std::array<StateVector, 4> qubit_codebook() {
  // The state the receiver ends up holding when the sender applies A_x
  // to their half of (|00>+|11>)/sqrt(2) and measures 0: the first row
  // of A_x.
  std::array<StateVector, 4> q;
  for (int v = 0; v < 4; ++v) {
    const Unitary& a = sender_rotations()[v];
    q[v] = StateVector({"q"}, {a.at(0, 0), a.at(0, 1)});
  }
  return q;
}

namespace {

// One of four single-qubit rotations on `target`, selected by the acting
// party's two input bits.
Step select_rotation(Party p, const std::array<Unitary, 4>& rot, const std::string& target) {
  return branch(
      BitExpr::input(p, 0),
      {branch(BitExpr::input(p, 1), {local(p, rot[3], {target})}, {local(p, rot[2], {target})})},
      {branch(BitExpr::input(p, 1), {local(p, rot[1], {target})}, {local(p, rot[0], {target})})});
}

// Receiver rotation for a known-nonzero input: 0 on the high bit forces
// the input 01.
Step select_receiver_rotation(Party p, const std::string& target) {
  const auto& b = receiver_rotations();
  return branch(
      BitExpr::input(p, 0),
      {branch(BitExpr::input(p, 1), {local(p, b[3], {target})}, {local(p, b[2], {target})})},
      {local(p, b[1], {target})});
}

BitExpr nonzero_input(Party p) {
  return BitExpr::or_of(BitExpr::input(p, 0), BitExpr::input(p, 1));
}

std::vector<Step> sender_flow(Party sender, const std::string& half) {
  std::vector<Step> steps;
  steps.push_back(select_rotation(sender, sender_rotations(), half));
  steps.push_back(measure(sender, {half}, {"m1"}));
  steps.push_back(send_bit(sender, BitExpr::var("m1"), "c1"));
  return steps;
}

std::vector<Step> receiver_flow(Party receiver, const std::string& half) {
  std::vector<Step> steps;
  steps.push_back(branch(nonzero_input(receiver),
                         {select_receiver_rotation(receiver, half),
                          measure(receiver, {half}, {"m2"}),
                          send_bit(receiver, BitExpr::xor_of(BitExpr::var("c1"), BitExpr::var("m2")),
                                   "ans")},
                         {send_bit(receiver, BitExpr::constant(0), "ans")}));
  return steps;
}

}  // namespace

ProtocolProgram build_entangled_2bit(CoinSource coin) {
  ProtocolProgram p;
  p.name = coin == CoinSource::shared_coin ? "epr-2bit" : "epr-2bit-eprcoin";
  p.alice_inputs = {"x0", "x1"};
  p.bob_inputs = {"y0", "y1"};
  p.epr_pairs.push_back({"qa", "qb"});

  BitExpr coin_alice = BitExpr::var("coin");
  BitExpr coin_bob = BitExpr::var("coin");
  if (coin == CoinSource::shared_coin) {
    p.steps.push_back(shared_coin("coin"));
  } else {
    // A joint coin from an extra pair: both halves agree when measured.
    p.epr_pairs.push_back({"ka", "kb"});
    p.steps.push_back(measure(Party::alice, {"ka"}, {"coinA"}));
    p.steps.push_back(measure(Party::bob, {"kb"}, {"coinB"}));
    coin_alice = BitExpr::var("coinA");
    coin_bob = BitExpr::var("coinB");
  }

  // coin = 0: Alice sends, Bob receives; coin = 1 is the mirror image.
  p.steps.push_back(branch(coin_bob, sender_flow(Party::bob, "qb"), {}));
  p.steps.push_back(branch(coin_alice, {}, sender_flow(Party::alice, "qa")));
  p.steps.push_back(branch(coin_alice, receiver_flow(Party::alice, "qa"), {}));
  p.steps.push_back(branch(coin_bob, {}, receiver_flow(Party::bob, "qb")));

  p.output.party = Party::bob;  // the answer bit is transmitted, so both know it
  p.output.value = std::vector<BitExpr>{BitExpr::var("ans")};
  return p;
}

namespace {

// Unitary whose first column prepares the given single-qubit state.
Unitary preparation(const Amplitude& q0, const Amplitude& q1) {
  return Unitary(2, {q0, -std::conj(q1), q1, std::conj(q0)});
}

Step select_preparation(Party p, const std::string& target) {
  std::array<Unitary, 4> prep;
  for (int v = 0; v < 4; ++v) {
    const Unitary& a = sender_rotations()[v];
    prep[v] = preparation(a.at(0, 0), a.at(0, 1));
  }
  return select_rotation(p, prep, target);
}

}  // namespace

ProtocolProgram build_qubit_2bit(AnswerMode mode) {
  ProtocolProgram p;
  p.name = mode == AnswerMode::qubit ? "qubit-2bit" : "qubit-2bit-bitanswer";
  p.alice_inputs = {"x0", "x1"};
  p.bob_inputs = {"y0", "y1"};
  p.alice_ancillas = {"sa"};
  p.bob_ancillas = {"sb"};
  if (mode == AnswerMode::qubit) {
    p.alice_ancillas.push_back("ra");
    p.bob_ancillas.push_back("rb");
  }
  p.steps.push_back(shared_coin("coin"));

  auto one_direction = [&](Party sender, const std::string& carrier, const std::string& ret) {
    Party receiver = other(sender);
    std::vector<Step> steps;
    steps.push_back(select_preparation(sender, carrier));
    steps.push_back(send_qubit(sender, carrier));
    if (mode == AnswerMode::qubit) {
      // The receiver writes the answer into a dedicated return qubit
      // (left |0> when their input is 00) and sends it back; the sender
      // reads it out.
      steps.push_back(branch(nonzero_input(receiver),
                             {select_receiver_rotation(receiver, carrier),
                              measure(receiver, {carrier}, {"m2"}),
                              branch(BitExpr::var("m2"),
                                     {local(receiver, pauli_x(), {ret})}, {})},
                             {}));
      steps.push_back(send_qubit(receiver, ret));
      steps.push_back(measure(sender, {ret}, {"ans"}));
    } else {
      steps.push_back(branch(nonzero_input(receiver),
                             {select_receiver_rotation(receiver, carrier),
                              measure(receiver, {carrier}, {"m2"}),
                              send_bit(receiver, BitExpr::var("m2"), "ans")},
                             {send_bit(receiver, BitExpr::constant(0), "ans")}));
    }
    return steps;
  };

  p.steps.push_back(branch(BitExpr::var("coin"), one_direction(Party::bob, "sb", "ra"), {}));
  p.steps.push_back(
      branch(BitExpr::var("coin"), {}, one_direction(Party::alice, "sa", "rb")));

  if (mode == AnswerMode::qubit) {
    // The answer is read by whichever party sent first; output over the
    // full transcript.
    p.output.party.reset();
  } else {
    p.output.party = Party::bob;
  }
  p.output.value = std::vector<BitExpr>{BitExpr::var("ans")};
  return p;
}

// --- classical enumeration -----------------------------------------------

Rational PairWeights::total() const {
  Rational t;
  for (const auto& row : w)
    for (const auto& e : row) t = t + e;
  return t;
}

void PairWeights::validate() const {
  for (const auto& row : w)
    for (const auto& e : row)
      if (e < Rational(0)) throw std::invalid_argument("negative pair weight");
  if (total() != Rational(1)) throw std::invalid_argument("pair weights must sum to exactly 1");
}

PairWeights pi_weights() {
  PairWeights d;
  for (int x = 1; x < 4; ++x)
    for (int y = 1; y < 4; ++y) d.w[x][y] = Rational(1, 9);
  return d;
}

PairWeights uniform_weights() {
  PairWeights d;
  for (auto& row : d.w)
    for (auto& e : row) e = Rational(1, 16);
  return d;
}

PairWeights point_weights(int xv, int yv) {
  if (xv < 0 || xv > 3 || yv < 0 || yv > 3)
    throw std::invalid_argument("point distribution needs inputs in 0..3");
  PairWeights d;
  d.w[xv][yv] = Rational(1);
  return d;
}

namespace {

int ip2(int xv, int yv) { return (((xv >> 1) & (yv >> 1)) ^ (xv & yv & 1)); }

}  // namespace

int tree_output(const ProtocolTree& tree, int xv, int yv) {
  const int in1 = tree.first_speaker == Party::alice ? xv : yv;
  const int b1 = tree.first_message[in1];
  const ProtocolTree::BranchSpec& spec = tree.second[b1];
  const int in2 = spec.speaker == Party::alice ? xv : yv;
  const int b2 = spec.message[in2];
  return tree.output[b1 * 2 + b2];
}

Rational tree_success(const ProtocolTree& tree, const PairWeights& dist) {
  Rational s;
  for (int xv = 0; xv < 4; ++xv)
    for (int yv = 0; yv < 4; ++yv)
      if (tree_output(tree, xv, yv) == ip2(xv, yv)) s = s + dist.w[xv][yv];
  return s;
}

std::uint64_t tree_count() { return 2ull * 16 * 32 * 32 * 16; }

ProtocolTree decode_tree(std::uint64_t id) {
  if (id >= tree_count()) throw std::invalid_argument("tree id out of range");
  auto table4 = [](std::uint64_t bits) {
    std::array<int, 4> t{};
    for (int v = 0; v < 4; ++v) t[v] = static_cast<int>((bits >> v) & 1u);
    return t;
  };
  ProtocolTree t;
  t.output = table4(id % 16);
  id /= 16;
  for (int b = 1; b >= 0; --b) {
    std::uint64_t enc = id % 32;
    id /= 32;
    t.second[b].message = table4(enc % 16);
    t.second[b].speaker = (enc / 16) ? Party::bob : Party::alice;
  }
  t.first_message = table4(id % 16);
  id /= 16;
  t.first_speaker = id ? Party::bob : Party::alice;
  return t;
}

EnumerationResult enumerate_classical_2bit(const PairWeights& dist, int jobs) {
  dist.validate();
  const std::uint64_t total = tree_count();
  if (jobs < 1) jobs = 1;
  if (static_cast<std::uint64_t>(jobs) > total) jobs = 1;

  struct Best {
    Rational score;
    std::uint64_t id = 0;
    bool set = false;
  };
  std::vector<Best> best(jobs);

  auto scan = [&](int worker, std::uint64_t lo, std::uint64_t hi) {
    Best local;
    for (std::uint64_t id = lo; id < hi; ++id) {
      Rational s = tree_success(decode_tree(id), dist);
      if (!local.set || s > local.score) {
        local.score = s;
        local.id = id;
        local.set = true;
      }
    }
    best[worker] = local;
  };

  if (jobs == 1) {
    scan(0, 0, total);
  } else {
    std::vector<std::thread> threads;
    const std::uint64_t chunk = (total + jobs - 1) / jobs;
    for (int w = 0; w < jobs; ++w)
      threads.emplace_back(scan, w, w * chunk, std::min<std::uint64_t>((w + 1) * chunk, total));
    for (auto& t : threads) t.join();
  }

  EnumerationResult result;
  result.trees = total;
  bool set = false;
  for (const auto& b : best) {
    if (!b.set) continue;
    if (!set || b.score > result.max_success ||
        (b.score == result.max_success && b.id < result.argmax_id)) {
      result.max_success = b.score;
      result.argmax_id = b.id;
      set = true;
    }
  }
  result.argmax = decode_tree(result.argmax_id);
  return result;
}

Rational enumerate_classical_2bit_receiver_output(const PairWeights& dist) {
  dist.validate();
  Rational best;
  // For each protocol structure, the best input-aware output labeling is
  // a majority vote inside every (transcript, own input) cell.
  for (std::uint64_t sid = 0; sid < tree_count() / 16; ++sid) {
    ProtocolTree t = decode_tree(sid * 16);
    for (Party outp : {Party::alice, Party::bob}) {
      Rational cell[4][4][2] = {};
      for (int xv = 0; xv < 4; ++xv)
        for (int yv = 0; yv < 4; ++yv) {
          const int in1 = t.first_speaker == Party::alice ? xv : yv;
          const int b1 = t.first_message[in1];
          const auto& spec = t.second[b1];
          const int b2 = spec.message[spec.speaker == Party::alice ? xv : yv];
          const int own = outp == Party::alice ? xv : yv;
          cell[b1 * 2 + b2][own][ip2(xv, yv)] =
              cell[b1 * 2 + b2][own][ip2(xv, yv)] + dist.w[xv][yv];
        }
      Rational s;
      for (int tr = 0; tr < 4; ++tr)
        for (int own = 0; own < 4; ++own)
          s = s + std::max(cell[tr][own][0], cell[tr][own][1]);
      if (s > best) best = s;
    }
  }
  return best;
}

namespace {

// Expression matching a truth table over two already-defined transcript
// bits (high bit first).
BitExpr transcript_truth_table(const std::string& hi, const std::string& lo,
                               const std::array<int, 4>& table) {
  BitExpr acc = BitExpr::constant(0);
  bool empty = true;
  for (int v = 0; v < 4; ++v) {
    if (!table[v]) continue;
    BitExpr a = (v & 2) ? BitExpr::var(hi) : BitExpr::not_of(BitExpr::var(hi));
    BitExpr b = (v & 1) ? BitExpr::var(lo) : BitExpr::not_of(BitExpr::var(lo));
    BitExpr minterm = BitExpr::and_of(a, b);
    acc = empty ? minterm : BitExpr::or_of(acc, minterm);
    empty = false;
  }
  return acc;
}

BitExpr message_expr(Party speaker, const std::array<int, 4>& table) {
  // Table indices already pack (input bit 0, input bit 1) high-to-low.
  return input_truth_table(speaker, 2, {table[0], table[1], table[2], table[3]});
}

}  // namespace

ProtocolProgram tree_to_program(const ProtocolTree& tree) {
  ProtocolProgram p;
  p.name = "classical-2bit-tree";
  p.alice_inputs = {"x0", "x1"};
  p.bob_inputs = {"y0", "y1"};
  p.steps.push_back(send_bit(tree.first_speaker, message_expr(tree.first_speaker,
                                                              tree.first_message),
                             "b1"));
  p.steps.push_back(branch(
      BitExpr::var("b1"),
      {send_bit(tree.second[1].speaker, message_expr(tree.second[1].speaker,
                                                     tree.second[1].message),
                "b2")},
      {send_bit(tree.second[0].speaker, message_expr(tree.second[0].speaker,
                                                     tree.second[0].message),
                "b2")}));
  p.output.party = Party::bob;
  p.output.value = std::vector<BitExpr>{transcript_truth_table("b1", "b2", tree.output)};
  return p;
}

Section5Report verify_section5_claim() {
  Section5Report report;

  SuccessReport entangled = success_report(build_entangled_2bit(), ip_value);
  SuccessReport qubit = success_report(build_qubit_2bit(), ip_value);
  report.entangled_min_success = entangled.min_success;
  report.qubit_min_success = qubit.min_success;
  for (std::size_t i = 0; i < entangled.per_pair.size(); ++i)
    report.max_table_difference =
        std::max(report.max_table_difference,
                 std::abs(entangled.per_pair[i].success - qubit.per_pair[i].success));

  report.classical_two_bit_max = enumerate_classical_2bit(pi_weights()).max_success;

  // Three classical bits reach success 1: Alice announces both input
  // bits and Bob returns the inner product.
  ProtocolProgram three;
  three.name = "classical-3bit";
  three.alice_inputs = {"x0", "x1"};
  three.bob_inputs = {"y0", "y1"};
  three.steps.push_back(send_bit(Party::alice, BitExpr::input(Party::alice, 0), "c0"));
  three.steps.push_back(send_bit(Party::alice, BitExpr::input(Party::alice, 1), "c1"));
  three.steps.push_back(send_bit(
      Party::bob,
      BitExpr::xor_of(BitExpr::and_of(BitExpr::var("c0"), BitExpr::input(Party::bob, 0)),
                      BitExpr::and_of(BitExpr::var("c1"), BitExpr::input(Party::bob, 1))),
      "ans"));
  three.output.party = Party::bob;
  three.output.value = std::vector<BitExpr>{BitExpr::var("ans")};
  SuccessReport three_rep = success_report(three, ip_value);
  PairWeights pi = pi_weights();
  Rational three_success;
  for (const auto& pair : three_rep.per_pair) {
    if (pair.success >= 1.0 - 1e-12)
      three_success = three_success + pi.w[pack_bits(pair.x)][pack_bits(pair.y)];
  }
  report.three_bit_witness_success = three_success;

  report.quantum_beats_classical = report.entangled_min_success >= 0.8 - 1e-9 &&
                                   report.qubit_min_success >= 0.8 - 1e-9 &&
                                   report.classical_two_bit_max < Rational(4, 5);
  return report;
}

}  // namespace qcc
