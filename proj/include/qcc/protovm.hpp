// Representation and exact execution of two-party protocols.
//
// A ProtocolProgram declares input registers for both parties (qubits
// initialized to the classical inputs on execution), zero-initialized
// ancilla registers, prior entanglement, a step list, and an output
// specification. execute() runs the program by exhaustive branching:
// every measurement and shared coin splits the run into weighted
// branches with exact Born probabilities; nothing is sampled.
//
// Execution tracks in full quantum form only the qubits that some step
// can disturb (gate targets, sent, measured, or entangled qubits).
// Registers that are only ever read - e.g. input registers used purely
// as gate controls - stay classical basis values, which keeps the
// simulated dimension small without changing any probability.
//
// Global state order: Bob's inputs, Bob's ancillas, entangled pairs
// (Bob's half first), prior shared state, Alice's inputs, Alice's
// ancillas.

#pragma once

#include "qcc/qcore.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qcc {

enum class Party { alice, bob };
Party other(Party p);
const char* party_name(Party p);

using Bits = std::vector<int>;
/// bits[0] is the most significant bit of the packed value.
std::uint64_t pack_bits(const Bits& bits);
Bits unpack_bits(std::uint64_t v, std::size_t width);
std::string bits_to_string(const Bits& bits);
Bits bits_from_string(const std::string& s);

// --- classical bit expressions -------------------------------------------

/// Boolean expression over transcript values and a party's own input
/// bits; evaluated per branch during execution.
class BitExpr {
 public:
  enum class Kind { constant, var, input, not_op, xor_op, and_op, or_op };

  struct Node {
    Kind kind;
    int value = 0;          // constant
    std::string name;       // var
    Party party = Party::alice;
    std::size_t bit = 0;    // input
    std::vector<BitExpr> args;
  };

  BitExpr() : node_(std::make_shared<Node>(Node{Kind::constant, 0, {}, Party::alice, 0, {}})) {}

  static BitExpr constant(int v);
  static BitExpr var(std::string name);
  static BitExpr input(Party p, std::size_t bit);
  static BitExpr not_of(BitExpr a);
  static BitExpr xor_of(BitExpr a, BitExpr b);
  static BitExpr and_of(BitExpr a, BitExpr b);
  static BitExpr or_of(BitExpr a, BitExpr b);

  int eval(const Bits& x, const Bits& y,
           const std::map<std::string, int>& transcript) const;
  void collect_vars(std::vector<std::string>& out) const;
  void collect_inputs(std::vector<std::pair<Party, std::size_t>>& out) const;
  const Node& node() const { return *node_; }

  /// Structural rewrite: transcript names mapped through rename (missing
  /// keys unchanged) and input bit indices shifted by the party's offset.
  BitExpr rewritten(const std::map<std::string, std::string>& rename,
                    std::size_t alice_offset, std::size_t bob_offset) const;

 private:
  explicit BitExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Expression matching a truth table over a party's first `width` input
/// bits (disjunction of minterms).
BitExpr input_truth_table(Party p, std::size_t width, const std::vector<int>& table);

// --- steps -----------------------------------------------------------------

struct Step;

struct LocalUnitary {
  Party party;
  Unitary u;
  std::vector<std::string> targets;
  std::vector<std::string> controls;  // positive controls, may be classical
};

struct SendQubit {
  Party from;
  std::string qubit;
};

struct SendBit {
  Party from;
  BitExpr value;
  std::string name;  // transcript name of the transmitted bit
};

struct MeasureStandard {
  Party party;
  std::vector<std::string> qubits;
  std::vector<std::string> names;  // one transcript name per qubit
};

struct SharedCoin {
  std::string name;
};

struct ClassicalBranch {
  BitExpr condition;
  std::vector<Step> then_steps;
  std::vector<Step> else_steps;
};

struct Step {
  std::variant<LocalUnitary, SendQubit, SendBit, MeasureStandard, SharedCoin, ClassicalBranch> v;
};

Step local(Party p, Unitary u, std::vector<std::string> targets,
           std::vector<std::string> controls = {});
Step send_qubit(Party from, std::string qubit);
Step send_bit(Party from, BitExpr value, std::string name);
Step measure(Party p, std::vector<std::string> qubits, std::vector<std::string> names);
Step shared_coin(std::string name);
Step branch(BitExpr condition, std::vector<Step> then_steps, std::vector<Step> else_steps);

// --- program ---------------------------------------------------------------

struct EprPair {
  std::string alice_qubit;
  std::string bob_qubit;
};

/// Arbitrary prior shared state with a declared owner per qubit.
struct SharedState {
  StateVector state;
  std::map<std::string, Party> owner;
};

/// Protocol output: either classical expressions over the transcript
/// (and the announcing party's inputs), or qubits measured in the
/// standard basis at the end of the run. When `party` is set, every
/// referenced transcript value must be visible to that party; when
/// unset the output is a function of the full transcript (both parties
/// learn every transmitted bit).
struct OutputSpec {
  std::optional<Party> party;
  std::variant<std::vector<BitExpr>, std::vector<std::string>> value;

  std::size_t width() const;
  bool is_measurement() const { return value.index() == 1; }
};

struct ProtocolProgram {
  std::string name;
  std::vector<std::string> alice_inputs;
  std::vector<std::string> bob_inputs;
  std::vector<std::string> alice_ancillas;
  std::vector<std::string> bob_ancillas;
  std::vector<EprPair> epr_pairs;
  std::optional<SharedState> prior_state;
  std::vector<Step> steps;
  OutputSpec output;

  std::size_t n_alice_inputs() const { return alice_inputs.size(); }
  std::size_t n_bob_inputs() const { return bob_inputs.size(); }
  /// All declared labels in global state order.
  std::vector<std::string> all_labels() const;
  /// Throws std::invalid_argument on duplicate labels or ill-formed
  /// output references.
  void validate() const;
};

ProtocolProgram rename_labels(const ProtocolProgram& program,
                              const std::map<std::string, std::string>& rename);

/// In-place qubit-label renaming inside a step list (labels absent from
/// the map are unchanged; transcript names are untouched).
void rename_labels_in_steps(std::vector<Step>& steps,
                            const std::map<std::string, std::string>& rename);

/// Next label of the form `base`, `base1`, `base2`, ... that does not
/// collide with any label declared by the program.
std::string fresh_label(const ProtocolProgram& program, const std::string& base);

// --- execution ---------------------------------------------------------------

struct Ledger {
  int qubits_ab = 0;
  int qubits_ba = 0;
  int bits_ab = 0;
  int bits_ba = 0;
  int prior_epr_pairs = 0;

  int total_qubits() const { return qubits_ab + qubits_ba; }
  int total_bits() const { return bits_ab + bits_ba; }
  bool operator==(const Ledger&) const = default;
};

struct ExecutionBranch {
  std::map<std::string, int> transcript;
  double probability = 0;
  StateVector state;                        // quantum-tracked qubits
  std::map<std::string, int> classical_bits;  // basis-tracked qubits
  std::map<std::string, Party> owner;
  Ledger ledger;
};

struct ExecutionOutcome {
  std::vector<ExecutionBranch> branches;
  std::size_t output_width = 0;
  std::map<std::uint64_t, double> output_distribution;
  Ledger ledger;  // per-counter maximum over branches
  StateVector initial_state;
  Bits x, y;
};

struct ExecOptions {
  bool materialize_all = false;  // track every declared qubit in the state
};

/// Labels tracked in quantum form under the given options, in global
/// state order.
std::vector<std::string> material_labels(const ProtocolProgram& program,
                                         const ExecOptions& opts = {});

/// Initial state over the material labels with the given inputs.
StateVector initial_state_for(const ProtocolProgram& program, const Bits& x, const Bits& y,
                              const ExecOptions& opts = {});

ExecutionOutcome execute(const ProtocolProgram& program, const Bits& x, const Bits& y,
                         const ExecOptions& opts = {});

Ledger ledger_of(const ExecutionOutcome& outcome);

/// Steps reversed, unitaries inverted, qubit sends flipped. Only
/// LocalUnitary and SendQubit steps are allowed.
ProtocolProgram reverse(const ProtocolProgram& program);

// --- step-at-a-time simulation of measurement-free programs -----------------

enum class StepKind { unitary, send_ab, send_ba, epr_setup };

/// Walks a measurement-free program one step at a time, exposing the
/// global state and the ownership map. Declared prior EPR pairs are
/// lowered to explicit setup steps (Bob prepares the pair and sends one
/// half to Alice) so the walk starts from a product state.
class LinearSim {
 public:
  LinearSim(const ProtocolProgram& program, const Bits& x, const Bits& y,
            const ExecOptions& opts = {});

  bool done() const { return next_ == ops_.size(); }
  std::size_t total_steps() const { return ops_.size(); }
  StepKind advance();

  const StateVector& state() const { return state_; }
  const std::map<std::string, Party>& owner() const { return owner_; }
  /// Quantum-tracked qubits currently owned by p, in state order.
  std::vector<std::string> material_qubits_of(Party p) const;

 private:
  struct Op {
    StepKind kind;
    Unitary u;
    std::vector<std::string> targets;
    std::string sent;  // send_* / epr_setup
  };
  std::vector<Op> ops_;
  std::size_t next_ = 0;
  StateVector state_;
  std::map<std::string, Party> owner_;
};

// --- success reporting -------------------------------------------------------

using TargetFn = std::function<std::uint64_t(const Bits& x, const Bits& y)>;

struct PairSuccess {
  Bits x, y;
  double success = 0;
};

struct SuccessReport {
  std::vector<PairSuccess> per_pair;
  double min_success = 0;
  double mean_success = 0;
  double weighted_success = 0;  // under the supplied weights
};

struct PairWeight {
  Bits x, y;
  double weight = 0;
};

/// Per-pair success probabilities of the program against the target.
/// With no weights, all 2^(na+nb) pairs are enumerated uniformly;
/// otherwise only the weighted pairs run and the weights must sum to 1
/// within kTol.
SuccessReport success_report(const ProtocolProgram& program, const TargetFn& target,
                             const std::vector<PairWeight>& weights = {});

}  // namespace qcc
