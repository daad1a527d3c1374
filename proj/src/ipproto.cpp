#include "qcc/ipproto.hpp"

#include "qcc/coding.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace qcc {

int ip(const Bits& x, const Bits& y) {
  if (x.size() != y.size()) throw std::invalid_argument("inner product needs equal lengths");
  int r = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((x[i] | y[i]) & ~1) throw std::invalid_argument("bits must be 0 or 1");
    r ^= x[i] & y[i];
  }
  return r;
}

std::uint64_t ip_value(const Bits& x, const Bits& y) {
  return static_cast<std::uint64_t>(ip(x, y));
}

ProtocolProgram build_exact_ip(int n) {
  if (n < 1) throw std::invalid_argument("inner product size must be at least 1");
  ProtocolProgram p = build_superdense(n);
  p.name = "exact-ip-" + std::to_string(n);
  for (int i = 0; i < n; ++i) p.bob_inputs.push_back("y" + std::to_string(i));
  p.bob_ancillas.push_back("out");

  // After the superdense decode the measured-output list of the carrier
  // program holds x bit per bit; fold each into the answer qubit.
  std::vector<std::string> carriers = std::get<1>(p.output.value);
  for (int i = 0; i < n; ++i)
    p.steps.push_back(local(Party::bob, pauli_x(), {"out"}, {carriers[i], p.bob_inputs[i]}));

  p.output.party = Party::bob;
  p.output.value = std::vector<std::string>{"out"};
  return p;
}

ProtocolProgram make_noisy_exact_ip(int n, double theta) {
  if (theta < 0 || theta >= std::atan(1.0))  // pi/4
    throw std::invalid_argument("noise angle must satisfy 0 <= theta < pi/4");
  ProtocolProgram p = build_exact_ip(n);
  p.name = "noisy-ip-" + std::to_string(n);
  if (theta != 0) p.steps.push_back(local(Party::bob, rotation(theta), {"out"}));
  return p;
}

namespace {

void require_unitary_steps(const std::vector<Step>& steps, const char* who) {
  for (const auto& step : steps) {
    if (std::holds_alternative<ClassicalBranch>(step.v))
      throw std::invalid_argument(std::string(who) + ": classical branching is not supported");
    if (std::holds_alternative<MeasureStandard>(step.v) ||
        std::holds_alternative<SharedCoin>(step.v) || std::holds_alternative<SendBit>(step.v))
      throw std::invalid_argument(std::string(who) +
                                  ": program must be measurement-free (unitaries and qubit "
                                  "sends only)");
  }
}

std::map<std::string, Party> final_ownership(const ProtocolProgram& p) {
  std::map<std::string, Party> owner;
  for (const auto& l : p.alice_inputs) owner[l] = Party::alice;
  for (const auto& l : p.alice_ancillas) owner[l] = Party::alice;
  for (const auto& l : p.bob_inputs) owner[l] = Party::bob;
  for (const auto& l : p.bob_ancillas) owner[l] = Party::bob;
  for (const auto& pr : p.epr_pairs) {
    owner[pr.alice_qubit] = Party::alice;
    owner[pr.bob_qubit] = Party::bob;
  }
  if (p.prior_state)
    for (const auto& [l, pa] : p.prior_state->owner) owner[l] = pa;
  for (const auto& step : p.steps)
    if (const auto* sq = std::get_if<SendQubit>(&step.v)) owner[sq->qubit] = other(sq->from);
  return owner;
}

bool writes_to(const std::vector<Step>& steps, const std::set<std::string>& qubits) {
  for (const auto& step : steps) {
    if (const auto* lu = std::get_if<LocalUnitary>(&step.v)) {
      for (const auto& t : lu->targets)
        if (qubits.count(t)) return true;
    } else if (const auto* sq = std::get_if<SendQubit>(&step.v)) {
      if (qubits.count(sq->qubit)) return true;
    }
  }
  return false;
}

}  // namespace

ProtocolProgram make_clean(const ProtocolProgram& program) {
  require_unitary_steps(program.steps, "make_clean");
  if (!program.output.is_measurement() || std::get<1>(program.output.value).size() != 1)
    throw std::invalid_argument("make_clean needs a single designated output qubit");
  const std::string out_qubit = std::get<1>(program.output.value)[0];
  if (final_ownership(program).at(out_qubit) != Party::bob)
    throw std::invalid_argument("make_clean: the output qubit must end up with Bob");

  ProtocolProgram c = program;
  c.name = program.name.empty() ? "clean" : program.name + "-clean";

  // Bob's input register must survive untouched; if the body writes to
  // it, route the body (and the output designation) through fresh copies.
  std::set<std::string> bob_in(c.bob_inputs.begin(), c.bob_inputs.end());
  std::vector<Step> forward = c.steps;
  std::string folded_out = out_qubit;
  if (writes_to(forward, bob_in)) {
    std::map<std::string, std::string> to_copy;
    std::vector<Step> prefix;
    for (const auto& yq : c.bob_inputs) {
      std::string cp = fresh_label(c, yq + "w");
      c.bob_ancillas.push_back(cp);
      to_copy[yq] = cp;
      prefix.push_back(local(Party::bob, pauli_x(), {cp}, {yq}));
    }
    rename_labels_in_steps(forward, to_copy);
    forward.insert(forward.begin(), prefix.begin(), prefix.end());
    if (to_copy.count(folded_out)) folded_out = to_copy.at(folded_out);
  }

  const std::string ans = fresh_label(c, "ans");
  c.bob_inputs.insert(c.bob_inputs.begin(), ans);

  ProtocolProgram tmp = c;
  tmp.steps = forward;
  std::vector<Step> backward = reverse(tmp).steps;

  c.steps = std::move(forward);
  c.steps.push_back(local(Party::bob, cnot(), {folded_out, ans}));
  for (auto& s : backward) c.steps.push_back(std::move(s));
  c.output.party = Party::bob;
  c.output.value = std::vector<std::string>{ans};
  return c;
}

AttackReport reduction_attack(const ProtocolProgram& clean_program, const Bits& x) {
  if (x.size() != clean_program.alice_inputs.size())
    throw std::invalid_argument("attack input length does not match the program");
  if (clean_program.bob_inputs.size() != x.size() + 1)
    throw std::invalid_argument(
        "attack needs a clean program (answer qubit plus a matching input register)");
  require_unitary_steps(clean_program.steps, "reduction_attack");
  const std::size_t n = x.size();

  ProtocolProgram attack = clean_program;
  attack.name = clean_program.name + "-attack";
  std::vector<Step> hadamards;
  for (const auto& q : clean_program.bob_inputs)
    hadamards.push_back(local(Party::bob, hadamard(), {q}));
  std::vector<Step> steps = hadamards;
  for (const auto& s : clean_program.steps) steps.push_back(s);
  for (const auto& s : hadamards) steps.push_back(s);
  attack.steps = std::move(steps);
  attack.output.party = Party::bob;
  attack.output.value = clean_program.bob_inputs;

  Bits ybits(n + 1, 0);
  ybits[0] = 1;  // answer qubit starts in |1>
  ExecutionOutcome outcome = execute(attack, x, ybits);

  Bits want_bits = x;
  want_bits.insert(want_bits.begin(), 1);
  const std::uint64_t want = pack_bits(want_bits);
  auto it = outcome.output_distribution.find(want);

  AttackReport report;
  report.x = x;
  report.recovery_probability =
      it == outcome.output_distribution.end() ? 0.0 : it->second;

  // Unitary program: a single branch, so the gap analysis applies.
  const StateVector& final_state = outcome.branches.at(0).state;
  StateVector ideal = initial_state_for(attack, x, want_bits);
  report.euclidean_gap = euclidean_distance(final_state, ideal);
  report.cos_theta = inner_product(ideal, final_state).real();

  const double p = report.recovery_probability;
  report.mutual_info_bound =
      std::max(0.0, p * static_cast<double>(n) - binary_entropy(p));
  return report;
}

ErrorProfile epsilon_of(const ProtocolProgram& program, const TargetFn& target) {
  SuccessReport rep = success_report(program, target);
  ErrorProfile profile;
  double sum = 0;
  for (const auto& pair : rep.per_pair) {
    double err = 1.0 - pair.success;
    profile.per_pair.push_back({pair.x, pair.y, err});
    profile.epsilon = std::max(profile.epsilon, err);
    sum += err;
  }
  profile.mean_error =
      profile.per_pair.empty() ? 0.0 : sum / static_cast<double>(profile.per_pair.size());
  return profile;
}

double binary_entropy(double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("binary entropy needs p in [0, 1]");
  double h = 0;
  if (p > 0) h -= p * std::log2(p);
  if (p < 1) h -= (1 - p) * std::log2(1 - p);
  return h;
}

double fano_bound(double epsilon, int n) {
  if (epsilon < 0 || epsilon >= 0.5)
    throw std::invalid_argument("fano bound needs epsilon in [0, 1/2)");
  if (n < 1) throw std::invalid_argument("fano bound needs n >= 1");
  const double c = (1 - 2 * epsilon) * (1 - 2 * epsilon);
  return c * static_cast<double>(n) - binary_entropy(c);
}

ProtocolProgram build_bit_ip1() {
  ProtocolProgram p;
  p.name = "bit-ip1";
  p.alice_inputs = {"x0"};
  p.bob_inputs = {"y0"};
  p.steps.push_back(send_bit(Party::alice, BitExpr::input(Party::alice, 0), "c0"));
  p.output.party = Party::bob;
  p.output.value = std::vector<BitExpr>{
      BitExpr::and_of(BitExpr::var("c0"), BitExpr::input(Party::bob, 0))};
  return p;
}

ProtocolProgram make_noisy_bit_ip1(double epsilon) {
  if (epsilon < 0 || epsilon > 1) throw std::invalid_argument("flip probability must be in [0, 1]");
  ProtocolProgram p = build_bit_ip1();
  p.name = "noisy-bit-ip1";
  p.bob_ancillas.push_back("nz");
  p.steps.push_back(local(Party::bob, rotation(std::asin(std::sqrt(epsilon))), {"nz"}));
  p.steps.push_back(measure(Party::bob, {"nz"}, {"noise"}));
  p.output.value = std::vector<BitExpr>{BitExpr::xor_of(
      BitExpr::and_of(BitExpr::var("c0"), BitExpr::input(Party::bob, 0)),
      BitExpr::var("noise"))};
  return p;
}

namespace {

void collect_defined_names(const std::vector<Step>& steps, std::vector<std::string>& out) {
  for (const auto& step : steps) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SendBit>) out.push_back(s.name);
          else if constexpr (std::is_same_v<T, MeasureStandard>)
            for (const auto& nm : s.names) out.push_back(nm);
          else if constexpr (std::is_same_v<T, SharedCoin>) out.push_back(s.name);
          else if constexpr (std::is_same_v<T, ClassicalBranch>) {
            collect_defined_names(s.then_steps, out);
            collect_defined_names(s.else_steps, out);
          }
        },
        step.v);
  }
}

struct InstanceRewrite {
  std::map<std::string, std::string> labels;
  std::map<std::string, std::string> vars;
  std::size_t alice_offset = 0;
  std::size_t bob_offset = 0;

  BitExpr expr(const BitExpr& e) const { return e.rewritten(vars, alice_offset, bob_offset); }

  Step step(const Step& s) const {
    Step out = s;
    std::visit(
        [&](auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, LocalUnitary>) {
            for (auto& t : v.targets) t = at(labels, t);
            for (auto& c : v.controls) c = at(labels, c);
          } else if constexpr (std::is_same_v<T, SendQubit>) {
            v.qubit = at(labels, v.qubit);
          } else if constexpr (std::is_same_v<T, SendBit>) {
            v.value = expr(v.value);
            v.name = at(vars, v.name);
          } else if constexpr (std::is_same_v<T, MeasureStandard>) {
            for (auto& q : v.qubits) q = at(labels, q);
            for (auto& nm : v.names) nm = at(vars, nm);
          } else if constexpr (std::is_same_v<T, SharedCoin>) {
            v.name = at(vars, v.name);
          } else if constexpr (std::is_same_v<T, ClassicalBranch>) {
            v.condition = expr(v.condition);
            for (auto& sub : v.then_steps) sub = step(sub);
            for (auto& sub : v.else_steps) sub = step(sub);
          }
        },
        out.v);
    return out;
  }

  static std::string at(const std::map<std::string, std::string>& m, const std::string& k) {
    auto it = m.find(k);
    return it == m.end() ? k : it->second;
  }
};

bool has_send_qubit(const std::vector<Step>& steps) {
  for (const auto& step : steps) {
    if (std::holds_alternative<SendQubit>(step.v)) return true;
    if (const auto* br = std::get_if<ClassicalBranch>(&step.v))
      if (has_send_qubit(br->then_steps) || has_send_qubit(br->else_steps)) return true;
  }
  return false;
}

bool has_nested_send_bit(const std::vector<Step>& steps, bool inside) {
  for (const auto& step : steps) {
    if (std::holds_alternative<SendBit>(step.v) && inside) return true;
    if (const auto* br = std::get_if<ClassicalBranch>(&step.v))
      if (has_nested_send_bit(br->then_steps, true) || has_nested_send_bit(br->else_steps, true))
        return true;
  }
  return false;
}

}  // namespace

ProtocolProgram interleave_to_qubits(const ProtocolProgram& bit_program) {
  if (has_send_qubit(bit_program.steps))
    throw std::invalid_argument("interleaving needs a program that sends classical bits only");
  if (has_nested_send_bit(bit_program.steps, false))
    throw std::invalid_argument(
        "interleaving cannot pair branch-dependent sends (no fixed communication pattern)");
  if (bit_program.output.is_measurement() || bit_program.output.width() != 1)
    throw std::invalid_argument("interleaving needs a single announced output bit");
  if (bit_program.prior_state)
    throw std::invalid_argument("interleaving does not support arbitrary prior shared states");

  const std::size_t na = bit_program.alice_inputs.size();
  const std::size_t nb = bit_program.bob_inputs.size();

  ProtocolProgram out;
  out.name = (bit_program.name.empty() ? "bit" : bit_program.name) + "-interleaved";

  std::vector<std::string> defined;
  collect_defined_names(bit_program.steps, defined);

  InstanceRewrite inst[2];
  for (int i = 0; i < 2; ++i) {
    const std::string suffix = "#" + std::to_string(i + 1);
    for (const auto& l : bit_program.all_labels()) inst[i].labels[l] = l + suffix;
    for (const auto& v : defined) inst[i].vars[v] = v + suffix;
    inst[i].alice_offset = i * na;
    inst[i].bob_offset = i * nb;
  }

  for (int i = 0; i < 2; ++i) {
    for (const auto& l : bit_program.alice_inputs)
      out.alice_inputs.push_back(inst[i].labels.at(l));
    for (const auto& l : bit_program.bob_inputs) out.bob_inputs.push_back(inst[i].labels.at(l));
  }
  for (int i = 0; i < 2; ++i) {
    for (const auto& l : bit_program.alice_ancillas)
      out.alice_ancillas.push_back(inst[i].labels.at(l));
    for (const auto& l : bit_program.bob_ancillas)
      out.bob_ancillas.push_back(inst[i].labels.at(l));
    for (const auto& pr : bit_program.epr_pairs)
      out.epr_pairs.push_back(
          {inst[i].labels.at(pr.alice_qubit), inst[i].labels.at(pr.bob_qubit)});
  }

  int pair_index = 0;
  for (const auto& step : bit_program.steps) {
    if (const auto* sb = std::get_if<SendBit>(&step.v)) {
      // Both instances transmit one bit here; superdense-code the two
      // values into a single qubit over a fresh pair.
      const Party from = sb->from;
      const Party to = other(from);
      const std::string tag = "g" + std::to_string(pair_index++);
      const std::string a_half = fresh_label(out, tag + "a");
      const std::string b_half = fresh_label(out, tag + "b");
      out.epr_pairs.push_back({a_half, b_half});
      const std::string sender_half = from == Party::alice ? a_half : b_half;
      const std::string receiver_half = from == Party::alice ? b_half : a_half;

      out.steps.push_back(
          branch(inst[0].expr(sb->value), {local(from, pauli_z(), {sender_half})}, {}));
      out.steps.push_back(
          branch(inst[1].expr(sb->value), {local(from, pauli_x(), {sender_half})}, {}));
      out.steps.push_back(send_qubit(from, sender_half));
      out.steps.push_back(local(to, cnot(), {sender_half, receiver_half}));
      out.steps.push_back(local(to, hadamard(), {sender_half}));
      out.steps.push_back(measure(to, {sender_half}, {inst[0].vars.at(sb->name)}));
      out.steps.push_back(measure(to, {receiver_half}, {inst[1].vars.at(sb->name)}));
      continue;
    }
    out.steps.push_back(inst[0].step(step));
    out.steps.push_back(inst[1].step(step));
  }

  const BitExpr& base = std::get<0>(bit_program.output.value)[0];
  out.output.party = bit_program.output.party;
  out.output.value =
      std::vector<BitExpr>{BitExpr::xor_of(inst[0].expr(base), inst[1].expr(base))};
  out.validate();
  return out;
}

}  // namespace qcc
