#include "qcc/coding.hpp"

#include <stdexcept>

namespace qcc {

namespace {

// Superdense encoding of (b1, b2) on the sender's half: Z^b1 X^b2,
// expressed as gates controlled by the sender's input-register qubits.
// Decoding is CNOT(half -> partner) then H(half); the sent half then
// carries b1 and the partner carries b2.
void emit_superdense_block(ProtocolProgram& p, Party sender, const std::string& b1_control,
                           const std::string& b2_control, const std::string& sender_half,
                           const std::string& receiver_half) {
  p.steps.push_back(local(sender, pauli_z(), {sender_half}, {b1_control}));
  p.steps.push_back(local(sender, pauli_x(), {sender_half}, {b2_control}));
  p.steps.push_back(send_qubit(sender, sender_half));
  Party receiver = other(sender);
  p.steps.push_back(local(receiver, cnot(), {sender_half, receiver_half}));
  p.steps.push_back(local(receiver, hadamard(), {sender_half}));
}

}  // namespace

ProtocolProgram build_superdense(int n) {
  if (n < 1) throw std::invalid_argument("superdense coding needs at least one bit");
  ProtocolProgram p;
  p.name = "superdense-" + std::to_string(n);
  for (int i = 0; i < n; ++i) p.alice_inputs.push_back("x" + std::to_string(i));

  std::vector<std::string> outputs;
  const int pairs = n / 2;
  for (int i = 0; i < pairs; ++i) {
    std::string a = "e" + std::to_string(i) + "a";
    std::string b = "e" + std::to_string(i) + "b";
    p.epr_pairs.push_back({a, b});
    outputs.push_back(a);
    outputs.push_back(b);
  }
  if (n % 2) {
    p.alice_ancillas.push_back("c");
    outputs.push_back("c");
  }

  for (int i = 0; i < pairs; ++i) {
    std::string a = "e" + std::to_string(i) + "a";
    std::string b = "e" + std::to_string(i) + "b";
    emit_superdense_block(p, Party::alice, p.alice_inputs[2 * i], p.alice_inputs[2 * i + 1], a,
                          b);
  }
  if (n % 2) {
    p.steps.push_back(local(Party::alice, pauli_x(), {"c"}, {p.alice_inputs[n - 1]}));
    p.steps.push_back(send_qubit(Party::alice, "c"));
  }

  p.output.party = Party::bob;
  p.output.value = outputs;
  return p;
}

std::optional<std::string> capacity_violation(const CapacitySpec& spec) {
  if (spec.n < 0 || spec.n_ab < 0 || spec.n_ba < 0)
    throw std::invalid_argument("capacity spec entries must be non-negative");
  if (2 * spec.n_ab < spec.n) return "n_AB >= ceil(n/2)";
  if (spec.n_ab + spec.n_ba < spec.n) return "n_AB + n_BA >= n";
  return std::nullopt;
}

ProtocolProgram build_capacity_protocol(const CapacitySpec& spec) {
  if (auto violated = capacity_violation(spec))
    throw std::invalid_argument("infeasible capacity spec: violates " + *violated);

  ProtocolProgram p;
  p.name = "capacity-" + std::to_string(spec.n) + "-" + std::to_string(spec.n_ab) + "-" +
           std::to_string(spec.n_ba);
  for (int i = 0; i < spec.n; ++i) p.alice_inputs.push_back("x" + std::to_string(i));

  // k pairs carry 2k bits by superdense coding; the rest go as basis
  // states. Untouched pad qubits consume the remaining budget exactly.
  const int k = std::max(0, spec.n - spec.n_ab);
  std::vector<std::string> outputs;

  for (int i = 0; i < k; ++i) {
    std::string keep = "p" + std::to_string(i) + "b";
    std::string give = "p" + std::to_string(i) + "a";
    p.bob_ancillas.push_back(keep);
    p.bob_ancillas.push_back(give);
    p.steps.push_back(local(Party::bob, hadamard(), {keep}));
    p.steps.push_back(local(Party::bob, cnot(), {keep, give}));
    p.steps.push_back(send_qubit(Party::bob, give));
  }
  for (int i = 0; i < k; ++i) {
    std::string keep = "p" + std::to_string(i) + "b";
    std::string give = "p" + std::to_string(i) + "a";
    emit_superdense_block(p, Party::alice, p.alice_inputs[2 * i], p.alice_inputs[2 * i + 1],
                          give, keep);
    outputs.push_back(give);
    outputs.push_back(keep);
  }
  for (int j = 2 * k; j < spec.n; ++j) {
    std::string carrier = "d" + std::to_string(j);
    p.alice_ancillas.push_back(carrier);
    p.steps.push_back(local(Party::alice, pauli_x(), {carrier}, {p.alice_inputs[j]}));
    p.steps.push_back(send_qubit(Party::alice, carrier));
    outputs.push_back(carrier);
  }
  const int pad_ab = spec.n_ab - (spec.n - k);
  for (int j = 0; j < pad_ab; ++j) {
    std::string padq = "fa" + std::to_string(j);
    p.alice_ancillas.push_back(padq);
    p.steps.push_back(send_qubit(Party::alice, padq));
  }
  const int pad_ba = spec.n_ba - k;
  for (int j = 0; j < pad_ba; ++j) {
    std::string padq = "fb" + std::to_string(j);
    p.bob_ancillas.push_back(padq);
    p.steps.push_back(send_qubit(Party::bob, padq));
  }

  p.output.party = Party::bob;
  p.output.value = outputs;
  return p;
}

namespace {

bool contains_send_bit(const std::vector<Step>& steps) {
  for (const auto& step : steps) {
    if (std::holds_alternative<SendBit>(step.v)) return true;
    if (const auto* br = std::get_if<ClassicalBranch>(&step.v))
      if (contains_send_bit(br->then_steps) || contains_send_bit(br->else_steps)) return true;
  }
  return false;
}

bool contains_nested_send_qubit(const std::vector<Step>& steps, bool inside_branch) {
  for (const auto& step : steps) {
    if (std::holds_alternative<SendQubit>(step.v) && inside_branch) return true;
    if (const auto* br = std::get_if<ClassicalBranch>(&step.v))
      if (contains_nested_send_qubit(br->then_steps, true) ||
          contains_nested_send_qubit(br->else_steps, true))
        return true;
  }
  return false;
}

}  // namespace

ProtocolProgram teleport_simulate(const ProtocolProgram& qubit_program) {
  if (contains_send_bit(qubit_program.steps))
    throw std::invalid_argument("teleport simulation requires a program without classical sends");
  if (contains_nested_send_qubit(qubit_program.steps, false))
    throw std::invalid_argument("teleport simulation does not support branch-dependent sends");

  ProtocolProgram out = qubit_program;
  out.name = qubit_program.name.empty() ? "teleported" : qubit_program.name + "-teleported";
  out.steps.clear();

  std::map<std::string, std::string> alias;  // original label -> current carrier
  auto current = [&](const std::string& q) {
    auto it = alias.find(q);
    return it == alias.end() ? q : it->second;
  };

  int gadget = 0;
  for (const auto& step : qubit_program.steps) {
    if (const auto* sq = std::get_if<SendQubit>(&step.v)) {
      const Party from = sq->from;
      const Party to = other(from);
      const std::string q = current(sq->qubit);
      const std::string tag = "tp" + std::to_string(gadget++);
      const std::string sender_half = fresh_label(out, tag + "s");
      const std::string receiver_half = fresh_label(out, tag + "r");
      // The pair is prior entanglement with one half on each side.
      if (from == Party::alice)
        out.epr_pairs.push_back({sender_half, receiver_half});
      else
        out.epr_pairs.push_back({receiver_half, sender_half});

      const std::string m_phase = tag + "z";
      const std::string m_flip = tag + "x";
      out.steps.push_back(local(from, cnot(), {q, sender_half}));
      out.steps.push_back(local(from, hadamard(), {q}));
      out.steps.push_back(measure(from, {q, sender_half}, {m_phase + "_m", m_flip + "_m"}));
      out.steps.push_back(send_bit(from, BitExpr::var(m_flip + "_m"), m_flip));
      out.steps.push_back(send_bit(from, BitExpr::var(m_phase + "_m"), m_phase));
      out.steps.push_back(
          branch(BitExpr::var(m_flip), {local(to, pauli_x(), {receiver_half})}, {}));
      out.steps.push_back(
          branch(BitExpr::var(m_phase), {local(to, pauli_z(), {receiver_half})}, {}));
      alias[sq->qubit] = receiver_half;
      continue;
    }
    // Remaining step kinds only need their label references redirected
    // to the current carrier of each teleported qubit.
    std::vector<Step> wrapped{step};
    rename_labels_in_steps(wrapped, alias);
    out.steps.push_back(std::move(wrapped[0]));
  }

  if (out.output.is_measurement()) {
    for (auto& q : std::get<1>(out.output.value)) q = current(q);
  }
  out.validate();
  return out;
}

}  // namespace qcc
