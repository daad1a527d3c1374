#include "qcc/protovm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qcc {

namespace {

constexpr double kBranchPruneTol = 1e-15;

int party_mask(Party p) { return p == Party::alice ? 1 : 2; }

}  // namespace

Party other(Party p) { return p == Party::alice ? Party::bob : Party::alice; }

const char* party_name(Party p) { return p == Party::alice ? "alice" : "bob"; }

std::uint64_t pack_bits(const Bits& bits) {
  std::uint64_t v = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0 or 1");
    v = (v << 1) | static_cast<std::uint64_t>(b);
  }
  return v;
}

Bits unpack_bits(std::uint64_t v, std::size_t width) {
  Bits bits(width, 0);
  for (std::size_t i = 0; i < width; ++i) bits[width - 1 - i] = static_cast<int>((v >> i) & 1u);
  return bits;
}

std::string bits_to_string(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (int b : bits) s.push_back(b ? '1' : '0');
  return s;
}

Bits bits_from_string(const std::string& s) {
  Bits bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw std::invalid_argument("bit string must contain only 0 and 1");
    bits.push_back(c - '0');
  }
  return bits;
}

// --- BitExpr -----------------------------------------------------------------

BitExpr BitExpr::constant(int v) {
  if (v != 0 && v != 1) throw std::invalid_argument("bit constant must be 0 or 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = v;
  return BitExpr(n);
}

BitExpr BitExpr::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::var;
  n->name = std::move(name);
  return BitExpr(n);
}

BitExpr BitExpr::input(Party p, std::size_t bit) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::input;
  n->party = p;
  n->bit = bit;
  return BitExpr(n);
}

BitExpr BitExpr::not_of(BitExpr a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::not_op;
  n->args = {std::move(a)};
  return BitExpr(n);
}

BitExpr BitExpr::xor_of(BitExpr a, BitExpr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::xor_op;
  n->args = {std::move(a), std::move(b)};
  return BitExpr(n);
}

BitExpr BitExpr::and_of(BitExpr a, BitExpr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::and_op;
  n->args = {std::move(a), std::move(b)};
  return BitExpr(n);
}

BitExpr BitExpr::or_of(BitExpr a, BitExpr b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::or_op;
  n->args = {std::move(a), std::move(b)};
  return BitExpr(n);
}

int BitExpr::eval(const Bits& x, const Bits& y,
                  const std::map<std::string, int>& transcript) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::constant:
      return n.value;
    case Kind::var: {
      auto it = transcript.find(n.name);
      if (it == transcript.end())
        throw std::runtime_error("undefined transcript value: " + n.name);
      return it->second;
    }
    case Kind::input: {
      const Bits& bits = (n.party == Party::alice) ? x : y;
      if (n.bit >= bits.size())
        throw std::runtime_error("input bit index out of range for " +
                                 std::string(party_name(n.party)));
      return bits[n.bit];
    }
    case Kind::not_op:
      return 1 - n.args[0].eval(x, y, transcript);
    case Kind::xor_op:
      return n.args[0].eval(x, y, transcript) ^ n.args[1].eval(x, y, transcript);
    case Kind::and_op:
      return n.args[0].eval(x, y, transcript) & n.args[1].eval(x, y, transcript);
    case Kind::or_op:
      return n.args[0].eval(x, y, transcript) | n.args[1].eval(x, y, transcript);
  }
  throw std::logic_error("unreachable");
}

void BitExpr::collect_vars(std::vector<std::string>& out) const {
  const Node& n = *node_;
  if (n.kind == Kind::var) out.push_back(n.name);
  for (const auto& a : n.args) a.collect_vars(out);
}

void BitExpr::collect_inputs(std::vector<std::pair<Party, std::size_t>>& out) const {
  const Node& n = *node_;
  if (n.kind == Kind::input) out.emplace_back(n.party, n.bit);
  for (const auto& a : n.args) a.collect_inputs(out);
}

BitExpr BitExpr::rewritten(const std::map<std::string, std::string>& rename,
                           std::size_t alice_offset, std::size_t bob_offset) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::constant:
      return *this;
    case Kind::var: {
      auto it = rename.find(n.name);
      return it == rename.end() ? *this : var(it->second);
    }
    case Kind::input:
      return input(n.party, n.bit + (n.party == Party::alice ? alice_offset : bob_offset));
    case Kind::not_op:
      return not_of(n.args[0].rewritten(rename, alice_offset, bob_offset));
    case Kind::xor_op:
      return xor_of(n.args[0].rewritten(rename, alice_offset, bob_offset),
                    n.args[1].rewritten(rename, alice_offset, bob_offset));
    case Kind::and_op:
      return and_of(n.args[0].rewritten(rename, alice_offset, bob_offset),
                    n.args[1].rewritten(rename, alice_offset, bob_offset));
    case Kind::or_op:
      return or_of(n.args[0].rewritten(rename, alice_offset, bob_offset),
                   n.args[1].rewritten(rename, alice_offset, bob_offset));
  }
  throw std::logic_error("unreachable");
}

BitExpr input_truth_table(Party p, std::size_t width, const std::vector<int>& table) {
  if (table.size() != (std::size_t{1} << width))
    throw std::invalid_argument("truth table size does not match width");
  BitExpr acc = BitExpr::constant(0);
  bool empty = true;
  for (std::size_t v = 0; v < table.size(); ++v) {
    if (!table[v]) continue;
    BitExpr minterm = BitExpr::constant(1);
    for (std::size_t i = 0; i < width; ++i) {
      BitExpr atom = BitExpr::input(p, i);
      if (!((v >> (width - 1 - i)) & 1u)) atom = BitExpr::not_of(atom);
      minterm = (i == 0) ? atom : BitExpr::and_of(minterm, atom);
    }
    acc = empty ? minterm : BitExpr::or_of(acc, minterm);
    empty = false;
  }
  return acc;
}

// --- step factories ----------------------------------------------------------

Step local(Party p, Unitary u, std::vector<std::string> targets,
           std::vector<std::string> controls) {
  return Step{LocalUnitary{p, std::move(u), std::move(targets), std::move(controls)}};
}
Step send_qubit(Party from, std::string qubit) { return Step{SendQubit{from, std::move(qubit)}}; }
Step send_bit(Party from, BitExpr value, std::string name) {
  return Step{SendBit{from, std::move(value), std::move(name)}};
}
Step measure(Party p, std::vector<std::string> qubits, std::vector<std::string> names) {
  return Step{MeasureStandard{p, std::move(qubits), std::move(names)}};
}
Step shared_coin(std::string name) { return Step{SharedCoin{std::move(name)}}; }
Step branch(BitExpr condition, std::vector<Step> then_steps, std::vector<Step> else_steps) {
  return Step{ClassicalBranch{std::move(condition), std::move(then_steps), std::move(else_steps)}};
}

// --- program -----------------------------------------------------------------

std::size_t OutputSpec::width() const {
  return value.index() == 0 ? std::get<0>(value).size() : std::get<1>(value).size();
}

std::vector<std::string> ProtocolProgram::all_labels() const {
  std::vector<std::string> out;
  for (const auto& l : bob_inputs) out.push_back(l);
  for (const auto& l : bob_ancillas) out.push_back(l);
  for (const auto& p : epr_pairs) {
    out.push_back(p.bob_qubit);
    out.push_back(p.alice_qubit);
  }
  if (prior_state) for (const auto& l : prior_state->state.labels) out.push_back(l);
  for (const auto& l : alice_inputs) out.push_back(l);
  for (const auto& l : alice_ancillas) out.push_back(l);
  return out;
}

void ProtocolProgram::validate() const {
  std::vector<std::string> labels = all_labels();
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw std::invalid_argument("empty qubit label");
    if (!seen.insert(l).second) throw std::invalid_argument("duplicate qubit label: " + l);
  }
  if (prior_state) {
    for (const auto& l : prior_state->state.labels)
      if (!prior_state->owner.count(l))
        throw std::invalid_argument("prior state qubit has no declared owner: " + l);
    if (!prior_state->state.is_normalized())
      throw std::invalid_argument("prior state is not normalized");
  }
  if (output.is_measurement()) {
    for (const auto& q : std::get<1>(output.value))
      if (!seen.count(q)) throw std::invalid_argument("output references unknown qubit: " + q);
  }
}

namespace {

std::string mapped(const std::map<std::string, std::string>& m, const std::string& l) {
  auto it = m.find(l);
  return it == m.end() ? l : it->second;
}

}  // namespace

void rename_labels_in_steps(std::vector<Step>& steps,
                            const std::map<std::string, std::string>& m) {
  for (auto& step : steps) {
    std::visit(
        [&](auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, LocalUnitary>) {
            for (auto& t : s.targets) t = mapped(m, t);
            for (auto& c : s.controls) c = mapped(m, c);
          } else if constexpr (std::is_same_v<T, SendQubit>) {
            s.qubit = mapped(m, s.qubit);
          } else if constexpr (std::is_same_v<T, MeasureStandard>) {
            for (auto& q : s.qubits) q = mapped(m, q);
          } else if constexpr (std::is_same_v<T, ClassicalBranch>) {
            rename_labels_in_steps(s.then_steps, m);
            rename_labels_in_steps(s.else_steps, m);
          }
        },
        step.v);
  }
}

ProtocolProgram rename_labels(const ProtocolProgram& program,
                              const std::map<std::string, std::string>& rename) {
  ProtocolProgram out = program;
  auto map_all = [&](std::vector<std::string>& ls) {
    for (auto& l : ls) l = mapped(rename, l);
  };
  map_all(out.alice_inputs);
  map_all(out.bob_inputs);
  map_all(out.alice_ancillas);
  map_all(out.bob_ancillas);
  for (auto& p : out.epr_pairs) {
    p.alice_qubit = mapped(rename, p.alice_qubit);
    p.bob_qubit = mapped(rename, p.bob_qubit);
  }
  if (out.prior_state) {
    for (auto& l : out.prior_state->state.labels) l = mapped(rename, l);
    std::map<std::string, Party> owners;
    for (const auto& [l, p] : out.prior_state->owner) owners[mapped(rename, l)] = p;
    out.prior_state->owner = std::move(owners);
  }
  rename_labels_in_steps(out.steps, rename);
  if (out.output.is_measurement()) {
    for (auto& q : std::get<1>(out.output.value)) q = mapped(rename, q);
  }
  out.validate();
  return out;
}

std::string fresh_label(const ProtocolProgram& program, const std::string& base) {
  std::set<std::string> taken;
  for (const auto& l : program.all_labels()) taken.insert(l);
  if (!taken.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!taken.count(cand)) return cand;
  }
}

// --- materialization ----------------------------------------------------------

namespace {

void collect_disturbed(const std::vector<Step>& steps, std::set<std::string>& out) {
  for (const auto& step : steps) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, LocalUnitary>) {
            for (const auto& t : s.targets) out.insert(t);
          } else if constexpr (std::is_same_v<T, SendQubit>) {
            out.insert(s.qubit);
          } else if constexpr (std::is_same_v<T, MeasureStandard>) {
            for (const auto& q : s.qubits) out.insert(q);
          } else if constexpr (std::is_same_v<T, ClassicalBranch>) {
            collect_disturbed(s.then_steps, out);
            collect_disturbed(s.else_steps, out);
          }
        },
        step.v);
  }
}

}  // namespace

std::vector<std::string> material_labels(const ProtocolProgram& program, const ExecOptions& opts) {
  std::vector<std::string> all = program.all_labels();
  if (opts.materialize_all) return all;
  std::set<std::string> material;
  collect_disturbed(program.steps, material);
  for (const auto& p : program.epr_pairs) {
    material.insert(p.alice_qubit);
    material.insert(p.bob_qubit);
  }
  if (program.prior_state)
    for (const auto& l : program.prior_state->state.labels) material.insert(l);
  std::vector<std::string> out;
  for (const auto& l : all)
    if (material.count(l)) out.push_back(l);
  return out;
}

namespace {

struct InitParts {
  StateVector state;
  std::map<std::string, int> cbits;
  std::map<std::string, Party> owner;
};

std::vector<Amplitude> kron(const std::vector<Amplitude>& a, const std::vector<Amplitude>& b) {
  std::vector<Amplitude> out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

// epr_as_basis: prior pairs start |00> (they get prepared by explicit
// setup steps in the linear walk) instead of the Bell state.
InitParts build_initial(const ProtocolProgram& program, const Bits& x, const Bits& y,
                        const ExecOptions& opts, bool epr_as_basis) {
  program.validate();
  if (x.size() != program.alice_inputs.size())
    throw std::invalid_argument("alice input length does not match program");
  if (y.size() != program.bob_inputs.size())
    throw std::invalid_argument("bob input length does not match program");
  for (int b : x)
    if (b != 0 && b != 1) throw std::invalid_argument("input bits must be 0 or 1");
  for (int b : y)
    if (b != 0 && b != 1) throw std::invalid_argument("input bits must be 0 or 1");

  std::set<std::string> material;
  for (const auto& l : material_labels(program, opts)) material.insert(l);

  InitParts parts;
  std::vector<std::string> labels;
  std::vector<Amplitude> amps{Amplitude(1, 0)};
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<Amplitude> bell{s, 0, 0, s};
  const std::vector<Amplitude> basis00{1, 0, 0, 0};

  auto add_single = [&](const std::string& l, int bit, Party owner) {
    parts.owner[l] = owner;
    if (material.count(l)) {
      labels.push_back(l);
      std::vector<Amplitude> f{bit ? Amplitude(0, 0) : Amplitude(1, 0),
                               bit ? Amplitude(1, 0) : Amplitude(0, 0)};
      amps = kron(amps, f);
    } else {
      parts.cbits[l] = bit;
    }
  };

  for (std::size_t i = 0; i < program.bob_inputs.size(); ++i)
    add_single(program.bob_inputs[i], y[i], Party::bob);
  for (const auto& l : program.bob_ancillas) add_single(l, 0, Party::bob);
  for (const auto& p : program.epr_pairs) {
    parts.owner[p.bob_qubit] = Party::bob;
    parts.owner[p.alice_qubit] = epr_as_basis ? Party::bob : Party::alice;
    labels.push_back(p.bob_qubit);
    labels.push_back(p.alice_qubit);
    amps = kron(amps, epr_as_basis ? basis00 : bell);
  }
  if (program.prior_state) {
    for (const auto& l : program.prior_state->state.labels) {
      labels.push_back(l);
      parts.owner[l] = program.prior_state->owner.at(l);
    }
    amps = kron(amps, program.prior_state->state.amps);
  }
  for (std::size_t i = 0; i < program.alice_inputs.size(); ++i)
    add_single(program.alice_inputs[i], x[i], Party::alice);
  for (const auto& l : program.alice_ancillas) add_single(l, 0, Party::alice);

  parts.state = StateVector(std::move(labels), std::move(amps));
  return parts;
}

}  // namespace

StateVector initial_state_for(const ProtocolProgram& program, const Bits& x, const Bits& y,
                              const ExecOptions& opts) {
  return build_initial(program, x, y, opts, false).state;
}

// --- execution ----------------------------------------------------------------

namespace {

struct RunState {
  StateVector sv;
  std::map<std::string, int> cbits;
  std::map<std::string, Party> owner;
  std::map<std::string, int> transcript;
  std::map<std::string, int> visibility;  // transcript name -> party mask
  double prob = 1.0;
  Ledger ledger;
};

struct Ctx {
  const ProtocolProgram& program;
  const Bits& x;
  const Bits& y;
};

void record(RunState& st, const std::string& name, int value, int vis_mask) {
  if (st.transcript.count(name))
    throw std::runtime_error("duplicate transcript name: " + name);
  st.transcript[name] = value;
  st.visibility[name] = vis_mask;
}

void check_expr_visible(const RunState& st, const BitExpr& e, Party p, const char* what) {
  std::vector<std::string> vars;
  e.collect_vars(vars);
  for (const auto& v : vars) {
    auto it = st.visibility.find(v);
    if (it == st.visibility.end())
      throw std::runtime_error(std::string("undefined transcript value: ") + v);
    if (!(it->second & party_mask(p)))
      throw std::runtime_error(std::string(what) + " references value not visible to " +
                               party_name(p) + ": " + v);
  }
  std::vector<std::pair<Party, std::size_t>> inputs;
  e.collect_inputs(inputs);
  for (const auto& [ip, bit] : inputs) {
    (void)bit;
    if (ip != p)
      throw std::runtime_error(std::string(what) + " reads the other party's input");
  }
}

void check_owned(const RunState& st, Party p, const std::string& q, const char* what) {
  auto it = st.owner.find(q);
  if (it == st.owner.end()) throw std::runtime_error(std::string(what) + ": unknown qubit " + q);
  if (it->second != p)
    throw std::runtime_error(std::string(what) + ": qubit " + q + " is not owned by " +
                             party_name(p));
}

// Applies a local unitary, resolving classical controls; returns false
// when a classical control is 0 (gate skipped).
bool apply_local(RunState& st, const LocalUnitary& lu) {
  std::vector<std::string> quantum_controls;
  for (const auto& c : lu.controls) {
    check_owned(st, lu.party, c, "local unitary");
    if (st.sv.index_of(c) >= 0) {
      quantum_controls.push_back(c);
    } else {
      if (st.cbits.at(c) == 0) return false;
    }
  }
  for (const auto& t : lu.targets) {
    check_owned(st, lu.party, t, "local unitary");
    if (st.sv.index_of(t) < 0)
      throw std::runtime_error("local unitary targets an untracked qubit: " + t);
  }
  Unitary eff = lu.u;
  std::vector<std::string> all_targets = lu.targets;
  for (auto it = quantum_controls.rbegin(); it != quantum_controls.rend(); ++it) {
    eff = controlled(eff);
    all_targets.insert(all_targets.begin(), *it);
  }
  st.sv = apply_unitary(st.sv, eff, all_targets);
  return true;
}

std::vector<Party> acting_parties(const std::vector<Step>& steps) {
  std::set<Party> parties;
  std::function<void(const std::vector<Step>&)> walk = [&](const std::vector<Step>& ss) {
    for (const auto& step : ss) {
      std::visit(
          [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LocalUnitary>) parties.insert(s.party);
            else if constexpr (std::is_same_v<T, SendQubit>) parties.insert(s.from);
            else if constexpr (std::is_same_v<T, SendBit>) parties.insert(s.from);
            else if constexpr (std::is_same_v<T, MeasureStandard>) parties.insert(s.party);
            else if constexpr (std::is_same_v<T, SharedCoin>) {
              parties.insert(Party::alice);
              parties.insert(Party::bob);
            } else if constexpr (std::is_same_v<T, ClassicalBranch>) {
              walk(s.then_steps);
              walk(s.else_steps);
            }
          },
          step.v);
    }
  };
  walk(steps);
  return {parties.begin(), parties.end()};
}

void run_steps(const Ctx& ctx, const std::vector<Step>& steps, std::vector<RunState>& states);

void run_one(const Ctx& ctx, const Step& step, RunState st, std::vector<RunState>& out) {
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LocalUnitary>) {
          apply_local(st, s);
          out.push_back(std::move(st));
        } else if constexpr (std::is_same_v<T, SendQubit>) {
          check_owned(st, s.from, s.qubit, "send qubit");
          st.owner[s.qubit] = other(s.from);
          if (s.from == Party::alice)
            ++st.ledger.qubits_ab;
          else
            ++st.ledger.qubits_ba;
          out.push_back(std::move(st));
        } else if constexpr (std::is_same_v<T, SendBit>) {
          check_expr_visible(st, s.value, s.from, "sent bit");
          int v = s.value.eval(ctx.x, ctx.y, st.transcript);
          record(st, s.name, v, 3);
          if (s.from == Party::alice)
            ++st.ledger.bits_ab;
          else
            ++st.ledger.bits_ba;
          out.push_back(std::move(st));
        } else if constexpr (std::is_same_v<T, MeasureStandard>) {
          if (s.qubits.size() != s.names.size())
            throw std::runtime_error("measurement needs one name per qubit");
          std::vector<std::string> material;
          for (const auto& q : s.qubits) {
            check_owned(st, s.party, q, "measurement");
            if (st.sv.index_of(q) >= 0) material.push_back(q);
          }
          if (material.empty()) {
            for (std::size_t i = 0; i < s.qubits.size(); ++i)
              record(st, s.names[i], st.cbits.at(s.qubits[i]), party_mask(s.party));
            out.push_back(std::move(st));
            return;
          }
          std::vector<double> probs = outcome_probabilities(st.sv, material);
          for (std::uint64_t o = 0; o < probs.size(); ++o) {
            if (probs[o] < kBranchPruneTol) continue;
            RunState next = st;
            double p = 0;
            next.sv = project_outcome(st.sv, material, o, p);
            next.prob *= p;
            std::map<std::string, int> measured;
            for (std::size_t i = 0; i < material.size(); ++i)
              measured[material[i]] = static_cast<int>((o >> (material.size() - 1 - i)) & 1u);
            for (std::size_t i = 0; i < s.qubits.size(); ++i) {
              auto it = measured.find(s.qubits[i]);
              int v = it != measured.end() ? it->second : next.cbits.at(s.qubits[i]);
              record(next, s.names[i], v, party_mask(s.party));
            }
            out.push_back(std::move(next));
          }
        } else if constexpr (std::is_same_v<T, SharedCoin>) {
          for (int v : {0, 1}) {
            RunState next = st;
            next.prob *= 0.5;
            record(next, s.name, v, 3);
            out.push_back(std::move(next));
          }
        } else if constexpr (std::is_same_v<T, ClassicalBranch>) {
          const std::vector<Step>& taken =
              s.condition.eval(ctx.x, ctx.y, st.transcript) ? s.then_steps : s.else_steps;
          for (Party p : acting_parties(taken))
            check_expr_visible(st, s.condition, p, "branch condition");
          std::vector<RunState> sub;
          sub.push_back(std::move(st));
          run_steps(ctx, taken, sub);
          for (auto& b : sub) out.push_back(std::move(b));
        }
      },
      step.v);
}

void run_steps(const Ctx& ctx, const std::vector<Step>& steps, std::vector<RunState>& states) {
  for (const auto& step : steps) {
    std::vector<RunState> next;
    next.reserve(states.size());
    for (auto& st : states) run_one(ctx, step, std::move(st), next);
    states = std::move(next);
  }
}

}  // namespace

ExecutionOutcome execute(const ProtocolProgram& program, const Bits& x, const Bits& y,
                         const ExecOptions& opts) {
  InitParts init = build_initial(program, x, y, opts, false);
  Ctx ctx{program, x, y};

  RunState st;
  st.sv = init.state;
  st.cbits = std::move(init.cbits);
  st.owner = std::move(init.owner);
  st.ledger.prior_epr_pairs = static_cast<int>(program.epr_pairs.size());

  std::vector<RunState> states;
  states.push_back(std::move(st));
  run_steps(ctx, program.steps, states);

  ExecutionOutcome outcome;
  outcome.x = x;
  outcome.y = y;
  outcome.initial_state = std::move(init.state);
  outcome.output_width = program.output.width();

  double total = 0;
  for (auto& st2 : states) total += st2.prob;
  if (std::abs(total - 1.0) > kTol)
    throw std::runtime_error("branch probabilities do not sum to 1");

  // Output distribution. A measured output is reported as the Born
  // distribution of the designated qubits in each branch; it does not
  // split the branch.
  for (auto& st2 : states) {
    if (!program.output.is_measurement()) {
      const auto& exprs = std::get<0>(program.output.value);
      Bits bits;
      bits.reserve(exprs.size());
      for (const auto& e : exprs) {
        if (program.output.party) check_expr_visible(st2, e, *program.output.party, "output");
        bits.push_back(e.eval(x, y, st2.transcript));
      }
      outcome.output_distribution[pack_bits(bits)] += st2.prob;
    } else {
      const auto& qubits = std::get<1>(program.output.value);
      std::vector<std::string> material;
      std::vector<int> fixed_bits(qubits.size(), -1);
      for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (program.output.party)
          check_owned(st2, *program.output.party, qubits[i], "output measurement");
        if (st2.sv.index_of(qubits[i]) >= 0)
          material.push_back(qubits[i]);
        else
          fixed_bits[i] = st2.cbits.at(qubits[i]);
      }
      std::vector<double> probs =
          material.empty() ? std::vector<double>{1.0} : outcome_probabilities(st2.sv, material);
      for (std::uint64_t o = 0; o < probs.size(); ++o) {
        if (probs[o] <= 0) continue;
        Bits bits(qubits.size(), 0);
        std::size_t mi = 0;
        for (std::size_t i = 0; i < qubits.size(); ++i) {
          if (fixed_bits[i] >= 0)
            bits[i] = fixed_bits[i];
          else
            bits[i] = static_cast<int>((o >> (material.size() - 1 - mi)) & 1u), ++mi;
        }
        outcome.output_distribution[pack_bits(bits)] += st2.prob * probs[o];
      }
    }
    ExecutionBranch b;
    b.transcript = std::move(st2.transcript);
    b.probability = st2.prob;
    b.state = std::move(st2.sv);
    b.classical_bits = std::move(st2.cbits);
    b.owner = std::move(st2.owner);
    b.ledger = st2.ledger;
    outcome.branches.push_back(std::move(b));
  }

  Ledger max = outcome.branches.empty() ? Ledger{} : outcome.branches.front().ledger;
  for (const auto& b : outcome.branches) {
    max.qubits_ab = std::max(max.qubits_ab, b.ledger.qubits_ab);
    max.qubits_ba = std::max(max.qubits_ba, b.ledger.qubits_ba);
    max.bits_ab = std::max(max.bits_ab, b.ledger.bits_ab);
    max.bits_ba = std::max(max.bits_ba, b.ledger.bits_ba);
  }
  max.prior_epr_pairs = static_cast<int>(program.epr_pairs.size());
  outcome.ledger = max;
  return outcome;
}

Ledger ledger_of(const ExecutionOutcome& outcome) { return outcome.ledger; }

ProtocolProgram reverse(const ProtocolProgram& program) {
  ProtocolProgram out = program;
  out.steps.clear();
  for (auto it = program.steps.rbegin(); it != program.steps.rend(); ++it) {
    if (const auto* lu = std::get_if<LocalUnitary>(&it->v)) {
      out.steps.push_back(local(lu->party, lu->u.dagger(), lu->targets, lu->controls));
    } else if (const auto* sq = std::get_if<SendQubit>(&it->v)) {
      out.steps.push_back(send_qubit(other(sq->from), sq->qubit));
    } else {
      throw std::invalid_argument(
          "reverse requires a measurement-free program (local unitaries and qubit sends only)");
    }
  }
  return out;
}

// --- LinearSim ----------------------------------------------------------------

LinearSim::LinearSim(const ProtocolProgram& program, const Bits& x, const Bits& y,
                     const ExecOptions& opts) {
  if (program.prior_state)
    throw std::invalid_argument("linear walk does not support arbitrary prior shared states");
  InitParts init = build_initial(program, x, y, opts, true);
  state_ = std::move(init.state);
  owner_ = std::move(init.owner);

  for (const auto& p : program.epr_pairs) {
    Op op;
    op.kind = StepKind::epr_setup;
    op.targets = {p.bob_qubit, p.alice_qubit};
    op.sent = p.alice_qubit;
    ops_.push_back(std::move(op));
  }

  std::map<std::string, int> cbits = init.cbits;
  for (const auto& step : program.steps) {
    if (const auto* lu = std::get_if<LocalUnitary>(&step.v)) {
      // Resolve classical controls up front (they never change in a
      // measurement-free program). A gate disabled by a 0 control stays
      // in the schedule as a no-op so walks for different inputs advance
      // in lockstep.
      Unitary eff = lu->u;
      std::vector<std::string> targets = lu->targets;
      bool skipped = false;
      std::vector<std::string> quantum_controls;
      for (const auto& c : lu->controls) {
        if (state_.index_of(c) >= 0) {
          quantum_controls.push_back(c);
        } else if (cbits.at(c) == 0) {
          skipped = true;
          break;
        }
      }
      Op op;
      op.kind = StepKind::unitary;
      if (!skipped) {
        for (auto it = quantum_controls.rbegin(); it != quantum_controls.rend(); ++it) {
          eff = controlled(eff);
          targets.insert(targets.begin(), *it);
        }
        op.u = std::move(eff);
        op.targets = std::move(targets);
      }
      ops_.push_back(std::move(op));
    } else if (const auto* sq = std::get_if<SendQubit>(&step.v)) {
      Op op;
      op.kind = sq->from == Party::alice ? StepKind::send_ab : StepKind::send_ba;
      op.sent = sq->qubit;
      ops_.push_back(std::move(op));
    } else {
      throw std::invalid_argument(
          "linear walk requires a measurement-free program (local unitaries and qubit sends "
          "only)");
    }
  }
}

StepKind LinearSim::advance() {
  if (done()) throw std::logic_error("linear walk already finished");
  const Op& op = ops_[next_++];
  switch (op.kind) {
    case StepKind::unitary:
      if (!op.targets.empty()) state_ = apply_unitary(state_, op.u, op.targets);
      break;
    case StepKind::epr_setup: {
      state_ = apply_unitary(state_, hadamard(), {op.targets[0]});
      state_ = apply_unitary(state_, cnot(), {op.targets[0], op.targets[1]});
      owner_[op.sent] = Party::alice;
      break;
    }
    case StepKind::send_ab:
      owner_[op.sent] = Party::bob;
      break;
    case StepKind::send_ba:
      owner_[op.sent] = Party::alice;
      break;
  }
  return op.kind;
}

std::vector<std::string> LinearSim::material_qubits_of(Party p) const {
  std::vector<std::string> out;
  for (const auto& l : state_.labels)
    if (owner_.at(l) == p) out.push_back(l);
  return out;
}

// --- success reporting ----------------------------------------------------------

SuccessReport success_report(const ProtocolProgram& program, const TargetFn& target,
                             const std::vector<PairWeight>& weights) {
  std::vector<PairWeight> pairs = weights;
  if (pairs.empty()) {
    const std::size_t na = program.alice_inputs.size();
    const std::size_t nb = program.bob_inputs.size();
    const std::uint64_t total = std::uint64_t{1} << (na + nb);
    const double w = 1.0 / static_cast<double>(total);
    for (std::uint64_t xa = 0; xa < (std::uint64_t{1} << na); ++xa)
      for (std::uint64_t yb = 0; yb < (std::uint64_t{1} << nb); ++yb)
        pairs.push_back({unpack_bits(xa, na), unpack_bits(yb, nb), w});
  } else {
    double total = 0;
    for (const auto& p : pairs) total += p.weight;
    if (std::abs(total - 1.0) > kTol)
      throw std::invalid_argument("pair weights do not sum to 1");
  }

  SuccessReport report;
  report.min_success = 1.0;
  double sum = 0, weighted = 0;
  for (const auto& p : pairs) {
    ExecutionOutcome outcome = execute(program, p.x, p.y);
    std::uint64_t want = target(p.x, p.y);
    auto it = outcome.output_distribution.find(want);
    double s = it == outcome.output_distribution.end() ? 0.0 : it->second;
    report.per_pair.push_back({p.x, p.y, s});
    report.min_success = std::min(report.min_success, s);
    sum += s;
    weighted += p.weight * s;
  }
  report.mean_success = pairs.empty() ? 0.0 : sum / static_cast<double>(pairs.size());
  report.weighted_success = weighted;
  return report;
}

}  // namespace qcc
