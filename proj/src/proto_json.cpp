#include "qcc/proto_json.hpp"

#include <stdexcept>

namespace qcc {

namespace {

Json party_json(Party p) { return party_name(p); }

Party party_from_json(const Json& j) {
  const std::string s = j.get<std::string>();
  if (s == "alice") return Party::alice;
  if (s == "bob") return Party::bob;
  throw std::invalid_argument("unknown party: " + s);
}

Json matrix_json(const Unitary& u) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < u.dim; ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < u.dim; ++c)
      row.push_back(Json::array({u.at(r, c).real(), u.at(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Unitary matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array");
  const std::size_t dim = j.size();
  std::vector<Amplitude> m;
  m.reserve(dim * dim);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != dim)
      throw std::invalid_argument("matrix rows must all have the matrix dimension");
    for (const auto& e : row) {
      if (!e.is_array() || e.size() != 2)
        throw std::invalid_argument("matrix entries must be [re, im] pairs");
      m.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
  }
  Unitary u(dim, std::move(m));
  if (!u.is_unitary()) throw std::invalid_argument("matrix is not unitary");
  return u;
}

std::vector<std::string> labels_from_json(const Json& j) {
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(e.get<std::string>());
  return out;
}

}  // namespace

Json to_json(const BitExpr& expr) {
  const BitExpr::Node& n = expr.node();
  switch (n.kind) {
    case BitExpr::Kind::constant:
      return Json{{"const", n.value}};
    case BitExpr::Kind::var:
      return Json{{"var", n.name}};
    case BitExpr::Kind::input:
      return Json{{"input", Json{{"party", party_json(n.party)}, {"bit", n.bit}}}};
    case BitExpr::Kind::not_op:
      return Json{{"op", "not"}, {"args", Json::array({to_json(n.args[0])})}};
    case BitExpr::Kind::xor_op:
      return Json{{"op", "xor"}, {"args", Json::array({to_json(n.args[0]), to_json(n.args[1])})}};
    case BitExpr::Kind::and_op:
      return Json{{"op", "and"}, {"args", Json::array({to_json(n.args[0]), to_json(n.args[1])})}};
    case BitExpr::Kind::or_op:
      return Json{{"op", "or"}, {"args", Json::array({to_json(n.args[0]), to_json(n.args[1])})}};
  }
  throw std::logic_error("unreachable");
}

BitExpr expr_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("expression must be an object");
  if (j.contains("const")) return BitExpr::constant(j.at("const").get<int>());
  if (j.contains("var")) return BitExpr::var(j.at("var").get<std::string>());
  if (j.contains("input")) {
    const Json& in = j.at("input");
    return BitExpr::input(party_from_json(in.at("party")), in.at("bit").get<std::size_t>());
  }
  if (j.contains("op")) {
    const std::string op = j.at("op").get<std::string>();
    const Json& args = j.at("args");
    if (op == "not") {
      if (args.size() != 1) throw std::invalid_argument("not takes one argument");
      return BitExpr::not_of(expr_from_json(args[0]));
    }
    if (args.size() != 2) throw std::invalid_argument(op + " takes two arguments");
    if (op == "xor") return BitExpr::xor_of(expr_from_json(args[0]), expr_from_json(args[1]));
    if (op == "and") return BitExpr::and_of(expr_from_json(args[0]), expr_from_json(args[1]));
    if (op == "or") return BitExpr::or_of(expr_from_json(args[0]), expr_from_json(args[1]));
    throw std::invalid_argument("unknown expression operator: " + op);
  }
  throw std::invalid_argument("unrecognized expression");
}

Json to_json(const Step& step) {
  return std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LocalUnitary>) {
          return Json{{"kind", "unitary"},
                      {"party", party_json(s.party)},
                      {"targets", s.targets},
                      {"controls", s.controls},
                      {"matrix", matrix_json(s.u)}};
        } else if constexpr (std::is_same_v<T, SendQubit>) {
          return Json{{"kind", "send_qubit"}, {"from", party_json(s.from)}, {"qubit", s.qubit}};
        } else if constexpr (std::is_same_v<T, SendBit>) {
          return Json{{"kind", "send_bit"},
                      {"from", party_json(s.from)},
                      {"value", to_json(s.value)},
                      {"name", s.name}};
        } else if constexpr (std::is_same_v<T, MeasureStandard>) {
          return Json{{"kind", "measure"},
                      {"party", party_json(s.party)},
                      {"qubits", s.qubits},
                      {"names", s.names}};
        } else if constexpr (std::is_same_v<T, SharedCoin>) {
          return Json{{"kind", "coin"}, {"name", s.name}};
        } else {
          Json then_j = Json::array(), else_j = Json::array();
          for (const auto& sub : s.then_steps) then_j.push_back(to_json(sub));
          for (const auto& sub : s.else_steps) else_j.push_back(to_json(sub));
          return Json{{"kind", "branch"},
                      {"condition", to_json(s.condition)},
                      {"then", std::move(then_j)},
                      {"else", std::move(else_j)}};
        }
      },
      step.v);
}

Step step_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "unitary") {
    return local(party_from_json(j.at("party")), matrix_from_json(j.at("matrix")),
                 labels_from_json(j.at("targets")),
                 j.contains("controls") ? labels_from_json(j.at("controls"))
                                        : std::vector<std::string>{});
  }
  if (kind == "send_qubit")
    return send_qubit(party_from_json(j.at("from")), j.at("qubit").get<std::string>());
  if (kind == "send_bit")
    return send_bit(party_from_json(j.at("from")), expr_from_json(j.at("value")),
                    j.at("name").get<std::string>());
  if (kind == "measure")
    return measure(party_from_json(j.at("party")), labels_from_json(j.at("qubits")),
                   labels_from_json(j.at("names")));
  if (kind == "coin") return shared_coin(j.at("name").get<std::string>());
  if (kind == "branch") {
    std::vector<Step> then_s, else_s;
    for (const auto& sub : j.at("then")) then_s.push_back(step_from_json(sub));
    for (const auto& sub : j.at("else")) else_s.push_back(step_from_json(sub));
    return branch(expr_from_json(j.at("condition")), std::move(then_s), std::move(else_s));
  }
  throw std::invalid_argument("unknown step kind: " + kind);
}

Json to_json(const ProtocolProgram& program) {
  Json j;
  j["format"] = "qcc-protocol-v1";
  j["name"] = program.name;
  j["alice_inputs"] = program.alice_inputs;
  j["bob_inputs"] = program.bob_inputs;
  j["alice_ancillas"] = program.alice_ancillas;
  j["bob_ancillas"] = program.bob_ancillas;
  Json pairs = Json::array();
  for (const auto& p : program.epr_pairs)
    pairs.push_back(Json{{"alice", p.alice_qubit}, {"bob", p.bob_qubit}});
  j["epr_pairs"] = std::move(pairs);
  if (program.prior_state) {
    Json owners = Json::object();
    for (const auto& [l, p] : program.prior_state->owner) owners[l] = party_json(p);
    Json amps = Json::array();
    for (const auto& a : program.prior_state->state.amps)
      amps.push_back(Json::array({a.real(), a.imag()}));
    j["prior_state"] = Json{{"labels", program.prior_state->state.labels},
                            {"owners", std::move(owners)},
                            {"amplitudes", std::move(amps)}};
  } else {
    j["prior_state"] = nullptr;
  }
  Json steps = Json::array();
  for (const auto& s : program.steps) steps.push_back(to_json(s));
  j["steps"] = std::move(steps);

  Json out;
  out["party"] = program.output.party ? Json(party_json(*program.output.party)) : Json(nullptr);
  if (program.output.is_measurement()) {
    out["kind"] = "measure";
    out["qubits"] = std::get<1>(program.output.value);
  } else {
    out["kind"] = "expr";
    Json exprs = Json::array();
    for (const auto& e : std::get<0>(program.output.value)) exprs.push_back(to_json(e));
    out["exprs"] = std::move(exprs);
  }
  j["output"] = std::move(out);
  return j;
}

ProtocolProgram program_from_json(const Json& j) {
  if (j.value("format", "") != "qcc-protocol-v1")
    throw std::invalid_argument("unsupported protocol format");
  ProtocolProgram p;
  p.name = j.value("name", "");
  p.alice_inputs = labels_from_json(j.at("alice_inputs"));
  p.bob_inputs = labels_from_json(j.at("bob_inputs"));
  p.alice_ancillas = labels_from_json(j.at("alice_ancillas"));
  p.bob_ancillas = labels_from_json(j.at("bob_ancillas"));
  for (const auto& e : j.at("epr_pairs"))
    p.epr_pairs.push_back({e.at("alice").get<std::string>(), e.at("bob").get<std::string>()});
  if (j.contains("prior_state") && !j.at("prior_state").is_null()) {
    const Json& ps = j.at("prior_state");
    std::vector<std::string> labels = labels_from_json(ps.at("labels"));
    std::vector<Amplitude> amps;
    for (const auto& a : ps.at("amplitudes")) amps.emplace_back(a[0].get<double>(), a[1].get<double>());
    SharedState state{StateVector(labels, std::move(amps)), {}};
    for (const auto& [l, pj] : ps.at("owners").items()) state.owner[l] = party_from_json(pj);
    p.prior_state = std::move(state);
  }
  for (const auto& s : j.at("steps")) p.steps.push_back(step_from_json(s));

  const Json& out = j.at("output");
  if (!out.at("party").is_null()) p.output.party = party_from_json(out.at("party"));
  const std::string kind = out.at("kind").get<std::string>();
  if (kind == "measure") {
    p.output.value = labels_from_json(out.at("qubits"));
  } else if (kind == "expr") {
    std::vector<BitExpr> exprs;
    for (const auto& e : out.at("exprs")) exprs.push_back(expr_from_json(e));
    p.output.value = std::move(exprs);
  } else {
    throw std::invalid_argument("unknown output kind: " + kind);
  }
  p.validate();
  return p;
}

}  // namespace qcc
