#include "qcc/infobounds.hpp"

#include <cmath>
#include <stdexcept>

namespace qcc {

double holevo_chi(const Ensemble& ens) {
  if (ens.probs.size() != ens.states.size())
    throw std::invalid_argument("ensemble needs one probability per state");
  if (ens.states.empty()) throw std::invalid_argument("ensemble is empty");
  const auto& labels = ens.states.front().labels;
  double total = 0;
  for (double p : ens.probs) {
    if (p < -1e-12) throw std::invalid_argument("ensemble probabilities must be non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("ensemble probabilities do not sum to 1");

  DensityOperator avg;
  avg.labels = labels;
  avg.m.assign(ens.states.front().m.size(), Amplitude(0, 0));
  double mean_entropy = 0;
  for (std::size_t i = 0; i < ens.states.size(); ++i) {
    if (ens.states[i].labels != labels)
      throw std::invalid_argument("ensemble states live on different label sets");
    for (std::size_t k = 0; k < avg.m.size(); ++k) avg.m[k] += ens.probs[i] * ens.states[i].m[k];
    if (ens.probs[i] > 0) mean_entropy += ens.probs[i] * von_neumann_entropy(ens.states[i]);
  }
  double chi = von_neumann_entropy(avg) - mean_entropy;
  return (chi < 0 && chi > -kTol) ? 0.0 : chi;
}

ChiTrace chi_trace(const ProtocolProgram& program, const InputWeights& x_dist, const Bits& y) {
  if (x_dist.empty()) throw std::invalid_argument("empty input distribution");
  double total = 0;
  for (const auto& [x, w] : x_dist) {
    if (x.size() != program.alice_inputs.size())
      throw std::invalid_argument("weighted input length does not match program");
    if (w < 0) throw std::invalid_argument("input weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("input weights do not sum to 1");

  std::vector<LinearSim> sims;
  sims.reserve(x_dist.size());
  for (const auto& [x, w] : x_dist) {
    (void)w;
    sims.emplace_back(program, x, y);
  }

  ChiTrace trace;
  trace.prior_pairs_lowered = static_cast<int>(program.epr_pairs.size());

  auto record = [&](int index, StepKind kind) {
    Ensemble ens;
    std::vector<std::string> bob = sims.front().material_qubits_of(Party::bob);
    for (std::size_t i = 0; i < sims.size(); ++i) {
      ens.probs.push_back(x_dist[i].second);
      if (bob.empty()) {
        DensityOperator unit;
        unit.labels = {};
        unit.m = {Amplitude(1, 0)};
        ens.states.push_back(std::move(unit));
      } else {
        ens.states.push_back(DensityOperator::from_state(sims[i].state(), bob));
      }
    }
    DensityOperator avg;
    avg.labels = ens.states.front().labels;
    avg.m.assign(ens.states.front().m.size(), Amplitude(0, 0));
    for (std::size_t i = 0; i < ens.states.size(); ++i)
      for (std::size_t k = 0; k < avg.m.size(); ++k)
        avg.m[k] += ens.probs[i] * ens.states[i].m[k];
    ChiEntry entry;
    entry.step_index = index;
    entry.kind = kind;
    entry.entropy_bits = von_neumann_entropy(avg);
    entry.chi_bits = holevo_chi(ens);
    trace.entries.push_back(entry);
  };

  record(0, StepKind::unitary);
  int index = 0;
  while (!sims.front().done()) {
    StepKind kind = StepKind::unitary;
    for (auto& sim : sims) kind = sim.advance();
    ++index;
    if (kind == StepKind::send_ab) ++trace.qubits_ab;
    if (kind == StepKind::send_ba || kind == StepKind::epr_setup) ++trace.qubits_ba;
    record(index, kind);
  }
  return trace;
}

ChiTrace chi_trace_uniform_x(const ProtocolProgram& program, const Bits& y) {
  const std::size_t n = program.alice_inputs.size();
  InputWeights dist;
  const double w = 1.0 / static_cast<double>(std::uint64_t{1} << n);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v)
    dist.emplace_back(unpack_bits(v, n), w);
  return chi_trace(program, dist, y);
}

ChiTrace chi_trace_avg_y(const ProtocolProgram& program, const InputWeights& x_dist) {
  const std::size_t n = program.bob_inputs.size();
  ChiTrace avg;
  const double w = 1.0 / static_cast<double>(std::uint64_t{1} << n);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
    ChiTrace t = chi_trace(program, x_dist, unpack_bits(v, n));
    if (avg.entries.empty()) {
      avg = t;
      for (auto& e : avg.entries) {
        e.entropy_bits *= w;
        e.chi_bits *= w;
      }
    } else {
      for (std::size_t i = 0; i < avg.entries.size(); ++i) {
        avg.entries[i].entropy_bits += w * t.entries[i].entropy_bits;
        avg.entries[i].chi_bits += w * t.entries[i].chi_bits;
      }
    }
  }
  return avg;
}

BoundsVerdict check_chi_bounds(const ChiTrace& trace, const Ledger& ledger) {
  BoundsVerdict verdict;
  auto fail = [&](const std::string& msg) {
    verdict.ok = false;
    verdict.violations.push_back(msg);
  };

  if (trace.entries.empty()) {
    fail("empty trace");
    return verdict;
  }
  if (ledger.qubits_ab != trace.qubits_ab ||
      ledger.qubits_ba + ledger.prior_epr_pairs != trace.qubits_ba)
    throw std::invalid_argument("trace and ledger transmission counts do not match");

  const double kStepTol = 1e-7;
  const double kUnitaryTol = 1e-9;
  if (std::abs(trace.entries.front().entropy_bits) > kUnitaryTol ||
      std::abs(trace.entries.front().chi_bits) > kUnitaryTol)
    fail("initial entry is not S = chi = 0");

  for (std::size_t i = 1; i < trace.entries.size(); ++i) {
    const ChiEntry& prev = trace.entries[i - 1];
    const ChiEntry& cur = trace.entries[i];
    const double ds = cur.entropy_bits - prev.entropy_bits;
    const double dchi = cur.chi_bits - prev.chi_bits;
    const std::string at = "step " + std::to_string(cur.step_index);
    if (cur.chi_bits > cur.entropy_bits + kStepTol) fail(at + ": chi exceeds S");
    switch (cur.kind) {
      case StepKind::unitary:
        if (std::abs(ds) > kUnitaryTol) fail(at + ": local unitary changed S");
        if (std::abs(dchi) > kUnitaryTol) fail(at + ": local unitary changed chi");
        break;
      case StepKind::send_ab:
        if (std::abs(ds) > 1 + kStepTol) fail(at + ": |dS| > 1 on a send");
        if (dchi > 2 + kStepTol) fail(at + ": dchi > 2 on a send toward Bob");
        break;
      case StepKind::send_ba:
      case StepKind::epr_setup:
        if (std::abs(ds) > 1 + kStepTol) fail(at + ": |dS| > 1 on a send");
        if (dchi > kStepTol) fail(at + ": chi grew on a send toward Alice");
        break;
    }
  }

  const double final_chi = trace.entries.back().chi_bits;
  const double cap = std::min(2.0 * trace.qubits_ab,
                              static_cast<double>(trace.qubits_ab + trace.qubits_ba));
  if (final_chi > cap + 1e-7)
    fail("final chi " + std::to_string(final_chi) + " exceeds the transmission cap " +
         std::to_string(cap));
  return verdict;
}

double mutual_information(const std::vector<std::vector<double>>& joint) {
  if (joint.empty()) throw std::invalid_argument("empty joint distribution");
  const std::size_t cols = joint.front().size();
  double total = 0;
  std::vector<double> px(joint.size(), 0.0), py(cols, 0.0);
  for (std::size_t i = 0; i < joint.size(); ++i) {
    if (joint[i].size() != cols)
      throw std::invalid_argument("joint distribution rows differ in length");
    for (std::size_t j = 0; j < cols; ++j) {
      const double p = joint[i][j];
      if (p < -1e-12) throw std::invalid_argument("joint distribution has a negative entry");
      px[i] += p;
      py[j] += p;
      total += p;
    }
  }
  if (std::abs(total - 1.0) > kTol)
    throw std::invalid_argument("joint distribution does not sum to 1");

  auto h = [](double p) { return p > 0 ? -p * std::log2(p) : 0.0; };
  double hx = 0, hy = 0, hxy = 0;
  for (double p : px) hx += h(p);
  for (double p : py) hy += h(p);
  for (const auto& row : joint)
    for (double p : row) hxy += h(p);
  double info = hx + hy - hxy;
  return (info < 0 && info > -kTol) ? 0.0 : info;
}

}  // namespace qcc
