#include "qcc/qcore.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace qcc {

namespace {

bool finite(const Amplitude& a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); }

std::size_t log2_exact(std::size_t dim) {
  std::size_t k = 0, d = 1;
  while (d < dim) {
    d <<= 1;
    ++k;
  }
  if (d != dim) throw std::invalid_argument("dimension is not a power of two");
  return k;
}

}  // namespace

Unitary::Unitary(std::size_t d, std::vector<Amplitude> entries) : dim(d), m(std::move(entries)) {
  if (m.size() != dim * dim) throw std::invalid_argument("matrix entry count does not match dim");
  log2_exact(dim);
  for (const auto& a : m)
    if (!finite(a)) throw std::invalid_argument("matrix entry is not finite");
}

std::size_t Unitary::num_qubits() const { return log2_exact(dim); }

bool Unitary::is_unitary(double tol) const {
  // U * U^dagger == I, entrywise.
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      Amplitude s = 0;
      for (std::size_t k = 0; k < dim; ++k) s += at(r, k) * std::conj(at(c, k));
      Amplitude expect = (r == c) ? Amplitude(1, 0) : Amplitude(0, 0);
      if (std::abs(s - expect) > tol) return false;
    }
  }
  return true;
}

Unitary Unitary::dagger() const {
  Unitary d;
  d.dim = dim;
  d.m.resize(m.size());
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) d.at(r, c) = std::conj(at(c, r));
  return d;
}

Unitary Unitary::identity(std::size_t dim) {
  Unitary u;
  u.dim = dim;
  u.m.assign(dim * dim, Amplitude(0, 0));
  for (std::size_t i = 0; i < dim; ++i) u.at(i, i) = 1;
  return u;
}

bool approx_equal(const Unitary& a, const Unitary& b, double tol) {
  if (a.dim != b.dim) return false;
  for (std::size_t i = 0; i < a.m.size(); ++i)
    if (std::abs(a.m[i] - b.m[i]) > tol) return false;
  return true;
}

Unitary hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return Unitary(2, {s, s, s, -s});
}

Unitary pauli_x() { return Unitary(2, {0, 1, 1, 0}); }

Unitary pauli_y() {
  return Unitary(2, {Amplitude(0, 0), Amplitude(0, -1), Amplitude(0, 1), Amplitude(0, 0)});
}

Unitary pauli_z() { return Unitary(2, {1, 0, 0, -1}); }

Unitary rotation(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return Unitary(2, {c, -s, s, c});
}

Unitary controlled(const Unitary& u) {
  Unitary cu = Unitary::identity(2 * u.dim);
  for (std::size_t r = 0; r < u.dim; ++r)
    for (std::size_t c = 0; c < u.dim; ++c) cu.at(u.dim + r, u.dim + c) = u.at(r, c);
  return cu;
}

Unitary cnot() { return controlled(pauli_x()); }

StateVector::StateVector(std::vector<std::string> ls, std::vector<Amplitude> as)
    : labels(std::move(ls)), amps(std::move(as)) {
  if (amps.size() != (std::size_t{1} << labels.size()))
    throw std::invalid_argument("amplitude count does not match label count");
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (labels[i] == labels[j]) throw std::invalid_argument("duplicate qubit label: " + labels[i]);
  for (const auto& a : amps)
    if (!finite(a)) throw std::invalid_argument("amplitude is not finite");
}

StateVector StateVector::basis(std::vector<std::string> ls, const std::vector<int>& bits) {
  if (bits.size() != ls.size()) throw std::invalid_argument("basis bit count does not match labels");
  const std::size_t k = ls.size();
  std::size_t idx = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw std::invalid_argument("basis bits must be 0 or 1");
    idx |= static_cast<std::size_t>(bits[i]) << (k - 1 - i);
  }
  std::vector<Amplitude> amps(std::size_t{1} << k, Amplitude(0, 0));
  amps[idx] = 1;
  return StateVector(std::move(ls), std::move(amps));
}

int StateVector::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

StateVector StateVector::reordered(const std::vector<std::string>& order) const {
  const std::size_t k = labels.size();
  if (order.size() != k) throw std::invalid_argument("reorder: label sets differ in size");
  std::vector<int> src_pos(k);
  for (std::size_t i = 0; i < k; ++i) {
    int p = index_of(order[i]);
    if (p < 0) throw std::invalid_argument("reorder: unknown label " + order[i]);
    src_pos[i] = p;
  }
  std::vector<Amplitude> out(amps.size());
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    std::size_t dst = 0;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t bit = (idx >> (k - 1 - src_pos[i])) & 1u;
      dst |= bit << (k - 1 - i);
    }
    out[dst] = amps[idx];
  }
  return StateVector(order, std::move(out));
}

StateVector apply_unitary(const StateVector& state, const Unitary& u,
                          const std::vector<std::string>& targets) {
  const std::size_t g = targets.size();
  if (u.dim != (std::size_t{1} << g))
    throw std::invalid_argument("unitary dimension does not match target count");
  if (!u.is_unitary()) throw std::invalid_argument("matrix is not unitary");
  const std::size_t k = state.num_qubits();
  std::vector<std::size_t> shift(g);
  std::size_t target_mask = 0;
  for (std::size_t i = 0; i < g; ++i) {
    int p = state.index_of(targets[i]);
    if (p < 0) throw std::invalid_argument("unknown qubit label: " + targets[i]);
    shift[i] = k - 1 - static_cast<std::size_t>(p);
    std::size_t bit = std::size_t{1} << shift[i];
    if (target_mask & bit) throw std::invalid_argument("duplicate target label: " + targets[i]);
    target_mask |= bit;
  }

  // Gate index j spreads into the global index with targets[0] as the
  // most significant gate bit.
  std::vector<std::size_t> spread(u.dim, 0);
  for (std::size_t j = 0; j < u.dim; ++j)
    for (std::size_t i = 0; i < g; ++i)
      if ((j >> (g - 1 - i)) & 1u) spread[j] |= std::size_t{1} << shift[i];

  StateVector out = state;
  std::vector<Amplitude> sub(u.dim);
  const std::size_t total = state.amps.size();
  for (std::size_t base = 0; base < total; ++base) {
    if (base & target_mask) continue;
    for (std::size_t j = 0; j < u.dim; ++j) sub[j] = state.amps[base | spread[j]];
    for (std::size_t r = 0; r < u.dim; ++r) {
      Amplitude acc = 0;
      for (std::size_t c = 0; c < u.dim; ++c) acc += u.at(r, c) * sub[c];
      out.amps[base | spread[r]] = acc;
    }
  }
  return out;
}

StateVector make_epr() {
  static std::atomic<std::uint64_t> counter{0};
  std::uint64_t id = counter.fetch_add(2);
  const double s = 1.0 / std::sqrt(2.0);
  return StateVector({"q" + std::to_string(id), "q" + std::to_string(id + 1)},
                     {s, 0, 0, s});
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
  StateVector bb = b.reordered(a.labels);
  Amplitude s = 0;
  for (std::size_t i = 0; i < a.amps.size(); ++i) s += std::conj(a.amps[i]) * bb.amps[i];
  return s;
}

double euclidean_distance(const StateVector& a, const StateVector& b) {
  StateVector bb = b.reordered(a.labels);
  double s = 0;
  for (std::size_t i = 0; i < a.amps.size(); ++i) s += std::norm(a.amps[i] - bb.amps[i]);
  return std::sqrt(s);
}

std::vector<double> outcome_probabilities(const StateVector& state,
                                          const std::vector<std::string>& targets) {
  const std::size_t g = targets.size();
  const std::size_t k = state.num_qubits();
  std::vector<std::size_t> shift(g);
  for (std::size_t i = 0; i < g; ++i) {
    int p = state.index_of(targets[i]);
    if (p < 0) throw std::invalid_argument("unknown qubit label: " + targets[i]);
    shift[i] = k - 1 - static_cast<std::size_t>(p);
  }
  std::vector<double> probs(std::size_t{1} << g, 0.0);
  for (std::size_t idx = 0; idx < state.amps.size(); ++idx) {
    std::size_t o = 0;
    for (std::size_t i = 0; i < g; ++i) o |= ((idx >> shift[i]) & 1u) << (g - 1 - i);
    probs[o] += std::norm(state.amps[idx]);
  }
  return probs;
}

StateVector project_outcome(const StateVector& state, const std::vector<std::string>& targets,
                            std::uint64_t outcome, double& prob) {
  const std::size_t g = targets.size();
  const std::size_t k = state.num_qubits();
  std::vector<std::size_t> shift(g);
  for (std::size_t i = 0; i < g; ++i) {
    int p = state.index_of(targets[i]);
    if (p < 0) throw std::invalid_argument("unknown qubit label: " + targets[i]);
    shift[i] = k - 1 - static_cast<std::size_t>(p);
  }
  StateVector out = state;
  double s = 0;
  for (std::size_t idx = 0; idx < state.amps.size(); ++idx) {
    std::size_t o = 0;
    for (std::size_t i = 0; i < g; ++i) o |= ((idx >> shift[i]) & 1u) << (g - 1 - i);
    if (o == outcome) {
      s += std::norm(state.amps[idx]);
    } else {
      out.amps[idx] = 0;
    }
  }
  prob = s;
  if (s > 0) {
    const double inv = 1.0 / std::sqrt(s);
    for (auto& a : out.amps) a *= inv;
  }
  return out;
}

Amplitude& DensityOperator::at(std::size_t r, std::size_t c) { return m[r * dim() + c]; }
const Amplitude& DensityOperator::at(std::size_t r, std::size_t c) const {
  return m[r * dim() + c];
}
std::size_t DensityOperator::dim() const { return std::size_t{1} << labels.size(); }

double DensityOperator::trace_real() const {
  double t = 0;
  for (std::size_t i = 0; i < dim(); ++i) t += at(i, i).real();
  return t;
}

bool DensityOperator::is_hermitian(double tol) const {
  for (std::size_t r = 0; r < dim(); ++r)
    for (std::size_t c = r; c < dim(); ++c)
      if (std::abs(at(r, c) - std::conj(at(c, r))) > tol) return false;
  return true;
}

DensityOperator DensityOperator::from_state(const StateVector& psi) {
  DensityOperator rho;
  rho.labels = psi.labels;
  const std::size_t d = psi.amps.size();
  rho.m.resize(d * d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) rho.m[r * d + c] = psi.amps[r] * std::conj(psi.amps[c]);
  return rho;
}

DensityOperator DensityOperator::from_state(const StateVector& psi,
                                            const std::vector<std::string>& keep) {
  const std::size_t k = psi.num_qubits();
  const std::size_t gk = keep.size();
  std::vector<std::size_t> keep_shift(gk);
  std::size_t keep_mask = 0;
  for (std::size_t i = 0; i < gk; ++i) {
    int p = psi.index_of(keep[i]);
    if (p < 0) throw std::invalid_argument("unknown qubit label: " + keep[i]);
    keep_shift[i] = k - 1 - static_cast<std::size_t>(p);
    std::size_t bit = std::size_t{1} << keep_shift[i];
    if (keep_mask & bit) throw std::invalid_argument("duplicate kept label: " + keep[i]);
    keep_mask |= bit;
  }
  const std::size_t d = std::size_t{1} << gk;
  DensityOperator rho;
  rho.labels = keep;
  rho.m.assign(d * d, Amplitude(0, 0));

  // rho[i][j] = sum over environment assignments e of
  //   psi[idx(i, e)] * conj(psi[idx(j, e)]).
  std::vector<std::size_t> spread(d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t b = 0; b < gk; ++b)
      if ((i >> (gk - 1 - b)) & 1u) spread[i] |= std::size_t{1} << keep_shift[b];

  const std::size_t total = psi.amps.size();
  for (std::size_t env = 0; env < total; ++env) {
    if (env & keep_mask) continue;
    for (std::size_t i = 0; i < d; ++i) {
      Amplitude ai = psi.amps[env | spread[i]];
      if (ai == Amplitude(0, 0)) continue;
      for (std::size_t j = 0; j < d; ++j)
        rho.m[i * d + j] += ai * std::conj(psi.amps[env | spread[j]]);
    }
  }
  return rho;
}

bool approx_equal(const DensityOperator& a, const DensityOperator& b, double tol) {
  if (a.labels != b.labels) return false;
  for (std::size_t i = 0; i < a.m.size(); ++i)
    if (std::abs(a.m[i] - b.m[i]) > tol) return false;
  return true;
}

DensityOperator partial_trace(const DensityOperator& rho, const std::vector<std::string>& keep) {
  const std::size_t k = rho.num_qubits();
  std::vector<std::size_t> keep_shift;
  std::size_t keep_mask = 0;
  for (const auto& label : keep) {
    int p = -1;
    for (std::size_t i = 0; i < k; ++i)
      if (rho.labels[i] == label) p = static_cast<int>(i);
    if (p < 0) throw std::invalid_argument("unknown qubit label: " + label);
    std::size_t sh = k - 1 - static_cast<std::size_t>(p);
    std::size_t bit = std::size_t{1} << sh;
    if (keep_mask & bit) throw std::invalid_argument("duplicate kept label: " + label);
    keep_shift.push_back(sh);
    keep_mask |= bit;
  }
  const std::size_t gk = keep.size();
  const std::size_t d = std::size_t{1} << gk;
  std::vector<std::size_t> spread(d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t b = 0; b < gk; ++b)
      if ((i >> (gk - 1 - b)) & 1u) spread[i] |= std::size_t{1} << keep_shift[b];

  DensityOperator out;
  out.labels = keep;
  out.m.assign(d * d, Amplitude(0, 0));
  const std::size_t full = std::size_t{1} << k;
  for (std::size_t env = 0; env < full; ++env) {
    if (env & keep_mask) continue;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        out.m[i * d + j] += rho.m[(env | spread[i]) * full + (env | spread[j])];
  }
  return out;
}

std::vector<double> eigenvalues_hermitian(const DensityOperator& rho) {
  if (!rho.is_hermitian(1e-7)) throw std::invalid_argument("operator is not Hermitian");
  const std::size_t n = rho.dim();
  std::vector<Amplitude> a = rho.m;

  auto off_norm = [&]() {
    double s = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += std::norm(a[p * n + q]);
    return s;
  };

  const double stop = 1e-26 * static_cast<double>(n * n);
  for (int sweep = 0; sweep < 100 && off_norm() > stop; ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Amplitude apq = a[p * n + q];
        const double r = std::abs(apq);
        if (r < 1e-300) continue;
        const Amplitude phase = apq / r;  // apq = r * e^{i phi}
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        // Plane rotation zeroing a[p][q]: tan(2t) = 2r / (aqq - app).
        double t;
        const double diff = aqq - app;
        if (std::abs(diff) < 1e-300 * r) {
          t = 1.0;
        } else {
          const double tau = diff / (2.0 * r);
          t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Amplitude sp = s * phase;              // s * e^{i phi}
        const Amplitude spc = s * std::conj(phase);  // s * e^{-i phi}

        for (std::size_t kk = 0; kk < n; ++kk) {
          if (kk == p || kk == q) continue;
          const Amplitude akp = a[kk * n + p];
          const Amplitude akq = a[kk * n + q];
          a[kk * n + p] = c * akp - spc * akq;
          a[kk * n + q] = sp * akp + c * akq;
          a[p * n + kk] = std::conj(a[kk * n + p]);
          a[q * n + kk] = std::conj(a[kk * n + q]);
        }
        const double new_pp = c * c * app - 2.0 * c * s * r + s * s * aqq;
        const double new_qq = s * s * app + 2.0 * c * s * r + c * c * aqq;
        a[p * n + p] = new_pp;
        a[q * n + q] = new_qq;
        a[p * n + q] = 0;
        a[q * n + p] = 0;
      }
    }
  }

  std::vector<double> evals(n);
  for (std::size_t i = 0; i < n; ++i) evals[i] = a[i * n + i].real();
  std::sort(evals.begin(), evals.end(), std::greater<double>());
  return evals;
}

double von_neumann_entropy(const DensityOperator& rho) {
  std::vector<double> evals = eigenvalues_hermitian(rho);
  double s = 0;
  for (double lambda : evals) {
    if (lambda < kEigenvalueFloor) continue;
    s -= lambda * std::log2(lambda);
  }
  return s < 0 && s > -kTol ? 0.0 : s;
}

}  // namespace qcc
