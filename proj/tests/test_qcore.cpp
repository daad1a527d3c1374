#include "doctest.h"

#include "qcc/qcore.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace qcc;

namespace {

const double kSqrtHalf = 1.0 / std::sqrt(2.0);

std::mt19937 rng_for(const char* tag) {
  std::seed_seq seq(tag, tag + std::char_traits<char>::length(tag));
  return std::mt19937(seq);
}

StateVector random_state(std::mt19937& rng, std::vector<std::string> labels) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Amplitude> amps(std::size_t{1} << labels.size());
  for (auto& a : amps) a = Amplitude(g(rng), g(rng));
  double norm = 0;
  for (auto& a : amps) norm += std::norm(a);
  norm = std::sqrt(norm);
  for (auto& a : amps) a /= norm;
  return StateVector(std::move(labels), std::move(amps));
}

// Gram-Schmidt on random complex columns.
Unitary random_unitary(std::mt19937& rng, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<Amplitude>> cols(dim, std::vector<Amplitude>(dim));
  for (auto& col : cols)
    for (auto& a : col) a = Amplitude(g(rng), g(rng));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Amplitude dot = 0;
      for (std::size_t k = 0; k < dim; ++k) dot += std::conj(cols[j][k]) * cols[i][k];
      for (std::size_t k = 0; k < dim; ++k) cols[i][k] -= dot * cols[j][k];
    }
    double norm = 0;
    for (auto& a : cols[i]) norm += std::norm(a);
    norm = std::sqrt(norm);
    for (auto& a : cols[i]) a /= norm;
  }
  Unitary u = Unitary::identity(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) u.at(r, c) = cols[c][r];
  return u;
}

DensityOperator conjugate(const DensityOperator& rho, const Unitary& u) {
  const std::size_t d = rho.dim();
  DensityOperator out = rho;
  std::vector<Amplitude> tmp(d * d, 0);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < d; ++k) {
      if (u.at(r, k) == Amplitude(0, 0)) continue;
      for (std::size_t c = 0; c < d; ++c) tmp[r * d + c] += u.at(r, k) * rho.m[k * d + c];
    }
  for (auto& e : out.m) e = 0;
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t c = 0; c < d; ++c)
        out.m[r * d + c] += tmp[r * d + k] * std::conj(u.at(c, k));
  return out;
}

}  // namespace

TEST_CASE("gate matrices are unitary") {
  CHECK(hadamard().is_unitary());
  CHECK(pauli_x().is_unitary());
  CHECK(pauli_y().is_unitary());
  CHECK(pauli_z().is_unitary());
  CHECK(cnot().is_unitary());
  CHECK(rotation(0.3).is_unitary());
  CHECK(controlled(controlled(pauli_x())).is_unitary());
}

TEST_CASE("apply_unitary identity and hadamard") {
  StateVector zero = StateVector::basis({"q0"}, {0});
  StateVector same = apply_unitary(zero, Unitary::identity(2), {"q0"});
  CHECK(euclidean_distance(zero, same) == doctest::Approx(0.0).epsilon(1e-12));

  StateVector plus = apply_unitary(zero, hadamard(), {"q0"});
  CHECK(plus.amps[0].real() == doctest::Approx(kSqrtHalf));
  CHECK(plus.amps[1].real() == doctest::Approx(kSqrtHalf));
}

TEST_CASE("apply_unitary on the first of two qubits") {
  // First label is the most significant bit, so a gate on "a" moves
  // amplitude between indices 0 and 2.
  StateVector s = StateVector::basis({"a", "b"}, {0, 0});
  Unitary a11(2, {std::sqrt(0.2), Amplitude(0, std::sqrt(0.8)), Amplitude(0, std::sqrt(0.8)),
                  std::sqrt(0.2)});
  REQUIRE(a11.is_unitary());
  StateVector out = apply_unitary(s, a11, {"a"});
  CHECK(std::abs(out.amps[0] - Amplitude(std::sqrt(0.2), 0)) < 1e-12);
  CHECK(std::abs(out.amps[2] - Amplitude(0, std::sqrt(0.8))) < 1e-12);
  CHECK(std::abs(out.amps[1]) < 1e-12);
  CHECK(std::abs(out.amps[3]) < 1e-12);
}

TEST_CASE("apply_unitary errors") {
  StateVector s = StateVector::basis({"a", "b"}, {0, 0});
  CHECK_THROWS_AS(apply_unitary(s, hadamard(), {"zz"}), std::invalid_argument);
  CHECK_THROWS_AS(apply_unitary(s, hadamard(), {"a", "b"}), std::invalid_argument);
  Unitary broken(2, {1, 1, 1, 1});
  CHECK_THROWS_AS(apply_unitary(s, broken, {"a"}), std::invalid_argument);
  CHECK_THROWS_AS(apply_unitary(s, cnot(), {"a", "a"}), std::invalid_argument);
}

TEST_CASE("make_epr amplitudes and marginals") {
  StateVector epr = make_epr();
  REQUIRE(epr.num_qubits() == 2);
  CHECK(std::abs(epr.amps[0] - Amplitude(kSqrtHalf, 0)) < 1e-12);
  CHECK(std::abs(epr.amps[1]) < 1e-12);
  CHECK(std::abs(epr.amps[2]) < 1e-12);
  CHECK(std::abs(epr.amps[3] - Amplitude(kSqrtHalf, 0)) < 1e-12);

  for (const auto& keep : {epr.labels[0], epr.labels[1]}) {
    DensityOperator marginal = DensityOperator::from_state(epr, {keep});
    CHECK(std::abs(marginal.at(0, 0) - Amplitude(0.5, 0)) < 1e-12);
    CHECK(std::abs(marginal.at(1, 1) - Amplitude(0.5, 0)) < 1e-12);
    CHECK(std::abs(marginal.at(0, 1)) < 1e-12);
    CHECK(von_neumann_entropy(marginal) == doctest::Approx(1.0).epsilon(1e-9));
  }

  // Fresh labels each call.
  StateVector epr2 = make_epr();
  CHECK(epr.labels[0] != epr2.labels[0]);
}

TEST_CASE("partial_trace basics") {
  StateVector prod = StateVector::basis({"a", "b"}, {0, 1});
  DensityOperator rho = DensityOperator::from_state(prod);
  DensityOperator first = partial_trace(rho, {"a"});
  CHECK(std::abs(first.at(0, 0) - Amplitude(1, 0)) < 1e-12);
  CHECK(std::abs(first.at(1, 1)) < 1e-12);

  StateVector epr = make_epr();
  DensityOperator epr_rho = DensityOperator::from_state(epr);
  DensityOperator half = partial_trace(epr_rho, {epr.labels[0]});
  CHECK(std::abs(half.at(0, 0) - Amplitude(0.5, 0)) < 1e-12);
  CHECK(std::abs(half.at(1, 1) - Amplitude(0.5, 0)) < 1e-12);

  // Keeping everything is the identity, and the trace is preserved.
  DensityOperator all = partial_trace(epr_rho, epr.labels);
  CHECK(approx_equal(all, epr_rho));
  CHECK(half.trace_real() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(partial_trace(epr_rho, {"nope"}), std::invalid_argument);
}

TEST_CASE("partial_trace agrees with direct reduction from pure states") {
  auto rng = rng_for("pure-vs-trace");
  StateVector psi = random_state(rng, {"a", "b", "c"});
  DensityOperator direct = DensityOperator::from_state(psi, {"a", "c"});
  DensityOperator via_full = partial_trace(DensityOperator::from_state(psi), {"a", "c"});
  CHECK(approx_equal(direct, via_full, 1e-10));
  CHECK(direct.trace_real() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("von_neumann_entropy reference values") {
  StateVector pure = StateVector::basis({"a", "b"}, {1, 0});
  CHECK(von_neumann_entropy(DensityOperator::from_state(pure)) ==
        doctest::Approx(0.0).epsilon(1e-9));

  DensityOperator mixed1;
  mixed1.labels = {"a"};
  mixed1.m = {Amplitude(0.5, 0), 0, 0, Amplitude(0.5, 0)};
  CHECK(von_neumann_entropy(mixed1) == doctest::Approx(1.0).epsilon(1e-9));

  DensityOperator mixed2;
  mixed2.labels = {"a", "b"};
  mixed2.m.assign(16, Amplitude(0, 0));
  for (int i = 0; i < 4; ++i) mixed2.m[i * 4 + i] = Amplitude(0.25, 0);
  CHECK(von_neumann_entropy(mixed2) == doctest::Approx(2.0).epsilon(1e-9));

  DensityOperator bad;
  bad.labels = {"a"};
  bad.m = {Amplitude(0.5, 0), Amplitude(1, 0), Amplitude(0, 0), Amplitude(0.5, 0)};
  CHECK_THROWS_AS(von_neumann_entropy(bad), std::invalid_argument);
}

TEST_CASE("entropy is invariant under conjugation by a unitary") {
  auto rng = rng_for("entropy-conjugation");
  for (int rep = 0; rep < 5; ++rep) {
    // Random mixture of a few random pure states on two qubits.
    DensityOperator rho;
    rho.labels = {"a", "b"};
    rho.m.assign(16, Amplitude(0, 0));
    std::uniform_real_distribution<double> u(0.1, 1.0);
    double ws[3] = {u(rng), u(rng), u(rng)};
    double wsum = ws[0] + ws[1] + ws[2];
    for (double& w : ws) w /= wsum;
    for (int i = 0; i < 3; ++i) {
      DensityOperator p = DensityOperator::from_state(random_state(rng, {"a", "b"}));
      for (std::size_t k = 0; k < rho.m.size(); ++k) rho.m[k] += ws[i] * p.m[k];
    }
    double s = von_neumann_entropy(rho);
    CHECK(s >= -1e-9);
    CHECK(s <= 2.0 + 1e-9);
    DensityOperator rotated = conjugate(rho, random_unitary(rng, 4));
    CHECK(von_neumann_entropy(rotated) == doctest::Approx(s).epsilon(1e-9));
  }
}

TEST_CASE("eigenvalues of a known spectrum survive conjugation") {
  auto rng = rng_for("jacobi-spectrum");
  DensityOperator rho;
  rho.labels = {"a", "b", "c"};
  rho.m.assign(64, Amplitude(0, 0));
  std::vector<double> want = {0.4, 0.2, 0.15, 0.1, 0.08, 0.05, 0.02, 0.0};
  for (int i = 0; i < 8; ++i) rho.m[i * 8 + i] = Amplitude(want[i], 0);
  DensityOperator rotated = conjugate(rho, random_unitary(rng, 8));
  std::vector<double> got = eigenvalues_hermitian(rotated);
  REQUIRE(got.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-9));
}

TEST_CASE("euclidean_distance reference values") {
  StateVector zero = StateVector::basis({"q"}, {0});
  StateVector one = StateVector::basis({"q"}, {1});
  StateVector plus = apply_unitary(zero, hadamard(), {"q"});

  CHECK(euclidean_distance(zero, zero) == doctest::Approx(0.0));
  CHECK(euclidean_distance(zero, one) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // Direct two-vector arithmetic: ||(1,0) - (1/sqrt2, 1/sqrt2)||.
  double expected = std::sqrt((1.0 - kSqrtHalf) * (1.0 - kSqrtHalf) + kSqrtHalf * kSqrtHalf);
  CHECK(expected == doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))).epsilon(1e-12));
  CHECK(euclidean_distance(zero, plus) == doctest::Approx(expected).epsilon(1e-12));

  StateVector otherlbl = StateVector::basis({"r"}, {0});
  CHECK_THROWS_AS(euclidean_distance(zero, otherlbl), std::invalid_argument);
}

TEST_CASE("distance respects qubit reordering") {
  auto rng = rng_for("reorder");
  StateVector psi = random_state(rng, {"a", "b", "c"});
  StateVector flipped = psi.reordered({"c", "a", "b"});
  CHECK(euclidean_distance(psi, flipped) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(inner_product(psi, flipped) - Amplitude(1, 0)) < 1e-12);
}

TEST_CASE("random unitaries preserve the norm") {
  auto rng = rng_for("norm-preservation");
  for (int rep = 0; rep < 10; ++rep) {
    StateVector psi = random_state(rng, {"a", "b", "c"});
    Unitary u = random_unitary(rng, 4);
    REQUIRE(u.is_unitary(1e-9));
    StateVector out = apply_unitary(psi, u, {"b", "c"});
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("Araki-Lieb and subadditivity on random bipartitions") {
  auto rng = rng_for("araki-lieb");
  for (int rep = 0; rep < 8; ++rep) {
    StateVector psi = random_state(rng, {"a", "b", "c", "d"});
    DensityOperator bq = DensityOperator::from_state(psi, {"a", "b", "c"});
    DensityOperator b = DensityOperator::from_state(psi, {"a", "b"});
    DensityOperator q = DensityOperator::from_state(psi, {"c"});
    double s_bq = von_neumann_entropy(bq);
    double s_b = von_neumann_entropy(b);
    double s_q = von_neumann_entropy(q);
    CHECK(s_bq <= s_b + s_q + 1e-9);
    CHECK(s_bq >= std::abs(s_b - s_q) - 1e-9);
  }
}
