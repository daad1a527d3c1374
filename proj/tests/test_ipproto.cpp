#include "doctest.h"

#include "qcc/infobounds.hpp"
#include "qcc/ipproto.hpp"

#include <cmath>

using namespace qcc;

TEST_CASE("inner product reference values") {
  CHECK(ip({1, 0, 1}, {1, 1, 0}) == 1);
  CHECK(ip({1, 1}, {1, 1}) == 0);
  for (std::uint64_t v = 0; v < 8; ++v) CHECK(ip(unpack_bits(v, 3), {0, 0, 0}) == 0);
  CHECK_THROWS_AS(ip({1}, {1, 0}), std::invalid_argument);
}

TEST_CASE("exact inner-product protocol succeeds on every pair") {
  for (int n = 1; n <= 3; ++n) {
    ProtocolProgram p = build_exact_ip(n);
    SuccessReport rep = success_report(p, ip_value);
    CHECK(rep.min_success == doctest::Approx(1.0).epsilon(1e-9));
    Ledger led = ledger_of(execute(p, Bits(n, 0), Bits(n, 0)));
    CHECK(led.qubits_ab == (n + 1) / 2);
    CHECK(led.qubits_ba == 0);
  }
  ExecutionOutcome single = execute(build_exact_ip(1), {1}, {1});
  CHECK(single.output_distribution.at(1) == doctest::Approx(1.0));
}

TEST_CASE("clean form restores everything except the answer qubit") {
  for (int n = 1; n <= 3; ++n) {
    ProtocolProgram clean = make_clean(build_exact_ip(n));
    REQUIRE(clean.bob_inputs.size() == static_cast<std::size_t>(n) + 1);
    ExecOptions full{.materialize_all = true};
    for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << n); ++xv) {
      for (std::uint64_t yv = 0; yv < (std::uint64_t{1} << n); ++yv) {
        for (int z = 0; z < 2; ++z) {
          Bits x = unpack_bits(xv, n);
          Bits y = unpack_bits(yv, n);
          Bits zy = y;
          zy.insert(zy.begin(), z);
          ExecutionOutcome out = execute(clean, x, zy, full);
          REQUIRE(out.branches.size() == 1);
          Bits want = y;
          want.insert(want.begin(), z ^ ip(x, y));
          StateVector expected = initial_state_for(clean, x, want, full);
          CHECK(euclidean_distance(out.branches[0].state, expected) <= 1e-9);
          CHECK(out.output_distribution.at(static_cast<std::uint64_t>(z ^ ip(x, y))) ==
                doctest::Approx(1.0).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("cleaning doubles the send counts symmetrically") {
  ProtocolProgram clean = make_clean(build_exact_ip(4));
  Ledger led = ledger_of(execute(clean, {0, 0, 0, 0}, {0, 0, 0, 0, 0}));
  CHECK(led.qubits_ab == 2);
  CHECK(led.qubits_ba == 2);
}

TEST_CASE("make_clean rejects classical steps") {
  ProtocolProgram p = build_exact_ip(1);
  p.steps.push_back(shared_coin("c"));
  CHECK_THROWS_AS(make_clean(p), std::invalid_argument);

  ProtocolProgram q = build_exact_ip(1);
  q.steps.push_back(branch(BitExpr::constant(1), {}, {}));
  CHECK_THROWS_WITH_AS(make_clean(q), doctest::Contains("branching"), std::invalid_argument);
}

TEST_CASE("clean form handles programs that write into Bob's input register") {
  // A variant that XORs the received x bit into y0 and undoes it again;
  // the copy pass must reroute those writes.
  ProtocolProgram q = build_exact_ip(1);
  q.steps.push_back(local(Party::bob, pauli_x(), {"y0"}, {"c"}));
  q.steps.push_back(local(Party::bob, pauli_x(), {"y0"}, {"c"}));
  ProtocolProgram clean = make_clean(q);
  ExecOptions full{.materialize_all = true};
  for (int xv = 0; xv < 2; ++xv)
    for (int yv = 0; yv < 2; ++yv)
      for (int z = 0; z < 2; ++z) {
        ExecutionOutcome out = execute(clean, {xv}, {z, yv}, full);
        Bits want{z ^ (xv & yv), yv};
        StateVector expected = initial_state_for(clean, {xv}, want, full);
        CHECK(euclidean_distance(out.branches[0].state, expected) <= 1e-9);
      }
}

TEST_CASE("reduction attack recovers x exactly from exact clean programs") {
  for (int n = 1; n <= 4; ++n) {
    ProtocolProgram clean = make_clean(build_exact_ip(n));
    for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << n); ++xv) {
      AttackReport rep = reduction_attack(clean, unpack_bits(xv, n));
      CHECK(rep.recovery_probability == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(rep.euclidean_gap <= 1e-9);
      CHECK(rep.cos_theta == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("noisy protocol has worst-case error sin^2(theta)") {
  const double theta = std::asin(0.2);  // sin^2 = 0.04
  ProtocolProgram noisy = make_noisy_exact_ip(2, theta);
  ErrorProfile profile = epsilon_of(noisy, ip_value);
  CHECK(profile.epsilon == doctest::Approx(0.04).epsilon(1e-9));
  for (const auto& pe : profile.per_pair) CHECK(pe.error == doctest::Approx(0.04).epsilon(1e-9));

  ProtocolProgram zero = make_noisy_exact_ip(2, 0.0);
  CHECK(epsilon_of(zero, ip_value).epsilon == doctest::Approx(0.0));
  CHECK_THROWS_AS(make_noisy_exact_ip(2, 1.0), std::invalid_argument);
}

TEST_CASE("attack on noisy clean programs meets the analytic bounds") {
  for (double theta : {0.1, 0.25, 0.45}) {
    const double eps = std::sin(theta) * std::sin(theta);
    const double bound = (1 - 2 * eps) * (1 - 2 * eps);
    for (int n = 1; n <= 3; ++n) {
      ProtocolProgram clean = make_clean(make_noisy_exact_ip(n, theta));
      for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << n); ++xv) {
        AttackReport rep = reduction_attack(clean, unpack_bits(xv, n));
        CHECK(rep.recovery_probability >= bound - 1e-9);
        CHECK(rep.euclidean_gap <= 2 * std::sin(theta) + 1e-9);
        CHECK(rep.recovery_probability >= rep.cos_theta * rep.cos_theta - 1e-9);
      }
    }
  }
}

TEST_CASE("a classical run of the clean protocol leaks exactly one bit") {
  // Executed on basis inputs (no superposition anywhere), Bob's view of
  // a clean run is his own inputs plus the answer bit, so over all x it
  // takes at most two values: one bit of information for y != 0, none
  // for y = 0.
  const int n = 3;
  ProtocolProgram clean = make_clean(build_exact_ip(n));
  for (std::uint64_t yv : {std::uint64_t{5}, std::uint64_t{0}}) {
    Bits y = unpack_bits(yv, n);
    Bits zy = y;
    zy.insert(zy.begin(), 0);
    std::vector<std::vector<double>> joint;
    for (std::uint64_t xv = 0; xv < (std::uint64_t{1} << n); ++xv) {
      ExecutionOutcome out = execute(clean, unpack_bits(xv, n), zy);
      std::vector<double> row(2, 0.0);
      for (const auto& [v, p] : out.output_distribution) row[v] += p / 8.0;
      joint.push_back(row);
    }
    double info = mutual_information(joint);
    if (yv == 0)
      CHECK(info == doctest::Approx(0.0).epsilon(1e-9));
    else
      CHECK(info == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("fano bound reference values") {
  CHECK(fano_bound(0.0, 4) == doctest::Approx(4.0));
  // (1-2*0.25)^2 = 0.25, so the bound is 2 - h(0.25).
  const double h25 = -0.25 * std::log2(0.25) - 0.75 * std::log2(0.75);
  CHECK(fano_bound(0.25, 8) == doctest::Approx(2.0 - h25).epsilon(1e-12));
  for (double e = 0; e < 0.5; e += 1e-3)
    CHECK(fano_bound(e, 6) >= (1 - 2 * e) * (1 - 2 * e) * 6 - 1 - 1e-12);
  CHECK_THROWS_AS(fano_bound(0.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(fano_bound(-0.1, 3), std::invalid_argument);
}

TEST_CASE("one-bit protocol and its interleaving") {
  ProtocolProgram bit1 = build_bit_ip1();
  SuccessReport rep = success_report(bit1, ip_value);
  CHECK(rep.min_success == doctest::Approx(1.0));
  Ledger led = ledger_of(execute(bit1, {1}, {1}));
  CHECK(led.bits_ab == 1);
  CHECK(led.total_qubits() == 0);

  ProtocolProgram doubled = interleave_to_qubits(bit1);
  CHECK(doubled.alice_inputs.size() == 2);
  CHECK(doubled.bob_inputs.size() == 2);
  SuccessReport rep2 = success_report(doubled, ip_value);
  CHECK(rep2.min_success == doctest::Approx(1.0).epsilon(1e-9));
  Ledger led2 = ledger_of(execute(doubled, {0, 0}, {0, 0}));
  CHECK(led2.qubits_ab == 1);
  CHECK(led2.total_bits() == 0);
  CHECK(led2.prior_epr_pairs == 1);
}

TEST_CASE("interleaving a noisy bit protocol composes the error exactly") {
  for (double eps : {0.1, 0.2}) {
    ProtocolProgram noisy = make_noisy_bit_ip1(eps);
    ErrorProfile base = epsilon_of(noisy, ip_value);
    CHECK(base.epsilon == doctest::Approx(eps).epsilon(1e-9));
    ProtocolProgram doubled = interleave_to_qubits(noisy);
    ErrorProfile composed = epsilon_of(doubled, ip_value);
    CHECK(composed.epsilon == doctest::Approx(2 * eps * (1 - eps)).epsilon(1e-9));
  }
}

TEST_CASE("interleaving rejects unsupported shapes") {
  ProtocolProgram with_qubits = build_exact_ip(1);
  CHECK_THROWS_WITH_AS(interleave_to_qubits(with_qubits), doctest::Contains("classical bits"),
                       std::invalid_argument);

  ProtocolProgram branchy = build_bit_ip1();
  branchy.steps.push_back(branch(BitExpr::var("c0"),
                                 {send_bit(Party::bob, BitExpr::constant(0), "r")}, {}));
  CHECK_THROWS_WITH_AS(interleave_to_qubits(branchy), doctest::Contains("pattern"),
                       std::invalid_argument);
}
