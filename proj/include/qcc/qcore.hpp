// Exact complex linear algebra for small multi-qubit systems: state
// vectors over labeled qubits, unitaries, density operators, partial
// trace, and von Neumann entropy.
//
// Basis convention: a state over labels [q0, q1, ..., q_{k-1}] stores
// 2^k amplitudes in lexicographic order with q0 as the most significant
// bit. All checks (normalization, unitarity, hermiticity) use kTol.

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qcc {

using Amplitude = std::complex<double>;

inline constexpr double kTol = 1e-9;
inline constexpr double kEigenvalueFloor = 1e-12;

/// Dense row-major square matrix acting on a power-of-two dimension.
struct Unitary {
  std::size_t dim = 0;
  std::vector<Amplitude> m;  // m[r * dim + c]

  Unitary() = default;
  Unitary(std::size_t d, std::vector<Amplitude> entries);

  Amplitude& at(std::size_t r, std::size_t c) { return m[r * dim + c]; }
  const Amplitude& at(std::size_t r, std::size_t c) const { return m[r * dim + c]; }

  std::size_t num_qubits() const;
  bool is_unitary(double tol = kTol) const;
  Unitary dagger() const;

  static Unitary identity(std::size_t dim);
};

bool approx_equal(const Unitary& a, const Unitary& b, double tol = kTol);

// Standard gates.
Unitary hadamard();
Unitary pauli_x();
Unitary pauli_y();
Unitary pauli_z();
/// Real rotation by theta: |0> -> cos(theta)|0> + sin(theta)|1>.
Unitary rotation(double theta);
/// Controlled version of u; the control is the first (most significant)
/// qubit of the result.
Unitary controlled(const Unitary& u);
Unitary cnot();

/// Pure state over an ordered list of distinct qubit labels.
struct StateVector {
  std::vector<std::string> labels;  // labels[0] is the most significant bit
  std::vector<Amplitude> amps;      // size 2^labels.size()

  StateVector() = default;
  StateVector(std::vector<std::string> ls, std::vector<Amplitude> as);

  /// Computational basis state; bits[i] is the value of labels[i].
  static StateVector basis(std::vector<std::string> ls, const std::vector<int>& bits);

  std::size_t num_qubits() const { return labels.size(); }
  /// Position of a label, or -1 if absent.
  int index_of(const std::string& label) const;
  double norm() const;
  bool is_normalized(double tol = kTol) const;
  /// Same state with qubits permuted into the given label order.
  /// The label set must match exactly.
  StateVector reordered(const std::vector<std::string>& order) const;
};

/// Applies u to the targets' subspace; targets[0] is the most
/// significant gate qubit. Throws on unknown labels, duplicate targets,
/// dimension mismatch, or a non-unitary matrix.
StateVector apply_unitary(const StateVector& state, const Unitary& u,
                          const std::vector<std::string>& targets);

/// (|00> + |11>)/sqrt(2) on two fresh labels.
StateVector make_epr();

Amplitude inner_product(const StateVector& a, const StateVector& b);
double euclidean_distance(const StateVector& a, const StateVector& b);

/// Born probabilities of standard-basis outcomes on a subset of qubits,
/// indexed with targets[0] as the most significant outcome bit.
std::vector<double> outcome_probabilities(const StateVector& state,
                                          const std::vector<std::string>& targets);

/// Post-measurement state for a specific outcome; prob receives the
/// outcome probability. The state is renormalized (amplitudes are zeroed
/// when prob is negligible).
StateVector project_outcome(const StateVector& state,
                            const std::vector<std::string>& targets,
                            std::uint64_t outcome, double& prob);

/// Hermitian trace-one operator over labeled qubits.
struct DensityOperator {
  std::vector<std::string> labels;
  std::vector<Amplitude> m;  // row-major, (2^k)^2 entries

  Amplitude& at(std::size_t r, std::size_t c);
  const Amplitude& at(std::size_t r, std::size_t c) const;
  std::size_t dim() const;
  std::size_t num_qubits() const { return labels.size(); }
  double trace_real() const;
  bool is_hermitian(double tol = kTol) const;

  /// |psi><psi|.
  static DensityOperator from_state(const StateVector& psi);
  /// Reduced operator of |psi><psi| on the kept labels (the complement
  /// is traced out directly from the pure state).
  static DensityOperator from_state(const StateVector& psi,
                                    const std::vector<std::string>& keep);
};

bool approx_equal(const DensityOperator& a, const DensityOperator& b, double tol = kTol);

/// Reduced operator on `keep` (a subset of rho's labels, in rho's order).
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep);

/// Eigenvalues of a Hermitian matrix, descending. Cyclic Jacobi with
/// complex plane rotations; adequate for the small operators used here.
std::vector<double> eigenvalues_hermitian(const DensityOperator& rho);

/// -sum lambda log2 lambda over eigenvalues, in bits. Eigenvalues below
/// kEigenvalueFloor are treated as zero. Throws on non-Hermitian input.
double von_neumann_entropy(const DensityOperator& rho);

}  // namespace qcc
