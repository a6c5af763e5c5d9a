#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lasucc/fermion.hpp"

namespace lasucc {

/// Largest register the simulator allocates. Default 24; the LASUCC_MAX_QUBITS
/// environment variable overrides it at first use.
int qubit_cap();
void set_qubit_cap(int n);

class Statevector {
 public:
  Statevector() = default;
  /// |0...0> on n qubits.
  explicit Statevector(int n_qubits);
  Statevector(int n_qubits, Eigen::VectorXcd amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::uint64_t dim() const { return std::uint64_t{1} << n_qubits_; }
  const Eigen::VectorXcd &amplitudes() const { return amp_; }
  Eigen::VectorXcd &amplitudes() { return amp_; }
  cplx operator[](std::uint64_t i) const { return amp_[static_cast<Eigen::Index>(i)]; }

  double norm() const { return amp_.norm(); }
  void normalize();
  cplx inner(const Statevector &o) const;  ///< <this|o>

 private:
  int n_qubits_ = 0;
  Eigen::VectorXcd amp_;
};

Statevector prepare_basis_state(int n_qubits, std::uint64_t pattern);

/// exp(-i theta P) for a term with coefficient +-1 (folded into the angle).
void apply_pauli_exponential(Statevector &state, const PauliTerm &term,
                             double theta);
/// exp(-i theta P) without coefficient checks.
void apply_pauli_rotation(Eigen::VectorXcd &amp, std::uint64_t z,
                          std::uint64_t x, double theta);

/// H|psi>.
Eigen::VectorXcd apply_pauli_sum(const PauliSum &h, const Eigen::VectorXcd &psi);

double expectation(const Statevector &state, const PauliSum &h);

/// First-order Trotter step: prod_j exp(-i c_j P_j dt), terms in key order.
void trotter_step(Statevector &state, const PauliSum &h, double dt);

/// Kronecker product; parts[0] occupies the lowest qubits.
Statevector tensor_product(const std::vector<Statevector> &parts);

double fidelity(const Statevector &a, const Statevector &b);

}  // namespace lasucc
