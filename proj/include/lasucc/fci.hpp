#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lasucc/fermion.hpp"
#include "lasucc/layout.hpp"
#include "lasucc/simulator.hpp"

namespace lasucc {

/// Computational basis states of a register with fixed alpha and beta
/// occupation, ascending by index.
class SectorBasis {
 public:
  SectorBasis(const OrbitalOrdering &ordering, SectorSpec sector);

  SectorSpec sector() const { return sector_; }
  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(states_.size()); }
  const std::vector<std::uint64_t> &states() const { return states_; }
  /// Position of a basis state, or -1 when outside the sector.
  Eigen::Index index_of(std::uint64_t state) const;

  QubitMask alpha_qubits() const { return alpha_; }
  QubitMask beta_qubits() const { return beta_; }

  Statevector embed(const Eigen::VectorXcd &v) const;
  Eigen::VectorXcd restrict(const Statevector &s) const;

 private:
  SectorSpec sector_;
  int n_qubits_ = 0;
  QubitMask alpha_, beta_;
  std::vector<std::uint64_t> states_;
  std::vector<std::int32_t> dense_lookup_;
  std::unordered_map<std::uint64_t, Eigen::Index> sparse_lookup_;
};

/// A PauliSum restricted to one particle-number sector, as a sparse matrix.
/// Stored real when every element has zero imaginary part.
class SectorHamiltonian {
 public:
  SectorHamiltonian(const PauliSum &h, SectorBasis basis);

  const SectorBasis &basis() const { return basis_; }
  Eigen::Index dim() const { return basis_.dim(); }
  bool is_real() const { return real_; }
  const Eigen::SparseMatrix<double> &real_matrix() const { return mr_; }
  const Eigen::SparseMatrix<cplx> &complex_matrix() const { return mc_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd &v) const;
  /// <v|H|v> for a sector vector.
  double expectation(const Eigen::VectorXcd &v) const;
  /// <psi|H|psi> for a full-register state; components outside the sector
  /// must vanish.
  double expectation(const Statevector &psi) const;
  Eigen::MatrixXcd to_dense() const;

 private:
  SectorBasis basis_;
  bool real_ = true;
  Eigen::SparseMatrix<double> mr_;
  Eigen::SparseMatrix<cplx> mc_;
};

struct GroundState {
  double energy = 0.0;
  Statevector state;            ///< embedded in the full register
  Eigen::VectorXcd sector_vector;
  int iterations = 0;           ///< Lanczos steps; 0 for the dense path
};

/// Largest sector dimension handled by dense diagonalization.
inline constexpr Eigen::Index kDenseSectorLimit = 4096;

/// Dense eigensolve up to `dense_limit` states, Lanczos above.
GroundState ground_state(const SectorHamiltonian &h,
                         Eigen::Index dense_limit = kDenseSectorLimit);
GroundState ground_state_in_sector(const PauliSum &h,
                                   const OrbitalOrdering &ordering,
                                   SectorSpec sector);

/// All eigenvalues of the sector block, ascending (dense; small sectors).
Eigen::VectorXd sector_spectrum(const SectorHamiltonian &h);

/// Total number operator sum_q (I - Z_q)/2 over the ordering's qubits.
PauliSum number_operator(const OrbitalOrdering &ordering);
/// S_z = (N_alpha - N_beta)/2.
PauliSum sz_operator(const OrbitalOrdering &ordering);

}  // namespace lasucc
