#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lasucc/fci.hpp"
#include "lasucc/fermion.hpp"
#include "lasucc/layout.hpp"
#include "lasucc/simulator.hpp"

namespace lasucc {

/// A = a+_{cre[0]} a+_{cre[1]} ... a_{ann[1]} a_{ann[0]} over spin orbitals;
/// the generator is T = A - A+.
struct ExcitationGenerator {
  std::vector<int> cre;
  std::vector<int> ann;

  int order() const { return static_cast<int>(cre.size()); }
  bool operator==(const ExcitationGenerator &) const = default;
};

struct UccAnsatz {
  /// Application order: generators[0] acts on the ket first.
  std::vector<ExcitationGenerator> generators;
  /// Generator indices sharing one amplitude; amplitude g drives symtab[g].
  std::vector<std::vector<int>> symtab;
  /// Fragment indices spanned; empty for ansatzes built from a bare orbital list.
  std::vector<int> window;

  int n_params() const { return static_cast<int>(symtab.size()); }
  /// Throws ContractError unless every generator sits in exactly one group
  /// and all indices are below n_so.
  void validate(int n_so) const;
};

/// Spin-adapted UCCSD over a spatial-orbital range, in the generator order
/// and spin-case rules of the mrh correlator: singles a > i row-major with
/// the alpha copy first and one shared amplitude; doubles over
/// combinations-with-replacement of the lower triangle (with diagonal), each
/// surviving spin case its own amplitude. Spin orbital of local orbital p with
/// spin s is orbitals[p] + s*norb.
UccAnsatz build_uccsd_window(const std::vector<int> &orbitals, int norb);
/// Same, spanning the listed fragments' orbitals in layout order.
UccAnsatz build_uccsd_window(const FragmentLayout &layout, const std::vector<int> &fragments);

/// Sliding windows (K, ..., K+m-1), K = 0..n_f-m. The returned list is in
/// application order: window 0 acts first, i.e. the product is written with
/// descending K from left to right.
std::vector<UccAnsatz> build_mlocal_correlators(const FragmentLayout &layout);

/// Occupied and virtual spatial orbitals of a fragment under aufbau filling.
struct OccupancySplit {
  std::vector<int> occupied_alpha, virtual_alpha, occupied_beta, virtual_beta;
};
OccupancySplit aufbau_split(const FragmentLayout &layout, const std::vector<int> &fragments);

/// Custom ordering [occupied alpha, virtual alpha, occupied beta, virtual
/// beta] over the whole system, fragments in order inside each block.
OrbitalOrdering occupation_blocked_ordering(const FragmentLayout &layout);

/// Spin-restricted singles between all occupied/virtual spatial pairs of the
/// whole system plus fragment-local doubles.
UccAnsatz build_las_vqe_ansatz(const FragmentLayout &layout);
/// Spin-restricted singles plus every occupied/virtual double of the whole
/// system (the reference UCCSD of the Hartree-Fock-started runs).
UccAnsatz build_occ_virt_uccsd(const FragmentLayout &layout);

/// Aufbau determinant of the layout as a qubit bit pattern under `ordering`.
std::uint64_t aufbau_determinant(const FragmentLayout &layout, const OrbitalOrdering &ordering);

/// JW image of T = A - A+; its coefficients are purely imaginary and its
/// strings mutually commute.
PauliSum generator_pauli_sum(const ExcitationGenerator &g, const OrbitalOrdering &ordering);

/// FNV-1a over the ordered generator lists and symmetry tables.
std::string generator_manifest_hash(const std::vector<UccAnsatz> &correlators);

enum class CorrelatorKernel {
  Pauli,       ///< product of commuting Pauli rotations from the JW image
  Excitation,  ///< direct Givens rotation between paired determinants
};

/// The Hamiltonian seen by the variational routines: either a PauliSum on the
/// full register or its block on one particle-number sector. The sector form
/// is exact only for states inside the sector and Hamiltonians that conserve
/// it, which holds for every mapped SpinOrbitalHamiltonian.
class HamiltonianView {
 public:
  HamiltonianView(const PauliSum &h) : pauli_(&h) {}
  HamiltonianView(const SectorHamiltonian &h) : sector_(&h) {}

  int n_qubits() const;
  const SectorHamiltonian *sector() const { return sector_; }
  /// H v for a full-register vector.
  Eigen::VectorXcd apply(const Eigen::VectorXcd &v) const;
  double expectation(const Statevector &s) const;

 private:
  const PauliSum *pauli_ = nullptr;
  const SectorHamiltonian *sector_ = nullptr;
};

/// A product of correlators compiled against one ordering. Amplitudes of all
/// correlators are concatenated in application order.
class CorrelatorCircuit {
 public:
  CorrelatorCircuit() = default;
  CorrelatorCircuit(std::vector<UccAnsatz> correlators, const OrbitalOrdering &ordering);

  int n_params() const { return n_params_; }
  int n_generators() const { return static_cast<int>(gens_.size()); }
  int n_qubits() const { return n_qubits_; }
  const std::vector<UccAnsatz> &correlators() const { return correlators_; }

  void apply(Statevector &state, const Eigen::VectorXd &x,
             CorrelatorKernel kernel = CorrelatorKernel::Excitation) const;
  double energy(const Statevector &reference, const HamiltonianView &h,
                const Eigen::VectorXd &x) const;
  /// Reverse-mode gradient; also returns the energy.
  Eigen::VectorXd gradient(const Statevector &reference, const HamiltonianView &h,
                           const Eigen::VectorXd &x, double *energy = nullptr) const;
  /// Central finite differences.
  Eigen::VectorXd fd_gradient(const Statevector &reference, const HamiltonianView &h,
                              const Eigen::VectorXd &x, double step = 1e-5) const;
  /// True when every generator keeps the alpha and beta counts on the given
  /// qubit sets.
  bool conserves(const QubitMask &alpha, const QubitMask &beta) const;

 private:
  struct Compiled {
    int param = 0;
    std::uint64_t a_mask = 0, c_mask = 0, free_mask = 0;
    std::vector<int> ops;  // qubits toggled by A, in the order they act
    std::vector<PauliTerm> factors;  // T = sum_k i c_k P_k
  };
  void rotate(Eigen::VectorXcd &v, const Compiled &g, double angle) const;
  void rotate_pauli(Eigen::VectorXcd &v, const Compiled &g, double angle) const;
  /// <l| T |r> for one generator.
  cplx matrix_element(const Eigen::VectorXcd &l, const Eigen::VectorXcd &r,
                      const Compiled &g) const;
  void check(const Statevector &s, const Eigen::VectorXd &x) const;

  // Rotation pairs of every generator inside one particle sector; generator g
  // owns entries [offset[g], offset[g + 1]).
  struct SectorPairs {
    std::uint64_t alpha = 0, beta = 0;
    SectorSpec sector;
    std::vector<std::size_t> offset;
    std::vector<std::int32_t> i, j;
    std::vector<double> sign;
  };
  struct SectorCache;
  /// Pairs for h's sector, or null when h is a full-register operator or the
  /// reference or circuit leaves the sector.
  const SectorPairs *sector_pairs(const HamiltonianView &h, const Statevector &reference) const;
  void rotate(Eigen::VectorXcd &v, const SectorPairs &p, std::size_t g, double angle) const;
  cplx matrix_element(const Eigen::VectorXcd &l, const Eigen::VectorXcd &r, const SectorPairs &p,
                      std::size_t g) const;

  std::vector<UccAnsatz> correlators_;
  std::vector<Compiled> gens_;
  int n_params_ = 0;
  int n_qubits_ = 0;
  std::shared_ptr<SectorCache> cache_;
};

/// Applies one ansatz to `state` under `ordering`.
void apply_correlator(Statevector &state, const UccAnsatz &ansatz, const Eigen::VectorXd &x,
                      const OrbitalOrdering &ordering,
                      CorrelatorKernel kernel = CorrelatorKernel::Excitation);

enum class GradientMode { Adjoint, CentralDifference };

struct VqeOptions {
  double energy_tolerance = 1e-9;
  double gradient_tolerance = 1e-6;
  int max_iterations = 500;
  GradientMode gradient = GradientMode::Adjoint;
  double fd_step = 1e-5;
};

struct VqeResult {
  double energy = 0.0;
  double reference_energy = 0.0;
  Eigen::VectorXd x;
  int iterations = 0;
  int evaluations = 0;
  double gradient_norm = 0.0;  ///< max-norm at the returned point
};

/// BFGS from x = 0. Throws OptimizationError carrying the best point when
/// the iteration cap is hit. With a sector Hamiltonian the reference must lie
/// in its sector (SectorError) and the circuit must conserve it
/// (ContractError).
VqeResult vqe_minimize(const Statevector &reference, const CorrelatorCircuit &circuit,
                       const HamiltonianView &h, const VqeOptions &options = {});

}  // namespace lasucc
