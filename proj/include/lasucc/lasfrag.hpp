#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lasucc/fci.hpp"
#include "lasucc/fermion.hpp"
#include "lasucc/integrals.hpp"
#include "lasucc/layout.hpp"
#include "lasucc/simulator.hpp"

namespace lasucc {

/// Spin-orbital 1-RDM gamma(p, q) = <a+_p a_q> of one fragment, in its local
/// index i + sigma*N_K.
struct FragmentRDM {
  Eigen::MatrixXd gamma;
};

struct LasSolution {
  /// Fragment K's state on 2*N_K qubits under local_fragment_ordering.
  std::vector<Statevector> fragment_states;
  std::vector<double> fragment_energies;  ///< eps_K = <Psi_K|H_K|Psi_K>
  std::vector<FragmentRDM> rdms;
  double e_las = 0.0;
  /// Full-Hamiltonian expectation on the assembled product state; NaN when
  /// the register was too large to build.
  double e_las_state = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;
};

struct CmfOptions {
  double tolerance = 1e-9;
  int max_sweeps = 200;
};

/// Aufbau RDM: the lowest-index N_alpha / N_beta fragment orbitals filled.
FragmentRDM aufbau_rdm(const Fragment &fragment);

/// 1-RDM of a fragment state (local interleaved ordering).
FragmentRDM one_rdm(const Statevector &state, int fragment_norb);
/// 2-RDM Gamma[(p*n + r), (q*n + s)] = <a+_p a+_r a_s a_q>, n = 2*N_K.
Eigen::MatrixXd two_rdm(const Statevector &state, int fragment_norb);

/// Fragment K's Hamiltonian in the mean field of the other fragments:
/// one-body h + sum_{L != K} <k1 l1||k2 l2> gamma_L, two-body the intra-fragment
/// slice, no scalar.
SpinOrbitalHamiltonian build_effective_one_body(const SpinOrbitalHamiltonian &h,
                                                const FragmentLayout &layout, int k,
                                                const std::vector<FragmentRDM> &rdms);

LasSolution cmf_solve(const SpinOrbitalHamiltonian &h, const FragmentLayout &layout,
                      const CmfOptions &options = {});

/// LAS energy from fragment 1- and 2-RDMs plus the mean-field cross terms.
double las_energy(const SpinOrbitalHamiltonian &h, const FragmentLayout &layout,
                  const std::vector<Statevector> &fragment_states);

/// Tensor product of the fragment states; requires the fragment-interleaved
/// ordering of this layout.
Statevector assemble_product_state(const LasSolution &sol, const FragmentLayout &layout,
                                   const OrbitalOrdering &ordering);

/// Sum over fragments of the mapped effective Hamiltonians, each placed on its
/// qubits of `ordering`.
PauliSum effective_hamiltonian(const SpinOrbitalHamiltonian &h, const FragmentLayout &layout,
                               const std::vector<FragmentRDM> &rdms,
                               const OrbitalOrdering &ordering);

struct QpePlan {
  int t = 8;                 ///< phase bits
  double tau = 1.0;          ///< evolution time
  double shift = 0.0;        ///< energy offset
  int trotter_steps = 1;     ///< first-order substeps per application of U
  bool use_exact_propagator = true;
};

/// Plan whose window [shift, shift + 2 pi/tau) covers [e_min, e_max] with a
/// margin on each side.
QpePlan plan_for_window(double e_min, double e_max, int t, double margin = 0.1);

struct QpeResult {
  std::vector<double> distribution;  ///< probability of each of the 2^t outcomes
  int modal_outcome = 0;
  double phase = 0.0;                ///< outcome / 2^t
  double energy = 0.0;
  Statevector post_state;            ///< system state given the modal outcome
};

/// Decodes a phase read-out j of a t-bit register into an energy.
double qpe_decode(int outcome, const QpePlan &plan);

/// Textbook phase estimation with U = exp(-i (H - shift) tau). Exact outcome
/// distribution; no sampling.
QpeResult simulate_fragment_qpe(const PauliSum &h_frag, const QpePlan &plan,
                                const Statevector &initial);

}  // namespace lasucc
