#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lasucc/fermion.hpp"
#include "lasucc/integrals.hpp"
#include "lasucc/layout.hpp"
#include "lasucc/ucc.hpp"

namespace lasucc {

struct GateCount {
  std::int64_t cnot = 0;
  std::int64_t rot1q = 0;
  std::int64_t clifford1q = 0;

  GateCount &operator+=(const GateCount &o) {
    cnot += o.cnot;
    rot1q += o.rot1q;
    clifford1q += o.clifford1q;
    return *this;
  }
  friend GateCount operator+(GateCount a, const GateCount &b) { return a += b; }
  bool operator==(const GateCount &) const = default;
};

/// Staircase cost of exp(-i theta P): 2(w-1) CNOTs, one Rz, and a basis change
/// in and out for each X or Y factor. Identity costs nothing.
GateCount count_pauli_exponential(const QubitMask &z, const QubitMask &x);
GateCount count_trotter_step(const PauliSum &h);
/// Streams the mapped Hamiltonian without storing it.
GateCount count_trotter_step(const SpinOrbitalHamiltonian &h, const OrbitalOrdering &ordering);
GateCount count_correlator(const UccAnsatz &ansatz, const OrbitalOrdering &ordering);

/// One Trotter step of fragment K's effective Hamiltonian placed on its qubits
/// of `ordering` (a full-register ordering).
GateCount count_fragment_step(const SpinOrbitalHamiltonian &h, const FragmentLayout &layout,
                              int k, const OrbitalOrdering &ordering);

/// Integrals with every symmetry-allowed element nonzero: seeded magnitudes
/// in [0.1, 1). Gate counts depend only on the sparsity pattern.
IntegralSet synthetic_chain_integrals(int n_fragments, int orbitals_per_fragment,
                                      std::uint64_t seed);

enum class ScanMethod { FullQpe, LasQpe, GlobalUccsd, MLocalUccsd };
const char *scan_method_name(ScanMethod m);
ScanMethod parse_scan_method(const std::string &s);

struct ScalingRow {
  int n_f = 0;
  int n_so = 0;
  ScanMethod method = ScanMethod::FullQpe;
  GateCount count;
};

struct ScalingTable {
  std::vector<ScalingRow> rows;
  std::string to_csv() const;
};

enum class CountOrdering { BlockedSpin, FragmentInterleaved, OccupationBlocked };
OrbitalOrdering count_ordering(const FragmentLayout &layout, CountOrdering mode);

struct ScanOptions {
  int nf_min = 2;
  int nf_max = 20;
  int m = 2;
  std::uint64_t seed = 7;
  std::vector<ScanMethod> methods{ScanMethod::FullQpe, ScanMethod::LasQpe,
                                  ScanMethod::GlobalUccsd, ScanMethod::MLocalUccsd};
  CountOrdering full_qpe_ordering = CountOrdering::BlockedSpin;
  CountOrdering las_qpe_ordering = CountOrdering::FragmentInterleaved;
  CountOrdering global_uccsd_ordering = CountOrdering::OccupationBlocked;
  CountOrdering mlocal_ordering = CountOrdering::FragmentInterleaved;
};

/// H2 chains (two spatial orbitals and one electron pair per fragment).
ScalingTable scaling_scan(const ScanOptions &options = {});

enum class GateMetric { Cnot, Rot1q, Clifford1q };
/// Least-squares slope of log(count) against log(N) for one method. Throws
/// FitError with fewer than three points or a non-positive count.
double fit_loglog_slope(const ScalingTable &table, ScanMethod method,
                        GateMetric metric = GateMetric::Cnot);

}  // namespace lasucc
