#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lasucc {

/// Canonical (pq|rs) key: p>=q, r>=s, pair(pq) >= pair(rs).
struct EriKey {
  int p = 0, q = 0, r = 0, s = 0;
  static EriKey canonical(int p, int q, int r, int s);
  auto operator<=>(const EriKey &) const = default;
};

/// Spatial-orbital integrals as read from an FCIDUMP file. Energies in
/// hartree; two-electron integrals in chemists' notation.
class IntegralSet {
 public:
  IntegralSet() = default;
  IntegralSet(int norb, int nelec, int ms2);

  int norb() const { return norb_; }
  int nelec() const { return nelec_; }
  int ms2() const { return ms2_; }
  int n_alpha() const { return (nelec_ + ms2_) / 2; }
  int n_beta() const { return (nelec_ - ms2_) / 2; }

  double core_energy() const { return core_energy_; }
  void set_core_energy(double e) { core_energy_ = e; }

  const Eigen::MatrixXd &h1() const { return h1_; }
  double h1(int p, int q) const { return h1_(p, q); }
  /// Sets h1[p][q] and h1[q][p].
  void set_h1(int p, int q, double value);

  /// (pq|rs); any of the 8 equivalent index orders resolves to the same value.
  double eri(int p, int q, int r, int s) const;
  void set_eri(int p, int q, int r, int s, double value);
  const std::map<EriKey, double> &eri_elements() const { return h2_; }

  /// Throws on broken invariants (symmetry, index ranges, electron counts).
  void validate() const;

 private:
  int norb_ = 0;
  int nelec_ = 0;
  int ms2_ = 0;
  double core_energy_ = 0.0;
  Eigen::MatrixXd h1_;
  std::map<EriKey, double> h2_;
};

IntegralSet parse_fcidump(std::istream &in);
IntegralSet read_fcidump(const std::string &path);
/// Writes integrals at full round-trip precision; elements below 1e-12 are
/// screened out.
void write_fcidump(std::ostream &out, const IntegralSet &ints);

/// Spin-orbital Hamiltonian of the one- plus antisymmetrized two-electron
/// form. Spin orbitals are indexed canonically as p + sigma*norb (alpha block
/// first). The two-body part is kept as dense spatial chemists' integrals and
/// antisymmetrized on access, which keeps lookups O(1) even for large
/// synthetic systems.
class SpinOrbitalHamiltonian {
 public:
  SpinOrbitalHamiltonian() = default;
  /// `one_body` is n_so x n_so; `eri` is norb^4 chemists' integrals (pq|rs)
  /// in row-major order.
  SpinOrbitalHamiltonian(int norb, double scalar, Eigen::MatrixXd one_body,
                         std::vector<double> eri);

  int norb() const { return norb_; }
  int n_so() const { return 2 * norb_; }
  double scalar() const { return scalar_; }

  double one_body(int p, int q) const { return one_body_(p, q); }
  const Eigen::MatrixXd &one_body() const { return one_body_; }

  /// Spatial (pq|rs).
  double coulomb(int p, int q, int r, int s) const {
    return eri_[((static_cast<std::size_t>(p) * norb_ + q) * norb_ + r) * norb_ + s];
  }

  /// Antisymmetrized <pr||qs> over spin orbitals, the element multiplying
  /// a+_p a+_r a_s a_q with the 1/4 prefactor.
  double two_body(int p, int r, int q, int s) const {
    const int sp = p / norb_, sq = q / norb_, sr = r / norb_, ss = s / norb_;
    const int P = p % norb_, Q = q % norb_, R = r % norb_, S = s % norb_;
    double v = 0.0;
    if (sp == sq && sr == ss) v += coulomb(P, Q, R, S);
    if (sp == ss && sr == sq) v -= coulomb(P, S, R, Q);
    return v;
  }

  const std::vector<double> &spatial_eri() const { return eri_; }

 private:
  int norb_ = 0;
  double scalar_ = 0.0;
  Eigen::MatrixXd one_body_;
  std::vector<double> eri_;
};

SpinOrbitalHamiltonian to_spin_orbitals(const IntegralSet &ints);

}  // namespace lasucc
