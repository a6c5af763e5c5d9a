#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lasucc/integrals.hpp"
#include "lasucc/layout.hpp"
#include "lasucc/qubit_mask.hpp"

namespace lasucc {

using cplx = std::complex<double>;

/// Pauli string as a (z, x) bit-mask pair. Per qubit: I=(0,0), Z=(1,0),
/// X=(0,1), Y=(1,1). The operator is i^{|z&x|} X^x Z^z.
struct PauliKey {
  QubitMask z;
  QubitMask x;
  bool operator==(const PauliKey &) const = default;
  std::strong_ordering operator<=>(const PauliKey &o) const {
    if (auto c = x <=> o.x; c != 0) return c;
    return z <=> o.z;
  }
};

struct PauliTerm {
  QubitMask z;
  QubitMask x;
  cplx coeff;
  int weight() const { return (z | x).popcount(); }
};

/// sigma(z1,x1) sigma(z2,x2) = i^k sigma(z1^z2, x1^x2); returns k in [0,4).
int pauli_product_phase(const QubitMask &z1, const QubitMask &x1,
                        const QubitMask &z2, const QubitMask &x2);

/// Qubit-order label, qubit 0 first ("ZXXI").
std::string pauli_label(const QubitMask &z, const QubitMask &x, int n_qubits);
PauliKey parse_pauli_label(const std::string &label);

class PauliSum {
 public:
  using TermMap = std::map<PauliKey, cplx>;

  explicit PauliSum(int n_qubits = 0);
  static PauliSum identity(int n_qubits, cplx c = 1.0);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap &terms() const { return terms_; }
  std::vector<PauliTerm> term_list() const;
  cplx coeff(const QubitMask &z, const QubitMask &x) const;

  /// Merges into an existing entry with equal masks.
  void add(const QubitMask &z, const QubitMask &x, cplx c);
  PauliSum &operator+=(const PauliSum &o);
  PauliSum &operator*=(cplx s);
  PauliSum operator*(const PauliSum &o) const;
  PauliSum operator+(const PauliSum &o) const;

  /// Drops entries with |coeff| < tol.
  void normalize(double tol = 1e-12);

  double max_imag() const;
  int max_weight() const;

  /// Dense matrix in the computational basis, qubit q = bit q of the index.
  Eigen::MatrixXcd to_dense() const;

  /// One "coeff label" line per term, lines sorted by label. Coefficients
  /// must be real.
  std::string to_text() const;
  static PauliSum from_text(const std::string &text);

 private:
  int n_qubits_ = 0;
  TermMap terms_;
};

enum class OrderingMode { BlockedSpin, FragmentInterleaved, Custom };

const char *ordering_mode_name(OrderingMode mode);
OrderingMode parse_ordering_mode(const std::string &name);

/// Injective map from spin-orbital index (canonical p + sigma*norb) to qubit.
/// When n_qubits exceeds the orbital count the ordering embeds a subsystem
/// into a larger register.
class OrbitalOrdering {
 public:
  OrbitalOrdering() = default;
  OrbitalOrdering(std::vector<int> perm, OrderingMode mode, int n_qubits = -1);
  static OrbitalOrdering identity(int n_so);

  int n_so() const { return static_cast<int>(perm_.size()); }
  int n_qubits() const { return n_qubits_; }
  OrderingMode mode() const { return mode_; }
  const std::vector<int> &perm() const { return perm_; }
  int qubit(int so) const { return perm_[so]; }
  bool is_permutation() const { return n_qubits_ == n_so(); }

  /// Qubit mask for a set of spin orbitals given as a bit mask (low word).
  QubitMask image(std::uint64_t so_mask) const;

 private:
  std::vector<int> perm_;
  OrderingMode mode_ = OrderingMode::Custom;
  int n_qubits_ = 0;
};

OrbitalOrdering make_ordering(const FragmentLayout &layout, OrderingMode mode);

/// Fragment K's local spin orbitals (i + sigma*N_K, i indexing the fragment's
/// orbital list) mapped to the qubits they occupy under `full`.
OrbitalOrdering embed_fragment(const FragmentLayout &layout, int k,
                               const OrbitalOrdering &full);

/// Fragment-local ordering on a register of its own: alpha/beta interleaved.
OrbitalOrdering local_fragment_ordering(int fragment_norb);

struct LadderOp {
  int orbital = 0;
  bool create = false;
};

inline LadderOp cre(int p) { return {p, true}; }
inline LadderOp ann(int p) { return {p, false}; }

/// Product of JW-mapped ladder operators, leftmost acting last.
PauliSum jordan_wigner_term(const std::vector<LadderOp> &ops,
                            const OrbitalOrdering &ordering);

/// Streaming form: calls `sink` for each Pauli string of the product (with
/// repeated strings already combined; zero strings dropped).
using PauliVisitor =
    std::function<void(const QubitMask &z, const QubitMask &x, cplx c)>;
void jordan_wigner_visit(const LadderOp *ops, int n_ops,
                         const OrbitalOrdering &ordering, cplx scale,
                         const PauliVisitor &sink);

/// Visits the merged real Pauli coefficients of the mapped Hamiltonian
/// without holding the full sum in memory. Strings sharing an x mask are
/// always emitted in one batch so merging is complete; |coeff| < tol dropped.
using RealPauliVisitor =
    std::function<void(const QubitMask &z, const QubitMask &x, double c)>;
void visit_hamiltonian(const SpinOrbitalHamiltonian &h,
                       const OrbitalOrdering &ordering,
                       const RealPauliVisitor &sink, double tol = 1e-12);

PauliSum map_hamiltonian(const SpinOrbitalHamiltonian &h,
                         const OrbitalOrdering &ordering, double tol = 1e-12);

}  // namespace lasucc
