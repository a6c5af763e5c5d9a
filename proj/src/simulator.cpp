#include "lasucc/simulator.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>

#include "lasucc/errors.hpp"

namespace lasucc {

namespace {

constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int initial_cap() {
  if (const char *env = std::getenv("LASUCC_MAX_QUBITS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 40) return static_cast<int>(v);
  }
  return 24;
}

std::atomic<int> &cap_storage() {
  static std::atomic<int> cap{initial_cap()};
  return cap;
}

void check_register(int n_qubits) {
  if (n_qubits < 0) throw DimensionError("negative qubit count");
  if (n_qubits > qubit_cap())
    throw CapacityError("register of " + std::to_string(n_qubits) +
                        " qubits exceeds the simulator cap of " +
                        std::to_string(qubit_cap()));
}

void check_fits(const QubitMask &z, const QubitMask &x, int n_qubits) {
  if ((z | x).highest() >= n_qubits)
    throw DimensionError("Pauli string acts outside the register");
}

}  // namespace

int qubit_cap() { return cap_storage().load(); }

void set_qubit_cap(int n) {
  if (n < 1) throw ConfigError("qubit cap must be positive");
  cap_storage().store(n);
}

Statevector::Statevector(int n_qubits) : n_qubits_(n_qubits) {
  check_register(n_qubits);
  amp_ = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim()));
  amp_[0] = 1.0;
}

Statevector::Statevector(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amp_(std::move(amplitudes)) {
  check_register(n_qubits);
  if (static_cast<std::uint64_t>(amp_.size()) != dim())
    throw DimensionError("amplitude vector length is not 2^n_qubits");
}

void Statevector::normalize() {
  const double n = norm();
  if (n == 0.0) throw ContractError("cannot normalize the zero vector");
  amp_ /= n;
}

cplx Statevector::inner(const Statevector &o) const {
  if (o.n_qubits_ != n_qubits_) throw DimensionError("register size mismatch");
  return amp_.dot(o.amp_);
}

Statevector prepare_basis_state(int n_qubits, std::uint64_t pattern) {
  check_register(n_qubits);
  if (n_qubits < 64 && (pattern >> n_qubits) != 0)
    throw DimensionError("basis pattern does not fit the register");
  Statevector s(n_qubits);
  s.amplitudes()[0] = 0.0;
  s.amplitudes()[static_cast<Eigen::Index>(pattern)] = 1.0;
  return s;
}

void apply_pauli_rotation(Eigen::VectorXcd &amp, std::uint64_t z,
                          std::uint64_t x, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  const std::uint64_t dim = static_cast<std::uint64_t>(amp.size());
  if (x == 0) {
    const cplx ep(c, -s), em(c, s);
    for (std::uint64_t j = 0; j < dim; ++j)
      amp[j] *= (std::popcount(z & j) & 1) ? em : ep;
    return;
  }
  // P|k> = i^{|z&x|} (-1)^{|z&k|} |k^x>; pair up j and j^x.
  const cplx base = kIPow[std::popcount(z & x) & 3];
  const std::uint64_t pivot = std::uint64_t{1} << (63 - std::countl_zero(x));
  for (std::uint64_t j = 0; j < dim; ++j) {
    if (j & pivot) continue;
    const std::uint64_t k = j ^ x;
    const cplx pj = (std::popcount(z & j) & 1) ? -base : base;  // <k|P|j>
    const cplx pk = (std::popcount(z & k) & 1) ? -base : base;  // <j|P|k>
    const cplx aj = amp[j], ak = amp[k];
    amp[j] = c * aj - cplx(0, s) * pk * ak;
    amp[k] = c * ak - cplx(0, s) * pj * aj;
  }
}

void apply_pauli_exponential(Statevector &state, const PauliTerm &term,
                             double theta) {
  check_fits(term.z, term.x, state.n_qubits());
  if (std::abs(term.coeff.imag()) > 1e-12 ||
      std::abs(std::abs(term.coeff.real()) - 1.0) > 1e-12)
    throw ContractError("Pauli exponential requires a coefficient of +1 or -1");
  if (theta == 0.0) return;
  const double angle = term.coeff.real() > 0 ? theta : -theta;
  apply_pauli_rotation(state.amplitudes(), term.z.low(), term.x.low(), angle);
}

Eigen::VectorXcd apply_pauli_sum(const PauliSum &h, const Eigen::VectorXcd &psi) {
  const std::uint64_t dim = static_cast<std::uint64_t>(psi.size());
  if (dim != (std::uint64_t{1} << h.n_qubits()))
    throw DimensionError("PauliSum and state registers differ");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  // Terms are keyed x-major, so each x group is contiguous.
  auto it = h.terms().begin();
  std::vector<std::pair<std::uint64_t, cplx>> group;
  while (it != h.terms().end()) {
    const QubitMask xm = it->first.x;
    group.clear();
    for (; it != h.terms().end() && it->first.x == xm; ++it)
      group.emplace_back(it->first.z.low(),
                         it->second * kIPow[std::popcount(it->first.z.low() & xm.low()) & 3]);
    const std::uint64_t x = xm.low();
    for (std::uint64_t j = 0; j < dim; ++j) {
      cplx acc = 0.0;
      for (const auto &[z, c] : group) acc += (std::popcount(z & j) & 1) ? -c : c;
      out[j ^ x] += acc * psi[j];
    }
  }
  return out;
}

double expectation(const Statevector &state, const PauliSum &h) {
  if (h.n_qubits() != state.n_qubits())
    throw DimensionError("expectation: PauliSum on " + std::to_string(h.n_qubits()) +
                         " qubits, state on " + std::to_string(state.n_qubits()));
  const cplx e = state.amplitudes().dot(apply_pauli_sum(h, state.amplitudes()));
  if (std::abs(e.imag()) > 1e-10)
    throw ContractError("expectation value has an imaginary part; operator not Hermitian");
  return e.real();
}

void trotter_step(Statevector &state, const PauliSum &h, double dt) {
  if (h.n_qubits() != state.n_qubits())
    throw DimensionError("Trotter step: register size mismatch");
  for (const auto &[k, c] : h.terms()) {
    if (std::abs(c.imag()) > 1e-12)
      throw ContractError("Trotter step requires real coefficients");
    apply_pauli_rotation(state.amplitudes(), k.z.low(), k.x.low(), c.real() * dt);
  }
}

Statevector tensor_product(const std::vector<Statevector> &parts) {
  int n = 0;
  for (const auto &p : parts) n += p.n_qubits();
  check_register(n);
  Eigen::VectorXcd acc = Eigen::VectorXcd::Ones(1);
  for (const auto &p : parts) {
    const Eigen::Index da = acc.size(), dp = p.amplitudes().size();
    Eigen::VectorXcd next(da * dp);
    for (Eigen::Index b = 0; b < dp; ++b)
      next.segment(b * da, da) = p.amplitudes()[b] * acc;
    acc.swap(next);
  }
  return Statevector(n, std::move(acc));
}

double fidelity(const Statevector &a, const Statevector &b) {
  return std::norm(a.inner(b));
}

}  // namespace lasucc
