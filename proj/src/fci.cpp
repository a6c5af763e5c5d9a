#include "lasucc/fci.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <type_traits>

#include "lasucc/errors.hpp"

namespace lasucc {

namespace {

constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
constexpr double kDegeneracyTol = 1e-10;
constexpr double kLanczosTol = 1e-10;
constexpr int kLanczosMaxIter = 500;

// All subsets of `qubits` of size k, as masks.
std::vector<std::uint64_t> combinations(const std::vector<int> &qubits, int k) {
  std::vector<std::uint64_t> out;
  const int n = static_cast<int>(qubits.size());
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::uint64_t m = 0;
    for (int i : idx) m |= std::uint64_t{1} << qubits[i];
    out.push_back(m);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Fixes the phase of a ground vector: project the uniform positive vector
// onto the selected eigenspace; fall back to making the largest component
// (lowest index on ties) real positive.
template <class Mat>
Eigen::VectorXcd pick_ground_vector(const Eigen::VectorXd &evals, const Mat &vecs) {
  const Eigen::Index dim = vecs.rows();
  Eigen::Index deg = 1;
  while (deg < evals.size() && evals[deg] - evals[0] <= kDegeneracyTol) ++deg;
  Eigen::MatrixXcd v = vecs.leftCols(deg).template cast<cplx>();
  const Eigen::VectorXcd u =
      Eigen::VectorXcd::Constant(dim, cplx(1.0 / std::sqrt(double(dim)), 0.0));
  Eigen::VectorXcd g = v * (v.adjoint() * u);
  if (g.norm() > 1e-8) return g / g.norm();
  g = v.col(0);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < dim; ++i)
    if (std::abs(g[i]) > std::abs(g[best]) + 1e-12) best = i;
  return g * (std::conj(g[best]) / std::abs(g[best]));
}

// Lanczos with full reorthogonalization from a fixed start vector.
template <class Scalar, class MatVec>
std::pair<double, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> lanczos(
    const MatVec &apply, Eigen::Index dim, int &iterations) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const int max_k = static_cast<int>(std::min<Eigen::Index>(kLanczosMaxIter, dim));
  std::vector<Vec> basis;
  std::vector<double> alpha, beta;
  Vec q = Vec::Constant(dim, Scalar(1.0 / std::sqrt(double(dim))));
  double residual = 0.0;
  double energy = 0.0;
  Eigen::VectorXd ritz;
  for (int k = 0; k < max_k; ++k) {
    basis.push_back(q);
    Vec w = apply(q);
    alpha.push_back(std::real(q.dot(w)));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto &b : basis) w -= b * b.dot(w);
    const double b = w.norm();
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      t(i, i) = alpha[i];
      if (i < k) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    energy = es.eigenvalues()[0];
    ritz = es.eigenvectors().col(0);
    residual = b * std::abs(ritz[k]);
    iterations = k + 1;
    if (residual < kLanczosTol || b < 1e-14 || k + 1 == dim) break;
    beta.push_back(b);
    q = w / b;
  }
  if (residual >= kLanczosTol && iterations == kLanczosMaxIter)
    throw ConvergenceError("Lanczos did not converge within 500 iterations",
                           residual);
  Vec v = Vec::Zero(dim);
  for (int i = 0; i < static_cast<int>(ritz.size()); ++i) v += ritz[i] * basis[i];
  v /= v.norm();
  // Orient so the overlap with the start vector is positive.
  const Scalar ov = v.sum();
  if constexpr (std::is_same_v<Scalar, double>) {
    if (ov < 0) v = -v;
  } else if (std::abs(ov) > 1e-12) {
    v *= std::conj(ov) / std::abs(ov);
  }
  return {energy, v};
}

}  // namespace

SectorBasis::SectorBasis(const OrbitalOrdering &ordering, SectorSpec sector)
    : sector_(sector), n_qubits_(ordering.n_qubits()) {
  if (ordering.n_so() % 2 != 0)
    throw DimensionError("sector basis needs an even spin-orbital count");
  if (n_qubits_ > qubit_cap())
    throw CapacityError("sector register of " + std::to_string(n_qubits_) +
                        " qubits exceeds the simulator cap");
  const int norb = ordering.n_so() / 2;
  if (sector.n_alpha < 0 || sector.n_beta < 0 || sector.n_alpha > norb ||
      sector.n_beta > norb)
    throw SectorError("sector (" + std::to_string(sector.n_alpha) + "," +
                      std::to_string(sector.n_beta) + ") is empty for " +
                      std::to_string(norb) + " spatial orbitals");
  std::vector<int> aq, bq;
  for (int p = 0; p < norb; ++p) {
    aq.push_back(ordering.qubit(p));
    bq.push_back(ordering.qubit(p + norb));
    alpha_.set(aq.back());
    beta_.set(bq.back());
  }
  const auto am = combinations(aq, sector.n_alpha);
  const auto bm = combinations(bq, sector.n_beta);
  states_.reserve(am.size() * bm.size());
  for (auto a : am)
    for (auto b : bm) states_.push_back(a | b);
  std::sort(states_.begin(), states_.end());
  if (n_qubits_ <= 20) {
    dense_lookup_.assign(std::size_t{1} << n_qubits_, -1);
    for (std::size_t i = 0; i < states_.size(); ++i)
      dense_lookup_[states_[i]] = static_cast<std::int32_t>(i);
  } else {
    for (std::size_t i = 0; i < states_.size(); ++i)
      sparse_lookup_[states_[i]] = static_cast<Eigen::Index>(i);
  }
}

Eigen::Index SectorBasis::index_of(std::uint64_t state) const {
  if (!dense_lookup_.empty())
    return state < dense_lookup_.size() ? dense_lookup_[state] : -1;
  auto it = sparse_lookup_.find(state);
  return it == sparse_lookup_.end() ? -1 : it->second;
}

Statevector SectorBasis::embed(const Eigen::VectorXcd &v) const {
  if (v.size() != dim()) throw DimensionError("sector vector length mismatch");
  Statevector s(n_qubits_);
  s.amplitudes()[0] = 0.0;
  for (Eigen::Index i = 0; i < dim(); ++i)
    s.amplitudes()[static_cast<Eigen::Index>(states_[i])] = v[i];
  return s;
}

Eigen::VectorXcd SectorBasis::restrict(const Statevector &s) const {
  if (s.n_qubits() != n_qubits_) throw DimensionError("register size mismatch");
  Eigen::VectorXcd v(dim());
  for (Eigen::Index i = 0; i < dim(); ++i)
    v[i] = s.amplitudes()[static_cast<Eigen::Index>(states_[i])];
  return v;
}

SectorHamiltonian::SectorHamiltonian(const PauliSum &h, SectorBasis basis)
    : basis_(std::move(basis)) {
  if (h.n_qubits() != basis_.n_qubits())
    throw DimensionError("Hamiltonian and sector basis registers differ");
  const std::uint64_t amask = basis_.alpha_qubits().low();
  const std::uint64_t bmask = basis_.beta_qubits().low();
  std::vector<Eigen::Triplet<cplx>> trip;
  std::vector<std::pair<std::uint64_t, cplx>> group;
  const auto &states = basis_.states();
  auto it = h.terms().begin();
  while (it != h.terms().end()) {
    const QubitMask xm = it->first.x;
    group.clear();
    for (; it != h.terms().end() && it->first.x == xm; ++it)
      group.emplace_back(it->first.z.low(),
                         it->second * kIPow[std::popcount(it->first.z.low() & xm.low()) & 3]);
    const std::uint64_t x = xm.low();
    // A flip pattern can only stay in the sector if it moves electrons in
    // pairs within each spin block.
    if ((std::popcount(x & amask) & 1) || (std::popcount(x & bmask) & 1)) continue;
    for (Eigen::Index j = 0; j < basis_.dim(); ++j) {
      const Eigen::Index k = basis_.index_of(states[j] ^ x);
      if (k < 0) continue;
      cplx acc = 0.0;
      for (const auto &[z, c] : group) acc += (std::popcount(z & states[j]) & 1) ? -c : c;
      if (acc != cplx(0.0, 0.0)) trip.emplace_back(k, j, acc);
    }
  }
  mc_.resize(basis_.dim(), basis_.dim());
  mc_.setFromTriplets(trip.begin(), trip.end());
  mc_.makeCompressed();
  double herm = 0.0, imag = 0.0;
  Eigen::SparseMatrix<cplx> diff = Eigen::SparseMatrix<cplx>(mc_.adjoint()) - mc_;
  for (int c = 0; c < diff.outerSize(); ++c)
    for (Eigen::SparseMatrix<cplx>::InnerIterator e(diff, c); e; ++e)
      herm = std::max(herm, std::abs(e.value()));
  if (herm > 1e-10) throw ContractError("sector Hamiltonian is not Hermitian");
  for (int c = 0; c < mc_.outerSize(); ++c)
    for (Eigen::SparseMatrix<cplx>::InnerIterator e(mc_, c); e; ++e)
      imag = std::max(imag, std::abs(e.value().imag()));
  real_ = imag < 1e-14;
  if (real_) {
    mr_ = mc_.real();
    mc_ = Eigen::SparseMatrix<cplx>();
  }
}

Eigen::VectorXcd SectorHamiltonian::apply(const Eigen::VectorXcd &v) const {
  if (v.size() != dim()) throw DimensionError("sector vector length mismatch");
  if (real_) {
    Eigen::VectorXcd out(dim());
    out.real() = mr_ * v.real();
    out.imag() = mr_ * v.imag();
    return out;
  }
  return mc_ * v;
}

double SectorHamiltonian::expectation(const Eigen::VectorXcd &v) const {
  return std::real(v.dot(apply(v)));
}

double SectorHamiltonian::expectation(const Statevector &psi) const {
  return expectation(basis_.restrict(psi));
}

Eigen::MatrixXcd SectorHamiltonian::to_dense() const {
  if (real_) return Eigen::MatrixXd(mr_).cast<cplx>();
  return Eigen::MatrixXcd(mc_);
}

GroundState ground_state(const SectorHamiltonian &h, Eigen::Index dense_limit) {
  GroundState gs;
  const Eigen::Index dim = h.dim();
  if (dim == 0) throw SectorError("empty sector");
  if (dim <= dense_limit) {
    if (h.is_real()) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(h.real_matrix()));
      gs.energy = es.eigenvalues()[0];
      gs.sector_vector = pick_ground_vector(es.eigenvalues(), es.eigenvectors());
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_dense());
      gs.energy = es.eigenvalues()[0];
      gs.sector_vector = pick_ground_vector(es.eigenvalues(), es.eigenvectors());
    }
  } else if (h.is_real()) {
    const auto &m = h.real_matrix();
    auto [e, v] = lanczos<double>(
        [&](const Eigen::VectorXd &x) -> Eigen::VectorXd { return m * x; }, dim,
        gs.iterations);
    gs.energy = e;
    gs.sector_vector = v.cast<cplx>();
  } else {
    const auto &m = h.complex_matrix();
    auto [e, v] = lanczos<cplx>(
        [&](const Eigen::VectorXcd &x) -> Eigen::VectorXcd { return m * x; }, dim,
        gs.iterations);
    gs.energy = e;
    gs.sector_vector = v;
  }
  gs.state = h.basis().embed(gs.sector_vector);
  return gs;
}

GroundState ground_state_in_sector(const PauliSum &h,
                                   const OrbitalOrdering &ordering,
                                   SectorSpec sector) {
  return ground_state(SectorHamiltonian(h, SectorBasis(ordering, sector)));
}

Eigen::VectorXd sector_spectrum(const SectorHamiltonian &h) {
  if (h.dim() > kDenseSectorLimit)
    throw CapacityError("full spectrum requested for a sector above the dense limit");
  if (h.is_real())
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
               Eigen::MatrixXd(h.real_matrix()), Eigen::EigenvaluesOnly)
        .eigenvalues();
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h.to_dense(),
                                                         Eigen::EigenvaluesOnly)
      .eigenvalues();
}

PauliSum number_operator(const OrbitalOrdering &ordering) {
  PauliSum n(ordering.n_qubits());
  for (int so = 0; so < ordering.n_so(); ++so) {
    n.add(QubitMask(), QubitMask(), 0.5);
    n.add(QubitMask::bit(ordering.qubit(so)), QubitMask(), -0.5);
  }
  n.normalize();
  return n;
}

PauliSum sz_operator(const OrbitalOrdering &ordering) {
  PauliSum s(ordering.n_qubits());
  const int norb = ordering.n_so() / 2;
  for (int p = 0; p < norb; ++p) {
    // n_a/2 - n_b/2 = (-Z_a + Z_b)/4
    s.add(QubitMask::bit(ordering.qubit(p)), QubitMask(), -0.25);
    s.add(QubitMask::bit(ordering.qubit(p + norb)), QubitMask(), 0.25);
  }
  s.normalize();
  return s;
}

}  // namespace lasucc
