#include "lasucc/ucc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "lasucc/errors.hpp"
#include "lasucc/optimize.hpp"

namespace lasucc {

namespace {

// All spin cases of a spatial index list: each row swaps some entries to beta
// (+norb). Rows are deduplicated by their sorted content and returned in
// ascending order of that content; m counts the beta entries.
void spin_cases(const std::vector<int> &p, int norb, std::vector<std::vector<int>> &rows_out,
                std::vector<int> &m_out) {
  std::vector<std::vector<int>> rows{p};
  std::vector<int> m{0};
  for (std::size_t e = 0; e < p.size(); ++e) {
    const std::size_t n = rows.size();
    for (std::size_t r = 0; r < n; ++r) {
      auto q = rows[r];
      q[e] += norb;
      rows.push_back(std::move(q));
      m.push_back(m[r] + 1);
    }
  }
  std::map<std::vector<int>, std::size_t> first;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto key = rows[r];
    std::sort(key.begin(), key.end());
    first.emplace(std::move(key), r);
  }
  rows_out.clear();
  m_out.clear();
  for (const auto &[key, r] : first) {
    rows_out.push_back(rows[r]);
    m_out.push_back(m[r]);
  }
}

bool has_repeat(const std::vector<int> &v) {
  return std::set<int>(v.begin(), v.end()).size() < v.size();
}

std::vector<int> fragment_orbitals(const FragmentLayout &layout, const std::vector<int> &frags) {
  std::vector<int> orbs;
  for (int k : frags) {
    if (k < 0 || k >= layout.n_fragments()) throw IndexError("fragment index out of range");
    const auto &o = layout.fragment(k).orbitals;
    orbs.insert(orbs.end(), o.begin(), o.end());
  }
  return orbs;
}

// Spin-restricted singles occupied -> virtual, then occupied/virtual doubles
// in the pairwise-combination order of the Hartree-Fock UCCSD runs.
void append_singles(UccAnsatz &u, const OccupancySplit &s, int norb) {
  std::set<int> occ(s.occupied_alpha.begin(), s.occupied_alpha.end());
  occ.insert(s.occupied_beta.begin(), s.occupied_beta.end());
  std::set<int> vir(s.virtual_alpha.begin(), s.virtual_alpha.end());
  vir.insert(s.virtual_beta.begin(), s.virtual_beta.end());
  for (int i : occ)
    for (int a : vir) {
      if (a == i) continue;
      const int g = static_cast<int>(u.generators.size());
      u.generators.push_back({{a}, {i}});
      u.generators.push_back({{a + norb}, {i + norb}});
      u.symtab.push_back({g, g + 1});
    }
}

void append_occ_virt_doubles(UccAnsatz &u, const OccupancySplit &s, int norb) {
  std::vector<std::pair<int, int>> singles;
  for (int i : s.occupied_alpha)
    for (int a : s.virtual_alpha) singles.emplace_back(i, a);
  for (int i : s.occupied_beta)
    for (int a : s.virtual_beta) singles.emplace_back(i + norb, a + norb);
  std::set<std::set<int>> seen;
  for (std::size_t x = 0; x < singles.size(); ++x)
    for (std::size_t y = x + 1; y < singles.size(); ++y) {
      const auto [i1, a1] = singles[x];
      const auto [i2, a2] = singles[y];
      std::set<int> idx{i1, a1, i2, a2};
      if (idx.size() != 4 || !seen.insert(idx).second) continue;
      u.symtab.push_back({static_cast<int>(u.generators.size())});
      u.generators.push_back({{a1, a2}, {i1, i2}});
    }
}

std::uint64_t fnv1a(std::uint64_t h, std::int64_t v) {
  for (int b = 0; b < 8; ++b) {
    h ^= static_cast<std::uint64_t>(v >> (8 * b)) & 0xffu;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

void UccAnsatz::validate(int n_so) const {
  std::vector<int> seen(generators.size(), 0);
  for (const auto &grp : symtab) {
    if (grp.empty()) throw ContractError("empty amplitude group");
    for (int g : grp) {
      if (g < 0 || g >= static_cast<int>(generators.size()))
        throw ContractError("amplitude group references a missing generator");
      ++seen[g];
    }
  }
  for (std::size_t g = 0; g < generators.size(); ++g) {
    if (seen[g] != 1) throw ContractError("generator not in exactly one amplitude group");
    const auto &gen = generators[g];
    if (gen.cre.size() != gen.ann.size() || gen.cre.empty())
      throw ContractError("generator needs equal, nonzero creation and annihilation counts");
    for (const auto *v : {&gen.cre, &gen.ann})
      for (int p : *v)
        if (p < 0 || p >= n_so) throw IndexError("generator spin orbital out of range");
  }
}

UccAnsatz build_uccsd_window(const std::vector<int> &orbitals, int norb) {
  if (orbitals.empty()) throw ContractError("UCCSD window needs at least one orbital");
  const int n = static_cast<int>(orbitals.size());
  for (int p : orbitals)
    if (p < 0 || p >= norb) throw IndexError("window orbital out of range");
  auto global = [&](int local) { return orbitals[local % n] + (local / n) * norb; };
  auto globals = [&](const std::vector<int> &v) {
    std::vector<int> out;
    for (int l : v) out.push_back(global(l));
    return out;
  };

  UccAnsatz u;
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < a; ++i) {
      const int g = static_cast<int>(u.generators.size());
      u.generators.push_back({{global(a)}, {global(i)}});
      u.generators.push_back({{global(a + n)}, {global(i + n)}});
      u.symtab.push_back({g, g + 1});
    }
  std::vector<std::vector<int>> pq;
  for (int p = 0; p < n; ++p)
    for (int q = 0; q <= p; ++q) pq.push_back({p, q});
  std::vector<std::vector<int>> ca, ci;
  std::vector<int> ma, mi;
  for (std::size_t x = 0; x < pq.size(); ++x)
    for (std::size_t y = x; y < pq.size(); ++y) {
      const auto &a = pq[x], &i = pq[y];
      spin_cases(a, n, ca, ma);
      spin_cases(i, n, ci, mi);
      for (std::size_t kab = 0; kab < ca.size(); ++kab) {
        if (has_repeat(ca[kab])) continue;  // nilpotent
        for (std::size_t kij = 0; kij < ci.size(); ++kij) {
          if (mi[kij] != ma[kab]) continue;  // breaks Sz
          if (ca[kab] == ci[kij]) continue;  // undefined
          if (a == i && kab > kij) continue;  // redundant
          if (has_repeat(ci[kij])) continue;  // nilpotent
          u.symtab.push_back({static_cast<int>(u.generators.size())});
          u.generators.push_back({globals(ca[kab]), globals(ci[kij])});
        }
      }
    }
  return u;
}

UccAnsatz build_uccsd_window(const FragmentLayout &layout, const std::vector<int> &fragments) {
  auto u = build_uccsd_window(fragment_orbitals(layout, fragments), layout.norb());
  u.window = fragments;
  return u;
}

std::vector<UccAnsatz> build_mlocal_correlators(const FragmentLayout &layout) {
  std::vector<UccAnsatz> out;
  const int m = layout.m();
  for (int k = 0; k + m <= layout.n_fragments(); ++k) {
    std::vector<int> frags;
    for (int j = 0; j < m; ++j) frags.push_back(k + j);
    out.push_back(build_uccsd_window(layout, frags));
  }
  return out;
}

OrbitalOrdering occupation_blocked_ordering(const FragmentLayout &layout) {
  std::vector<int> all(layout.n_fragments());
  std::iota(all.begin(), all.end(), 0);
  const OccupancySplit s = aufbau_split(layout, all);
  const int norb = layout.norb();
  std::vector<int> perm(2 * norb, -1);
  int q = 0;
  for (int p : s.occupied_alpha) perm[p] = q++;
  for (int p : s.virtual_alpha) perm[p] = q++;
  for (int p : s.occupied_beta) perm[p + norb] = q++;
  for (int p : s.virtual_beta) perm[p + norb] = q++;
  return OrbitalOrdering(std::move(perm), OrderingMode::Custom);
}

OccupancySplit aufbau_split(const FragmentLayout &layout, const std::vector<int> &fragments) {
  OccupancySplit s;
  for (int k : fragments) {
    if (k < 0 || k >= layout.n_fragments()) throw IndexError("fragment index out of range");
    const auto &f = layout.fragment(k);
    for (int j = 0; j < static_cast<int>(f.orbitals.size()); ++j) {
      (j < f.sector.n_alpha ? s.occupied_alpha : s.virtual_alpha).push_back(f.orbitals[j]);
      (j < f.sector.n_beta ? s.occupied_beta : s.virtual_beta).push_back(f.orbitals[j]);
    }
  }
  return s;
}

UccAnsatz build_las_vqe_ansatz(const FragmentLayout &layout) {
  std::vector<int> all(layout.n_fragments());
  for (int k = 0; k < layout.n_fragments(); ++k) all[k] = k;
  UccAnsatz u;
  append_singles(u, aufbau_split(layout, all), layout.norb());
  for (int k = 0; k < layout.n_fragments(); ++k)
    append_occ_virt_doubles(u, aufbau_split(layout, {k}), layout.norb());
  u.window = all;
  return u;
}

UccAnsatz build_occ_virt_uccsd(const FragmentLayout &layout) {
  std::vector<int> all(layout.n_fragments());
  for (int k = 0; k < layout.n_fragments(); ++k) all[k] = k;
  const auto s = aufbau_split(layout, all);
  UccAnsatz u;
  append_singles(u, s, layout.norb());
  append_occ_virt_doubles(u, s, layout.norb());
  u.window = all;
  return u;
}

std::uint64_t aufbau_determinant(const FragmentLayout &layout, const OrbitalOrdering &ordering) {
  if (ordering.n_qubits() > 63) throw CapacityError("determinant does not fit in 63 qubits");
  std::uint64_t bits = 0;
  for (const auto &f : layout.fragments()) {
    for (int j = 0; j < f.sector.n_alpha; ++j) bits |= std::uint64_t{1} << ordering.qubit(f.orbitals[j]);
    for (int j = 0; j < f.sector.n_beta; ++j)
      bits |= std::uint64_t{1} << ordering.qubit(f.orbitals[j] + layout.norb());
  }
  return bits;
}

PauliSum generator_pauli_sum(const ExcitationGenerator &g, const OrbitalOrdering &ordering) {
  std::vector<LadderOp> ops;
  for (int p : g.cre) ops.push_back({p, true});
  for (auto it = g.ann.rbegin(); it != g.ann.rend(); ++it) ops.push_back({*it, false});
  const PauliSum a = jordan_wigner_term(ops, ordering);
  PauliSum t(ordering.n_qubits());
  for (const auto &[key, c] : a.terms()) t.add(key.z, key.x, c - std::conj(c));
  t.normalize();
  return t;
}

std::string generator_manifest_hash(const std::vector<UccAnsatz> &correlators) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto &u : correlators) {
    h = fnv1a(h, -1);
    for (const auto &g : u.generators) {
      h = fnv1a(h, -2);
      for (int p : g.cre) h = fnv1a(h, p);
      h = fnv1a(h, -3);
      for (int p : g.ann) h = fnv1a(h, p);
    }
    for (const auto &grp : u.symtab) {
      h = fnv1a(h, -4);
      for (int g : grp) h = fnv1a(h, g);
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CorrelatorCircuit::CorrelatorCircuit(std::vector<UccAnsatz> correlators,
                                     const OrbitalOrdering &ordering)
    : correlators_(std::move(correlators)),
      n_qubits_(ordering.n_qubits()),
      cache_(std::make_shared<SectorCache>()) {
  if (n_qubits_ > 63) throw CapacityError("correlator register exceeds 63 qubits");
  const std::uint64_t full = (std::uint64_t{1} << n_qubits_) - 1;
  for (const auto &u : correlators_) {
    u.validate(ordering.n_so());
    std::vector<int> param_of(u.generators.size());
    for (std::size_t grp = 0; grp < u.symtab.size(); ++grp)
      for (int g : u.symtab[grp]) param_of[g] = n_params_ + static_cast<int>(grp);
    for (std::size_t gi = 0; gi < u.generators.size(); ++gi) {
      const auto &g = u.generators[gi];
      Compiled c;
      c.param = param_of[gi];
      for (auto it = g.ann.begin(); it != g.ann.end(); ++it) {
        const int q = ordering.qubit(*it);
        c.a_mask |= std::uint64_t{1} << q;
        c.ops.push_back(q);
      }
      for (auto it = g.cre.rbegin(); it != g.cre.rend(); ++it) {
        const int q = ordering.qubit(*it);
        c.c_mask |= std::uint64_t{1} << q;
        c.ops.push_back(q);
      }
      if (has_repeat(g.cre) || has_repeat(g.ann) || c.a_mask == c.c_mask)
        throw ContractError("generator is nilpotent or has no free direction");
      c.free_mask = full & ~(c.a_mask | c.c_mask);
      const PauliSum t = generator_pauli_sum(g, ordering);
      for (const auto &[key, coeff] : t.terms())
        c.factors.push_back({key.z, key.x, coeff});
      gens_.push_back(std::move(c));
    }
    n_params_ += u.n_params();
  }
}

void CorrelatorCircuit::check(const Statevector &s, const Eigen::VectorXd &x) const {
  if (s.n_qubits() != n_qubits_) throw DimensionError("state and correlator registers differ");
  if (x.size() != n_params_)
    throw DimensionError("expected " + std::to_string(n_params_) + " amplitudes, got " +
                         std::to_string(x.size()));
}

namespace {

// Sign of A|i> where the ops act left to right; A|i> = sign |j>.
inline int excitation_sign(std::uint64_t i, const std::vector<int> &ops) {
  int parity = 0;
  for (int op : ops) {
    const std::uint64_t bit = std::uint64_t{1} << op;
    parity ^= std::popcount(i & (bit - 1)) & 1;
    i ^= bit;
  }
  return parity ? -1 : 1;
}

}  // namespace

void CorrelatorCircuit::rotate(Eigen::VectorXcd &v, const Compiled &g, double angle) const {
  if (angle == 0.0) return;
  const double c = std::cos(angle), s = std::sin(angle);
  const std::uint64_t keep = ~g.a_mask;
  std::uint64_t sub = 0;
  do {
    const std::uint64_t i = g.a_mask | sub;
    const std::uint64_t j = (i & keep) | g.c_mask;
    const double ss = excitation_sign(i, g.ops) * s;
    const cplx vi = v[i], vj = v[j];
    v[i] = c * vi - ss * vj;
    v[j] = c * vj + ss * vi;
    sub = (sub - g.free_mask) & g.free_mask;
  } while (sub != 0);
}

void CorrelatorCircuit::rotate_pauli(Eigen::VectorXcd &v, const Compiled &g, double angle) const {
  if (angle == 0.0) return;
  // exp(angle * sum_k i c_k P_k) = prod_k exp(-i (-angle c_k) P_k); factors commute.
  for (const auto &t : g.factors)
    apply_pauli_rotation(v, t.z.low(), t.x.low(), -angle * t.coeff.imag());
}

cplx CorrelatorCircuit::matrix_element(const Eigen::VectorXcd &l, const Eigen::VectorXcd &r,
                                       const Compiled &g) const {
  cplx acc = 0.0;
  const std::uint64_t keep = ~g.a_mask;
  std::uint64_t sub = 0;
  do {
    const std::uint64_t i = g.a_mask | sub;
    const std::uint64_t j = (i & keep) | g.c_mask;
    const double s = excitation_sign(i, g.ops);
    acc += s * (std::conj(l[j]) * r[i] - std::conj(l[i]) * r[j]);
    sub = (sub - g.free_mask) & g.free_mask;
  } while (sub != 0);
  return acc;
}

void CorrelatorCircuit::apply(Statevector &state, const Eigen::VectorXd &x,
                              CorrelatorKernel kernel) const {
  check(state, x);
  auto &v = state.amplitudes();
  for (const auto &g : gens_) {
    if (kernel == CorrelatorKernel::Excitation)
      rotate(v, g, x[g.param]);
    else
      rotate_pauli(v, g, x[g.param]);
  }
}

int HamiltonianView::n_qubits() const {
  return pauli_ ? pauli_->n_qubits() : sector_->basis().n_qubits();
}

Eigen::VectorXcd HamiltonianView::apply(const Eigen::VectorXcd &v) const {
  if (pauli_) return apply_pauli_sum(*pauli_, v);
  const SectorBasis &b = sector_->basis();
  return b.embed(sector_->apply(b.restrict(Statevector(b.n_qubits(), v)))).amplitudes();
}

double HamiltonianView::expectation(const Statevector &s) const {
  return pauli_ ? lasucc::expectation(s, *pauli_) : sector_->expectation(s);
}

bool CorrelatorCircuit::conserves(const QubitMask &alpha, const QubitMask &beta) const {
  const QubitMask am = alpha, bm = beta;
  for (const auto &g : gens_) {
    const QubitMask c(g.c_mask), a(g.a_mask);
    if ((c & am).popcount() != (a & am).popcount() || (c & bm).popcount() != (a & bm).popcount())
      return false;
  }
  return true;
}

struct CorrelatorCircuit::SectorCache {
  std::mutex mutex;
  std::vector<std::unique_ptr<SectorPairs>> entries;
};

const CorrelatorCircuit::SectorPairs *CorrelatorCircuit::sector_pairs(
    const HamiltonianView &h, const Statevector &reference) const {
  if (!h.sector() || !cache_) return nullptr;
  const SectorBasis &b = h.sector()->basis();
  if (b.n_qubits() != n_qubits_ || reference.n_qubits() != n_qubits_) return nullptr;
  const double full = reference.amplitudes().squaredNorm();
  if (std::abs(b.restrict(reference).squaredNorm() - full) > 1e-12 * std::max(1.0, full))
    return nullptr;
  const std::uint64_t alpha = b.alpha_qubits().low(), beta = b.beta_qubits().low();
  std::lock_guard lock(cache_->mutex);
  for (const auto &e : cache_->entries)
    if (e->alpha == alpha && e->beta == beta && e->sector == b.sector()) return e.get();
  if (!conserves(b.alpha_qubits(), b.beta_qubits())) return nullptr;
  auto p = std::make_unique<SectorPairs>();
  p->alpha = alpha;
  p->beta = beta;
  p->sector = b.sector();
  p->offset.reserve(gens_.size() + 1);
  p->offset.push_back(0);
  const auto &states = b.states();
  for (const auto &g : gens_) {
    const std::uint64_t touched = g.a_mask | g.c_mask;
    for (std::size_t k = 0; k < states.size(); ++k) {
      const std::uint64_t i = states[k];
      if ((i & touched) != g.a_mask) continue;
      p->i.push_back(static_cast<std::int32_t>(k));
      p->j.push_back(static_cast<std::int32_t>(b.index_of((i & ~g.a_mask) | g.c_mask)));
      p->sign.push_back(excitation_sign(i, g.ops));
    }
    p->offset.push_back(p->i.size());
  }
  cache_->entries.push_back(std::move(p));
  return cache_->entries.back().get();
}

void CorrelatorCircuit::rotate(Eigen::VectorXcd &v, const SectorPairs &p, std::size_t g,
                               double angle) const {
  if (angle == 0.0) return;
  const double c = std::cos(angle), s = std::sin(angle);
  for (std::size_t k = p.offset[g]; k < p.offset[g + 1]; ++k) {
    const double ss = p.sign[k] * s;
    const cplx vi = v[p.i[k]], vj = v[p.j[k]];
    v[p.i[k]] = c * vi - ss * vj;
    v[p.j[k]] = c * vj + ss * vi;
  }
}

cplx CorrelatorCircuit::matrix_element(const Eigen::VectorXcd &l, const Eigen::VectorXcd &r,
                                       const SectorPairs &p, std::size_t g) const {
  cplx acc = 0.0;
  for (std::size_t k = p.offset[g]; k < p.offset[g + 1]; ++k) {
    const int i = p.i[k], j = p.j[k];
    acc += p.sign[k] * (std::conj(l[j]) * r[i] - std::conj(l[i]) * r[j]);
  }
  return acc;
}

double CorrelatorCircuit::energy(const Statevector &reference, const HamiltonianView &h,
                                 const Eigen::VectorXd &x) const {
  if (const SectorPairs *p = sector_pairs(h, reference)) {
    check(reference, x);
    Eigen::VectorXcd v = h.sector()->basis().restrict(reference);
    for (std::size_t g = 0; g < gens_.size(); ++g) rotate(v, *p, g, x[gens_[g].param]);
    return h.sector()->expectation(v);
  }
  Statevector s = reference;
  apply(s, x);
  return h.expectation(s);
}

Eigen::VectorXd CorrelatorCircuit::gradient(const Statevector &reference, const HamiltonianView &h,
                                            const Eigen::VectorXd &x, double *energy) const {
  if (const SectorPairs *p = sector_pairs(h, reference)) {
    check(reference, x);
    Eigen::VectorXcd phi = h.sector()->basis().restrict(reference);
    for (std::size_t g = 0; g < gens_.size(); ++g) rotate(phi, *p, g, x[gens_[g].param]);
    Eigen::VectorXcd lambda = h.sector()->apply(phi);
    if (energy) *energy = std::real(phi.dot(lambda));
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_params_);
    for (std::size_t g = gens_.size(); g-- > 0;) {
      const double a = x[gens_[g].param];
      grad[gens_[g].param] += 2.0 * std::real(matrix_element(lambda, phi, *p, g));
      rotate(phi, *p, g, -a);
      rotate(lambda, *p, g, -a);
    }
    return grad;
  }
  Statevector s = reference;
  apply(s, x);
  Eigen::VectorXcd phi = s.amplitudes();
  Eigen::VectorXcd lambda = h.apply(phi);
  if (energy) *energy = std::real(phi.dot(lambda));
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_params_);
  for (auto it = gens_.rbegin(); it != gens_.rend(); ++it) {
    grad[it->param] += 2.0 * std::real(matrix_element(lambda, phi, *it));
    rotate(phi, *it, -x[it->param]);
    rotate(lambda, *it, -x[it->param]);
  }
  return grad;
}

Eigen::VectorXd CorrelatorCircuit::fd_gradient(const Statevector &reference,
                                               const HamiltonianView &h,
                                               const Eigen::VectorXd &x, double step) const {
  Eigen::VectorXd grad(n_params_);
  Eigen::VectorXd xp = x;
  for (int p = 0; p < n_params_; ++p) {
    xp[p] = x[p] + step;
    const double up = energy(reference, h, xp);
    xp[p] = x[p] - step;
    const double dn = energy(reference, h, xp);
    xp[p] = x[p];
    grad[p] = (up - dn) / (2.0 * step);
  }
  return grad;
}

void apply_correlator(Statevector &state, const UccAnsatz &ansatz, const Eigen::VectorXd &x,
                      const OrbitalOrdering &ordering, CorrelatorKernel kernel) {
  CorrelatorCircuit({ansatz}, ordering).apply(state, x, kernel);
}

VqeResult vqe_minimize(const Statevector &reference, const CorrelatorCircuit &circuit,
                       const HamiltonianView &h, const VqeOptions &options) {
  if (std::abs(reference.norm() - 1.0) > 1e-10)
    throw ContractError("VQE reference state is not normalized");
  if (h.n_qubits() != reference.n_qubits())
    throw DimensionError("Hamiltonian and reference registers differ");
  if (const SectorHamiltonian *sh = h.sector()) {
    const SectorBasis &b = sh->basis();
    if (std::abs(b.restrict(reference).squaredNorm() - 1.0) > 1e-10)
      throw SectorError("VQE reference has weight outside the Hamiltonian's sector");
    if (!circuit.conserves(b.alpha_qubits(), b.beta_qubits()))
      throw ContractError("correlator changes the particle sector of the Hamiltonian");
  }
  VqeResult out;
  out.reference_energy = h.expectation(reference);
  if (circuit.n_params() == 0) {
    out.energy = out.reference_energy;
    out.x = Eigen::VectorXd();
    return out;
  }
  Objective f = [&](const Eigen::VectorXd &x, Eigen::VectorXd &g) {
    if (options.gradient == GradientMode::Adjoint) {
      double e = 0.0;
      g = circuit.gradient(reference, h, x, &e);
      return e;
    }
    g = circuit.fd_gradient(reference, h, x, options.fd_step);
    return circuit.energy(reference, h, x);
  };
  BfgsOptions bo;
  bo.value_tolerance = options.energy_tolerance;
  bo.gradient_tolerance = options.gradient_tolerance;
  bo.max_iterations = options.max_iterations;
  auto r = bfgs_minimize(f, Eigen::VectorXd::Zero(circuit.n_params()), bo);
  out.energy = r.value;
  out.x = r.x;
  out.iterations = r.iterations;
  out.evaluations = r.evaluations;
  out.gradient_norm = r.gradient.lpNorm<Eigen::Infinity>();
  if (!r.converged)
    throw OptimizationError(
        "VQE did not converge after " + std::to_string(r.iterations) +
            " iterations (|g|max = " + std::to_string(out.gradient_norm) + ")",
        r.value, std::vector<double>(r.x.data(), r.x.data() + r.x.size()));
  return out;
}

}  // namespace lasucc
