#include "lasucc/fermion.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "lasucc/errors.hpp"

namespace lasucc {

namespace {

constexpr cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

int popc(const QubitMask &m) { return m.popcount(); }

// Pauli strings over a term's own (at most 64) distinct qubits.
struct LocalString {
  std::uint64_t z;
  std::uint64_t x;
  cplx c;
};

int local_phase(std::uint64_t z1, std::uint64_t x1, std::uint64_t z2,
                std::uint64_t x2) {
  const int k = std::popcount(z1 & x1) + std::popcount(z2 & x2) +
                2 * std::popcount(z1 & x2) -
                std::popcount((z1 ^ z2) & (x1 ^ x2));
  return ((k % 4) + 4) % 4;
}

// Expands a product of ladder operators acting on local qubit indices.
// Unmerged; up to 2^n entries.
void local_expand(const int *loc, const bool *create, int n, cplx scale,
                  std::vector<LocalString> &out) {
  out.clear();
  out.push_back({0, 0, scale});
  thread_local std::vector<LocalString> next;
  for (int a = 0; a < n; ++a) {
    const std::uint64_t bit = std::uint64_t{1} << loc[a];
    const std::uint64_t below = bit - 1;
    // Z_{<j} X_j and Z_{<j} Y_j; both factors commute, so no extra phase.
    const LocalString ops[2] = {
        {below, bit, cplx(0.5, 0.0)},
        {below | bit, bit, create[a] ? cplx(0.0, -0.5) : cplx(0.0, 0.5)}};
    next.clear();
    for (const auto &s : out)
      for (const auto &o : ops) {
        const int k = local_phase(s.z, s.x, o.z, o.x);
        next.push_back({s.z ^ o.z, s.x ^ o.x, s.c * o.c * kIPow[k]});
      }
    out.swap(next);
  }
}

void merge_local(std::vector<LocalString> &v) {
  std::sort(v.begin(), v.end(), [](const LocalString &a, const LocalString &b) {
    return a.x != b.x ? a.x < b.x : a.z < b.z;
  });
  std::size_t w = 0;
  for (std::size_t r = 0; r < v.size();) {
    LocalString acc = v[r];
    std::size_t e = r + 1;
    while (e < v.size() && v[e].x == acc.x && v[e].z == acc.z) acc.c += v[e++].c;
    if (acc.c != cplx(0.0, 0.0)) v[w++] = acc;
    r = e;
  }
  v.resize(w);
}

QubitMask embed(std::uint64_t local, const int *qubits) {
  QubitMask m;
  while (local) {
    const int j = std::countr_zero(local);
    m.set(qubits[j]);
    local &= local - 1;
  }
  return m;
}

// Resolves a term's qubits into a sorted distinct list, the local index of
// each operator, and the Z filler on qubits outside the list.
struct TermFrame {
  std::array<int, 64> qubits{};
  int n_local = 0;
  std::vector<int> loc;
  std::vector<char> create;
  QubitMask filler;
};

void frame_term(const LadderOp *ops, int n_ops, const OrbitalOrdering &ordering,
                TermFrame &f) {
  int qs[64];
  if (n_ops > 64) throw ContractError("ladder product longer than 64 operators");
  f.filler = QubitMask();
  for (int a = 0; a < n_ops; ++a) {
    if (ops[a].orbital < 0 || ops[a].orbital >= ordering.n_so())
      throw IndexError("spin-orbital index " + std::to_string(ops[a].orbital) +
                       " outside the ordering");
    qs[a] = ordering.qubit(ops[a].orbital);
    f.filler ^= QubitMask::below(qs[a]);
  }
  std::copy(qs, qs + n_ops, f.qubits.begin());
  std::sort(f.qubits.begin(), f.qubits.begin() + n_ops);
  f.n_local = static_cast<int>(
      std::unique(f.qubits.begin(), f.qubits.begin() + n_ops) - f.qubits.begin());
  QubitMask support;
  for (int j = 0; j < f.n_local; ++j) support.set(f.qubits[j]);
  f.filler = f.filler & (support ^ QubitMask::below(QubitMask::kMaxQubits));
  f.loc.resize(n_ops);
  f.create.resize(n_ops);
  for (int a = 0; a < n_ops; ++a) {
    f.loc[a] = static_cast<int>(
        std::lower_bound(f.qubits.begin(), f.qubits.begin() + f.n_local, qs[a]) -
        f.qubits.begin());
    f.create[a] = ops[a].create;
  }
}

// Collects strings of one x-mask group, merges and emits them.
class Batch {
 public:
  void add(const QubitMask &z, const QubitMask &x, cplx c) {
    items_.push_back({PauliKey{z, x}, c});
  }
  void add_local(const std::vector<LocalString> &v, const TermFrame &f) {
    for (const auto &s : v)
      add(embed(s.z, f.qubits.data()) ^ f.filler, embed(s.x, f.qubits.data()),
          s.c);
  }
  void flush(const RealPauliVisitor &sink, double tol) {
    std::sort(items_.begin(), items_.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    for (std::size_t r = 0; r < items_.size();) {
      cplx acc = items_[r].second;
      std::size_t e = r + 1;
      while (e < items_.size() && items_[e].first == items_[r].first)
        acc += items_[e++].second;
      emit(sink, items_[r].first.z, items_[r].first.x, acc, tol);
      r = e;
    }
    items_.clear();
  }
  static void emit(const RealPauliVisitor &sink, const QubitMask &z,
                   const QubitMask &x, cplx c, double tol) {
    if (std::abs(c.imag()) > 1e-10 * std::max(1.0, std::abs(c.real())))
      throw ContractError("mapped Hamiltonian has a complex Pauli coefficient");
    if (std::abs(c.real()) >= tol) sink(z, x, c.real());
  }

 private:
  std::vector<std::pair<PauliKey, cplx>> items_;
};

}  // namespace

int pauli_product_phase(const QubitMask &z1, const QubitMask &x1,
                        const QubitMask &z2, const QubitMask &x2) {
  const int k = popc(z1 & x1) + popc(z2 & x2) + 2 * popc(z1 & x2) -
                popc((z1 ^ z2) & (x1 ^ x2));
  return ((k % 4) + 4) % 4;
}

std::string pauli_label(const QubitMask &z, const QubitMask &x, int n_qubits) {
  std::string s(n_qubits, 'I');
  for (int q = 0; q < n_qubits; ++q) {
    const bool zq = z.test(q), xq = x.test(q);
    s[q] = zq ? (xq ? 'Y' : 'Z') : (xq ? 'X' : 'I');
  }
  return s;
}

PauliKey parse_pauli_label(const std::string &label) {
  if (static_cast<int>(label.size()) > QubitMask::kMaxQubits)
    throw CapacityError("Pauli label longer than 128 qubits");
  PauliKey k;
  for (int q = 0; q < static_cast<int>(label.size()); ++q) {
    switch (label[q]) {
      case 'I': break;
      case 'X': k.x.set(q); break;
      case 'Y': k.x.set(q); k.z.set(q); break;
      case 'Z': k.z.set(q); break;
      default:
        throw ParseError(std::string("invalid Pauli character '") + label[q] +
                         "'");
    }
  }
  return k;
}

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0 || n_qubits > QubitMask::kMaxQubits)
    throw CapacityError("PauliSum supports at most 128 qubits");
}

PauliSum PauliSum::identity(int n_qubits, cplx c) {
  PauliSum s(n_qubits);
  s.add(QubitMask(), QubitMask(), c);
  return s;
}

std::vector<PauliTerm> PauliSum::term_list() const {
  std::vector<PauliTerm> out;
  out.reserve(terms_.size());
  for (const auto &[k, c] : terms_) out.push_back({k.z, k.x, c});
  return out;
}

cplx PauliSum::coeff(const QubitMask &z, const QubitMask &x) const {
  auto it = terms_.find(PauliKey{z, x});
  return it == terms_.end() ? cplx(0.0, 0.0) : it->second;
}

void PauliSum::add(const QubitMask &z, const QubitMask &x, cplx c) {
  if ((z | x).highest() >= n_qubits_)
    throw DimensionError("Pauli string exceeds the register");
  terms_[PauliKey{z, x}] += c;
}

PauliSum &PauliSum::operator+=(const PauliSum &o) {
  if (o.n_qubits_ != n_qubits_)
    throw DimensionError("adding PauliSums on different registers");
  for (const auto &[k, c] : o.terms_) terms_[k] += c;
  return *this;
}

PauliSum &PauliSum::operator*=(cplx s) {
  for (auto &[k, c] : terms_) c *= s;
  return *this;
}

PauliSum PauliSum::operator+(const PauliSum &o) const {
  PauliSum r = *this;
  r += o;
  return r;
}

PauliSum PauliSum::operator*(const PauliSum &o) const {
  if (o.n_qubits_ != n_qubits_)
    throw DimensionError("multiplying PauliSums on different registers");
  PauliSum r(n_qubits_);
  for (const auto &[k1, c1] : terms_)
    for (const auto &[k2, c2] : o.terms_) {
      const int ph = pauli_product_phase(k1.z, k1.x, k2.z, k2.x);
      r.terms_[PauliKey{k1.z ^ k2.z, k1.x ^ k2.x}] += c1 * c2 * kIPow[ph];
    }
  return r;
}

void PauliSum::normalize(double tol) {
  std::erase_if(terms_, [tol](const auto &kv) { return std::abs(kv.second) < tol; });
}

double PauliSum::max_imag() const {
  double m = 0.0;
  for (const auto &[k, c] : terms_) m = std::max(m, std::abs(c.imag()));
  return m;
}

int PauliSum::max_weight() const {
  int w = 0;
  for (const auto &[k, c] : terms_) w = std::max(w, (k.z | k.x).popcount());
  return w;
}

Eigen::MatrixXcd PauliSum::to_dense() const {
  if (n_qubits_ > 14) throw CapacityError("dense Pauli matrix limited to 14 qubits");
  const std::uint64_t dim = std::uint64_t{1} << n_qubits_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto &[k, c] : terms_) {
    const std::uint64_t z = k.z.low(), x = k.x.low();
    const cplx base = c * kIPow[std::popcount(z & x) % 4];
    for (std::uint64_t j = 0; j < dim; ++j)
      m(j ^ x, j) += (std::popcount(z & j) & 1) ? -base : base;
  }
  return m;
}

std::string PauliSum::to_text() const {
  std::vector<std::pair<std::string, double>> lines;
  for (const auto &[k, c] : terms_) {
    if (std::abs(c.imag()) > 1e-12)
      throw ContractError("text serialization requires real coefficients");
    lines.emplace_back(pauli_label(k.z, k.x, n_qubits_), c.real());
  }
  std::sort(lines.begin(), lines.end());
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto &[label, c] : lines) os << c << ' ' << label << '\n';
  return os.str();
}

PauliSum PauliSum::from_text(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  int n = -1;
  std::vector<std::pair<PauliKey, double>> items;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string coeff, label, extra;
    if (!(ls >> coeff)) continue;
    if (!(ls >> label) || (ls >> extra))
      throw ParseError("expected 'coeff label' in Pauli text: " + line);
    double c = 0.0;
    try {
      std::size_t used = 0;
      c = std::stod(coeff, &used);
      if (used != coeff.size()) throw std::invalid_argument(coeff);
    } catch (const std::exception &) {
      throw ParseError("non-numeric Pauli coefficient '" + coeff + "'");
    }
    if (n < 0) n = static_cast<int>(label.size());
    if (static_cast<int>(label.size()) != n)
      throw ParseError("Pauli labels of differing length");
    items.emplace_back(parse_pauli_label(label), c);
  }
  PauliSum s(std::max(n, 0));
  for (const auto &[k, c] : items) s.add(k.z, k.x, c);
  return s;
}

const char *ordering_mode_name(OrderingMode mode) {
  switch (mode) {
    case OrderingMode::BlockedSpin: return "blocked_spin";
    case OrderingMode::FragmentInterleaved: return "fragment_interleaved";
    case OrderingMode::Custom: return "custom";
  }
  return "custom";
}

OrderingMode parse_ordering_mode(const std::string &name) {
  if (name == "blocked_spin") return OrderingMode::BlockedSpin;
  if (name == "fragment_interleaved") return OrderingMode::FragmentInterleaved;
  throw ConfigError("unknown ordering '" + name +
                    "' (expected blocked_spin or fragment_interleaved)");
}

OrbitalOrdering::OrbitalOrdering(std::vector<int> perm, OrderingMode mode,
                                 int n_qubits)
    : perm_(std::move(perm)), mode_(mode),
      n_qubits_(n_qubits < 0 ? static_cast<int>(perm_.size()) : n_qubits) {
  if (n_qubits_ > QubitMask::kMaxQubits)
    throw CapacityError("orderings support at most 128 qubits");
  std::vector<char> used(n_qubits_, 0);
  for (int q : perm_) {
    if (q < 0 || q >= n_qubits_ || used[q])
      throw OrderingError("orbital ordering is not injective into the register");
    used[q] = 1;
  }
}

OrbitalOrdering OrbitalOrdering::identity(int n_so) {
  std::vector<int> perm(n_so);
  for (int i = 0; i < n_so; ++i) perm[i] = i;
  return OrbitalOrdering(std::move(perm), OrderingMode::BlockedSpin);
}

QubitMask OrbitalOrdering::image(std::uint64_t so_mask) const {
  QubitMask m;
  while (so_mask) {
    m.set(perm_[std::countr_zero(so_mask)]);
    so_mask &= so_mask - 1;
  }
  return m;
}

OrbitalOrdering make_ordering(const FragmentLayout &layout, OrderingMode mode) {
  const int norb = layout.norb();
  switch (mode) {
    case OrderingMode::BlockedSpin:
      return OrbitalOrdering::identity(2 * norb);
    case OrderingMode::FragmentInterleaved: {
      std::vector<int> perm(2 * norb);
      int q = 0;
      for (const auto &f : layout.fragments())
        for (int p : f.orbitals) {
          perm[p] = q++;
          perm[p + norb] = q++;
        }
      return OrbitalOrdering(std::move(perm), mode);
    }
    case OrderingMode::Custom:
      break;
  }
  throw OrderingError("custom orderings are built from an explicit permutation");
}

OrbitalOrdering embed_fragment(const FragmentLayout &layout, int k,
                               const OrbitalOrdering &full) {
  if (k < 0 || k >= layout.n_fragments())
    throw IndexError("fragment index out of range");
  const auto &orbs = layout.fragment(k).orbitals;
  const int nk = static_cast<int>(orbs.size());
  std::vector<int> perm(2 * nk);
  for (int i = 0; i < nk; ++i) {
    perm[i] = full.qubit(orbs[i]);
    perm[i + nk] = full.qubit(orbs[i] + layout.norb());
  }
  return OrbitalOrdering(std::move(perm), full.mode(), full.n_qubits());
}

OrbitalOrdering local_fragment_ordering(int fragment_norb) {
  std::vector<int> perm(2 * fragment_norb);
  for (int i = 0; i < fragment_norb; ++i) {
    perm[i] = 2 * i;
    perm[i + fragment_norb] = 2 * i + 1;
  }
  return OrbitalOrdering(std::move(perm), OrderingMode::FragmentInterleaved);
}

void jordan_wigner_visit(const LadderOp *ops, int n_ops,
                         const OrbitalOrdering &ordering, cplx scale,
                         const PauliVisitor &sink) {
  TermFrame f;
  frame_term(ops, n_ops, ordering, f);
  std::vector<LocalString> v;
  bool cr[64];
  for (int a = 0; a < n_ops; ++a) cr[a] = f.create[a];
  local_expand(f.loc.data(), cr, n_ops, scale, v);
  merge_local(v);
  for (const auto &s : v)
    sink(embed(s.z, f.qubits.data()) ^ f.filler, embed(s.x, f.qubits.data()), s.c);
}

PauliSum jordan_wigner_term(const std::vector<LadderOp> &ops,
                            const OrbitalOrdering &ordering) {
  PauliSum out(ordering.n_qubits());
  jordan_wigner_visit(ops.data(), static_cast<int>(ops.size()), ordering, 1.0,
                      [&](const QubitMask &z, const QubitMask &x, cplx c) {
                        out.add(z, x, c);
                      });
  return out;
}

void visit_hamiltonian(const SpinOrbitalHamiltonian &h,
                       const OrbitalOrdering &ordering,
                       const RealPauliVisitor &sink, double tol) {
  const int n = h.n_so();
  if (ordering.n_so() != n)
    throw DimensionError("ordering covers " + std::to_string(ordering.n_so()) +
                         " spin orbitals, Hamiltonian has " + std::to_string(n));
  Batch batch;
  TermFrame frame;
  std::vector<LocalString> local;
  auto add_term = [&](std::initializer_list<LadderOp> ops, double coeff) {
    if (coeff == 0.0) return;
    const LadderOp *p = ops.begin();
    const int k = static_cast<int>(ops.size());
    frame_term(p, k, ordering, frame);
    bool cr[4];
    for (int a = 0; a < k; ++a) cr[a] = frame.create[a];
    local_expand(frame.loc.data(), cr, k, coeff, local);
    batch.add_local(local, frame);
  };

  // Diagonal group: x mask empty.
  batch.add(QubitMask(), QubitMask(), h.scalar());
  for (int p = 0; p < n; ++p) add_term({cre(p), ann(p)}, h.one_body(p, p));
  for (int p = 0; p < n; ++p)
    for (int r = p + 1; r < n; ++r)
      add_term({cre(p), cre(r), ann(r), ann(p)}, h.two_body(p, r, p, r));
  batch.flush(sink, tol);

  // Odd support {x, y}: one-body hopping plus two-body terms sharing one index.
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) {
      add_term({cre(x), ann(y)}, h.one_body(x, y));
      add_term({cre(y), ann(x)}, h.one_body(y, x));
      for (int c = 0; c < n; ++c) {
        if (c == x || c == y) continue;
        const int p1 = std::min(x, c), r1 = std::max(x, c);
        const int q1 = std::min(y, c), s1 = std::max(y, c);
        add_term({cre(p1), cre(r1), ann(s1), ann(q1)}, h.two_body(p1, r1, q1, s1));
        add_term({cre(q1), cre(s1), ann(r1), ann(p1)}, h.two_body(q1, s1, p1, r1));
      }
      batch.flush(sink, tol);
    }

  // Odd support of four distinct orbitals: all six creation/annihilation
  // splits share qubits and filler, so they merge in a 4-qubit table.
  static constexpr int kSplits[6][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2},
                                        {1, 2, 0, 3}, {1, 3, 0, 2}, {2, 3, 0, 1}};
  std::array<cplx, 256> table;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        for (int d = c + 1; d < n; ++d) {
          const int idx[4] = {a, b, c, d};
          double coef[6];
          bool any = false;
          for (int s = 0; s < 6; ++s) {
            const int p = idx[kSplits[s][0]], r = idx[kSplits[s][1]];
            const int q = idx[kSplits[s][2]], t = idx[kSplits[s][3]];
            coef[s] = h.two_body(p, r, q, t);
            any = any || coef[s] != 0.0;
          }
          if (!any) continue;
          table.fill(cplx(0.0, 0.0));
          bool framed = false;
          for (int s = 0; s < 6; ++s) {
            if (coef[s] == 0.0) continue;
            const int p = idx[kSplits[s][0]], r = idx[kSplits[s][1]];
            const int q = idx[kSplits[s][2]], t = idx[kSplits[s][3]];
            const LadderOp ops[4] = {cre(p), cre(r), ann(t), ann(q)};
            frame_term(ops, 4, ordering, frame);
            framed = true;
            bool cr[4] = {true, true, false, false};
            local_expand(frame.loc.data(), cr, 4, coef[s], local);
            for (const auto &ls : local) table[(ls.z << 4) | ls.x] += ls.c;
          }
          if (!framed) continue;
          for (int key = 0; key < 256; ++key) {
            if (table[key] == cplx(0.0, 0.0)) continue;
            Batch::emit(sink, embed(key >> 4, frame.qubits.data()) ^ frame.filler,
                        embed(key & 0xF, frame.qubits.data()), table[key], tol);
          }
        }
}

PauliSum map_hamiltonian(const SpinOrbitalHamiltonian &h,
                         const OrbitalOrdering &ordering, double tol) {
  PauliSum out(ordering.n_qubits());
  visit_hamiltonian(h, ordering,
                    [&](const QubitMask &z, const QubitMask &x, double c) {
                      out.add(z, x, c);
                    },
                    tol);
  return out;
}

}  // namespace lasucc
