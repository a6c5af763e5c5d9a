#include "lasucc/integrals.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "lasucc/errors.hpp"

namespace lasucc {

namespace {

int pair_index(int i, int j) { return i * (i + 1) / 2 + j; }

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

double parse_number(std::string token, int line_no) {
  // Fortran-style exponents.
  std::replace(token.begin(), token.end(), 'D', 'E');
  std::replace(token.begin(), token.end(), 'd', 'e');
  if (token.find('(') != std::string::npos)
    throw FormatError("complex integrals are not supported (line " +
                      std::to_string(line_no) + ")");
  double value = 0.0;
  const char *first = token.data();
  const char *last = token.data() + token.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw ParseError("non-numeric value '" + token + "' on line " +
                     std::to_string(line_no));
  return value;
}

int parse_index(const std::string &token, int line_no) {
  int value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError("non-integer index '" + token + "' on line " +
                     std::to_string(line_no));
  return value;
}

// Splits the namelist body into KEY=VALUE entries. Values may be
// comma-separated lists (ORBSYM=1,1,2,).
std::map<std::string, std::vector<std::string>> parse_namelist(
    const std::string &body) {
  std::map<std::string, std::vector<std::string>> out;
  std::string current;
  std::string token;
  auto flush_token = [&]() {
    if (token.empty()) return;
    auto eq = token.find('=');
    if (eq != std::string::npos) {
      current = upper(token.substr(0, eq));
      auto rest = token.substr(eq + 1);
      out[current];
      if (!rest.empty()) out[current].push_back(rest);
    } else if (!current.empty()) {
      out[current].push_back(token);
    }
    token.clear();
  };
  for (char c : body) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush_token();
    } else {
      token.push_back(c);
    }
  }
  flush_token();
  return out;
}

}  // namespace

EriKey EriKey::canonical(int p, int q, int r, int s) {
  if (p < q) std::swap(p, q);
  if (r < s) std::swap(r, s);
  if (pair_index(p, q) < pair_index(r, s)) {
    std::swap(p, r);
    std::swap(q, s);
  }
  return {p, q, r, s};
}

IntegralSet::IntegralSet(int norb, int nelec, int ms2)
    : norb_(norb), nelec_(nelec), ms2_(ms2),
      h1_(Eigen::MatrixXd::Zero(norb, norb)) {
  if (norb < 1) throw FormatError("NORB must be >= 1");
  if (nelec < 0 || nelec > 2 * norb)
    throw FormatError("NELEC out of range [0, 2*NORB]");
  if ((nelec + ms2) % 2 != 0 || std::abs(ms2) > nelec)
    throw FormatError("inconsistent NELEC/MS2");
}

void IntegralSet::set_h1(int p, int q, double value) {
  if (p < 0 || q < 0 || p >= norb_ || q >= norb_)
    throw IndexError("one-electron index out of range");
  h1_(p, q) = value;
  h1_(q, p) = value;
}

double IntegralSet::eri(int p, int q, int r, int s) const {
  auto it = h2_.find(EriKey::canonical(p, q, r, s));
  return it == h2_.end() ? 0.0 : it->second;
}

void IntegralSet::set_eri(int p, int q, int r, int s, double value) {
  for (int idx : {p, q, r, s})
    if (idx < 0 || idx >= norb_)
      throw IndexError("two-electron index out of range");
  auto key = EriKey::canonical(p, q, r, s);
  if (value == 0.0)
    h2_.erase(key);
  else
    h2_[key] = value;
}

void IntegralSet::validate() const {
  if (norb_ < 1) throw FormatError("NORB must be >= 1");
  if (nelec_ < 0 || nelec_ > 2 * norb_)
    throw FormatError("NELEC out of range [0, 2*NORB]");
  for (int p = 0; p < norb_; ++p)
    for (int q = 0; q < p; ++q)
      if (std::abs(h1_(p, q) - h1_(q, p)) > 1e-12)
        throw ContractError("h1 is not symmetric");
}

IntegralSet parse_fcidump(std::istream &in) {
  std::string line;
  std::string header;
  int line_no = 0;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string u = upper(line);
    auto end = u.find("&END");
    auto slash = u.find('/');
    if (end != std::string::npos || slash != std::string::npos) {
      auto cut = std::min(end, slash);
      header += line.substr(0, cut);
      header_done = true;
      break;
    }
    header += line;
    header += ' ';
  }
  if (!header_done) throw FormatError("FCIDUMP namelist header not terminated");
  auto hu = upper(header);
  auto fci = hu.find("&FCI");
  if (fci == std::string::npos) throw FormatError("missing &FCI namelist");
  auto keys = parse_namelist(header.substr(fci + 4));

  auto scalar_key = [&](const char *name, bool required, int fallback) {
    auto it = keys.find(name);
    if (it == keys.end() || it->second.empty()) {
      if (required) throw FormatError(std::string("missing ") + name);
      return fallback;
    }
    return parse_index(it->second.front(), 0);
  };
  const int norb = scalar_key("NORB", true, 0);
  const int nelec = scalar_key("NELEC", true, 0);
  const int ms2 = scalar_key("MS2", false, 0);
  if (scalar_key("IUHF", false, 0) != 0)
    throw FormatError("unrestricted (IUHF) FCIDUMP files are not supported");
  if (scalar_key("ICOMPLEX", false, 0) != 0 || scalar_key("TREL", false, 0) != 0)
    throw FormatError("complex FCIDUMP files are not supported");

  IntegralSet ints(norb, nelec, ms2);
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> fields;
    std::string tok;
    while (ls >> tok) fields.push_back(tok);
    if (fields.empty()) continue;
    if (fields.size() != 5)
      throw FormatError("expected 'value i j k l' on line " +
                        std::to_string(line_no));
    const double value = parse_number(fields[0], line_no);
    int idx[4];
    for (int a = 0; a < 4; ++a) {
      idx[a] = parse_index(fields[a + 1], line_no);
      if (idx[a] < 0 || idx[a] > norb)
        throw IndexError("index " + std::to_string(idx[a]) +
                         " out of [0, NORB] on line " + std::to_string(line_no));
    }
    const auto [i, j, k, l] = idx;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      ints.set_core_energy(value);
    } else if (k == 0 && l == 0) {
      if (j == 0) continue;  // orbital energy record; not used
      if (i == 0) throw FormatError("malformed one-electron record on line " +
                                    std::to_string(line_no));
      ints.set_h1(i - 1, j - 1, value);
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      ints.set_eri(i - 1, j - 1, k - 1, l - 1, value);
    } else {
      throw FormatError("malformed integral record on line " +
                        std::to_string(line_no));
    }
  }
  ints.validate();
  return ints;
}

IntegralSet read_fcidump(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError("cannot open FCIDUMP file: " + path);
  return parse_fcidump(in);
}

void write_fcidump(std::ostream &out, const IntegralSet &ints) {
  const int n = ints.norb();
  out << " &FCI NORB=" << n << ",NELEC=" << ints.nelec()
      << ",MS2=" << ints.ms2() << ",\n  ORBSYM=";
  for (int i = 0; i < n; ++i) out << "1,";
  out << "\n  ISYM=1,\n &END\n";
  auto record = [&](double v, int i, int j, int k, int l) {
    out << std::setprecision(17) << std::scientific << v << ' ' << i << ' '
        << j << ' ' << k << ' ' << l << '\n';
  };
  for (auto it = ints.eri_elements().rbegin(); it != ints.eri_elements().rend();
       ++it) {
    if (std::abs(it->second) < 1e-12) continue;
    record(it->second, it->first.p + 1, it->first.q + 1, it->first.r + 1,
           it->first.s + 1);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      if (std::abs(ints.h1(i, j)) >= 1e-12) record(ints.h1(i, j), i + 1, j + 1, 0, 0);
  record(ints.core_energy(), 0, 0, 0, 0);
}

SpinOrbitalHamiltonian::SpinOrbitalHamiltonian(int norb, double scalar,
                                               Eigen::MatrixXd one_body,
                                               std::vector<double> eri)
    : norb_(norb), scalar_(scalar), one_body_(std::move(one_body)),
      eri_(std::move(eri)) {
  const std::size_t n4 = static_cast<std::size_t>(norb) * norb * norb * norb;
  if (one_body_.rows() != 2 * norb || one_body_.cols() != 2 * norb)
    throw DimensionError("one-body matrix must be n_so x n_so");
  if (eri_.size() != n4)
    throw DimensionError("two-body array must hold norb^4 elements");
  for (int p = 0; p < 2 * norb; ++p)
    for (int q = 0; q < p; ++q) {
      if (std::abs(one_body_(p, q) - one_body_(q, p)) > 1e-12)
        throw ContractError("one-body spin-orbital matrix is not Hermitian");
      if (p / norb != q / norb && std::abs(one_body_(p, q)) > 1e-12)
        throw ContractError("one-body element mixes alpha and beta spin");
    }
}

SpinOrbitalHamiltonian to_spin_orbitals(const IntegralSet &ints) {
  const int n = ints.norb();
  Eigen::MatrixXd one = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  one.topLeftCorner(n, n) = ints.h1();
  one.bottomRightCorner(n, n) = ints.h1();
  std::vector<double> eri(static_cast<std::size_t>(n) * n * n * n, 0.0);
  auto at = [&](int p, int q, int r, int s) -> double & {
    return eri[((static_cast<std::size_t>(p) * n + q) * n + r) * n + s];
  };
  for (const auto &[key, v] : ints.eri_elements()) {
    const auto [p, q, r, s] = key;
    at(p, q, r, s) = v;
    at(q, p, r, s) = v;
    at(p, q, s, r) = v;
    at(q, p, s, r) = v;
    at(r, s, p, q) = v;
    at(s, r, p, q) = v;
    at(r, s, q, p) = v;
    at(s, r, q, p) = v;
  }
  return SpinOrbitalHamiltonian(n, ints.core_energy(), std::move(one),
                                std::move(eri));
}

}  // namespace lasucc
