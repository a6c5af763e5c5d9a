#include "lasucc/resources.hpp"

#include <cmath>
#include <future>
#include <random>
#include <sstream>

#include "lasucc/errors.hpp"
#include "lasucc/lasfrag.hpp"

namespace lasucc {

GateCount count_pauli_exponential(const QubitMask &z, const QubitMask &x) {
  const int w = (z | x).popcount();
  if (w == 0) return {};
  return {2 * (w - 1), 1, 2 * x.popcount()};
}

GateCount count_trotter_step(const PauliSum &h) {
  GateCount c;
  for (const auto &[key, coeff] : h.terms()) c += count_pauli_exponential(key.z, key.x);
  return c;
}

GateCount count_trotter_step(const SpinOrbitalHamiltonian &h, const OrbitalOrdering &ordering) {
  GateCount c;
  visit_hamiltonian(h, ordering, [&](const QubitMask &z, const QubitMask &x, double) {
    c += count_pauli_exponential(z, x);
  });
  return c;
}

GateCount count_correlator(const UccAnsatz &ansatz, const OrbitalOrdering &ordering) {
  GateCount c;
  for (const auto &g : ansatz.generators) c += count_trotter_step(generator_pauli_sum(g, ordering));
  return c;
}

GateCount count_fragment_step(const SpinOrbitalHamiltonian &h, const FragmentLayout &layout,
                              int k, const OrbitalOrdering &ordering) {
  if (!layout.is_chain())
    throw LayoutError("gate counting supports linear chain layouts only");
  std::vector<FragmentRDM> rdms;
  rdms.reserve(layout.n_fragments());
  for (const auto &f : layout.fragments()) rdms.push_back(aufbau_rdm(f));
  return count_trotter_step(build_effective_one_body(h, layout, k, rdms),
                            embed_fragment(layout, k, ordering));
}

IntegralSet synthetic_chain_integrals(int n_fragments, int orbitals_per_fragment,
                                      std::uint64_t seed) {
  if (n_fragments < 1 || orbitals_per_fragment < 1)
    throw ContractError("synthetic chain needs at least one orbital");
  const int norb = n_fragments * orbitals_per_fragment;
  IntegralSet ints(norb, 2 * n_fragments, 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.1, 1.0);
  for (int p = 0; p < norb; ++p)
    for (int q = 0; q <= p; ++q) ints.set_h1(p, q, p == q ? -1.0 - mag(rng) : -0.1 * mag(rng));
  for (int p = 0; p < norb; ++p)
    for (int q = 0; q <= p; ++q)
      for (int r = 0; r <= p; ++r)
        for (int s = 0; s <= r; ++s) {
          if (r * (r + 1) / 2 + s > p * (p + 1) / 2 + q) continue;
          const bool coulomb = p == q && r == s;
          ints.set_eri(p, q, r, s, coulomb ? 0.5 * mag(rng) : 0.01 * mag(rng));
        }
  return ints;
}

const char *scan_method_name(ScanMethod m) {
  switch (m) {
    case ScanMethod::FullQpe: return "full-qpe";
    case ScanMethod::LasQpe: return "las-qpe";
    case ScanMethod::GlobalUccsd: return "global-uccsd";
    case ScanMethod::MLocalUccsd: return "m-local-uccsd";
  }
  return "?";
}

ScanMethod parse_scan_method(const std::string &s) {
  for (ScanMethod m : {ScanMethod::FullQpe, ScanMethod::LasQpe, ScanMethod::GlobalUccsd,
                       ScanMethod::MLocalUccsd})
    if (s == scan_method_name(m)) return m;
  throw ParseError("unknown scan method '" + s + "'");
}

std::string ScalingTable::to_csv() const {
  std::ostringstream out;
  out << "n_f,N,method,cnot,rot1q,clifford1q\n";
  for (const auto &r : rows)
    out << r.n_f << ',' << r.n_so << ',' << scan_method_name(r.method) << ',' << r.count.cnot
        << ',' << r.count.rot1q << ',' << r.count.clifford1q << '\n';
  return out.str();
}

OrbitalOrdering count_ordering(const FragmentLayout &layout, CountOrdering mode) {
  switch (mode) {
    case CountOrdering::BlockedSpin: return make_ordering(layout, OrderingMode::BlockedSpin);
    case CountOrdering::FragmentInterleaved:
      return make_ordering(layout, OrderingMode::FragmentInterleaved);
    case CountOrdering::OccupationBlocked: return occupation_blocked_ordering(layout);
  }
  throw ContractError("unknown counting ordering");
}

namespace {

std::vector<ScalingRow> scan_point(const ScanOptions &options, int nf) {
  const FragmentLayout layout =
      FragmentLayout::chain(nf, 2, SectorSpec{1, 1}, std::min(options.m, nf));
  const IntegralSet ints = synthetic_chain_integrals(nf, 2, options.seed + nf);
  const SpinOrbitalHamiltonian h = to_spin_orbitals(ints);
  std::vector<ScalingRow> rows;
  for (ScanMethod method : options.methods) {
    GateCount c;
    switch (method) {
      case ScanMethod::FullQpe:
        c = count_trotter_step(h, count_ordering(layout, options.full_qpe_ordering));
        break;
      case ScanMethod::LasQpe: {
        const OrbitalOrdering ord = count_ordering(layout, options.las_qpe_ordering);
        for (int k = 0; k < nf; ++k) c += count_fragment_step(h, layout, k, ord);
        break;
      }
      case ScanMethod::GlobalUccsd:
        c = count_correlator(build_occ_virt_uccsd(layout),
                             count_ordering(layout, options.global_uccsd_ordering));
        break;
      case ScanMethod::MLocalUccsd: {
        const OrbitalOrdering ord = count_ordering(layout, options.mlocal_ordering);
        for (const auto &w : build_mlocal_correlators(layout)) c += count_correlator(w, ord);
        break;
      }
    }
    rows.push_back({nf, layout.n_spin_orbitals(), method, c});
  }
  return rows;
}

}  // namespace

ScalingTable scaling_scan(const ScanOptions &options) {
  if (options.nf_min < 1 || options.nf_max < options.nf_min)
    throw ContractError("bad fragment-count range");
  if (options.m < 1) throw ContractError("locality m must be positive");
  // Largest chains first so the long points start early; rows are gathered
  // back in n_f order.
  std::vector<std::future<std::vector<ScalingRow>>> points(options.nf_max - options.nf_min + 1);
  for (int nf = options.nf_max; nf >= options.nf_min; --nf)
    points[nf - options.nf_min] = std::async(std::launch::async, scan_point, std::cref(options), nf);
  ScalingTable table;
  for (auto &f : points)
    for (auto &r : f.get()) table.rows.push_back(r);
  return table;
}

double fit_loglog_slope(const ScalingTable &table, ScanMethod method, GateMetric metric) {
  std::vector<double> xs, ys;
  for (const auto &r : table.rows) {
    if (r.method != method) continue;
    const std::int64_t v = metric == GateMetric::Cnot    ? r.count.cnot
                           : metric == GateMetric::Rot1q ? r.count.rot1q
                                                         : r.count.clifford1q;
    if (v <= 0 || r.n_so <= 0)
      throw FitError(std::string("non-positive count for ") + scan_method_name(method));
    xs.push_back(std::log(double(r.n_so)));
    ys.push_back(std::log(double(v)));
  }
  if (xs.size() < 3)
    throw FitError(std::string("need at least three points to fit ") + scan_method_name(method));
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double den = n * sxx - sx * sx;
  if (den <= 0.0) throw FitError("all points share one register size");
  return (n * sxy - sx * sy) / den;
}

}  // namespace lasucc
