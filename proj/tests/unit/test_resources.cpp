#include <gtest/gtest.h>

#include <cmath>

#include "lasucc/errors.hpp"
#include "lasucc/lasfrag.hpp"
#include "lasucc/resources.hpp"

using namespace lasucc;

namespace {

FragmentLayout h2_chain(int nf, int m = 2) { return FragmentLayout::chain(nf, 2, {1, 1}, m); }

SpinOrbitalHamiltonian chain_hamiltonian(int nf, std::uint64_t seed = 11) {
  return to_spin_orbitals(synthetic_chain_integrals(nf, 2, seed));
}

// Per-label cost read straight off the character string.
GateCount label_cost(const std::string &label) {
  int w = 0, xy = 0;
  for (char c : label) {
    if (c != 'I') ++w;
    if (c == 'X' || c == 'Y') ++xy;
  }
  if (w == 0) return {};
  return {2 * (w - 1), 1, 2 * xy};
}

}  // namespace

TEST(GateCounting, StaircaseExamples) {
  PauliSum z(4);
  const PauliKey kz = parse_pauli_label("IZII");
  z.add(kz.z, kz.x, 0.3);
  EXPECT_EQ(count_trotter_step(z), (GateCount{0, 1, 0}));

  PauliSum xxyz(4);
  const PauliKey k = parse_pauli_label("XXYZ");
  xxyz.add(k.z, k.x, 0.7);
  EXPECT_EQ(count_trotter_step(xxyz), (GateCount{6, 1, 6}));

  PauliSum id = PauliSum::identity(4, 2.0);
  EXPECT_EQ(count_trotter_step(id), GateCount{});
  id += xxyz;
  EXPECT_EQ(count_trotter_step(id), (GateCount{6, 1, 6}));
}

TEST(GateCounting, AdditiveUnderConcatenation) {
  const GateCount a{3, 1, 4}, b{2, 5, 0};
  EXPECT_EQ(a + b, (GateCount{5, 6, 4}));
  GateCount c = a;
  c += b;
  EXPECT_EQ(c, a + b);
}

TEST(GateCounting, StreamedMatchesMappedSumAndLabels) {
  const FragmentLayout layout = h2_chain(2);
  const SpinOrbitalHamiltonian h = chain_hamiltonian(2);
  for (OrderingMode mode : {OrderingMode::BlockedSpin, OrderingMode::FragmentInterleaved}) {
    const OrbitalOrdering ord = make_ordering(layout, mode);
    const PauliSum mapped = map_hamiltonian(h, ord);
    GateCount by_label;
    for (const auto &[key, c] : mapped.terms())
      by_label += label_cost(pauli_label(key.z, key.x, ord.n_qubits()));
    EXPECT_EQ(count_trotter_step(mapped), by_label);
    EXPECT_EQ(count_trotter_step(h, ord), by_label);
  }
}

TEST(GateCounting, CorrelatorExamples) {
  EXPECT_EQ(count_correlator(UccAnsatz{}, OrbitalOrdering::identity(8)), GateCount{});

  // a+_3 a_0 within the alpha block of a blocked 8-qubit register: weight 4.
  UccAnsatz single;
  single.generators.push_back({{3}, {0}});
  single.symtab = {{0}};
  const OrbitalOrdering ord = OrbitalOrdering::identity(8);
  EXPECT_EQ(generator_pauli_sum(single.generators[0], ord).size(), 2u);
  const GateCount c = count_correlator(single, ord);
  EXPECT_EQ(c.cnot, 4 * (4 - 1));
  EXPECT_EQ(c.rot1q, 2);
  EXPECT_EQ(c.clifford1q, 8);
}

TEST(GateCounting, InteriorWindowsAreIdentical) {
  const FragmentLayout layout = h2_chain(8);
  const OrbitalOrdering ord = make_ordering(layout, OrderingMode::FragmentInterleaved);
  const auto windows = build_mlocal_correlators(layout);
  ASSERT_EQ(windows.size(), 7u);
  const GateCount first = count_correlator(windows[0], ord);
  for (const auto &w : windows) EXPECT_EQ(count_correlator(w, ord), first);
}

TEST(GateCounting, FragmentCountDependsOnOrdering) {
  const GateCount at2 = count_fragment_step(chain_hamiltonian(2), h2_chain(2), 0,
                                            make_ordering(h2_chain(2), OrderingMode::FragmentInterleaved));
  const GateCount at8 = count_fragment_step(chain_hamiltonian(8), h2_chain(8), 0,
                                            make_ordering(h2_chain(8), OrderingMode::FragmentInterleaved));
  EXPECT_EQ(at2, at8);
  EXPECT_GT(at2.cnot, 0);

  // Spin-conserving terms stay short when each spin block keeps fragments
  // contiguous; splitting occupied from virtual orbitals stretches them.
  const GateCount s2 = count_fragment_step(chain_hamiltonian(2), h2_chain(2), 0,
                                           make_ordering(h2_chain(2), OrderingMode::BlockedSpin));
  const GateCount s8 = count_fragment_step(chain_hamiltonian(8), h2_chain(8), 0,
                                           make_ordering(h2_chain(8), OrderingMode::BlockedSpin));
  EXPECT_EQ(s2, s8);
  GateCount prev;
  for (int nf : {2, 4, 8}) {
    const GateCount b = count_fragment_step(chain_hamiltonian(nf), h2_chain(nf), 0,
                                            occupation_blocked_ordering(h2_chain(nf)));
    EXPECT_GT(b.cnot, prev.cnot) << "n_f=" << nf;
    prev = b;
  }
}

TEST(GateCounting, InterleavedFragmentTermsHaveBoundedWeight) {
  for (int nf : {2, 4, 8}) {
    const FragmentLayout layout = h2_chain(nf);
    const OrbitalOrdering full = make_ordering(layout, OrderingMode::FragmentInterleaved);
    std::vector<FragmentRDM> rdms;
    for (const auto &f : layout.fragments()) rdms.push_back(aufbau_rdm(f));
    const SpinOrbitalHamiltonian h = chain_hamiltonian(nf);
    for (int k = 0; k < nf; ++k) {
      const PauliSum hk =
          map_hamiltonian(build_effective_one_body(h, layout, k, rdms), embed_fragment(layout, k, full));
      EXPECT_LE(hk.max_weight(), 2 * layout.fragment_norb(k)) << "n_f=" << nf << " K=" << k;
    }
  }
}

TEST(GateCounting, OccupationBlockedOrdering) {
  const OrbitalOrdering ord = occupation_blocked_ordering(h2_chain(3));
  // Occupied alpha 0,2,4; virtual alpha 1,3,5; then the beta copies.
  EXPECT_EQ(ord.perm(), (std::vector<int>{0, 3, 1, 4, 2, 5, 6, 9, 7, 10, 8, 11}));
  EXPECT_TRUE(ord.is_permutation());
}

TEST(GateCounting, NonChainLayoutRejected) {
  const FragmentLayout swapped({{{2, 3}, {1, 1}}, {{0, 1}, {1, 1}}}, 2);
  ASSERT_FALSE(swapped.is_chain());
  const OrbitalOrdering ord = make_ordering(swapped, OrderingMode::FragmentInterleaved);
  EXPECT_THROW(count_fragment_step(chain_hamiltonian(2), swapped, 0, ord), LayoutError);
}

TEST(SyntheticChain, AllAllowedElementsNonzeroAndSeeded) {
  const IntegralSet a = synthetic_chain_integrals(3, 2, 5);
  a.validate();
  EXPECT_EQ(a.norb(), 6);
  EXPECT_EQ(a.nelec(), 6);
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) {
      EXPECT_GE(std::abs(a.h1(p, q)), 0.01);
      for (int r = 0; r < 6; ++r)
        for (int s = 0; s < 6; ++s) EXPECT_GE(std::abs(a.eri(p, q, r, s)), 1e-3);
    }
  const IntegralSet b = synthetic_chain_integrals(3, 2, 5);
  EXPECT_EQ(a.h1(), b.h1());
  EXPECT_EQ(a.eri_elements(), b.eri_elements());
  const IntegralSet c = synthetic_chain_integrals(3, 2, 6);
  EXPECT_NE(a.h1(), c.h1());
}

TEST(Scan, AdditiveMonotoneAndDeterministic) {
  ScanOptions opt;
  opt.nf_min = 2;
  opt.nf_max = 5;
  const ScalingTable t = scaling_scan(opt);
  ASSERT_EQ(t.rows.size(), 16u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_EQ(t.rows[i].n_so, 4 * t.rows[i].n_f);

  for (std::size_t i = 4; i < t.rows.size(); ++i) {
    const auto &prev = t.rows[i - 4], &cur = t.rows[i];
    ASSERT_EQ(prev.method, cur.method);
    EXPECT_GE(cur.count.cnot, prev.count.cnot);
    EXPECT_GE(cur.count.rot1q, prev.count.rot1q);
    EXPECT_GE(cur.count.clifford1q, prev.count.clifford1q);
  }

  // LAS-QPE row equals the per-fragment sum.
  for (const auto &r : t.rows) {
    if (r.method != ScanMethod::LasQpe) continue;
    const FragmentLayout layout = h2_chain(r.n_f);
    const SpinOrbitalHamiltonian h = to_spin_orbitals(synthetic_chain_integrals(r.n_f, 2, opt.seed + r.n_f));
    const OrbitalOrdering ord = make_ordering(layout, OrderingMode::FragmentInterleaved);
    GateCount sum;
    for (int k = 0; k < r.n_f; ++k) sum += count_fragment_step(h, layout, k, ord);
    EXPECT_EQ(r.count, sum);
  }

  const ScalingTable again = scaling_scan(opt);
  EXPECT_EQ(t.to_csv(), again.to_csv());
}

TEST(Scan, CsvLayout) {
  ScanOptions opt;
  opt.nf_min = 2;
  opt.nf_max = 2;
  opt.methods = {ScanMethod::LasQpe};
  const std::string csv = scaling_scan(opt).to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n_f,N,method,cnot,rot1q,clifford1q");
  EXPECT_EQ(csv.find("2,8,las-qpe,"), csv.find('\n') + 1);
  EXPECT_EQ(parse_scan_method("m-local-uccsd"), ScanMethod::MLocalUccsd);
  EXPECT_THROW(parse_scan_method("qpe"), ParseError);
}

TEST(Fit, RecoversPowerLaw) {
  ScalingTable t;
  for (int nf = 2; nf <= 6; ++nf) {
    const double n = 4.0 * nf;
    t.rows.push_back({nf, 4 * nf, ScanMethod::FullQpe,
                      {std::llround(3.0 * std::pow(n, 5)), std::llround(std::pow(n, 4)), 1}});
  }
  EXPECT_NEAR(fit_loglog_slope(t, ScanMethod::FullQpe), 5.0, 1e-6);
  EXPECT_NEAR(fit_loglog_slope(t, ScanMethod::FullQpe, GateMetric::Rot1q), 4.0, 1e-6);
  EXPECT_NEAR(fit_loglog_slope(t, ScanMethod::FullQpe, GateMetric::Clifford1q), 0.0, 1e-12);
}

TEST(Fit, Errors) {
  ScalingTable t;
  t.rows.push_back({2, 8, ScanMethod::LasQpe, {10, 1, 1}});
  t.rows.push_back({3, 12, ScanMethod::LasQpe, {15, 1, 1}});
  EXPECT_THROW(fit_loglog_slope(t, ScanMethod::LasQpe), FitError);
  EXPECT_THROW(fit_loglog_slope(t, ScanMethod::FullQpe), FitError);
  t.rows.push_back({4, 16, ScanMethod::LasQpe, {0, 1, 1}});
  EXPECT_THROW(fit_loglog_slope(t, ScanMethod::LasQpe), FitError);
}
