#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lasucc/errors.hpp"
#include "lasucc/lasfrag.hpp"
#include "oracles.hpp"

using namespace lasucc;
using oracle::cplx;

namespace {

struct Dimer {
  IntegralSet ints;
  SpinOrbitalHamiltonian h;
  FragmentLayout layout;
};

Dimer dimer(const std::string &d) {
  auto ints = read_fcidump(oracle::data_path("h2_dimer/d" + d + ".fcidump"));
  auto layout = read_layout(oracle::data_path("h2_dimer_layout.json"));
  auto h = to_spin_orbitals(ints);
  return {std::move(ints), std::move(h), std::move(layout)};
}

double fci_energy(const SpinOrbitalHamiltonian &h, const FragmentLayout &layout) {
  auto ord = make_ordering(layout, OrderingMode::FragmentInterleaved);
  return ground_state_in_sector(map_hamiltonian(h, ord), ord, layout.total_sector()).energy;
}

// Two fragments with no cross-fragment integrals.
IntegralSet block_diagonal(std::mt19937_64 &rng) {
  auto a = oracle::random_integrals(2, 2, rng);
  auto b = oracle::random_integrals(2, 2, rng);
  IntegralSet ab(4, 4, 0);
  ab.set_core_energy(0.25);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      ab.set_h1(p, q, a.h1(p, q));
      ab.set_h1(p + 2, q + 2, b.h1(p, q));
    }
  for (const auto &[k, v] : a.eri_elements()) ab.set_eri(k.p, k.q, k.r, k.s, v);
  for (const auto &[k, v] : b.eri_elements()) ab.set_eri(k.p + 2, k.q + 2, k.r + 2, k.s + 2, v);
  return ab;
}

PauliSum one_qubit_diag(double e1) {
  PauliSum h(1);
  h.add(QubitMask(), QubitMask(), 0.5 * e1);
  h.add(QubitMask::bit(0), QubitMask(), -0.5 * e1);
  return h;
}

}  // namespace

TEST(FragmentRdm, MatchesDenseLadderAlgebra) {
  std::mt19937_64 rng(21);
  const int nk = 2, n = 4;
  Statevector s(n, oracle::random_state(n, rng));
  auto local = local_fragment_ordering(nk);
  auto g1 = one_rdm(s, nk);
  auto g2 = two_rdm(s, nk);
  auto lad = [&](int so, bool create) {
    return oracle::ladder_matrix(n, local.qubit(so), create).cast<cplx>().eval();
  };
  const auto &v = s.amplitudes();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      const cplx want = v.dot(lad(p, true) * lad(q, false) * v);
      EXPECT_NEAR(g1.gamma(p, q), want.real(), 1e-13);
      for (int r = 0; r < n; ++r)
        for (int t = 0; t < n; ++t) {
          const cplx w2 = v.dot(lad(p, true) * lad(r, true) * lad(t, false) * lad(q, false) * v);
          EXPECT_NEAR(g2(p * n + r, q * n + t), w2.real(), 1e-13);
        }
    }
}

TEST(FragmentRdm, AufbauFilling) {
  Fragment f{{3, 5, 7}, {2, 1}};
  auto r = aufbau_rdm(f);
  Eigen::VectorXd want(6);
  want << 1, 1, 0, 1, 0, 0;
  EXPECT_TRUE(r.gamma.diagonal().isApprox(want));
  EXPECT_EQ((r.gamma - Eigen::MatrixXd(r.gamma.diagonal().asDiagonal())).norm(), 0.0);
}

TEST(EffectiveHamiltonian, NoninteractingLimitIsRestriction) {
  std::mt19937_64 rng(22);
  auto ints = block_diagonal(rng);
  auto h = to_spin_orbitals(ints);
  auto layout = FragmentLayout::chain(2, 2, {1, 1}, 2);
  std::vector<FragmentRDM> rdms{aufbau_rdm(layout.fragment(0)), aufbau_rdm(layout.fragment(1))};
  for (int k = 0; k < 2; ++k) {
    auto heff = build_effective_one_body(h, layout, k, rdms);
    EXPECT_EQ(heff.norb(), 2);
    EXPECT_EQ(heff.scalar(), 0.0);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const int ga = (a % 2) + 2 * k + (a / 2) * 4, gb = (b % 2) + 2 * k + (b / 2) * 4;
        EXPECT_NEAR(heff.one_body(a, b), h.one_body(ga, gb), 1e-15);
      }
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        for (int r = 0; r < 2; ++r)
          for (int s = 0; s < 2; ++s)
            EXPECT_EQ(heff.coulomb(p, q, r, s), ints.eri(p + 2 * k, q + 2 * k, r + 2 * k, s + 2 * k));
  }
}

// Orbital 0 is fragment K, orbital 1 fragment L, L doubly occupied.
TEST(EffectiveHamiltonian, TwoSiteHandContraction) {
  const double h00 = -1.1, h11 = -0.6, h01 = 0.0, u0 = 0.7, u1 = 0.65, j = 0.4, x = 0.15;
  IntegralSet ints(2, 3, 1);
  ints.set_h1(0, 0, h00);
  ints.set_h1(1, 1, h11);
  ints.set_h1(0, 1, h01);
  ints.set_eri(0, 0, 0, 0, u0);
  ints.set_eri(1, 1, 1, 1, u1);
  ints.set_eri(0, 0, 1, 1, j);
  ints.set_eri(0, 1, 1, 0, x);
  auto h = to_spin_orbitals(ints);
  FragmentLayout layout({Fragment{{0}, {1, 0}}, Fragment{{1}, {1, 1}}}, 2);
  std::vector<FragmentRDM> rdms{aufbau_rdm(layout.fragment(0)),
                                FragmentRDM{Eigen::MatrixXd::Identity(2, 2)}};
  auto heff = build_effective_one_body(h, layout, 0, rdms);
  // Both spins of L contribute Coulomb; only the same-spin one exchanges.
  EXPECT_NEAR(heff.one_body(0, 0), h00 + 2 * j - x, 1e-14);
  EXPECT_NEAR(heff.one_body(1, 1), h00 + 2 * j - x, 1e-14);
  EXPECT_NEAR(heff.one_body(0, 1), 0.0, 1e-14);

  // Projection oracle: <Phi_L|H|Phi_L> over K's configurations, minus the
  // energy of L alone, is the many-body effective Hamiltonian on K.
  const std::vector<int> perm{0, 1, 2, 3};
  const std::uint64_t phi_l = 0b1010;  // 1 alpha on mode 1, 1 beta on mode 3
  const double e_l = ints.core_energy() + 2 * h11 + u1;
  auto local = local_fragment_ordering(1);
  auto mapped = map_hamiltonian(heff, local);
  for (std::uint64_t k : {0b0000ULL, 0b0001ULL, 0b0100ULL, 0b0101ULL}) {
    const double proj = oracle::slater_condon(ints, perm, {k | phi_l})(0, 0) - e_l;
    const std::uint64_t lq = (k & 1) | ((k >> 2) & 1) << 1;
    EXPECT_NEAR(expectation(prepare_basis_state(2, lq), mapped), proj, 1e-13) << k;
  }
}

TEST(EffectiveHamiltonian, HermitianForRandomIntegrals) {
  std::mt19937_64 rng(23);
  auto ints = oracle::random_integrals(4, 4, rng);
  auto h = to_spin_orbitals(ints);
  auto layout = FragmentLayout::chain(2, 2, {1, 1}, 2);
  std::vector<FragmentRDM> rdms;
  // Random states of definite (1,1) occupation keep gamma spin-diagonal.
  SectorBasis basis(local_fragment_ordering(2), {1, 1});
  std::normal_distribution<double> g;
  for (int k = 0; k < 2; ++k) {
    Eigen::VectorXcd v(basis.dim());
    for (auto &c : v) c = cplx(g(rng), g(rng));
    rdms.push_back(one_rdm(basis.embed(v / v.norm()), 2));
  }
  for (int k = 0; k < 2; ++k) {
    auto heff = build_effective_one_body(h, layout, k, rdms);
    EXPECT_LT((heff.one_body() - heff.one_body().transpose()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(map_hamiltonian(heff, local_fragment_ordering(2)).max_imag(), 1e-12);
  }
  EXPECT_THROW(build_effective_one_body(h, layout, 2, rdms), IndexError);
  EXPECT_THROW(build_effective_one_body(h, layout, 0, {rdms[0]}), DimensionError);
}

TEST(Cmf, SingleFragmentIsFci) {
  auto ints = read_fcidump(oracle::data_path("h2_sto3g.fcidump"));
  auto h = to_spin_orbitals(ints);
  auto layout = read_layout(oracle::data_path("h2_layout.json"));
  ASSERT_EQ(layout.n_fragments(), 1);
  auto sol = cmf_solve(h, layout);
  EXPECT_TRUE(sol.converged);
  EXPECT_NEAR(sol.e_las, fci_energy(h, layout), 1e-10);
}

TEST(Cmf, BlockDiagonalIsExact) {
  std::mt19937_64 rng(24);
  auto h = to_spin_orbitals(block_diagonal(rng));
  auto layout = FragmentLayout::chain(2, 2, {1, 1}, 2);
  auto sol = cmf_solve(h, layout);
  EXPECT_NEAR(sol.e_las, fci_energy(h, layout), 1e-10);
}

TEST(Cmf, DimerDissociationShape) {
  auto near = dimer("1.00"), far = dimer("4.00");
  auto sn = cmf_solve(near.h, near.layout);
  auto sf = cmf_solve(far.h, far.layout);
  EXPECT_LE(std::abs(sf.e_las - fci_energy(far.h, far.layout)), 1.6e-3);
  EXPECT_GT(sn.e_las - fci_energy(near.h, near.layout), 1.6e-3);
}

TEST(Cmf, VariationalBoundAndEnergyPaths) {
  for (const std::string d : {"1.00", "1.25", "1.50", "2.00", "2.50", "3.00", "4.00"}) {
    auto x = dimer(d);
    auto sol = cmf_solve(x.h, x.layout);
    EXPECT_GE(sol.e_las, fci_energy(x.h, x.layout) - 1e-10) << d;
    EXPECT_NEAR(sol.e_las, sol.e_las_state, 1e-10) << d;
    EXPECT_LT(sol.residual, 1e-9);
  }
}

TEST(Cmf, RdmInvariants) {
  auto x = dimer("1.50");
  auto sol = cmf_solve(x.h, x.layout);
  for (int k = 0; k < 2; ++k) {
    const auto &g = sol.rdms[k].gamma;
    EXPECT_LT((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues();
    EXPECT_GE(ev.minCoeff(), -1e-10);
    EXPECT_LE(ev.maxCoeff(), 1 + 1e-10);
    EXPECT_NEAR(g.trace(), 2.0, 1e-10);
  }
}

TEST(Cmf, EffectiveHamiltonianEigenvector) {
  auto x = dimer("1.25");
  auto sol = cmf_solve(x.h, x.layout);
  auto ord = make_ordering(x.layout, OrderingMode::FragmentInterleaved);
  auto psi = assemble_product_state(sol, x.layout, ord);
  auto heff = effective_hamiltonian(x.h, x.layout, sol.rdms, ord);
  const double sum = sol.fragment_energies[0] + sol.fragment_energies[1];
  EXPECT_NEAR(expectation(psi, heff), sum, 1e-10);
  EXPECT_LT((apply_pauli_sum(heff, psi.amplitudes()) - sum * psi.amplitudes()).norm(), 1e-8);
}

TEST(Cmf, FixedPointIsStable) {
  auto x = dimer("2.00");
  auto sol = cmf_solve(x.h, x.layout);
  for (int k = 0; k < 2; ++k) {
    auto heff = build_effective_one_body(x.h, x.layout, k, sol.rdms);
    auto gs = ground_state_in_sector(map_hamiltonian(heff, local_fragment_ordering(2)),
                                     local_fragment_ordering(2), x.layout.fragment(k).sector);
    EXPECT_LT((one_rdm(gs.state, 2).gamma - sol.rdms[k].gamma).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Cmf, NonConvergenceCarriesResidual) {
  auto x = dimer("1.00");
  try {
    cmf_solve(x.h, x.layout, CmfOptions{1e-30, 2});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError &e) {
    EXPECT_GT(e.residual(), 0.0);
  }
}

TEST(Cmf, Errors) {
  auto x = dimer("1.00");
  EXPECT_THROW(cmf_solve(x.h, FragmentLayout::chain(1, 2, {1, 1}, 1)), LayoutError);
  auto sol = cmf_solve(x.h, x.layout);
  EXPECT_THROW(assemble_product_state(sol, x.layout,
                                      make_ordering(x.layout, OrderingMode::BlockedSpin)),
               OrderingError);
}

TEST(Cmf, BasisFragmentStatesConcatenate) {
  auto layout = FragmentLayout::chain(2, 1, {1, 0}, 2);
  LasSolution sol;
  sol.fragment_states = {prepare_basis_state(2, 0b01), prepare_basis_state(2, 0b10)};
  auto psi = assemble_product_state(sol, layout, make_ordering(layout, OrderingMode::FragmentInterleaved));
  EXPECT_EQ(psi[0b1001], cplx(1.0));
}

TEST(Qpe, DecodeAndWindow) {
  auto plan = plan_for_window(-2.0, 1.0, 8, 0.1);
  EXPECT_NEAR(plan.shift, -2.1, 1e-15);
  EXPECT_NEAR(2 * std::numbers::pi / plan.tau, 3.2, 1e-14);
  EXPECT_NEAR(qpe_decode(0, plan), -2.1, 1e-15);
  // Outcome j reads phase j/M = -theta mod 1.
  EXPECT_NEAR(qpe_decode(256 - 64, plan), -2.1 + 0.8, 1e-14);
}

TEST(Qpe, OneQubitEigenstate) {
  const double e1 = 0.9;
  QpePlan plan;
  plan.t = 8;
  plan.shift = 0.0;
  plan.tau = 2 * std::numbers::pi / 1.5;
  auto res = simulate_fragment_qpe(one_qubit_diag(e1), plan, prepare_basis_state(1, 0));
  EXPECT_EQ(res.modal_outcome, 0);
  EXPECT_NEAR(res.energy, 0.0, 2 * std::numbers::pi / plan.tau / 256);
  EXPECT_NEAR(std::abs(res.post_state[0]), 1.0, 1e-12);
}

TEST(Qpe, ExactPhaseIsPointMass) {
  QpePlan plan;
  plan.t = 6;
  plan.tau = 1.0;
  const double e1 = 2 * std::numbers::pi * 5.0 / 64.0;
  auto res = simulate_fragment_qpe(one_qubit_diag(e1), plan, prepare_basis_state(1, 1));
  EXPECT_EQ(res.modal_outcome, 64 - 5);
  EXPECT_NEAR(res.distribution[res.modal_outcome], 1.0, 1e-12);
  double rest = 0.0;
  for (int j = 0; j < 64; ++j)
    if (j != res.modal_outcome) rest += res.distribution[j];
  EXPECT_LT(rest, 1e-12);
  EXPECT_NEAR(res.energy, e1, 1e-12);
}

namespace {

struct H2Fragment {
  PauliSum h;
  GroundState gs;
  QpePlan plan;
};

H2Fragment h2_fragment(int t) {
  auto local = local_fragment_ordering(2);
  auto h = map_hamiltonian(to_spin_orbitals(read_fcidump(oracle::data_path("h2_sto3g.fcidump"))), local);
  auto gs = ground_state_in_sector(h, local, {1, 1});
  auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h.to_dense(), Eigen::EigenvaluesOnly)
                .eigenvalues();
  return {h, gs, plan_for_window(ev.minCoeff(), ev.maxCoeff(), t, 0.1)};
}

}  // namespace

TEST(Qpe, H2FragmentGroundState) {
  auto f = h2_fragment(10);
  auto res = simulate_fragment_qpe(f.h, f.plan, prepare_basis_state(4, 0b0011));
  const double bin = 2 * std::numbers::pi / f.plan.tau / 1024;
  EXPECT_LE(std::abs(res.energy - f.gs.energy), bin);
  EXPECT_GE(fidelity(res.post_state, f.gs.state), 0.99);
}

TEST(Qpe, TrotterConvergesToExact) {
  auto f = h2_fragment(8);
  const auto init = prepare_basis_state(4, 0b0011);
  const auto exact = simulate_fragment_qpe(f.h, f.plan, init);
  std::vector<double> err, de;
  for (int steps : {1, 4, 16}) {
    QpePlan p = f.plan;
    p.use_exact_propagator = false;
    p.trotter_steps = steps;
    auto res = simulate_fragment_qpe(f.h, p, init);
    double tv = 0.0;
    for (std::size_t j = 0; j < res.distribution.size(); ++j)
      tv += std::abs(res.distribution[j] - exact.distribution[j]);
    de.push_back(std::abs(res.energy - exact.energy));
    err.push_back(de.back() + tv);
  }
  // The binned estimate can stall; the distribution distance keeps it strict.
  EXPECT_GE(de[0], de[1]);
  EXPECT_GE(de[1], de[2]);
  EXPECT_GT(err[0], err[1]);
  EXPECT_GT(err[1], err[2]);
}

TEST(Qpe, Errors) {
  auto h = one_qubit_diag(0.9);
  QpePlan plan;
  plan.t = 4;
  plan.shift = 0.5;  // eigenvalue 0 sits below the window
  EXPECT_THROW(simulate_fragment_qpe(h, plan, Statevector(1)), AliasingError);
  plan.shift = 0.0;
  plan.tau = 7.0;  // window [0, 0.897) misses 0.9
  EXPECT_THROW(simulate_fragment_qpe(h, plan, Statevector(1)), AliasingError);
  plan.tau = 1.0;
  EXPECT_THROW(simulate_fragment_qpe(h, plan, Statevector(2)), DimensionError);
  plan.t = 0;
  EXPECT_THROW(simulate_fragment_qpe(h, plan, Statevector(1)), ContractError);
  const int old = qubit_cap();
  set_qubit_cap(4);
  plan.t = 4;
  EXPECT_THROW(simulate_fragment_qpe(h, plan, Statevector(1)), CapacityError);
  set_qubit_cap(old);
}
