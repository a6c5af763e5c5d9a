#include "lasucc/lasfrag.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "lasucc/errors.hpp"

namespace lasucc {

namespace {

// a_q |psi> under JW: sign from occupied qubits below q.
Eigen::VectorXcd annihilate(const Eigen::VectorXcd &v, int qubit) {
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(v.size()); ++j) {
    if (!(j & bit) || v[j] == cplx(0.0, 0.0)) continue;
    out[j ^ bit] = (std::popcount(j & (bit - 1)) & 1) ? -v[j] : v[j];
  }
  return out;
}

int local_qubit(int so, int nk) { return so < nk ? 2 * so : 2 * (so - nk) + 1; }

int global_so(const Fragment &f, int local, int norb) {
  const int nk = static_cast<int>(f.orbitals.size());
  return local < nk ? f.orbitals[local] : f.orbitals[local - nk] + norb;
}

void check_rdms(const FragmentLayout &layout, const std::vector<FragmentRDM> &rdms) {
  if (static_cast<int>(rdms.size()) != layout.n_fragments())
    throw DimensionError("one RDM per fragment required");
  for (int k = 0; k < layout.n_fragments(); ++k)
    if (rdms[k].gamma.rows() != 2 * layout.fragment_norb(k) ||
        rdms[k].gamma.cols() != 2 * layout.fragment_norb(k))
      throw DimensionError("fragment RDM has the wrong shape");
}

PauliSum map_fragment(const SpinOrbitalHamiltonian &heff, int nk) {
  return map_hamiltonian(heff, local_fragment_ordering(nk));
}

}  // namespace

FragmentRDM aufbau_rdm(const Fragment &fragment) {
  const int nk = static_cast<int>(fragment.orbitals.size());
  FragmentRDM r{Eigen::MatrixXd::Zero(2 * nk, 2 * nk)};
  for (int i = 0; i < fragment.sector.n_alpha; ++i) r.gamma(i, i) = 1.0;
  for (int i = 0; i < fragment.sector.n_beta; ++i) r.gamma(nk + i, nk + i) = 1.0;
  return r;
}

FragmentRDM one_rdm(const Statevector &state, int fragment_norb) {
  const int n = 2 * fragment_norb;
  if (state.n_qubits() != n) throw DimensionError("fragment state has the wrong size");
  std::vector<Eigen::VectorXcd> a(n);
  for (int p = 0; p < n; ++p) a[p] = annihilate(state.amplitudes(), local_qubit(p, fragment_norb));
  FragmentRDM r{Eigen::MatrixXd::Zero(n, n)};
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) r.gamma(p, q) = std::real(a[p].dot(a[q]));
  return r;
}

Eigen::MatrixXd two_rdm(const Statevector &state, int fragment_norb) {
  const int n = 2 * fragment_norb;
  if (state.n_qubits() != n) throw DimensionError("fragment state has the wrong size");
  std::vector<Eigen::VectorXcd> a(n);
  for (int p = 0; p < n; ++p) a[p] = annihilate(state.amplitudes(), local_qubit(p, fragment_norb));
  // aa[p*n + r] = a_r a_p |psi>, so <a+_p a+_r a_s a_q> = <aa[pr]|aa[qs]>.
  std::vector<Eigen::VectorXcd> aa(n * n);
  for (int p = 0; p < n; ++p)
    for (int r = 0; r < n; ++r) aa[p * n + r] = annihilate(a[p], local_qubit(r, fragment_norb));
  Eigen::MatrixXd g(n * n, n * n);
  for (int i = 0; i < n * n; ++i)
    for (int j = 0; j < n * n; ++j) g(i, j) = std::real(aa[i].dot(aa[j]));
  return g;
}

SpinOrbitalHamiltonian build_effective_one_body(const SpinOrbitalHamiltonian &h,
                                                const FragmentLayout &layout, int k,
                                                const std::vector<FragmentRDM> &rdms) {
  if (k < 0 || k >= layout.n_fragments()) throw IndexError("fragment index out of range");
  if (h.norb() != layout.norb())
    throw LayoutError("layout and Hamiltonian orbital counts differ");
  check_rdms(layout, rdms);
  const int norb = h.norb();
  const Fragment &fk = layout.fragment(k);
  const int nk = static_cast<int>(fk.orbitals.size());
  Eigen::MatrixXd one(2 * nk, 2 * nk);
  for (int a = 0; a < 2 * nk; ++a)
    for (int b = 0; b < 2 * nk; ++b) {
      const int ga = global_so(fk, a, norb), gb = global_so(fk, b, norb);
      double v = h.one_body(ga, gb);
      for (int l = 0; l < layout.n_fragments(); ++l) {
        if (l == k) continue;
        const Fragment &fl = layout.fragment(l);
        const int nl = 2 * static_cast<int>(fl.orbitals.size());
        for (int c = 0; c < nl; ++c)
          for (int d = 0; d < nl; ++d) {
            const double g = rdms[l].gamma(c, d);
            if (g == 0.0) continue;
            v += h.two_body(ga, global_so(fl, c, norb), gb, global_so(fl, d, norb)) * g;
          }
      }
      one(a, b) = v;
    }
  one = 0.5 * (one + one.transpose());
  std::vector<double> eri(static_cast<std::size_t>(nk) * nk * nk * nk);
  std::size_t idx = 0;
  for (int p : fk.orbitals)
    for (int q : fk.orbitals)
      for (int r : fk.orbitals)
        for (int s : fk.orbitals) eri[idx++] = h.coulomb(p, q, r, s);
  return SpinOrbitalHamiltonian(nk, 0.0, std::move(one), std::move(eri));
}

double las_energy(const SpinOrbitalHamiltonian &h, const FragmentLayout &layout,
                  const std::vector<Statevector> &fragment_states) {
  const int norb = h.norb();
  const int nf = layout.n_fragments();
  std::vector<FragmentRDM> g(nf);
  double e = h.scalar();
  for (int k = 0; k < nf; ++k) {
    const Fragment &f = layout.fragment(k);
    const int nk = static_cast<int>(f.orbitals.size());
    const int n = 2 * nk;
    g[k] = one_rdm(fragment_states[k], nk);
    const Eigen::MatrixXd big = two_rdm(fragment_states[k], nk);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) e += h.one_body(global_so(f, p, norb), global_so(f, q, norb)) * g[k].gamma(p, q);
    for (int p = 0; p < n; ++p)
      for (int r = 0; r < n; ++r)
        for (int q = 0; q < n; ++q)
          for (int s = 0; s < n; ++s) {
            const double d = big(p * n + r, q * n + s);
            if (d == 0.0) continue;
            e += 0.25 * d *
                 h.two_body(global_so(f, p, norb), global_so(f, r, norb), global_so(f, q, norb),
                            global_so(f, s, norb));
          }
  }
  for (int k = 0; k < nf; ++k)
    for (int l = 0; l < nf; ++l) {
      if (k == l) continue;
      const Fragment &fk = layout.fragment(k), &fl = layout.fragment(l);
      const int nk = 2 * static_cast<int>(fk.orbitals.size());
      const int nl = 2 * static_cast<int>(fl.orbitals.size());
      for (int a = 0; a < nk; ++a)
        for (int b = 0; b < nk; ++b) {
          if (g[k].gamma(a, b) == 0.0) continue;
          for (int c = 0; c < nl; ++c)
            for (int d = 0; d < nl; ++d)
              e += 0.5 * g[k].gamma(a, b) * g[l].gamma(c, d) *
                   h.two_body(global_so(fk, a, norb), global_so(fl, c, norb),
                              global_so(fk, b, norb), global_so(fl, d, norb));
        }
    }
  return e;
}

LasSolution cmf_solve(const SpinOrbitalHamiltonian &h, const FragmentLayout &layout,
                      const CmfOptions &options) {
  if (h.norb() != layout.norb())
    throw LayoutError("layout covers " + std::to_string(layout.norb()) +
                      " orbitals but the Hamiltonian has " + std::to_string(h.norb()));
  const int nf = layout.n_fragments();
  std::vector<FragmentRDM> rdms;
  for (const auto &f : layout.fragments()) rdms.push_back(aufbau_rdm(f));

  LasSolution sol;
  sol.fragment_states.resize(nf);
  double prev_delta = std::numeric_limits<double>::infinity();
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    std::vector<FragmentRDM> next(nf);
    for (int k = 0; k < nf; ++k) {
      const int nk = layout.fragment_norb(k);
      auto heff = build_effective_one_body(h, layout, k, rdms);
      auto gs = ground_state_in_sector(map_fragment(heff, nk), local_fragment_ordering(nk),
                                       layout.fragment(k).sector);
      sol.fragment_states[k] = gs.state;
      next[k] = one_rdm(gs.state, nk);
    }
    double delta = 0.0;
    for (int k = 0; k < nf; ++k)
      delta = std::max(delta, (next[k].gamma - rdms[k].gamma).cwiseAbs().maxCoeff());
    sol.iterations = sweep;
    sol.residual = delta;
    if (delta < options.tolerance) {
      rdms = std::move(next);
      sol.converged = true;
      break;
    }
    if (delta > prev_delta)
      for (int k = 0; k < nf; ++k) next[k].gamma = 0.5 * (next[k].gamma + rdms[k].gamma);
    prev_delta = delta;
    rdms = std::move(next);
  }
  if (!sol.converged)
    throw ConvergenceError("cMF did not converge in " + std::to_string(options.max_sweeps) +
                               " sweeps (max |d gamma| = " + std::to_string(sol.residual) + ")",
                           sol.residual);

  sol.rdms = rdms;
  for (int k = 0; k < nf; ++k) {
    auto heff = build_effective_one_body(h, layout, k, rdms);
    sol.fragment_energies.push_back(
        expectation(sol.fragment_states[k], map_fragment(heff, layout.fragment_norb(k))));
  }
  sol.e_las = las_energy(h, layout, sol.fragment_states);
  sol.e_las_state = std::numeric_limits<double>::quiet_NaN();
  if (2 * layout.norb() <= std::min(qubit_cap(), 20)) {
    auto ord = make_ordering(layout, OrderingMode::FragmentInterleaved);
    sol.e_las_state =
        expectation(assemble_product_state(sol, layout, ord), map_hamiltonian(h, ord));
    if (std::abs(sol.e_las_state - sol.e_las) > 1e-8)
      throw ContractError("LAS energy from RDMs disagrees with the product-state expectation");
  }
  return sol;
}

Statevector assemble_product_state(const LasSolution &sol, const FragmentLayout &layout,
                                   const OrbitalOrdering &ordering) {
  const auto expected = make_ordering(layout, OrderingMode::FragmentInterleaved);
  if (ordering.mode() != OrderingMode::FragmentInterleaved || ordering.perm() != expected.perm())
    throw OrderingError("product-state assembly needs the fragment_interleaved ordering");
  if (static_cast<int>(sol.fragment_states.size()) != layout.n_fragments())
    throw DimensionError("one fragment state per fragment required");
  return tensor_product(sol.fragment_states);
}

PauliSum effective_hamiltonian(const SpinOrbitalHamiltonian &h, const FragmentLayout &layout,
                               const std::vector<FragmentRDM> &rdms,
                               const OrbitalOrdering &ordering) {
  PauliSum sum(ordering.n_qubits());
  for (int k = 0; k < layout.n_fragments(); ++k)
    sum += map_hamiltonian(build_effective_one_body(h, layout, k, rdms),
                           embed_fragment(layout, k, ordering));
  sum.normalize();
  return sum;
}

QpePlan plan_for_window(double e_min, double e_max, int t, double margin) {
  if (e_max < e_min) throw ContractError("window bounds out of order");
  const double width = (e_max - e_min) + 2.0 * margin;
  if (width <= 0.0) throw ContractError("window must have positive width");
  QpePlan plan;
  plan.t = t;
  plan.shift = e_min - margin;
  plan.tau = 2.0 * std::numbers::pi / width;
  return plan;
}

double qpe_decode(int outcome, const QpePlan &plan) {
  const long m = 1L << plan.t;
  const double theta = double((m - outcome) % m) / double(m);
  return plan.shift + 2.0 * std::numbers::pi * theta / plan.tau;
}

QpeResult simulate_fragment_qpe(const PauliSum &h_frag, const QpePlan &plan,
                                const Statevector &initial) {
  if (plan.t < 1 || plan.tau <= 0.0 || plan.trotter_steps < 1)
    throw ContractError("QPE plan needs t >= 1, tau > 0 and at least one Trotter step");
  const int n = h_frag.n_qubits();
  if (initial.n_qubits() != n) throw DimensionError("initial state and Hamiltonian differ in size");
  if (n + plan.t > qubit_cap())
    throw CapacityError("QPE register of " + std::to_string(n + plan.t) +
                        " qubits exceeds the simulator cap");
  const Eigen::Index dim = Eigen::Index{1} << n;
  const Eigen::MatrixXcd hd = h_frag.to_dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hd);
  // Extremal eigenvalues bound the whole spectrum.
  for (double e : {es.eigenvalues()[0], es.eigenvalues()[dim - 1]}) {
    const double theta = (e - plan.shift) * plan.tau / (2.0 * std::numbers::pi);
    if (theta < 0.0 || theta >= 1.0)
      throw AliasingError("eigenvalue " + std::to_string(e) + " lies outside the phase window [" +
                          std::to_string(plan.shift) + ", " +
                          std::to_string(plan.shift + 2.0 * std::numbers::pi / plan.tau) + ")");
  }

  Eigen::MatrixXcd u(dim, dim);
  if (plan.use_exact_propagator) {
    Eigen::VectorXcd ph(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      ph[i] = std::exp(cplx(0.0, -(es.eigenvalues()[i] - plan.shift) * plan.tau));
    u = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
  } else {
    PauliSum shifted = h_frag;
    shifted.add(QubitMask(), QubitMask(), -plan.shift);
    const double dt = plan.tau / plan.trotter_steps;
    for (Eigen::Index j = 0; j < dim; ++j) {
      Statevector col(n);
      col.amplitudes().setZero();
      col.amplitudes()[j] = 1.0;
      for (int s = 0; s < plan.trotter_steps; ++s) trotter_step(col, shifted, dt);
      u.col(j) = col.amplitudes();
    }
  }

  // Outcome j carries (1/M) sum_a exp(-2 pi i a j / M) U^a |psi>.
  const long m = 1L << plan.t;
  std::vector<Eigen::VectorXcd> out(m, Eigen::VectorXcd::Zero(dim));
  Eigen::VectorXcd cur = initial.amplitudes();
  std::vector<cplx> root(m);
  for (long r = 0; r < m; ++r)
    root[r] = std::polar(1.0 / double(m), -2.0 * std::numbers::pi * double(r) / double(m));
  for (long a = 0; a < m; ++a) {
    for (long j = 0; j < m; ++j) out[j] += root[(a * j) % m] * cur;
    cur = u * cur;
  }

  QpeResult res;
  res.distribution.resize(m);
  for (long j = 0; j < m; ++j) {
    res.distribution[j] = out[j].squaredNorm();
    if (res.distribution[j] > res.distribution[res.modal_outcome] + 1e-15)
      res.modal_outcome = static_cast<int>(j);
  }
  res.phase = double(res.modal_outcome) / double(m);
  res.energy = qpe_decode(res.modal_outcome, plan);
  Eigen::VectorXcd post = out[res.modal_outcome];
  post /= post.norm();
  res.post_state = Statevector(n, std::move(post));
  return res;
}

}  // namespace lasucc
