#include "lasucc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "lasucc/fci.hpp"

#ifndef LASUCC_VERSION
#define LASUCC_VERSION "0.0.0"
#endif

namespace lasucc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fixed12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

void put_energy(json &doc, const std::string &key, double v) {
  doc[key] = v;
  doc["energies_12dp"][key] = fixed12(v);
}

std::string resolve(const std::string &path, const std::string &base) {
  if (path.empty() || base.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base) / path).lexically_normal().string();
}

template <class T>
T take(const json &obj, const char *key, T fallback) {
  try {
    return obj.contains(key) ? obj.at(key).get<T>() : fallback;
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

void reject_unknown(const json &obj, std::initializer_list<const char *> keys,
                    const std::string &where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto &[k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

const char *gradient_name(GradientMode g) {
  return g == GradientMode::Adjoint ? "adjoint" : "central_difference";
}

GradientMode parse_gradient(const std::string &s) {
  if (s == "adjoint") return GradientMode::Adjoint;
  if (s == "central_difference") return GradientMode::CentralDifference;
  throw ConfigError("unknown gradient mode '" + s + "'");
}

struct System {
  SpinOrbitalHamiltonian h;
  FragmentLayout layout;
  OrbitalOrdering ordering;
  PauliSum hq;
};

System load_system(const RunConfig &c) {
  const IntegralSet ints = read_fcidump(c.fcidump);
  System s;
  s.h = to_spin_orbitals(ints);
  FragmentLayout layout = read_layout(c.layout);
  if (c.m > 0) layout = FragmentLayout(layout.fragments(), c.m);
  layout.validate_against(ints.norb(), {ints.n_alpha(), ints.n_beta()});
  s.layout = layout;
  s.ordering = make_ordering(s.layout, c.ordering);
  s.hq = map_hamiltonian(s.h, s.ordering);
  return s;
}

SectorHamiltonian sector_hamiltonian(const System &s) {
  return SectorHamiltonian(s.hq, SectorBasis(s.ordering, s.layout.total_sector()));
}

double fci_energy(const System &s) {
  return ground_state_in_sector(s.hq, s.ordering, s.layout.total_sector()).energy;
}

json vector_json(const Eigen::VectorXd &x) {
  return json(std::vector<double>(x.data(), x.data() + x.size()));
}

void put_las(json &doc, const LasSolution &las) {
  put_energy(doc, "e_las", las.e_las);
  doc["fragment_energies"] = las.fragment_energies;
  doc["cmf_iterations"] = las.iterations;
}

void put_vqe(json &doc, const std::string &key, const VqeResult &r) {
  put_energy(doc, key, r.energy);
  doc["amplitudes"] = vector_json(r.x);
  doc["n_params"] = r.x.size();
  doc["vqe_iterations"] = r.iterations;
  doc["vqe_evaluations"] = r.evaluations;
  doc["gradient_norm"] = r.gradient_norm;
}

json run_fci(const RunConfig &c) {
  json doc;
  if (c.layout.empty()) {
    const IntegralSet ints = read_fcidump(c.fcidump);
    const int norb = ints.norb();
    const OrbitalOrdering ord = c.ordering == OrderingMode::FragmentInterleaved
                                    ? local_fragment_ordering(norb)
                                    : OrbitalOrdering::identity(2 * norb);
    const PauliSum hq = map_hamiltonian(to_spin_orbitals(ints), ord);
    put_energy(doc, "e_fci",
               ground_state_in_sector(hq, ord, {ints.n_alpha(), ints.n_beta()}).energy);
    doc["n_qubits"] = ord.n_qubits();
    return doc;
  }
  const System s = load_system(c);
  put_energy(doc, "e_fci", fci_energy(s));
  doc["n_qubits"] = s.ordering.n_qubits();
  return doc;
}

json run_las(const RunConfig &c, bool correlate) {
  const System s = load_system(c);
  const LasSolution las = cmf_solve(s.h, s.layout, c.cmf);
  json doc;
  put_las(doc, las);
  if (correlate) {
    const Statevector ref = assemble_product_state(las, s.layout, s.ordering);
    const CorrelatorCircuit circuit(build_mlocal_correlators(s.layout), s.ordering);
    const VqeResult r = vqe_minimize(ref, circuit, sector_hamiltonian(s), c.optimizer);
    put_vqe(doc, "e_las_ucc", r);
    doc["n_windows"] = circuit.correlators().size();
    doc["manifest_hash"] = generator_manifest_hash(circuit.correlators());
  }
  put_energy(doc, "e_fci", fci_energy(s));
  doc["n_qubits"] = s.ordering.n_qubits();
  return doc;
}

json run_las_vqe(const RunConfig &c) {
  const System s = load_system(c);
  const Statevector ref =
      prepare_basis_state(s.ordering.n_qubits(), aufbau_determinant(s.layout, s.ordering));
  const CorrelatorCircuit circuit({build_las_vqe_ansatz(s.layout)}, s.ordering);
  json doc;
  put_vqe(doc, "e_las_vqe", vqe_minimize(ref, circuit, sector_hamiltonian(s), c.optimizer));
  put_energy(doc, "e_hf", expectation(ref, s.hq));
  put_energy(doc, "e_fci", fci_energy(s));
  doc["n_qubits"] = s.ordering.n_qubits();
  return doc;
}

json run_qpe(const RunConfig &c) {
  const System s = load_system(c);
  const int k = c.qpe.fragment;
  if (k < 0 || k >= s.layout.n_fragments())
    throw ConfigError("qpe.fragment " + std::to_string(k) + " is not a fragment index");
  const LasSolution las = cmf_solve(s.h, s.layout, c.cmf);
  const int nk = s.layout.fragment_norb(k);
  const OrbitalOrdering local = local_fragment_ordering(nk);
  const PauliSum hk = map_hamiltonian(build_effective_one_body(s.h, s.layout, k, las.rdms), local);
  const Eigen::VectorXd spectrum =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(hk.to_dense(), Eigen::EigenvaluesOnly)
          .eigenvalues();
  QpePlan plan = plan_for_window(spectrum.minCoeff(), spectrum.maxCoeff(), c.qpe.t, c.qpe.margin);
  if (c.qpe.trotter_steps > 0) {
    plan.use_exact_propagator = false;
    plan.trotter_steps = c.qpe.trotter_steps;
  }
  const SectorSpec sector = s.layout.fragment(k).sector;
  std::uint64_t pattern = 0;
  for (int i = 0; i < sector.n_alpha; ++i) pattern |= std::uint64_t{1} << local.qubit(i);
  for (int i = 0; i < sector.n_beta; ++i) pattern |= std::uint64_t{1} << local.qubit(i + nk);
  const QpeResult res = simulate_fragment_qpe(hk, plan, prepare_basis_state(2 * nk, pattern));
  const GroundState exact = ground_state_in_sector(hk, local, sector);

  json doc;
  put_energy(doc, "e_qpe", res.energy);
  put_energy(doc, "e_fragment_exact", exact.energy);
  doc["fragment"] = k;
  doc["modal_outcome"] = res.modal_outcome;
  doc["phase"] = res.phase;
  doc["probability"] = res.distribution[res.modal_outcome];
  doc["bin_width"] = 2.0 * std::numbers::pi / plan.tau / double(1L << plan.t);
  doc["fidelity"] = fidelity(res.post_state, exact.state);
  doc["plan"] = {{"t", plan.t}, {"tau", plan.tau}, {"shift", plan.shift},
                 {"exact_propagator", plan.use_exact_propagator},
                 {"trotter_steps", plan.trotter_steps}};
  return doc;
}

json run_resources(const RunConfig &c) {
  const ScalingTable table = scaling_scan(c.resources);
  const std::string csv = table.to_csv();
  if (!c.csv.empty()) {
    std::ofstream out(c.csv);
    if (!out) throw FileNotFoundError("cannot write CSV file: " + c.csv);
    out << csv;
  }
  json doc;
  doc["rows"] = table.rows.size();
  doc["table_csv"] = csv;
  for (ScanMethod m : c.resources.methods) {
    json fit;
    for (auto [name, metric] : {std::pair{"cnot", GateMetric::Cnot},
                                std::pair{"rot1q", GateMetric::Rot1q},
                                std::pair{"clifford1q", GateMetric::Clifford1q}})
      fit[name] = fit_loglog_slope(table, m, metric);
    doc["slopes"][scan_method_name(m)] = fit;
  }
  return doc;
}

}  // namespace

const char *version_string() { return "lasucc " LASUCC_VERSION; }

const char *method_name(Method m) {
  switch (m) {
    case Method::Fci: return "fci";
    case Method::Las: return "las";
    case Method::LasUcc: return "las-ucc";
    case Method::LasVqe: return "las-vqe";
    case Method::Qpe: return "qpe";
    case Method::Resources: return "resources";
  }
  return "?";
}

Method parse_method(const std::string &s) {
  for (Method m : {Method::Fci, Method::Las, Method::LasUcc, Method::LasVqe, Method::Qpe,
                   Method::Resources})
    if (s == method_name(m)) return m;
  throw ConfigError("unknown method '" + s + "'");
}

RunConfig config_from_json(const json &doc, const std::string &base_dir) {
  reject_unknown(doc, {"method", "fcidump", "layout", "m", "ordering", "optimizer", "cmf", "qpe",
                       "resources", "out", "csv"},
                 "config");
  RunConfig c;
  if (!doc.contains("method")) throw ConfigError("config needs a 'method'");
  c.method = parse_method(take<std::string>(doc, "method", ""));
  c.fcidump = resolve(take<std::string>(doc, "fcidump", ""), base_dir);
  c.layout = resolve(take<std::string>(doc, "layout", ""), base_dir);
  c.m = take<int>(doc, "m", 0);
  try {
    c.ordering = parse_ordering_mode(take<std::string>(doc, "ordering", "fragment_interleaved"));
  } catch (const Error &e) {
    throw ConfigError(e.what());
  }
  c.out = resolve(take<std::string>(doc, "out", ""), base_dir);
  c.csv = resolve(take<std::string>(doc, "csv", ""), base_dir);
  if (doc.contains("optimizer")) {
    const json &o = doc["optimizer"];
    reject_unknown(o, {"energy_tolerance", "gradient_tolerance", "max_iterations", "gradient",
                       "fd_step"},
                   "optimizer");
    c.optimizer.energy_tolerance = take(o, "energy_tolerance", c.optimizer.energy_tolerance);
    c.optimizer.gradient_tolerance = take(o, "gradient_tolerance", c.optimizer.gradient_tolerance);
    c.optimizer.max_iterations = take(o, "max_iterations", c.optimizer.max_iterations);
    c.optimizer.fd_step = take(o, "fd_step", c.optimizer.fd_step);
    c.optimizer.gradient = parse_gradient(take<std::string>(o, "gradient", "adjoint"));
  }
  if (doc.contains("cmf")) {
    const json &o = doc["cmf"];
    reject_unknown(o, {"tolerance", "max_sweeps"}, "cmf");
    c.cmf.tolerance = take(o, "tolerance", c.cmf.tolerance);
    c.cmf.max_sweeps = take(o, "max_sweeps", c.cmf.max_sweeps);
  }
  if (doc.contains("qpe")) {
    const json &o = doc["qpe"];
    reject_unknown(o, {"fragment", "t", "margin", "trotter_steps"}, "qpe");
    c.qpe.fragment = take(o, "fragment", c.qpe.fragment);
    c.qpe.t = take(o, "t", c.qpe.t);
    c.qpe.margin = take(o, "margin", c.qpe.margin);
    c.qpe.trotter_steps = take(o, "trotter_steps", c.qpe.trotter_steps);
  }
  if (doc.contains("resources")) {
    const json &o = doc["resources"];
    reject_unknown(o, {"nf_min", "nf_max", "m", "seed", "methods"}, "resources");
    c.resources.nf_min = take(o, "nf_min", c.resources.nf_min);
    c.resources.nf_max = take(o, "nf_max", c.resources.nf_max);
    c.resources.m = take(o, "m", c.resources.m);
    c.resources.seed = take(o, "seed", c.resources.seed);
    if (o.contains("methods")) {
      c.resources.methods.clear();
      try {
        for (const auto &name : take<std::vector<std::string>>(o, "methods", {}))
          c.resources.methods.push_back(parse_scan_method(name));
      } catch (const ParseError &e) {
        throw ConfigError(e.what());
      }
    }
  }
  return c;
}

RunConfig read_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception &e) {
    throw ParseError("config file is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(doc, fs::path(path).parent_path().string());
}

json config_to_json(const RunConfig &c) {
  json doc;
  doc["method"] = method_name(c.method);
  if (!c.fcidump.empty()) doc["fcidump"] = c.fcidump;
  if (!c.layout.empty()) doc["layout"] = c.layout;
  if (c.m > 0) doc["m"] = c.m;
  doc["ordering"] = ordering_mode_name(c.ordering);
  doc["optimizer"] = {{"energy_tolerance", c.optimizer.energy_tolerance},
                      {"gradient_tolerance", c.optimizer.gradient_tolerance},
                      {"max_iterations", c.optimizer.max_iterations},
                      {"gradient", gradient_name(c.optimizer.gradient)},
                      {"fd_step", c.optimizer.fd_step}};
  doc["cmf"] = {{"tolerance", c.cmf.tolerance}, {"max_sweeps", c.cmf.max_sweeps}};
  doc["qpe"] = {{"fragment", c.qpe.fragment},
                {"t", c.qpe.t},
                {"margin", c.qpe.margin},
                {"trotter_steps", c.qpe.trotter_steps}};
  json methods = json::array();
  for (ScanMethod m : c.resources.methods) methods.push_back(scan_method_name(m));
  doc["resources"] = {{"nf_min", c.resources.nf_min},
                      {"nf_max", c.resources.nf_max},
                      {"m", c.resources.m},
                      {"seed", c.resources.seed},
                      {"methods", methods}};
  if (!c.out.empty()) doc["out"] = c.out;
  if (!c.csv.empty()) doc["csv"] = c.csv;
  return doc;
}

void validate_config(const RunConfig &c) {
  auto need = [](const std::string &path, const char *what) {
    if (path.empty()) throw ConfigError(std::string("method needs a ") + what + " path");
    if (!fs::exists(path)) throw FileNotFoundError(std::string(what) + " not found: " + path);
  };
  if (c.method != Method::Resources) need(c.fcidump, "fcidump");
  if (c.method != Method::Resources && c.method != Method::Fci) need(c.layout, "layout");
  if (c.method == Method::Fci && !c.layout.empty()) need(c.layout, "layout");
  if (c.m < 0) throw ConfigError("m must be positive");
  if (c.qpe.t < 1 || c.qpe.t > 20) throw ConfigError("qpe.t must lie in 1..20");
  if (c.optimizer.max_iterations < 1) throw ConfigError("optimizer.max_iterations must be positive");
}

json run(const RunConfig &config) {
  validate_config(config);
  json doc;
  switch (config.method) {
    case Method::Fci: doc = run_fci(config); break;
    case Method::Las: doc = run_las(config, false); break;
    case Method::LasUcc: doc = run_las(config, true); break;
    case Method::LasVqe: doc = run_las_vqe(config); break;
    case Method::Qpe: doc = run_qpe(config); break;
    case Method::Resources: doc = run_resources(config); break;
  }
  doc["method"] = method_name(config.method);
  doc["config"] = config_to_json(config);
  doc["version"] = version_string();
  return doc;
}

std::string run_scan(const RunConfig &base, const std::string &dir) {
  if (!fs::is_directory(dir)) throw FileNotFoundError("scan directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".fcidump") files.push_back(e.path());
  if (files.empty()) throw FileNotFoundError("no .fcidump files in " + dir);
  std::sort(files.begin(), files.end());
  std::ostringstream csv;
  csv << "geometry,e_las,e_las_ucc,e_fci\n";
  for (const auto &f : files) {
    RunConfig c = base;
    c.method = Method::LasUcc;
    c.fcidump = f.string();
    const json r = run(c);
    csv << f.stem().string() << ',' << r["energies_12dp"]["e_las"].get<std::string>() << ','
        << r["energies_12dp"]["e_las_ucc"].get<std::string>() << ','
        << r["energies_12dp"]["e_fci"].get<std::string>() << '\n';
  }
  return csv.str();
}

int exit_code(ErrorKind kind) { return 10 + static_cast<int>(kind); }

json error_report(const Error &e) {
  json doc{{"error", {{"kind", error_kind_name(e.kind())}, {"message", e.what()}}},
           {"exit_code", exit_code(e.kind())},
           {"version", version_string()}};
  if (const auto *c = dynamic_cast<const ConvergenceError *>(&e))
    doc["error"]["residual"] = c->residual();
  if (const auto *o = dynamic_cast<const OptimizationError *>(&e)) {
    doc["error"]["best_energy"] = o->best_energy();
    doc["error"]["best_x"] = o->best_x();
  }
  return doc;
}

}  // namespace lasucc
