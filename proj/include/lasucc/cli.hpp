#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "lasucc/errors.hpp"
#include "lasucc/fermion.hpp"
#include "lasucc/lasfrag.hpp"
#include "lasucc/resources.hpp"
#include "lasucc/ucc.hpp"

namespace lasucc {

const char *version_string();

enum class Method { Fci, Las, LasUcc, LasVqe, Qpe, Resources };
const char *method_name(Method m);
Method parse_method(const std::string &s);

struct QpeConfig {
  int fragment = 0;
  int t = 10;
  double margin = 0.1;
  int trotter_steps = 0;  ///< 0 selects the exact propagator
};

struct RunConfig {
  Method method = Method::Fci;
  std::string fcidump;
  std::string layout;
  int m = 0;  ///< 0 keeps the layout's own m
  OrderingMode ordering = OrderingMode::FragmentInterleaved;
  VqeOptions optimizer;
  CmfOptions cmf;
  QpeConfig qpe;
  ScanOptions resources;
  std::string out;  ///< result document; empty writes to stdout
  std::string csv;  ///< resources table; optional
};

/// Relative paths resolve against `base_dir`. Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json &doc, const std::string &base_dir = "");
RunConfig read_config(const std::string &path);
nlohmann::json config_to_json(const RunConfig &config);

/// Throws ConfigError for missing method-specific fields and
/// FileNotFoundError for inputs that do not exist.
void validate_config(const RunConfig &config);

/// Executes the pipeline and returns the result document. The document
/// embeds the resolved config and version, and holds no timing or host data,
/// so identical inputs give identical bytes.
nlohmann::json run(const RunConfig &config);

/// Runs `base` over every *.fcidump in `dir` (sorted by file name) with the
/// las-ucc method; returns CSV rows geometry,e_las,e_las_ucc,e_fci.
std::string run_scan(const RunConfig &base, const std::string &dir);

/// 0 for success is never returned; every kind has its own code.
int exit_code(ErrorKind kind);
nlohmann::json error_report(const Error &e);

}  // namespace lasucc
