#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lasucc/cli.hpp"

using namespace lasucc;

namespace {

struct Overrides {
  std::string config, fcidump, layout, method, ordering, out, csv;
  int m = 0;
};

void add_overrides(CLI::App &app, Overrides &o) {
  app.add_option("--config", o.config, "JSON run configuration");
  app.add_option("--fcidump", o.fcidump, "FCIDUMP integral file");
  app.add_option("--layout", o.layout, "fragment layout JSON");
  app.add_option("--method", o.method, "fci, las, las-ucc, las-vqe, qpe or resources");
  app.add_option("--m", o.m, "fragments per correlator window");
  app.add_option("--ordering", o.ordering, "blocked_spin or fragment_interleaved");
  app.add_option("--out", o.out, "output path (default stdout)");
  app.add_option("--csv", o.csv, "resources table CSV path");
}

RunConfig resolve(const Overrides &o) {
  RunConfig c;
  if (!o.config.empty()) c = read_config(o.config);
  if (!o.method.empty()) c.method = parse_method(o.method);
  if (!o.fcidump.empty()) c.fcidump = o.fcidump;
  if (!o.layout.empty()) c.layout = o.layout;
  if (o.m > 0) c.m = o.m;
  if (!o.ordering.empty()) c.ordering = parse_ordering_mode(o.ordering);
  if (!o.out.empty()) c.out = o.out;
  if (!o.csv.empty()) c.csv = o.csv;
  return c;
}

void emit(const std::string &text, const std::string &path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw FileNotFoundError("cannot write output file: " + path);
  out << text;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Localized active space unitary coupled cluster toolkit"};
  app.set_version_flag("--version", version_string());
  Overrides top;
  add_overrides(app, top);

  auto *scan = app.add_subcommand("scan", "las-ucc over every *.fcidump in a directory");
  Overrides sub;
  std::string dir;
  add_overrides(*scan, sub);
  scan->add_option("dir", dir, "directory of FCIDUMP files")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*scan) {
      const RunConfig c = resolve(sub);
      emit(run_scan(c, dir), c.out);
    } else {
      const RunConfig c = resolve(top);
      emit(run(c).dump(2) + "\n", c.out);
    }
  } catch (const Error &e) {
    std::cerr << error_report(e).dump(2) << "\n";
    return exit_code(e.kind());
  } catch (const std::exception &e) {
    std::cerr << nlohmann::json{{"error", {{"kind", "internal"}, {"message", e.what()}}}}.dump(2)
              << "\n";
    return 1;
  }
  return 0;
}
