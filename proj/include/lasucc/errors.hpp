#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lasucc {

/// Error categories. Each maps to a distinct process exit code in the CLI.
enum class ErrorKind {
  Format,
  Index,
  Parse,
  FileNotFound,
  Capacity,
  Contract,
  Dimension,
  Sector,
  Layout,
  Ordering,
  Convergence,
  Optimization,
  Aliasing,
  Fit,
  Config,
};

const char *error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define LASUCC_DEFINE_ERROR(Name, Kind)                                        \
  class Name : public Error {                                                  \
   public:                                                                     \
    explicit Name(const std::string &what) : Error(ErrorKind::Kind, what) {}   \
  };

LASUCC_DEFINE_ERROR(FormatError, Format)
LASUCC_DEFINE_ERROR(IndexError, Index)
LASUCC_DEFINE_ERROR(ParseError, Parse)
LASUCC_DEFINE_ERROR(FileNotFoundError, FileNotFound)
LASUCC_DEFINE_ERROR(CapacityError, Capacity)
LASUCC_DEFINE_ERROR(ContractError, Contract)
LASUCC_DEFINE_ERROR(DimensionError, Dimension)
LASUCC_DEFINE_ERROR(SectorError, Sector)
LASUCC_DEFINE_ERROR(LayoutError, Layout)
LASUCC_DEFINE_ERROR(OrderingError, Ordering)
LASUCC_DEFINE_ERROR(AliasingError, Aliasing)
LASUCC_DEFINE_ERROR(FitError, Fit)
LASUCC_DEFINE_ERROR(ConfigError, Config)

#undef LASUCC_DEFINE_ERROR

/// Fixed-point iteration did not reach tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string &what, double residual)
      : Error(ErrorKind::Convergence, what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Optimizer hit its iteration cap. Carries the best point seen so far.
class OptimizationError : public Error {
 public:
  OptimizationError(const std::string &what, double best_energy,
                    std::vector<double> best_x)
      : Error(ErrorKind::Optimization, what), best_energy_(best_energy),
        best_x_(std::move(best_x)) {}
  double best_energy() const noexcept { return best_energy_; }
  const std::vector<double> &best_x() const noexcept { return best_x_; }

 private:
  double best_energy_;
  std::vector<double> best_x_;
};

}  // namespace lasucc
