#include "lasucc/errors.hpp"

namespace lasucc {

const char *error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Format: return "format";
    case ErrorKind::Index: return "index";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::FileNotFound: return "file-not-found";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Contract: return "contract";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Sector: return "sector";
    case ErrorKind::Layout: return "layout";
    case ErrorKind::Ordering: return "ordering";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Optimization: return "optimization";
    case ErrorKind::Aliasing: return "aliasing";
    case ErrorKind::Fit: return "fit";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace lasucc
