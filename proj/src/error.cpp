#include "gtrs/error.hpp"

namespace gtrs {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Unbounded: return "unbounded below";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::IterativeFailure: return "iterative failure";
    case ErrorKind::Precondition: return "precondition violation";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::StalledLineSearch: return "stalled line search";
  }
  return "unknown";
}

}  // namespace gtrs
