#include "boxlab/errors.hpp"

namespace boxlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::SizeOverflow: return "size-overflow";
    case ErrorKind::OutOfVolume: return "out-of-volume";
    case ErrorKind::IncompleteSample: return "incomplete-sample";
    case ErrorKind::SpectralProximity: return "spectral-proximity";
    case ErrorKind::InsufficientVolume: return "insufficient-volume";
    case ErrorKind::NumericalFailure: return "numerical-failure";
    case ErrorKind::InvalidOrder: return "invalid-order";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::Magnitude: return "magnitude";
    case ErrorKind::CombinatorialLimit: return "combinatorial-limit";
    case ErrorKind::Embedding: return "embedding";
    case ErrorKind::ModulusCap: return "modulus-cap";
    case ErrorKind::MatchingFailure: return "matching-failure";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

}  // namespace boxlab
