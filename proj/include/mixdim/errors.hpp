#pragma once

#include <stdexcept>
#include <string>

namespace mixdim {

enum class ErrorKind {
  Domain,          // parameter outside a knot vector / element
  UnsupportedOrder,
  Config,
  Rank,
  InvertedElement,
  NoConvergence,
  Model,           // theory/basis mismatch, e.g. C0 basis for rotation-free bending
  InterfaceGeometry,
  Normalization,
  Pairing,
  Constraint,
  Definiteness,
  OverDeactivation,
  DegenerateCut,
  Locate,
  Internal,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::UnsupportedOrder: return "unsupported-order";
    case ErrorKind::Config: return "config";
    case ErrorKind::Rank: return "rank";
    case ErrorKind::InvertedElement: return "inverted-element";
    case ErrorKind::NoConvergence: return "no-convergence";
    case ErrorKind::Model: return "model";
    case ErrorKind::InterfaceGeometry: return "interface-geometry";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::Pairing: return "pairing";
    case ErrorKind::Constraint: return "constraint";
    case ErrorKind::Definiteness: return "definiteness";
    case ErrorKind::OverDeactivation: return "over-deactivation";
    case ErrorKind::DegenerateCut: return "degenerate-cut";
    case ErrorKind::Locate: return "locate";
    case ErrorKind::Internal: return "internal";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace mixdim
