#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dtspan {

/// Every failure the library reports. The enumerator names are part of the
/// CLI's machine-readable error objects, so keep them stable.
enum class Errc {
  NonSquare,
  NegativeEntry,
  NonzeroDiagonal,
  DuplicateLabel,
  IndexOutOfRange,
  GroundSetMismatch,
  NotAMetric,
  LengthMismatch,
  NotInPolyhedron,
  UnknownElement,
  NotInTightSpan,
  NotInP,
  UnboundedDirection,
  NotInQ,
  NotBalanced,
  EmptyIntersection,
  GroundSetTooLarge,
  DimensionTooHigh,
  UnknownVertex,
  NotATree,
  EmptySubtree,
  RankTooHigh,
  NotDirectedTreeMetric,
  NonSingletonSubtrees,
  MalformedLP,
  NetworkTooLarge,
  MalformedNetwork,
  NotAnExtension,
  NotEulerian,
  InputParseError,
  UsageError,
  InternalError,
};

inline std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::NonSquare: return "NonSquare";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::NonzeroDiagonal: return "NonzeroDiagonal";
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::GroundSetMismatch: return "GroundSetMismatch";
    case Errc::NotAMetric: return "NotAMetric";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::NotInPolyhedron: return "NotInPolyhedron";
    case Errc::UnknownElement: return "UnknownElement";
    case Errc::NotInTightSpan: return "NotInTightSpan";
    case Errc::NotInP: return "NotInP";
    case Errc::UnboundedDirection: return "UnboundedDirection";
    case Errc::NotInQ: return "NotInQ";
    case Errc::NotBalanced: return "NotBalanced";
    case Errc::EmptyIntersection: return "EmptyIntersection";
    case Errc::GroundSetTooLarge: return "GroundSetTooLarge";
    case Errc::DimensionTooHigh: return "DimensionTooHigh";
    case Errc::UnknownVertex: return "UnknownVertex";
    case Errc::NotATree: return "NotATree";
    case Errc::EmptySubtree: return "EmptySubtree";
    case Errc::RankTooHigh: return "RankTooHigh";
    case Errc::NotDirectedTreeMetric: return "NotDirectedTreeMetric";
    case Errc::NonSingletonSubtrees: return "NonSingletonSubtrees";
    case Errc::MalformedLP: return "MalformedLP";
    case Errc::NetworkTooLarge: return "NetworkTooLarge";
    case Errc::MalformedNetwork: return "MalformedNetwork";
    case Errc::NotAnExtension: return "NotAnExtension";
    case Errc::NotEulerian: return "NotEulerian";
    case Errc::InputParseError: return "InputParseError";
    case Errc::UsageError: return "UsageError";
    case Errc::InternalError: return "InternalError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

/// Internal invariant check. A failure here is a bug, not bad input.
inline void ensure(bool cond, const char* what) {
  if (!cond) fail(Errc::InternalError, what);
}

}  // namespace dtspan
