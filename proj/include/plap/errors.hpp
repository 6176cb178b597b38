#pragma once

#include <stdexcept>
#include <string>

namespace plap {

enum class ErrorCode {
  DisconnectedGraph,
  NonpositiveWeight,
  EmptyDomain,
  EmptyBoundary,
  InvalidSpace,
  EmptySet,
  DegenerateGrid,
  InvalidPath,
  IsolatedVertex,
  SolverFailure,
  EmptyFamily,
  DegenerateExponent,
  NotMeanZero,
  BadRadii,
  BadRadius,
  BallNotInterior,
  HypothesisFails,
  TooManyVertices,
  BadParams,
  ParseError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::EmptyBoundary: return "EmptyBoundary";
    case ErrorCode::InvalidSpace: return "InvalidSpace";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::DegenerateGrid: return "DegenerateGrid";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::IsolatedVertex: return "IsolatedVertex";
    case ErrorCode::SolverFailure: return "SolverFailure";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::DegenerateExponent: return "DegenerateExponent";
    case ErrorCode::NotMeanZero: return "NotMeanZero";
    case ErrorCode::BadRadii: return "BadRadii";
    case ErrorCode::BadRadius: return "BadRadius";
    case ErrorCode::BallNotInterior: return "BallNotInterior";
    case ErrorCode::HypothesisFails: return "HypothesisFails";
    case ErrorCode::TooManyVertices: return "TooManyVertices";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace plap
