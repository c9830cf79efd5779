#include "fomlab/error.hpp"

namespace fomlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedEvents: return "MalformedEvents";
    case ErrorCode::EdgeViolatesModel: return "EdgeViolatesModel";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::RankMissing: return "RankMissing";
    case ErrorCode::NotBipartite: return "NotBipartite";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotActive: return "NotActive";
    case ErrorCode::ChargingInvalid: return "ChargingInvalid";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ParamsInvalid: return "ParamsInvalid";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace fomlab
