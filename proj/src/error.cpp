#include "pseudodiag/error.hpp"

namespace pseudodiag {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::TooFewElements: return "TooFewElements";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownNodeReference: return "UnknownNodeReference";
    case ErrorCode::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::OverlapUnresolvable: return "OverlapUnresolvable";
    case ErrorCode::NoEdges: return "NoEdges";
    case ErrorCode::DegenerateNegative: return "DegenerateNegative";
    case ErrorCode::IndistinguishableSwap: return "IndistinguishableSwap";
    case ErrorCode::TooFewLabels: return "TooFewLabels";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::BatchTooSmall: return "BatchTooSmall";
    case ErrorCode::NoSamples: return "NoSamples";
    case ErrorCode::EmptyItem: return "EmptyItem";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace pseudodiag
