#include "wco/errors.hpp"

namespace wco {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::ClassificationAmbiguous: return "ClassificationAmbiguous";
    case ErrorCode::LimitExceeded: return "LimitExceeded";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::LiftDiscontinuity: return "LiftDiscontinuity";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::OrbitShortage: return "OrbitShortage";
    case ErrorCode::NonAnalytic: return "NonAnalytic";
    case ErrorCode::LayerBudgetExceeded: return "LayerBudgetExceeded";
    case ErrorCode::BasinUnresolved: return "BasinUnresolved";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace wco
