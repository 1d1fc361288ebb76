#include "cphmm/error.hpp"

namespace cphmm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingExecution: return "MissingExecution";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LengthError: return "LengthError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ModelLoadError: return "ModelLoadError";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::SymbolOutOfRange: return "SymbolOutOfRange";
    case ErrorCode::IncompleteGrid: return "IncompleteGrid";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::SpecError: return "SpecError";
    case ErrorCode::ParamError: return "ParamError";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::EmptyModelSet: return "EmptyModelSet";
    case ErrorCode::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::SpecError:
    case ErrorCode::ParamError:
      return 2;
    case ErrorCode::MissingExecution:
    case ErrorCode::ShapeError:
    case ErrorCode::ParseError:
    case ErrorCode::LengthError:
    case ErrorCode::IoError:
    case ErrorCode::ModelLoadError:
    case ErrorCode::AlphabetMismatch:
    case ErrorCode::SymbolOutOfRange:
    case ErrorCode::IncompleteGrid:
      return 3;
    default:
      return 4;
  }
}

}  // namespace cphmm
