#include "deeptraj/error.hpp"

namespace deeptraj {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::ConstantVector: return "ConstantVector";
    case ErrorKind::ConstantColumn: return "ConstantColumn";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::DegenerateCovariance: return "DegenerateCovariance";
    case ErrorKind::EmptyBatch: return "EmptyBatch";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorKind::EmptyConfig: return "EmptyConfig";
    case ErrorKind::EmptyData: return "EmptyData";
    case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::DegeneratePartition: return "DegeneratePartition";
    case ErrorKind::DegenerateCluster: return "DegenerateCluster";
    case ErrorKind::SingularDesign: return "SingularDesign";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace deeptraj
