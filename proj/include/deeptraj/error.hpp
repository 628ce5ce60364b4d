#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace deeptraj {

/// Failure categories raised across the library. Each operation documents
/// which of these it can produce.
enum class ErrorKind {
  ShapeMismatch,
  LengthMismatch,
  SizeMismatch,
  ConstantVector,
  ConstantColumn,
  TooFewPoints,
  DegenerateCovariance,
  EmptyBatch,
  EmptyDataset,
  EmptyInput,
  EmptyTrajectory,
  EmptyConfig,
  EmptyData,
  NonFiniteLoss,
  KTooLarge,
  DegeneratePartition,
  DegenerateCluster,
  SingularDesign,
  InvalidArgument,
  ParseError,
  RaggedRows,
  NonFiniteValue,
  DuplicateId,
  UnknownKey,
  IoError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace deeptraj
