// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plannerforge
{

enum class ErrorCode
{
  // assetio
  NotFound,
  MalformedUri,
  MalformedXml,
  UnknownProperty,
  CycleDetected,
  UnsupportedXacroFeature,
  UnsupportedJointType,
  DanglingReference,
  MultipleRoots,
  CyclicTree,
  EmptyGroup,
  SchemaViolation,
  UnknownGeometryType,
  SchemaMismatch,
  IoFailure,
  ParseError,
  // kinematics
  LimitContradiction,
  UnknownGroup,
  UnknownLink,
  UnknownJoint,
  ArityMismatch,
  UnknownIkSolver,
  // scene
  InvalidGeometry,
  UnknownObject,
  UnsupportedGeometry,
  // planner
  UnknownPlanner,
  InvalidRequest,
  GoalUnreachable,
  // multirobot
  DuplicateName,
  UnknownRobot,
  // misc
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// The single exception type thrown by the library. The code identifies the
/// failure class; `line` is set when the failure can be tied to a source line.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &message, std::optional<int> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<int> line() const noexcept { return line_; }
  /// The message without the code and line prefix.
  const std::string &message() const noexcept { return message_; }

private:
  ErrorCode code_;
  std::optional<int> line_;
  std::string message_;
};

}  // namespace plannerforge
