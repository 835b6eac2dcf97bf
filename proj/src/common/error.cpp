// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/common/error.hpp>

namespace plannerforge
{

std::string_view to_string(ErrorCode code)
{
  switch (code)
  {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::MalformedUri: return "MalformedUri";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::UnknownProperty: return "UnknownProperty";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::UnsupportedXacroFeature: return "UnsupportedXacroFeature";
    case ErrorCode::UnsupportedJointType: return "UnsupportedJointType";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::CyclicTree: return "CyclicTree";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::UnknownGeometryType: return "UnknownGeometryType";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::LimitContradiction: return "LimitContradiction";
    case ErrorCode::UnknownGroup: return "UnknownGroup";
    case ErrorCode::UnknownLink: return "UnknownLink";
    case ErrorCode::UnknownJoint: return "UnknownJoint";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::UnknownIkSolver: return "UnknownIkSolver";
    case ErrorCode::InvalidGeometry: return "InvalidGeometry";
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::UnsupportedGeometry: return "UnsupportedGeometry";
    case ErrorCode::UnknownPlanner: return "UnknownPlanner";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::GoalUnreachable: return "GoalUnreachable";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownRobot: return "UnknownRobot";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace
{
std::string format_message(ErrorCode code, const std::string &message, std::optional<int> line)
{
  std::string out(to_string(code));
  if (line)
    out += " (line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}
}  // namespace

Error::Error(ErrorCode code, const std::string &message, std::optional<int> line)
  : std::runtime_error(format_message(code, message, line)), code_(code), line_(line), message_(message)
{
}

}  // namespace plannerforge
