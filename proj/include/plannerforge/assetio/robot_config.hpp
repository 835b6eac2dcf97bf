// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace plannerforge
{

/// Per-joint limit overrides; any field left empty keeps the URDF value.
struct JointLimitOverride
{
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> max_velocity;
};

struct KinematicsConfig
{
  std::string ik_solver_id = "dls";
  double ik_timeout_s = 0.05;
  int ik_attempts = 1;
};

/// Everything needed to build a robot model, still in textual form.
struct RawRobotDescription
{
  std::string urdf_xml;
  std::string srdf_xml;
  std::map<std::string, JointLimitOverride> joint_limit_overrides;
  std::map<std::string, KinematicsConfig> kinematics_config;
};

/// Locations of the four robot files; the last two are optional.
struct RobotFiles
{
  std::string urdf;
  std::string srdf;
  std::optional<std::string> joint_limits;
  std::optional<std::string> kinematics;
};

/// `joint_limits: {<joint>: {lower, upper, max_velocity}}`
std::map<std::string, JointLimitOverride> parse_joint_limits_yaml(const std::string &text);

/// `<group>: {ik_solver_id, ik_timeout_s, ik_attempts}`
std::map<std::string, KinematicsConfig> parse_kinematics_yaml(const std::string &text);

/// Resolves and reads all robot files; xacro properties in the URDF are expanded.
RawRobotDescription load_robot_description(const RobotFiles &files,
                                           const std::vector<std::filesystem::path> &package_roots);

}  // namespace plannerforge
