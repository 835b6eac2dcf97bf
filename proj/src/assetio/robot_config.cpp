// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/assetio/description.hpp>
#include <plannerforge/assetio/resolve.hpp>
#include <plannerforge/assetio/robot_config.hpp>
#include <plannerforge/common/error.hpp>

#include "yaml_util.hpp"

namespace plannerforge
{

std::map<std::string, JointLimitOverride> parse_joint_limits_yaml(const std::string &text)
{
  const YAML::Node doc = yaml::load(text);
  std::map<std::string, JointLimitOverride> out;
  const YAML::Node limits = doc["joint_limits"];
  if (!limits)
    return out;
  yaml::require_map(limits, "joint_limits");
  for (const auto &entry : limits)
  {
    const auto joint = entry.first.as<std::string>();
    const std::string path = "joint_limits." + joint;
    yaml::require_map(entry.second, path);
    JointLimitOverride o;
    if (entry.second["lower"])
      o.lower = yaml::real(entry.second["lower"], path + ".lower");
    if (entry.second["upper"])
      o.upper = yaml::real(entry.second["upper"], path + ".upper");
    if (entry.second["max_velocity"])
      o.max_velocity = yaml::real(entry.second["max_velocity"], path + ".max_velocity");
    out[joint] = o;
  }
  return out;
}

std::map<std::string, KinematicsConfig> parse_kinematics_yaml(const std::string &text)
{
  const YAML::Node doc = yaml::load(text);
  std::map<std::string, KinematicsConfig> out;
  if (!doc || doc.IsNull())
    return out;
  yaml::require_map(doc, "kinematics");
  for (const auto &entry : doc)
  {
    const auto group = entry.first.as<std::string>();
    yaml::require_map(entry.second, group);
    KinematicsConfig cfg;
    if (entry.second["ik_solver_id"])
      cfg.ik_solver_id = yaml::string(entry.second["ik_solver_id"], group + ".ik_solver_id");
    if (entry.second["ik_timeout_s"])
      cfg.ik_timeout_s = yaml::real(entry.second["ik_timeout_s"], group + ".ik_timeout_s");
    if (entry.second["ik_attempts"])
      cfg.ik_attempts = static_cast<int>(yaml::integer(entry.second["ik_attempts"], group + ".ik_attempts"));
    out[group] = cfg;
  }
  return out;
}

RawRobotDescription load_robot_description(const RobotFiles &files,
                                           const std::vector<std::filesystem::path> &package_roots)
{
  RawRobotDescription raw;
  raw.urdf_xml = expand_xacro_properties(load_resource(files.urdf, package_roots));
  raw.srdf_xml = load_resource(files.srdf, package_roots);
  if (files.joint_limits)
    raw.joint_limit_overrides = parse_joint_limits_yaml(load_resource(*files.joint_limits, package_roots));
  if (files.kinematics)
    raw.kinematics_config = parse_kinematics_yaml(load_resource(*files.kinematics, package_roots));
  return raw;
}

}  // namespace plannerforge
