// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <plannerforge/common/geometry.hpp>

namespace plannerforge
{

/// Removes `<xacro:property name value/>` elements and substitutes `${name}` in
/// attribute values until fixpoint (depth limit 16). Documents without xacro
/// content are returned unchanged. Macros, includes and conditionals throw
/// UnsupportedXacroFeature.
std::string expand_xacro_properties(const std::string &xml);

enum class JointType
{
  Fixed,
  Revolute,
  Continuous,
  Prismatic,
};

std::string to_string(JointType type);

struct CollisionShape
{
  Geometry geometry;
  Pose origin = Pose::Identity();
};

struct UrdfLink
{
  std::string name;
  std::vector<CollisionShape> collisions;
};

struct UrdfLimits
{
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> velocity;
};

struct UrdfJoint
{
  std::string name;
  JointType type = JointType::Fixed;
  std::string parent;
  std::string child;
  Pose origin = Pose::Identity();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();
  std::optional<UrdfLimits> limits;
};

/// Parsed URDF: links and joints in document order plus the root link.
struct UrdfTree
{
  std::string name;
  std::string root;
  std::vector<UrdfLink> links;
  std::vector<UrdfJoint> joints;

  const UrdfLink *find_link(const std::string &name) const;
  const UrdfJoint *find_joint(const std::string &name) const;
};

UrdfTree parse_urdf(const std::string &xml);

/// Canonical URDF rendering of a parsed tree; parse_urdf(to_urdf_xml(t)) == t.
std::string to_urdf_xml(const UrdfTree &tree);

bool structurally_equal(const UrdfTree &a, const UrdfTree &b, double pose_tolerance = 0.0);

using LinkPair = std::pair<std::string, std::string>;

/// Unordered pair stored with the lexicographically smaller name first.
LinkPair make_link_pair(const std::string &a, const std::string &b);

struct SrdfInfo
{
  std::map<std::string, std::vector<std::string>> groups;
  std::set<LinkPair> disabled_collisions;

  bool collision_disabled(const std::string &a, const std::string &b) const
  {
    return disabled_collisions.count(make_link_pair(a, b)) > 0;
  }
};

SrdfInfo parse_srdf(const std::string &xml, const UrdfTree &tree);

}  // namespace plannerforge
