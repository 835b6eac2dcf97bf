// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <plannerforge/kinematics/robot_model.hpp>

namespace plannerforge
{

/// Result of a distance query. `separation` is 0 in collision and the
/// largest finite double when no pair is checked (nearest_pair empty).
struct DistanceReport
{
  bool in_collision = false;
  double separation = 0.0;
  std::optional<std::pair<std::string, std::string>> nearest_pair;
};

/// Flattened collision problem: one or more robots at fixed base poses, static
/// and attached objects, and a symmetric exclusion matrix over named owners
/// (robot links and objects). Query inputs are per-robot variable vectors.
///
/// Default exclusions: shapes of the same owner, links of the same robot that
/// are adjacent or allowed by that robot's SRDF matrix, and attached objects
/// against their host link. Links of different robots are never excluded
/// unless allow() is called.
class CollisionWorld
{
public:
  /// Returns the robot slot. Owner names are `prefix + link name`.
  int add_robot(RobotModelPtr model, const Pose &base, const std::string &prefix = "");
  /// Returns the owner id of the object.
  int add_object(const std::string &name, const Geometry &geometry, const Pose &pose);
  /// Object follows `link` of robot `robot` with the given link-relative pose.
  void attach(int object_owner, int robot, int link, const Pose &relative);
  void allow(int owner_a, int owner_b);

  std::optional<int> find_owner(const std::string &name) const;
  const std::string &owner_name(int owner) const { return owner_names_[static_cast<std::size_t>(owner)]; }
  int robot_count() const { return static_cast<int>(robots_.size()); }
  int link_owner(int robot, int link) const;

  bool in_collision(std::span<const Eigen::VectorXd> robot_values) const;
  DistanceReport distance(std::span<const Eigen::VectorXd> robot_values) const;

  bool in_collision(const Eigen::VectorXd &values) const { return in_collision(std::span(&values, 1)); }
  DistanceReport distance(const Eigen::VectorXd &values) const { return distance(std::span(&values, 1)); }

private:
  struct Robot
  {
    RobotModelPtr model;
    Pose base;
    int first_owner;
  };

  struct Shape
  {
    int owner;
    Geometry geometry;
    Pose local;    // relative to the link (robot shapes / attachments) or world (static objects)
    int robot;     // -1 for static
    int link;      // -1 for static
    double bound;  // bounding radius, +inf for meshes
  };

  struct Placed
  {
    const Shape *shape;
    Pose pose;
  };

  int add_owner(const std::string &name);
  void set_excluded(int a, int b);
  bool excluded(int a, int b) const;
  std::vector<Placed> place(std::span<const Eigen::VectorXd> robot_values) const;

  std::vector<Robot> robots_;
  std::vector<std::string> owner_names_;
  std::vector<Shape> shapes_;
  std::vector<std::vector<char>> excluded_;  // [owner][owner]
};

}  // namespace plannerforge
