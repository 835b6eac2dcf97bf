// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <plannerforge/planner/planner.hpp>
#include <plannerforge/scene/scene.hpp>

namespace plannerforge
{

/// Structurally identical model under a new name (InvalidArgument if empty).
RobotModelPtr clone_robot(const RobotModel &model, const std::string &new_name);

struct WorldRobot
{
  std::string name;
  RobotModelPtr model;
  Pose base = Pose::Identity();
};

struct CompositeMember
{
  std::string robot;
  std::string group;
};

/// Several robots at fixed base poses plus composite planning groups over them.
/// Owner names in collision queries are "<robot>/<link>".
class World
{
public:
  /// DuplicateName if `name` is taken.
  void add_robot(const std::string &name, RobotModelPtr model, const Pose &base = Pose::Identity());
  bool has_robot(const std::string &name) const;
  /// UnknownRobot.
  const WorldRobot &robot(const std::string &name) const;
  const std::vector<WorldRobot> &robots() const { return robots_; }

  /// EmptyGroup, UnknownRobot, UnknownGroup; DuplicateName if the group name
  /// is taken or a robot appears twice.
  void define_composite_group(const std::string &name, const std::vector<CompositeMember> &members);
  bool has_composite_group(const std::string &name) const { return composites_.count(name) > 0; }
  /// UnknownGroup.
  const std::vector<CompositeMember> &composite_group(const std::string &name) const;
  int composite_dimension(const std::string &name) const;
  /// "<robot>/<joint>" in member order.
  std::vector<std::string> composite_joint_names(const std::string &name) const;

  /// World-level exemption between two "<robot>/<link>" names. UnknownRobot / UnknownLink.
  void allow_collision(const std::string &a, const std::string &b);
  const std::set<LinkPair> &allowed_collisions() const { return allowed_; }

  /// Collision world with all robots, the given world-frame objects and the
  /// allow list. Robot slots follow robots() order.
  CollisionWorld collision_world(const std::vector<CollisionObject> &objects = {}) const;

private:
  std::vector<WorldRobot> robots_;
  std::map<std::string, std::vector<CompositeMember>> composites_;
  std::set<LinkPair> allowed_;
};

/// One state per world robot, keyed by robot name.
using WorldState = std::map<std::string, RobotState>;

/// Default state (zeros clamped into limits) for every robot.
WorldState default_world_state(const World &world);

/// "<robot>/<link>" → world pose = base ∘ robot FK.
std::map<std::string, Pose> world_forward_kinematics(const World &world, const WorldState &state);

/// Values of a composite group, concatenated in member order.
Eigen::VectorXd composite_values(const World &world, const std::string &group, const WorldState &state);
/// Writes composite values back into `state`. ArityMismatch.
void set_composite_values(const World &world, const std::string &group, const Eigen::VectorXd &values,
                          WorldState &state);

/// Planning space over a composite group. Non-group joints stay at `reference`.
class CompositeSpace : public PlanningSpace
{
public:
  CompositeSpace(const World &world, const std::string &group, const std::vector<CollisionObject> &objects = {},
                 const WorldState &reference = {});

  /// Per-robot variable vectors in world robot order.
  std::vector<Eigen::VectorXd> robot_values(const Eigen::VectorXd &x) const;
  bool in_collision(const Eigen::VectorXd &x) const override;

private:
  struct Slice
  {
    int robot;
    std::vector<int> variables;
    Eigen::Index offset;
  };

  std::vector<Eigen::VectorXd> reference_;
  std::vector<Slice> slices_;
  CollisionWorld world_;
};

/// Composite request: start/goal keys are "<robot>/<joint>". Same contract
/// and errors as plan(); pose goals are not supported (InvalidRequest).
PlanResult plan_composite(const World &world, const std::vector<CollisionObject> &objects,
                          const MotionRequest &request, const PlannerSettings &settings = {},
                          const PlannerRegistry &registry = default_registry(), const WorldState &reference = {});

}  // namespace plannerforge
