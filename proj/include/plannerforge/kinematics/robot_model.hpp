// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include <plannerforge/assetio/description.hpp>
#include <plannerforge/assetio/robot_config.hpp>
#include <plannerforge/common/geometry.hpp>

namespace plannerforge
{

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

struct Link
{
  std::string name;
  std::vector<CollisionShape> collisions;
  int parent_joint = -1;  ///< -1 for the root link
  std::vector<int> child_joints;
};

struct Joint
{
  std::string name;
  JointType type = JointType::Fixed;
  int parent_link = -1;
  int child_link = -1;
  Pose origin = Pose::Identity();
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();
  bool has_position_limits = false;
  double lower = 0.0;
  double upper = 0.0;
  double max_velocity = 1.0;
  int variable_index = -1;  ///< -1 for fixed joints

  bool actuated() const { return type != JointType::Fixed; }
};

/// Transform contributed by a joint at `value` (after its origin).
Pose joint_motion(const Joint &joint, double value);

class RobotModel;
using RobotModelPtr = std::shared_ptr<const RobotModel>;

/// Immutable kinematic tree with planning groups and an allowed-collision
/// matrix. Joints are stored parent-before-child; variable indices follow
/// that order over actuated joints.
class RobotModel
{
public:
  /// Parses the URDF/SRDF, merges limit overrides, validates everything.
  static RobotModelPtr build(const RawRobotDescription &raw);

  RobotModel(const UrdfTree &urdf, const SrdfInfo &srdf,
             const std::map<std::string, JointLimitOverride> &overrides,
             std::map<std::string, KinematicsConfig> kinematics);

  /// Structurally identical model under another name.
  RobotModelPtr clone(const std::string &new_name) const;

  const std::string &name() const { return name_; }
  const std::vector<Link> &links() const { return links_; }
  const std::vector<Joint> &joints() const { return joints_; }
  const Link &link(int index) const { return links_[static_cast<std::size_t>(index)]; }
  const Joint &joint(int index) const { return joints_[static_cast<std::size_t>(index)]; }
  int root_link() const { return 0; }

  int variable_count() const { return static_cast<int>(variable_joints_.size()); }
  /// Joint index owning state variable `variable`.
  int variable_joint(int variable) const { return variable_joints_[static_cast<std::size_t>(variable)]; }

  /// Throwing lookups (UnknownLink / UnknownJoint / UnknownGroup).
  int link_index(const std::string &name) const;
  int joint_index(const std::string &name) const;
  std::optional<int> find_link(const std::string &name) const;
  std::optional<int> find_joint(const std::string &name) const;

  bool has_group(const std::string &group) const { return groups_.count(group) > 0; }
  std::vector<std::string> group_names() const;
  /// Joint indices of a group, in group order.
  const std::vector<int> &group_joints(const std::string &group) const;
  /// Variable indices of a group, in group order.
  std::vector<int> group_variables(const std::string &group) const;
  std::vector<std::string> group_joint_names(const std::string &group) const;

  const KinematicsConfig &kinematics_config(const std::string &group) const;

  /// Collision between two links is allowed by the SRDF matrix (symmetric).
  bool collision_allowed(int link_a, int link_b) const;
  /// Two links are connected through a single joint.
  bool adjacent(int link_a, int link_b) const;

  /// Whether `joint` moves `link`, i.e. link lies in the joint's child subtree.
  bool joint_moves_link(int joint, int link) const;

private:
  RobotModel() = default;

  std::string name_;
  std::vector<Link> links_;
  std::vector<Joint> joints_;
  std::vector<int> variable_joints_;
  std::map<std::string, int> link_index_;
  std::map<std::string, int> joint_index_;
  std::map<std::string, std::vector<int>> groups_;
  std::map<std::string, KinematicsConfig> kinematics_;
  std::vector<std::vector<bool>> allowed_;
  std::vector<std::vector<bool>> moves_;  // [joint][link]
};

/// Values for every actuated joint of one robot. Continuous joints are kept
/// normalized to (-pi, pi].
class RobotState
{
public:
  /// All-zero configuration (clamped into limits where zero is outside).
  explicit RobotState(RobotModelPtr model);
  RobotState(RobotModelPtr model, Eigen::VectorXd values);

  const RobotModel &model() const { return *model_; }
  const RobotModelPtr &model_ptr() const { return model_; }
  const Eigen::VectorXd &values() const { return values_; }

  void set_values(const Eigen::VectorXd &values);
  double joint_value(const std::string &joint) const;
  void set_joint_value(const std::string &joint, double value);

  /// UnknownGroup / ArityMismatch on bad input.
  void set_group_state(const std::string &group, const std::vector<double> &values);
  void set_group_state(const std::string &group, const Eigen::VectorXd &values);
  Eigen::VectorXd group_state(const std::string &group) const;

  bool within_limits(double tolerance = 0.0) const;

  bool operator==(const RobotState &other) const
  {
    return model_ == other.model_ && values_.size() == other.values_.size() && values_ == other.values_;
  }

private:
  RobotModelPtr model_;
  Eigen::VectorXd values_;
};

/// World pose of every link (indexed like RobotModel::links()).
std::vector<Pose> link_poses(const RobotModel &model, const Eigen::VectorXd &values);

/// Link-name keyed forward kinematics; the root is at identity.
std::map<std::string, Pose> forward_kinematics(const RobotState &state);

/// 6 x m world-frame Jacobian (linear rows first) of `tip_link` over the
/// group's joints; a column is zero when that joint does not move the tip.
Eigen::MatrixXd jacobian(const RobotState &state, const std::string &group, const std::string &tip_link);

/// Jacobian over the actuated joints on the root-to-tip chain, root first.
/// A tip reached only through fixed joints yields a 6 x 0 matrix.
Eigen::MatrixXd chain_jacobian(const RobotState &state, const std::string &tip_link);

}  // namespace plannerforge
