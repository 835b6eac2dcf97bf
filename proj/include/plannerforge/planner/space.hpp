// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include <plannerforge/common/random.hpp>
#include <plannerforge/planner/trajectory.hpp>
#include <plannerforge/scene/scene.hpp>

namespace plannerforge
{

/// Configuration space a planner searches: bounds, metric, validity.
class PlanningSpace
{
public:
  virtual ~PlanningSpace() = default;

  int dimension() const { return metric_.dimension(); }
  const JointMetric &metric() const { return metric_; }
  const std::vector<std::string> &joint_names() const { return names_; }
  const Eigen::VectorXd &lower() const { return lower_; }
  const Eigen::VectorXd &upper() const { return upper_; }
  const Eigen::VectorXd &max_velocity() const { return max_velocity_; }
  const std::vector<char> &bounded() const { return bounded_; }

  /// Uniform over the limit box; continuous coordinates in (-pi, pi].
  Eigen::VectorXd sample(Rng &rng) const;
  bool within_limits(const Eigen::VectorXd &x) const;
  double distance(const Eigen::VectorXd &a, const Eigen::VectorXd &b) const { return metric_.distance(a, b); }

  /// Limits and collision freedom.
  bool is_valid(const Eigen::VectorXd &x) const { return within_limits(x) && !in_collision(x); }
  virtual bool in_collision(const Eigen::VectorXd &x) const = 0;

protected:
  JointMetric metric_;
  std::vector<std::string> names_;
  Eigen::VectorXd lower_, upper_, max_velocity_;
  std::vector<char> bounded_;
};

/// Every state on the straight segment at steps of at most `resolution`
/// (metric units), endpoints included, is valid. Symmetric in (a, b).
bool is_motion_valid(const PlanningSpace &space, const Eigen::VectorXd &a, const Eigen::VectorXd &b,
                     double resolution);

/// One robot group inside a scene. Joints outside the group stay at the
/// scene's reference state.
class GroupSpace : public PlanningSpace
{
public:
  GroupSpace(const Scene &scene, const std::string &group);

  const std::string &group() const { return group_; }
  const RobotModel &model() const { return *model_; }
  /// Full robot variable vector for group values `x`.
  Eigen::VectorXd full_state(const Eigen::VectorXd &x) const;
  RobotState robot_state(const Eigen::VectorXd &x) const;
  bool in_collision(const Eigen::VectorXd &x) const override;

private:
  RobotModelPtr model_;
  std::string group_;
  std::vector<int> variables_;
  Eigen::VectorXd reference_;
  CollisionWorld world_;
};

/// Convenience wrappers matching the scene/group level API.
bool is_state_valid(const Scene &scene, const std::string &group, const Eigen::VectorXd &values);
bool is_motion_valid(const Scene &scene, const std::string &group, const Eigen::VectorXd &a,
                     const Eigen::VectorXd &b, double resolution);

}  // namespace plannerforge
