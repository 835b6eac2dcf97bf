// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <plannerforge/common/geometry.hpp>
#include <plannerforge/kinematics/robot_model.hpp>

namespace plannerforge
{

/// Joint-name keyed values in declaration order.
using JointValues = std::vector<std::pair<std::string, double>>;

struct JointGoal
{
  JointValues joints;
};

struct PoseGoal
{
  std::string link;
  Pose target = Pose::Identity();
};

using Goal = std::variant<JointGoal, PoseGoal>;

inline constexpr double kDefaultTimeLimit = 10.0;

struct MotionRequest
{
  std::string group;
  JointValues start;
  Goal goal = JointGoal{};
  std::string planner_id = "RRTConnect";
  double time_limit_s = kDefaultTimeLimit;
  std::optional<std::uint64_t> seed;
};

/// Named group values as JointValues (group order).
JointValues group_values(const RobotModel &model, const std::string &group, const Eigen::VectorXd &values);
JointValues group_values(const RobotModel &model, const std::string &group, const std::vector<double> &values);

/// Fluent helper mirroring the usual request-building steps. Setting a goal
/// replaces any previous goal (joint or pose).
class MotionRequestBuilder
{
public:
  MotionRequestBuilder(RobotModelPtr model, std::string group);

  MotionRequestBuilder &set_start(const RobotState &state);
  MotionRequestBuilder &set_start(const std::vector<double> &group_values);
  MotionRequestBuilder &set_goal(const RobotState &state);
  MotionRequestBuilder &set_goal(const std::vector<double> &group_values);
  /// UnknownLink if the model has no such link.
  MotionRequestBuilder &set_goal_pose(const std::string &link, const Pose &target);
  MotionRequestBuilder &set_planner(const std::string &planner_id);
  MotionRequestBuilder &set_time_limit(double seconds);
  MotionRequestBuilder &set_seed(std::uint64_t seed);

  const MotionRequest &request() const { return request_; }

private:
  RobotModelPtr model_;
  MotionRequest request_;
};

/// Replaces the request's goal with a pose goal; UnknownLink if absent.
void set_goal_pose(MotionRequest &request, const RobotModel &model, const std::string &link, const Pose &target);

bool requests_equal(const MotionRequest &a, const MotionRequest &b, double pose_tolerance = 0.0);

}  // namespace plannerforge
