// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include <plannerforge/kinematics/robot_model.hpp>

namespace plannerforge
{

/// Joint-space metric: L2 within each segment (wrapped differences on
/// continuous coordinates), summed across segments. A single-robot group is
/// one segment; composite groups have one segment per member.
class JointMetric
{
public:
  JointMetric() = default;
  JointMetric(std::vector<char> continuous, std::vector<int> segment_sizes);

  /// Single segment of `dimension` non-wrapping coordinates.
  static JointMetric euclidean(int dimension);

  int dimension() const { return static_cast<int>(continuous_.size()); }
  const std::vector<char> &continuous() const { return continuous_; }
  const std::vector<int> &segments() const { return segments_; }

  /// Coordinate-wise difference b - a, wrapped to (-pi, pi] on continuous coordinates.
  Eigen::VectorXd difference(const Eigen::VectorXd &a, const Eigen::VectorXd &b) const;
  double distance(const Eigen::VectorXd &a, const Eigen::VectorXd &b) const;
  /// Straight line (shorter arc on continuous coordinates); exact at t = 0 and t = 1.
  Eigen::VectorXd interpolate(const Eigen::VectorXd &a, const Eigen::VectorXd &b, double t) const;
  Eigen::VectorXd normalize(Eigen::VectorXd x) const;

private:
  std::vector<char> continuous_;
  std::vector<int> segments_;
};

struct Trajectory
{
  std::string group;
  std::vector<std::string> joint_names;
  std::vector<Eigen::VectorXd> waypoints;
  std::vector<double> times;
  JointMetric metric;

  std::size_t size() const { return waypoints.size(); }
  double duration() const { return times.empty() ? 0.0 : times.back(); }
  /// Linear interpolation at time t (clamped to [0, duration]).
  Eigen::VectorXd sample(double t) const;
};

/// Metric for a robot group (continuous joints wrap).
JointMetric group_metric(const RobotModel &model, const std::string &group);

/// Sum of metric distances between consecutive waypoints.
double path_cost(const Trajectory &trajectory);

/// Segment duration = max_j |dq_j| / vmax_j; t0 = 0.
void time_parameterize(Trajectory &trajectory, const Eigen::VectorXd &max_velocity);
void time_parameterize(Trajectory &trajectory, const RobotModel &model);

}  // namespace plannerforge
