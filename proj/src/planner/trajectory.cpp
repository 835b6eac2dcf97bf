// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/common/error.hpp>
#include <plannerforge/planner/request.hpp>
#include <plannerforge/planner/trajectory.hpp>

#include <cmath>
#include <numeric>

namespace plannerforge
{

JointMetric::JointMetric(std::vector<char> continuous, std::vector<int> segment_sizes)
  : continuous_(std::move(continuous)), segments_(std::move(segment_sizes))
{
  if (std::accumulate(segments_.begin(), segments_.end(), 0) != dimension())
    throw Error(ErrorCode::InvalidArgument, "metric segments do not cover the dimension");
}

JointMetric JointMetric::euclidean(int dimension)
{
  return JointMetric(std::vector<char>(static_cast<std::size_t>(dimension), 0), {dimension});
}

Eigen::VectorXd JointMetric::difference(const Eigen::VectorXd &a, const Eigen::VectorXd &b) const
{
  Eigen::VectorXd d = b - a;
  for (std::size_t i = 0; i < continuous_.size(); ++i)
    if (continuous_[i])
      d[static_cast<Eigen::Index>(i)] = wrap_angle(d[static_cast<Eigen::Index>(i)]);
  return d;
}

double JointMetric::distance(const Eigen::VectorXd &a, const Eigen::VectorXd &b) const
{
  const Eigen::VectorXd d = difference(a, b);
  double total = 0.0;
  Eigen::Index offset = 0;
  for (int size : segments_)
  {
    total += d.segment(offset, size).norm();
    offset += size;
  }
  return total;
}

Eigen::VectorXd JointMetric::interpolate(const Eigen::VectorXd &a, const Eigen::VectorXd &b, double t) const
{
  if (t <= 0.0)
    return a;
  if (t >= 1.0)
    return b;
  return normalize(a + t * difference(a, b));
}

Eigen::VectorXd JointMetric::normalize(Eigen::VectorXd x) const
{
  for (std::size_t i = 0; i < continuous_.size(); ++i)
    if (continuous_[i])
      x[static_cast<Eigen::Index>(i)] = wrap_angle(x[static_cast<Eigen::Index>(i)]);
  return x;
}

Eigen::VectorXd Trajectory::sample(double t) const
{
  if (waypoints.empty())
    throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  if (t <= times.front() || waypoints.size() == 1)
    return waypoints.front();
  if (t >= times.back())
    return waypoints.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double span = times[hi] - times[lo];
  const double s = span > 0.0 ? (t - times[lo]) / span : 1.0;
  return metric.interpolate(waypoints[lo], waypoints[hi], s);
}

JointMetric group_metric(const RobotModel &model, const std::string &group)
{
  const auto &joints = model.group_joints(group);
  std::vector<char> continuous;
  for (int j : joints)
    continuous.push_back(model.joint(j).type == JointType::Continuous ? 1 : 0);
  return JointMetric(std::move(continuous), {static_cast<int>(joints.size())});
}

double path_cost(const Trajectory &trajectory)
{
  const JointMetric metric = trajectory.metric.dimension() == 0 && !trajectory.waypoints.empty()
                                 ? JointMetric::euclidean(static_cast<int>(trajectory.waypoints.front().size()))
                                 : trajectory.metric;
  double cost = 0.0;
  for (std::size_t i = 1; i < trajectory.waypoints.size(); ++i)
    cost += metric.distance(trajectory.waypoints[i - 1], trajectory.waypoints[i]);
  return cost;
}

void time_parameterize(Trajectory &trajectory, const Eigen::VectorXd &max_velocity)
{
  const JointMetric metric = trajectory.metric.dimension() == 0 && !trajectory.waypoints.empty()
                                 ? JointMetric::euclidean(static_cast<int>(trajectory.waypoints.front().size()))
                                 : trajectory.metric;
  trajectory.times.assign(trajectory.waypoints.size(), 0.0);
  for (std::size_t i = 1; i < trajectory.waypoints.size(); ++i)
  {
    const Eigen::VectorXd d = metric.difference(trajectory.waypoints[i - 1], trajectory.waypoints[i]);
    double duration = 0.0;
    for (Eigen::Index j = 0; j < d.size(); ++j)
      duration = std::max(duration, std::abs(d[j]) / max_velocity[j]);
    trajectory.times[i] = trajectory.times[i - 1] + duration;
  }
}

void time_parameterize(Trajectory &trajectory, const RobotModel &model)
{
  Eigen::VectorXd vmax(static_cast<Eigen::Index>(trajectory.joint_names.size()));
  for (std::size_t i = 0; i < trajectory.joint_names.size(); ++i)
    vmax[static_cast<Eigen::Index>(i)] = model.joint(model.joint_index(trajectory.joint_names[i])).max_velocity;
  time_parameterize(trajectory, vmax);
}

// --- requests ---------------------------------------------------------------

JointValues group_values(const RobotModel &model, const std::string &group, const Eigen::VectorXd &values)
{
  const auto names = model.group_joint_names(group);
  if (static_cast<std::size_t>(values.size()) != names.size())
    throw Error(ErrorCode::ArityMismatch, "group '" + group + "' has " + std::to_string(names.size()) + " joints");
  JointValues out;
  for (std::size_t i = 0; i < names.size(); ++i)
    out.emplace_back(names[i], values[static_cast<Eigen::Index>(i)]);
  return out;
}

JointValues group_values(const RobotModel &model, const std::string &group, const std::vector<double> &values)
{
  return group_values(model, group,
                      Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()))));
}

MotionRequestBuilder::MotionRequestBuilder(RobotModelPtr model, std::string group) : model_(std::move(model))
{
  model_->group_joints(group);
  request_.group = std::move(group);
}

MotionRequestBuilder &MotionRequestBuilder::set_start(const RobotState &state)
{
  request_.start = group_values(*model_, request_.group, state.group_state(request_.group));
  return *this;
}

MotionRequestBuilder &MotionRequestBuilder::set_start(const std::vector<double> &values)
{
  request_.start = group_values(*model_, request_.group, values);
  return *this;
}

MotionRequestBuilder &MotionRequestBuilder::set_goal(const RobotState &state)
{
  request_.goal = JointGoal{group_values(*model_, request_.group, state.group_state(request_.group))};
  return *this;
}

MotionRequestBuilder &MotionRequestBuilder::set_goal(const std::vector<double> &values)
{
  request_.goal = JointGoal{group_values(*model_, request_.group, values)};
  return *this;
}

MotionRequestBuilder &MotionRequestBuilder::set_goal_pose(const std::string &link, const Pose &target)
{
  plannerforge::set_goal_pose(request_, *model_, link, target);
  return *this;
}

MotionRequestBuilder &MotionRequestBuilder::set_planner(const std::string &planner_id)
{
  request_.planner_id = planner_id;
  return *this;
}

MotionRequestBuilder &MotionRequestBuilder::set_time_limit(double seconds)
{
  if (!(seconds > 0.0))
    throw Error(ErrorCode::InvalidArgument, "time limit must be positive");
  request_.time_limit_s = seconds;
  return *this;
}

MotionRequestBuilder &MotionRequestBuilder::set_seed(std::uint64_t seed)
{
  request_.seed = seed;
  return *this;
}

void set_goal_pose(MotionRequest &request, const RobotModel &model, const std::string &link, const Pose &target)
{
  model.link_index(link);
  request.goal = PoseGoal{link, target};
}

namespace
{
bool values_equal(const JointValues &a, const JointValues &b)
{
  return a == b;
}
}  // namespace

bool requests_equal(const MotionRequest &a, const MotionRequest &b, double tol)
{
  if (a.group != b.group || !values_equal(a.start, b.start) || a.planner_id != b.planner_id ||
      a.time_limit_s != b.time_limit_s || a.seed != b.seed || a.goal.index() != b.goal.index())
    return false;
  if (const auto *ja = std::get_if<JointGoal>(&a.goal))
    return values_equal(ja->joints, std::get<JointGoal>(b.goal).joints);
  const auto &pa = std::get<PoseGoal>(a.goal);
  const auto &pb = std::get<PoseGoal>(b.goal);
  return pa.link == pb.link && (pa.target.matrix() - pb.target.matrix()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace plannerforge
