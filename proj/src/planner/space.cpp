// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/common/error.hpp>
#include <plannerforge/planner/space.hpp>

#include <cmath>

namespace plannerforge
{

Eigen::VectorXd PlanningSpace::sample(Rng &rng) const
{
  Eigen::VectorXd x(dimension());
  for (Eigen::Index i = 0; i < x.size(); ++i)
  {
    if (metric_.continuous()[static_cast<std::size_t>(i)])
      x[i] = wrap_angle(rng.uniform(-M_PI, M_PI));
    else
      x[i] = rng.uniform(lower_[i], upper_[i]);
  }
  return x;
}

bool PlanningSpace::within_limits(const Eigen::VectorXd &x) const
{
  if (x.size() != dimension())
    return false;
  for (Eigen::Index i = 0; i < x.size(); ++i)
  {
    if (!std::isfinite(x[i]))
      return false;
    if (bounded_[static_cast<std::size_t>(i)] && (x[i] < lower_[i] || x[i] > upper_[i]))
      return false;
  }
  return true;
}

bool is_motion_valid(const PlanningSpace &space, const Eigen::VectorXd &a, const Eigen::VectorXd &b,
                     double resolution)
{
  if (!(resolution > 0.0))
    throw Error(ErrorCode::InvalidArgument, "motion check resolution must be positive");
  // Canonical direction so that (a, b) and (b, a) test identical states.
  const bool swap = std::lexicographical_compare(b.data(), b.data() + b.size(), a.data(), a.data() + a.size());
  const Eigen::VectorXd &from = swap ? b : a;
  const Eigen::VectorXd &to = swap ? a : b;

  if (!space.is_valid(from) || !space.is_valid(to))
    return false;
  const double d = space.distance(from, to);
  const auto steps = static_cast<long>(std::ceil(d / resolution));
  for (long i = 1; i < steps; ++i)
  {
    const Eigen::VectorXd x = space.metric().interpolate(from, to, static_cast<double>(i) / static_cast<double>(steps));
    if (!space.is_valid(x))
      return false;
  }
  return true;
}

GroupSpace::GroupSpace(const Scene &scene, const std::string &group)
  : model_(scene.model_ptr()),
    group_(group),
    variables_(scene.model().group_variables(group)),
    reference_(scene.reference_state().values()),
    world_(scene.collision_world())
{
  metric_ = group_metric(*model_, group);
  names_ = model_->group_joint_names(group);
  const auto n = static_cast<Eigen::Index>(variables_.size());
  lower_.resize(n);
  upper_.resize(n);
  max_velocity_.resize(n);
  bounded_.assign(variables_.size(), 0);
  const auto &joints = model_->group_joints(group);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    const Joint &j = model_->joint(joints[static_cast<std::size_t>(i)]);
    bounded_[static_cast<std::size_t>(i)] = j.has_position_limits ? 1 : 0;
    lower_[i] = j.has_position_limits ? j.lower : -M_PI;
    upper_[i] = j.has_position_limits ? j.upper : M_PI;
    max_velocity_[i] = j.max_velocity;
  }
}

Eigen::VectorXd GroupSpace::full_state(const Eigen::VectorXd &x) const
{
  Eigen::VectorXd full = reference_;
  for (std::size_t i = 0; i < variables_.size(); ++i)
    full[variables_[i]] = x[static_cast<Eigen::Index>(i)];
  return full;
}

RobotState GroupSpace::robot_state(const Eigen::VectorXd &x) const
{
  return RobotState(model_, full_state(x));
}

bool GroupSpace::in_collision(const Eigen::VectorXd &x) const
{
  return world_.in_collision(full_state(x));
}

bool is_state_valid(const Scene &scene, const std::string &group, const Eigen::VectorXd &values)
{
  return GroupSpace(scene, group).is_valid(values);
}

bool is_motion_valid(const Scene &scene, const std::string &group, const Eigen::VectorXd &a,
                     const Eigen::VectorXd &b, double resolution)
{
  return is_motion_valid(GroupSpace(scene, group), a, b, resolution);
}

}  // namespace plannerforge
