// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/common/error.hpp>
#include <plannerforge/common/random.hpp>
#include <plannerforge/kinematics/ik.hpp>

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace plannerforge
{

namespace
{

Eigen::Matrix<double, 6, 1> pose_error(const Pose &pose, const Pose &target)
{
  Eigen::Matrix<double, 6, 1> e;
  e.head<3>() = target.translation() - pose.translation();
  const Eigen::AngleAxisd rot(target.linear() * pose.linear().transpose());
  e.tail<3>() = rot.axis() * rot.angle();
  return e;
}

void clamp_to_limits(const RobotModel &model, const std::vector<int> &joints, Eigen::VectorXd &values)
{
  for (int ji : joints)
  {
    const Joint &j = model.joint(ji);
    double &v = values[j.variable_index];
    if (j.has_position_limits)
      v = std::clamp(v, j.lower, j.upper);
    else if (j.type == JointType::Continuous)
      v = wrap_angle(v);
  }
}

}  // namespace

std::pair<double, double> pose_residual(const Pose &pose, const Pose &target)
{
  const double position = (target.translation() - pose.translation()).norm();
  const double rotation = Eigen::AngleAxisd(target.linear() * pose.linear().transpose()).angle();
  return {position, rotation};
}

IkResult solve_ik(const RobotModel &model, const std::string &group, const std::string &tip_link,
                  const Pose &target, const RobotState &seed, const IkParams &params)
{
  if (params.max_iters <= 0 || params.pos_tol <= 0.0 || params.rot_tol <= 0.0 || params.damping <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "IK parameters must be positive");
  const auto &joints = model.group_joints(group);
  const int tip = model.link_index(tip_link);

  Eigen::VectorXd q = seed.values();
  IkResult best{false, seed, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0};
  double best_score = std::numeric_limits<double>::infinity();
  const double lambda2 = params.damping * params.damping;

  for (int iter = 0;; ++iter)
  {
    RobotState state(seed.model_ptr(), q);
    const Pose pose = link_poses(model, state.values())[static_cast<std::size_t>(tip)];
    const auto [pos_err, rot_err] = pose_residual(pose, target);
    const double score = pos_err / params.pos_tol + rot_err / params.rot_tol;
    if (score < best_score)
    {
      best_score = score;
      best.state = state;
      best.position_residual = pos_err;
      best.rotation_residual = rot_err;
    }
    best.iterations = iter;
    if (pos_err <= params.pos_tol && rot_err <= params.rot_tol)
    {
      best.state = state;
      best.position_residual = pos_err;
      best.rotation_residual = rot_err;
      best.success = true;
      return best;
    }
    if (iter >= params.max_iters)
      return best;

    const Eigen::MatrixXd jac = jacobian(state, group, tip_link);
    const Eigen::Matrix<double, 6, 1> e = pose_error(pose, target);
    const Eigen::Matrix<double, 6, 6> jjt = jac * jac.transpose() + lambda2 * Eigen::Matrix<double, 6, 6>::Identity();
    const Eigen::VectorXd dq = jac.transpose() * jjt.ldlt().solve(e);
    for (std::size_t c = 0; c < joints.size(); ++c)
      q[model.joint(joints[c]).variable_index] += dq[static_cast<Eigen::Index>(c)];
    clamp_to_limits(model, joints, q);
  }
}

IkSolverRegistry::IkSolverRegistry()
{
  solvers_["dls"] = &solve_ik;
}

void IkSolverRegistry::add(const std::string &id, IkSolverFn solver)
{
  if (id.empty() || !solver)
    throw Error(ErrorCode::InvalidArgument, "IK solver needs an id and a callable");
  solvers_[id] = std::move(solver);
}

const IkSolverFn &IkSolverRegistry::get(const std::string &id) const
{
  const auto it = solvers_.find(id);
  if (it == solvers_.end())
    throw Error(ErrorCode::UnknownIkSolver, "no IK solver registered as '" + id + "'");
  return it->second;
}

IkResult IkSolverRegistry::solve(const RobotModel &model, const std::string &group, const std::string &tip_link,
                                 const Pose &target, const RobotState &seed, const IkParams &params) const
{
  const KinematicsConfig &config = model.kinematics_config(group);
  const IkSolverFn &solver = get(config.ik_solver_id);
  IkResult best = solver(model, group, tip_link, target, seed, params);
  // Further attempts restart from reproducible random states inside the limits.
  Rng rng(derive_seed(0x1c0ffee, {static_cast<std::uint64_t>(model.link_index(tip_link))}));
  for (int attempt = 1; attempt < config.ik_attempts && !best.success; ++attempt)
  {
    RobotState restart = seed;
    for (int ji : model.group_joints(group))
    {
      const Joint &j = model.joint(ji);
      restart.set_joint_value(j.name, j.has_position_limits ? rng.uniform(j.lower, j.upper) : rng.uniform(-M_PI, M_PI));
    }
    IkResult r = solver(model, group, tip_link, target, restart, params);
    if (r.success || r.position_residual + r.rotation_residual < best.position_residual + best.rotation_residual)
      best = std::move(r);
  }
  return best;
}

}  // namespace plannerforge
