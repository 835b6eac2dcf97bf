// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <functional>
#include <map>
#include <string>

#include <plannerforge/kinematics/robot_model.hpp>

namespace plannerforge
{

struct IkParams
{
  int max_iters = 200;
  double pos_tol = 1e-4;  ///< m
  double rot_tol = 1e-3;  ///< rad, geodesic
  double damping = 0.1;   ///< lambda in J^T (J J^T + lambda^2 I)^-1
};

/// On failure `state` holds the best iterate found and its residuals.
struct IkResult
{
  bool success = false;
  RobotState state;
  double position_residual = 0.0;
  double rotation_residual = 0.0;
  int iterations = 0;
};

/// Position error (m) and geodesic orientation error (rad) of `pose` to `target`.
std::pair<double, double> pose_residual(const Pose &pose, const Pose &target);

/// Damped-least-squares IK for `tip_link` moving only the group's joints.
/// Values are clamped into limits after every step. Throws UnknownGroup /
/// UnknownLink; non-convergence is reported through IkResult::success.
IkResult solve_ik(const RobotModel &model, const std::string &group, const std::string &tip_link,
                  const Pose &target, const RobotState &seed, const IkParams &params = {});

using IkSolverFn = std::function<IkResult(const RobotModel &, const std::string &, const std::string &,
                                          const Pose &, const RobotState &, const IkParams &)>;

/// Named IK solvers, selected per group by KinematicsConfig::ik_solver_id.
/// "dls" is always present.
class IkSolverRegistry
{
public:
  IkSolverRegistry();

  void add(const std::string &id, IkSolverFn solver);
  bool contains(const std::string &id) const { return solvers_.count(id) > 0; }
  /// Throws UnknownIkSolver.
  const IkSolverFn &get(const std::string &id) const;

  /// Dispatches through the group's configured solver.
  IkResult solve(const RobotModel &model, const std::string &group, const std::string &tip_link,
                 const Pose &target, const RobotState &seed, const IkParams &params = {}) const;

private:
  std::map<std::string, IkSolverFn> solvers_;
};

}  // namespace plannerforge
