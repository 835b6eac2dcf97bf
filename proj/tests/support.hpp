// Shared fixture loading for the test binaries.
#pragma once

#include <plannerforge/assetio/description.hpp>
#include <plannerforge/assetio/robot_config.hpp>
#include <plannerforge/common/random.hpp>
#include <plannerforge/kinematics/robot_model.hpp>

#include <cmath>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

namespace pftest
{

inline std::filesystem::path fixture_root() { return PLANNERFORGE_FIXTURE_ROOT; }
inline std::filesystem::path fixture_dir() { return fixture_root() / "plannerforge_fixtures"; }
inline std::string fixture(const std::string &rel) { return (fixture_dir() / rel).string(); }

inline plannerforge::RobotFiles fetch_files()
{
  return {fixture("robots/fetchlike8.urdf"), fixture("robots/fetchlike8.srdf"),
          fixture("config/fetchlike8_joint_limits.yaml"), fixture("config/fetchlike8_kinematics.yaml")};
}

inline plannerforge::RobotFiles planar_files()
{
  return {fixture("robots/planar2.urdf"), fixture("robots/planar2.srdf"), std::nullopt, std::nullopt};
}

inline plannerforge::RobotModelPtr fetch()
{
  static const auto model = plannerforge::RobotModel::build(plannerforge::load_robot_description(fetch_files(), {}));
  return model;
}

inline plannerforge::RobotModelPtr planar()
{
  static const auto model = plannerforge::RobotModel::build(plannerforge::load_robot_description(planar_files(), {}));
  return model;
}

inline plannerforge::RobotState random_state(const plannerforge::RobotModelPtr &model, plannerforge::Rng &rng)
{
  Eigen::VectorXd v(model->variable_count());
  for (int i = 0; i < model->variable_count(); ++i)
  {
    const plannerforge::Joint &j = model->joint(model->variable_joint(i));
    v[i] = j.has_position_limits ? rng.uniform(j.lower, j.upper) : rng.uniform(-M_PI, M_PI);
  }
  return plannerforge::RobotState(model, v);
}

inline plannerforge::UrdfTree tree_of(const plannerforge::RobotFiles &files)
{
  return plannerforge::parse_urdf(plannerforge::expand_xacro_properties(plannerforge::load_robot_description(files, {}).urdf_xml));
}

// Central differences of the tip pose: linear part from positions, angular
// part from the rotation log of R(q+h) R(q-h)^T.
inline Eigen::MatrixXd fd_jacobian(const plannerforge::RobotState &state, const std::string &group, const std::string &tip, double h)
{
  const plannerforge::RobotModel &model = state.model();
  const auto &joints = model.group_joints(group);
  Eigen::MatrixXd jac(6, static_cast<Eigen::Index>(joints.size()));
  for (std::size_t c = 0; c < joints.size(); ++c)
  {
    const int var = model.joint(joints[c]).variable_index;
    Eigen::VectorXd plus = state.values(), minus = state.values();
    plus[var] += h;
    minus[var] -= h;
    const plannerforge::Pose a = plannerforge::forward_kinematics(plannerforge::RobotState(state.model_ptr(), plus)).at(tip);
    const plannerforge::Pose b = plannerforge::forward_kinematics(plannerforge::RobotState(state.model_ptr(), minus)).at(tip);
    const auto col = static_cast<Eigen::Index>(c);
    jac.block<3, 1>(0, col) = (a.translation() - b.translation()) / (2 * h);
    const Eigen::AngleAxisd aa(a.linear() * b.linear().transpose());
    jac.block<3, 1>(3, col) = aa.axis() * aa.angle() / (2 * h);
  }
  return jac;
}

// The unfurl problem: arm_and_torso from the tucked pose to an extended one.
inline const std::vector<double> kUnfurlStart{0.05, 1.32, 1.40, -0.2, 1.72, 0.0, 1.66, 0.0};
inline const std::vector<double> kUnfurlGoal{0.27, 0.5, 1.28, -2.27, 2.24, -2.77, 1.0, -2.0};

inline std::string fetch_flags()
{
  const auto f = fetch_files();
  return " --urdf " + f.urdf + " --srdf " + f.srdf + " --joint-limits " + *f.joint_limits + " --kinematics " +
         *f.kinematics;
}

inline std::string planar_flags()
{
  const auto f = planar_files();
  return " --urdf " + f.urdf + " --srdf " + f.srdf;
}

struct CommandResult
{
  int exit_code = -1;
  std::string output;  ///< stdout and stderr
};

inline CommandResult run_cli(const std::string &args)
{
  const std::string cmd = std::string(PLANNERFORGE_CLI) + " " + args + " 2>&1";
  CommandResult r;
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0)
    r.output.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::filesystem::path temp_dir(const std::string &name)
{
  const auto dir = std::filesystem::temp_directory_path() / ("plannerforge_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace pftest
