#include <plannerforge/common/error.hpp>
#include <plannerforge/kinematics/ik.hpp>
#include <plannerforge/kinematics/robot_model.hpp>
#include <plannerforge/common/random.hpp>

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "support.hpp"

using namespace plannerforge;
using pftest::fd_jacobian;
using pftest::random_state;
using pftest::tree_of;

namespace
{

template <typename Fn>
ErrorCode error_of(Fn &&fn)
{
  try
  {
    fn();
  }
  catch (const Error &e)
  {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::InvalidArgument;
}

RobotModelPtr chain_model(const std::string &urdf, int n)
{
  RawRobotDescription raw;
  raw.urdf_xml = urdf;
  raw.srdf_xml = "<robot name=\"chain\"><group name=\"all\"><chain base_link=\"l0\" tip_link=\"l" +
                 std::to_string(n) + "\"/></group></robot>";
  return RobotModel::build(raw);
}

double max_abs_diff(const Eigen::Matrix4d &a, const Eigen::Matrix4d &b) { return (a - b).cwiseAbs().maxCoeff(); }


}  // namespace

TEST(Model, Planar2HasTwoVariables)
{
  EXPECT_EQ(pftest::planar()->variable_count(), 2);
  EXPECT_EQ(pftest::planar()->group_joint_names("arm"), (std::vector<std::string>{"joint1", "joint2"}));
}

TEST(Model, FetchGroupsAndOverrides)
{
  const auto m = pftest::fetch();
  EXPECT_EQ(m->variable_count(), 8);
  EXPECT_EQ(m->group_joints("arm_and_torso").size(), 8u);
  const Joint &elbow = m->joint(m->joint_index("elbow_flex_joint"));
  EXPECT_EQ(elbow.lower, -2.251);
  EXPECT_EQ(elbow.upper, 2.251);
  EXPECT_EQ(m->joint(m->joint_index("torso_lift_joint")).max_velocity, 0.1);
  EXPECT_EQ(m->kinematics_config("arm").ik_attempts, 4);
}

TEST(Model, OverrideTightensLimits)
{
  auto raw = load_robot_description(pftest::planar_files(), {});
  raw.joint_limit_overrides["joint1"] = JointLimitOverride{-1.0, 1.0, std::nullopt};
  const auto m = RobotModel::build(raw);
  const Joint &j = m->joint(m->joint_index("joint1"));
  EXPECT_EQ(j.lower, -1.0);
  EXPECT_EQ(j.upper, 1.0);
}

TEST(Model, ContradictoryOverride)
{
  auto raw = load_robot_description(pftest::planar_files(), {});
  raw.joint_limit_overrides["joint1"] = JointLimitOverride{1.0, -1.0, std::nullopt};
  EXPECT_EQ(error_of([&] { RobotModel::build(raw); }), ErrorCode::LimitContradiction);
}

TEST(Model, AcmIsSymmetric)
{
  const auto m = pftest::fetch();
  const int n = static_cast<int>(m->links().size());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      EXPECT_EQ(m->collision_allowed(a, b), m->collision_allowed(b, a));
  EXPECT_TRUE(m->collision_allowed(m->link_index("base_link"), m->link_index("shoulder_pan_link")));
}

TEST(State, GroupRoundTrip)
{
  RobotState s(pftest::fetch());
  s.set_group_state("arm_and_torso", pftest::kUnfurlStart);
  const Eigen::VectorXd v = s.group_state("arm_and_torso");
  for (int i = 0; i < 8; ++i)
    EXPECT_EQ(v[i], pftest::kUnfurlStart[static_cast<std::size_t>(i)]);
  RobotState again = s;
  again.set_group_state("arm_and_torso", pftest::kUnfurlStart);
  EXPECT_TRUE(again == s);
}

TEST(State, ArityAndUnknownGroup)
{
  RobotState s(pftest::fetch());
  EXPECT_EQ(error_of([&] { s.set_group_state("arm_and_torso", std::vector<double>(7, 0.0)); }),
            ErrorCode::ArityMismatch);
  EXPECT_EQ(error_of([&] { s.set_group_state("legs", std::vector<double>(2, 0.0)); }), ErrorCode::UnknownGroup);
}

TEST(State, ContinuousValuesAreWrapped)
{
  EXPECT_NEAR(wrap_angle(3 * M_PI / 2), -M_PI / 2, 1e-12);
  EXPECT_EQ(wrap_angle(M_PI), M_PI);
  EXPECT_EQ(wrap_angle(-M_PI), M_PI);
}

TEST(ForwardKinematics, Planar2Analytic)
{
  Rng rng(21);
  for (int i = 0; i < 100; ++i)
  {
    const double q1 = rng.uniform(-3, 3), q2 = rng.uniform(-3, 3);
    RobotState s(pftest::planar());
    s.set_group_state("arm", std::vector<double>{q1, q2});
    const Eigen::Vector3d tip = forward_kinematics(s).at("tip").translation();
    EXPECT_NEAR(tip.x(), std::cos(q1) + std::cos(q1 + q2), 1e-12);
    EXPECT_NEAR(tip.y(), std::sin(q1) + std::sin(q1 + q2), 1e-12);
    EXPECT_NEAR(tip.z(), 0.0, 1e-12);
  }
}

TEST(ForwardKinematics, ZeroConfigurationComposesOrigins)
{
  const UrdfTree tree = tree_of(pftest::fetch_files());
  const RobotState zero(pftest::fetch(), Eigen::VectorXd::Zero(8));
  const auto fk = forward_kinematics(zero);
  for (const auto &j : tree.joints)
    EXPECT_LT(max_abs_diff(fk.at(j.child).matrix(), fk.at(j.parent).matrix() * j.origin.matrix()), 1e-12) << j.name;
}

TEST(ForwardKinematics, MatchesMatrixOracleOnFixtures)
{
  Rng rng(22);
  for (const auto &[files, model] : {std::pair{pftest::fetch_files(), pftest::fetch()},
                                     std::pair{pftest::planar_files(), pftest::planar()}})
  {
    const UrdfTree tree = tree_of(files);
    for (int i = 0; i < 100; ++i)
    {
      const RobotState s = random_state(model, rng);
      const auto expected = oracle::forward_kinematics(tree, s);
      for (const auto &[name, pose] : forward_kinematics(s))
        EXPECT_LT(max_abs_diff(pose.matrix(), expected.at(name)), 1e-10) << name;
    }
  }
}

TEST(ForwardKinematics, RandomSixJointChains)
{
  Rng rng(23);
  for (int c = 0; c < 20; ++c)
  {
    const std::string urdf = oracle::random_chain_urdf(rng, 6);
    const auto model = chain_model(urdf, 6);
    const UrdfTree tree = parse_urdf(urdf);
    for (int i = 0; i < 20; ++i)
    {
      const RobotState s = random_state(model, rng);
      const auto expected = oracle::forward_kinematics(tree, s);
      EXPECT_LT(max_abs_diff(forward_kinematics(s).at("l6").matrix(), expected.at("l6")), 1e-10);
    }
  }
}

TEST(Jacobian, Planar2AtZero)
{
  const RobotState s(pftest::planar(), Eigen::Vector2d::Zero());
  const Eigen::MatrixXd J = jacobian(s, "arm", "tip");
  ASSERT_EQ(J.cols(), 2);
  EXPECT_TRUE((J.block<3, 1>(0, 1).isApprox(Eigen::Vector3d(0, 1, 0), 1e-12)));
  EXPECT_TRUE((J.block<3, 1>(0, 0).isApprox(Eigen::Vector3d(0, 2, 0), 1e-12)));
}

TEST(Jacobian, FixedOnlyChainIsEmpty)
{
  const RobotState s(pftest::planar(), Eigen::Vector2d(0.3, 0.4));
  EXPECT_EQ(chain_jacobian(s, "base_link").cols(), 0);
}

TEST(Jacobian, MatchesCentralDifferences)
{
  Rng rng(24);
  for (const char *group : {"arm_and_torso", "arm"})
    for (int i = 0; i < 50; ++i)
    {
      const RobotState s = random_state(pftest::fetch(), rng);
      const Eigen::MatrixXd J = jacobian(s, group, "gripper_link");
      const Eigen::MatrixXd fd = fd_jacobian(s, group, "gripper_link", 1e-6);
      EXPECT_LT((J - fd).cwiseAbs().maxCoeff(), 1e-5) << group;
    }
  Rng chain_rng(25);
  const std::string urdf = oracle::random_chain_urdf(chain_rng, 6);
  const auto model = chain_model(urdf, 6);
  for (int i = 0; i < 50; ++i)
  {
    const RobotState s = random_state(model, chain_rng);
    EXPECT_LT((jacobian(s, "all", "l6") - fd_jacobian(s, "all", "l6", 1e-6)).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(InverseKinematics, TargetAtSeedIsFixedPoint)
{
  RobotState seed(pftest::fetch());
  seed.set_group_state("arm_and_torso", pftest::kUnfurlStart);
  const Pose target = forward_kinematics(seed).at("gripper_link");
  const IkResult r = solve_ik(*pftest::fetch(), "arm_and_torso", "gripper_link", target, seed);
  EXPECT_TRUE(r.success);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_TRUE(r.state == seed);
}

TEST(InverseKinematics, PerturbedSeedConverges)
{
  Rng rng(26);
  const auto model = pftest::fetch();
  int ok = 0;
  for (int i = 0; i < 50; ++i)
  {
    const RobotState goal = random_state(model, rng);
    Eigen::VectorXd perturbed = goal.values();
    Eigen::VectorXd delta(perturbed.size());
    for (Eigen::Index k = 0; k < delta.size(); ++k)
      delta[k] = rng.uniform(-1, 1);
    perturbed += 0.1 * delta.normalized();
    RobotState seed(model, perturbed);
    const Pose target = forward_kinematics(goal).at("gripper_link");
    const IkResult r = solve_ik(*model, "arm_and_torso", "gripper_link", target, seed);
    if (!r.success)
      continue;
    ++ok;
    const auto [p, q] = pose_residual(forward_kinematics(r.state).at("gripper_link"), target);
    EXPECT_LE(p, IkParams{}.pos_tol);
    EXPECT_LE(q, IkParams{}.rot_tol);
  }
  EXPECT_GE(ok, 48);
}

TEST(InverseKinematics, OutsideWorkspaceFails)
{
  const RobotState seed(pftest::planar(), Eigen::Vector2d(0.1, 0.1));
  const IkResult r =
      solve_ik(*pftest::planar(), "arm", "tip", make_pose(Eigen::Vector3d(12, 0, 0)), seed, IkParams{});
  EXPECT_FALSE(r.success);
  EXPECT_GT(r.position_residual, 9.0);
}

TEST(InverseKinematics, RegistryUsesConfiguredSolver)
{
  IkSolverRegistry reg;
  EXPECT_TRUE(reg.contains("dls"));
  EXPECT_EQ(error_of([&] { reg.get("trac_ik"); }), ErrorCode::UnknownIkSolver);
  int calls = 0;
  reg.add("dls", [&](const RobotModel &m, const std::string &g, const std::string &l, const Pose &t,
                     const RobotState &s, const IkParams &p) {
    ++calls;
    return solve_ik(m, g, l, t, s, p);
  });
  RobotState seed(pftest::fetch());
  seed.set_group_state("arm", std::vector<double>{0.3, -0.5, 0.2, 1.0, 0.1, 0.8, 0.2});
  const Pose target = forward_kinematics(seed).at("gripper_link");
  EXPECT_TRUE(reg.solve(*pftest::fetch(), "arm", "gripper_link", target, seed).success);
  EXPECT_GE(calls, 1);
}
