// Test-side reference computations. None of these call into the library's
// kinematics or collision code.
#pragma once

#include <plannerforge/assetio/description.hpp>
#include <plannerforge/common/random.hpp>
#include <plannerforge/kinematics/robot_model.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <utility>
#include <vector>
#include <map>
#include <string>

namespace oracle
{

using Mat4 = Eigen::Matrix4d;

inline Mat4 to_mat(const plannerforge::Pose &p) { return p.matrix(); }

/// Rodrigues: R = I + sin(t) K + (1 - cos(t)) K^2 for a unit axis.
inline Eigen::Matrix3d rotation(const Eigen::Vector3d &axis, double t)
{
  const Eigen::Vector3d k = axis.normalized();
  Eigen::Matrix3d K;
  K << 0, -k.z(), k.y(), k.z(), 0, -k.x(), -k.y(), k.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(t) * K + (1.0 - std::cos(t)) * K * K;
}

inline Mat4 joint_motion(const plannerforge::UrdfJoint &j, double value)
{
  Mat4 m = Mat4::Identity();
  switch (j.type)
  {
  case plannerforge::JointType::Revolute:
  case plannerforge::JointType::Continuous:
    m.block<3, 3>(0, 0) = rotation(j.axis, value);
    break;
  case plannerforge::JointType::Prismatic:
    m.block<3, 1>(0, 3) = j.axis.normalized() * value;
    break;
  case plannerforge::JointType::Fixed:
    break;
  }
  return m;
}

/// World transform of every link by walking the URDF tree and multiplying
/// 4x4 matrices. `value_of(joint name)` supplies joint positions.
inline std::map<std::string, Mat4> forward_kinematics(const plannerforge::UrdfTree &tree,
                                                      const std::function<double(const std::string &)> &value_of)
{
  std::map<std::string, const plannerforge::UrdfJoint *> parent_joint;
  for (const auto &j : tree.joints)
    parent_joint[j.child] = &j;
  std::map<std::string, Mat4> out;
  std::function<Mat4(const std::string &)> pose = [&](const std::string &link) -> Mat4 {
    if (auto it = out.find(link); it != out.end())
      return it->second;
    Mat4 m = Mat4::Identity();
    if (auto it = parent_joint.find(link); it != parent_joint.end())
    {
      const auto &j = *it->second;
      const double v = j.type == plannerforge::JointType::Fixed ? 0.0 : value_of(j.name);
      m = pose(j.parent) * to_mat(j.origin) * joint_motion(j, v);
    }
    out[link] = m;
    return m;
  };
  for (const auto &l : tree.links)
    pose(l.name);
  return out;
}

/// Same, reading values from a library state by joint name.
inline std::map<std::string, Mat4> forward_kinematics(const plannerforge::UrdfTree &tree,
                                                      const plannerforge::RobotState &state)
{
  return forward_kinematics(tree, [&](const std::string &j) { return state.joint_value(j); });
}

inline double point_cylinder(const Eigen::Vector3d &p_local, double radius, double length)
{
  const double dr = std::max(std::hypot(p_local.x(), p_local.y()) - radius, 0.0);
  const double dz = std::max(std::abs(p_local.z()) - 0.5 * length, 0.0);
  return std::hypot(dr, dz);
}

/// Random serial chain of `n` non-fixed joints with arbitrary origins and axes.
inline std::string random_chain_urdf(plannerforge::Rng &rng, int n)
{
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::string xml = "<robot name=\"chain\">\n<link name=\"l0\"/>\n";
  static const char *types[] = {"revolute", "continuous", "prismatic"};
  for (int i = 1; i <= n; ++i)
  {
    Eigen::Vector3d axis(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    if (axis.norm() < 0.1)
      axis = Eigen::Vector3d::UnitZ();
    axis.normalize();
    const char *type = types[rng.uniform_int(0, 2)];
    xml += "<link name=\"l" + std::to_string(i) + "\"/>\n";
    xml += "<joint name=\"j" + std::to_string(i) + "\" type=\"" + type + "\">";
    xml += "<parent link=\"l" + std::to_string(i - 1) + "\"/><child link=\"l" + std::to_string(i) + "\"/>";
    xml += "<origin xyz=\"" + num(rng.uniform(-0.5, 0.5)) + " " + num(rng.uniform(-0.5, 0.5)) + " " +
           num(rng.uniform(-0.5, 0.5)) + "\" rpy=\"" + num(rng.uniform(-3, 3)) + " " + num(rng.uniform(-1.5, 1.5)) +
           " " + num(rng.uniform(-3, 3)) + "\"/>";
    xml += "<axis xyz=\"" + num(axis.x()) + " " + num(axis.y()) + " " + num(axis.z()) + "\"/>";
    if (std::string(type) != "continuous")
      xml += "<limit lower=\"-2\" upper=\"2\" velocity=\"1\"/>";
    xml += "</joint>\n";
  }
  return xml + "</robot>\n";
}

struct SphereBody
{
  std::string name;
  Eigen::Vector3d center;
  double radius;
  bool robot = false;
};

struct SphereVerdict
{
  bool in_collision = false;
  double separation = std::numeric_limits<double>::infinity();
  std::pair<std::string, std::string> pair;
};

/// planar2's collision spheres at (q1, q2), from the two-link formula.
inline std::vector<SphereBody> planar2_spheres(double q1, double q2)
{
  auto at = [](double a, double len) { return Eigen::Vector3d(len * std::cos(a), len * std::sin(a), 0.0); };
  const Eigen::Vector3d elbow = at(q1, 1.0);
  return {{"base_link", Eigen::Vector3d::Zero(), 0.1, true},
          {"link1", at(q1, 0.5), 0.1, true},
          {"link2", elbow + at(q1 + q2, 0.5), 0.1, true},
          {"tip", elbow + at(q1 + q2, 1.0), 0.05, true}};
}

/// All-pairs sphere check. `skip(a, b)` excludes a pair (adjacency, SRDF,
/// scene overrides); robot-robot, robot-object and object-object pairs all count.
inline SphereVerdict all_pairs(const std::vector<SphereBody> &bodies,
                               const std::function<bool(const std::string &, const std::string &)> &skip)
{
  SphereVerdict v;
  bool any = false;
  for (std::size_t i = 0; i < bodies.size(); ++i)
    for (std::size_t j = i + 1; j < bodies.size(); ++j)
    {
      if (skip(bodies[i].name, bodies[j].name))
        continue;
      const double d = std::max(
          (bodies[i].center - bodies[j].center).norm() - bodies[i].radius - bodies[j].radius, 0.0);
      const auto pair = std::minmax(bodies[i].name, bodies[j].name);
      const std::pair<std::string, std::string> p{pair.first, pair.second};
      if (!any || d < v.separation || (d == v.separation && p < v.pair))
      {
        v.separation = d;
        v.pair = p;
        any = true;
      }
    }
  v.in_collision = any && v.separation <= 0.0;
  return v;
}

}  // namespace oracle
