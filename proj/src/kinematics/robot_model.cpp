// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/common/error.hpp>
#include <plannerforge/kinematics/robot_model.hpp>

#include <algorithm>
#include <cmath>
#include <deque>

namespace plannerforge
{

double wrap_angle(double angle)
{
  double wrapped = std::remainder(angle, 2.0 * M_PI);  // [-pi, pi]
  if (wrapped <= -M_PI)
    wrapped += 2.0 * M_PI;
  return wrapped;
}

Pose joint_motion(const Joint &joint, double value)
{
  Pose motion = Pose::Identity();
  switch (joint.type)
  {
    case JointType::Revolute:
    case JointType::Continuous:
      motion.linear() = Eigen::AngleAxisd(value, joint.axis).toRotationMatrix();
      break;
    case JointType::Prismatic:
      motion.translation() = joint.axis * value;
      break;
    case JointType::Fixed:
      break;
  }
  return motion;
}

RobotModelPtr RobotModel::build(const RawRobotDescription &raw)
{
  const UrdfTree urdf = parse_urdf(raw.urdf_xml);
  const SrdfInfo srdf = parse_srdf(raw.srdf_xml, urdf);
  return std::make_shared<const RobotModel>(urdf, srdf, raw.joint_limit_overrides, raw.kinematics_config);
}

RobotModel::RobotModel(const UrdfTree &urdf, const SrdfInfo &srdf,
                       const std::map<std::string, JointLimitOverride> &overrides,
                       std::map<std::string, KinematicsConfig> kinematics)
  : name_(urdf.name), kinematics_(std::move(kinematics))
{
  std::map<std::string, const UrdfLink *> urdf_links;
  std::map<std::string, std::vector<const UrdfJoint *>> children;
  for (const auto &link : urdf.links)
    urdf_links[link.name] = &link;
  for (const auto &joint : urdf.joints)
    children[joint.parent].push_back(&joint);

  // Breadth-first from the root; child order follows the document.
  std::deque<std::string> queue{urdf.root};
  links_.push_back(Link{urdf.root, urdf_links.at(urdf.root)->collisions, -1, {}});
  link_index_[urdf.root] = 0;
  while (!queue.empty())
  {
    const std::string parent = queue.front();
    queue.pop_front();
    const int parent_index = link_index_.at(parent);
    for (const UrdfJoint *uj : children[parent])
    {
      const int joint_idx = static_cast<int>(joints_.size());
      const int child_idx = static_cast<int>(links_.size());
      links_.push_back(Link{uj->child, urdf_links.at(uj->child)->collisions, joint_idx, {}});
      link_index_[uj->child] = child_idx;
      links_[static_cast<std::size_t>(parent_index)].child_joints.push_back(joint_idx);

      Joint j;
      j.name = uj->name;
      j.type = uj->type;
      j.parent_link = parent_index;
      j.child_link = child_idx;
      j.origin = uj->origin;
      j.axis = uj->axis;
      if (uj->limits)
      {
        j.lower = uj->limits->lower;
        j.upper = uj->limits->upper;
        if (uj->limits->velocity && *uj->limits->velocity > 0.0)
          j.max_velocity = *uj->limits->velocity;
      }
      j.has_position_limits = j.type == JointType::Revolute || j.type == JointType::Prismatic;
      joint_index_[j.name] = joint_idx;
      joints_.push_back(j);
      queue.push_back(uj->child);
    }
  }

  for (const auto &[name, o] : overrides)
  {
    const auto it = joint_index_.find(name);
    if (it == joint_index_.end())
      throw Error(ErrorCode::DanglingReference, "joint limit override for unknown joint '" + name + "'");
    Joint &j = joints_[static_cast<std::size_t>(it->second)];
    if (o.lower && o.upper && *o.lower > *o.upper)
      throw Error(ErrorCode::LimitContradiction, "override for '" + name + "' has lower > upper");
    if (j.has_position_limits)
    {
      if (o.lower)
        j.lower = *o.lower;
      if (o.upper)
        j.upper = *o.upper;
    }
    if (o.max_velocity)
    {
      if (*o.max_velocity <= 0.0)
        throw Error(ErrorCode::LimitContradiction, "override for '" + name + "' has non-positive velocity");
      j.max_velocity = *o.max_velocity;
    }
  }

  for (std::size_t i = 0; i < joints_.size(); ++i)
  {
    Joint &j = joints_[i];
    if (j.has_position_limits && j.lower > j.upper)
      throw Error(ErrorCode::LimitContradiction, "joint '" + j.name + "' has lower > upper");
    if (j.actuated())
    {
      j.variable_index = static_cast<int>(variable_joints_.size());
      variable_joints_.push_back(static_cast<int>(i));
    }
  }

  for (const auto &[group, names] : srdf.groups)
  {
    std::vector<int> indices;
    for (const auto &joint : names)
    {
      const auto it = joint_index_.find(joint);
      if (it == joint_index_.end())
        throw Error(ErrorCode::DanglingReference, "group '" + group + "' names unknown joint '" + joint + "'");
      if (!joints_[static_cast<std::size_t>(it->second)].actuated())
        continue;
      indices.push_back(it->second);
    }
    if (indices.empty())
      throw Error(ErrorCode::EmptyGroup, "group '" + group + "' has no actuated joints");
    groups_[group] = std::move(indices);
  }
  for (const auto &[group, cfg] : kinematics_)
    if (!groups_.count(group))
      throw Error(ErrorCode::UnknownGroup, "kinematics configuration for unknown group '" + group + "'");

  const std::size_t n = links_.size();
  allowed_.assign(n, std::vector<bool>(n, false));
  for (const auto &[a, b] : srdf.disabled_collisions)
  {
    const int ia = link_index(a);
    const int ib = link_index(b);
    allowed_[static_cast<std::size_t>(ia)][static_cast<std::size_t>(ib)] = true;
    allowed_[static_cast<std::size_t>(ib)][static_cast<std::size_t>(ia)] = true;
  }

  moves_.assign(joints_.size(), std::vector<bool>(n, false));
  for (std::size_t l = 0; l < n; ++l)
  {
    int joint = links_[l].parent_joint;
    while (joint >= 0)
    {
      moves_[static_cast<std::size_t>(joint)][l] = true;
      joint = links_[static_cast<std::size_t>(joints_[static_cast<std::size_t>(joint)].parent_link)].parent_joint;
    }
  }
}

RobotModelPtr RobotModel::clone(const std::string &new_name) const
{
  auto copy = std::shared_ptr<RobotModel>(new RobotModel(*this));
  copy->name_ = new_name;
  return copy;
}

std::optional<int> RobotModel::find_link(const std::string &name) const
{
  const auto it = link_index_.find(name);
  if (it == link_index_.end())
    return std::nullopt;
  return it->second;
}

std::optional<int> RobotModel::find_joint(const std::string &name) const
{
  const auto it = joint_index_.find(name);
  if (it == joint_index_.end())
    return std::nullopt;
  return it->second;
}

int RobotModel::link_index(const std::string &name) const
{
  if (auto idx = find_link(name))
    return *idx;
  throw Error(ErrorCode::UnknownLink, "robot '" + name_ + "' has no link '" + name + "'");
}

int RobotModel::joint_index(const std::string &name) const
{
  if (auto idx = find_joint(name))
    return *idx;
  throw Error(ErrorCode::UnknownJoint, "robot '" + name_ + "' has no joint '" + name + "'");
}

std::vector<std::string> RobotModel::group_names() const
{
  std::vector<std::string> out;
  for (const auto &[name, joints] : groups_)
    out.push_back(name);
  return out;
}

const std::vector<int> &RobotModel::group_joints(const std::string &group) const
{
  const auto it = groups_.find(group);
  if (it == groups_.end())
    throw Error(ErrorCode::UnknownGroup, "robot '" + name_ + "' has no group '" + group + "'");
  return it->second;
}

std::vector<int> RobotModel::group_variables(const std::string &group) const
{
  std::vector<int> out;
  for (int j : group_joints(group))
    out.push_back(joint(j).variable_index);
  return out;
}

std::vector<std::string> RobotModel::group_joint_names(const std::string &group) const
{
  std::vector<std::string> out;
  for (int j : group_joints(group))
    out.push_back(joint(j).name);
  return out;
}

const KinematicsConfig &RobotModel::kinematics_config(const std::string &group) const
{
  static const KinematicsConfig defaults;
  group_joints(group);
  const auto it = kinematics_.find(group);
  return it == kinematics_.end() ? defaults : it->second;
}

bool RobotModel::collision_allowed(int a, int b) const
{
  return allowed_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

bool RobotModel::adjacent(int a, int b) const
{
  const int pa = link(a).parent_joint;
  const int pb = link(b).parent_joint;
  return (pa >= 0 && joint(pa).parent_link == b) || (pb >= 0 && joint(pb).parent_link == a);
}

bool RobotModel::joint_moves_link(int joint_idx, int link_idx) const
{
  return moves_[static_cast<std::size_t>(joint_idx)][static_cast<std::size_t>(link_idx)];
}

// ---------------------------------------------------------------------------

RobotState::RobotState(RobotModelPtr model) : model_(std::move(model))
{
  values_ = Eigen::VectorXd::Zero(model_->variable_count());
  for (int v = 0; v < model_->variable_count(); ++v)
  {
    const Joint &j = model_->joint(model_->variable_joint(v));
    if (j.has_position_limits)
      values_[v] = std::clamp(0.0, j.lower, j.upper);
  }
}

RobotState::RobotState(RobotModelPtr model, Eigen::VectorXd values) : model_(std::move(model))
{
  set_values(values);
}

void RobotState::set_values(const Eigen::VectorXd &values)
{
  if (values.size() != model_->variable_count())
    throw Error(ErrorCode::ArityMismatch, "state of '" + model_->name() + "' needs " +
                                              std::to_string(model_->variable_count()) + " values");
  values_ = values;
  for (int v = 0; v < model_->variable_count(); ++v)
    if (model_->joint(model_->variable_joint(v)).type == JointType::Continuous)
      values_[v] = wrap_angle(values_[v]);
}

double RobotState::joint_value(const std::string &joint) const
{
  const Joint &j = model_->joint(model_->joint_index(joint));
  if (!j.actuated())
    return 0.0;
  return values_[j.variable_index];
}

void RobotState::set_joint_value(const std::string &joint, double value)
{
  const Joint &j = model_->joint(model_->joint_index(joint));
  if (!j.actuated())
    throw Error(ErrorCode::InvalidArgument, "joint '" + joint + "' is fixed");
  values_[j.variable_index] = j.type == JointType::Continuous ? wrap_angle(value) : value;
}

void RobotState::set_group_state(const std::string &group, const std::vector<double> &values)
{
  set_group_state(group, Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
}

void RobotState::set_group_state(const std::string &group, const Eigen::VectorXd &values)
{
  const auto &joints = model_->group_joints(group);
  if (static_cast<std::size_t>(values.size()) != joints.size())
    throw Error(ErrorCode::ArityMismatch, "group '" + group + "' has " + std::to_string(joints.size()) +
                                              " joints, got " + std::to_string(values.size()) + " values");
  for (std::size_t i = 0; i < joints.size(); ++i)
  {
    const Joint &j = model_->joint(joints[i]);
    const double v = values[static_cast<Eigen::Index>(i)];
    values_[j.variable_index] = j.type == JointType::Continuous ? wrap_angle(v) : v;
  }
}

Eigen::VectorXd RobotState::group_state(const std::string &group) const
{
  const auto &joints = model_->group_joints(group);
  Eigen::VectorXd out(static_cast<Eigen::Index>(joints.size()));
  for (std::size_t i = 0; i < joints.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = values_[model_->joint(joints[i]).variable_index];
  return out;
}

bool RobotState::within_limits(double tolerance) const
{
  for (int v = 0; v < model_->variable_count(); ++v)
  {
    const Joint &j = model_->joint(model_->variable_joint(v));
    if (j.has_position_limits && (values_[v] < j.lower - tolerance || values_[v] > j.upper + tolerance))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

std::vector<Pose> link_poses(const RobotModel &model, const Eigen::VectorXd &values)
{
  std::vector<Pose> poses(model.links().size(), Pose::Identity());
  for (const Joint &j : model.joints())
  {
    const Pose &parent = poses[static_cast<std::size_t>(j.parent_link)];
    Pose &child = poses[static_cast<std::size_t>(j.child_link)];
    if (j.actuated())
      child = parent * j.origin * joint_motion(j, values[j.variable_index]);
    else
      child = parent * j.origin;
  }
  return poses;
}

std::map<std::string, Pose> forward_kinematics(const RobotState &state)
{
  const auto poses = link_poses(state.model(), state.values());
  std::map<std::string, Pose> out;
  for (std::size_t i = 0; i < poses.size(); ++i)
    out.emplace(state.model().links()[i].name, poses[i]);
  return out;
}

Eigen::MatrixXd jacobian(const RobotState &state, const std::string &group, const std::string &tip_link)
{
  const RobotModel &model = state.model();
  const auto &joints = model.group_joints(group);
  const int tip = model.link_index(tip_link);
  const auto poses = link_poses(model, state.values());
  const Eigen::Vector3d tip_position = poses[static_cast<std::size_t>(tip)].translation();

  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(6, static_cast<Eigen::Index>(joints.size()));
  for (std::size_t c = 0; c < joints.size(); ++c)
  {
    const Joint &j = model.joint(joints[c]);
    if (!model.joint_moves_link(joints[c], tip))
      continue;
    // The joint frame is the child link frame before motion; its axis is
    // invariant under the joint's own motion.
    const Pose frame = poses[static_cast<std::size_t>(j.parent_link)] * j.origin;
    const Eigen::Vector3d axis = frame.linear() * j.axis;
    const auto col = static_cast<Eigen::Index>(c);
    if (j.type == JointType::Prismatic)
      jac.block<3, 1>(0, col) = axis;
    else
    {
      jac.block<3, 1>(0, col) = axis.cross(tip_position - frame.translation());
      jac.block<3, 1>(3, col) = axis;
    }
  }
  return jac;
}

Eigen::MatrixXd chain_jacobian(const RobotState &state, const std::string &tip_link)
{
  const RobotModel &model = state.model();
  const int tip = model.link_index(tip_link);
  std::vector<int> chain;
  for (int j = model.link(tip).parent_joint; j >= 0; j = model.link(model.joint(j).parent_link).parent_joint)
    if (model.joint(j).actuated())
      chain.push_back(j);
  std::reverse(chain.begin(), chain.end());

  const auto poses = link_poses(model, state.values());
  const Eigen::Vector3d tip_position = poses[static_cast<std::size_t>(tip)].translation();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(6, static_cast<Eigen::Index>(chain.size()));
  for (std::size_t c = 0; c < chain.size(); ++c)
  {
    const Joint &j = model.joint(chain[c]);
    const Pose frame = poses[static_cast<std::size_t>(j.parent_link)] * j.origin;
    const Eigen::Vector3d axis = frame.linear() * j.axis;
    const auto col = static_cast<Eigen::Index>(c);
    if (j.type == JointType::Prismatic)
      jac.block<3, 1>(0, col) = axis;
    else
    {
      jac.block<3, 1>(0, col) = axis.cross(tip_position - frame.translation());
      jac.block<3, 1>(3, col) = axis;
    }
  }
  return jac;
}

}  // namespace plannerforge
