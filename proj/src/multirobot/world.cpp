// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/multirobot/world.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace plannerforge
{

namespace
{

std::pair<std::string, std::string> split_name(const std::string &qualified)
{
  const auto slash = qualified.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 == qualified.size())
    throw Error(ErrorCode::InvalidArgument, "expected '<robot>/<name>', got '" + qualified + "'");
  return {qualified.substr(0, slash), qualified.substr(slash + 1)};
}

}  // namespace

RobotModelPtr clone_robot(const RobotModel &model, const std::string &new_name)
{
  if (new_name.empty())
    throw Error(ErrorCode::InvalidArgument, "clone needs a non-empty name");
  return model.clone(new_name);
}

void World::add_robot(const std::string &name, RobotModelPtr model, const Pose &base)
{
  if (name.empty() || name.find('/') != std::string::npos)
    throw Error(ErrorCode::InvalidArgument, "robot names must be non-empty and contain no '/'");
  if (!model)
    throw Error(ErrorCode::InvalidArgument, "null robot model");
  if (has_robot(name))
    throw Error(ErrorCode::DuplicateName, "robot '" + name + "' already in the world");
  robots_.push_back(WorldRobot{name, std::move(model), base});
}

bool World::has_robot(const std::string &name) const
{
  return std::any_of(robots_.begin(), robots_.end(), [&](const WorldRobot &r) { return r.name == name; });
}

const WorldRobot &World::robot(const std::string &name) const
{
  for (const auto &r : robots_)
    if (r.name == name)
      return r;
  throw Error(ErrorCode::UnknownRobot, "no robot '" + name + "' in the world");
}

void World::define_composite_group(const std::string &name, const std::vector<CompositeMember> &members)
{
  if (members.empty())
    throw Error(ErrorCode::EmptyGroup, "composite group '" + name + "' has no members");
  if (composites_.count(name))
    throw Error(ErrorCode::DuplicateName, "composite group '" + name + "' already defined");
  std::set<std::string> seen;
  for (const auto &m : members)
  {
    robot(m.robot).model->group_joints(m.group);
    if (!seen.insert(m.robot).second)
      throw Error(ErrorCode::DuplicateName, "robot '" + m.robot + "' appears twice in '" + name + "'");
  }
  composites_[name] = members;
}

const std::vector<CompositeMember> &World::composite_group(const std::string &name) const
{
  const auto it = composites_.find(name);
  if (it == composites_.end())
    throw Error(ErrorCode::UnknownGroup, "no composite group '" + name + "'");
  return it->second;
}

int World::composite_dimension(const std::string &name) const
{
  int d = 0;
  for (const auto &m : composite_group(name))
    d += static_cast<int>(robot(m.robot).model->group_joints(m.group).size());
  return d;
}

std::vector<std::string> World::composite_joint_names(const std::string &name) const
{
  std::vector<std::string> out;
  for (const auto &m : composite_group(name))
    for (const auto &j : robot(m.robot).model->group_joint_names(m.group))
      out.push_back(m.robot + "/" + j);
  return out;
}

void World::allow_collision(const std::string &a, const std::string &b)
{
  for (const auto &q : {a, b})
  {
    const auto [r, link] = split_name(q);
    robot(r).model->link_index(link);
  }
  allowed_.insert(make_link_pair(a, b));
}

CollisionWorld World::collision_world(const std::vector<CollisionObject> &objects) const
{
  CollisionWorld cw;
  for (const auto &r : robots_)
    cw.add_robot(r.model, r.base, r.name + "/");
  for (const auto &obj : objects)
    cw.add_object(obj.name, obj.geometry, obj.pose);
  for (const auto &[a, b] : allowed_)
    cw.allow(*cw.find_owner(a), *cw.find_owner(b));
  return cw;
}

WorldState default_world_state(const World &world)
{
  WorldState out;
  for (const auto &r : world.robots())
    out.emplace(r.name, RobotState(r.model));
  return out;
}

namespace
{

const RobotState &state_of(const WorldState &state, const std::string &robot)
{
  const auto it = state.find(robot);
  if (it == state.end())
    throw Error(ErrorCode::UnknownRobot, "world state has no entry for '" + robot + "'");
  return it->second;
}

}  // namespace

std::map<std::string, Pose> world_forward_kinematics(const World &world, const WorldState &state)
{
  std::map<std::string, Pose> out;
  for (const auto &r : world.robots())
  {
    const auto poses = link_poses(*r.model, state_of(state, r.name).values());
    for (std::size_t i = 0; i < poses.size(); ++i)
      out.emplace(r.name + "/" + r.model->link(static_cast<int>(i)).name, r.base * poses[i]);
  }
  return out;
}

Eigen::VectorXd composite_values(const World &world, const std::string &group, const WorldState &state)
{
  Eigen::VectorXd out(world.composite_dimension(group));
  Eigen::Index offset = 0;
  for (const auto &m : world.composite_group(group))
  {
    const Eigen::VectorXd v = state_of(state, m.robot).group_state(m.group);
    out.segment(offset, v.size()) = v;
    offset += v.size();
  }
  return out;
}

void set_composite_values(const World &world, const std::string &group, const Eigen::VectorXd &values,
                          WorldState &state)
{
  if (values.size() != world.composite_dimension(group))
    throw Error(ErrorCode::ArityMismatch, "composite group '" + group + "' has " +
                                              std::to_string(world.composite_dimension(group)) + " joints");
  Eigen::Index offset = 0;
  for (const auto &m : world.composite_group(group))
  {
    const auto n = static_cast<Eigen::Index>(world.robot(m.robot).model->group_joints(m.group).size());
    auto it = state.find(m.robot);
    if (it == state.end())
      it = state.emplace(m.robot, RobotState(world.robot(m.robot).model)).first;
    it->second.set_group_state(m.group, Eigen::VectorXd(values.segment(offset, n)));
    offset += n;
  }
}

CompositeSpace::CompositeSpace(const World &world, const std::string &group,
                               const std::vector<CollisionObject> &objects, const WorldState &reference)
  : world_(world.collision_world(objects))
{
  const auto &members = world.composite_group(group);
  for (const auto &r : world.robots())
  {
    const auto it = reference.find(r.name);
    reference_.push_back(it == reference.end() ? RobotState(r.model).values() : it->second.values());
  }

  std::vector<char> continuous;
  std::vector<int> segments;
  std::vector<double> lower, upper, vmax;
  Eigen::Index offset = 0;
  for (const auto &m : members)
  {
    const RobotModel &model = *world.robot(m.robot).model;
    int slot = 0;
    while (world.robots()[static_cast<std::size_t>(slot)].name != m.robot)
      ++slot;
    slices_.push_back(Slice{slot, model.group_variables(m.group), offset});
    const auto &joints = model.group_joints(m.group);
    for (int ji : joints)
    {
      const Joint &j = model.joint(ji);
      continuous.push_back(j.type == JointType::Continuous ? 1 : 0);
      bounded_.push_back(j.has_position_limits ? 1 : 0);
      lower.push_back(j.has_position_limits ? j.lower : -M_PI);
      upper.push_back(j.has_position_limits ? j.upper : M_PI);
      vmax.push_back(j.max_velocity);
      names_.push_back(m.robot + "/" + j.name);
    }
    segments.push_back(static_cast<int>(joints.size()));
    offset += static_cast<Eigen::Index>(joints.size());
  }
  metric_ = JointMetric(std::move(continuous), std::move(segments));
  lower_ = Eigen::Map<Eigen::VectorXd>(lower.data(), static_cast<Eigen::Index>(lower.size()));
  upper_ = Eigen::Map<Eigen::VectorXd>(upper.data(), static_cast<Eigen::Index>(upper.size()));
  max_velocity_ = Eigen::Map<Eigen::VectorXd>(vmax.data(), static_cast<Eigen::Index>(vmax.size()));
}

std::vector<Eigen::VectorXd> CompositeSpace::robot_values(const Eigen::VectorXd &x) const
{
  std::vector<Eigen::VectorXd> out = reference_;
  for (const auto &s : slices_)
  {
    Eigen::VectorXd &full = out[static_cast<std::size_t>(s.robot)];
    for (std::size_t i = 0; i < s.variables.size(); ++i)
      full[s.variables[i]] = x[s.offset + static_cast<Eigen::Index>(i)];
  }
  return out;
}

bool CompositeSpace::in_collision(const Eigen::VectorXd &x) const
{
  const auto values = robot_values(x);
  return world_.in_collision(values);
}

PlanResult plan_composite(const World &world, const std::vector<CollisionObject> &objects,
                          const MotionRequest &request, const PlannerSettings &settings,
                          const PlannerRegistry &registry, const WorldState &reference)
{
  if (!registry.contains(request.planner_id))
    throw Error(ErrorCode::UnknownPlanner, "no planner registered as '" + request.planner_id + "'");
  const CompositeSpace space(world, request.group, objects, reference);
  const Eigen::VectorXd start = bind_values(request.start, space.joint_names(), "start");
  const auto *goal = std::get_if<JointGoal>(&request.goal);
  if (!goal)
    throw Error(ErrorCode::InvalidRequest, "composite requests need a joint goal");
  std::vector<Eigen::VectorXd> goals{bind_values(goal->joints, space.joint_names(), "goal")};
  const std::uint64_t seed = request.seed ? *request.seed : std::random_device{}();
  return plan_in_space(registry, request.planner_id, space, start, std::move(goals), request.group,
                       request.time_limit_s, seed, settings);
}

}  // namespace plannerforge
