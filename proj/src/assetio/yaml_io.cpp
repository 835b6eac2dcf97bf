// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/assetio/yaml_io.hpp>
#include <plannerforge/planner/planner.hpp>

#include <set>

#include "yaml_util.hpp"

namespace plannerforge
{

namespace
{

void emit_pose(YAML::Emitter &out, const Pose &pose)
{
  out << YAML::BeginMap;
  out << YAML::Key << "position" << YAML::Value;
  yaml::emit_vector(out, pose.translation());
  out << YAML::Key << "orientation_xyzw" << YAML::Value;
  yaml::emit_quaternion_xyzw(out, Eigen::Quaterniond(pose.rotation()));
  out << YAML::EndMap;
}

Pose read_pose(const YAML::Node &node, const std::string &path)
{
  yaml::require_map(node, path);
  const Eigen::Vector3d p = yaml::vector3(yaml::required(node, "position", path), path + ".position");
  const Eigen::Quaterniond q =
      yaml::quaternion_xyzw(yaml::required(node, "orientation_xyzw", path), path + ".orientation_xyzw");
  return make_pose(p, q);
}

void emit_geometry(YAML::Emitter &out, const Geometry &geometry)
{
  out << YAML::BeginMap;
  out << YAML::Key << "type" << YAML::Value << geometry_type(geometry);
  std::visit(
      [&](const auto &g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Box>)
        {
          out << YAML::Key << "size" << YAML::Value;
          yaml::emit_vector(out, g.size);
        }
        else if constexpr (std::is_same_v<T, Sphere>)
          out << YAML::Key << "radius" << YAML::Value << g.radius;
        else if constexpr (std::is_same_v<T, Cylinder>)
        {
          out << YAML::Key << "radius" << YAML::Value << g.radius;
          out << YAML::Key << "length" << YAML::Value << g.length;
        }
        else
          throw Error(ErrorCode::UnsupportedGeometry, "mesh objects cannot be written to scene files");
      },
      geometry);
  out << YAML::EndMap;
}

Geometry read_geometry(const YAML::Node &node, const std::string &path)
{
  yaml::require_map(node, path);
  const std::string type = yaml::string(yaml::required(node, "type", path), path + ".type");
  try
  {
    if (type == "box")
    {
      const Eigen::Vector3d size = yaml::vector3(yaml::required(node, "size", path), path + ".size");
      return make_box(size.x(), size.y(), size.z());
    }
    if (type == "sphere")
      return make_sphere(yaml::real(yaml::required(node, "radius", path), path + ".radius"));
    if (type == "cylinder")
      return make_cylinder(yaml::real(yaml::required(node, "radius", path), path + ".radius"),
                           yaml::real(yaml::required(node, "length", path), path + ".length"));
  }
  catch (const Error &e)
  {
    if (e.code() != ErrorCode::InvalidGeometry)
      throw;
    yaml::fail(node, path, e.what());
  }
  throw Error(ErrorCode::UnknownGeometryType, path + ".type: unknown geometry type '" + type + "'",
              yaml::line_of(node["type"]));
}

void emit_joint_map(YAML::Emitter &out, const JointValues &values)
{
  out << YAML::BeginMap;
  for (const auto &[name, value] : values)
    out << YAML::Key << name << YAML::Value << value;
  out << YAML::EndMap;
}

JointValues read_joint_map(const YAML::Node &node, const std::string &path, bool allow_empty = false)
{
  yaml::require_map(node, path);
  if (node.size() == 0 && !allow_empty)
    yaml::fail(node, path, "no joints given");
  JointValues out;
  std::set<std::string> seen;
  for (const auto &kv : node)
  {
    const std::string name = yaml::string(kv.first, path);
    if (!seen.insert(name).second)
      yaml::fail(kv.first, path, "duplicate joint '" + name + "'");
    out.emplace_back(name, yaml::real(kv.second, path + "." + name));
  }
  return out;
}

void check_keys(const YAML::Node &node, const std::string &path, std::initializer_list<const char *> allowed)
{
  for (const auto &kv : node)
  {
    const std::string key = kv.first.Scalar();
    bool ok = false;
    for (const char *a : allowed)
      ok = ok || key == a;
    if (!ok)
      yaml::fail(kv.first, path, "unknown key '" + key + "'");
  }
}

std::string finish(const YAML::Emitter &out)
{
  if (!out.good())
    throw Error(ErrorCode::IoFailure, "YAML emitter: " + out.GetLastError());
  return std::string(out.c_str()) + "\n";
}

}  // namespace

// --- scenes -------------------------------------------------------------------

std::string scene_to_yaml(const Scene &scene)
{
  const RobotState rest(scene.model_ptr());
  YAML::Emitter out;
  yaml::configure(out);
  out << YAML::BeginMap;
  out << YAML::Key << "objects" << YAML::Value;
  if (scene.objects().empty())
    out << YAML::Flow;
  out << YAML::BeginSeq;
  for (const auto &[name, obj] : scene.objects())
  {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << name;
    out << YAML::Key << "geometry" << YAML::Value;
    emit_geometry(out, obj.geometry);
    out << YAML::Key << "pose" << YAML::Value;
    emit_pose(out, scene.object_pose(name, rest));
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  if (!scene.attachments().empty())
  {
    out << YAML::Key << "attachments" << YAML::Value << YAML::BeginSeq;
    for (const auto &[name, att] : scene.attachments())
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "object" << YAML::Value << name << YAML::Key << "link"
          << YAML::Value << att.link << YAML::EndMap;
    out << YAML::EndSeq;
  }
  if (!scene.acm_overrides().empty())
  {
    out << YAML::Key << "allowed_collisions" << YAML::Value << YAML::BeginSeq;
    for (const auto &[a, b] : scene.acm_overrides())
      out << YAML::Flow << YAML::BeginSeq << a << b << YAML::EndSeq;
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  return finish(out);
}

Scene scene_from_yaml(const std::string &text, RobotModelPtr model)
{
  const YAML::Node root = yaml::load(text);
  yaml::require_map(root, "scene");
  check_keys(root, "scene", {"objects", "attachments", "allowed_collisions"});
  Scene scene(std::move(model));

  const YAML::Node objects = yaml::required(root, "objects", "scene");
  yaml::require_sequence(objects, "objects");
  for (std::size_t i = 0; i < objects.size(); ++i)
  {
    const std::string path = "objects[" + std::to_string(i) + "]";
    const YAML::Node obj = objects[i];
    yaml::require_map(obj, path);
    check_keys(obj, path, {"name", "geometry", "pose"});
    const std::string name = yaml::string(yaml::required(obj, "name", path), path + ".name");
    if (name.empty())
      yaml::fail(obj, path + ".name", "empty name");
    if (scene.has_object(name))
      yaml::fail(obj, path + ".name", "duplicate object '" + name + "'");
    const Geometry geometry = read_geometry(yaml::required(obj, "geometry", path), path + ".geometry");
    const Pose pose = read_pose(yaml::required(obj, "pose", path), path + ".pose");
    scene.update_object(name, geometry, pose);
  }

  if (const YAML::Node attachments = root["attachments"])
  {
    yaml::require_sequence(attachments, "attachments");
    for (std::size_t i = 0; i < attachments.size(); ++i)
    {
      const std::string path = "attachments[" + std::to_string(i) + "]";
      const YAML::Node att = attachments[i];
      yaml::require_map(att, path);
      check_keys(att, path, {"object", "link"});
      const std::string object = yaml::string(yaml::required(att, "object", path), path + ".object");
      const std::string link = yaml::string(yaml::required(att, "link", path), path + ".link");
      if (!scene.has_object(object))
        throw Error(ErrorCode::UnknownObject, path + ".object: no object '" + object + "'", yaml::line_of(att));
      if (!scene.model().find_link(link))
        throw Error(ErrorCode::UnknownLink, path + ".link: no link '" + link + "'", yaml::line_of(att));
      scene.attach_object(object, link);
    }
  }

  if (const YAML::Node allowed = root["allowed_collisions"])
  {
    yaml::require_sequence(allowed, "allowed_collisions");
    for (std::size_t i = 0; i < allowed.size(); ++i)
    {
      const std::string path = "allowed_collisions[" + std::to_string(i) + "]";
      const YAML::Node pair = allowed[i];
      yaml::require_sequence(pair, path);
      if (pair.size() != 2)
        yaml::fail(pair, path, "expected a pair of names");
      const std::string a = yaml::string(pair[0], path + "[0]");
      const std::string b = yaml::string(pair[1], path + "[1]");
      try
      {
        scene.set_collision_allowed(a, b);
      }
      catch (const Error &e)
      {
        throw Error(e.code(), path + ": " + e.what(), yaml::line_of(pair));
      }
    }
  }
  return scene;
}

// --- requests -----------------------------------------------------------------

std::string request_to_yaml(const MotionRequest &request)
{
  YAML::Emitter out;
  yaml::configure(out);
  out << YAML::BeginMap;
  out << YAML::Key << "group" << YAML::Value << request.group;
  out << YAML::Key << "start" << YAML::Value << YAML::BeginMap << YAML::Key << "joints" << YAML::Value;
  emit_joint_map(out, request.start);
  out << YAML::EndMap;
  out << YAML::Key << "goal" << YAML::Value << YAML::BeginMap;
  if (const auto *joints = std::get_if<JointGoal>(&request.goal))
  {
    out << YAML::Key << "joints" << YAML::Value;
    emit_joint_map(out, joints->joints);
  }
  else
  {
    const auto &pose = std::get<PoseGoal>(request.goal);
    out << YAML::Key << "pose" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "link" << YAML::Value << pose.link;
    out << YAML::Key << "position" << YAML::Value;
    yaml::emit_vector(out, pose.target.translation());
    out << YAML::Key << "orientation_xyzw" << YAML::Value;
    yaml::emit_quaternion_xyzw(out, Eigen::Quaterniond(pose.target.rotation()));
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::Key << "planner" << YAML::Value << request.planner_id;
  out << YAML::Key << "time_limit_s" << YAML::Value << request.time_limit_s;
  if (request.seed)
    out << YAML::Key << "seed" << YAML::Value << *request.seed;
  out << YAML::EndMap;
  return finish(out);
}

MotionRequest request_from_yaml(const std::string &text)
{
  const YAML::Node root = yaml::load(text);
  yaml::require_map(root, "request");
  check_keys(root, "request", {"group", "start", "goal", "planner", "time_limit_s", "seed"});
  MotionRequest request;
  request.group = yaml::string(yaml::required(root, "group", "request"), "group");
  if (request.group.empty())
    yaml::fail(root["group"], "group", "empty group name");

  const YAML::Node start = yaml::required(root, "start", "request");
  yaml::require_map(start, "start");
  check_keys(start, "start", {"joints"});
  request.start = read_joint_map(yaml::required(start, "joints", "start"), "start.joints");

  const YAML::Node goal = yaml::required(root, "goal", "request");
  yaml::require_map(goal, "goal");
  check_keys(goal, "goal", {"joints", "pose"});
  if (goal["joints"] && goal["pose"])
    yaml::fail(goal, "goal", "exactly one of 'joints' and 'pose' is allowed");
  if (const YAML::Node joints = goal["joints"])
    request.goal = JointGoal{read_joint_map(joints, "goal.joints")};
  else if (const YAML::Node pose = goal["pose"])
  {
    yaml::require_map(pose, "goal.pose");
    check_keys(pose, "goal.pose", {"link", "position", "orientation_xyzw"});
    PoseGoal pg;
    pg.link = yaml::string(yaml::required(pose, "link", "goal.pose"), "goal.pose.link");
    pg.target = read_pose(pose, "goal.pose");
    request.goal = pg;
  }
  else
    yaml::fail(goal, "goal", "expected 'joints' or 'pose'");

  if (const YAML::Node planner = root["planner"])
    request.planner_id = yaml::string(planner, "planner");
  if (const YAML::Node limit = root["time_limit_s"])
  {
    request.time_limit_s = yaml::real(limit, "time_limit_s");
    if (!(request.time_limit_s > 0.0))
      yaml::fail(limit, "time_limit_s", "must be positive");
  }
  if (const YAML::Node seed = root["seed"])
    request.seed = yaml::unsigned_integer(seed, "seed");
  return request;
}

// --- trajectories -------------------------------------------------------------

std::string trajectory_to_yaml(const Trajectory &trajectory)
{
  YAML::Emitter out;
  yaml::configure(out);
  out << YAML::BeginMap;
  out << YAML::Key << "group" << YAML::Value << trajectory.group;
  out << YAML::Key << "times" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double t : trajectory.times)
    out << t;
  out << YAML::EndSeq;
  out << YAML::Key << "waypoints" << YAML::Value << YAML::BeginSeq;
  for (const auto &w : trajectory.waypoints)
  {
    out << YAML::Flow << YAML::BeginMap;
    for (std::size_t j = 0; j < trajectory.joint_names.size(); ++j)
      out << YAML::Key << trajectory.joint_names[j] << YAML::Value << w[static_cast<Eigen::Index>(j)];
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return finish(out);
}

Trajectory trajectory_from_yaml(const std::string &text)
{
  const YAML::Node root = yaml::load(text);
  yaml::require_map(root, "trajectory");
  check_keys(root, "trajectory", {"group", "times", "waypoints"});
  Trajectory t;
  t.group = yaml::string(yaml::required(root, "group", "trajectory"), "group");

  const YAML::Node times = yaml::required(root, "times", "trajectory");
  yaml::require_sequence(times, "times");
  const YAML::Node waypoints = yaml::required(root, "waypoints", "trajectory");
  yaml::require_sequence(waypoints, "waypoints");
  if (times.size() != waypoints.size())
    yaml::fail(times, "times", "length differs from waypoints");
  if (waypoints.size() < 2)
    yaml::fail(waypoints, "waypoints", "a trajectory needs at least two waypoints");

  for (std::size_t i = 0; i < times.size(); ++i)
  {
    const double v = yaml::real(times[i], "times[" + std::to_string(i) + "]");
    if ((i == 0 && v != 0.0) || (i > 0 && v < t.times.back()))
      yaml::fail(times[i], "times[" + std::to_string(i) + "]", "times must start at 0 and be non-decreasing");
    t.times.push_back(v);
  }
  for (std::size_t i = 0; i < waypoints.size(); ++i)
  {
    const std::string path = "waypoints[" + std::to_string(i) + "]";
    const JointValues values = read_joint_map(waypoints[i], path);
    if (i == 0)
      for (const auto &[name, v] : values)
        t.joint_names.push_back(name);
    try
    {
      t.waypoints.push_back(bind_values(values, t.joint_names, path));
    }
    catch (const Error &e)
    {
      yaml::fail(waypoints[i], path, e.what());
    }
  }
  t.metric = JointMetric::euclidean(static_cast<int>(t.joint_names.size()));
  return t;
}

Trajectory trajectory_from_yaml(const std::string &text, const RobotModel &model)
{
  Trajectory raw = trajectory_from_yaml(text);
  Trajectory t;
  t.group = raw.group;
  t.joint_names = model.group_joint_names(raw.group);
  t.metric = group_metric(model, raw.group);
  t.times = raw.times;
  for (const auto &w : raw.waypoints)
  {
    JointValues values;
    for (std::size_t j = 0; j < raw.joint_names.size(); ++j)
      values.emplace_back(raw.joint_names[j], w[static_cast<Eigen::Index>(j)]);
    t.waypoints.push_back(bind_values(values, t.joint_names, "trajectory"));
  }
  return t;
}

}  // namespace plannerforge
