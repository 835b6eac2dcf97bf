// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/common/error.hpp>
#include <plannerforge/scene/collision_world.hpp>

#include <cmath>
#include <limits>

namespace plannerforge
{

namespace
{
double shape_bound(const Geometry &g)
{
  return is_primitive(g) ? bounding_radius(g) : std::numeric_limits<double>::infinity();
}
}  // namespace

int CollisionWorld::add_owner(const std::string &name)
{
  const int id = static_cast<int>(owner_names_.size());
  owner_names_.push_back(name);
  for (auto &row : excluded_)
    row.push_back(0);
  excluded_.emplace_back(owner_names_.size(), 0);
  excluded_.back().back() = 1;  // an owner never collides with itself
  return id;
}

void CollisionWorld::set_excluded(int a, int b)
{
  excluded_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
  excluded_[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = 1;
}

bool CollisionWorld::excluded(int a, int b) const
{
  return excluded_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0;
}

int CollisionWorld::add_robot(RobotModelPtr model, const Pose &base, const std::string &prefix)
{
  const int robot = static_cast<int>(robots_.size());
  const int first = static_cast<int>(owner_names_.size());
  for (const Link &link : model->links())
    add_owner(prefix + link.name);

  const int n = static_cast<int>(model->links().size());
  for (int a = 0; a < n; ++a)
  {
    for (int b = a + 1; b < n; ++b)
      if (model->adjacent(a, b) || model->collision_allowed(a, b))
        set_excluded(first + a, first + b);
    for (const CollisionShape &cs : model->link(a).collisions)
      shapes_.push_back(Shape{first + a, cs.geometry, cs.origin, robot, a, shape_bound(cs.geometry)});
  }
  robots_.push_back(Robot{std::move(model), base, first});
  return robot;
}

int CollisionWorld::add_object(const std::string &name, const Geometry &geometry, const Pose &pose)
{
  const int owner = add_owner(name);
  shapes_.push_back(Shape{owner, geometry, pose, -1, -1, shape_bound(geometry)});
  return owner;
}

void CollisionWorld::attach(int object_owner, int robot, int link, const Pose &relative)
{
  for (Shape &shape : shapes_)
  {
    if (shape.owner != object_owner)
      continue;
    shape.robot = robot;
    shape.link = link;
    shape.local = relative;
  }
  set_excluded(object_owner, link_owner(robot, link));
}

void CollisionWorld::allow(int owner_a, int owner_b)
{
  set_excluded(owner_a, owner_b);
}

std::optional<int> CollisionWorld::find_owner(const std::string &name) const
{
  for (std::size_t i = 0; i < owner_names_.size(); ++i)
    if (owner_names_[i] == name)
      return static_cast<int>(i);
  return std::nullopt;
}

int CollisionWorld::link_owner(int robot, int link) const
{
  return robots_[static_cast<std::size_t>(robot)].first_owner + link;
}

std::vector<CollisionWorld::Placed> CollisionWorld::place(std::span<const Eigen::VectorXd> robot_values) const
{
  if (robot_values.size() != robots_.size())
    throw Error(ErrorCode::ArityMismatch, "collision query needs one value vector per robot");
  std::vector<std::vector<Pose>> link_world(robots_.size());
  for (std::size_t r = 0; r < robots_.size(); ++r)
  {
    link_world[r] = link_poses(*robots_[r].model, robot_values[r]);
    for (Pose &p : link_world[r])
      p = robots_[r].base * p;
  }
  std::vector<Placed> placed;
  placed.reserve(shapes_.size());
  for (const Shape &shape : shapes_)
  {
    if (shape.robot < 0)
      placed.push_back({&shape, shape.local});
    else
      placed.push_back(
          {&shape, link_world[static_cast<std::size_t>(shape.robot)][static_cast<std::size_t>(shape.link)] * shape.local});
  }
  return placed;
}

bool CollisionWorld::in_collision(std::span<const Eigen::VectorXd> robot_values) const
{
  const auto placed = place(robot_values);
  for (std::size_t i = 0; i < placed.size(); ++i)
  {
    const Shape &a = *placed[i].shape;
    for (std::size_t j = i + 1; j < placed.size(); ++j)
    {
      const Shape &b = *placed[j].shape;
      if (excluded(a.owner, b.owner))
        continue;
      const double centers = (placed[i].pose.translation() - placed[j].pose.translation()).norm();
      if (centers > a.bound + b.bound)
        continue;
      if (gjk_intersects(a.geometry, placed[i].pose, b.geometry, placed[j].pose))
        return true;
    }
  }
  return false;
}

DistanceReport CollisionWorld::distance(std::span<const Eigen::VectorXd> robot_values) const
{
  const auto placed = place(robot_values);
  DistanceReport report;
  report.separation = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < placed.size(); ++i)
  {
    const Shape &a = *placed[i].shape;
    for (std::size_t j = i + 1; j < placed.size(); ++j)
    {
      const Shape &b = *placed[j].shape;
      if (excluded(a.owner, b.owner))
        continue;
      const double centers = (placed[i].pose.translation() - placed[j].pose.translation()).norm();
      if (report.nearest_pair && centers - a.bound - b.bound > report.separation)
        continue;
      const double d = gjk_distance(a.geometry, placed[i].pose, b.geometry, placed[j].pose).distance;
      auto names = std::minmax(owner_name(a.owner), owner_name(b.owner));
      std::pair<std::string, std::string> pair{names.first, names.second};
      if (!report.nearest_pair || d < report.separation || (d == report.separation && pair < *report.nearest_pair))
      {
        report.separation = d;
        report.nearest_pair = std::move(pair);
      }
    }
  }
  report.in_collision = report.nearest_pair.has_value() && report.separation <= 0.0;
  if (report.in_collision)
    report.separation = 0.0;
  return report;
}

}  // namespace plannerforge
