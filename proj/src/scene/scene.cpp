// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/common/error.hpp>
#include <plannerforge/scene/scene.hpp>

namespace plannerforge
{

Scene::Scene(RobotModelPtr model) : model_(model), reference_(model)
{
}

void Scene::set_reference_state(const RobotState &state)
{
  if (state.model_ptr() != model_)
    throw Error(ErrorCode::InvalidArgument, "reference state belongs to a different robot");
  reference_ = state;
}

void Scene::update_object(const std::string &name, const Geometry &geometry, const Pose &pose)
{
  validate_geometry(geometry);
  if (name.empty())
    throw Error(ErrorCode::InvalidArgument, "collision objects need a name");
  attachments_.erase(name);
  objects_[name] = CollisionObject{name, geometry, pose};
}

const CollisionObject &Scene::object(const std::string &name) const
{
  const auto it = objects_.find(name);
  if (it == objects_.end())
    throw Error(ErrorCode::UnknownObject, "scene has no object '" + name + "'");
  return it->second;
}

void Scene::move_object(const std::string &name, const Pose &pose)
{
  object(name);
  objects_[name].pose = pose;
}

void Scene::remove_object(const std::string &name)
{
  object(name);
  objects_.erase(name);
  attachments_.erase(name);
  for (auto it = acm_overrides_.begin(); it != acm_overrides_.end();)
  {
    if (it->first == name || it->second == name)
      it = acm_overrides_.erase(it);
    else
      ++it;
  }
}

void Scene::attach_object(const std::string &object_name, const std::string &link)
{
  attach_object(object_name, link, reference_);
}

void Scene::attach_object(const std::string &object_name, const std::string &link, const RobotState &state)
{
  object(object_name);
  const int link_idx = model_->link_index(link);
  const Pose link_pose = link_poses(*model_, state.values())[static_cast<std::size_t>(link_idx)];
  attachments_[object_name] = Attachment{link, link_pose};
}

void Scene::detach_object(const std::string &object_name, const RobotState &state)
{
  const Pose pose = object_pose(object_name, state);
  attachments_.erase(object_name);
  objects_[object_name].pose = pose;
}

void Scene::set_collision_allowed(const std::string &a, const std::string &b, bool allowed)
{
  for (const auto &name : {a, b})
    if (!objects_.count(name) && !model_->find_link(name))
      throw Error(ErrorCode::UnknownObject, "'" + name + "' is neither an object nor a link");
  if (allowed)
    acm_overrides_.insert(make_link_pair(a, b));
  else
    acm_overrides_.erase(make_link_pair(a, b));
}

bool Scene::collision_allowed_override(const std::string &a, const std::string &b) const
{
  return acm_overrides_.count(make_link_pair(a, b)) > 0;
}

Pose Scene::object_pose(const std::string &name, const RobotState &state) const
{
  const CollisionObject &obj = object(name);
  const auto it = attachments_.find(name);
  if (it == attachments_.end())
    return obj.pose;
  const int link_idx = model_->link_index(it->second.link);
  const Pose now = link_poses(*model_, state.values())[static_cast<std::size_t>(link_idx)];
  return now * it->second.link_pose.inverse() * obj.pose;
}

CollisionWorld Scene::collision_world() const
{
  CollisionWorld world;
  world.add_robot(model_, Pose::Identity());
  for (const auto &[name, obj] : objects_)
  {
    const int owner = world.add_object(name, obj.geometry, obj.pose);
    const auto it = attachments_.find(name);
    if (it != attachments_.end())
      world.attach(owner, 0, model_->link_index(it->second.link), it->second.link_pose.inverse() * obj.pose);
  }
  for (const auto &[a, b] : acm_overrides_)
  {
    const auto oa = world.find_owner(a);
    const auto ob = world.find_owner(b);
    if (oa && ob)
      world.allow(*oa, *ob);
  }
  return world;
}

bool Scene::check_collision(const RobotState &state) const
{
  return collision_world().in_collision(state.values());
}

DistanceReport Scene::distance_to_collision(const RobotState &state) const
{
  return collision_world().distance(state.values());
}

namespace
{
bool pose_close(const Pose &a, const Pose &b, double tol)
{
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff() <= tol;
}
}  // namespace

bool scenes_equal(const Scene &a, const Scene &b, double tolerance)
{
  if (a.model_ptr() != b.model_ptr() && a.model().name() != b.model().name())
    return false;
  if (a.objects().size() != b.objects().size() || a.attachments().size() != b.attachments().size() ||
      a.acm_overrides() != b.acm_overrides())
    return false;
  // Attached objects compare by their pose in the link frame, which is what
  // determines their placement.
  auto effective = [](const Scene &s, const std::string &name, const CollisionObject &obj) -> Pose {
    const auto att = s.attachments().find(name);
    return att == s.attachments().end() ? obj.pose : Pose(att->second.link_pose.inverse() * obj.pose);
  };
  for (const auto &[name, obj] : a.objects())
  {
    const auto it = b.objects().find(name);
    if (it == b.objects().end() || !(obj.geometry == it->second.geometry))
      return false;
    const auto att_a = a.attachments().find(name);
    const auto att_b = b.attachments().find(name);
    if ((att_a == a.attachments().end()) != (att_b == b.attachments().end()))
      return false;
    if (att_a != a.attachments().end() && att_a->second.link != att_b->second.link)
      return false;
    if (!pose_close(effective(a, name, obj), effective(b, name, it->second), tolerance))
      return false;
  }
  return true;
}

}  // namespace plannerforge
