// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <map>
#include <set>
#include <string>

#include <plannerforge/assetio/description.hpp>
#include <plannerforge/kinematics/robot_model.hpp>
#include <plannerforge/scene/collision_world.hpp>

namespace plannerforge
{

struct CollisionObject
{
  std::string name;
  Geometry geometry;
  Pose pose = Pose::Identity();  ///< world pose (for attached objects: at attach time)
};

/// An attached object follows `link`; `link_pose` is the link's world pose at
/// attach time.
struct Attachment
{
  std::string link;
  Pose link_pose = Pose::Identity();
};

/// Collision environment for one robot. A Scene is a value: copies are deep
/// and share only the immutable robot model.
class Scene
{
public:
  explicit Scene(RobotModelPtr model);

  const RobotModel &model() const { return *model_; }
  const RobotModelPtr &model_ptr() const { return model_; }

  /// State assumed for joints that are not being planned (default all zeros).
  const RobotState &reference_state() const { return reference_; }
  void set_reference_state(const RobotState &state);

  /// Insert or replace; replacing an attached object detaches it.
  void update_object(const std::string &name, const Geometry &geometry, const Pose &pose);
  void move_object(const std::string &name, const Pose &pose);
  /// Removes the object along with its attachment and override entries.
  void remove_object(const std::string &name);
  /// Rigidly attaches at `state` (reference state when omitted).
  void attach_object(const std::string &object, const std::string &link);
  void attach_object(const std::string &object, const std::string &link, const RobotState &state);
  /// Detaches, leaving the object at its pose for `state`.
  void detach_object(const std::string &object, const RobotState &state);

  /// Scene-level override of the allowed-collision matrix over link and
  /// object names. UnknownObject if a name is neither.
  void set_collision_allowed(const std::string &a, const std::string &b, bool allowed = true);
  bool collision_allowed_override(const std::string &a, const std::string &b) const;

  bool has_object(const std::string &name) const { return objects_.count(name) > 0; }
  const CollisionObject &object(const std::string &name) const;
  const std::map<std::string, CollisionObject> &objects() const { return objects_; }
  const std::map<std::string, Attachment> &attachments() const { return attachments_; }
  const std::set<LinkPair> &acm_overrides() const { return acm_overrides_; }

  /// World pose of an object when the robot is at `state`.
  Pose object_pose(const std::string &name, const RobotState &state) const;

  /// Snapshot for repeated queries; stays valid after the scene changes.
  CollisionWorld collision_world() const;

  bool check_collision(const RobotState &state) const;
  DistanceReport distance_to_collision(const RobotState &state) const;

private:
  RobotModelPtr model_;
  RobotState reference_;
  std::map<std::string, CollisionObject> objects_;
  std::map<std::string, Attachment> attachments_;
  std::set<LinkPair> acm_overrides_;
};

/// Field-wise comparison with poses compared within `tolerance`.
bool scenes_equal(const Scene &a, const Scene &b, double tolerance = 0.0);

}  // namespace plannerforge
