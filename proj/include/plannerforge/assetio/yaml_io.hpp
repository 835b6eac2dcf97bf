// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <string>

#include <plannerforge/planner/request.hpp>
#include <plannerforge/planner/trajectory.hpp>
#include <plannerforge/scene/scene.hpp>

namespace plannerforge
{

/// Attached objects are written at their pose for the model's default state,
/// which is also the state they are re-attached at on load.
std::string scene_to_yaml(const Scene &scene);
/// SchemaViolation / UnknownGeometryType on bad documents; UnknownLink for
/// attachments to missing links; UnknownObject for bad references.
Scene scene_from_yaml(const std::string &text, RobotModelPtr model);

std::string request_to_yaml(const MotionRequest &request);
/// Does not need a robot; group and joint names are checked when planning.
MotionRequest request_from_yaml(const std::string &text);

std::string trajectory_to_yaml(const Trajectory &trajectory);
/// Joint order follows the first waypoint; the metric is euclidean.
Trajectory trajectory_from_yaml(const std::string &text);
/// Binds to the group's joint order and metric. UnknownGroup, InvalidRequest.
Trajectory trajectory_from_yaml(const std::string &text, const RobotModel &model);

}  // namespace plannerforge
