// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <string>
#include <variant>

#include <Eigen/Geometry>

namespace plannerforge
{

/// Rigid transform. Every pose in the library is expressed with this type.
using Pose = Eigen::Isometry3d;

Pose make_pose(const Eigen::Vector3d &position,
               const Eigen::Quaterniond &orientation = Eigen::Quaterniond::Identity());

/// Fixed-axis roll/pitch/yaw (URDF convention: R = Rz(yaw) * Ry(pitch) * Rx(roll)).
Pose make_pose_xyz_rpy(double x, double y, double z, double roll, double pitch, double yaw);

struct Box
{
  Eigen::Vector3d size;
  bool operator==(const Box &) const = default;
};

struct Sphere
{
  double radius;
  bool operator==(const Sphere &) const = default;
};

/// Cylinder centered at its origin, axis along local Z.
struct Cylinder
{
  double radius;
  double length;
  bool operator==(const Cylinder &) const = default;
};

/// Mesh geometry is parsed and kept, but collision queries reject it.
struct Mesh
{
  std::string filename;
  Eigen::Vector3d scale = Eigen::Vector3d::Ones();
  bool operator==(const Mesh &) const = default;
};

using Geometry = std::variant<Box, Sphere, Cylinder, Mesh>;

/// Construct validated primitives; non-positive dimensions throw InvalidGeometry.
Geometry make_box(double x, double y, double z);
Geometry make_sphere(double radius);
Geometry make_cylinder(double radius, double length);

void validate_geometry(const Geometry &geometry);
bool is_primitive(const Geometry &geometry);
std::string geometry_type(const Geometry &geometry);

/// Radius of a sphere centered at the shape origin that encloses the shape.
double bounding_radius(const Geometry &geometry);

struct GjkResult
{
  double distance = 0.0;
  int iterations = 0;
};

/// Euclidean separation between two convex primitives, computed with GJK on
/// support functions. Spheres are handled as a point core plus margin. Returns
/// 0 when the shapes intersect (no penetration depth).
GjkResult gjk_distance(const Geometry &a, const Pose &pose_a, const Geometry &b, const Pose &pose_b);

/// Same verdict as gjk_distance(...).distance <= 0, but stops as soon as a
/// separating direction is found.
bool gjk_intersects(const Geometry &a, const Pose &pose_a, const Geometry &b, const Pose &pose_b);

inline double pairwise_distance(const Geometry &a, const Pose &pose_a, const Geometry &b, const Pose &pose_b)
{
  return gjk_distance(a, pose_a, b, pose_b).distance;
}

}  // namespace plannerforge
