// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/common/geometry.hpp>
#include <plannerforge/common/error.hpp>

#include <array>
#include <cmath>
#include <limits>

namespace plannerforge
{

Pose make_pose(const Eigen::Vector3d &position, const Eigen::Quaterniond &orientation)
{
  Pose pose = Pose::Identity();
  pose.linear() = orientation.normalized().toRotationMatrix();
  pose.translation() = position;
  return pose;
}

Pose make_pose_xyz_rpy(double x, double y, double z, double roll, double pitch, double yaw)
{
  Pose pose = Pose::Identity();
  pose.linear() = (Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
                   Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()) *
                   Eigen::AngleAxisd(roll, Eigen::Vector3d::UnitX()))
                      .toRotationMatrix();
  pose.translation() = Eigen::Vector3d(x, y, z);
  return pose;
}

Geometry make_box(double x, double y, double z)
{
  Geometry g = Box{Eigen::Vector3d(x, y, z)};
  validate_geometry(g);
  return g;
}

Geometry make_sphere(double radius)
{
  Geometry g = Sphere{radius};
  validate_geometry(g);
  return g;
}

Geometry make_cylinder(double radius, double length)
{
  Geometry g = Cylinder{radius, length};
  validate_geometry(g);
  return g;
}

namespace
{
bool positive(double v)
{
  return std::isfinite(v) && v > 0.0;
}

struct Validator
{
  bool operator()(const Box &b) const { return positive(b.size.x()) && positive(b.size.y()) && positive(b.size.z()); }
  bool operator()(const Sphere &s) const { return positive(s.radius); }
  bool operator()(const Cylinder &c) const { return positive(c.radius) && positive(c.length); }
  bool operator()(const Mesh &m) const { return !m.filename.empty(); }
};
}  // namespace

void validate_geometry(const Geometry &geometry)
{
  if (!std::visit(Validator{}, geometry))
    throw Error(ErrorCode::InvalidGeometry, geometry_type(geometry) + " dimensions must be strictly positive");
}

bool is_primitive(const Geometry &geometry)
{
  return !std::holds_alternative<Mesh>(geometry);
}

std::string geometry_type(const Geometry &geometry)
{
  switch (geometry.index())
  {
    case 0: return "box";
    case 1: return "sphere";
    case 2: return "cylinder";
    default: return "mesh";
  }
}

double bounding_radius(const Geometry &geometry)
{
  if (const auto *box = std::get_if<Box>(&geometry))
    return 0.5 * box->size.norm();
  if (const auto *sphere = std::get_if<Sphere>(&geometry))
    return sphere->radius;
  if (const auto *cyl = std::get_if<Cylinder>(&geometry))
    return std::hypot(cyl->radius, 0.5 * cyl->length);
  throw Error(ErrorCode::UnsupportedGeometry, "mesh geometry has no collision support");
}

// ---------------------------------------------------------------------------
// GJK

namespace
{

constexpr int kMaxIterations = 64;
constexpr double kTolerance = 1e-9;

/// A primitive placed in the world, split into a convex core and a margin.
struct ConvexShape
{
  const Geometry *geometry;
  const Pose *pose;
  double margin;

  Eigen::Vector3d support(const Eigen::Vector3d &world_dir) const
  {
    const Eigen::Matrix3d &rot = pose->linear();
    const Eigen::Vector3d d = rot.transpose() * world_dir;
    Eigen::Vector3d local = Eigen::Vector3d::Zero();
    if (const auto *box = std::get_if<Box>(geometry))
    {
      for (int i = 0; i < 3; ++i)
        local[i] = (d[i] < 0.0 ? -0.5 : 0.5) * box->size[i];
    }
    else if (const auto *cyl = std::get_if<Cylinder>(geometry))
    {
      const double radial = std::hypot(d.x(), d.y());
      if (radial > 0.0)
      {
        local.x() = cyl->radius * d.x() / radial;
        local.y() = cyl->radius * d.y() / radial;
      }
      else
        local.x() = cyl->radius;
      local.z() = (d.z() < 0.0 ? -0.5 : 0.5) * cyl->length;
    }
    // Sphere: the core is the center point.
    return rot * local + pose->translation();
  }
};

ConvexShape make_shape(const Geometry &geometry, const Pose &pose)
{
  if (!is_primitive(geometry))
    throw Error(ErrorCode::UnsupportedGeometry, "mesh geometry has no collision support");
  const auto *sphere = std::get_if<Sphere>(&geometry);
  return ConvexShape{&geometry, &pose, sphere ? sphere->radius : 0.0};
}

/// Projection of the origin onto the affine hull of the face `idx[0..M]`.
/// False if the face is degenerate or the projection falls outside it.
template <int M>
bool project_onto_face(const std::array<Eigen::Vector3d, 4> &points, const std::array<int, 4> &idx,
                       Eigen::Vector3d &out)
{
  const Eigen::Vector3d &p0 = points[idx[0]];
  Eigen::Matrix<double, 3, M> edges;
  for (int k = 0; k < M; ++k)
    edges.col(k) = points[idx[k + 1]] - p0;
  const Eigen::Matrix<double, M, M> gram = edges.transpose() * edges;
  if (!(gram.determinant() > 1e-12 * gram.diagonal().prod()))
    return false;
  const Eigen::Matrix<double, M, 1> mu = gram.inverse() * (-edges.transpose() * p0);
  if ((mu.array() <= 0.0).any() || mu.sum() >= 1.0)
    return false;
  out = p0 + edges * mu;
  return true;
}

/// Closest point to the origin on the simplex spanned by `points`. On return,
/// `points` is reduced to the vertices of the minimal face containing it.
/// Every face is tried; the closest projection that lies inside its face wins.
Eigen::Vector3d closest_on_simplex(std::array<Eigen::Vector3d, 4> &points, int &count)
{
  double best_norm = std::numeric_limits<double>::infinity();
  Eigen::Vector3d best_point = points[0];
  int best_mask = 1;

  for (int mask = 1; mask < (1 << count); ++mask)
  {
    std::array<int, 4> idx{};
    int n = 0;
    for (int i = 0; i < count; ++i)
      if (mask & (1 << i))
        idx[n++] = i;

    Eigen::Vector3d candidate = points[idx[0]];
    const bool inside = n == 1 || (n == 2 && project_onto_face<1>(points, idx, candidate)) ||
                        (n == 3 && project_onto_face<2>(points, idx, candidate)) ||
                        (n == 4 && project_onto_face<3>(points, idx, candidate));
    if (!inside)
      continue;
    const double norm = candidate.squaredNorm();
    if (norm < best_norm)
    {
      best_norm = norm;
      best_point = candidate;
      best_mask = mask;
    }
  }

  int n = 0;
  std::array<Eigen::Vector3d, 4> reduced;
  for (int i = 0; i < count; ++i)
    if (best_mask & (1 << i))
      reduced[n++] = points[i];
  points = reduced;
  count = n;
  return best_point;
}

/// GJK proper. Stops early once the lower bound on the separation exceeds
/// `stop_above`; the returned distance is then only a lower bound.
GjkResult run_gjk(const Geometry &a, const Pose &pose_a, const Geometry &b, const Pose &pose_b, double stop_above)
{
  const ConvexShape shape_a = make_shape(a, pose_a);
  const ConvexShape shape_b = make_shape(b, pose_b);
  const double margin = shape_a.margin + shape_b.margin;

  auto support = [&](const Eigen::Vector3d &dir) -> Eigen::Vector3d {
    return shape_a.support(dir) - shape_b.support(-dir);
  };

  Eigen::Vector3d initial_dir = pose_a.translation() - pose_b.translation();
  if (initial_dir.squaredNorm() < 1e-24)
    initial_dir = Eigen::Vector3d::UnitX();

  std::array<Eigen::Vector3d, 4> simplex;
  int count = 1;
  simplex[0] = support(-initial_dir);
  Eigen::Vector3d v = simplex[0];

  GjkResult result;
  double core_distance = v.norm();
  for (int iter = 0; iter < kMaxIterations; ++iter)
  {
    result.iterations = iter + 1;
    core_distance = v.norm();
    if (core_distance <= kTolerance)
    {
      core_distance = 0.0;
      break;
    }

    const Eigen::Vector3d w = support(-v);
    const double lower = v.dot(w) / core_distance;
    if (lower - margin > stop_above + kTolerance)
    {
      result.distance = lower - margin;
      return result;
    }
    // Upper bound ||v|| minus lower bound v.w/||v||.
    if (core_distance - lower <= kTolerance)
      break;

    simplex[count++] = w;
    const Eigen::Vector3d next = closest_on_simplex(simplex, count);
    if (count == 4)
    {
      // Origin enclosed by a full tetrahedron.
      core_distance = 0.0;
      break;
    }
    if (next.norm() >= core_distance - kTolerance * 1e-3)
    {
      v = next.norm() < core_distance ? next : v;
      core_distance = v.norm();
      break;
    }
    v = next;
    core_distance = v.norm();
  }

  result.distance = std::max(0.0, core_distance - margin);
  return result;
}

}  // namespace

GjkResult gjk_distance(const Geometry &a, const Pose &pose_a, const Geometry &b, const Pose &pose_b)
{
  return run_gjk(a, pose_a, b, pose_b, std::numeric_limits<double>::infinity());
}

bool gjk_intersects(const Geometry &a, const Pose &pose_a, const Geometry &b, const Pose &pose_b)
{
  return run_gjk(a, pose_a, b, pose_b, 0.0).distance <= 0.0;
}

}  // namespace plannerforge
