// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Geometry>
#include <yaml-cpp/yaml.h>

#include <plannerforge/common/error.hpp>

namespace plannerforge::yaml
{

inline std::optional<int> line_of(const YAML::Node &node)
{
  const auto mark = node.Mark();
  if (mark.line < 0)
    return std::nullopt;
  return mark.line + 1;
}

[[noreturn]] inline void fail(const YAML::Node &node, const std::string &path, const std::string &what)
{
  throw Error(ErrorCode::SchemaViolation, path + ": " + what, line_of(node));
}

inline YAML::Node load(const std::string &text)
{
  try
  {
    return YAML::Load(text);
  }
  catch (const YAML::ParserException &e)
  {
    throw Error(ErrorCode::SchemaViolation, e.msg, e.mark.line >= 0 ? std::optional<int>(e.mark.line + 1) : std::nullopt);
  }
}

inline void require_map(const YAML::Node &node, const std::string &path)
{
  if (!node || !node.IsMap())
    fail(node, path, "expected a mapping");
}

inline void require_sequence(const YAML::Node &node, const std::string &path)
{
  if (!node || !node.IsSequence())
    fail(node, path, "expected a sequence");
}

inline const YAML::Node required(const YAML::Node &parent, const std::string &key, const std::string &path)
{
  const YAML::Node child = parent[key];
  if (!child)
    fail(parent, path, "missing key '" + key + "'");
  return child;
}

inline double real(const YAML::Node &node, const std::string &path)
{
  if (!node || !node.IsScalar())
    fail(node, path, "expected a number");
  try
  {
    return node.as<double>();
  }
  catch (const YAML::Exception &)
  {
    fail(node, path, "expected a number, got '" + node.Scalar() + "'");
  }
}

inline std::int64_t integer(const YAML::Node &node, const std::string &path)
{
  if (!node || !node.IsScalar())
    fail(node, path, "expected an integer");
  try
  {
    return node.as<std::int64_t>();
  }
  catch (const YAML::Exception &)
  {
    fail(node, path, "expected an integer, got '" + node.Scalar() + "'");
  }
}

inline std::uint64_t unsigned_integer(const YAML::Node &node, const std::string &path)
{
  if (!node || !node.IsScalar())
    fail(node, path, "expected a non-negative integer");
  try
  {
    return node.as<std::uint64_t>();
  }
  catch (const YAML::Exception &)
  {
    fail(node, path, "expected a non-negative integer, got '" + node.Scalar() + "'");
  }
}

inline std::string string(const YAML::Node &node, const std::string &path)
{
  if (!node || !node.IsScalar())
    fail(node, path, "expected a string");
  return node.Scalar();
}

inline Eigen::VectorXd reals(const YAML::Node &node, std::size_t n, const std::string &path)
{
  require_sequence(node, path);
  if (node.size() != n)
    fail(node, path, "expected " + std::to_string(n) + " numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    out[static_cast<Eigen::Index>(i)] = real(node[i], path + "[" + std::to_string(i) + "]");
  return out;
}

inline Eigen::Vector3d vector3(const YAML::Node &node, const std::string &path)
{
  return reals(node, 3, path);
}

/// Unit quaternion stored [x, y, z, w]; renormalized when its norm is within
/// 1e-6 of one, rejected otherwise.
inline Eigen::Quaterniond quaternion_xyzw(const YAML::Node &node, const std::string &path)
{
  const Eigen::VectorXd v = reals(node, 4, path);
  Eigen::Quaterniond q(v[3], v[0], v[1], v[2]);
  const double norm = q.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-6)
    fail(node, path, "orientation is not a unit quaternion");
  if (norm != 1.0)
    q.coeffs() /= norm;
  return q;
}

/// Emitter preconfigured for lossless doubles.
inline void configure(YAML::Emitter &out)
{
  out.SetDoublePrecision(17);
  out.SetFloatPrecision(9);
}

inline void emit_vector(YAML::Emitter &out, const Eigen::VectorXd &v)
{
  out << YAML::Flow << YAML::BeginSeq;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out << v[i];
  out << YAML::EndSeq;
}

inline void emit_quaternion_xyzw(YAML::Emitter &out, const Eigen::Quaterniond &q)
{
  emit_vector(out, Eigen::Vector4d(q.x(), q.y(), q.z(), q.w()));
}

}  // namespace plannerforge::yaml
