// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace plannerforge
{

/// Environment variable holding colon-separated package roots.
inline constexpr const char *kPackagePathEnv = "PLANNERFORGE_PACKAGE_PATH";

/// A filesystem path or a `package://<pkg>/<relpath>` URI, plus the ordered
/// roots searched for packages. A package is any directory named after it.
struct ResourceLocator
{
  std::string raw;
  std::vector<std::filesystem::path> search_roots;
};

/// Resolve to an existing file path. Missing roots are skipped; the first
/// root containing the package directory wins.
std::filesystem::path resolve(const ResourceLocator &locator);

/// Roots from `explicit_roots` (searched first) followed by the entries of
/// PLANNERFORGE_PACKAGE_PATH.
std::vector<std::filesystem::path> package_roots(const std::vector<std::filesystem::path> &explicit_roots = {});

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &contents);

/// resolve() followed by read_text_file().
std::string load_resource(const std::string &raw, const std::vector<std::filesystem::path> &roots);

}  // namespace plannerforge
