// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/assetio/resolve.hpp>
#include <plannerforge/common/error.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace plannerforge
{

namespace
{
constexpr std::string_view kPackageScheme = "package://";
}

fs::path resolve(const ResourceLocator &locator)
{
  const std::string &raw = locator.raw;
  if (raw.rfind(kPackageScheme, 0) != 0)
  {
    std::error_code ec;
    if (raw.empty() || !fs::is_regular_file(raw, ec))
      throw Error(ErrorCode::NotFound, "file not found: '" + raw + "'");
    return fs::path(raw);
  }

  const std::string rest = raw.substr(kPackageScheme.size());
  const auto slash = rest.find('/');
  if (slash == std::string::npos || slash == 0 || slash + 1 >= rest.size())
    throw Error(ErrorCode::MalformedUri, "expected package://<package>/<path>, got '" + raw + "'");
  const std::string package = rest.substr(0, slash);
  const std::string relative = rest.substr(slash + 1);

  for (const auto &root : locator.search_roots)
  {
    std::error_code ec;
    const fs::path package_dir = root / package;
    if (!fs::is_directory(package_dir, ec))
      continue;
    const fs::path candidate = package_dir / relative;
    if (!fs::is_regular_file(candidate, ec))
      throw Error(ErrorCode::NotFound, "'" + relative + "' not found in package '" + package + "' at " +
                                           package_dir.string());
    return candidate;
  }
  throw Error(ErrorCode::NotFound, "package '" + package + "' not found in any search root");
}

std::vector<fs::path> package_roots(const std::vector<fs::path> &explicit_roots)
{
  std::vector<fs::path> roots = explicit_roots;
  if (const char *env = std::getenv(kPackagePathEnv))
  {
    std::stringstream ss(env);
    std::string entry;
    while (std::getline(ss, entry, ':'))
      if (!entry.empty())
        roots.emplace_back(entry);
  }
  return roots;
}

std::string read_text_file(const fs::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::NotFound, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path &path, const std::string &contents)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out)
    throw Error(ErrorCode::IoFailure, "write to '" + path.string() + "' failed");
}

std::string load_resource(const std::string &raw, const std::vector<fs::path> &roots)
{
  return read_text_file(resolve(ResourceLocator{raw, roots}));
}

}  // namespace plannerforge
