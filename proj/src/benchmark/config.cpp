// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/assetio/resolve.hpp>
#include <plannerforge/assetio/robot_config.hpp>
#include <plannerforge/assetio/yaml_io.hpp>
#include <plannerforge/benchmark/benchmark.hpp>

#include <tuple>

#include "../assetio/yaml_util.hpp"

namespace plannerforge
{

namespace
{

// Relative plain paths are anchored at the config directory; URIs and
// absolute paths go through resolve() unchanged.
std::string anchor(const std::string &raw, const std::filesystem::path &base)
{
  if (raw.rfind("package://", 0) == 0 || std::filesystem::path(raw).is_absolute())
    return raw;
  return (base / raw).string();
}

}  // namespace

BenchmarkConfig load_benchmark_config(const std::filesystem::path &path,
                                      const std::vector<std::filesystem::path> &roots)
{
  const std::filesystem::path base = path.parent_path();
  const YAML::Node root = yaml::load(read_text_file(path));
  yaml::require_map(root, "config");
  for (const auto &kv : root)
  {
    const std::string key = kv.first.Scalar();
    if (key != "experiment" && key != "entries" && key != "outputs" && key != "seed")
      yaml::fail(kv.first, "config", "unknown key '" + key + "'");
  }

  BenchmarkConfig config;
  config.experiment = yaml::string(yaml::required(root, "experiment", "config"), "experiment");
  if (const YAML::Node seed = root["seed"])
    config.seed = yaml::unsigned_integer(seed, "seed");

  std::map<std::tuple<std::string, std::string, std::string, std::string>, RobotModelPtr> robots;
  const YAML::Node entries = yaml::required(root, "entries", "config");
  yaml::require_sequence(entries, "entries");
  for (std::size_t i = 0; i < entries.size(); ++i)
  {
    const std::string p = "entries[" + std::to_string(i) + "]";
    const YAML::Node e = entries[i];
    yaml::require_map(e, p);
    for (const auto &kv : e)
    {
      const std::string key = kv.first.Scalar();
      if (key != "name" && key != "robot" && key != "scene" && key != "request" && key != "planner" &&
          key != "settings" && key != "runs" && key != "time_limit_s")
        yaml::fail(kv.first, p, "unknown key '" + key + "'");
    }

    const YAML::Node robot = yaml::required(e, "robot", p);
    yaml::require_map(robot, p + ".robot");
    RobotFiles files;
    files.urdf = anchor(yaml::string(yaml::required(robot, "urdf", p + ".robot"), p + ".robot.urdf"), base);
    files.srdf = anchor(yaml::string(yaml::required(robot, "srdf", p + ".robot"), p + ".robot.srdf"), base);
    if (robot["joint_limits"])
      files.joint_limits = anchor(yaml::string(robot["joint_limits"], p + ".robot.joint_limits"), base);
    if (robot["kinematics"])
      files.kinematics = anchor(yaml::string(robot["kinematics"], p + ".robot.kinematics"), base);
    const auto key = std::make_tuple(files.urdf, files.srdf, files.joint_limits.value_or(""),
                                     files.kinematics.value_or(""));
    auto &model = robots[key];
    if (!model)
      model = RobotModel::build(load_robot_description(files, roots));

    MotionRequest request =
        request_from_yaml(load_resource(anchor(yaml::string(yaml::required(e, "request", p), p + ".request"), base), roots));
    Scene scene = e["scene"] ? scene_from_yaml(load_resource(anchor(yaml::string(e["scene"], p + ".scene"), base), roots), model)
                             : Scene(model);

    BenchmarkRequest br{
        e["name"] ? yaml::string(e["name"], p + ".name") : std::string(),
        std::move(scene),
        e["planner"] ? yaml::string(e["planner"], p + ".planner") : request.planner_id,
        {},
        request,
        1,
        request.time_limit_s,
    };
    if (const YAML::Node settings = e["settings"])
    {
      yaml::require_map(settings, p + ".settings");
      for (const auto &kv : settings)
      {
        const std::string name = yaml::string(kv.first, p + ".settings");
        br.settings[name] = yaml::real(kv.second, p + ".settings." + name);
      }
    }
    if (const YAML::Node runs = e["runs"])
    {
      const auto n = yaml::integer(runs, p + ".runs");
      if (n < 1)
        yaml::fail(runs, p + ".runs", "must be at least 1");
      br.runs = static_cast<int>(n);
    }
    if (const YAML::Node limit = e["time_limit_s"])
    {
      br.time_limit_s = yaml::real(limit, p + ".time_limit_s");
      if (!(br.time_limit_s > 0.0))
        yaml::fail(limit, p + ".time_limit_s", "must be positive");
    }
    br.request.planner_id = br.planner_id;
    br.request.time_limit_s = br.time_limit_s;
    config.requests.push_back(std::move(br));
  }

  if (const YAML::Node outputs = root["outputs"])
  {
    yaml::require_map(outputs, "outputs");
    for (const auto &kv : outputs)
    {
      const std::string format = yaml::string(kv.first, "outputs");
      if (format != "ompl-log" && format != "json" && format != "csv")
        yaml::fail(kv.first, "outputs", "unknown format '" + format + "'");
      config.outputs[format] = anchor(yaml::string(kv.second, "outputs." + format), base);
    }
  }
  return config;
}

}  // namespace plannerforge
