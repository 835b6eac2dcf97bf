// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <plannerforge/planner/planner.hpp>
#include <plannerforge/scene/scene.hpp>

namespace plannerforge
{

struct BenchmarkRequest
{
  std::string name;  ///< block name in the log; planner_id when empty
  Scene scene;
  std::string planner_id;
  PlannerSettings settings;
  MotionRequest request;
  int runs = 1;
  double time_limit_s = kDefaultTimeLimit;

  std::string block_name() const { return name.empty() ? planner_id : name; }
};

struct RunRecord
{
  int run_index = 0;
  bool solved = false;
  double planning_time_s = 0.0;
  std::optional<double> path_cost;  ///< present iff solved
  std::optional<bool> correct;      ///< revalidation, present iff solved
  int num_waypoints = 0;
  std::vector<std::pair<double, double>> progress;  ///< (time, best_cost)
  std::map<std::string, double> metrics;             ///< custom metrics
  std::optional<std::string> error;                  ///< not written to logs
};

struct BenchmarkBlock
{
  std::string name;
  std::vector<RunRecord> runs;
};

struct BenchmarkResultSet
{
  std::string experiment;
  std::string host;
  std::string start_datetime;  ///< ISO-8601
  double time_limit_s = 0.0;
  int runs_per_planner = 0;
  std::vector<BenchmarkBlock> blocks;
};

/// Custom metric computed after each solved or unsolved run.
using MetricFn = std::function<double(const BenchmarkRequest &, const PlanResult &)>;

struct BenchmarkOptions
{
  std::string experiment = "benchmark";
  std::uint64_t base_seed = 0;
  int jobs = 1;  ///< worker threads; <= 0 means one per hardware thread
  const PlannerRegistry *registry = nullptr;  ///< default_registry() when null
  std::map<std::string, MetricFn> metrics;
};

/// Run i of request j uses seed derive_seed(base_seed, {j, i}). Results do
/// not depend on `jobs`. Planner errors are recorded per run.
BenchmarkResultSet run_benchmark(const std::vector<BenchmarkRequest> &requests, const BenchmarkOptions &options);

/// Re-checks a returned trajectory against the request: endpoints, limits and
/// every segment at the planner resolution.
bool revalidate(const Scene &scene, const MotionRequest &request, const Trajectory &trajectory,
                double resolution = kDefaultResolution);

// --- log ----------------------------------------------------------------------

/// OMPL-style log. SchemaMismatch if runs of a block carry different metric names.
void write_benchmark_log(const BenchmarkResultSet &results, std::ostream &out);
std::string benchmark_log_string(const BenchmarkResultSet &results);
/// ParseError with a line number.
BenchmarkResultSet read_benchmark_log(const std::string &text);

void write_benchmark_json(const BenchmarkResultSet &results, std::ostream &out);
/// One row per run; progress omitted.
void write_benchmark_csv(const BenchmarkResultSet &results, std::ostream &out);

/// Writes `format` ∈ {ompl-log, json, csv} to `path`. IoFailure, InvalidArgument.
void emit(const BenchmarkResultSet &results, const std::string &format, const std::filesystem::path &path);

struct BenchmarkSummary
{
  std::string name;
  int runs = 0;
  double success_rate = 0.0;
  std::optional<double> median_time;
  std::optional<double> median_cost;
  std::optional<double> mean_first_solution_cost;
  std::optional<double> mean_final_cost;
};

/// Per block. Cost fields are empty when no run solved.
std::vector<BenchmarkSummary> summarize(const BenchmarkResultSet &results);

// --- config -------------------------------------------------------------------

struct BenchmarkConfig
{
  std::string experiment;
  std::vector<BenchmarkRequest> requests;
  std::map<std::string, std::filesystem::path> outputs;  ///< format → path
  std::optional<std::uint64_t> seed;
};

/// Loads a benchmark config. Relative paths are taken from the config's
/// directory; package:// URIs use `package_roots`.
BenchmarkConfig load_benchmark_config(const std::filesystem::path &path,
                                      const std::vector<std::filesystem::path> &package_roots);

/// Hostname of this machine ("localhost" if unavailable).
std::string host_name();
/// Current UTC time, ISO-8601.
std::string iso_datetime_now();

}  // namespace plannerforge
