// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/assetio/resolve.hpp>
#include <plannerforge/benchmark/benchmark.hpp>

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace plannerforge
{

namespace
{

std::string real(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_field(const std::string &s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
    return s;
  std::string out = "\"";
  for (char c : s)
    out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::optional<double> median(std::vector<double> v)
{
  if (v.empty())
    return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::optional<double> mean(const std::vector<double> &v)
{
  if (v.empty())
    return std::nullopt;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

void write_benchmark_json(const BenchmarkResultSet &results, std::ostream &out)
{
  using nlohmann::json;
  json doc;
  doc["experiment"] = results.experiment;
  doc["host"] = results.host;
  doc["start"] = results.start_datetime;
  doc["time_limit_s"] = results.time_limit_s;
  doc["runs_per_planner"] = results.runs_per_planner;
  doc["requests"] = json::array();
  for (const auto &block : results.blocks)
  {
    json b;
    b["name"] = block.name;
    b["runs"] = json::array();
    for (const auto &run : block.runs)
    {
      json r;
      r["run_index"] = run.run_index;
      r["solved"] = run.solved;
      r["time"] = run.planning_time_s;
      r["path_cost"] = run.path_cost ? json(*run.path_cost) : json(nullptr);
      r["correct"] = run.correct ? json(*run.correct) : json(nullptr);
      r["num_waypoints"] = run.num_waypoints;
      r["progress"] = json::array();
      for (const auto &[t, c] : run.progress)
        r["progress"].push_back({t, c});
      r["metrics"] = json::object();
      for (const auto &[name, v] : run.metrics)
        r["metrics"][name] = v;
      if (run.error)
        r["error"] = *run.error;
      b["runs"].push_back(std::move(r));
    }
    doc["requests"].push_back(std::move(b));
  }
  out << doc.dump(2) << "\n";
  if (!out)
    throw Error(ErrorCode::IoFailure, "failed to write benchmark json");
}

void write_benchmark_csv(const BenchmarkResultSet &results, std::ostream &out)
{
  std::set<std::string> metric_columns;
  for (const auto &block : results.blocks)
    for (const auto &run : block.runs)
      for (const auto &[name, v] : run.metrics)
        metric_columns.insert(name);

  out << "request,run_index,solved,time,path_cost,correct,num_waypoints";
  for (const auto &m : metric_columns)
    out << "," << csv_field(m);
  out << ",error\n";
  for (const auto &block : results.blocks)
    for (const auto &run : block.runs)
    {
      out << csv_field(block.name) << "," << run.run_index << "," << (run.solved ? 1 : 0) << ","
          << real(run.planning_time_s) << "," << (run.path_cost ? real(*run.path_cost) : "") << ","
          << (run.correct ? (*run.correct ? "1" : "0") : "") << "," << run.num_waypoints;
      for (const auto &m : metric_columns)
      {
        const auto it = run.metrics.find(m);
        out << "," << (it == run.metrics.end() ? "" : real(it->second));
      }
      out << "," << csv_field(run.error.value_or("")) << "\n";
    }
  if (!out)
    throw Error(ErrorCode::IoFailure, "failed to write benchmark csv");
}

void emit(const BenchmarkResultSet &results, const std::string &format, const std::filesystem::path &path)
{
  std::ostringstream s;
  if (format == "ompl-log")
    write_benchmark_log(results, s);
  else if (format == "json")
    write_benchmark_json(results, s);
  else if (format == "csv")
    write_benchmark_csv(results, s);
  else
    throw Error(ErrorCode::InvalidArgument, "unknown output format '" + format + "' (ompl-log, json, csv)");
  write_text_file(path, s.str());
}

std::vector<BenchmarkSummary> summarize(const BenchmarkResultSet &results)
{
  std::vector<BenchmarkSummary> out;
  for (const auto &block : results.blocks)
  {
    BenchmarkSummary s;
    s.name = block.name;
    s.runs = static_cast<int>(block.runs.size());
    std::vector<double> times, costs, first, final;
    for (const auto &run : block.runs)
    {
      if (!run.solved)
        continue;
      times.push_back(run.planning_time_s);
      if (run.path_cost)
        costs.push_back(*run.path_cost);
      if (!run.progress.empty())
      {
        first.push_back(run.progress.front().second);
        final.push_back(run.progress.back().second);
      }
      else if (run.path_cost)
      {
        first.push_back(*run.path_cost);
        final.push_back(*run.path_cost);
      }
    }
    s.success_rate = block.runs.empty() ? 0.0 : static_cast<double>(times.size()) / static_cast<double>(block.runs.size());
    s.median_time = median(times);
    s.median_cost = median(costs);
    s.mean_first_solution_cost = mean(first);
    s.mean_final_cost = mean(final);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace plannerforge
