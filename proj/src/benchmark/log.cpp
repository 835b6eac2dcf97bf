// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/benchmark/benchmark.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>

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

// Fixed properties, in log order.
const char *const kFixed[] = {"solved BOOLEAN", "time REAL", "path_cost REAL", "correct BOOLEAN",
                              "num_waypoints INTEGER"};
constexpr std::size_t kFixedCount = 5;

std::vector<std::string> metric_names(const BenchmarkBlock &block)
{
  std::vector<std::string> names;
  if (block.runs.empty())
    return names;
  for (const auto &[name, v] : block.runs.front().metrics)
    names.push_back(name);
  for (const auto &run : block.runs)
  {
    if (run.metrics.size() != names.size())
      throw Error(ErrorCode::SchemaMismatch, "runs of '" + block.name + "' carry different metrics");
    std::size_t k = 0;
    for (const auto &[name, v] : run.metrics)
      if (name != names[k++])
        throw Error(ErrorCode::SchemaMismatch, "runs of '" + block.name + "' carry different metrics");
  }
  return names;
}

void check_single_line(const std::string &s, const char *what)
{
  if (s.find('\n') != std::string::npos || s.find('\r') != std::string::npos)
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a single line");
}

}  // namespace

void write_benchmark_log(const BenchmarkResultSet &results, std::ostream &out)
{
  check_single_line(results.experiment, "experiment name");
  check_single_line(results.host, "host");
  check_single_line(results.start_datetime, "datetime");
  std::ostringstream s;
  s << "Experiment " << results.experiment << "\n";
  s << "Running on " << results.host << "\n";
  s << "Starting at " << results.start_datetime << "\n";
  s << real(results.time_limit_s) << " seconds per run\n";
  s << results.runs_per_planner << " runs per planner\n";
  s << results.blocks.size() << " planners\n";
  for (const auto &block : results.blocks)
  {
    check_single_line(block.name, "planner name");
    const auto metrics = metric_names(block);
    s << block.name << "\n";
    s << kFixedCount + metrics.size() << " properties for each run\n";
    for (const char *p : kFixed)
      s << p << "\n";
    for (const auto &m : metrics)
    {
      if (m.find_first_of(" \n;") != std::string::npos || m.empty())
        throw Error(ErrorCode::InvalidArgument, "metric name '" + m + "' is not a single word");
      s << m << " REAL\n";
    }
    s << block.runs.size() << " runs\n";
    bool any_progress = false;
    for (const auto &run : block.runs)
    {
      s << (run.solved ? 1 : 0) << "; " << real(run.planning_time_s) << "; "
        << (run.path_cost ? real(*run.path_cost) : "") << "; " << (run.correct ? (*run.correct ? "1" : "0") : "")
        << "; " << run.num_waypoints << ";";
      for (const auto &[name, v] : run.metrics)
        s << " " << real(v) << ";";
      s << "\n";
      any_progress = any_progress || !run.progress.empty();
    }
    if (any_progress)
    {
      s << "2 progress properties for each run\n";
      s << "time REAL\n";
      s << "best_cost REAL\n";
      s << block.runs.size() << " runs\n";
      for (const auto &run : block.runs)
      {
        for (std::size_t k = 0; k < run.progress.size(); ++k)
          s << (k ? "," : "") << real(run.progress[k].first) << "," << real(run.progress[k].second);
        s << ";\n";
      }
    }
    s << ".\n";
  }
  out << s.str();
  if (!out)
    throw Error(ErrorCode::IoFailure, "failed to write benchmark log");
}

std::string benchmark_log_string(const BenchmarkResultSet &results)
{
  std::ostringstream s;
  write_benchmark_log(results, s);
  return s.str();
}

namespace
{

class LineReader
{
public:
  explicit LineReader(const std::string &text)
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      lines_.push_back(line);
    }
  }

  int line() const { return static_cast<int>(pos_); }  // 1-based number of the last line read

  [[noreturn]] void fail(const std::string &what) const
  {
    throw Error(ErrorCode::ParseError, what, static_cast<int>(std::max<std::size_t>(pos_, 1)));
  }

  const std::string &next(const char *expected)
  {
    if (pos_ >= lines_.size())
    {
      ++pos_;
      fail(std::string("unexpected end of log, expected ") + expected);
    }
    return lines_[pos_++];
  }

  bool at_end() const { return pos_ >= lines_.size(); }
  const std::string &peek() const { return lines_[pos_]; }

  /// "<prefix><rest>" → rest.
  std::string after(const std::string &prefix)
  {
    const std::string &l = next(prefix.c_str());
    if (l.rfind(prefix, 0) != 0)
      fail("expected '" + prefix + "...'");
    return l.substr(prefix.size());
  }

  /// "<int><suffix>" → int.
  long count(const std::string &suffix)
  {
    const std::string &l = next(suffix.c_str());
    if (l.size() <= suffix.size() || l.compare(l.size() - suffix.size(), suffix.size(), suffix) != 0)
      fail("expected '<count>" + suffix + "'");
    return integer(l.substr(0, l.size() - suffix.size()));
  }

  long integer(const std::string &s) const
  {
    char *end = nullptr;
    errno = 0;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno != 0 || v < 0)
      fail("expected a non-negative integer, got '" + s + "'");
    return v;
  }

  double real(const std::string &s) const
  {
    char *end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || errno == ERANGE)
      fail("expected a real number, got '" + s + "'");
    return v;
  }

private:
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
};

std::string trim(const std::string &s)
{
  const auto b = s.find_first_not_of(' ');
  if (b == std::string::npos)
    return "";
  return s.substr(b, s.find_last_not_of(' ') - b + 1);
}

/// "a; b; ;" → {"a", "b", ""}
std::vector<std::string> split_fields(const std::string &line, LineReader &r)
{
  if (line.empty() || line.back() != ';')
    r.fail("run line must end with ';'");
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < line.size(); ++i)
    if (line[i] == ';')
    {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  return out;
}

}  // namespace

BenchmarkResultSet read_benchmark_log(const std::string &text)
{
  LineReader r(text);
  BenchmarkResultSet out;
  out.experiment = r.after("Experiment ");
  out.host = r.after("Running on ");
  out.start_datetime = r.after("Starting at ");
  {
    const std::string suffix = " seconds per run";
    const std::string &l = r.next("seconds per run");
    if (l.size() <= suffix.size() || l.compare(l.size() - suffix.size(), suffix.size(), suffix) != 0)
      r.fail("expected '<real> seconds per run'");
    out.time_limit_s = r.real(l.substr(0, l.size() - suffix.size()));
  }
  out.runs_per_planner = static_cast<int>(r.count(" runs per planner"));
  const long planners = r.count(" planners");

  for (long p = 0; p < planners; ++p)
  {
    BenchmarkBlock block;
    block.name = r.next("planner name");
    if (block.name.empty())
      r.fail("empty planner name");

    const long nprops = r.count(" properties for each run");
    if (nprops < static_cast<long>(kFixedCount))
      r.fail("too few properties");
    std::vector<std::string> metrics;
    for (long k = 0; k < nprops; ++k)
    {
      const std::string &l = r.next("property declaration");
      if (k < static_cast<long>(kFixedCount))
      {
        if (l != kFixed[k])
          r.fail(std::string("expected property '") + kFixed[k] + "'");
        continue;
      }
      const auto space = l.rfind(' ');
      if (space == std::string::npos || space == 0 || l.substr(space + 1) != "REAL")
        r.fail("expected '<name> REAL'");
      metrics.push_back(l.substr(0, space));
    }

    const long nruns = r.count(" runs");
    for (long i = 0; i < nruns; ++i)
    {
      const std::string line = r.next("run line");
      const auto f = split_fields(line, r);
      if (f.size() != static_cast<std::size_t>(nprops))
        r.fail("run line has " + std::to_string(f.size()) + " values, expected " + std::to_string(nprops));
      RunRecord run;
      run.run_index = static_cast<int>(i);
      if (f[0] != "0" && f[0] != "1")
        r.fail("solved must be 0 or 1");
      run.solved = f[0] == "1";
      run.planning_time_s = r.real(f[1]);
      if (!f[2].empty())
        run.path_cost = r.real(f[2]);
      if (!f[3].empty())
      {
        if (f[3] != "0" && f[3] != "1")
          r.fail("correct must be 0, 1 or empty");
        run.correct = f[3] == "1";
      }
      run.num_waypoints = static_cast<int>(r.integer(f[4]));
      for (std::size_t k = 0; k < metrics.size(); ++k)
        run.metrics[metrics[k]] = r.real(f[kFixedCount + k]);
      if (run.solved && !run.path_cost)
        r.fail("solved run without path_cost");
      block.runs.push_back(std::move(run));
    }

    if (r.at_end())
      r.next("'.' or progress section");
    if (r.peek() != ".")
    {
      if (r.count(" progress properties for each run") != 2)
        r.fail("expected 2 progress properties");
      if (r.next("time REAL") != "time REAL")
        r.fail("first progress property must be 'time REAL'");
      if (r.next("best_cost REAL") != "best_cost REAL")
        r.fail("expected progress property 'best_cost REAL'");
      if (r.count(" runs") != nruns)
        r.fail("progress run count differs from the run count");
      for (long i = 0; i < nruns; ++i)
      {
        const std::string line = r.next("progress line");
        if (line.empty() || line.back() != ';' || line.find(';') != line.size() - 1)
          r.fail("progress line must be comma-separated values ending in a single ';'");
        const std::string body = line.substr(0, line.size() - 1);
        if (body.empty())
          continue;
        std::vector<double> values;
        std::size_t start = 0;
        while (true)
        {
          const auto comma = body.find(',', start);
          values.push_back(r.real(body.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
          if (comma == std::string::npos)
            break;
          start = comma + 1;
        }
        if (values.size() % 2 != 0)
          r.fail("progress values do not form (time, best_cost) pairs");
        for (std::size_t k = 0; k < values.size(); k += 2)
          block.runs[static_cast<std::size_t>(i)].progress.emplace_back(values[k], values[k + 1]);
      }
    }
    if (r.next("'.'") != ".")
      r.fail("expected '.' closing the planner block");
    out.blocks.push_back(std::move(block));
  }
  if (!r.at_end())
  {
    r.next("");
    r.fail("trailing content after the last planner block");
  }
  return out;
}

}  // namespace plannerforge
