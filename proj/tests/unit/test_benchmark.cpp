#include <plannerforge/common/error.hpp>
#include <plannerforge/assetio/resolve.hpp>
#include <plannerforge/assetio/yaml_io.hpp>
#include <plannerforge/benchmark/benchmark.hpp>

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "support.hpp"

using namespace plannerforge;

namespace
{

template <typename Fn>
std::pair<ErrorCode, std::optional<int>> error_of(Fn &&fn)
{
  try
  {
    fn();
  }
  catch (const Error &e)
  {
    return {e.code(), e.line()};
  }
  ADD_FAILURE() << "expected an error";
  return {ErrorCode::InvalidArgument, std::nullopt};
}

RunRecord solved(int i, double t, double cost, std::vector<std::pair<double, double>> progress = {})
{
  RunRecord r;
  r.run_index = i;
  r.solved = true;
  r.planning_time_s = t;
  r.path_cost = cost;
  r.correct = true;
  r.num_waypoints = 4;
  r.progress = std::move(progress);
  return r;
}

RunRecord failed(int i, double t)
{
  RunRecord r;
  r.run_index = i;
  r.planning_time_s = t;
  r.error = "Timeout";
  return r;
}

BenchmarkResultSet sample_set()
{
  BenchmarkResultSet s;
  s.experiment = "unit";
  s.host = "host-a";
  s.start_datetime = "2026-01-02T03:04:05Z";
  s.time_limit_s = 5.0;
  s.runs_per_planner = 3;
  BenchmarkBlock a{"RRTConnect", {solved(0, 0.125, 2.0), failed(1, 5.0), solved(2, 0.1 + 0.2, 1.0 / 3.0)}};
  BenchmarkBlock b{"RRTstar",
                   {solved(0, 5.0, 1.5, {{0.5, 2.0}, {1.25, 1.75}, {4.0, 1.5}}), failed(1, 5.0),
                    solved(2, 5.0, 3.0, {{0.01, 3.0}})}};
  for (auto &r : b.runs)
    r.metrics["clearance"] = r.run_index * 0.1;
  s.blocks = {a, b};
  return s;
}

BenchmarkRequest planar_request(const std::string &planner, int runs)
{
  Scene scene(pftest::planar());
  scene.update_object("post", make_sphere(0.2), make_pose(Eigen::Vector3d(1.4, 0, 0)));
  MotionRequestBuilder b(pftest::planar(), "arm");
  b.set_start({-2.0, 0.0}).set_goal({2.0, 0.0}).set_planner(planner);
  return BenchmarkRequest{"", scene, planner, {{"iteration_time_s", 0.001}}, b.request(), runs, 0.3};
}

}  // namespace

TEST(BenchmarkLog, HeaderAndZeroRuns)
{
  BenchmarkResultSet s;
  s.experiment = "empty";
  s.host = "h";
  s.start_datetime = "t";
  s.time_limit_s = 1.0;
  s.blocks = {BenchmarkBlock{"RRTConnect", {}}};
  const std::string log = benchmark_log_string(s);
  EXPECT_NE(log.find("1 planners\nRRTConnect\n"), std::string::npos);
  EXPECT_NE(log.find("\n0 runs\n.\n"), std::string::npos);
  EXPECT_EQ(read_benchmark_log(log).blocks.at(0).runs.size(), 0u);
}

TEST(BenchmarkLog, RunLinesAndProgress)
{
  const std::string log = benchmark_log_string(sample_set());
  EXPECT_NE(log.find("1; 0.125; 2; 1; 4;\n"), std::string::npos);
  EXPECT_NE(log.find("0; 5; ; ; 0;\n"), std::string::npos);
  EXPECT_NE(log.find("6 properties for each run\n"), std::string::npos);
  EXPECT_NE(log.find("clearance REAL\n"), std::string::npos);
  EXPECT_NE(log.find("0.5,2,1.25,1.75,4,1.5;\n;\n0.01,3;\n"), std::string::npos);
  // RRTConnect has no progress, so its block has no progress section.
  const auto first_block = log.substr(log.find("RRTConnect"), log.find("RRTstar") - log.find("RRTConnect"));
  EXPECT_EQ(first_block.find("progress"), std::string::npos);
}

TEST(BenchmarkLog, RoundTripIsExact)
{
  const BenchmarkResultSet s = sample_set();
  const std::string once = benchmark_log_string(s);
  const BenchmarkResultSet back = read_benchmark_log(once);
  EXPECT_EQ(benchmark_log_string(back), once);
  ASSERT_EQ(back.blocks.size(), 2u);
  for (std::size_t b = 0; b < 2; ++b)
    for (std::size_t i = 0; i < 3; ++i)
    {
      const RunRecord &x = s.blocks[b].runs[i], &y = back.blocks[b].runs[i];
      EXPECT_EQ(x.solved, y.solved);
      EXPECT_EQ(x.planning_time_s, y.planning_time_s);
      EXPECT_EQ(x.path_cost, y.path_cost);
      EXPECT_EQ(x.correct, y.correct);
      EXPECT_EQ(x.num_waypoints, y.num_waypoints);
      EXPECT_EQ(x.progress, y.progress);
      EXPECT_EQ(x.metrics, y.metrics);
    }
}

TEST(BenchmarkLog, MismatchedMetrics)
{
  BenchmarkResultSet s = sample_set();
  s.blocks[1].runs[0].metrics["other"] = 1.0;
  EXPECT_EQ(error_of([&] { benchmark_log_string(s); }).first, ErrorCode::SchemaMismatch);
}

TEST(BenchmarkLog, ParseErrorsCarryLines)
{
  const std::string log = benchmark_log_string(sample_set());
  const auto truncated = error_of([&] { read_benchmark_log(log.substr(0, log.rfind(".\n"))); });
  EXPECT_EQ(truncated.first, ErrorCode::ParseError);
  EXPECT_TRUE(truncated.second);

  std::string bad = log;
  bad.replace(bad.find("0.125"), 5, "fast!");
  const auto e = error_of([&] { read_benchmark_log(bad); });
  EXPECT_EQ(e.first, ErrorCode::ParseError);
  ASSERT_TRUE(e.second);
  std::istringstream in(bad);
  std::string line;
  for (int i = 1; i <= *e.second; ++i)
    std::getline(in, line);
  EXPECT_NE(line.find("fast!"), std::string::npos);
}

TEST(BenchmarkLog, ZeroPlanners)
{
  BenchmarkResultSet s;
  s.experiment = "none";
  s.host = "h";
  s.start_datetime = "t";
  const auto back = read_benchmark_log(benchmark_log_string(s));
  EXPECT_TRUE(back.blocks.empty());
}

TEST(BenchmarkEmit, JsonAndCsv)
{
  BenchmarkResultSet empty;
  std::ostringstream j;
  write_benchmark_json(empty, j);
  EXPECT_TRUE(nlohmann::json::parse(j.str())["requests"].empty());

  BenchmarkResultSet two = sample_set();
  two.blocks.resize(1);
  two.blocks[0].runs.resize(2);
  std::ostringstream c;
  write_benchmark_csv(two, c);
  std::istringstream lines(c.str());
  std::string line;
  int n = 0;
  while (std::getline(lines, line))
    ++n;
  EXPECT_EQ(n, 3);

  std::ostringstream full;
  write_benchmark_json(sample_set(), full);
  const auto doc = nlohmann::json::parse(full.str());
  EXPECT_EQ(doc["requests"][1]["runs"][0]["progress"].size(), 3u);
  EXPECT_EQ(doc["requests"][0]["runs"][1]["path_cost"], nullptr);
}

TEST(BenchmarkSummary, MediansAndRates)
{
  BenchmarkResultSet s;
  s.blocks = {BenchmarkBlock{"all", {solved(0, 1, 2.0), solved(1, 2, 2.0), solved(2, 3, 2.0)}},
              BenchmarkBlock{"half", {solved(0, 1, 1.0), failed(1, 5), solved(2, 3, 3.0), failed(3, 5)}}};
  const auto sum = summarize(s);
  EXPECT_EQ(sum[0].median_cost, 2.0);
  EXPECT_EQ(sum[0].success_rate, 1.0);
  EXPECT_EQ(sum[1].success_rate, 0.5);
  EXPECT_EQ(sum[1].median_time, 2.0);
  const auto star = summarize(sample_set())[1];
  EXPECT_LE(*star.mean_final_cost, *star.mean_first_solution_cost);
}

TEST(BenchmarkRun, NoRequests)
{
  const auto r = run_benchmark({}, BenchmarkOptions{});
  EXPECT_TRUE(r.blocks.empty());
}

TEST(BenchmarkRun, SolvedRunsRevalidate)
{
  BenchmarkOptions opt;
  opt.base_seed = 3;
  opt.metrics["waypoints_again"] = [](const BenchmarkRequest &, const PlanResult &r) {
    return r.trajectory ? static_cast<double>(r.trajectory->size()) : 0.0;
  };
  const auto res = run_benchmark({planar_request("RRTConnect", 3), planar_request("RRTstar", 2)}, opt);
  ASSERT_EQ(res.blocks.size(), 2u);
  EXPECT_EQ(res.blocks[0].runs.size(), 3u);
  EXPECT_EQ(res.blocks[1].runs.size(), 2u);
  for (const auto &b : res.blocks)
    for (const auto &r : b.runs)
    {
      ASSERT_TRUE(r.solved);
      EXPECT_EQ(r.correct, true);
      EXPECT_EQ(r.metrics.at("waypoints_again"), r.num_waypoints);
    }
  EXPECT_FALSE(res.blocks[1].runs[0].progress.empty());
}

TEST(BenchmarkRun, JobsDoNotChangeResults)
{
  const std::vector<BenchmarkRequest> reqs{planar_request("RRTConnect", 4), planar_request("RRTstar", 4)};
  BenchmarkOptions one;
  one.base_seed = 8;
  BenchmarkOptions four = one;
  four.jobs = 4;
  auto a = run_benchmark(reqs, one), b = run_benchmark(reqs, four);
  a.start_datetime = b.start_datetime = "";
  EXPECT_EQ(benchmark_log_string(a), benchmark_log_string(b));
}

TEST(BenchmarkRun, RevalidateRejectsBrokenPaths)
{
  const Scene scene = planar_request("RRTConnect", 1).scene;
  MotionRequestBuilder b(pftest::planar(), "arm");
  b.set_start({-2.0, 0.0}).set_goal({2.0, 0.0});
  Trajectory t;
  t.group = "arm";
  t.joint_names = {"joint1", "joint2"};
  t.metric = group_metric(*pftest::planar(), "arm");
  t.waypoints = {Eigen::Vector2d(-2, 0), Eigen::Vector2d(2, 0)};  // straight through the post
  time_parameterize(t, *pftest::planar());
  EXPECT_FALSE(revalidate(scene, b.request(), t));
  t.waypoints = {Eigen::Vector2d(-2, 0), Eigen::Vector2d(-1, 1.5), Eigen::Vector2d(1, 1.5), Eigen::Vector2d(2, 0.1)};
  EXPECT_FALSE(revalidate(scene, b.request(), t));  // misses the goal
}

TEST(BenchmarkConfig, FixtureLoads)
{
  const auto cfg = load_benchmark_config(pftest::fixture("benchmarks/two_planners.yaml"), {pftest::fixture_root()});
  EXPECT_EQ(cfg.experiment, "unfurl_box");
  EXPECT_EQ(cfg.seed, 42u);
  ASSERT_EQ(cfg.requests.size(), 2u);
  EXPECT_EQ(cfg.requests[0].planner_id, "RRTConnect");
  EXPECT_EQ(cfg.requests[1].planner_id, "RRTstar");
  EXPECT_EQ(cfg.requests[1].runs, 5);
  EXPECT_EQ(cfg.requests[1].scene.objects().size(), 1u);
  EXPECT_TRUE(cfg.outputs.count("ompl-log"));
}

TEST(BenchmarkConfig, UnknownKeyHasLine)
{
  const auto dir = pftest::temp_dir("bench_cfg");
  write_text_file(dir / "c.yaml", "experiment: x\nentries: []\nflavour: 3\n");
  const auto e = error_of([&] { load_benchmark_config(dir / "c.yaml", {}); });
  EXPECT_EQ(e.first, ErrorCode::SchemaViolation);
  EXPECT_EQ(e.second, 3);
}
