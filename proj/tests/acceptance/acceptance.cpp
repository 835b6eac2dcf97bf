// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.
#include <plannerforge/assetio/resolve.hpp>
#include <plannerforge/assetio/yaml_io.hpp>
#include <plannerforge/benchmark/benchmark.hpp>
#include <plannerforge/kinematics/ik.hpp>
#include <plannerforge/multirobot/world.hpp>
#include <plannerforge/planner/planner.hpp>

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "support.hpp"

using namespace plannerforge;

namespace
{

struct Verdict
{
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *format, ...)
{
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double max_abs(const Eigen::MatrixXd &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

MotionRequest unfurl_request()
{
  return request_from_yaml(read_text_file(pftest::fixture("requests/unfurl.yaml")));
}

Scene fixture_scene(const std::string &name)
{
  return scene_from_yaml(read_text_file(pftest::fixture("scenes/" + name)), pftest::fetch());
}

JointValues prefixed(const std::string &robot, const RobotModel &model, const std::string &group,
                     const std::vector<double> &values)
{
  JointValues out;
  for (auto &[name, v] : group_values(model, group, values))
    out.emplace_back(robot + "/" + name, v);
  return out;
}

bool endpoints_match(const MotionRequest &req, const Trajectory &t, double tol)
{
  const Eigen::VectorXd start = bind_values(req.start, t.joint_names, "start");
  const Eigen::VectorXd goal = bind_values(std::get<JointGoal>(req.goal).joints, t.joint_names, "goal");
  return max_abs(t.waypoints.front() - start) <= tol && max_abs(t.waypoints.back() - goal) <= tol;
}

Verdict unfurl_reproduction()
{
  const Scene scene(pftest::fetch());
  MotionRequest req = unfurl_request();
  req.time_limit_s = 5.0;
  int solved = 0, valid = 0, endpoints = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed)
  {
    req.seed = seed;
    const PlanResult r = plan("RRTConnect", scene, req);
    worst = std::max(worst, r.planning_time_s);
    if (!r.success() || r.planning_time_s > 5.0)
      continue;
    ++solved;
    valid += revalidate(scene, req, *r.trajectory, 0.01);
    endpoints += endpoints_match(req, *r.trajectory, 1e-9);
  }
  return {solved == 50 && valid == 50 && endpoints == 50,
          fmt("solved=%d/50 revalidated=%d endpoints=%d max_time_s=%.3f", solved, valid, endpoints, worst)};
}

Verdict anytime_improvement()
{
  MotionRequest req = unfurl_request();
  BenchmarkRequest b{"RRTstar", fixture_scene("unfurl_box.yaml"), "RRTstar", {}, req, 50, 5.0};
  BenchmarkOptions options;
  options.experiment = "anytime";
  const BenchmarkResultSet results = run_benchmark({b}, options);
  int solved = 0, monotone = 0, improved = 0;
  double max_time = 0.0;
  for (const RunRecord &run : results.blocks.front().runs)
  {
    max_time = std::max(max_time, run.planning_time_s);
    if (!run.solved || !run.correct.value_or(false) || run.progress.empty())
      continue;
    ++solved;
    bool ok = true;
    for (std::size_t k = 1; k < run.progress.size(); ++k)
      ok = ok && run.progress[k].second <= run.progress[k - 1].second && run.progress[k].first >= run.progress[k - 1].first;
    monotone += ok;
    improved += run.progress.back().second < run.progress.front().second;
  }
  const BenchmarkSummary s = summarize(results).front();
  const double first = s.mean_first_solution_cost.value_or(NAN), last = s.mean_final_cost.value_or(NAN);
  return {solved == 50 && monotone == 50 && last <= first && improved >= 40,
          fmt("solved=%d/50 monotone=%d improved=%d mean_first=%.4f mean_final=%.4f max_time_s=%.3f", solved,
              monotone, improved, first, last, max_time)};
}

RobotModelPtr ball_robot()
{
  RawRobotDescription raw;
  raw.urdf_xml = R"(<robot name="ball"><link name="ball"><collision><geometry><sphere radius="0.2"/></geometry></collision></link></robot>)";
  raw.srdf_xml = "<robot name=\"ball\"/>";
  return RobotModel::build(raw);
}

Verdict scene_fidelity()
{
  const Pose pose = make_pose(Eigen::Vector3d(-0.268, -0.826, 1.313));
  Scene s(pftest::fetch());
  s.update_object("cylinder", make_cylinder(0.025, 0.1), pose);
  const Scene back = scene_from_yaml(scene_to_yaml(s), pftest::fetch());
  const auto *cyl = std::get_if<Cylinder>(&back.object("cylinder").geometry);
  const bool round_trip = scenes_equal(s, back, 1e-12) && cyl && std::abs(cyl->radius - 0.025) <= 1e-12 &&
                          std::abs(cyl->length - 0.1) <= 1e-12 &&
                          max_abs(back.object("cylinder").pose.matrix() - pose.matrix()) <= 1e-12;

  // A 0.05 m probe sphere around the cylinder; the single-sphere robot is
  // exempt from both so only the probe-cylinder pair counts.
  const auto ball = ball_robot();
  Scene probe_scene(ball);
  probe_scene.update_object("cylinder", make_cylinder(0.025, 0.1), pose);
  probe_scene.set_collision_allowed("cylinder", "ball");
  Rng rng(3);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i)
  {
    const Eigen::Vector3d c =
        pose.translation() + Eigen::Vector3d(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
    Scene probe = probe_scene;
    probe.update_object("probe", make_sphere(0.05), make_pose(c));
    probe.set_collision_allowed("probe", "ball");
    const double expected = std::max(oracle::point_cylinder(pose.inverse() * c, 0.025, 0.1) - 0.05, 0.0);
    worst = std::max(worst, std::abs(probe.distance_to_collision(RobotState(ball)).separation - expected));
  }
  return {round_trip && worst <= 1e-7, fmt("round_trip=%s max_distance_error=%.3g", round_trip ? "exact" : "broken", worst)};
}

Verdict collision_oracle()
{
  const std::set<LinkPair> excluded{make_link_pair("base_link", "link1"), make_link_pair("link1", "link2"),
                                    make_link_pair("link2", "tip"), make_link_pair("base_link", "link2")};
  Rng rng(4);
  int verdict_mismatch = 0, hits = 0;
  double worst = 0.0;
  for (int sc = 0; sc < 1000; ++sc)
  {
    Scene s(pftest::planar());
    std::vector<oracle::SphereBody> bodies;
    const int n = static_cast<int>(rng.uniform_int(0, 10));
    for (int k = 0; k < n; ++k)
    {
      const std::string name = "obj" + std::to_string(k);
      const Eigen::Vector3d c(rng.uniform(-2.2, 2.2), rng.uniform(-2.2, 2.2), rng.uniform(-0.3, 0.3));
      const double r = rng.uniform(0.05, 0.4);
      s.update_object(name, make_sphere(r), make_pose(c));
      bodies.push_back({name, c, r});
    }
    const double q1 = rng.uniform(-M_PI, M_PI), q2 = rng.uniform(-M_PI, M_PI);
    auto all = oracle::planar2_spheres(q1, q2);
    all.insert(all.end(), bodies.begin(), bodies.end());
    const auto expected = oracle::all_pairs(
        all, [&](const std::string &a, const std::string &b) { return excluded.count(make_link_pair(a, b)) > 0; });

    const RobotState state(pftest::planar(), Eigen::Vector2d(q1, q2));
    const DistanceReport got = s.distance_to_collision(state);
    verdict_mismatch += s.check_collision(state) != expected.in_collision || got.in_collision != expected.in_collision;
    hits += expected.in_collision;
    worst = std::max(worst, std::abs(got.separation - expected.separation));
  }
  return {verdict_mismatch == 0 && worst <= 1e-7,
          fmt("scenes=1000 colliding=%d verdict_mismatches=%d max_distance_error=%.3g", hits, verdict_mismatch, worst)};
}

Verdict kinematics()
{
  Rng rng(5);
  double fk_err = 0.0, jac_err = 0.0;
  for (const auto &[files, model, group, tip] :
       {std::tuple{pftest::fetch_files(), pftest::fetch(), "arm_and_torso", "gripper_link"},
        std::tuple{pftest::planar_files(), pftest::planar(), "arm", "tip"}})
  {
    const UrdfTree tree = pftest::tree_of(files);
    for (int i = 0; i < 100; ++i)
    {
      const RobotState s = pftest::random_state(model, rng);
      const auto expected = oracle::forward_kinematics(tree, s);
      for (const auto &[name, pose] : forward_kinematics(s))
        fk_err = std::max(fk_err, max_abs(pose.matrix() - expected.at(name)));
      jac_err = std::max(jac_err, max_abs(jacobian(s, group, tip) - pftest::fd_jacobian(s, group, tip, 1e-6)));
    }
  }

  // Targets from FK of random states; each seed is the generating state
  // moved by 0.1 rad in a random direction.
  const auto model = pftest::fetch();
  const IkParams params;
  int success = 0, verified = 0;
  for (int i = 0; i < 100; ++i)
  {
    const RobotState goal = pftest::random_state(model, rng);
    Eigen::VectorXd delta(goal.values().size());
    for (Eigen::Index k = 0; k < delta.size(); ++k)
      delta[k] = rng.uniform(-1, 1);
    const RobotState seed(model, goal.values() + 0.1 * delta.normalized());
    const Pose target = forward_kinematics(goal).at("gripper_link");
    const IkResult r =
        default_registry().ik_solvers().solve(*model, "arm_and_torso", "gripper_link", target, seed, params);
    if (!r.success)
      continue;
    ++success;
    const auto [p, q] = pose_residual(forward_kinematics(r.state).at("gripper_link"), target);
    verified += p <= params.pos_tol && q <= params.rot_tol && r.state.within_limits();
  }
  return {fk_err <= 1e-10 && jac_err <= 1e-5 && success >= 95 && verified == success,
          fmt("fk_max_error=%.3g jacobian_max_error=%.3g ik_success=%d/100 ik_verified=%d", fk_err, jac_err, success,
              verified)};
}

Verdict multi_robot()
{
  const auto fetch = pftest::fetch();
  World w;
  w.add_robot("left", fetch);
  const Pose right_base = make_pose(Eigen::Vector3d(4, 0, 0));
  w.add_robot("right", clone_robot(*fetch, "right"), right_base);
  w.define_composite_group("both", {{"left", "arm_and_torso"}, {"right", "arm_and_torso"}});

  MotionRequest req;
  req.group = "both";
  req.start = prefixed("left", *fetch, "arm_and_torso", pftest::kUnfurlStart);
  const auto right_start = prefixed("right", *fetch, "arm_and_torso", pftest::kUnfurlStart);
  req.start.insert(req.start.end(), right_start.begin(), right_start.end());
  JointGoal goal{prefixed("left", *fetch, "arm_and_torso", pftest::kUnfurlGoal)};
  const auto right_goal = prefixed("right", *fetch, "arm_and_torso", pftest::kUnfurlGoal);
  goal.joints.insert(goal.joints.end(), right_goal.begin(), right_goal.end());
  req.goal = goal;
  req.seed = 0;
  req.time_limit_s = 10.0;
  const PlanResult r = plan_composite(w, {}, req);
  bool planned = r.success() && w.composite_dimension("both") == 16 && endpoints_match(req, *r.trajectory, 1e-9);

  // Each robot's slice of the path, re-checked alone against an empty scene.
  if (planned)
  {
    const CompositeSpace space(w, "both");
    const Scene alone(fetch);
    const auto &t = *r.trajectory;
    for (std::size_t i = 1; i < t.size() && planned; ++i)
    {
      const auto a = space.robot_values(t.waypoints[i - 1]), b = space.robot_values(t.waypoints[i]);
      for (std::size_t k = 0; k < a.size(); ++k)
        planned = planned && is_motion_valid(alone, "arm_and_torso", RobotState(fetch, a[k]).group_state("arm_and_torso"),
                                             RobotState(fetch, b[k]).group_state("arm_and_torso"), 0.01);
    }
  }

  Rng rng(6);
  double fk_err = 0.0;
  for (int i = 0; i < 50; ++i)
  {
    WorldState ws = default_world_state(w);
    ws.at("left") = pftest::random_state(fetch, rng);
    ws.at("right") = RobotState(w.robot("right").model, pftest::random_state(fetch, rng).values());
    const auto wfk = world_forward_kinematics(w, ws);
    for (const auto &[name, base] : {std::pair<std::string, Pose>{"left", Pose::Identity()}, {"right", right_base}})
    {
      RobotState single(fetch, ws.at(name).values());
      for (const auto &[link, pose] : forward_kinematics(single))
        fk_err = std::max(fk_err, max_abs(wfk.at(name + "/" + link).matrix() - base.matrix() * pose.matrix()));
    }
  }

  // One-member composite against the plain planner, box scene.
  World solo;
  solo.add_robot("solo", fetch);
  solo.define_composite_group("g", {{"solo", "arm_and_torso"}});
  const Scene box = fixture_scene("unfurl_box.yaml");
  std::vector<CollisionObject> objects;
  for (const auto &[name, obj] : box.objects())
    objects.push_back(obj);
  int identical = 0;
  for (const char *planner : {"RRTConnect", "RRTstar"})
  {
    MotionRequest single = unfurl_request();
    single.planner_id = planner;
    single.seed = 9;
    single.time_limit_s = 3.0;
    MotionRequest composite = single;
    composite.group = "g";
    composite.start = prefixed("solo", *fetch, "arm_and_torso", pftest::kUnfurlStart);
    composite.goal = JointGoal{prefixed("solo", *fetch, "arm_and_torso", pftest::kUnfurlGoal)};
    const PlannerSettings settings{{"iteration_time_s", 0.002}};
    const PlanResult a = plan("", box, single, settings);
    const PlanResult b = plan_composite(solo, objects, composite, settings);
    identical += a.success() && b.success() && a.trajectory->waypoints == b.trajectory->waypoints &&
                 a.trajectory->times == b.trajectory->times && a.progress == b.progress;
  }
  return {planned && fk_err <= 1e-12 && identical == 2,
          fmt("composite_plan=%s status=%s fk_max_error=%.3g single_member_identical=%d/2",
              planned ? "valid" : "invalid", to_string(r.status).c_str(), fk_err, identical)};
}

std::vector<std::string> lines_of(const std::string &text)
{
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    out.push_back(line);
  return out;
}

std::string without_datetime(const std::string &log)
{
  std::string out;
  for (const auto &line : lines_of(log))
    if (line.rfind("Starting at ", 0) != 0)
      out += line + "\n";
  return out;
}

// Walks the log by its own count declarations. Returns an empty string when
// every declared count matches the lines that follow.
std::string grammar_problems(const std::string &log)
{
  const auto lines = lines_of(log);
  std::size_t i = 0;
  auto next = [&]() -> const std::string & {
    static const std::string eof;
    return i < lines.size() ? lines[i++] : eof;
  };
  auto count = [](const std::string &line, const std::string &suffix) -> long {
    if (line.size() <= suffix.size() || line.compare(line.size() - suffix.size(), suffix.size(), suffix) != 0)
      return -1;
    return std::stol(line.substr(0, line.size() - suffix.size()));
  };
  for (const char *prefix : {"Experiment ", "Running on ", "Starting at "})
    if (next().rfind(prefix, 0) != 0)
      return std::string("missing ") + prefix;
  if (count(next(), " seconds per run") < 0)
    return "missing time limit";
  const long per_planner = count(next(), " runs per planner");
  const long planners = count(next(), " planners");
  if (per_planner < 0 || planners < 0)
    return "missing counts";
  for (long p = 0; p < planners; ++p)
  {
    next();  // block name
    const long props = count(next(), " properties for each run");
    if (props < 0)
      return "bad property count";
    for (long k = 0; k < props; ++k)
      if (next().find(' ') == std::string::npos)
        return "bad property line";
    const long runs = count(next(), " runs");
    if (runs != per_planner)
      return "run count differs from header";
    for (long r = 0; r < runs; ++r)
    {
      const std::string &line = next();
      if (std::count(line.begin(), line.end(), ';') != props)
        return "run line with wrong field count: " + line;
    }
    if (i < lines.size() && lines[i].find("progress properties") != std::string::npos)
    {
      const long pp = count(next(), " progress properties for each run");
      for (long k = 0; k < pp; ++k)
        next();
      if (count(next(), " runs") != runs)
        return "progress run count";
      for (long r = 0; r < runs; ++r)
        if (next().back() != ';')
          return "bad progress line";
    }
    if (next() != ".")
      return "missing block terminator";
  }
  return i == lines.size() ? "" : "trailing lines";
}

Verdict benchmark_log()
{
  const std::string config = pftest::fixture("benchmarks/two_planners.yaml");
  std::string logs[2];
  int exits = 0;
  for (int k = 0; k < 2; ++k)
  {
    const auto dir = pftest::temp_dir("acceptance_bench_" + std::to_string(k));
    const auto r = pftest::run_cli("--package-root " + pftest::fixture_root().string() + " benchmark --config " +
                                   config + " --out-dir " + dir.string() + " --jobs " + (k ? "4" : "1"));
    exits += r.exit_code != 0;
    logs[k] = read_text_file(dir / "unfurl_box.log");
  }
  const bool jobs_equal = without_datetime(logs[0]) == without_datetime(logs[1]);
  const bool fixpoint = benchmark_log_string(read_benchmark_log(logs[0])) == logs[0];
  const std::string grammar = grammar_problems(logs[0]);
  int progress_lines = 0;
  for (const auto &line : lines_of(logs[0]))
    progress_lines += line.size() > 1 && line.back() == ';' && line.find(',') != std::string::npos;
  return {exits == 0 && jobs_equal && fixpoint && grammar.empty(),
          fmt("cli_exit_failures=%d jobs1_eq_jobs4=%s write_read_write=%s grammar=%s progress_series=%d", exits,
              jobs_equal ? "yes" : "no", fixpoint ? "identical" : "differs", grammar.empty() ? "ok" : grammar.c_str(),
              progress_lines)};
}

Verdict cli_end_to_end()
{
  int failures = 0;
  std::string notes;
  auto expect_exit = [&](const std::string &what, const std::string &args, int code) {
    const auto r = pftest::run_cli(args);
    if (r.exit_code != code)
    {
      ++failures;
      notes += " " + what + "=" + std::to_string(r.exit_code);
    }
    return r;
  };

  std::string fetch_inputs;
  for (const char *s : {"empty", "unfurl_box", "cylinder", "attached_tool"})
    fetch_inputs += " --scene " + pftest::fixture(std::string("scenes/") + s + ".yaml");
  for (const char *r : {"unfurl", "unfurl_star", "unfurl_tiny_budget"})
    fetch_inputs += " --request " + pftest::fixture(std::string("requests/") + r + ".yaml");
  expect_exit("validate_fetch", "validate" + pftest::fetch_flags() + fetch_inputs, 0);
  expect_exit("validate_planar", "validate" + pftest::planar_flags() + " --scene " +
                                     pftest::fixture("scenes/empty.yaml") + " --request " +
                                     pftest::fixture("requests/planar2.yaml"),
              0);

  const auto dir = pftest::temp_dir("acceptance_cli");
  std::string srdf = read_text_file(pftest::fixture("robots/fetchlike8.srdf"));
  srdf.replace(srdf.find("<joint name=\"shoulder_pan_joint\"/>"), 34, "<joint name=\"shoulder_spin_joint\"/>");
  write_text_file(dir / "bad.srdf", srdf);
  const auto f = pftest::fetch_files();
  expect_exit("corrupt_srdf", "validate --urdf " + f.urdf + " --srdf " + (dir / "bad.srdf").string(), 1);

  std::string scene = read_text_file(pftest::fixture("scenes/attached_tool.yaml"));
  scene.replace(scene.find("link: gripper_link"), 18, "link: gripper_lnk");
  write_text_file(dir / "bad_scene.yaml", scene);
  expect_exit("corrupt_scene", "validate" + pftest::fetch_flags() + " --scene " + (dir / "bad_scene.yaml").string(), 1);

  MotionRequest req = unfurl_request();
  std::get<JointGoal>(req.goal).joints.front().second = 5.0;  // torso far past its upper limit
  write_text_file(dir / "bad_request.yaml", request_to_yaml(req));
  expect_exit("corrupt_request",
              "validate" + pftest::fetch_flags() + " --request " + (dir / "bad_request.yaml").string(), 1);

  const std::string traj = (dir / "t.yaml").string(), out = (dir / "t.jsonl").string();
  expect_exit("plan", "plan" + pftest::fetch_flags() + " --scene " + pftest::fixture("scenes/unfurl_box.yaml") +
                          " --request " + pftest::fixture("requests/unfurl.yaml") + " --out " + traj,
              0);
  expect_exit("export", "export" + pftest::fetch_flags() + " --trajectory " + traj + " --out " + out + " --samples 21", 0);

  double fk_err = INFINITY;
  int records = 0;
  try
  {
    const Trajectory t = trajectory_from_yaml(read_text_file(traj), *pftest::fetch());
    std::vector<nlohmann::json> rows;
    for (const auto &line : lines_of(read_text_file(out)))
      rows.push_back(nlohmann::json::parse(line));
    records = static_cast<int>(rows.size());
    fk_err = 0.0;
    for (const auto &[row, values] : {std::pair{rows.front(), t.waypoints.front()}, std::pair{rows.back(), t.waypoints.back()}})
    {
      RobotState s(pftest::fetch());
      s.set_group_state(t.group, values);
      for (const auto &[link, pose] : forward_kinematics(s))
      {
        const auto &rec = row.at("links").at(link);
        const Eigen::Vector3d p(rec["position"][0], rec["position"][1], rec["position"][2]);
        const Eigen::Quaterniond q(rec["orientation_xyzw"][3], rec["orientation_xyzw"][0], rec["orientation_xyzw"][1],
                                   rec["orientation_xyzw"][2]);
        fk_err = std::max({fk_err, (p - pose.translation()).cwiseAbs().maxCoeff(),
                           Eigen::AngleAxisd(q.toRotationMatrix() * pose.linear().transpose()).angle()});
      }
    }
  }
  catch (const std::exception &e)
  {
    ++failures;
    notes += std::string(" export_read=") + e.what();
  }
  return {failures == 0 && records == 21 && fk_err <= 1e-9,
          fmt("exit_code_failures=%d records=%d fk_max_error=%.3g", failures, records, fk_err) + notes};
}

}  // namespace

int main()
{
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"unfurl reproduction", unfurl_reproduction},
      {"anytime improvement", anytime_improvement},
      {"scene fidelity", scene_fidelity},
      {"collision oracle", collision_oracle},
      {"kinematics", kinematics},
      {"multi-robot", multi_robot},
      {"benchmark log integrity", benchmark_log},
      {"cli end to end", cli_end_to_end},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i)
  {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try
    {
      v = criteria[i].second();
    }
    catch (const std::exception &e)
    {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %zu %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !v.pass;
  }
  return failed ? 1 : 0;
}
