// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/benchmark/benchmark.hpp>
#include <plannerforge/kinematics/ik.hpp>

#include <atomic>
#include <chrono>
#include <ctime>
#include <thread>

#include <unistd.h>

namespace plannerforge
{

std::string host_name()
{
  char buf[256] = {};
  if (gethostname(buf, sizeof(buf) - 1) != 0 || buf[0] == '\0')
    return "localhost";
  return buf;
}

std::string iso_datetime_now()
{
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool revalidate(const Scene &scene, const MotionRequest &request, const Trajectory &trajectory, double resolution)
{
  const GroupSpace space(scene, request.group);
  if (trajectory.waypoints.size() < 2 || trajectory.times.size() != trajectory.waypoints.size())
    return false;
  for (const auto &w : trajectory.waypoints)
    if (!space.within_limits(w))
      return false;
  for (std::size_t i = 1; i < trajectory.waypoints.size(); ++i)
    if (!is_motion_valid(space, trajectory.waypoints[i - 1], trajectory.waypoints[i], resolution))
      return false;

  const Eigen::VectorXd start = bind_values(request.start, space.joint_names(), "start");
  if (space.distance(start, trajectory.waypoints.front()) > 1e-9)
    return false;
  if (const auto *goal = std::get_if<JointGoal>(&request.goal))
    return space.distance(bind_values(goal->joints, space.joint_names(), "goal"), trajectory.waypoints.back()) <= 1e-9;

  const auto &pose_goal = std::get<PoseGoal>(request.goal);
  const RobotState end = space.robot_state(trajectory.waypoints.back());
  const auto poses = link_poses(scene.model(), end.values());
  const auto [pos, rot] =
      pose_residual(poses[static_cast<std::size_t>(scene.model().link_index(pose_goal.link))], pose_goal.target);
  const IkParams tol;
  return pos <= tol.pos_tol && rot <= tol.rot_tol;
}

namespace
{

struct Task
{
  std::size_t request;
  int run;
};

RunRecord run_one(const BenchmarkRequest &br, std::size_t j, int i, const BenchmarkOptions &options,
                  const PlannerRegistry &registry)
{
  RunRecord rec;
  rec.run_index = i;
  const Scene scene = br.scene;  // per-run copy
  MotionRequest request = br.request;
  request.planner_id = br.planner_id;
  request.time_limit_s = br.time_limit_s;
  request.seed = derive_seed(options.base_seed, {static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(i)});

  PlanResult result;
  const auto wall_start = std::chrono::steady_clock::now();
  try
  {
    result = plan(br.planner_id, scene, request, br.settings, registry);
  }
  catch (const Error &e)
  {
    rec.error = e.what();
    return rec;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

  rec.planning_time_s = result.planning_time_s;
  rec.progress = result.progress;
  if (result.error)
    rec.error = to_string(*result.error);
  for (const auto &[name, fn] : options.metrics)
    rec.metrics[name] = fn(br, result);

  // Watchdog: a run that blew through twice its budget counts as failed.
  if (wall > 2.0 * br.time_limit_s)
  {
    rec.error = "watchdog: run exceeded twice its time limit";
    return rec;
  }
  if (!result.success())
  {
    if (!rec.error)
      rec.error = to_string(result.status);
    return rec;
  }

  rec.solved = true;
  rec.path_cost = path_cost(*result.trajectory);
  rec.num_waypoints = static_cast<int>(result.trajectory->size());
  const double resolution = SettingsView{br.settings}.get("resolution", kDefaultResolution);
  try
  {
    rec.correct = revalidate(scene, request, *result.trajectory, resolution);
  }
  catch (const Error &)
  {
    rec.correct = false;
  }
  return rec;
}

}  // namespace

BenchmarkResultSet run_benchmark(const std::vector<BenchmarkRequest> &requests, const BenchmarkOptions &options)
{
  const PlannerRegistry &registry = options.registry ? *options.registry : default_registry();
  BenchmarkResultSet out;
  out.experiment = options.experiment;
  out.host = host_name();
  out.start_datetime = iso_datetime_now();

  std::vector<Task> tasks;
  for (std::size_t j = 0; j < requests.size(); ++j)
  {
    const auto &br = requests[j];
    if (br.runs < 1 || !(br.time_limit_s > 0.0))
      throw Error(ErrorCode::InvalidArgument, "benchmark request '" + br.block_name() +
                                                  "' needs runs >= 1 and a positive time limit");
    out.time_limit_s = std::max(out.time_limit_s, br.time_limit_s);
    out.runs_per_planner = std::max(out.runs_per_planner, br.runs);
    out.blocks.push_back(BenchmarkBlock{br.block_name(), std::vector<RunRecord>(static_cast<std::size_t>(br.runs))});
    for (int i = 0; i < br.runs; ++i)
      tasks.push_back(Task{j, i});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++)
    {
      const Task &task = tasks[t];
      out.blocks[task.request].runs[static_cast<std::size_t>(task.run)] =
          run_one(requests[task.request], task.request, task.run, options, registry);
    }
  };

  int jobs = options.jobs > 0 ? options.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  if (jobs <= 1)
    worker();
  else
  {
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; ++k)
      pool.emplace_back(worker);
    for (auto &th : pool)
      th.join();
  }
  return out;
}

}  // namespace plannerforge
