// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/planner/planner.hpp>

#include <algorithm>
#include <random>
#include <set>

namespace plannerforge
{

namespace
{

// Streams split off the per-plan seed.
constexpr std::uint64_t kSearchStream = 0;
constexpr std::uint64_t kSimplifyStream = 1;
constexpr std::uint64_t kGoalStream = 2;

constexpr int kMaxIkGoals = 8;
constexpr int kIkSeedsPerGoal = 4;
constexpr double kDuplicateGoal = 1e-3;

// Extra wall time allowed for post-processing beyond the planner budget.
constexpr double kPostProcessSlack = 0.05;

double cost_of(const PlanningSpace &space, const std::vector<Eigen::VectorXd> &path)
{
  double c = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i)
    c += space.distance(path[i - 1], path[i]);
  return c;
}

bool vertex_shortcut(const PlanningSpace &space, std::vector<Eigen::VectorXd> &path, double resolution, Rng &rng)
{
  const auto n = static_cast<std::int64_t>(path.size());
  if (n < 3)
    return false;
  std::int64_t i = rng.uniform_int(0, n - 1);
  std::int64_t j = rng.uniform_int(0, n - 1);
  if (i > j)
    std::swap(i, j);
  if (j - i < 2)
    return false;
  const auto ui = static_cast<std::size_t>(i);
  const auto uj = static_cast<std::size_t>(j);
  double old_cost = 0.0;
  for (std::size_t k = ui + 1; k <= uj; ++k)
    old_cost += space.distance(path[k - 1], path[k]);
  if (space.distance(path[ui], path[uj]) > old_cost)
    return false;
  if (!is_motion_valid(space, path[ui], path[uj], resolution))
    return false;
  path.erase(path.begin() + i + 1, path.begin() + j);
  return true;
}

bool interior_shortcut(const PlanningSpace &space, std::vector<Eigen::VectorXd> &path, double resolution, Rng &rng)
{
  if (path.size() < 3)
    return false;
  std::vector<double> acc(path.size(), 0.0);
  for (std::size_t i = 1; i < path.size(); ++i)
    acc[i] = acc[i - 1] + space.distance(path[i - 1], path[i]);
  const double total = acc.back();
  if (!(total > 0.0))
    return false;

  double s1 = rng.uniform01() * total;
  double s2 = rng.uniform01() * total;
  if (s1 > s2)
    std::swap(s1, s2);
  auto segment_of = [&](double s) {
    const auto it = std::upper_bound(acc.begin(), acc.end(), s);
    return std::min(static_cast<std::size_t>(it - acc.begin()), path.size() - 1) - 1;
  };
  const std::size_t k1 = segment_of(s1);
  const std::size_t k2 = segment_of(s2);
  if (k1 == k2)
    return false;

  auto point = [&](std::size_t k, double s) {
    const double len = acc[k + 1] - acc[k];
    return len > 0.0 ? space.metric().interpolate(path[k], path[k + 1], (s - acc[k]) / len) : path[k];
  };
  const Eigen::VectorXd p1 = point(k1, s1);
  const Eigen::VectorXd p2 = point(k2, s2);

  const double old_cost = acc[k2 + 1] - acc[k1];
  const double new_cost =
      space.distance(path[k1], p1) + space.distance(p1, p2) + space.distance(p2, path[k2 + 1]);
  if (!(new_cost < old_cost))
    return false;
  // The pieces of the old segments are re-checked too: their discretization differs.
  if (!is_motion_valid(space, p1, p2, resolution) || !is_motion_valid(space, path[k1], p1, resolution) ||
      !is_motion_valid(space, p2, path[k2 + 1], resolution))
    return false;

  std::vector<Eigen::VectorXd> out(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(k1) + 1);
  out.push_back(p1);
  out.push_back(p2);
  out.insert(out.end(), path.begin() + static_cast<std::ptrdiff_t>(k2) + 1, path.end());
  path = std::move(out);
  return true;
}

Trajectory make_trajectory(const PlanningSpace &space, const std::string &group, std::vector<Eigen::VectorXd> path)
{
  Trajectory t;
  t.group = group;
  t.joint_names = space.joint_names();
  t.waypoints = std::move(path);
  t.metric = space.metric();
  time_parameterize(t, space.max_velocity());
  return t;
}

}  // namespace

std::vector<Eigen::VectorXd> simplify_path(const PlanningSpace &space, std::vector<Eigen::VectorXd> path,
                                           int max_iters, double resolution, Rng &rng,
                                           const std::function<bool()> &stop)
{
  const double input_cost = cost_of(space, path);
  const std::vector<Eigen::VectorXd> input = path;
  for (int it = 0; it < max_iters && path.size() > 2; ++it)
  {
    if (stop && stop())
      break;
    if (it % 2 == 0)
      vertex_shortcut(space, path, resolution, rng);
    else
      interior_shortcut(space, path, resolution, rng);
  }
  // Accumulated rounding must not make the result look worse than the input.
  if (cost_of(space, path) > input_cost)
    return input;
  return path;
}

Trajectory simplify(const Scene &scene, const Trajectory &trajectory, int max_iters, double resolution,
                    std::uint64_t seed)
{
  const GroupSpace space(scene, trajectory.group);
  Rng rng(seed);
  Trajectory out = make_trajectory(space, trajectory.group,
                                   simplify_path(space, trajectory.waypoints, max_iters, resolution, rng));
  return out;
}

Eigen::VectorXd bind_values(const JointValues &values, const std::vector<std::string> &joint_names,
                            const std::string &what)
{
  std::map<std::string, double> by_name;
  for (const auto &[name, value] : values)
    if (!by_name.emplace(name, value).second)
      throw Error(ErrorCode::InvalidRequest, what + ": joint '" + name + "' given twice");
  Eigen::VectorXd out(static_cast<Eigen::Index>(joint_names.size()));
  for (std::size_t i = 0; i < joint_names.size(); ++i)
  {
    const auto it = by_name.find(joint_names[i]);
    if (it == by_name.end())
      throw Error(ErrorCode::InvalidRequest, what + ": missing joint '" + joint_names[i] + "'");
    out[static_cast<Eigen::Index>(i)] = it->second;
    by_name.erase(it);
  }
  if (!by_name.empty())
    throw Error(ErrorCode::InvalidRequest, what + ": joint '" + by_name.begin()->first + "' is not in the group");
  return out;
}

PlanResult plan_in_space(const PlannerRegistry &registry, const std::string &planner_id, const PlanningSpace &space,
                         const Eigen::VectorXd &start, std::vector<Eigen::VectorXd> goals, const std::string &group,
                         double time_limit_s, std::uint64_t seed, const PlannerSettings &settings,
                         const std::function<std::vector<Eigen::VectorXd>(Rng &, PlanClock &)> &goal_resolver)
{
  if (!(time_limit_s > 0.0))
    throw Error(ErrorCode::InvalidRequest, "time limit must be positive");
  auto planner = registry.create(planner_id, settings);
  const SettingsView view{settings};
  const double resolution = view.get("resolution", kDefaultResolution);
  const int simplify_iters = static_cast<int>(view.get("simplify_iters", kDefaultSimplifyIters));
  if (!(resolution > 0.0) || simplify_iters < 0)
    throw Error(ErrorCode::InvalidArgument, "resolution must be positive and simplify_iters non-negative");

  PlanClock clock(time_limit_s, view.get("iteration_time_s", 0.0));
  const Rng root(seed);
  PlanResult result;

  auto finish = [&](PlanStatus status) {
    result.status = status;
    result.planning_time_s = clock.elapsed();
    return result;
  };

  if (start.size() != space.dimension())
    throw Error(ErrorCode::InvalidRequest, "start has the wrong dimension");
  if (!space.is_valid(start))
    return finish(PlanStatus::InvalidStart);

  if (goal_resolver)
  {
    Rng goal_rng = root.split(kGoalStream);
    goals = goal_resolver(goal_rng, clock);
    if (goals.empty())
    {
      result.error = ErrorCode::GoalUnreachable;
      return finish(PlanStatus::InvalidGoal);
    }
  }
  else
  {
    if (goals.empty())
      throw Error(ErrorCode::InvalidRequest, "no goal states");
    for (const auto &g : goals)
    {
      if (g.size() != space.dimension())
        throw Error(ErrorCode::InvalidRequest, "goal has the wrong dimension");
      if (!space.is_valid(g))
        return finish(PlanStatus::InvalidGoal);
    }
  }

  Rng search_rng = root.split(kSearchStream);
  RawPlan raw = planner->solve(PlanningProblem{space, start, goals, resolution}, search_rng, clock);
  result.iterations = raw.iterations;
  result.properties = raw.properties;
  result.progress = raw.progress;
  if (!raw.solved)
    return finish(clock.expired() ? PlanStatus::Timeout : PlanStatus::Failure);

  Rng simplify_rng = root.split(kSimplifyStream);
  // Under virtual time the wall clock only acts as the backstop, so
  // simplification gets the same allowance and stays reproducible.
  const double deadline = (clock.virtual_time() ? 2.0 * time_limit_s : time_limit_s) + kPostProcessSlack;
  auto path = simplify_path(space, std::move(raw.path), simplify_iters, resolution, simplify_rng,
                            [&] { return clock.wall_elapsed() >= deadline; });
  result.trajectory = make_trajectory(space, group, std::move(path));

  // Keep the progress series consistent with the returned path.
  if (!result.progress.empty())
  {
    const double cost = path_cost(*result.trajectory);
    auto &last = result.progress.back();
    if (cost < last.second - 1e-9)
      result.progress.emplace_back(std::max(last.first, clock.elapsed()), cost);
    else
      last.second = std::min(last.second, cost);
  }
  return finish(PlanStatus::Success);
}

PlanResult plan(const std::string &planner_id, const Scene &scene, const MotionRequest &request,
                const PlannerSettings &settings, const PlannerRegistry &registry)
{
  const std::string id = planner_id.empty() ? request.planner_id : planner_id;
  if (!registry.contains(id))
    throw Error(ErrorCode::UnknownPlanner, "no planner registered as '" + id + "'");
  const GroupSpace space(scene, request.group);
  const Eigen::VectorXd start = bind_values(request.start, space.joint_names(), "start");
  const std::uint64_t seed = request.seed ? *request.seed : std::random_device{}();

  std::vector<Eigen::VectorXd> goals;
  std::function<std::vector<Eigen::VectorXd>(Rng &, PlanClock &)> resolver;
  if (const auto *joint_goal = std::get_if<JointGoal>(&request.goal))
    goals.push_back(bind_values(joint_goal->joints, space.joint_names(), "goal"));
  else
  {
    const auto &pose_goal = std::get<PoseGoal>(request.goal);
    scene.model().link_index(pose_goal.link);
    resolver = [&](Rng &rng, PlanClock &clock) {
      std::vector<Eigen::VectorXd> found;
      for (int attempt = 0; attempt < kMaxIkGoals * kIkSeedsPerGoal && !clock.expired(); ++attempt)
      {
        const Eigen::VectorXd seed_values = attempt == 0 ? start : space.sample(rng);
        const IkResult ik = registry.ik_solvers().solve(scene.model(), request.group, pose_goal.link,
                                                        pose_goal.target, space.robot_state(seed_values));
        if (!ik.success)
          continue;
        const Eigen::VectorXd q = ik.state.group_state(request.group);
        if (!space.is_valid(q))
          continue;
        const bool duplicate = std::any_of(found.begin(), found.end(),
                                           [&](const Eigen::VectorXd &g) { return space.distance(g, q) < kDuplicateGoal; });
        if (!duplicate)
          found.push_back(q);
        if (static_cast<int>(found.size()) >= kMaxIkGoals)
          break;
      }
      return found;
    };
  }
  return plan_in_space(registry, id, space, start, std::move(goals), request.group, request.time_limit_s, seed,
                       settings, resolver);
}

}  // namespace plannerforge
