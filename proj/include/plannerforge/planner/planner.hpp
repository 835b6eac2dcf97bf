// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <plannerforge/common/error.hpp>
#include <plannerforge/common/random.hpp>
#include <plannerforge/kinematics/ik.hpp>
#include <plannerforge/planner/request.hpp>
#include <plannerforge/planner/space.hpp>
#include <plannerforge/planner/trajectory.hpp>

namespace plannerforge
{

/// Flat planner settings. Recognized keys:
///   step_size (0.25), goal_bias (0.05), gamma (RRT* default 2 (1 + 1/d)^(1/d)),
///   resolution (0.01), simplify_iters (100),
///   iteration_time_s (0 = wall clock; > 0 = each planner iteration advances
///   the planning clock by this many seconds, making runs reproducible).
using PlannerSettings = std::map<std::string, double>;

struct SettingsView
{
  const PlannerSettings &settings;

  double get(const std::string &key, double fallback) const
  {
    const auto it = settings.find(key);
    return it == settings.end() ? fallback : it->second;
  }
};

inline constexpr double kDefaultStepSize = 0.25;
inline constexpr double kDefaultGoalBias = 0.05;
inline constexpr double kDefaultResolution = 0.01;
inline constexpr int kDefaultSimplifyIters = 100;

/// Planning-time budget. Wall-clock by default; with a positive iteration
/// time it counts planner iterations instead (wall time is still capped at
/// twice the limit).
class PlanClock
{
public:
  PlanClock(double limit_s, double iteration_time_s = 0.0);

  double limit() const { return limit_; }
  bool virtual_time() const { return tick_ > 0.0; }
  void tick() { ++ticks_; }
  double elapsed() const;
  bool expired() const;
  double wall_elapsed() const;

private:
  using Clock = std::chrono::steady_clock;

  double limit_;
  double tick_;
  long ticks_ = 0;
  Clock::time_point start_;
};

struct PlanningProblem
{
  const PlanningSpace &space;
  Eigen::VectorXd start;
  std::vector<Eigen::VectorXd> goals;
  double resolution = kDefaultResolution;
};

/// Output of one planner search, before post-processing.
struct RawPlan
{
  bool solved = false;
  std::vector<Eigen::VectorXd> path;
  std::vector<std::pair<double, double>> progress;  ///< (elapsed s, best cost)
  long iterations = 0;
  std::map<std::string, double> properties;        ///< planner-specific internals
};

/// A sampling-based planner. Instances are single-use and single-threaded.
class Planner
{
public:
  virtual ~Planner() = default;
  virtual RawPlan solve(const PlanningProblem &problem, Rng &rng, PlanClock &clock) = 0;
};

using PlannerFactory = std::function<std::unique_ptr<Planner>(const PlannerSettings &)>;

/// Bidirectional RRT with greedy connect; stops at the first solution.
std::unique_ptr<Planner> make_rrt_connect(const PlannerSettings &settings);
/// Asymptotically optimal RRT*; runs until the clock expires and records
/// (elapsed, best cost) every time the incumbent improves.
std::unique_ptr<Planner> make_rrt_star(const PlannerSettings &settings);

class PlannerRegistry
{
public:
  /// Registers "RRTConnect" and "RRTstar".
  PlannerRegistry();

  /// Adds or replaces a planner.
  void add(const std::string &id, PlannerFactory factory);
  bool contains(const std::string &id) const { return factories_.count(id) > 0; }
  std::vector<std::string> ids() const;
  /// Throws UnknownPlanner.
  std::unique_ptr<Planner> create(const std::string &id, const PlannerSettings &settings) const;

  IkSolverRegistry &ik_solvers() { return ik_; }
  const IkSolverRegistry &ik_solvers() const { return ik_; }

private:
  std::map<std::string, PlannerFactory> factories_;
  IkSolverRegistry ik_;
};

const PlannerRegistry &default_registry();

enum class PlanStatus
{
  Success,
  Timeout,
  InvalidStart,
  InvalidGoal,
  Failure,
};

std::string to_string(PlanStatus status);

struct PlanResult
{
  PlanStatus status = PlanStatus::Failure;
  std::optional<Trajectory> trajectory;
  double planning_time_s = 0.0;
  std::vector<std::pair<double, double>> progress;
  long iterations = 0;
  std::optional<ErrorCode> error;  ///< e.g. GoalUnreachable for unreachable pose goals
  std::map<std::string, double> properties;

  bool success() const { return status == PlanStatus::Success; }
};

/// Random shortcutting. Result keeps the endpoints, stays valid at
/// `resolution`, and never costs more than the input. `stop` is polled
/// between iterations.
std::vector<Eigen::VectorXd> simplify_path(const PlanningSpace &space, std::vector<Eigen::VectorXd> path,
                                           int max_iters, double resolution, Rng &rng,
                                           const std::function<bool()> &stop = {});
Trajectory simplify(const Scene &scene, const Trajectory &trajectory, int max_iters,
                    double resolution = kDefaultResolution, std::uint64_t seed = 0);

/// Runs a planner on a bound problem and post-processes (simplify, timing).
/// Used by both single-robot and composite planning.
PlanResult plan_in_space(const PlannerRegistry &registry, const std::string &planner_id,
                         const PlanningSpace &space, const Eigen::VectorXd &start,
                         std::vector<Eigen::VectorXd> goals, const std::string &group, double time_limit_s,
                         std::uint64_t seed, const PlannerSettings &settings,
                         const std::function<std::vector<Eigen::VectorXd>(Rng &, PlanClock &)> &goal_resolver = {});

/// Plans `request` in `scene` with planner `planner_id` (request.planner_id
/// when empty). Throws UnknownPlanner, UnknownGroup, InvalidRequest.
PlanResult plan(const std::string &planner_id, const Scene &scene, const MotionRequest &request,
                const PlannerSettings &settings = {}, const PlannerRegistry &registry = default_registry());

/// Binds request joint values to group order; InvalidRequest on missing or
/// extra joints.
Eigen::VectorXd bind_values(const JointValues &values, const std::vector<std::string> &joint_names,
                            const std::string &what);

}  // namespace plannerforge
