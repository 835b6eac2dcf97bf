// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/planner/planner.hpp>

namespace plannerforge
{

PlanClock::PlanClock(double limit_s, double iteration_time_s)
  : limit_(limit_s), tick_(iteration_time_s > 0.0 ? iteration_time_s : 0.0), start_(Clock::now())
{
}

double PlanClock::wall_elapsed() const
{
  return std::chrono::duration<double>(Clock::now() - start_).count();
}

double PlanClock::elapsed() const
{
  return virtual_time() ? static_cast<double>(ticks_) * tick_ : wall_elapsed();
}

bool PlanClock::expired() const
{
  if (!virtual_time())
    return wall_elapsed() >= limit_;
  // Iteration budget, with a wall-clock backstop.
  return static_cast<double>(ticks_) * tick_ >= limit_ || wall_elapsed() >= 2.0 * limit_;
}

PlannerRegistry::PlannerRegistry()
{
  add("RRTConnect", make_rrt_connect);
  add("RRTstar", make_rrt_star);
}

void PlannerRegistry::add(const std::string &id, PlannerFactory factory)
{
  if (id.empty() || !factory)
    throw Error(ErrorCode::InvalidArgument, "planner id and factory must be non-empty");
  factories_[id] = std::move(factory);
}

std::vector<std::string> PlannerRegistry::ids() const
{
  std::vector<std::string> out;
  for (const auto &[id, factory] : factories_)
    out.push_back(id);
  return out;
}

std::unique_ptr<Planner> PlannerRegistry::create(const std::string &id, const PlannerSettings &settings) const
{
  const auto it = factories_.find(id);
  if (it == factories_.end())
    throw Error(ErrorCode::UnknownPlanner, "no planner registered as '" + id + "'");
  return it->second(settings);
}

const PlannerRegistry &default_registry()
{
  static const PlannerRegistry registry;
  return registry;
}

std::string to_string(PlanStatus status)
{
  switch (status)
  {
    case PlanStatus::Success:
      return "Success";
    case PlanStatus::Timeout:
      return "Timeout";
    case PlanStatus::InvalidStart:
      return "InvalidStart";
    case PlanStatus::InvalidGoal:
      return "InvalidGoal";
    case PlanStatus::Failure:
      return "Failure";
  }
  return "Failure";
}

}  // namespace plannerforge
