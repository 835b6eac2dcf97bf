// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/planner/planner.hpp>

#include <algorithm>
#include <limits>

namespace plannerforge
{

namespace
{

struct Tree
{
  std::vector<Eigen::VectorXd> states;
  std::vector<int> parents;

  int add(Eigen::VectorXd q, int parent)
  {
    states.push_back(std::move(q));
    parents.push_back(parent);
    return static_cast<int>(states.size()) - 1;
  }

  /// Lowest index wins ties.
  int nearest(const PlanningSpace &space, const Eigen::VectorXd &q) const
  {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < states.size(); ++i)
    {
      const double d = space.distance(states[i], q);
      if (d < best_d)
      {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  /// States from the root to `node`.
  std::vector<Eigen::VectorXd> branch(int node) const
  {
    std::vector<Eigen::VectorXd> out;
    for (int n = node; n >= 0; n = parents[static_cast<std::size_t>(n)])
      out.push_back(states[static_cast<std::size_t>(n)]);
    std::reverse(out.begin(), out.end());
    return out;
  }
};

enum class Extend
{
  Trapped,
  Advanced,
  Reached,
};

class RRTConnect : public Planner
{
public:
  explicit RRTConnect(const PlannerSettings &settings)
  {
    const SettingsView view{settings};
    step_size_ = view.get("step_size", kDefaultStepSize);
    goal_bias_ = view.get("goal_bias", kDefaultGoalBias);
    if (!(step_size_ > 0.0) || goal_bias_ < 0.0 || goal_bias_ > 1.0)
      throw Error(ErrorCode::InvalidArgument, "RRTConnect needs step_size > 0 and goal_bias in [0, 1]");
  }

  RawPlan solve(const PlanningProblem &problem, Rng &rng, PlanClock &clock) override
  {
    const PlanningSpace &space = problem.space;
    RawPlan out;
    Tree start_tree, goal_tree;
    start_tree.add(problem.start, -1);
    for (const auto &g : problem.goals)
      goal_tree.add(g, -1);
    if (problem.goals.empty())
      return out;

    Tree *a = &start_tree;
    Tree *b = &goal_tree;
    std::size_t round_robin = 0;

    auto extend = [&](Tree &tree, const Eigen::VectorXd &target, int &new_node) {
      const int near = tree.nearest(space, target);
      const Eigen::VectorXd &from = tree.states[static_cast<std::size_t>(near)];
      const double d = space.distance(from, target);
      const bool reach = d <= step_size_;
      Eigen::VectorXd q = reach ? target : space.metric().interpolate(from, target, step_size_ / d);
      if (!is_motion_valid(space, from, q, problem.resolution))
        return Extend::Trapped;
      new_node = tree.add(std::move(q), near);
      return reach ? Extend::Reached : Extend::Advanced;
    };

    while (!clock.expired())
    {
      clock.tick();
      ++out.iterations;

      Eigen::VectorXd target;
      if (rng.uniform01() < goal_bias_)
      {
        // Bias toward the roots of the opposite tree (goal set round-robin).
        const std::size_t roots = b == &goal_tree ? problem.goals.size() : 1;
        target = b->states[round_robin++ % roots];
      }
      else
        target = space.sample(rng);

      int a_node = -1;
      if (extend(*a, target, a_node) == Extend::Trapped)
      {
        std::swap(a, b);
        continue;
      }

      const Eigen::VectorXd q = a->states[static_cast<std::size_t>(a_node)];
      int b_node = -1;
      Extend status = Extend::Advanced;
      while (status == Extend::Advanced)
        status = extend(*b, q, b_node);

      if (status == Extend::Reached)
      {
        auto from_a = a->branch(a_node);
        auto from_b = b->branch(b_node);
        // The connecting node duplicates q; drop it.
        from_b.pop_back();
        std::reverse(from_b.begin(), from_b.end());
        from_a.insert(from_a.end(), from_b.begin(), from_b.end());
        if (a == &goal_tree)
          std::reverse(from_a.begin(), from_a.end());
        out.path = std::move(from_a);
        if (out.path.size() == 1)
          out.path.push_back(out.path.front());
        out.solved = true;
        break;
      }
      std::swap(a, b);
    }
    out.properties["start_tree_size"] = static_cast<double>(start_tree.states.size());
    out.properties["goal_tree_size"] = static_cast<double>(goal_tree.states.size());
    return out;
  }

private:
  double step_size_;
  double goal_bias_;
};

}  // namespace

std::unique_ptr<Planner> make_rrt_connect(const PlannerSettings &settings)
{
  return std::make_unique<RRTConnect>(settings);
}

}  // namespace plannerforge
