// SPDX-License-Identifier: BSD-3-Clause
#include <plannerforge/planner/planner.hpp>

#include <cmath>
#include <algorithm>
#include <limits>

namespace plannerforge
{

namespace
{

struct Node
{
  Eigen::VectorXd state;
  int parent = -1;
  double edge = 0.0;  ///< metric length of the edge from the parent
  double cost = 0.0;  ///< cost-to-come along the tree
  std::vector<int> children;
};

/// A tree node joined to a goal state by a validated edge.
struct GoalLink
{
  int node;
  std::size_t goal;
  double edge;
};

class RRTStar : public Planner
{
public:
  explicit RRTStar(const PlannerSettings &settings) : settings_(settings)
  {
    const SettingsView view{settings};
    step_size_ = view.get("step_size", kDefaultStepSize);
    goal_bias_ = view.get("goal_bias", kDefaultGoalBias);
    if (!(step_size_ > 0.0) || goal_bias_ < 0.0 || goal_bias_ > 1.0)
      throw Error(ErrorCode::InvalidArgument, "RRTstar needs step_size > 0 and goal_bias in [0, 1]");
  }

  RawPlan solve(const PlanningProblem &problem, Rng &rng, PlanClock &clock) override
  {
    const PlanningSpace &space = problem.space;
    const double dim = static_cast<double>(space.dimension());
    const double gamma = SettingsView{settings_}.get("gamma", 2.0 * std::pow(1.0 + 1.0 / dim, 1.0 / dim) * 1.0);

    RawPlan out;
    nodes_.clear();
    nodes_.push_back(Node{problem.start, -1, 0.0, 0.0, {}});
    std::vector<GoalLink> links;
    double incumbent = std::numeric_limits<double>::infinity();
    std::size_t round_robin = 0;

    while (!clock.expired() && !problem.goals.empty())
    {
      clock.tick();
      ++out.iterations;

      const Eigen::VectorXd target = rng.uniform01() < goal_bias_
                                         ? problem.goals[round_robin++ % problem.goals.size()]
                                         : space.sample(rng);
      const int nearest = nearest_node(space, target);
      const Eigen::VectorXd &from = nodes_[static_cast<std::size_t>(nearest)].state;
      const double d = space.distance(from, target);
      if (d == 0.0)
        continue;
      Eigen::VectorXd q = d <= step_size_ ? target : space.metric().interpolate(from, target, step_size_ / d);
      if (!is_motion_valid(space, from, q, problem.resolution))
        continue;

      const double n = static_cast<double>(nodes_.size() + 1);
      const double radius = gamma * std::pow(std::log(n) / n, 1.0 / dim);

      // Candidate parents: the nearest node plus everything within the radius.
      std::vector<std::pair<double, int>> candidates;  // (cost through candidate, index)
      std::vector<int> near;
      std::vector<double> near_d;
      for (std::size_t i = 0; i < nodes_.size(); ++i)
      {
        const double di = space.distance(nodes_[i].state, q);
        if (static_cast<int>(i) == nearest || di <= radius)
        {
          near.push_back(static_cast<int>(i));
          near_d.push_back(di);
          candidates.emplace_back(nodes_[i].cost + di, static_cast<int>(i));
        }
      }
      std::sort(candidates.begin(), candidates.end());

      int parent = -1;
      double parent_edge = 0.0;
      for (const auto &[cost, idx] : candidates)
      {
        const Node &cand = nodes_[static_cast<std::size_t>(idx)];
        if (idx == nearest || is_motion_valid(space, cand.state, q, problem.resolution))
        {
          parent = idx;
          parent_edge = space.distance(cand.state, q);
          break;
        }
      }

      const int added = static_cast<int>(nodes_.size());
      {
        Node node;
        node.state = std::move(q);
        node.parent = parent;
        node.edge = parent_edge;
        node.cost = nodes_[static_cast<std::size_t>(parent)].cost + parent_edge;
        nodes_.push_back(std::move(node));
        nodes_[static_cast<std::size_t>(parent)].children.push_back(added);
      }

      // Rewire neighbours through the new node.
      for (std::size_t k = 0; k < near.size(); ++k)
      {
        const int idx = near[k];
        if (idx == parent)
          continue;
        const Node &fresh = nodes_[static_cast<std::size_t>(added)];
        const double through = fresh.cost + near_d[k];
        if (through < nodes_[static_cast<std::size_t>(idx)].cost &&
            is_motion_valid(space, fresh.state, nodes_[static_cast<std::size_t>(idx)].state, problem.resolution))
          reparent(idx, added, space.distance(fresh.state, nodes_[static_cast<std::size_t>(idx)].state));
      }

      // Connect to goals within reach.
      const Node &fresh = nodes_[static_cast<std::size_t>(added)];
      for (std::size_t g = 0; g < problem.goals.size(); ++g)
      {
        const double dg = space.distance(fresh.state, problem.goals[g]);
        if (dg > std::max(radius, step_size_))
          continue;
        if (dg == 0.0 || is_motion_valid(space, fresh.state, problem.goals[g], problem.resolution))
          links.push_back(GoalLink{added, g, dg});
      }

      double best = std::numeric_limits<double>::infinity();
      for (const auto &link : links)
        best = std::min(best, nodes_[static_cast<std::size_t>(link.node)].cost + link.edge);
      if (best < incumbent)
      {
        incumbent = best;
        out.progress.emplace_back(clock.elapsed(), best);
      }
    }

    out.properties["tree_size"] = static_cast<double>(nodes_.size());
    out.properties["goal_links"] = static_cast<double>(links.size());
    if (links.empty())
      return out;

    // Lowest cost wins; ties go to the earliest link.
    const GoalLink *best = nullptr;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const auto &link : links)
    {
      const double c = nodes_[static_cast<std::size_t>(link.node)].cost + link.edge;
      if (c < best_cost)
      {
        best_cost = c;
        best = &link;
      }
    }
    for (int n = best->node; n >= 0; n = nodes_[static_cast<std::size_t>(n)].parent)
      out.path.push_back(nodes_[static_cast<std::size_t>(n)].state);
    std::reverse(out.path.begin(), out.path.end());
    if (best->edge > 0.0 || out.path.size() == 1)
      out.path.push_back(problem.goals[best->goal]);
    out.solved = true;
    return out;
  }

private:
  int nearest_node(const PlanningSpace &space, const Eigen::VectorXd &q) const
  {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes_.size(); ++i)
    {
      const double d = space.distance(nodes_[i].state, q);
      if (d < best_d)
      {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  void reparent(int node, int new_parent, double edge)
  {
    Node &n = nodes_[static_cast<std::size_t>(node)];
    auto &siblings = nodes_[static_cast<std::size_t>(n.parent)].children;
    siblings.erase(std::find(siblings.begin(), siblings.end(), node));
    n.parent = new_parent;
    n.edge = edge;
    nodes_[static_cast<std::size_t>(new_parent)].children.push_back(node);

    std::vector<int> stack{node};
    while (!stack.empty())
    {
      const int cur = stack.back();
      stack.pop_back();
      Node &c = nodes_[static_cast<std::size_t>(cur)];
      c.cost = nodes_[static_cast<std::size_t>(c.parent)].cost + c.edge;
      for (int child : c.children)
        stack.push_back(child);
    }
  }

  PlannerSettings settings_;
  double step_size_;
  double goal_bias_;
  std::vector<Node> nodes_;
};

}  // namespace

std::unique_ptr<Planner> make_rrt_star(const PlannerSettings &settings)
{
  return std::make_unique<RRTStar>(settings);
}

}  // namespace plannerforge
