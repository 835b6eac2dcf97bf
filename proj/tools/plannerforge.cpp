// SPDX-License-Identifier: BSD-3-Clause
// plannerforge command-line tool. Exit codes: 0 success, 1 input or config
// error, 2 planning failure, 3 IK failure.
#include <plannerforge/assetio/resolve.hpp>
#include <plannerforge/assetio/robot_config.hpp>
#include <plannerforge/assetio/yaml_io.hpp>
#include <plannerforge/benchmark/benchmark.hpp>
#include <plannerforge/kinematics/ik.hpp>
#include <plannerforge/planner/planner.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace fs = std::filesystem;
using namespace plannerforge;

namespace
{

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kPlanFailure = 2;
constexpr int kIkFailure = 3;

struct RobotFlags
{
  std::string urdf, srdf, joint_limits, kinematics;

  void add(CLI::App *cmd)
  {
    cmd->add_option("--urdf", urdf, "URDF file or package:// URI")->required();
    cmd->add_option("--srdf", srdf, "SRDF file or package:// URI")->required();
    cmd->add_option("--joint-limits", joint_limits, "joint limit overrides (YAML)");
    cmd->add_option("--kinematics", kinematics, "kinematics config (YAML)");
  }

  RobotFiles files() const
  {
    RobotFiles f{urdf, srdf, std::nullopt, std::nullopt};
    if (!joint_limits.empty())
      f.joint_limits = joint_limits;
    if (!kinematics.empty())
      f.kinematics = kinematics;
    return f;
  }
};

/// Library error tied to an input file; printed as "file:line: Code: message".
struct FileError
{
  std::string file;
  Error error;

  std::string str() const
  {
    std::ostringstream s;
    s << file;
    if (error.line())
      s << ":" << *error.line();
    s << ": " << to_string(error.code()) << ": " << error.message();
    return s.str();
  }
};

template <typename Fn>
auto with_file(const std::string &file, Fn &&fn)
{
  try
  {
    return fn();
  }
  catch (const Error &e)
  {
    throw FileError{file, e};
  }
}

std::vector<double> parse_numbers(const std::string &text, const std::string &what)
{
  std::string s = text;
  for (char &c : s)
    if (c == ',' || c == '[' || c == ']')
      c = ' ';
  std::istringstream in(s);
  std::vector<double> out;
  std::string token;
  while (in >> token)
  {
    std::size_t used = 0;
    double v = 0.0;
    try
    {
      v = std::stod(token, &used);
    }
    catch (const std::exception &)
    {
      used = 0;
    }
    if (used != token.size())
      throw Error(ErrorCode::InvalidArgument, what + ": '" + token + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::string fixed6(double v)
{
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string real17(double v)
{
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string pose_line(const Pose &pose)
{
  const Eigen::Vector3d p = pose.translation();
  const Eigen::Quaterniond q(pose.rotation());
  return "position=[" + fixed6(p.x()) + " " + fixed6(p.y()) + " " + fixed6(p.z()) + "] orientation_xyzw=[" +
         fixed6(q.x()) + " " + fixed6(q.y()) + " " + fixed6(q.z()) + " " + fixed6(q.w()) + "]";
}

class Context
{
public:
  std::vector<std::string> package_root_flags;

  std::vector<fs::path> roots() const
  {
    std::vector<fs::path> explicit_roots(package_root_flags.begin(), package_root_flags.end());
    return package_roots(explicit_roots);
  }

  RobotModelPtr load_robot(const RobotFlags &flags) const
  {
    return with_file(flags.urdf, [&] { return RobotModel::build(load_robot_description(flags.files(), roots())); });
  }

  Scene load_scene(const std::string &file, const RobotModelPtr &model) const
  {
    if (file.empty())
      return Scene(model);
    return with_file(file, [&] { return scene_from_yaml(load_resource(file, roots()), model); });
  }

  MotionRequest load_request(const std::string &file) const
  {
    return with_file(file, [&] { return request_from_yaml(load_resource(file, roots())); });
  }
};

// --- subcommands ----------------------------------------------------------------

struct PlanCmd
{
  RobotFlags robot;
  std::string scene, request, out, planner;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> settings;

  int run(const Context &ctx)
  {
    const auto model = ctx.load_robot(robot);
    const Scene sc = ctx.load_scene(scene, model);
    MotionRequest req = ctx.load_request(request);
    if (seed)
      req.seed = *seed;
    if (!planner.empty())
      req.planner_id = planner;

    PlannerSettings parsed;
    for (const auto &kv : settings)
    {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0)
        throw Error(ErrorCode::InvalidArgument, "--setting expects key=value, got '" + kv + "'");
      const auto v = parse_numbers(kv.substr(eq + 1), "--setting " + kv.substr(0, eq));
      if (v.size() != 1)
        throw Error(ErrorCode::InvalidArgument, "--setting " + kv.substr(0, eq) + " needs one number");
      parsed[kv.substr(0, eq)] = v.front();
    }

    const PlanResult result = plan("", sc, req, parsed);
    if (!result.success())
    {
      std::cout << "time_s=" << real17(result.planning_time_s) << " status=" << to_string(result.status) << "\n";
      std::cerr << "planning failed: " << to_string(result.status);
      if (result.error)
        std::cerr << " (" << to_string(*result.error) << ")";
      std::cerr << "\n";
      return kPlanFailure;
    }
    write_text_file(out, trajectory_to_yaml(*result.trajectory));
    std::cout << "time_s=" << real17(result.planning_time_s) << " cost=" << real17(path_cost(*result.trajectory))
              << "\n";
    return kOk;
  }
};

struct BenchmarkCmd
{
  std::string config, out_dir;
  std::vector<std::string> formats;
  std::optional<std::uint64_t> seed;
  int jobs = 1;

  int run(const Context &ctx)
  {
    BenchmarkConfig cfg = with_file(config, [&] { return load_benchmark_config(config, ctx.roots()); });
    for (const auto &f : formats)
      if (f != "ompl-log" && f != "json" && f != "csv")
        throw Error(ErrorCode::InvalidArgument, "unknown --format '" + f + "' (ompl-log, json, csv)");

    BenchmarkOptions options;
    options.experiment = cfg.experiment;
    options.base_seed = seed ? *seed : cfg.seed.value_or(0);
    options.jobs = jobs;
    const BenchmarkResultSet results = run_benchmark(cfg.requests, options);

    // Explicit formats go to --out-dir; otherwise the config's outputs are
    // used (moved into --out-dir when given).
    std::map<std::string, fs::path> targets;
    const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    if (!formats.empty())
    {
      static const std::map<std::string, std::string> ext{{"ompl-log", ".log"}, {"json", ".json"}, {"csv", ".csv"}};
      for (const auto &f : formats)
        targets[f] = dir / (cfg.experiment + ext.at(f));
    }
    else if (!cfg.outputs.empty())
    {
      for (const auto &[f, p] : cfg.outputs)
        targets[f] = out_dir.empty() ? p : dir / p.filename();
    }
    else
      targets["ompl-log"] = dir / (cfg.experiment + ".log");

    if (!out_dir.empty())
      fs::create_directories(dir);
    for (const auto &[f, p] : targets)
    {
      emit(results, f, p);
      std::cout << "wrote=" << p.string() << "\n";
    }
    for (const auto &s : summarize(results))
    {
      std::cout << "request=" << s.name << " runs=" << s.runs << " success_rate=" << real17(s.success_rate);
      if (s.median_time)
        std::cout << " median_time=" << real17(*s.median_time);
      if (s.median_cost)
        std::cout << " median_cost=" << real17(*s.median_cost);
      if (s.mean_first_solution_cost)
        std::cout << " mean_first_solution_cost=" << real17(*s.mean_first_solution_cost);
      if (s.mean_final_cost)
        std::cout << " mean_final_cost=" << real17(*s.mean_final_cost);
      std::cout << "\n";
    }
    return kOk;
  }
};

struct ValidateCmd
{
  RobotFlags robot;
  std::vector<std::string> scenes, requests;

  int run(const Context &ctx)
  {
    std::vector<std::string> problems;
    RobotModelPtr model;
    try
    {
      model = ctx.load_robot(robot);
    }
    catch (const FileError &e)
    {
      problems.push_back(e.str());
    }

    for (const auto &file : scenes)
    {
      if (!model)
        break;
      try
      {
        ctx.load_scene(file, model);
      }
      catch (const FileError &e)
      {
        problems.push_back(e.str());
      }
    }

    for (const auto &file : requests)
    {
      try
      {
        const MotionRequest req = ctx.load_request(file);
        if (model)
          with_file(file, [&] { check_request(*model, req); });
      }
      catch (const FileError &e)
      {
        problems.push_back(e.str());
      }
    }

    for (const auto &p : problems)
      std::cerr << p << "\n";
    std::cout << "violations=" << problems.size() << "\n";
    return problems.empty() ? kOk : kInputError;
  }

  static void check_request(const RobotModel &model, const MotionRequest &req)
  {
    const auto names = model.group_joint_names(req.group);
    const Eigen::VectorXd start = bind_values(req.start, names, "start");
    RobotState state(std::make_shared<const RobotModel>(model));
    auto check_limits = [&](const Eigen::VectorXd &v, const std::string &what) {
      state.set_group_state(req.group, v);
      for (int ji : model.group_joints(req.group))
      {
        const Joint &j = model.joint(ji);
        const double x = state.values()[j.variable_index];
        if (j.has_position_limits && (x < j.lower || x > j.upper))
          throw Error(ErrorCode::InvalidRequest, what + ": joint '" + j.name + "' outside its limits");
      }
    };
    check_limits(start, "start");
    if (const auto *g = std::get_if<JointGoal>(&req.goal))
      check_limits(bind_values(g->joints, names, "goal"), "goal");
    else
      model.link_index(std::get<PoseGoal>(req.goal).link);
  }
};

struct FkCmd
{
  RobotFlags robot;
  std::string group, values, link;

  int run(const Context &ctx)
  {
    const auto model = ctx.load_robot(robot);
    RobotState state(model);
    state.set_group_state(group, parse_numbers(values, "--values"));
    const auto poses = forward_kinematics(state);
    const auto it = poses.find(link);
    if (it == poses.end())
      throw Error(ErrorCode::UnknownLink, "no link '" + link + "'");
    std::cout << pose_line(it->second) << "\n";
    return kOk;
  }
};

struct IkCmd
{
  RobotFlags robot;
  std::string group, link, target, seed_state;

  int run(const Context &ctx)
  {
    const auto model = ctx.load_robot(robot);
    const auto t = parse_numbers(target, "--target");
    if (t.size() != 7)
      throw Error(ErrorCode::InvalidArgument, "--target needs 7 numbers: x y z qx qy qz qw");
    const Eigen::Quaterniond q(t[6], t[3], t[4], t[5]);
    if (!(std::abs(q.norm() - 1.0) <= 1e-3))
      throw Error(ErrorCode::InvalidArgument, "--target orientation is not a unit quaternion");
    const Pose goal = make_pose(Eigen::Vector3d(t[0], t[1], t[2]), q.normalized());

    RobotState seed(model);
    if (!seed_state.empty())
      seed.set_group_state(group, parse_numbers(seed_state, "--seed-state"));
    model->link_index(link);

    const IkResult r = default_registry().ik_solvers().solve(*model, group, link, goal, seed);
    const Eigen::VectorXd v = r.state.group_state(group);
    std::cout << "values=[";
    for (Eigen::Index i = 0; i < v.size(); ++i)
      std::cout << (i ? " " : "") << real17(v[i]);
    std::cout << "] position_residual=" << real17(r.position_residual)
              << " rotation_residual=" << real17(r.rotation_residual) << "\n";
    if (!r.success)
    {
      std::cerr << "IK did not converge\n";
      return kIkFailure;
    }
    return kOk;
  }
};

struct ExportCmd
{
  RobotFlags robot;
  std::string trajectory, out;
  int samples = 2;

  int run(const Context &ctx)
  {
    if (samples < 1)
      throw Error(ErrorCode::InvalidArgument, "--samples must be at least 1");
    const auto model = ctx.load_robot(robot);
    const Trajectory traj =
        with_file(trajectory, [&] { return trajectory_from_yaml(load_resource(trajectory, ctx.roots()), *model); });

    std::ostringstream s;
    RobotState state(model);
    for (int k = 0; k < samples; ++k)
    {
      const double t = samples == 1 ? 0.0 : traj.duration() * k / (samples - 1);
      state.set_group_state(traj.group, traj.sample(t));
      nlohmann::json rec;
      rec["t"] = t;
      rec["links"] = nlohmann::json::object();
      const auto poses = forward_kinematics(state);
      for (const auto &[name, pose] : poses)
      {
        const Eigen::Vector3d p = pose.translation();
        const Eigen::Quaterniond q(pose.rotation());
        rec["links"][name] = {{"position", {p.x(), p.y(), p.z()}},
                              {"orientation_xyzw", {q.x(), q.y(), q.z(), q.w()}}};
      }
      s << rec.dump() << "\n";
    }
    write_text_file(out, s.str());
    std::cout << "records=" << samples << " duration_s=" << real17(traj.duration()) << "\n";
    return kOk;
  }
};

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"plannerforge: robot models, scenes, motion planning and benchmarking"};
  app.require_subcommand(1, 1);
  Context ctx;
  app.add_option("--package-root", ctx.package_root_flags, "package search root (searched before $" +
                                                                std::string(kPackagePathEnv) + ")");

  PlanCmd plan_cmd;
  auto *p = app.add_subcommand("plan", "plan a motion request and write the trajectory");
  plan_cmd.robot.add(p);
  p->add_option("--scene", plan_cmd.scene, "scene YAML (empty scene when omitted)");
  p->add_option("--request", plan_cmd.request, "request YAML")->required();
  p->add_option("--out", plan_cmd.out, "trajectory YAML output")->required();
  p->add_option("--seed", plan_cmd.seed, "overrides the request seed");
  p->add_option("--planner", plan_cmd.planner, "overrides the request planner");
  p->add_option("--setting", plan_cmd.settings, "planner setting key=value (repeatable)");

  BenchmarkCmd bench_cmd;
  auto *b = app.add_subcommand("benchmark", "run a benchmark config");
  b->add_option("--config", bench_cmd.config, "benchmark config YAML")->required();
  b->add_option("--out-dir", bench_cmd.out_dir, "output directory");
  b->add_option("--format", bench_cmd.formats, "ompl-log, json or csv (repeatable)");
  b->add_option("--seed", bench_cmd.seed, "base seed (overrides the config)");
  b->add_option("--jobs", bench_cmd.jobs, "parallel runs (0 = one per hardware thread)");

  ValidateCmd validate_cmd;
  auto *v = app.add_subcommand("validate", "check that inputs parse and cross-reference");
  validate_cmd.robot.add(v);
  v->add_option("--scene", validate_cmd.scenes, "scene YAML (repeatable)");
  v->add_option("--request", validate_cmd.requests, "request YAML (repeatable)");

  FkCmd fk_cmd;
  auto *f = app.add_subcommand("fk", "print a link pose for group values");
  fk_cmd.robot.add(f);
  f->add_option("--group", fk_cmd.group, "planning group")->required();
  f->add_option("--values", fk_cmd.values, "group values, comma separated")->required();
  f->add_option("--link", fk_cmd.link, "link name")->required();

  IkCmd ik_cmd;
  auto *i = app.add_subcommand("ik", "solve IK for a link pose");
  ik_cmd.robot.add(i);
  i->add_option("--group", ik_cmd.group, "planning group")->required();
  i->add_option("--link", ik_cmd.link, "tip link")->required();
  i->add_option("--target", ik_cmd.target, "x y z qx qy qz qw")->required();
  i->add_option("--seed-state", ik_cmd.seed_state, "group values to start from");

  ExportCmd export_cmd;
  auto *e = app.add_subcommand("export", "sample a trajectory into JSON-lines link poses");
  export_cmd.robot.add(e);
  e->add_option("--trajectory", export_cmd.trajectory, "trajectory YAML")->required();
  e->add_option("--out", export_cmd.out, "JSON-lines output")->required();
  e->add_option("--samples", export_cmd.samples, "number of uniform time samples");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &err)
  {
    const int code = app.exit(err);
    return code == 0 ? kOk : kInputError;
  }

  try
  {
    if (p->parsed())
      return plan_cmd.run(ctx);
    if (b->parsed())
      return bench_cmd.run(ctx);
    if (v->parsed())
      return validate_cmd.run(ctx);
    if (f->parsed())
      return fk_cmd.run(ctx);
    if (i->parsed())
      return ik_cmd.run(ctx);
    if (e->parsed())
      return export_cmd.run(ctx);
  }
  catch (const FileError &err)
  {
    std::cerr << err.str() << "\n";
    return kInputError;
  }
  catch (const Error &err)
  {
    std::cerr << "error: " << to_string(err.code()) << ": " << err.message() << "\n";
    return kInputError;
  }
  catch (const std::exception &err)
  {
    std::cerr << "error: " << err.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
