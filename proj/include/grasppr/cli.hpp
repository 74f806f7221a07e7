#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bench_io.hpp"
#include "drivers.hpp"
#include "lop.hpp"
#include "maxcut.hpp"

namespace grasppr::cli {

// sysexits-style codes
inline constexpr int exit_ok = 0;
inline constexpr int exit_parse = 2;
inline constexpr int exit_usage = 64;
inline constexpr int exit_software = 70;
inline constexpr int exit_io = 74;

class usage_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct options {
  std::string problem;
  std::string instance;
  std::string instances_dir;
  std::string variant = "grasp";
  std::optional<std::string> direction;
  std::optional<std::string> step;
  std::optional<std::string> inpath_ls;
  int rcl_size = 3;
  double trunc = 1.0;
  int min_dist = 4;
  std::string depth = "best";
  std::string moves = "insert";
  double alpha_min = 0.0;
  double alpha_max = 0.3;
  std::string rcl_mode = "value";
  int elite_k = 10;
  std::optional<int> dth;
  std::string guide = "uniform";
  std::optional<std::uint64_t> kappa;
  std::optional<double> time;
  std::optional<std::uint64_t> iters;
  std::uint64_t seed = 0;
  std::size_t static_sample = 100;
  std::uint64_t pr_period = 1;
  int exterior = 0;
  int jobs = 1;
  int runs = 1;
  std::string out;
  std::string profile;
  std::string best_known;
  std::string config;
};

inline const std::vector<std::string>& variant_names() {
  static const std::vector<std::string> names{"construction", "grasp", "static_pr", "dynamic_pr", "evolutionary_pr"};
  return names;
}

inline variant parse_variant(const std::string& s) {
  for (auto v : {variant::construction, variant::grasp, variant::static_pr, variant::dynamic_pr, variant::evolutionary_pr})
    if (s == to_string(v)) return v;
  throw usage_error("unknown variant '" + s + "'");
}

inline in_path_policy parse_inpath(const std::string& s, int& q) {
  if (s == "none") return in_path_policy::none;
  if (s == "all") return in_path_policy::all;
  if (s == "best") return in_path_policy::best_only;
  if (s.rfind("every:", 0) == 0) {
    auto v = detail::to_integer(std::string_view(s).substr(6));
    if (!v || *v < 1 || *v > 1'000'000) throw usage_error("--inpath-ls every:Q needs a positive integer Q");
    q = static_cast<int>(*v);
    return in_path_policy::every_q;
  }
  throw usage_error("--inpath-ls must be none, all, every:Q or best");
}

/// Registers the search options shared by solve, profile and bench.
inline void add_search_options(CLI::App& app, options& o, bool bench) {
  app.add_option("--problem", o.problem, "Problem type")->check(CLI::IsMember({"lop", "maxcut"}))->required();
  if (bench) {
    app.add_option("--variant", o.variant,
                   "Comma-separated methods; each is a variant name optionally followed by @key=value overrides "
                   "(variants: construction, grasp, static_pr, dynamic_pr, evolutionary_pr)")
        ->capture_default_str();
  } else {
    app.add_option("--variant", o.variant, "Algorithm")->check(CLI::IsMember(variant_names()))->capture_default_str();
  }
  app.add_option("--direction", o.direction, "PR direction [lop: mixed, maxcut: forward]")
      ->check(CLI::IsMember({"forward", "backward", "bf", "mixed"}));
  app.add_option("--step", o.step, "PR step selection [lop: grpr, maxcut: greedy]")->check(CLI::IsMember({"greedy", "grpr"}));
  app.add_option("--rcl-size", o.rcl_size, "RCL size of greedy randomized PR steps")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--trunc", o.trunc, "PR truncation: share of the path explored")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app.add_option("--min-dist", o.min_dist, "Skip relinking below this distance")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--inpath-ls", o.inpath_ls, "In-path local search: none|all|every:Q|best [lop: best, maxcut: every:5]");
  app.add_option("--depth", o.depth, "Local search depth")->check(CLI::IsMember({"first", "best"}))->capture_default_str();
  app.add_option("--moves", o.moves, "Neighborhood for local search and PR")->check(CLI::IsMember({"insert", "swap"}))->capture_default_str();
  app.add_option("--alpha-min", o.alpha_min, "Lower end of the RCL alpha range (exclusive)")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app.add_option("--alpha-max", o.alpha_max, "Upper end of the RCL alpha range")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app.add_option("--rcl-mode", o.rcl_mode, "RCL rule")->check(CLI::IsMember({"value", "card"}))->capture_default_str();
  app.add_option("--elite-k", o.elite_k, "Elite set capacity")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--dth", o.dth, "Elite diversity threshold [ceil(0.05 n)]")->check(CLI::NonNegativeNumber);
  app.add_option("--guide", o.guide, "Guide selection")->check(CLI::IsMember({"uniform", "pdelta"}))->capture_default_str();
  app.add_option("--kappa", o.kappa, "Restart after this many non-improving iterations [off]")->check(CLI::PositiveNumber);
  app.add_option("--time", o.time, "Time limit in seconds")->check(CLI::NonNegativeNumber);
  app.add_option("--iters", o.iters, "Iteration limit");
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--static-sample", o.static_sample, "GRASP iterations before static relinking")->capture_default_str();
  app.add_option("--pr-period", o.pr_period, "Dynamic PR: relink every N-th iteration")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--exterior", o.exterior, "Exterior PR steps, 0 = interior (maxcut only)")->check(CLI::NonNegativeNumber)->capture_default_str();
  app.add_option("--config", o.config, "key=value file with defaults for these flags");
}

inline run_config make_config(const options& o) {
  const bool lop = o.problem == "lop";
  run_config cfg;
  cfg.algorithm = parse_variant(o.variant);
  if (!o.time && !o.iters) throw usage_error("one of --time or --iters is required");
  cfg.time_limit = o.time;
  cfg.iteration_limit = o.iters;
  cfg.seed = o.seed;
  cfg.restart_kappa = o.kappa;
  cfg.rcl.mode = o.rcl_mode == "card" ? rcl_mode::cardinality : rcl_mode::value_threshold;
  cfg.rcl.alpha_low = o.alpha_min;
  cfg.rcl.alpha_high = o.alpha_max;
  cfg.depth = o.depth == "first" ? search_depth::first_improving : search_depth::best_improving;
  cfg.ls_moves = o.moves == "swap" ? neighborhood::swap : neighborhood::insert;

  const std::string dir = o.direction.value_or(lop ? "mixed" : "forward");
  cfg.pr.direction = dir == "forward"    ? pr_direction::forward
                     : dir == "backward" ? pr_direction::backward
                     : dir == "bf"       ? pr_direction::back_and_forward
                                         : pr_direction::mixed;
  cfg.pr.selection = o.step.value_or(lop ? "grpr" : "greedy") == "grpr" ? step_selection::greedy_randomized : step_selection::greedy;
  cfg.pr.rcl_size = o.rcl_size;
  cfg.pr.truncation = o.trunc;
  cfg.pr.min_distance = o.min_dist;
  cfg.pr.in_path_ls = parse_inpath(o.inpath_ls.value_or(lop ? "best" : "every:5"), cfg.pr.every_q);
  cfg.pr.exterior_steps = o.exterior;
  cfg.pr.permutation_moves = cfg.ls_moves;
  if (lop && o.exterior > 0) throw usage_error("--exterior applies to maxcut only");

  cfg.elite_k = static_cast<std::size_t>(o.elite_k);
  cfg.diversity_threshold = o.dth;
  cfg.guide = o.guide == "pdelta" ? guide_policy::proportional_delta : guide_policy::uniform;
  cfg.static_sample = o.static_sample;
  cfg.pr_period = o.pr_period;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw usage_error(e.what());
  }
  return cfg;
}

/// Appends "--key value" for every config-file entry whose flag is not
/// already on the command line.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  const std::string text = read_file(*path);
  const auto lines = detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string line(lines[li]);
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto tokens = detail::split_line(line, static_cast<int>(li) + 1);
    if (tokens.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw parse_error(static_cast<int>(li) + 1, 0, "expected key=value in '" + *path + "'");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") throw parse_error(static_cast<int>(li) + 1, 0, "bad key in '" + *path + "'");
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    if (given) continue;
    args.push_back(flag);
    args.push_back(value);
  }
  return args;
}

template <class Solution>
void print_summary(std::ostream& out, const options& o, const std::string& instance_name, const run_report<Solution>& r) {
  out << "problem " << o.problem << '\n'
      << "instance " << instance_name << '\n'
      << "variant " << o.variant << '\n'
      << "seed " << o.seed << '\n'
      << "best_objective " << r.best_objective << '\n'
      << "iterations " << r.iterations << '\n'
      << "restarts " << r.restarts << '\n'
      << "pr_calls " << r.pr_calls + r.post_pr_calls << '\n'
      << "solution " << to_text(r.best_solution) << '\n'
      << "elapsed_s " << r.elapsed_s << '\n';
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write '" + path + "'");
  return f;
}

template <class Instance>
int solve_on(const Instance& inst, const options& o, std::ostream& out) {
  const run_config cfg = make_config(o);
  auto report = run(inst, cfg);
  print_summary(out, o, inst.name(), report);
  if (!o.out.empty()) {
    auto f = open_output(o.out);
    f << report.best_objective << '\n' << to_text(report.best_solution) << '\n';
    if (!f) throw io_error("cannot write '" + o.out + "'");
  }
  if (!o.profile.empty()) {
    auto f = open_output(o.profile);
    emit_profile(f, report);
  }
  return exit_ok;
}

inline int solve(const options& o, std::ostream& out, std::ostream& err) {
  if (o.problem == "lop") {
    std::vector<std::string> warnings;
    auto inst = load_lolib(o.instance, &warnings);
    for (const auto& w : warnings) err << "warning: " << o.instance << ": " << w << '\n';
    return solve_on(inst, o, out);
  }
  return solve_on(load_edge_list(o.instance), o, out);
}

inline int validate(const std::string& path, std::optional<std::string> problem, std::ostream& out, std::ostream& err) {
  const std::string text = read_file(path);
  if (!problem) {
    // an edge list opens with exactly two integers, a LOLIB file with a name line
    auto lines = detail::split_lines(text);
    std::vector<detail::token> first;
    for (std::size_t i = 0; i < lines.size() && first.empty(); ++i) first = detail::split_line(lines[i], static_cast<int>(i) + 1);
    problem = first.size() == 2 && detail::all_integers(first) ? "maxcut" : "lop";
  }
  if (*problem == "lop") {
    std::vector<std::string> warnings;
    auto inst = parse_lolib(text, stem_of(path), &warnings);
    for (const auto& w : warnings) err << "warning: " << path << ": " << w << '\n';
    auto m = inst.matrix();
    auto [lo, hi] = std::minmax_element(m.begin(), m.end());
    out << "lop n=" << inst.size() << " entries=" << m.size() << " min=" << *lo << " max=" << *hi << '\n';
  } else {
    auto inst = parse_edge_list(text, stem_of(path));
    out << "maxcut n=" << inst.size() << " edges=" << inst.edges().size();
    if (!inst.edges().empty()) {
      auto [lo, hi] = std::minmax_element(inst.edges().begin(), inst.edges().end(),
                                          [](const weighted_edge& a, const weighted_edge& b) { return a.w < b.w; });
      out << " min_w=" << lo->w << " max_w=" << hi->w;
    }
    out << '\n';
  }
  return exit_ok;
}

// ------------------------------------------------------------------ bench

struct method_spec {
  std::string name;
  options opts;
};

/// "variant[@key=value...]" -> options derived from `base`.
inline method_spec parse_method(const std::string& spec, const options& base) {
  method_spec m{spec, base};
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, '@');) parts.push_back(p);
  if (parts.empty() || parts.front().empty()) throw usage_error("empty method in --variant");
  m.opts.variant = parts.front();
  parse_variant(m.opts.variant);
  if (parts.size() == 1) return m;
  CLI::App sub{"method overrides"};
  options scratch = m.opts;
  add_search_options(sub, scratch, false);
  for (auto* opt : sub.get_options()) opt->required(false);
  std::vector<std::string> args;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto eq = parts[i].find('=');
    if (eq == std::string::npos || eq == 0) throw usage_error("method override '" + parts[i] + "' is not key=value");
    const std::string key = parts[i].substr(0, eq);
    if (key == "problem" || key == "variant" || key == "config") throw usage_error("method override cannot set '" + key + "'");
    args.push_back("--" + key);
    args.push_back(parts[i].substr(eq + 1));
  }
  std::reverse(args.begin(), args.end());  // CLI11 consumes the vector from the back
  try {
    sub.parse(args);
  } catch (const CLI::ParseError& e) {
    throw usage_error("method '" + spec + "': " + e.what());
  }
  m.opts = scratch;
  return m;
}

inline std::vector<std::string> list_instances(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw io_error("'" + dir + "' is not a directory");
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().filename().string().front() != '.') files.push_back(entry.path().string());
  if (ec) throw io_error("cannot list '" + dir + "'");
  std::sort(files.begin(), files.end());
  if (files.empty()) throw io_error("no instance files in '" + dir + "'");
  return files;
}

struct cell {
  std::size_t method;
  std::size_t instance;
  std::uint64_t seed;
};

template <class Instance>
std::vector<result_row> run_grid(const std::vector<Instance>& instances, const std::vector<method_spec>& methods,
                                 const std::vector<run_config>& configs, int runs, std::uint64_t base_seed, int jobs) {
  std::vector<cell> grid;
  for (std::size_t m = 0; m < methods.size(); ++m)
    for (std::size_t i = 0; i < instances.size(); ++i)
      for (int r = 0; r < runs; ++r) grid.push_back({m, i, base_seed + static_cast<std::uint64_t>(r)});

  std::vector<result_row> rows(grid.size());
  std::atomic<std::size_t> next{0};
  std::mutex failure_lock;
  std::optional<std::string> failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= grid.size()) return;
      const cell& c = grid[k];
      try {
        run_config cfg = configs[c.method];
        cfg.seed = c.seed;
        auto report = run(instances[c.instance], cfg);
        rows[k] = {methods[c.method].name, instances[c.instance].name(), c.seed, report.best_objective,
                   report.iterations,      report.elapsed_s,             report.restarts};
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_lock);
        if (!failure)
          failure = "method " + methods[c.method].name + ", instance " + instances[c.instance].name() + ", seed " +
                    std::to_string(c.seed) + ": " + e.what();
        next = grid.size();
        return;
      }
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(grid.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) throw std::runtime_error("bench cell failed: " + *failure);
  return rows;
}

template <class Instance>
int bench_on(const std::vector<Instance>& instances, const options& o, std::ostream& out) {
  std::vector<method_spec> methods;
  std::stringstream ss(o.variant);
  for (std::string spec; std::getline(ss, spec, ',');) {
    if (std::any_of(methods.begin(), methods.end(), [&](const method_spec& m) { return m.name == spec; }))
      throw usage_error("method '" + spec + "' listed twice");
    methods.push_back(parse_method(spec, o));
  }
  if (methods.empty()) throw usage_error("--variant lists no methods");
  std::vector<run_config> configs;
  for (const auto& m : methods) configs.push_back(make_config(m.opts));

  std::map<std::string, objective_t> best_known;
  if (!o.best_known.empty()) best_known = parse_best_known(read_file(o.best_known));

  auto rows = run_grid(instances, methods, configs, o.runs, o.seed, o.jobs);

  std::vector<std::string> method_names, instance_names;
  for (const auto& m : methods) method_names.push_back(m.name);
  for (const auto& inst : instances) instance_names.push_back(inst.name());
  auto stats = compute_stats(method_names, instance_names, best_per_cell(rows), best_known);

  if (!o.out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    if (ec) throw io_error("cannot create '" + o.out + "'");
    auto results = open_output(o.out + "/results.csv");
    write_results_csv(results, rows);
    auto stats_file = open_output(o.out + "/stats.csv");
    write_stats_csv(stats_file, stats);
    if (!results || !stats_file) throw io_error("cannot write into '" + o.out + "'");
  }
  write_stats_table(out, stats);
  return exit_ok;
}

inline int bench(const options& o, std::ostream& out, std::ostream& err) {
  if (o.jobs < 1) throw usage_error("--jobs must be >= 1");
  if (o.runs < 1) throw usage_error("--runs must be >= 1");
  const auto files = list_instances(o.instances_dir);
  std::set<std::string> names;
  auto check_name = [&](const std::string& path) {
    if (!names.insert(stem_of(path)).second) throw usage_error("two instance files share the name '" + stem_of(path) + "'");
  };
  std::string current;
  try {
    if (o.problem == "lop") {
      std::vector<lop_instance> instances;
      for (const auto& f : files) {
        current = f;
        check_name(f);
        std::vector<std::string> warnings;
        instances.push_back(load_lolib(f, &warnings));
        for (const auto& w : warnings) err << "warning: " << f << ": " << w << '\n';
      }
      return bench_on(instances, o, out);
    }
    std::vector<maxcut_instance> instances;
    for (const auto& f : files) {
      current = f;
      check_name(f);
      instances.push_back(load_edge_list(f));
    }
    current.clear();
    return bench_on(instances, o, out);
  } catch (const parse_error& e) {
    err << "error: " << current << ": " << e.what() << '\n';
    return exit_parse;
  }
}

// ------------------------------------------------------------------- entry

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"GRASP with path relinking for the linear ordering and max-cut problems", "grasppr"};
  app.require_subcommand(1);
  app.footer("Variants: construction, grasp, static_pr, dynamic_pr, evolutionary_pr.\n"
             "Exit codes: 0 ok, 2 instance parse error, 64 usage error, 70 run failure, 74 I/O error.");

  options o;
  auto* solve_cmd = app.add_subcommand("solve", "Run one algorithm on one instance");
  add_search_options(*solve_cmd, o, false);
  solve_cmd->add_option("--instance", o.instance, "Instance file")->required();
  solve_cmd->add_option("--out", o.out, "Write the best objective and solution here");
  solve_cmd->add_option("--profile", o.profile, "Write the incumbent profile CSV here");

  auto* profile_cmd = app.add_subcommand("profile", "Like solve, but the incumbent profile CSV is required");
  add_search_options(*profile_cmd, o, false);
  profile_cmd->add_option("--instance", o.instance, "Instance file")->required();
  profile_cmd->add_option("--out", o.out, "Write the best objective and solution here");
  profile_cmd->add_option("--profile", o.profile, "Incumbent profile CSV")->required();

  auto* bench_cmd = app.add_subcommand("bench", "Run a method x instance x seed grid and tabulate");
  add_search_options(*bench_cmd, o, true);
  bench_cmd->add_option("--instances", o.instances_dir, "Directory of instance files")->required();
  bench_cmd->add_option("--jobs", o.jobs, "Cells run concurrently")->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--runs", o.runs, "Seeds per cell: seed, seed+1, ...")->check(CLI::PositiveNumber)->capture_default_str();
  bench_cmd->add_option("--out", o.out, "Directory for results.csv and stats.csv");
  bench_cmd->add_option("--best-known", o.best_known, "File of \"instance value\" lines for #Best_k and %Dev_k");

  std::optional<std::string> validate_problem;
  auto* validate_cmd = app.add_subcommand("validate", "Parse an instance file and summarize it");
  validate_cmd->add_option("--instance", o.instance, "Instance file")->required();
  validate_cmd->add_option("--problem", validate_problem, "Format [guessed from the content]")->check(CLI::IsMember({"lop", "maxcut"}));

  try {
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const parse_error& e) {
    err << "error: config: " << e.what() << '\n';
    return exit_parse;
  } catch (const io_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  }

  try {
    if (validate_cmd->parsed()) return validate(o.instance, validate_problem, out, err);
    if (bench_cmd->parsed()) return bench(o, out, err);
    return solve(o, out, err);
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const parse_error& e) {
    err << "error: " << o.instance << ": " << e.what() << '\n';
    return exit_parse;
  } catch (const io_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_io;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_software;
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(std::move(args), out, err);
}

}  // namespace grasppr::cli
