// Copyright 2026 The sga-games Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SGA_CLI_HPP_
#define SGA_CLI_HPP_

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sga/config.hpp"

namespace sga::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2 };

namespace detail {

inline GameParams collect_params(const std::vector<std::string>& raw) {
  GameParams out;
  for (const auto& s : raw) {
    auto [k, v] = parse_param(s);
    if (out.contains(k)) throw InvalidArgument("parameter '" + k + "' given twice");
    out[k] = std::move(v);
  }
  return out;
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + out_path + "'");
  f << text;
  if (!f) throw std::runtime_error("failed to write '" + out_path + "'");
}

inline std::size_t default_jobs() {
  if (const char* env = std::getenv("SGA_JOBS")) {
    try {
      const double v = parse_double(env);
      if (v >= 1.0 && v == std::floor(v)) return static_cast<std::size_t>(v);
    } catch (const InvalidArgument&) {
    }
  }
  return 1;
}

inline std::string list_games_text(Format fmt) {
  std::ostringstream os;
  if (fmt == Format::JSON) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : catalog()) {
      nlohmann::json params = nlohmann::json::array();
      for (const auto& p : e.params) {
        params.push_back({{"name", p.name}, {"default", format_param(p.default_value)}, {"doc", p.doc}});
      }
      arr.push_back({{"id", e.id}, {"description", e.description}, {"zero_sum", e.zero_sum},
                     {"params", params}});
    }
    os << nlohmann::json{{"schema_version", kSchemaVersion}, {"games", arr}}.dump(2) << '\n';
    return os.str();
  }
  for (const auto& e : catalog()) {
    os << e.id << "  " << e.description << '\n';
    for (const auto& p : e.params) {
      os << "    " << p.name << "=" << format_param(p.default_value) << "  " << p.doc << '\n';
    }
  }
  return os.str();
}

// Row t holds w_t and losses(w_t), plus the diagnostics of the direction
// evaluated at w_t (empty on the final row).
inline std::string trajectory_csv(const Game& game, const Trajectory& t) {
  std::ostringstream os;
  const Index d = game.dim();
  os << "step";
  for (Index j = 0; j < d; ++j) os << ",w" << j;
  for (std::size_t i = 0; i < game.players(); ++i) os << ",loss" << i;
  os << ",xi_norm,probe,lambda_sign\n";
  for (std::size_t k = 0; k < t.iterates.size(); ++k) {
    const std::size_t s = t.iterate_steps[k];
    const Vector& w = t.iterates[k];
    os << s;
    for (Index j = 0; j < d; ++j) os << ',' << format_double(w[j]);
    Vector losses(static_cast<Index>(game.players()));
    for (std::size_t i = 0; i < game.players(); ++i) losses[static_cast<Index>(i)] = game.loss(i, w);
    for (Index i = 0; i < losses.size(); ++i) os << ',' << format_double(losses[i]);
    if (s < t.diagnostics.size()) {
      const auto& dg = t.diagnostics[s];
      os << ',' << format_double(dg.xi_norm) << ',' << format_double(dg.probe) << ',' << dg.lambda_sign;
    } else {
      os << ",,,";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace detail

// Full command-line entry point; returns the process exit code.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout,
                std::ostream& err = std::cerr) {
  CLI::App app{"Analyze and solve n-player differentiable games"};
  app.name("sga");
  app.require_subcommand(1);

  std::string format = "csv";
  std::string out_path;
  std::uint64_t seed = 0;
  std::size_t jobs = detail::default_jobs();
  auto* fmt_opt = app.add_option("--format", format, "Output format: csv or json")
                      ->check(CLI::IsMember({"csv", "json"}))
                      ->capture_default_str();
  app.add_option("--out", out_path, "Write output to this file instead of stdout");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed")->capture_default_str();
  auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads for sweeps (default: $SGA_JOBS or 1)")
                       ->check(CLI::PositiveNumber)
                       ->capture_default_str();
  (void)fmt_opt;

  // list-games
  auto* list_cmd = app.add_subcommand("list-games", "Print catalog game ids and parameters");
  list_cmd->fallthrough();

  // analyze
  std::string a_game;
  std::vector<std::string> a_params;
  std::string a_at;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a game at a point (JSON output)");
  analyze_cmd->fallthrough();
  analyze_cmd->add_option("--game", a_game, "Catalog game id")->required();
  analyze_cmd->add_option("--params", a_params, "Game parameter key=value (repeatable)");
  analyze_cmd->add_option("--at", a_at, "Point, comma-separated")->required();

  // run
  std::string r_game;
  std::vector<std::string> r_params;
  std::string r_adjuster;
  double r_eta = 0.0;
  double r_lambda = 1.0;
  double r_epsilon = 0.1;
  std::string r_w0 = "0.5";
  std::size_t r_max_iters = 10000;
  std::size_t r_window = 10;
  double r_loss_threshold = 0.01;
  double r_div = 1e6;
  double r_xi_threshold = 1e-6;
  std::string r_traj_path;
  auto* run_cmd = app.add_subcommand("run", "Run one adjuster from one starting point");
  run_cmd->fallthrough();
  run_cmd->add_option("--game", r_game, "Catalog game id")->required();
  run_cmd->add_option("--params", r_params, "Game parameter key=value (repeatable)");
  run_cmd->add_option("--adjuster", r_adjuster,
                      "simgd|sga|sga-aligned|consensus|aligned-consensus|hamiltonian-descent|omd")
      ->required();
  run_cmd->add_option("--eta", r_eta, "Learning rate")->required()->check(CLI::PositiveNumber);
  run_cmd->add_option("--lambda", r_lambda, "Adjustment weight")->capture_default_str();
  run_cmd->add_option("--epsilon", r_epsilon, "Alignment bias (sga-aligned)")->capture_default_str();
  run_cmd->add_option("--w0", r_w0, "Starting point; one value is broadcast")->capture_default_str();
  run_cmd->add_option("--max-iters", r_max_iters, "Iteration cap")->capture_default_str();
  run_cmd->add_option("--loss-window", r_window, "Trailing loss window")->capture_default_str();
  run_cmd->add_option("--loss-threshold", r_loss_threshold, "Trailing mean |loss| threshold")
      ->capture_default_str();
  run_cmd->add_option("--divergence-norm", r_div, "Divergence threshold on ||w||")->capture_default_str();
  run_cmd->add_option("--xi-threshold", r_xi_threshold,
                      "Converge when ||xi|| drops below this; 0 selects the loss-window test")
      ->capture_default_str();
  run_cmd->add_option("--trajectory", r_traj_path, "Write the per-step trajectory CSV here");

  // sweep
  std::string s_preset;
  std::string s_config;
  std::string s_game;
  std::vector<std::string> s_params;
  std::vector<std::string> s_adjusters;
  std::string s_etas;
  std::string s_eta_range;
  std::vector<std::string> s_w0;
  std::string s_w0_ball;
  std::size_t s_max_iters = 0;
  std::size_t s_window = 0;
  double s_loss_threshold = 0.0;
  double s_div = 0.0;
  double s_xi = 0.0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Learning-rate sweep; flags override preset/config values");
  sweep_cmd->fallthrough();
  auto* preset_opt = sweep_cmd->add_option("--preset", s_preset, "fig3, fig4 or fig7")
                         ->check(CLI::IsMember({"fig3", "fig4", "fig7"}));
  auto* config_opt = sweep_cmd->add_option("--config", s_config, "JSON sweep config file");
  preset_opt->excludes(config_opt);
  auto* game_opt = sweep_cmd->add_option("--game", s_game, "Catalog game id (replaces the game list)");
  auto* params_opt = sweep_cmd->add_option("--params", s_params, "Game parameter key=value (repeatable)");
  auto* adj_opt = sweep_cmd->add_option("--adjuster", s_adjusters, "kind[:lambda[:epsilon]] (repeatable)");
  auto* etas_opt = sweep_cmd->add_option("--etas", s_etas, "Comma-separated learning rates");
  auto* range_opt = sweep_cmd->add_option("--eta-range", s_eta_range, "lo:hi:count[:log|linear]");
  etas_opt->excludes(range_opt);
  auto* w0_opt = sweep_cmd->add_option("--w0", s_w0, "Fixed starting point (repeatable)");
  auto* ball_opt = sweep_cmd->add_option("--w0-ball", s_w0_ball, "radius:count random starts");
  w0_opt->excludes(ball_opt);
  auto* mi_opt = sweep_cmd->add_option("--max-iters", s_max_iters, "Iteration cap (default 10000)");
  auto* lw_opt = sweep_cmd->add_option("--loss-window", s_window, "Trailing loss window (default 10)");
  auto* lt_opt = sweep_cmd->add_option("--loss-threshold", s_loss_threshold, "Loss threshold (default 0.01)");
  auto* dn_opt = sweep_cmd->add_option("--divergence-norm", s_div, "Divergence threshold (default 1e6)");
  auto* xi_opt = sweep_cmd->add_option("--xi-threshold", s_xi, "Use ||xi|| convergence (default off)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kUsage;
  }

  try {
    const Format fmt = parse_format(format);

    if (*list_cmd) {
      detail::emit(detail::list_games_text(fmt), out_path, out);
      return kOk;
    }

    if (*analyze_cmd) {
      const QuadraticGame q = catalog_game(a_game, detail::collect_params(a_params));
      const Vector at = parse_vector(a_at);
      if (at.size() != q.dim()) {
        throw InvalidArgument("--at has " + std::to_string(at.size()) + " coordinates, game '" +
                              a_game + "' has " + std::to_string(q.dim()));
      }
      const PointAnalysis a = analyze_point(q.game(), at);
      nlohmann::json j = to_json(a);
      j["game"] = a_game;
      detail::emit(j.dump(2) + "\n", out_path, out);
      return kOk;
    }

    if (*run_cmd) {
      GameSpec gs{r_game, detail::collect_params(r_params)};
      const QuadraticGame q = gs.build();
      const Game game = q.game();
      AdjusterSpec spec{parse_adjuster_kind(r_adjuster), r_lambda, r_epsilon};
      W0Policy w0p;
      w0p.points = {parse_vector(r_w0)};
      const Vector w0 = w0p.point(0, q.dim(), seed);
      StopCriteria stop;
      stop.max_iters = r_max_iters;
      stop.loss_window = r_window;
      stop.loss_threshold = r_loss_threshold;
      stop.divergence_norm = r_div;
      if (r_xi_threshold < 0.0) throw InvalidArgument("--xi-threshold must be nonnegative");
      if (r_xi_threshold > 0.0) stop.xi_threshold = r_xi_threshold;
      RunOptions opts;
      opts.record_every = r_traj_path.empty() ? 0 : 1;
      opts.record_diagnostics = !r_traj_path.empty();
      const Trajectory t = run(spec, game, w0, r_eta, stop, opts);
      const double final_xi = t.final_point.allFinite()
                                  ? simultaneous_gradient(game, t.final_point).xi.norm()
                                  : std::numeric_limits<double>::infinity();
      std::ostringstream os;
      if (fmt == Format::CSV) {
        os << "game,adjuster,lambda,epsilon,eta,outcome,iters,trailing_loss,final_norm,final_xi_norm\n"
           << csv_field(gs.label()) << ',' << to_string(spec.kind) << ',' << format_double(spec.lambda)
           << ',' << format_double(spec.epsilon) << ',' << format_double(r_eta) << ','
           << to_string(t.outcome) << ',' << t.iterations << ',' << format_double(t.trailing_loss)
           << ',' << format_double(t.final_point.norm()) << ',' << format_double(final_xi) << '\n';
      } else {
        nlohmann::json j{{"schema_version", kSchemaVersion},
                         {"game", gs.label()},
                         {"adjuster", to_string(spec.kind)},
                         {"lambda", spec.lambda},
                         {"epsilon", spec.epsilon},
                         {"eta", r_eta},
                         {"outcome", to_string(t.outcome)},
                         {"iters", t.iterations},
                         {"trailing_loss", std::isfinite(t.trailing_loss) ? nlohmann::json(t.trailing_loss)
                                                                          : nlohmann::json(nullptr)},
                         {"final_norm", t.final_point.norm()},
                         {"final_xi_norm", std::isfinite(final_xi) ? nlohmann::json(final_xi)
                                                                   : nlohmann::json(nullptr)},
                         {"final_point", vector_json(t.final_point)}};
        os << j.dump(2) << '\n';
      }
      detail::emit(os.str(), out_path, out);
      if (!r_traj_path.empty()) detail::emit(detail::trajectory_csv(game, t), r_traj_path, out);
      return kOk;
    }

    if (*sweep_cmd) {
      SweepConfig c;
      if (*preset_opt) {
        c = preset(s_preset);
      } else if (*config_opt) {
        c = load_sweep_config(s_config);
      }
      if (*game_opt) {
        c.games = {GameSpec{s_game, detail::collect_params(s_params)}};
      } else if (*params_opt) {
        if (c.games.size() != 1) throw InvalidArgument("--params without --game needs exactly one game");
        for (auto& [k, v] : detail::collect_params(s_params)) c.games[0].params[k] = v;
      }
      if (*adj_opt) {
        c.adjusters.clear();
        for (const auto& a : s_adjusters) c.adjusters.push_back(parse_adjuster(a));
      }
      if (*etas_opt) {
        const Vector v = parse_vector(s_etas);
        c.etas = EtaGrid::list(std::vector<double>(v.data(), v.data() + v.size()));
      }
      if (*range_opt) c.etas = parse_eta_range(s_eta_range);
      if (*w0_opt) {
        c.w0.kind = W0Policy::Kind::Fixed;
        c.w0.points.clear();
        for (const auto& p : s_w0) c.w0.points.push_back(parse_vector(p));
      }
      if (*ball_opt) {
        const auto parts = split(s_w0_ball, ':');
        if (parts.size() != 2) throw InvalidArgument("--w0-ball must look like radius:count");
        const double count = parse_double(parts[1]);
        if (!(count >= 1.0) || count != std::floor(count)) {
          throw InvalidArgument("--w0-ball count must be a positive integer");
        }
        c.w0.kind = W0Policy::Kind::Ball;
        c.w0.radius = parse_double(parts[0]);
        c.w0.count = static_cast<std::size_t>(count);
      }
      if (*mi_opt) c.stop.max_iters = s_max_iters;
      if (*lw_opt) c.stop.loss_window = s_window;
      if (*lt_opt) c.stop.loss_threshold = s_loss_threshold;
      if (*dn_opt) c.stop.divergence_norm = s_div;
      if (*xi_opt) {
        if (s_xi > 0.0) {
          c.stop.xi_threshold = s_xi;
        } else {
          c.stop.xi_threshold.reset();
        }
      }
      if (*seed_opt) c.seed = seed;
      if (*jobs_opt || !*config_opt) c.jobs = jobs;
      detail::emit(serialize(sweep(c), fmt), out_path, out);
      return kOk;
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kUsage;
}

}  // namespace sga::cli

#endif  // SGA_CLI_HPP_
