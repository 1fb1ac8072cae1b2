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


#ifndef SGA_EXPERIMENTS_HPP_
#define SGA_EXPERIMENTS_HPP_

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "sga/adjusters.hpp"
#include "sga/catalog.hpp"

namespace sga {

struct EtaGrid {
  enum class Spacing { Linear, Log };

  std::vector<double> values;

  static EtaGrid list(std::vector<double> v) { return EtaGrid{std::move(v)}; }

  static EtaGrid range(double lo, double hi, std::size_t count, Spacing spacing) {
    if (count == 0) throw InvalidArgument("eta grid needs at least one point");
    if (!(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("eta range must satisfy 0 < lo <= hi");
    EtaGrid g;
    g.values.resize(count);
    if (count == 1) {
      g.values[0] = lo;
      return g;
    }
    const double n1 = static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) {
      const double t = static_cast<double>(k) / n1;
      g.values[k] = spacing == Spacing::Log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                                            : lo + t * (hi - lo);
    }
    g.values.front() = lo;
    g.values.back() = hi;
    return g;
  }

  void validate() const {
    if (values.empty()) throw InvalidArgument("eta grid is empty");
    for (double e : values) {
      if (!(e > 0.0) || !std::isfinite(e)) throw InvalidArgument("eta values must be positive");
    }
  }
};

// Starting points: an explicit list, or seeded uniform draws from a ball
// around the origin. A one-coordinate fixed point is broadcast to every
// coordinate of the game.
struct W0Policy {
  enum class Kind { Fixed, Ball };

  Kind kind = Kind::Fixed;
  std::vector<Vector> points{Vector::Constant(1, 0.5)};
  double radius = 1.0;
  std::size_t count = 1;

  std::size_t samples() const { return kind == Kind::Fixed ? points.size() : count; }

  void validate() const {
    if (kind == Kind::Fixed && points.empty()) throw InvalidArgument("no fixed starting points");
    if (kind == Kind::Ball && (count == 0 || !(radius > 0.0))) {
      throw InvalidArgument("ball starting policy needs count >= 1 and radius > 0");
    }
  }

  // Draw k depends only on (seed, k).
  Vector point(std::size_t k, Index d, std::uint64_t seed) const {
    if (kind == Kind::Fixed) {
      const Vector& p = points.at(k);
      if (p.size() == 1) return Vector::Constant(d, p[0]);
      if (p.size() != d) throw InvalidArgument("starting point has the wrong dimension");
      return p;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    Vector dir(d);
    do {
      for (Index j = 0; j < d; ++j) dir[j] = normal(rng);
    } while (dir.norm() == 0.0);
    const double r = radius * std::pow(uniform(rng), 1.0 / static_cast<double>(d));
    return dir.normalized() * r;
  }
};

struct SweepConfig {
  std::vector<GameSpec> games;
  std::vector<AdjusterSpec> adjusters;
  EtaGrid etas;
  W0Policy w0;
  StopCriteria stop;
  std::size_t jobs = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (games.empty()) throw InvalidArgument("sweep needs at least one game");
    if (adjusters.empty()) throw InvalidArgument("sweep needs at least one adjuster");
    for (const auto& a : adjusters) a.validate();
    etas.validate();
    w0.validate();
    stop.validate();
  }
};

struct SweepCell {
  std::string game;
  AdjusterSpec adjuster;
  double eta = 0.0;
  std::uint64_t seed = 0;
  std::size_t w0_index = 0;
  Outcome outcome = Outcome::MaxIters;
  std::size_t iters = 0;
  double trailing_loss = 0.0;  // capped at SweepResult::kLossCap
  std::optional<double> spectral_radius;
};

struct SweepResult {
  static constexpr double kLossCap = 5.0;
  std::vector<SweepCell> cells;
};

// Cells run game-major, then adjuster, eta, and starting point. Results are
// placed by cell index, so the worker count never changes the output.
inline SweepResult sweep(const SweepConfig& config) {
  config.validate();
  struct Plan {
    std::size_t game;
    std::size_t adjuster;
    std::size_t eta;
    std::size_t w0;
  };
  std::vector<QuadraticGame> games;
  std::vector<Game> runtime_games;
  for (const auto& g : config.games) {
    games.push_back(g.build());
    runtime_games.push_back(games.back().game());
  }
  std::vector<Plan> plan;
  for (std::size_t g = 0; g < games.size(); ++g)
    for (std::size_t a = 0; a < config.adjusters.size(); ++a)
      for (std::size_t e = 0; e < config.etas.values.size(); ++e)
        for (std::size_t k = 0; k < config.w0.samples(); ++k) plan.push_back({g, a, e, k});

  SweepResult result;
  result.cells.resize(plan.size());
  RunOptions opts;
  opts.record_every = 0;
  opts.record_diagnostics = false;

  auto run_cell = [&](std::size_t idx) {
    const Plan& p = plan[idx];
    SweepCell& cell = result.cells[idx];
    const AdjusterSpec& spec = config.adjusters[p.adjuster];
    const double eta = config.etas.values[p.eta];
    cell.game = config.games[p.game].label();
    cell.adjuster = spec;
    cell.eta = eta;
    cell.seed = config.seed;
    cell.w0_index = p.w0;
    try {
      const Vector w0 = config.w0.point(p.w0, games[p.game].dim(), config.seed);
      const Trajectory t = run(spec, runtime_games[p.game], w0, eta, config.stop, opts);
      cell.outcome = t.outcome;
      cell.iters = t.iterations;
      cell.trailing_loss = std::isfinite(t.trailing_loss)
                               ? std::min(t.trailing_loss, SweepResult::kLossCap)
                               : SweepResult::kLossCap;
    } catch (const std::exception&) {
      cell.outcome = Outcome::Diverged;
      cell.iters = 0;
      cell.trailing_loss = SweepResult::kLossCap;
    }
    if (is_linear_rule(spec.kind) && games[p.game].has_zero_offsets()) {
      cell.spectral_radius = spectral_oracle(spec, games[p.game], eta).spectral_radius;
    }
  };

  const std::size_t jobs = std::clamp<std::size_t>(config.jobs, 1, std::max<std::size_t>(plan.size(), 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < plan.size(); ++i) run_cell(i);
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(jobs);
  for (std::size_t j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < plan.size(); i = next++) run_cell(i);
    });
  }
  pool.clear();  // joins
  return result;
}

// ---------------------------------------------------------------------------
// Presets

inline SweepConfig preset_fig3() {
  SweepConfig c;
  c.games = {{"fig3_weak_attractor", {}}};
  c.adjusters = {{AdjusterKind::SimGD, 1.0, 0.1}, {AdjusterKind::SGA, 0.1, 0.1}};
  c.etas = EtaGrid::list({0.01, 0.032, 0.1});
  c.stop.max_iters = 10000;
  return c;
}

inline SweepConfig preset_fig4() {
  SweepConfig c;
  c.games = {{"fig4_bilinear", {}}};
  c.adjusters = {{AdjusterKind::SGA, 1.0, 0.1}, {AdjusterKind::OMD, 1.0, 0.1}};
  c.etas = EtaGrid::range(0.01, 1.75, 50, EtaGrid::Spacing::Log);
  c.stop.max_iters = 250;
  return c;
}

inline SweepConfig preset_fig7() {
  SweepConfig c;
  c.games = {{"fig7_four_player", {{"epsilon", scalar_param(0.01)}}},
             {"fig7_four_player", {{"epsilon", scalar_param(0.0)}}}};
  c.adjusters = {{AdjusterKind::SGA, 1.0, 0.1}, {AdjusterKind::OMD, 1.0, 0.1}};
  std::vector<double> etas;
  for (int k = 1; k <= 20; ++k) etas.push_back(k / 50.0);  // 0.02, 0.04, ..., 0.40
  c.etas = EtaGrid::list(std::move(etas));
  c.w0.kind = W0Policy::Kind::Ball;
  c.w0.radius = 1.0;
  c.w0.count = 1;
  c.stop.max_iters = 5000;
  return c;
}

inline SweepConfig preset(const std::string& name) {
  if (name == "fig3") return preset_fig3();
  if (name == "fig4") return preset_fig4();
  if (name == "fig7") return preset_fig7();
  throw InvalidArgument("unknown preset '" + name + "' (expected fig3, fig4 or fig7)");
}

// ---------------------------------------------------------------------------
// Serialization

enum class Format { CSV, JSON };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::CSV;
  if (s == "json") return Format::JSON;
  throw InvalidArgument("unknown format '" + s + "' (expected csv or json)");
}

constexpr int kSchemaVersion = 1;

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline const char* kSweepColumns =
    "game,adjuster,lambda,eta,seed,outcome,iters,trailing_loss,spectral_radius";

inline void write_csv(std::ostream& os, const SweepResult& r) {
  os << kSweepColumns << '\n';
  for (const auto& c : r.cells) {
    os << csv_field(c.game) << ',' << to_string(c.adjuster.kind) << ','
       << format_double(c.adjuster.lambda) << ',' << format_double(c.eta) << ',' << c.seed << ','
       << to_string(c.outcome) << ',' << c.iters << ',' << format_double(c.trailing_loss) << ','
       << (c.spectral_radius ? format_double(*c.spectral_radius) : std::string()) << '\n';
  }
}

inline nlohmann::json to_json(const SweepResult& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : r.cells) {
    cells.push_back({{"game", c.game},
                     {"adjuster", to_string(c.adjuster.kind)},
                     {"lambda", c.adjuster.lambda},
                     {"eta", c.eta},
                     {"seed", c.seed},
                     {"outcome", to_string(c.outcome)},
                     {"iters", c.iters},
                     {"trailing_loss", c.trailing_loss},
                     {"spectral_radius", c.spectral_radius ? nlohmann::json(*c.spectral_radius)
                                                           : nlohmann::json(nullptr)}});
  }
  return {{"schema_version", kSchemaVersion}, {"cells", std::move(cells)}};
}

inline void serialize(std::ostream& os, const SweepResult& r, Format f) {
  if (f == Format::CSV) {
    write_csv(os, r);
  } else {
    os << to_json(r).dump(2) << '\n';
  }
  if (!os) throw std::runtime_error("failed to write sweep result");
}

inline std::string serialize(const SweepResult& r, Format f) {
  std::ostringstream os;
  serialize(os, r, f);
  return os.str();
}

// ---------------------------------------------------------------------------
// Point analysis

struct PointAnalysis {
  Point w;
  Vector xi;
  double hamiltonian = 0.0;
  Vector losses;
  Decomposition decomposition;
  GameClass game_class;
  double probe = 0.0;
  Vector sym_adjustment;
  Vector grad_hamiltonian;
  int alignment_sign = 1;
  std::optional<FixedPointReport> fixed_point;
};

struct AnalyzeOptions {
  double alignment_epsilon = 0.1;
  FixedPointOptions fixed_point;
  // Non-quadratic games are classified from w plus points at this radius.
  double class_sample_radius = 0.1;
  DifferentiationConfig diff;
};

inline PointAnalysis analyze_point(const Game& game, const Vector& w,
                                   const AnalyzeOptions& opts = {}) {
  PointAnalysis out;
  const FieldEvaluation f = simultaneous_gradient(game, w);
  out.w = w;
  out.xi = f.xi;
  out.hamiltonian = f.hamiltonian();
  out.losses = loss_vector(game, w);
  out.decomposition = decompose(game, w, opts.diff);
  std::vector<Vector> samples{w};
  if (game.quadratic() == nullptr) {
    const Index d = game.dim();
    for (Index j = 0; j < d && j < 4; ++j) {
      samples.push_back(w + opts.class_sample_radius * Vector::Unit(d, j));
      samples.push_back(w - opts.class_sample_radius * Vector::Unit(d, j));
    }
  }
  out.game_class = classify_game(game, samples, 0.0, opts.diff);
  out.grad_hamiltonian = thvp(game, w, f.xi, opts.diff);
  out.probe = f.xi.dot(out.grad_hamiltonian);
  out.sym_adjustment = 0.5 * (out.grad_hamiltonian - hvp(game, w, f.xi, opts.diff));
  out.alignment_sign =
      alignment_sign(f.xi, out.sym_adjustment, out.grad_hamiltonian, opts.alignment_epsilon);
  if (std::sqrt(f.norm_sq) <= opts.fixed_point.fixed_point_tol) {
    out.fixed_point = classify_fixed_point(game, w, opts.fixed_point, opts.diff);
  }
  return out;
}

inline nlohmann::json vector_json(const Vector& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

inline nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Vector row = m.row(r).transpose();
    rows.push_back(vector_json(row));
  }
  return rows;
}

inline nlohmann::json to_json(const PointAnalysis& a) {
  nlohmann::json j{
      {"schema_version", kSchemaVersion},
      {"w", vector_json(a.w)},
      {"xi", vector_json(a.xi)},
      {"hamiltonian", a.hamiltonian},
      {"losses", vector_json(a.losses)},
      {"hessian", matrix_json(a.decomposition.H)},
      {"symmetric", matrix_json(a.decomposition.S)},
      {"antisymmetric", matrix_json(a.decomposition.A)},
      {"s_eigenvalues", a.decomposition.s_eigenvalues},
      {"additive_condition_number", a.decomposition.additive_condition_number},
      {"class", to_string(a.game_class.kind)},
      {"probe", a.probe},
      {"sym_adjustment", vector_json(a.sym_adjustment)},
      {"grad_hamiltonian", vector_json(a.grad_hamiltonian)},
      {"alignment_sign", a.alignment_sign},
  };
  if (a.fixed_point) {
    j["fixed_point"] = {{"stability", to_string(a.fixed_point->stability)},
                        {"local_nash", a.fixed_point->is_local_nash},
                        {"xi_norm", a.fixed_point->xi_norm},
                        {"probe", a.fixed_point->probe_value}};
  } else {
    j["fixed_point"] = nullptr;
  }
  return j;
}

}  // namespace sga

#endif  // SGA_EXPERIMENTS_HPP_
