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


#ifndef SGA_ADJUSTERS_HPP_
#define SGA_ADJUSTERS_HPP_

#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sga/mechanics.hpp"

namespace sga {

enum class AdjusterKind {
  SimGD,
  SGA,
  SGAAligned,
  Consensus,
  AlignedConsensus,
  HamiltonianDescent,
  OMD,
};

inline const std::vector<std::pair<AdjusterKind, std::string>>& adjuster_names() {
  static const std::vector<std::pair<AdjusterKind, std::string>> names = {
      {AdjusterKind::SimGD, "simgd"},
      {AdjusterKind::SGA, "sga"},
      {AdjusterKind::SGAAligned, "sga-aligned"},
      {AdjusterKind::Consensus, "consensus"},
      {AdjusterKind::AlignedConsensus, "aligned-consensus"},
      {AdjusterKind::HamiltonianDescent, "hamiltonian-descent"},
      {AdjusterKind::OMD, "omd"},
  };
  return names;
}

inline const std::string& to_string(AdjusterKind k) {
  for (const auto& [kind, name] : adjuster_names()) {
    if (kind == k) return name;
  }
  throw InvalidArgument("unknown adjuster kind");
}

inline AdjusterKind parse_adjuster_kind(const std::string& s) {
  for (const auto& [kind, name] : adjuster_names()) {
    if (name == s) return kind;
  }
  throw InvalidArgument("unknown adjuster '" + s + "'");
}

// Rules whose update is a fixed linear map on quadratic games.
inline bool is_linear_rule(AdjusterKind k) {
  return k != AdjusterKind::SGAAligned && k != AdjusterKind::AlignedConsensus;
}

struct AdjusterSpec {
  AdjusterKind kind = AdjusterKind::SimGD;
  double lambda = 1.0;   // adjustment weight
  double epsilon = 0.1;  // alignment bias, SGAAligned only

  void validate() const {
    if (!std::isfinite(lambda)) throw InvalidArgument("lambda must be finite");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
      throw InvalidArgument("epsilon must be finite and nonnegative");
    }
  }
};

// Per-run state carried between steps. Only OMD reads it.
struct History {
  std::optional<Vector> prev_xi;
};

// Everything computed while forming one update direction.
struct DirectionEval {
  Vector direction;
  Vector xi;
  double probe = 0.0;    // <xi, grad H>
  int lambda_sign = 1;   // sign actually applied to the adjustment term
};

inline DirectionEval evaluate_direction(const AdjusterSpec& spec, const Game& game,
                                        const Vector& w, const History& history = {},
                                        const DifferentiationConfig& cfg = {}) {
  DirectionEval out;
  out.xi = simultaneous_gradient(game, w).xi;
  const Vector& xi = out.xi;
  const Vector ht_xi = thvp(game, w, xi, cfg);  // grad H
  out.probe = xi.dot(ht_xi);
  auto at_xi = [&] { return Vector(0.5 * (ht_xi - hvp(game, w, xi, cfg))); };

  switch (spec.kind) {
    case AdjusterKind::SimGD:
      out.direction = xi;
      break;
    case AdjusterKind::SGA:
      out.direction = xi + spec.lambda * at_xi();
      out.lambda_sign = spec.lambda < 0.0 ? -1 : 1;
      break;
    case AdjusterKind::SGAAligned: {
      const Vector adj = at_xi();
      out.lambda_sign = alignment_sign(xi, adj, ht_xi, spec.epsilon);
      out.direction = xi + out.lambda_sign * std::abs(spec.lambda) * adj;
      break;
    }
    case AdjusterKind::Consensus:
      out.direction = xi + spec.lambda * ht_xi;
      out.lambda_sign = spec.lambda < 0.0 ? -1 : 1;
      break;
    case AdjusterKind::AlignedConsensus:
      out.lambda_sign = out.probe >= 0.0 ? 1 : -1;
      out.direction = xi + out.lambda_sign * std::abs(spec.lambda) * ht_xi;
      break;
    case AdjusterKind::HamiltonianDescent:
      out.direction = ht_xi;
      break;
    case AdjusterKind::OMD:
      out.direction = 2.0 * xi - history.prev_xi.value_or(xi);
      break;
  }
  return out;
}

// Adjusted direction; an outer optimizer steps against it.
inline Vector direction(const AdjusterSpec& spec, const Game& game, const Vector& w,
                        const History& history = {}, const DifferentiationConfig& cfg = {}) {
  return evaluate_direction(spec, game, w, history, cfg).direction;
}

struct StepDiagnostics {
  Vector losses;       // at the new point
  double xi_norm = 0;  // at the old point
  double probe = 0;    // <xi, grad H> at the old point
  int lambda_sign = 1;
};

struct StepResult {
  Point w;
  StepDiagnostics diagnostics;
  bool finite = true;
};

// Explicit Euler: w - eta * direction. Updates history for OMD.
inline StepResult step(const AdjusterSpec& spec, const Game& game, const Vector& w, double eta,
                       History& history, const DifferentiationConfig& cfg = {}) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be positive");
  const DirectionEval ev = evaluate_direction(spec, game, w, history, cfg);
  history.prev_xi = ev.xi;
  StepResult out;
  out.w = w - eta * ev.direction;
  out.finite = out.w.allFinite();
  out.diagnostics.xi_norm = ev.xi.norm();
  out.diagnostics.probe = ev.probe;
  out.diagnostics.lambda_sign = ev.lambda_sign;
  if (out.finite) {
    out.diagnostics.losses = Vector(static_cast<Index>(game.players()));
    for (std::size_t i = 0; i < game.players(); ++i) {
      out.diagnostics.losses[static_cast<Index>(i)] = game.loss(i, out.w);
    }
    out.finite = out.diagnostics.losses.allFinite();
  }
  return out;
}

struct StopCriteria {
  std::size_t max_iters = 10000;
  std::size_t loss_window = 10;
  double loss_threshold = 0.01;
  double divergence_norm = 1e6;
  // When set, convergence means ||xi|| < xi_threshold and the loss window
  // test is not used.
  std::optional<double> xi_threshold;

  void validate() const {
    if (max_iters < 1) throw InvalidArgument("max_iters must be positive");
    if (loss_window < 1 || loss_window > max_iters) {
      throw InvalidArgument("loss_window must lie in [1, max_iters]");
    }
    if (!(loss_threshold > 0.0)) throw InvalidArgument("loss_threshold must be positive");
    if (!(divergence_norm > 0.0)) throw InvalidArgument("divergence_norm must be positive");
    if (xi_threshold && !(*xi_threshold > 0.0)) {
      throw InvalidArgument("xi_threshold must be positive");
    }
  }
};

enum class Outcome { Converged, Diverged, MaxIters };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::Converged: return "converged";
    case Outcome::Diverged: return "diverged";
    case Outcome::MaxIters: return "max_iters";
  }
  return "?";
}

struct Trajectory {
  std::vector<Point> iterates;            // w0 first, then every record_every-th step
  std::vector<std::size_t> iterate_steps; // step index of each stored iterate
  std::vector<StepDiagnostics> diagnostics;
  Outcome outcome = Outcome::MaxIters;
  std::size_t iterations = 0;  // step at which the outcome was decided
  Point final_point;
  // Mean over the trailing loss window of the per-step mean |loss_i|;
  // +inf after divergence.
  double trailing_loss = 0.0;
};

struct RunOptions {
  // 0 stores only w0 and the final point; 1 stores every iterate.
  std::size_t record_every = 1;
  bool record_diagnostics = true;
  DifferentiationConfig diff;
};

inline Trajectory run(const AdjusterSpec& spec, const Game& game, const Vector& w0, double eta,
                      const StopCriteria& stop, const RunOptions& opts = {}) {
  spec.validate();
  stop.validate();
  game.partition().check_point(w0);
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be positive");

  Trajectory traj;
  traj.iterates.push_back(w0);
  traj.iterate_steps.push_back(0);
  History history;
  Vector w = w0;
  std::deque<double> window;
  double window_sum = 0.0;

  auto finish = [&](Outcome o, std::size_t t) {
    traj.outcome = o;
    traj.iterations = t;
    traj.final_point = w;
    if (o == Outcome::Diverged) {
      traj.trailing_loss = std::numeric_limits<double>::infinity();
    } else {
      traj.trailing_loss = window.empty() ? 0.0 : window_sum / static_cast<double>(window.size());
    }
    if (traj.iterate_steps.back() != t) {
      traj.iterates.push_back(w);
      traj.iterate_steps.push_back(t);
    }
    return std::move(traj);
  };

  for (std::size_t t = 1; t <= stop.max_iters; ++t) {
    StepResult s;
    try {
      s = step(spec, game, w, eta, history, opts.diff);
    } catch (const NumericalError&) {
      return finish(Outcome::Diverged, t);
    }
    if (opts.record_diagnostics) traj.diagnostics.push_back(s.diagnostics);
    if (!s.finite) return finish(Outcome::Diverged, t);
    w = std::move(s.w);
    if (w.norm() > stop.divergence_norm) return finish(Outcome::Diverged, t);
    if (opts.record_every > 0 && t % opts.record_every == 0) {
      traj.iterates.push_back(w);
      traj.iterate_steps.push_back(t);
    }

    const double mean_abs = s.diagnostics.losses.cwiseAbs().mean();
    window.push_back(mean_abs);
    window_sum += mean_abs;
    if (window.size() > stop.loss_window) {
      window_sum -= window.front();
      window.pop_front();
    }

    if (stop.xi_threshold) {
      Vector xi;
      try {
        xi = simultaneous_gradient(game, w).xi;
      } catch (const NumericalError&) {
        return finish(Outcome::Diverged, t);
      }
      if (xi.norm() < *stop.xi_threshold) return finish(Outcome::Converged, t);
    } else if (window.size() == stop.loss_window &&
               window_sum / static_cast<double>(stop.loss_window) < stop.loss_threshold) {
      return finish(Outcome::Converged, t);
    }
  }
  return finish(Outcome::MaxIters, stop.max_iters);
}

struct SpectralPrediction {
  double spectral_radius = 0.0;
  bool predicts_convergence = false;
  Matrix iteration_matrix;
};

inline double spectral_radius(const Matrix& m) {
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// Exact linear iteration of a non-aligned rule on a quadratic game with zero
// offsets, and its spectral radius. OMD is analyzed on the stacked state
// (w_t, w_{t-1}). spec.lambda is the adjustment weight.
inline SpectralPrediction spectral_oracle(const AdjusterSpec& spec, const QuadraticGame& game,
                                          double eta) {
  if (!game.has_zero_offsets()) {
    throw InvalidArgument("spectral oracle needs a quadratic game with zero offsets");
  }
  if (!is_linear_rule(spec.kind)) {
    throw InvalidArgument("spectral oracle does not apply to aligned rule '" +
                          to_string(spec.kind) + "'");
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidArgument("eta must be positive");
  const Matrix& h = game.hessian();
  const Index d = h.rows();
  const Matrix eye = Matrix::Identity(d, d);
  const Matrix at = 0.5 * (h.transpose() - h);  // A^T
  SpectralPrediction out;
  switch (spec.kind) {
    case AdjusterKind::SimGD:
      out.iteration_matrix = eye - eta * h;
      break;
    case AdjusterKind::SGA:
      out.iteration_matrix = eye - eta * (eye + spec.lambda * at) * h;
      break;
    case AdjusterKind::Consensus:
      out.iteration_matrix = eye - eta * (eye + spec.lambda * h.transpose()) * h;
      break;
    case AdjusterKind::HamiltonianDescent:
      out.iteration_matrix = eye - eta * h.transpose() * h;
      break;
    case AdjusterKind::OMD: {
      Matrix c = Matrix::Zero(2 * d, 2 * d);
      c.topLeftCorner(d, d) = eye - 2.0 * eta * h;
      c.topRightCorner(d, d) = eta * h;
      c.bottomLeftCorner(d, d) = eye;
      out.iteration_matrix = std::move(c);
      break;
    }
    default:
      break;
  }
  out.spectral_radius = spectral_radius(out.iteration_matrix);
  out.predicts_convergence = out.spectral_radius < 1.0;
  return out;
}

}  // namespace sga

#endif  // SGA_ADJUSTERS_HPP_
