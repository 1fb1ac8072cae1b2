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


#ifndef SGA_DIFFERENTIATION_HPP_
#define SGA_DIFFERENTIATION_HPP_

#include <algorithm>
#include <cstddef>

#include "sga/game.hpp"

namespace sga {

enum class HvpMode { Analytic, FiniteDifference };

struct DifferentiationConfig {
  // Central-difference step is h = fd_step_scale * (1 + ||w||_inf).
  double fd_step_scale = 1e-6;
  // Analytic uses the game's Hessian when it has one and falls back to
  // finite differences otherwise.
  HvpMode hvp_mode = HvpMode::Analytic;
  // Largest d for which full_hessian will assemble a dense matrix.
  Index hessian_cap = 512;

  void validate() const {
    if (!(fd_step_scale >= 1e-9 && fd_step_scale <= 1e-2)) {
      throw InvalidArgument("fd_step_scale must lie in [1e-9, 1e-2]");
    }
    if (hessian_cap < 1) throw InvalidArgument("hessian_cap must be positive");
  }
};

// The simultaneous gradient xi(w) with its squared norm. The Hamiltonian
// of the game dynamics is half of norm_sq.
struct FieldEvaluation {
  Point w;
  Vector xi;
  double norm_sq = 0.0;

  double hamiltonian() const { return 0.5 * norm_sq; }
};

// Concatenation of each player's gradient of its own loss, in partition order.
inline FieldEvaluation simultaneous_gradient(const Game& game, const Vector& w) {
  const PlayerPartition& part = game.partition();
  part.check_point(w);
  FieldEvaluation out{w, Vector(part.dim()), 0.0};
  for (std::size_t i = 0; i < part.players(); ++i) {
    const Vector g = game.grad(i, w);
    if (g.size() != part.size(i)) throw InvalidArgument("player gradient has wrong length");
    part.block(out.xi, i) = g;
  }
  if (!out.xi.allFinite()) throw NumericalError("simultaneous gradient is not finite");
  out.norm_sq = out.xi.squaredNorm();
  return out;
}

namespace detail {

// Same as simultaneous_gradient minus the validation, for stencil points
// that may legitimately sit off the sampled domain.
inline Vector field_unchecked(const Game& game, const Vector& w) {
  const PlayerPartition& part = game.partition();
  Vector xi(part.dim());
  for (std::size_t i = 0; i < part.players(); ++i) part.block(xi, i) = game.grad(i, w);
  return xi;
}

inline double fd_step(const DifferentiationConfig& cfg, const Vector& w) {
  const double wmax = w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
  return cfg.fd_step_scale * (1.0 + wmax);
}

inline bool use_analytic(const Game& game, const DifferentiationConfig& cfg) {
  return cfg.hvp_mode == HvpMode::Analytic && game.has_analytic_hessian();
}

inline void check_direction(const Game& game, const Vector& v) {
  if (v.size() != game.dim()) throw InvalidArgument("direction vector has wrong length");
}

}  // namespace detail

// H(w) v. The finite-difference route steps along v / ||v|| and rescales.
inline Vector hvp(const Game& game, const Vector& w, const Vector& v,
                  const DifferentiationConfig& cfg = {}) {
  game.partition().check_point(w);
  detail::check_direction(game, v);
  if (detail::use_analytic(game, cfg)) return game.analytic_hessian(w) * v;

  const double vnorm = v.norm();
  if (vnorm == 0.0) return Vector::Zero(game.dim());
  const Vector unit = v / vnorm;
  const double h = detail::fd_step(cfg, w);
  const Vector plus = detail::field_unchecked(game, w + h * unit);
  const Vector minus = detail::field_unchecked(game, w - h * unit);
  return (plus - minus) * (vnorm / (2.0 * h));
}

// H(w)^T v. The finite-difference route differentiates the scalar
// g(w) = <xi(w), v> along each coordinate (2d field evaluations).
inline Vector thvp(const Game& game, const Vector& w, const Vector& v,
                   const DifferentiationConfig& cfg = {}) {
  game.partition().check_point(w);
  detail::check_direction(game, v);
  if (detail::use_analytic(game, cfg)) return game.analytic_hessian(w).transpose() * v;

  const Index d = game.dim();
  if (v.isZero(0.0)) return Vector::Zero(d);
  const double h = detail::fd_step(cfg, w);
  Vector out(d);
  Vector probe = w;
  for (Index j = 0; j < d; ++j) {
    probe[j] = w[j] + h;
    const double up = detail::field_unchecked(game, probe).dot(v);
    probe[j] = w[j] - h;
    const double down = detail::field_unchecked(game, probe).dot(v);
    probe[j] = w[j];
    out[j] = (up - down) / (2.0 * h);
  }
  return out;
}

// A^T xi with A the antisymmetric part of the game Hessian, assembled as
// (H^T xi - H xi) / 2 from two Jacobian-vector products.
inline Vector sym_adjustment(const Game& game, const Vector& w,
                             const DifferentiationConfig& cfg = {}) {
  const Vector xi = simultaneous_gradient(game, w).xi;
  const Vector h_xi = hvp(game, w, xi, cfg);
  const Vector ht_xi = thvp(game, w, xi, cfg);
  Vector out = 0.5 * (ht_xi - h_xi);
  if (!out.allFinite()) throw NumericalError("symplectic adjustment is not finite");
  return out;
}

// Gradient of the Hamiltonian 1/2 ||xi||^2, which is H^T xi for any game.
inline Vector grad_hamiltonian(const Game& game, const Vector& w,
                               const DifferentiationConfig& cfg = {}) {
  const Vector xi = simultaneous_gradient(game, w).xi;
  return thvp(game, w, xi, cfg);
}

// Dense game Hessian at w. Column j is H e_j.
inline Matrix full_hessian(const Game& game, const Vector& w,
                           const DifferentiationConfig& cfg = {}) {
  const Index d = game.dim();
  if (d > cfg.hessian_cap) {
    throw InvalidArgument("dimension " + std::to_string(d) + " exceeds Hessian cap " +
                          std::to_string(cfg.hessian_cap));
  }
  game.partition().check_point(w);
  if (detail::use_analytic(game, cfg)) return game.analytic_hessian(w);
  Matrix h(d, d);
  for (Index j = 0; j < d; ++j) h.col(j) = hvp(game, w, Vector::Unit(d, j), cfg);
  return h;
}

}  // namespace sga

#endif  // SGA_DIFFERENTIATION_HPP_
