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


#ifndef SGA_GAME_HPP_
#define SGA_GAME_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sga/core.hpp"

namespace sga {

class QuadraticGame;

// An n-player differentiable game. Player i minimizes loss_i(w) over its own
// block w_i of the joint parameter vector. Games are immutable once built and
// every evaluation is a pure function of w.
class Game {
 public:
  using LossFn = std::function<double(const Vector&)>;
  // Gradient of player i's loss with respect to its own parameters w_i.
  using GradFn = std::function<Vector(const Vector&)>;
  using HessianFn = std::function<Matrix(const Vector&)>;

  struct Player {
    LossFn loss;
    GradFn grad;
  };

  Game(PlayerPartition partition, std::vector<Player> players,
       std::optional<HessianFn> analytic_hessian = std::nullopt,
       std::string name = "custom")
      : partition_(std::move(partition)),
        players_(std::move(players)),
        hessian_(std::move(analytic_hessian)),
        name_(std::move(name)) {
    if (players_.size() != partition_.players()) {
      throw InvalidArgument("game has " + std::to_string(players_.size()) +
                            " loss definitions for " +
                            std::to_string(partition_.players()) + " players");
    }
    for (const auto& p : players_) {
      if (!p.loss || !p.grad) throw InvalidArgument("every player needs a loss and a gradient");
    }
  }

  const PlayerPartition& partition() const { return partition_; }
  Index dim() const { return partition_.dim(); }
  std::size_t players() const { return partition_.players(); }
  const std::string& name() const { return name_; }

  double loss(std::size_t i, const Vector& w) const { return players_.at(i).loss(w); }
  Vector grad(std::size_t i, const Vector& w) const { return players_.at(i).grad(w); }

  bool has_analytic_hessian() const { return hessian_.has_value(); }
  Matrix analytic_hessian(const Vector& w) const {
    if (!hessian_) throw InvalidArgument("game '" + name_ + "' has no analytic Hessian");
    return (*hessian_)(w);
  }

  // Set when the game was built from a QuadraticGame.
  const QuadraticGame* quadratic() const { return quadratic_.get(); }

 private:
  friend class QuadraticGame;

  PlayerPartition partition_;
  std::vector<Player> players_;
  std::optional<HessianFn> hessian_;
  std::string name_;
  std::shared_ptr<const QuadraticGame> quadratic_;
};

// Builds a game from per-player loss/gradient pairs. Each gradient is probed
// once at the origin so that size mismatches surface at construction.
inline Game make_game(PlayerPartition partition, std::vector<Game::Player> players,
                      std::optional<Game::HessianFn> analytic_hessian = std::nullopt,
                      std::string name = "custom") {
  Game game(std::move(partition), std::move(players), std::move(analytic_hessian),
            std::move(name));
  const Vector origin = Vector::Zero(game.dim());
  for (std::size_t i = 0; i < game.players(); ++i) {
    const Vector g = game.grad(i, origin);
    if (g.size() != game.partition().size(i)) {
      throw InvalidArgument("gradient of player " + std::to_string(i) + " has length " +
                            std::to_string(g.size()) + ", expected " +
                            std::to_string(game.partition().size(i)));
    }
  }
  if (game.has_analytic_hessian()) {
    const Matrix h = game.analytic_hessian(origin);
    if (h.rows() != game.dim() || h.cols() != game.dim()) {
      throw InvalidArgument("analytic Hessian has wrong shape");
    }
  }
  return game;
}

// loss_i(w) = 1/2 w^T B_i w + b_i^T w with each B_i symmetric (d x d).
// The game Hessian is constant: its i-th block-row is the rows of B_i that
// belong to player i.
class QuadraticGame {
 public:
  QuadraticGame(PlayerPartition partition, std::vector<Matrix> coefficients,
                std::vector<Vector> offsets, std::string name = "quadratic")
      : partition_(std::move(partition)),
        coefficients_(std::move(coefficients)),
        offsets_(std::move(offsets)),
        name_(std::move(name)) {
    const Index d = partition_.dim();
    if (coefficients_.size() != partition_.players() || offsets_.size() != partition_.players()) {
      throw InvalidArgument("quadratic game needs one (B_i, b_i) pair per player");
    }
    for (std::size_t i = 0; i < coefficients_.size(); ++i) {
      const Matrix& b = coefficients_[i];
      if (b.rows() != d || b.cols() != d) throw InvalidArgument("B_i must be d x d");
      if (offsets_[i].size() != d) throw InvalidArgument("b_i must have length d");
      if (!b.allFinite() || !offsets_[i].allFinite()) {
        throw InvalidArgument("quadratic coefficients must be finite");
      }
      const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
      if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InvalidArgument("B_" + std::to_string(i) + " is not symmetric");
      }
    }
    hessian_ = Matrix(d, d);
    for (std::size_t i = 0; i < partition_.players(); ++i) {
      hessian_.middleRows(partition_.offset(i), partition_.size(i)) =
          coefficients_[i].middleRows(partition_.offset(i), partition_.size(i));
    }
  }

  // The unique quadratic game with one scalar player per coordinate, zero
  // offsets, and game Hessian exactly h.
  static QuadraticGame from_hessian(const Matrix& h, std::string name = "from_hessian") {
    if (h.rows() != h.cols()) throw InvalidArgument("Hessian must be square");
    const Index d = h.rows();
    std::vector<Matrix> bs;
    bs.reserve(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
      Matrix b = Matrix::Zero(d, d);
      b.row(i) = h.row(i);
      b.col(i) = h.row(i).transpose();
      bs.push_back(std::move(b));
    }
    return QuadraticGame(PlayerPartition::scalar_players(static_cast<std::size_t>(d)),
                         std::move(bs), std::vector<Vector>(d, Vector::Zero(d)),
                         std::move(name));
  }

  const PlayerPartition& partition() const { return partition_; }
  Index dim() const { return partition_.dim(); }
  std::size_t players() const { return partition_.players(); }
  const std::string& name() const { return name_; }
  const Matrix& coefficient(std::size_t i) const { return coefficients_.at(i); }
  const Vector& offset(std::size_t i) const { return offsets_.at(i); }

  // Constant game Hessian.
  const Matrix& hessian() const { return hessian_; }

  bool has_zero_offsets() const {
    for (const auto& b : offsets_) {
      if (!b.isZero(0.0)) return false;
    }
    return true;
  }

  double loss(std::size_t i, const Vector& w) const {
    return 0.5 * w.dot(coefficients_.at(i) * w) + offsets_.at(i).dot(w);
  }

  Vector grad(std::size_t i, const Vector& w) const {
    const Index off = partition_.offset(i);
    const Index n = partition_.size(i);
    return coefficients_[i].middleRows(off, n) * w + offsets_[i].segment(off, n);
  }

  // Simultaneous gradient in closed form: H w + (stacked player offsets).
  Vector field(const Vector& w) const {
    Vector xi = hessian_ * w;
    for (std::size_t i = 0; i < players(); ++i) {
      partition_.block(xi, i) += partition_.block(offsets_[i], i);
    }
    return xi;
  }

  Game game() const {
    auto self = std::make_shared<const QuadraticGame>(*this);
    std::vector<Game::Player> players;
    players.reserve(this->players());
    for (std::size_t i = 0; i < this->players(); ++i) {
      players.push_back({[self, i](const Vector& w) { return self->loss(i, w); },
                         [self, i](const Vector& w) { return self->grad(i, w); }});
    }
    Game g(partition_, std::move(players),
           Game::HessianFn([self](const Vector&) { return self->hessian(); }), name_);
    g.quadratic_ = std::move(self);
    return g;
  }

 private:
  PlayerPartition partition_;
  std::vector<Matrix> coefficients_;
  std::vector<Vector> offsets_;
  std::string name_;
  Matrix hessian_;
};

// Entry i is loss_i(w). Non-finite entries signal overflow; callers treat
// them as divergence.
inline Vector loss_vector(const Game& game, const Vector& w) {
  game.partition().check_point(w);
  Vector out(static_cast<Index>(game.players()));
  for (std::size_t i = 0; i < game.players(); ++i) out[static_cast<Index>(i)] = game.loss(i, w);
  return out;
}

}  // namespace sga

#endif  // SGA_GAME_HPP_
