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


#ifndef SGA_CATALOG_HPP_
#define SGA_CATALOG_HPP_

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sga/game.hpp"

namespace sga {

// Named catalog parameters. Scalars are stored as 1x1 matrices.
using GameParams = std::map<std::string, Matrix>;

inline Matrix scalar_param(double v) { return Matrix::Constant(1, 1, v); }

struct ParamInfo {
  std::string name;
  Matrix default_value;
  std::string doc;
};

struct CatalogEntry {
  std::string id;
  std::string description;
  std::vector<ParamInfo> params;
  bool zero_sum = false;  // holds for every admissible parameter choice
  std::function<QuadraticGame(const GameParams&)> build;
};

namespace detail {

inline double get_scalar(const GameParams& p, const std::string& key) {
  const Matrix& m = p.at(key);
  if (m.size() != 1) throw InvalidArgument("parameter '" + key + "' must be a scalar");
  return m(0, 0);
}

inline Index get_positive_int(const GameParams& p, const std::string& key) {
  const double v = get_scalar(p, key);
  if (!(v >= 1.0) || v != static_cast<double>(static_cast<Index>(v)) || v > 4096) {
    throw InvalidArgument("parameter '" + key + "' must be a positive integer");
  }
  return static_cast<Index>(v);
}

inline std::vector<Vector> zero_offsets(std::size_t n, Index d) {
  return std::vector<Vector>(n, Vector::Zero(d));
}

// loss_1 = x^T P y, loss_2 = x^T Q y with x in R^rows(P), y in R^cols(P).
inline QuadraticGame bimatrix(const Matrix& p, const Matrix& q, std::string name) {
  if (p.rows() != q.rows() || p.cols() != q.cols()) {
    throw InvalidArgument("bimatrix payoffs must have the same shape");
  }
  const Index m = p.rows();
  const Index n = p.cols();
  const Index d = m + n;
  auto coupling = [&](const Matrix& c) {
    Matrix b = Matrix::Zero(d, d);
    b.topRightCorner(m, n) = c;
    b.bottomLeftCorner(n, m) = c.transpose();
    return b;
  };
  return QuadraticGame(PlayerPartition({m, n}), {coupling(p), coupling(q)}, zero_offsets(2, d),
                       std::move(name));
}

inline Matrix sym2(double a, double b, double c) {
  Matrix m(2, 2);
  m << a, b, b, c;
  return m;
}

inline QuadraticGame example1(const GameParams& p) {
  const Matrix& a = p.at("A");
  return bimatrix(a, -a, "example1");
}

inline QuadraticGame example2(const GameParams& p) {
  return bimatrix(p.at("P"), p.at("Q"), "example2");
}

inline QuadraticGame example3(const GameParams& p) {
  const double a = get_scalar(p, "a");
  const double b = get_scalar(p, "b");
  // loss_1 = x (y - b), loss_2 = -(x - a) y
  Vector off1(2), off2(2);
  off1 << -b, 0.0;
  off2 << 0.0, a;
  return QuadraticGame(PlayerPartition({1, 1}), {sym2(0, 1, 0), sym2(0, -1, 0)}, {off1, off2},
                       "example3");
}

inline QuadraticGame example4(const GameParams&) {
  return QuadraticGame(PlayerPartition({1, 1}), {sym2(2, 0, 2), sym2(-2, 0, -2)},
                       zero_offsets(2, 2), "example4");
}

inline QuadraticGame example5(const GameParams& p) {
  const double kappa = get_scalar(p, "kappa");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InvalidArgument("kappa must be positive");
  const Matrix b = -kappa * Matrix::Identity(2, 2);
  return QuadraticGame(PlayerPartition({1, 1}), {b, b}, zero_offsets(2, 2), "example5");
}

inline QuadraticGame example6(const GameParams& p) {
  const double eps = get_scalar(p, "epsilon");
  if (!std::isfinite(eps)) throw InvalidArgument("epsilon must be finite");
  // f = -eps/2 x^2 - x y, g = -eps/2 y^2 + x y
  return QuadraticGame(PlayerPartition({1, 1}), {sym2(-eps, -1, 0), sym2(0, 1, -eps)},
                       zero_offsets(2, 2), "example6");
}

inline QuadraticGame example7(const GameParams&) {
  return QuadraticGame(PlayerPartition({1, 1}), {sym2(1, 2, 0), sym2(0, 2, 1)},
                       zero_offsets(2, 2), "example7");
}

inline QuadraticGame weak_attractor(const GameParams&) {
  return QuadraticGame(PlayerPartition({1, 1}), {sym2(1, 10, 0), sym2(0, -10, 1)},
                       zero_offsets(2, 2), "fig3_weak_attractor");
}

inline QuadraticGame bilinear(const GameParams& p) {
  const Index n = get_positive_int(p, "dim");
  const Matrix eye = Matrix::Identity(n, n);
  return bimatrix(eye, -eye, "fig4_bilinear");
}

// loss_i = eps/2 w_i^2 + sum_{j != i} s_ij w_i w_j, s_ij = +1 above the
// diagonal and -1 below it.
inline QuadraticGame four_player(const GameParams& p) {
  const double eps = get_scalar(p, "epsilon");
  if (!std::isfinite(eps)) throw InvalidArgument("epsilon must be finite");
  constexpr Index n = 4;
  std::vector<Matrix> bs;
  for (Index i = 0; i < n; ++i) {
    Matrix b = Matrix::Zero(n, n);
    b(i, i) = eps;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      b(i, j) = b(j, i) = j > i ? 1.0 : -1.0;
    }
    bs.push_back(std::move(b));
  }
  return QuadraticGame(PlayerPartition::scalar_players(n), std::move(bs), zero_offsets(n, n),
                       "fig7_four_player");
}

}  // namespace detail

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    const Matrix eye2 = Matrix::Identity(2, 2);
    return std::vector<CatalogEntry>{
        {"example1", "zero-sum bimatrix game l1 = x^T A y, l2 = -x^T A y",
         {{"A", eye2, "payoff matrix (rows: x, cols: y)"}}, true, detail::example1},
        {"example2", "bimatrix game l1 = x^T P y, l2 = x^T Q y",
         {{"P", scalar_param(1), "payoff of player 1"}, {"Q", scalar_param(1), "payoff of player 2"}},
         false, detail::example2},
        {"example3", "Hamiltonian, not zero-sum: l1 = x(y - b), l2 = -(x - a)y",
         {{"a", scalar_param(0), "offset a"}, {"b", scalar_param(0), "offset b"}}, false,
         detail::example3},
        {"example4", "zero-sum, not Hamiltonian: l1 = x^2 + y^2, l2 = -(x^2 + y^2)", {}, true,
         detail::example4},
        {"example5", "potential game l1 = l2 = -kappa/2 (x^2 + y^2)",
         {{"kappa", scalar_param(10), "curvature, > 0"}}, false, detail::example5},
        {"example6", "weak repellor with strong rotation: l1 = -eps/2 x^2 - xy, l2 = -eps/2 y^2 + xy",
         {{"epsilon", scalar_param(0.1), "repellor strength"}}, false, detail::example6},
        {"example7", "local Nash that is not stable: l1 = x^2/2 + 2xy, l2 = y^2/2 + 2xy", {}, false,
         detail::example7},
        {"fig3_weak_attractor", "l1 = x^2/2 + 10xy, l2 = y^2/2 - 10xy", {}, false,
         detail::weak_attractor},
        {"fig4_bilinear", "zero-sum bilinear game l1/2 = +-w1^T w2",
         {{"dim", scalar_param(1), "parameters per player"}}, true, detail::bilinear},
        {"fig7_four_player", "four scalar players, S = eps I, A strictly upper +1",
         {{"epsilon", scalar_param(0.01), "diagonal strength"}}, false, detail::four_player},
    };
  }();
  return entries;
}

inline const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog()) {
    if (e.id == id) return e;
  }
  throw InvalidArgument("unknown game '" + id + "'");
}

// Fills in defaults and rejects parameters the game does not take.
inline GameParams resolve_params(const CatalogEntry& entry, const GameParams& params) {
  GameParams out;
  for (const auto& info : entry.params) out[info.name] = info.default_value;
  for (const auto& [key, value] : params) {
    if (!out.contains(key)) {
      throw InvalidArgument("game '" + entry.id + "' has no parameter '" + key + "'");
    }
    if (value.size() == 0 || !value.allFinite()) {
      throw InvalidArgument("parameter '" + key + "' must be finite and nonempty");
    }
    out[key] = value;
  }
  return out;
}

inline QuadraticGame catalog_game(const std::string& id, const GameParams& params = {}) {
  const CatalogEntry& entry = catalog_entry(id);
  return entry.build(resolve_params(entry, params));
}

// Text form of a parameter value: "0.1", or "1,0;0,1" with ';' between rows.
inline std::string format_param(const Matrix& m) {
  std::ostringstream os;
  for (Index r = 0; r < m.rows(); ++r) {
    if (r) os << ';';
    for (Index c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << format_double(m(r, c));
    }
  }
  return os.str();
}

// A catalog game reference as carried in sweep configs.
struct GameSpec {
  std::string id;
  GameParams params;

  // Stable label used in result files: "id" or "id[k=v;...]". Only
  // explicitly given parameters appear.
  std::string label() const {
    if (params.empty()) return id;
    std::string s = id + "[";
    bool first = true;
    for (const auto& [k, v] : params) {
      if (!first) s += ' ';
      first = false;
      s += k + "=" + format_param(v);
    }
    return s + "]";
  }

  QuadraticGame build() const { return catalog_game(id, params); }
};

}  // namespace sga

#endif  // SGA_CATALOG_HPP_
