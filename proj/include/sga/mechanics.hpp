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


#ifndef SGA_MECHANICS_HPP_
#define SGA_MECHANICS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "sga/differentiation.hpp"

namespace sga {

// H = S + A with S symmetric and A antisymmetric, plus the spectrum of S.
struct Decomposition {
  Matrix H;
  Matrix S;
  Matrix A;
  std::vector<double> s_eigenvalues;  // descending
  double additive_condition_number = 0.0;

  double sigma_max() const { return s_eigenvalues.front(); }
  double sigma_min() const { return s_eigenvalues.back(); }
};

inline Decomposition helmholtz_split(const Matrix& h) {
  if (h.rows() != h.cols()) throw InvalidArgument("Hessian must be square");
  if (h.size() == 0) throw InvalidArgument("Hessian must be nonempty");
  if (!h.allFinite()) throw InvalidArgument("Hessian must be finite");
  const Index d = h.rows();
  Decomposition out{h, Matrix(d, d), Matrix(d, d), {}, 0.0};
  // Entry-wise so that S(i,j) == S(j,i) and A(i,j) == -A(j,i) hold exactly.
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      out.S(i, j) = 0.5 * (h(i, j) + h(j, i));
      out.A(i, j) = 0.5 * (h(i, j) - h(j, i));
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(out.S, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  const Vector& ev = solver.eigenvalues();  // ascending
  out.s_eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::reverse(out.s_eigenvalues.begin(), out.s_eigenvalues.end());
  out.additive_condition_number = std::max(0.0, out.sigma_max() - out.sigma_min());
  return out;
}

inline Decomposition decompose(const Game& game, const Vector& w,
                               const DifferentiationConfig& cfg = {}) {
  return helmholtz_split(full_hessian(game, w, cfg));
}

enum class GameKind { Potential, Hamiltonian, General };

inline const char* to_string(GameKind k) {
  switch (k) {
    case GameKind::Potential: return "potential";
    case GameKind::Hamiltonian: return "hamiltonian";
    case GameKind::General: return "general";
  }
  return "?";
}

struct GameClass {
  GameKind kind = GameKind::General;
  double max_antisymmetric_norm = 0.0;  // max |A_ij| over the samples
  double max_symmetric_norm = 0.0;      // max |S_ij| over the samples
  double tolerance = 0.0;
};

// Potential when A vanishes at every sample, Hamiltonian when S does. A
// game whose Hessian vanishes identically is reported as Potential.
// A non-positive tol selects the default 1e-9 * max |H_ij| over the samples.
inline GameClass classify_game(const Game& game, const std::vector<Vector>& sample_points,
                               double tol = 0.0, const DifferentiationConfig& cfg = {}) {
  if (sample_points.empty()) throw InvalidArgument("classify_game needs a sample point");
  GameClass out;
  double max_h = 0.0;
  for (const auto& w : sample_points) {
    const Decomposition dec = decompose(game, w, cfg);
    max_h = std::max(max_h, dec.H.cwiseAbs().maxCoeff());
    out.max_antisymmetric_norm = std::max(out.max_antisymmetric_norm, dec.A.cwiseAbs().maxCoeff());
    out.max_symmetric_norm = std::max(out.max_symmetric_norm, dec.S.cwiseAbs().maxCoeff());
  }
  out.tolerance = tol > 0.0 ? tol : 1e-9 * max_h;
  if (out.max_antisymmetric_norm <= out.tolerance) {
    out.kind = GameKind::Potential;
  } else if (out.max_symmetric_norm <= out.tolerance) {
    out.kind = GameKind::Hamiltonian;
  } else {
    out.kind = GameKind::General;
  }
  return out;
}

// <xi, grad H> = xi^T S xi. Nonnegative near S >= 0, negative near S < 0.
inline double stability_probe(const Game& game, const Vector& w,
                              const DifferentiationConfig& cfg = {}) {
  const Vector xi = simultaneous_gradient(game, w).xi;
  return xi.dot(thvp(game, w, xi, cfg));
}

enum class Stability { Stable, Unstable, Indefinite };

inline const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Indefinite: return "indefinite";
  }
  return "?";
}

// Eigenvalues with |sigma| <= eigen_zero_tol(...) count as zero.
inline double eigen_zero_tol(const Decomposition& dec) {
  return 1e-9 * std::max(1.0, dec.additive_condition_number);
}

inline Stability classify_spectrum(const Decomposition& dec) {
  const double tol = eigen_zero_tol(dec);
  if (dec.sigma_min() >= -tol) return Stability::Stable;
  if (dec.sigma_max() < -tol) return Stability::Unstable;
  return Stability::Indefinite;
}

struct FixedPointReport {
  Point w;
  double xi_norm = 0.0;
  Stability stability = Stability::Indefinite;
  bool is_local_nash = false;
  double probe_value = 0.0;
  std::vector<double> s_eigenvalues;  // at w
};

class NotAFixedPoint : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct FixedPointOptions {
  double fixed_point_tol = 1e-8;  // on ||xi(w)||
  double neighborhood_radius = 1e-3;
  // Probe offset: xi^T S xi is evaluated at w + probe_radius * u for a fixed
  // unit vector u, since it vanishes at the fixed point itself.
  double probe_radius = 1e-3;
};

// Stability of S around a zero of xi, and the second-order local Nash test
// (every per-player diagonal block of S is PSD). For quadratic games S is
// constant so only w is inspected; otherwise w and 8 points at the
// neighborhood radius must agree.
inline FixedPointReport classify_fixed_point(const Game& game, const Vector& w,
                                             const FixedPointOptions& opts = {},
                                             const DifferentiationConfig& cfg = {}) {
  const FieldEvaluation f = simultaneous_gradient(game, w);
  const double xi_norm = std::sqrt(f.norm_sq);
  if (xi_norm > opts.fixed_point_tol) {
    throw NotAFixedPoint("not a fixed point: ||xi|| = " + std::to_string(xi_norm));
  }
  const Index d = game.dim();
  FixedPointReport out;
  out.w = w;
  out.xi_norm = xi_norm;

  const Decomposition at_w = decompose(game, w, cfg);
  out.s_eigenvalues = at_w.s_eigenvalues;
  out.stability = classify_spectrum(at_w);

  if (game.quadratic() == nullptr && out.stability != Stability::Indefinite) {
    // Eight fixed unit directions, u_k(j) = cos(k pi/4 + 1.3 j).
    std::vector<Vector> offsets;
    for (int k = 0; k < 8; ++k) {
      Vector u(d);
      for (Index j = 0; j < d; ++j) u[j] = std::cos(k * 0.25 * M_PI + 1.3 * static_cast<double>(j));
      offsets.push_back(u.normalized());
    }
    for (const auto& u : offsets) {
      const Stability s = classify_spectrum(decompose(game, w + opts.neighborhood_radius * u, cfg));
      if (s != out.stability) {
        out.stability = Stability::Indefinite;
        break;
      }
    }
  }

  const PlayerPartition& part = game.partition();
  out.is_local_nash = true;
  for (std::size_t i = 0; i < part.players(); ++i) {
    const Index off = part.offset(i);
    const Index n = part.size(i);
    const Matrix block = at_w.S.block(off, off, n, n);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(block, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -eigen_zero_tol(at_w)) {
      out.is_local_nash = false;
      break;
    }
  }

  out.probe_value = stability_probe(game, w + opts.probe_radius * Vector::Ones(d).normalized(), cfg);
  return out;
}

// sign((1/d) <xi, grad H> <A^T xi, grad H> + epsilon), with sign(0) = +1.
inline int alignment_sign(const Vector& xi, const Vector& at_xi, const Vector& grad_h,
                          double epsilon) {
  if (xi.size() != at_xi.size() || xi.size() != grad_h.size() || xi.size() == 0) {
    throw InvalidArgument("alignment vectors must share a nonzero length");
  }
  if (epsilon < 0.0) throw InvalidArgument("epsilon must be nonnegative");
  const double d = static_cast<double>(xi.size());
  const double score = xi.dot(grad_h) * at_xi.dot(grad_h) / d + epsilon;
  return score >= 0.0 ? 1 : -1;
}

// d/dlambda cos^2 theta(u + lambda v, w) at lambda = 0.
inline double infinitesimal_alignment(const Vector& u, const Vector& v, const Vector& w) {
  if (u.size() != v.size() || u.size() != w.size()) {
    throw InvalidArgument("alignment vectors must share a length");
  }
  const double uu = u.squaredNorm();
  const double ww = w.squaredNorm();
  if (uu == 0.0) throw InvalidArgument("infinitesimal_alignment: u is zero");
  if (ww == 0.0) throw InvalidArgument("infinitesimal_alignment: w is zero");
  const double uw = u.dot(w);
  return 2.0 * uw * (v.dot(w) * uu - uw * u.dot(v)) / (uu * uu * ww);
}

}  // namespace sga

#endif  // SGA_MECHANICS_HPP_
